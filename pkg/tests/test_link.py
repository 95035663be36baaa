import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from a2gsim import (
    DomainError,
    LinkBudget,
    LinkGeometry,
    NoMaximumError,
    critical_distance_analytic,
    critical_distance_numeric,
    elevation_angle,
    rss,
    rss_derivative_sign,
    rss_mw,
)
from a2gsim.antenna import HORIZONTAL, VERTICAL, AntennaConfig, Orientation, TabulatedPattern
from a2gsim.link import distance_grid, golden_section_max

import oracles

BUDGET = LinkBudget()
CONFIGS = {"VV": (VERTICAL, VERTICAL), "VH": (HORIZONTAL, VERTICAL), "HH": (HORIZONTAL, HORIZONTAL)}


# -- geometry --------------------------------------------------------------------


@pytest.mark.parametrize(
    "drone, rx, l, expected",
    [(10.0, 0.0, 10.0, 45.0), (10.0, 0.0, 0.0, 90.0), (10.0, 1.27, 100.0, 4.990)],
)
def test_elevation_angle_examples(drone, rx, l, expected):
    assert elevation_angle(LinkGeometry(drone, rx, l)) == pytest.approx(expected, abs=1e-3)


def test_elevation_exactly_90_overhead():
    assert elevation_angle(LinkGeometry(50.0, 1.27, 0.0)) == 90.0


def test_slant_distance():
    g = LinkGeometry(11.27, 1.27, 10.0)
    assert g.delta_h == pytest.approx(10.0)
    assert g.slant_distance == pytest.approx(math.sqrt(200.0))
    assert LinkGeometry(5.0, 0.0, 0.0).slant_distance == 5.0


@pytest.mark.parametrize(
    "kwargs",
    [dict(drone_height=0.0), dict(drone_height=-1.0), dict(drone_height=10.0, receiver_height=-1.0),
     dict(drone_height=10.0, horizontal_distance=-0.1), dict(drone_height=1.0, receiver_height=1.27),
     dict(drone_height=math.inf)],
)
def test_geometry_rejects_invalid(kwargs):
    with pytest.raises(DomainError):
        LinkGeometry(**kwargs)


@pytest.mark.parametrize(
    "kwargs",
    [dict(carrier_frequency=0.0), dict(path_loss_exponent=0.0), dict(path_loss_exponent=-2.0),
     dict(tx_power_dbm=math.nan)],
)
def test_budget_rejects_invalid(kwargs):
    with pytest.raises(DomainError):
        LinkBudget(**kwargs)


def test_budget_defaults():
    b = LinkBudget()
    assert b.path_loss_exponent == 2.0
    assert b.wavelength == pytest.approx(0.074948, abs=1e-6)


# -- RSS ---------------------------------------------------------------------------


def test_rss_isotropic_matches_friis():
    # Elevation 0 is not reachable, so build unit-gain antennas from a flat pattern.
    flat = TabulatedPattern((-180.0, 180.0), (0.0, 0.0))
    iso = AntennaConfig(Orientation.VERTICAL, flat)
    g = LinkGeometry(100.0, 0.0, 0.0)
    expected = oracles.friis_dbm(0.0, 4e9, 100.0)
    assert expected == pytest.approx(-84.49, abs=5e-3)
    assert rss(BUDGET, g, iso, iso) == pytest.approx(expected, abs=1e-9)


def test_rss_vv_overhead_is_below_floor():
    assert rss(BUDGET, LinkGeometry(10.0, 0.0, 0.0), VERTICAL, VERTICAL) == -math.inf


def test_inverse_square_law():
    flat = TabulatedPattern((-180.0, 180.0), (0.0, 0.0))
    iso = AntennaConfig(Orientation.VERTICAL, flat)
    p1 = rss(BUDGET, LinkGeometry(100.0, 0.0, 0.0), iso, iso)
    p2 = rss(BUDGET, LinkGeometry(200.0, 0.0, 0.0), iso, iso)
    assert p1 - p2 == pytest.approx(20 * math.log10(2), abs=1e-9)
    assert p1 - p2 == pytest.approx(6.0206, abs=1e-4)


@pytest.mark.parametrize("config", ["VV", "VH", "HH"])
@pytest.mark.parametrize("dh, l, gamma", [(8.73, 0.5, 2.0), (18.73, 40.0, 2.0), (48.73, 150.0, 3.1)])
def test_rss_matches_geometric_oracle(config, dh, l, gamma):
    budget = LinkBudget(7.0, 4e9, gamma)
    tx, rx = CONFIGS[config]
    got = rss_mw(budget, LinkGeometry(dh, 0.0, l), tx, rx)
    want = oracles.rss_lin_geometric(config, dh, l, gamma, tx_dbm=7.0)
    assert got == pytest.approx(want, rel=1e-12)


@settings(max_examples=200)
@given(st.floats(0.5, 100.0), st.floats(0.0, 300.0), st.sampled_from(["VV", "VH", "HH"]))
def test_rss_symmetric_and_bounded(dh, l, config):
    g = LinkGeometry(dh, 0.0, l)
    tx, rx = CONFIGS[config]
    p = rss_mw(BUDGET, g, tx, rx)
    assert p == rss_mw(BUDGET, g, rx, tx)
    iso = BUDGET.path_gain(g.slant_distance)
    assert 0.0 <= p <= iso * (1 + 1e-15)


def test_rss_rejects_negative_gain():
    from a2gsim.link import rss_from_gain

    with pytest.raises(DomainError):
        rss_from_gain(BUDGET, LinkGeometry(10.0), -0.1)


# -- derivative sign ----------------------------------------------------------


@pytest.mark.parametrize("l, expected", [(5.0, 1), (10.0, 0), (20.0, -1)])
def test_derivative_sign_examples(l, expected):
    assert rss_derivative_sign(BUDGET, LinkGeometry(10.0, 0.0, l)) == expected


def test_derivative_sign_rejects_pole():
    with pytest.raises(DomainError):
        rss_derivative_sign(BUDGET, LinkGeometry(10.0, 0.0, 0.0))


def test_derivative_sign_agrees_with_finite_difference():
    rng = np.random.default_rng(20181016)
    h = 1e-3
    checked = agree = 0
    while checked < 1000:
        dh = rng.uniform(1.0, 100.0)
        gamma = rng.uniform(1.0, 5.0)
        l = rng.uniform(0.01, 300.0)
        lstar = math.sqrt(2 * dh * dh / gamma)
        if abs(l - lstar) <= 10 * h or l <= 2 * h:
            continue
        budget = LinkBudget(0.0, 4e9, gamma)
        f = lambda x: rss(budget, LinkGeometry(dh, 0.0, x), VERTICAL, VERTICAL)
        fd = oracles.central_difference(f, l, h)
        checked += 1
        agree += int(np.sign(fd) == rss_derivative_sign(budget, LinkGeometry(dh, 0.0, l)))
    assert agree / checked >= 0.999


# -- critical distance ----------------------------------------------------------


@pytest.mark.parametrize(
    "dh, gamma, expected", [(10.0, 2.0, 10.0), (50.0, 2.0, 50.0), (10.0, 4.0, math.sqrt(50.0))]
)
def test_critical_distance_analytic(dh, gamma, expected):
    assert critical_distance_analytic(dh, gamma) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("dh, gamma", [(0.0, 2.0), (-1.0, 2.0), (10.0, 0.0)])
def test_critical_distance_analytic_domain(dh, gamma):
    with pytest.raises(DomainError):
        critical_distance_analytic(dh, gamma)


def test_critical_numeric_vv_matches_analytic():
    got = critical_distance_numeric(BUDGET, 20.0, VERTICAL, VERTICAL, (0.1, 200.0), 0.1)
    assert got == pytest.approx(20.0, abs=0.1)
    assert got == pytest.approx(20.0, abs=1e-5)


def test_critical_numeric_vh_matches_brute_force():
    oracle = oracles.brute_force_argmax("VH", 10.0)
    assert oracle == pytest.approx(10 / math.sqrt(3), abs=1e-3)
    got = critical_distance_numeric(BUDGET, 10.0, HORIZONTAL, VERTICAL, (0.1, 200.0), 0.1)
    assert got == pytest.approx(oracle, abs=0.01)
    assert got == pytest.approx(10 / math.sqrt(3), abs=1e-5)


def test_critical_numeric_hh_returns_left_edge():
    got = critical_distance_numeric(BUDGET, 10.0, HORIZONTAL, HORIZONTAL, (0.1, 200.0), 0.1)
    assert got == 0.1


def test_critical_numeric_no_maximum():
    # Only radiates backwards, so zero gain over the whole upper quadrant.
    null = TabulatedPattern((-180.0, -90.0, 90.0), (0.0, -math.inf, -math.inf))
    ant = AntennaConfig(Orientation.VERTICAL, null)
    with pytest.raises(NoMaximumError):
        critical_distance_numeric(BUDGET, 10.0, ant, VERTICAL, (0.0, 50.0), 0.5)


@pytest.mark.parametrize("dh", [10.0, 20.0, 30.0, 50.0])
@pytest.mark.parametrize("gamma", [2.0, 2.7, 4.0])
def test_critical_numeric_vv_property(dh, gamma):
    budget = LinkBudget(0.0, 4e9, gamma)
    got = critical_distance_numeric(budget, dh, VERTICAL, VERTICAL, (0.0, 200.0), 0.1)
    assert abs(got - critical_distance_analytic(dh, gamma)) <= 0.1


def test_golden_section_max_quadratic():
    x = golden_section_max(lambda t: -(t - 1.234567) ** 2, 0.0, 3.0, tol=1e-9)
    assert x == pytest.approx(1.234567, abs=1e-8)


def test_distance_grid_inclusive_and_clean():
    g = distance_grid(0.0, 1.0, 0.1)
    assert len(g) == 11
    assert g[3] == 0.3 and g[-1] == 1.0
    with pytest.raises(DomainError):
        distance_grid(1.0, 1.0, 0.1)
