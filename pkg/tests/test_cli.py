import csv
import io
import math
import subprocess
import sys

import pytest

from a2gsim.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text, delimiter=","):
    return list(csv.DictReader(io.StringIO(text), delimiter=delimiter))


def by_height(records):
    out = {}
    for r in records:
        out.setdefault(float(r["height_m"]), []).append(r)
    return out


def test_sweep_vv_four_traces_peak_near_h(capsys):
    code, out, _ = run(["sweep", "--config", "VV", "--heights", "10,20,30,50", "--gamma", "2",
                        "--receiver-height", "0", "--step", "0.5"], capsys)
    assert code == 0
    traces = by_height(rows(out))
    assert sorted(traces) == [10.0, 20.0, 30.0, 50.0]
    for h, recs in traces.items():
        peak = max((r for r in recs if r["rss_dbm"] != "-inf"), key=lambda r: float(r["rss_dbm"]))
        assert float(peak["distance_m"]) == pytest.approx(h, abs=0.5)
        assert all(r["rss_norm_db"] == "" for r in recs)


def test_sweep_hh_strictly_decreasing(capsys):
    code, out, _ = run(["sweep", "--config", "HH", "--heights", "10"], capsys)
    assert code == 0
    values = [float(r["rss_dbm"]) for r in rows(out)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_sweep_normalized_column(capsys):
    code, out, _ = run(["sweep", "--heights", "20", "--normalized", "--step", "1"], capsys)
    norm = [float(r["rss_norm_db"]) for r in rows(out)]
    assert max(norm) == 0.0
    assert norm[0] == -math.inf


def test_sweep_tsv_and_output_file(tmp_path, capsys):
    dest = tmp_path / "s.tsv"
    code, out, _ = run(["sweep", "--heights", "10", "--format", "tsv", "--output", str(dest)],
                       capsys)
    assert code == 0 and out == ""
    assert dest.read_text().startswith("distance_m\trss_dbm\trss_norm_db")


def test_sweep_floor(capsys):
    code, out, _ = run(["sweep", "--config", "HH", "--heights", "10", "--floor", "-100"], capsys)
    values = [r["rss_dbm"] for r in rows(out)]
    assert "-inf" in values
    assert all(v == "-inf" or float(v) > -100 for v in values)


def test_sweep_vhvh_tabulated_is_unsupported(doughnut_file, capsys):
    code, _, err = run(["sweep", "--config", "VHVH", "--pattern", f"tabulated:{doughnut_file}"],
                       capsys)
    assert code == 1
    assert "VHVH" in err and "analytic" in err


def test_sweep_tabulated_pattern(doughnut_file, capsys):
    code, out, _ = run(["sweep", "--heights", "20", "--pattern", f"tabulated:{doughnut_file}",
                        "--step", "5"], capsys)
    assert code == 0
    assert len(rows(out)) == 41


def test_sweep_missing_pattern_file(tmp_path, capsys):
    missing = tmp_path / "nope.csv"
    code, _, err = run(["sweep", "--pattern", f"tabulated:{missing}"], capsys)
    assert code == 1 and "nope.csv" in err


@pytest.mark.parametrize(
    "argv",
    [["sweep", "--config", "XX"], ["sweep", "--step", "0"], ["sweep", "--heights", "a,b"],
     ["sweep", "--range", "5,1"], ["sweep", "--pattern", "bogus"], ["critical", "--gamma", "0"],
     ["critical", "--config", "VHVH"], ["compare", "--height", "10"], []],
)
def test_bad_flags_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_height_below_receiver_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--heights", "1"])
    assert exc.value.code == 2


def test_critical_table(capsys):
    code, out, _ = run(["critical", "--receiver-height", "0"], capsys)
    assert code == 0
    recs = rows(out)
    assert [float(r["height_m"]) for r in recs] == [10.0, 20.0, 30.0, 50.0]
    for r in recs:
        h = float(r["height_m"])
        assert float(r["l_analytic_m"]) == h
        assert float(r["l_numeric_m"]) == pytest.approx(h, abs=1e-5)


def test_critical_uses_delta_h_by_default(capsys):
    code, out, _ = run(["critical", "--heights", "10"], capsys)
    (r,) = rows(out)
    assert float(r["delta_h_m"]) == pytest.approx(8.73)
    assert float(r["l_numeric_m"]) == pytest.approx(8.73, abs=1e-5)


def test_critical_vh(capsys):
    code, out, _ = run(["critical", "--config", "VH", "--height", "10", "--receiver-height", "0"],
                       capsys)
    (r,) = rows(out)
    assert r["l_analytic_m"] == ""
    assert float(r["l_numeric_m"]) == pytest.approx(5.77, abs=0.01)


def test_select_table(capsys):
    code, out, _ = run(["select", "--alphas", "0,30,45,90"], capsys)
    recs = rows(out)
    assert [r["selected"] for r in recs] == ["V", "V", "V", "H"]
    assert float(recs[1]["selected_gain"]) == pytest.approx(1.1830, abs=1e-4)


def test_select_default_grid(capsys):
    code, out, _ = run(["select", "--alpha-step", "10"], capsys)
    assert [float(r["alpha_deg"]) for r in rows(out)] == [float(a) for a in range(0, 91, 10)]


def test_select_out_of_range_exit_1(capsys):
    code, _, err = run(["select", "--alphas", "95"], capsys)
    assert code == 1 and "95" in err


# -- compare --------------------------------------------------------------------


def _report(text):
    return dict(line.split(None, 1) if len(line.split(None, 1)) == 2 else (line.strip(), "")
                for line in text.splitlines())


def test_compare_against_own_sweep(tmp_path, capsys):
    sweep = tmp_path / "sweep.csv"
    run(["sweep", "--heights", "10,20", "--output", str(sweep)], capsys)
    code, out, _ = run(["compare", "--height", "20", "--trace", str(sweep)], capsys)
    assert code == 0
    rep = _report(out)
    assert float(rep["rmse_db"]) == 0.0
    assert float(rep["peak_distance_error_m"]) == 0.0


def test_compare_shifted_copy_normalized(tmp_path, capsys):
    sweep = tmp_path / "sweep.csv"
    run(["sweep", "--heights", "30", "--output", str(sweep)], capsys)
    shifted = tmp_path / "shifted.csv"
    with shifted.open("w") as fh:
        fh.write("distance_m,rss_dbm\n")
        for r in rows(sweep.read_text()):
            v = r["rss_dbm"]
            fh.write(f"{r['distance_m']},{v if v == '-inf' else repr(float(v) - 3.0)}\n")
    code, out, _ = run(["compare", "--height", "30", "--trace", str(shifted), "--normalized",
                        "--format", "csv"], capsys)
    assert code == 0
    (rep,) = rows(out)
    assert float(rep["rmse_db"]) == pytest.approx(0.0, abs=1e-12)
    code, out, _ = run(["compare", "--height", "30", "--trace", str(shifted), "--format", "csv"],
                       capsys)
    (rep,) = rows(out)
    assert float(rep["rmse_db"]) == pytest.approx(3.0)


def test_compare_missing_file(tmp_path, capsys):
    missing = tmp_path / "absent.csv"
    code, _, err = run(["compare", "--height", "20", "--trace", str(missing)], capsys)
    assert code == 1
    assert "absent.csv" in err


def test_compare_parse_error_names_line(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("distance_m,rss_dbm\n1,-70\n2,oops\n")
    code, _, err = run(["compare", "--height", "20", "--trace", str(bad)], capsys)
    assert code == 1 and "bad.csv:3" in err


# -- patterns --------------------------------------------------------------------


def test_patterns_generate_and_check(tmp_path, capsys):
    dest = tmp_path / "d.csv"
    assert main(["patterns", "--step", "1", "--output", str(dest)]) == 0
    text = dest.read_text().splitlines()
    assert text[1] == "angle_deg,gain_db"
    assert len(text) == 2 + 181
    capsys.readouterr()
    code, out, _ = run(["patterns", "--check", str(dest)], capsys)
    assert "samples         181" in out
    assert "offset_db       0.0" in out


def test_patterns_stdout(capsys):
    code, out, _ = run(["patterns", "--step", "30"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("#")
    recs = rows("\n".join(lines[1:]))
    assert [float(r["angle_deg"]) for r in recs] == [-90.0, -60.0, -30.0, 0.0, 30.0, 60.0, 90.0]
    gains = {float(r["angle_deg"]): r["gain_db"] for r in recs}
    assert gains[-90.0] == gains[90.0] == "-inf"
    assert gains[0.0] == "0.0"
    assert float(gains[60.0]) == pytest.approx(10 * math.log10(0.5))


# -- process level -----------------------------------------------------------------


def test_module_entry_point_and_determinism(tmp_path):
    cmd = [sys.executable, "-m", "a2gsim", "sweep", "--config", "VHVH", "--heights", "10,50",
           "--normalized", "--step", "2"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"distance_m,")


def test_process_exit_codes(tmp_path):
    bad = subprocess.run([sys.executable, "-m", "a2gsim", "critical", "--gamma", "0"],
                         capture_output=True)
    assert bad.returncode == 2
    missing = subprocess.run([sys.executable, "-m", "a2gsim", "compare", "--height", "10",
                              "--trace", str(tmp_path / "x.csv")], capture_output=True)
    assert missing.returncode == 1
