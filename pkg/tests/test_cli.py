import json
import math

import pytest

from bcvlab.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "out"
    rc = main(list(argv) + ["--out-dir", str(out)])
    return rc, out


def read_json(path):
    return json.loads(path.read_text())


# ---------------------------------------------------------------------------
# exit codes


def test_usage_error_exit_code(tmp_path, capsys):
    assert main(["spacings"]) == 2
    assert main(["no-such-command"]) == 2


def test_domain_error_exit_code(tmp_path):
    rc, _ = run(tmp_path, "spacings", "--lambda", "1.5", "--n", "4")
    assert rc == 4


def test_resource_cap_exit_code(tmp_path):
    rc, _ = run(tmp_path, "spacings", "--lambda", "0.6", "--n", "40")
    assert rc == 3


# ---------------------------------------------------------------------------
# manifests and determinism


def test_manifest_lists_every_output(tmp_path):
    rc, out = run(tmp_path, "spacings", "--lambda", "0.5", "--n", "10",
                  "--ell", "1", "--rescale", "none")
    assert rc == 0
    manifest = read_json(out / "run_manifest.json")
    on_disk = {p.name for p in out.iterdir()}
    assert on_disk == set(manifest["outputs"]) | {"run_manifest.json"}
    assert manifest["subcommand"] == "spacings"
    assert "--lambda" in manifest["argv"]
    assert manifest["wall_time_s"] >= 0


def test_rerun_is_byte_identical_except_wall_time(tmp_path):
    args = ("paircorr", "--lambda", "0.61", "--n", "10", "--s-grid", "0.5,1,2,4")
    rc1, out1 = run(tmp_path / "a", *args)
    rc2, out2 = run(tmp_path / "b", *args)
    assert rc1 == rc2 == 0
    for name in read_json(out1 / "run_manifest.json")["outputs"]:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    m1 = read_json(out1 / "run_manifest.json")
    m2 = read_json(out2 / "run_manifest.json")
    for m in (m1, m2):
        m.pop("wall_time_s")
        m["argv"] = m["argv"][:-2]  # drop the differing --out-dir pair
    assert m1 == m2


def test_plot_script_references_only_manifest_files(tmp_path):
    rc, out = run(tmp_path, "spacings", "--lambda", "0.6429", "--n", "12",
                  "--ell", "1", "--rescale", "sqrt-half")
    assert rc == 0
    manifest = read_json(out / "run_manifest.json")
    script = (out / "spacings_plot.gp").read_text()
    referenced = {tok.strip("'") for tok in script.split() if tok.startswith("'")
                  and tok.endswith(".csv'")}
    assert referenced <= set(manifest["outputs"])
    assert referenced  # the histogram CSV is actually plotted


# ---------------------------------------------------------------------------
# subcommand behavior


def test_spacings_lattice_single_bin(tmp_path):
    rc, out = run(tmp_path, "spacings", "--lambda", "0.5", "--n", "10",
                  "--ell", "1", "--rescale", "none")
    assert rc == 0
    rows = (out / "spacings_histogram.csv").read_text().splitlines()[1:]
    counts = [int(r.split(",")[2]) for r in rows]
    assert sum(1 for c in counts if c > 0) == 1
    assert counts[10] == (1 << 10) - 1
    gof = read_json(out / "spacings_gof.json")
    assert gof["ks"] == pytest.approx(math.exp(-1.0), abs=1e-12)
    assert gof["overflow"] == 0


def test_spacings_empirical_rescale_mode(tmp_path):
    rc, out = run(tmp_path, "spacings", "--lambda", "0.6429", "--n", "12",
                  "--ell", "2", "--rescale", "empirical:10")
    assert rc == 0
    gof = read_json(out / "spacings_gof.json")
    assert gof["rescale"] == "empirical:10"
    assert gof["sample_count"] == (1 << 12) - 2


def test_spacings_bad_rescale_flag(tmp_path):
    rc, _ = run(tmp_path, "spacings", "--lambda", "0.6", "--n", "8",
                "--rescale", "fourier")
    assert rc == 4


def test_paircorr_lattice_value(tmp_path):
    rc, out = run(tmp_path, "paircorr", "--lambda", "0.5", "--n", "4",
                  "--s-grid", "2.5")
    assert rc == 0
    assert (out / "paircorr_curve.csv").read_text().splitlines()[1] == "2.5,3.625"


def test_paircorr_zero_s_warns_toward_exact(tmp_path, capsys):
    rc, out = run(tmp_path, "paircorr", "--lambda", "0.618034", "--n", "10",
                  "--s-grid", "0")
    assert rc == 0
    assert "exact" in capsys.readouterr().err


def test_paircorr_disjoint_interval_errors(tmp_path):
    rc, _ = run(tmp_path, "paircorr", "--lambda", "0.9", "--n", "6",
                "--s-grid", "1", "--interval", "0.6,0.7")
    assert rc == 4


def test_exact_golden_growth_comparison(tmp_path):
    rc, out = run(tmp_path, "exact", "--minpoly", "x^2+x-1", "--n", "12")
    assert rc == 0
    report = read_json(out / "exact_report.json")
    assert report["distinct"] == 609
    assert report["growth"]["forbidden_block"] == "100"
    assert report["growth"]["word_counts"] == report["growth"]["distinct_counts"]
    # x^2+x-1 pins the parameter 0.618... itself (roots 0.618, -1.618); the
    # Pisot number is its reciprocal, whose polynomial is x^2-x-1.
    assert report["classification"]["verdict"] == "neither"


def test_exact_garsia_no_growth_section(tmp_path):
    rc, out = run(tmp_path, "exact", "--minpoly", "x^2-2", "--n", "12")
    assert rc == 0
    report = read_json(out / "exact_report.json")
    assert report["distinct"] == 4096
    assert report["coincidence_rate"] == 0.0
    assert "growth" not in report
    assert "growth_note" in report
    assert report["classification"]["verdict"] == "garsia"


def test_exact_garsia_cubic_reciprocal(tmp_path):
    rc, out = run(tmp_path, "exact", "--minpoly", "x^3-2x-2", "--n", "10")
    assert rc == 0
    report = read_json(out / "exact_report.json")
    assert report["classification"]["verdict"] == "garsia"
    assert report["classification"]["reciprocal"] == pytest.approx(0.5652, abs=5e-5)


def test_exact_unparsable_polynomial(tmp_path):
    rc, _ = run(tmp_path, "exact", "--minpoly", "x^^2", "--n", "4")
    assert rc == 4


def test_gaps_subcommand_ejk(tmp_path):
    rc, out = run(tmp_path, "gaps", "--lambda", "0.6", "--n", "5", "--primed")
    assert rc == 0
    report = read_json(out / "gaps_report.json")
    assert report["ejk_prediction_match"] is True
    assert report["max_gap"] == pytest.approx(0.6**4, rel=1e-12)


def test_classify_subcommand(tmp_path):
    rc, out = run(tmp_path, "classify", "--poly", "x^2-x-1")
    assert rc == 0
    report = read_json(out / "classify_report.json")
    assert report["verdict"] == "pisot"
    assert report["reciprocal"] == pytest.approx(0.618034, abs=1e-6)


def test_classify_accepts_json_coefficient_list(tmp_path):
    rc, out = run(tmp_path, "classify", "--poly", "[-1, -1, 1]")
    assert rc == 0
    assert read_json(out / "classify_report.json")["verdict"] == "pisot"
    rc, _ = run(tmp_path / "bad", "classify", "--poly", "[1.5, 2]")
    assert rc == 4


def test_greedy_subcommand(tmp_path):
    rc, out = run(tmp_path, "greedy", "--lambda", "0.75", "--k", "5")
    assert rc == 0
    report = read_json(out / "greedy_report.json")
    assert report["polynomial"] == "1 - x - x^5"
    assert report["root"] == pytest.approx(0.754878, abs=1e-6)
    assert report["coefficients"] == [1, 0, 0, 0, 1]


def test_sweep_subcommand_deterministic(tmp_path):
    args = ("sweep", "--interval", "0.51,0.66", "--n", "8", "--s-grid",
            "0.5,1", "--samples", "6", "--quadrature", "montecarlo",
            "--seed", "99")
    rc1, out1 = run(tmp_path / "a", *args)
    rc2, out2 = run(tmp_path / "b", *args)
    assert rc1 == rc2 == 0
    assert (out1 / "sweep_report.json").read_bytes() == \
        (out2 / "sweep_report.json").read_bytes()
    report = read_json(out1 / "sweep_report.json")
    assert report["seed"] == 99
    assert read_json(out1 / "run_manifest.json")["seed"] == 99


def test_workers_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv("BCVLAB_WORKERS", "3")
    from bcvlab.cli import build_parser
    args = build_parser().parse_args(
        ["sweep", "--interval", "0.51,0.6", "--n", "6", "--s-grid", "1",
         "--samples", "2"])
    assert args.workers == 3
