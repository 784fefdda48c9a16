import io
import json
import math
from contextlib import redirect_stdout

import numpy as np
import pytest

import orthozero as oz
from orthozero.cli import ExperimentConfig, run


def capture(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run(argv)
    return code, buf.getvalue()


def test_mrs_prints_radius():
    code, out = capture(["mrs", "--weight", "freud:1:2", "--n", "8"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,a_n,residual"
    a8 = float(lines[1].split(",")[1])
    assert a8 == pytest.approx(math.sqrt(8.0), rel=1e-10)


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2
    assert "mrs" in capsys.readouterr().err


def test_bad_weight_exits_2():
    code, _ = capture(["mrs", "--weight", "nope:1", "--n", "5"])
    assert code == 2


def test_kac_full_line_summary():
    code, out = capture(["kac", "--weight", "freud:0.5:2", "--n", "40",
                         "--full-line", "--tol", "1e-6"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,density"
    summary = dict(line.split(",") for line in lines[-2:])
    ratio = float(summary["expected_count"]) / 40.0
    assert 0.55 <= ratio <= 0.62
    assert float(summary["error"]) <= 1e-5


def test_kac_monomial_basis():
    code, out = capture(["kac", "--n", "1", "--basis", "monomial",
                         "--full-line", "--tol", "1e-8"])
    assert code == 0
    summary = dict(line.split(",") for line in out.strip().splitlines()[-2:])
    assert float(summary["expected_count"]) == pytest.approx(1.0, abs=1e-6)


def test_kac_scaled_interval():
    code, out = capture(["kac", "--weight", "freud:0.5:2", "--n", "60",
                         "--interval", "-0.5", "0.5", "--scaled"])
    assert code == 0
    val = float(out.strip().splitlines()[-1])
    assert 0.2 <= val <= 0.5
    code, _ = capture(["kac", "--weight", "freud:0.5:2", "--n", "10",
                       "--scaled", "--full-line"])
    assert code == 2


def test_density_table():
    code, out = capture(["density", "--weight", "freud:1:2", "--n", "30",
                         "--points", "5"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "s,sigma_star,limit_density"
    assert len(lines) == 6
    s, sig, mu = map(float, lines[3].split(","))
    # quadratic weight: both columns are the semicircle
    assert sig == pytest.approx(mu, abs=1e-8)


def test_recurrence_table_and_cache(tmp_path):
    cache = tmp_path / "t.npz"
    code, out = capture(["recurrence", "--weight", "freud:0.5:2",
                         "--n-max", "6", "--cache", str(cache)])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "k,a_k,b_k,gamma_k"
    b1 = float(lines[2].split(",")[2])
    assert b1 == pytest.approx(math.sqrt(0.5), rel=1e-12)
    table = oz.load_table(cache)
    assert table.n_max == 6
    assert lines[-1].startswith("# ortho_residual=")


def test_simulate_json_summary():
    code, out = capture(["simulate", "--weight", "freud:0.5:2", "--n", "20",
                         "--trials", "3", "--seed", "1"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "trial,count"
    summary = json.loads(lines[-1])
    assert summary["trials"] == 3
    assert 0 <= summary["mean"] <= 20
    assert "ks_mean" in summary and "complex_fraction_mean" in summary
    assert list(summary) == sorted(summary)


def test_simulate_partition_fractions_sum():
    code, out = capture(["simulate", "--weight", "freud:0.5:2", "--n", "20",
                         "--trials", "3", "--partition=-1,0,1"])
    assert code == 0
    summary = json.loads(out.strip().splitlines()[-1])
    assert len(summary["partition_fractions"]) == 2
    assert sum(summary["partition_fractions"]) <= 1.0


def test_byte_identical_reruns():
    argv = ["kac", "--weight", "freud:0.5:2", "--n", "25", "--interval",
            "-3", "3"]
    _, first = capture(argv)
    _, second = capture(argv)
    assert first == second
    argv = ["simulate", "--weight", "freud:0.5:2", "--n", "15", "--trials",
            "4"]
    _, first = capture(argv)
    _, second = capture(argv)
    assert first == second


def test_output_file(tmp_path):
    path = tmp_path / "out.csv"
    code, out = capture(["mrs", "--weight", "freud:1:2", "--n", "8",
                         "--output", str(path)])
    assert code == 0
    assert out == ""
    assert path.read_text().startswith("n,a_n,residual")


def test_config_file_defaults(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("weight=freud:1:2\ntol=1e-9\n")
    _, direct = capture(["mrs", "--weight", "freud:1:2", "--n", "8"])
    _, via_cfg = capture(["--config", str(cfg), "mrs", "--n", "8"])
    assert via_cfg == direct
    # explicit flag wins over the config value
    _, override = capture(["--config", str(cfg), "mrs", "--weight",
                           "freud:0.5:2", "--n", "8"])
    a8 = float(override.strip().splitlines()[1].split(",")[1])
    assert a8 == pytest.approx(4.0, rel=1e-10)


def test_experiment_config_roundtrip():
    parser_ns = type("NS", (), {})()
    vars(parser_ns).update(subcommand="mrs", weight="freud:1:2", n=[8],
                           tol=1e-10, output=None, config=None, func=None)
    cfg = ExperimentConfig.from_namespace(parser_ns)
    again = ExperimentConfig.parse_canonical(cfg.canonical())
    assert again == cfg
    assert "subcommand=mrs" in cfg.canonical()


def test_verify_subset():
    code, out = capture(["verify", "--only", "7"])
    assert code == 0
    assert out.startswith("PASS criterion 7")
