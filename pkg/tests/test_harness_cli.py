import numpy as np
import pytest

from lrdcp.cli import main
from lrdcp.errors import DomainError, IngestionError
from lrdcp.harness import (
    SimConfig,
    cmd_analyze,
    cmd_simulate,
    local_whittle_H,
    parse_tests,
    preprocess,
    read_series,
    reports_csv,
    simulate_series,
)
from lrdcp.lrd_sim import MarginalSpec, TimeSeries, simulate_fgn


@pytest.fixture
def series_file(tmp_path):
    x = simulate_fgn(150, 0.7, 8).values
    x[90:] += 2.0
    path = tmp_path / "series.csv"
    path.write_text("year,level,other\n" + "".join(f"{1900 + i},{float(v)!r},{i}\n" for i, v in enumerate(x)))
    return path, x


def test_local_whittle_white_noise():
    x = np.random.default_rng(1).standard_normal(10000)
    assert abs(local_whittle_H(x) - 0.5) <= 0.05


def test_local_whittle_fgn():
    x = simulate_fgn(10000, 0.7, 2).values
    assert abs(local_whittle_H(x) - 0.7) <= 0.05


def test_local_whittle_reversal():
    x = simulate_fgn(3000, 0.8, 3).values
    assert abs(local_whittle_H(x) - local_whittle_H(x[::-1])) <= 1e-10


def test_local_whittle_checks():
    with pytest.raises(DomainError):
        local_whittle_H(np.ones(500))
    with pytest.raises(DomainError):
        local_whittle_H(np.arange(50.0))
    with pytest.raises(DomainError):
        local_whittle_H(np.random.default_rng(0).standard_normal(200), bandwidth=150)


def test_read_series(series_file):
    path, x = series_file
    ts = read_series(path, "level")
    np.testing.assert_array_equal(ts.values, x)
    assert ts.label(1) == "1900" and ts.label(150) == "2049"
    np.testing.assert_array_equal(read_series(path, 1).values, x)
    np.testing.assert_array_equal(read_series(path, "1").values, x)
    assert read_series(path).values[5] == 5.0
    with pytest.raises(IngestionError):
        read_series(path, "missing")


def test_read_series_bad_rows(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,v\n1,0.5\n2,\n3,1.0\n")
    with pytest.raises(IngestionError, match=":3:"):
        read_series(path, "v")
    path.write_text("t,v\n1,0.5\n2,abc\n")
    with pytest.raises(IngestionError, match=":3:"):
        read_series(path, "v")
    with pytest.raises(IngestionError):
        read_series(tmp_path / "nope.csv")


def test_preprocess():
    ts = TimeSeries(np.array([1.0, 2.0, 1.0, 4.0]), ["a", "b", "c", "d"])
    lr = preprocess(ts, log_returns=True)
    np.testing.assert_allclose(lr.values, np.log([2.0, 0.5, 4.0]))
    assert lr.labels == ["b", "c", "d"]
    both = preprocess(ts, log_returns=True, absolute=True)
    np.testing.assert_allclose(both.values, np.abs(np.log([2.0, 0.5, 4.0])))
    with pytest.raises(DomainError):
        preprocess(TimeSeries(np.array([1.0, -1.0])), log_returns=True)


def test_parse_tests():
    assert parse_tests("W, V,cusum") == ["W", "V", "cusum"]
    with pytest.raises(DomainError):
        parse_tests(" , ")


def test_sim_config_checks():
    with pytest.raises(DomainError):
        SimConfig(MarginalSpec(), 0.7, 10)
    with pytest.raises(DomainError):
        SimConfig(MarginalSpec(), 0.7, 100, reps=0)
    with pytest.raises(DomainError):
        SimConfig(MarginalSpec(), 0.7, 100, level=1.5)


def test_simulate_series_shift():
    cfg0 = SimConfig(MarginalSpec("cauchy"), 0.6, 100, 0.3, 0.0, reps=2, seed=4)
    cfg1 = SimConfig(MarginalSpec("cauchy"), 0.6, 100, 0.3, 1.5, reps=2, seed=4)
    d = simulate_series(cfg1, 1) - simulate_series(cfg0, 1)
    np.testing.assert_allclose(d, np.r_[np.zeros(30), np.full(70, 1.5)], atol=1e-12)


def test_simulate_thread_invariance():
    cfg = SimConfig(MarginalSpec("pareto"), 0.8, 200, 0.5, 0.5, reps=24, block="gamma:0.5",
                    tests=("wilcoxon", "vdw", "median", "cusum"), seed=99)
    one = cmd_simulate(cfg, workers=1).to_csv()
    many = cmd_simulate(cfg, workers=8).to_csv()
    assert one == many
    assert one.splitlines()[0].startswith("hurst,n,block_length,test")


def test_rejection_table_rates():
    cfg = SimConfig(MarginalSpec(), 0.7, 120, reps=10, block=10, tests=("W", "C"), seed=1)
    table = cmd_simulate(cfg)
    for row in table.rows:
        assert row.rate == row.rejections / 10
    assert table.rate("W") == table.rows[0].rate


def test_analyze_deterministic(series_file):
    path, _ = series_file
    ts = read_series(path, "level")
    a = cmd_analyze(ts, ["wilcoxon", "vdw", "cusum"], 12, 0.05)
    b = cmd_analyze(ts, ["wilcoxon", "vdw", "cusum"], 12, 0.05)
    assert reports_csv(a.reports) == reports_csv(b.reports)
    assert a.argmax_label("wilcoxon") in {str(y) for y in range(1985, 1996)}
    with pytest.raises(DomainError):
        cmd_analyze(TimeSeries(np.arange(5.0)))


def test_cli_commands(series_file, tmp_path, capsys):
    path, _ = series_file
    out = tmp_path / "reports.csv"
    traj = tmp_path / "traj.csv"
    rc = main(["test", "--input", str(path), "--column", "level", "--tests", "wilcoxon,cusum",
               "--block", "12", "--out", str(out), "--trajectory", str(traj)])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "statistic_name=wilcoxon" in printed and "argmax_label=" in printed
    rows = out.read_bytes().decode().split("\n")
    assert rows[0].startswith("statistic_name,observed,p_value")
    assert b"\r" not in out.read_bytes()
    lines = traj.read_text().splitlines()
    assert lines[0] == "k,label,wilcoxon,cusum" and len(lines) == 150

    tfile = tmp_path / "t.csv"
    assert main(["trajectory", "--input", str(path), "--column", "level", "--tests", "vdw",
                 "--out", str(tfile)]) == 0
    assert tfile.read_text().splitlines()[1].startswith("1,1900,")

    assert main(["hurst", "--input", str(path), "--column", "level"]) == 0
    assert capsys.readouterr().out.startswith("H=")

    assert main(["are", "--score1", "wilcoxon", "--score2", "vdw", "--marginal", "gaussian"]) == 0
    are_out = capsys.readouterr().out
    assert "ratio=" in are_out
    ratio = float(are_out.split("ratio=")[1].split()[0])
    assert ratio == pytest.approx(1.0, abs=1e-6)


def test_cli_simulate(tmp_path):
    out = tmp_path / "sim.csv"
    args = ["simulate", "--marginal", "chisq", "--hurst", "0.7", "--n", "100", "--tau", "0.5",
            "--shift", "1", "--reps", "6", "--block", "gamma:0.5", "--tests", "wilcoxon,vdw,cusum",
            "--level", "0.05", "--seed", "3", "--out", str(out)]
    assert main(args) == 0
    first = out.read_bytes()
    assert main(args + ["--workers", "4"]) == 0
    assert out.read_bytes() == first
    assert len(first.decode().splitlines()) == 4


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["test", "--input", str(tmp_path / "missing.csv")]) == 2
    short = tmp_path / "short.csv"
    short.write_text("v\n1\n2\n3\n")
    assert main(["test", "--input", str(short)]) == 2
    assert main(["simulate", "--hurst", "0.7", "--n", "100", "--block", "2"]) == 2
    # the chi-square(1) density makes the Wilcoxon density integral diverge
    assert main(["are", "--score1", "wilcoxon", "--score2", "median", "--marginal", "chisq"]) == 3
    err = capsys.readouterr().err
    assert "numerical error" in err
