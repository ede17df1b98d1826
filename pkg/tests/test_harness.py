import math
import os

import numpy as np
import pytest

from coskit.cos_engine import Call, CosParameters, DigitalBelow, Put, cos_price
from coskit.errors import NotReachedWithinCap
from coskit.harness import (EXPERIMENT_IDS, ExperimentConfig, cli_main,
                            find_nmin, fit_loglog_slope, median_time_ms,
                            run_convergence, run_experiment, run_table1,
                            run_vg_counterexample, write_csv)
from coskit.models import BS, Cauchy, MarketContext, centralized_cf
from coskit.reference import black_scholes_call, black_scholes_put, cauchy_cdf

CTX = MarketContext(S0=100.0, r=0.0, T=1.0)
CF_BS = centralized_cf(BS(0.2), CTX)


# ---------------------------------------------------------------------------
# minimal series length search
# ---------------------------------------------------------------------------

def test_nmin_degenerate_tolerance():
    ref = black_scholes_put(CTX, 0.2, 100.0)
    assert find_nmin(CF_BS, Put(100.0), CTX, 2.0, 2.0, ref, math.inf) == 1


def test_nmin_satisfies_tolerance_at_result():
    ref = black_scholes_put(CTX, 0.2, 100.0)
    tol = 1e-6
    n = find_nmin(CF_BS, Put(100.0), CTX, 2.0, 2.0, ref, tol)
    err_at = abs(cos_price(CF_BS, Put(100.0), CTX,
                           CosParameters(2.0, 2.0, n)).price - ref)
    assert err_at <= tol
    if n > 1:
        err_below = abs(cos_price(CF_BS, Put(100.0), CTX,
                                  CosParameters(2.0, 2.0, n - 1)).price - ref)
        assert err_below > tol


def test_nmin_cap_raises():
    ref = black_scholes_put(CTX, 0.2, 100.0)
    with pytest.raises(NotReachedWithinCap):
        find_nmin(CF_BS, Put(100.0), CTX, 0.9, 0.9, ref, 1e-13, n_hi=64)


def test_nmin_for_reference_table_setup():
    out = run_table1(time_reps=4)
    assert abs(out["n_min"] - 120) <= 6  # 5 percent of 120
    assert [row[1] for row in out["rows"]] == [897, 271, 200, 179, 172, 170, 171]


# ---------------------------------------------------------------------------
# slope fitting
# ---------------------------------------------------------------------------

def test_slope_fit_recovers_power_law():
    ns = 2 ** np.arange(4, 17)
    errs = 3.0 * ns ** -1.57
    assert fit_loglog_slope(ns, errs) == pytest.approx(-1.57, abs=1e-12)


def test_slope_fit_window_exclusions():
    ns = 2 ** np.arange(4, 17)
    errs = 3.0 * ns ** -2.0
    errs[:2] = 1e-15  # below the noise floor and pre-asymptotic
    slope = fit_loglog_slope(ns, errs, noise_floor=1e-12, n_min=64)
    assert slope == pytest.approx(-2.0, abs=1e-12)
    with pytest.raises(ValueError):
        fit_loglog_slope([16, 32], [1e-15, 1e-16])


def test_slope_stable_under_dropping_smallest_point():
    res = run_convergence(centralized_cf(Cauchy(), CTX), DigitalBelow(1.23),
                          CTX, cauchy_cdf(1.23), ("linear", 0.1),
                          n_exponents=range(4, 15))
    recs = res["records"]
    full = fit_loglog_slope([r.N for r in recs], [r.error for r in recs])
    drop = fit_loglog_slope([r.N for r in recs][1:],
                            [r.error for r in recs][1:])
    assert abs(full - drop) < 0.05


def test_timing_helper_positive():
    t = median_time_ms(lambda: sum(range(100)), reps=8, warmup=2)
    assert t >= 0.0


# ---------------------------------------------------------------------------
# convergence behaviors
# ---------------------------------------------------------------------------

def test_constant_range_plateau_long_run():
    # the error settles at a range-limited plateau: pushing N from its first
    # plateau point to 2^20 does not help
    ref = black_scholes_call(CTX, 0.2, 100.0)
    cf = CF_BS
    L = 6 * 0.2
    errs = {}
    for e in (10, 14, 20):
        res = cos_price(cf, Call(100.0), CTX, CosParameters(L, L, 2 ** e))
        errs[e] = abs(res.price - ref)
    assert errs[20] >= 0.5 * errs[14]
    assert errs[20] >= 0.5 * errs[10]


def test_records_are_sorted_and_nonnegative():
    res = run_convergence(CF_BS, Call(100.0), CTX,
                          black_scholes_call(CTX, 0.2, 100.0),
                          ("sqrt", 0.2), n_exponents=range(4, 11))
    ns = [r.N for r in res["records"]]
    assert ns == sorted(ns) and len(set(ns)) == len(ns)
    assert all(r.error >= 0.0 for r in res["records"])


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def _strip_nondet(text: str) -> str:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    meta = [ln for ln in text.splitlines() if ln.startswith("# nondeterministic-columns:")]
    drop = set()
    if meta:
        names = meta[0].split(":", 1)[1].strip().split(",")
        drop = {header.index(n) for n in names}
    keep = [i for i in range(len(header)) if i not in drop]
    out = []
    for ln in lines:
        cells = ln.split(",")
        out.append(",".join(cells[i] for i in keep))
    return "\n".join(out)


def test_csv_deterministic_after_dropping_timing_columns():
    a = run_table1(time_reps=4)["csv"]
    b = run_table1(time_reps=4)["csv"]
    assert _strip_nondet(a) == _strip_nondet(b)


def test_csv_structure_and_float_format():
    text = write_csv(None, ["a", "b"], [(1, 0.1), (2, 2.0 / 3.0)],
                     {"experiment": "demo", "x": 0.25},
                     nondet_columns=("b",))
    lines = text.splitlines()
    assert lines[0].startswith("# coskit-version:")
    assert any(ln == "# experiment: demo" for ln in lines)
    assert "0.66666666666666663" in text  # 17 significant digits
    assert lines[-1].split(",")[0] == "2"


def test_table1_csv_has_seven_rows(tmp_path):
    path = os.fspath(tmp_path / "table1.csv")
    run_table1(out=path, time_reps=4)
    with open(path) as fh:
        rows = [ln for ln in fh if ln.strip() and not ln.startswith("#")]
    assert len(rows) == 1 + 7  # header + one row per derivative order


def test_vg_experiment_rows():
    out = run_vg_counterexample()
    assert abs(out["reference"] - 1.809833) < 5e-6
    assert out["h1_sup"] == pytest.approx(218.0, rel=0.02)
    assert out["err_n50"] < 0.01
    assert "h1_density_sup" in out["csv"]


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def test_cli_tune_matches_table(capsys):
    rc = cli_main(["tune", "--model", "bs", "--sigma", "0.2", "--T", "1",
                   "--K", "100", "--eps", "1e-8", "--n", "8", "--j", "40"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "N = 179" in out


def test_cli_price_fmls_study(capsys):
    rc = cli_main(["price", "--model", "fmls", "--alpha", "1.5597",
                   "--sigma", "0.1486", "--T", "1", "--S0", "100",
                   "--K", "100", "--r", "0", "--payoff", "call",
                   "--eps", "1e-2"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "price = 9.74" in out
    assert "N = 5451" in out


def test_cli_exit_codes(capsys):
    assert cli_main(["price", "--model", "bs", "--eps", "1e-6"]) == 2
    assert cli_main(["price", "--model", "vg", "--sigma", "0.1", "--nu", "0.2",
                     "--T", "0.1", "--eps", "1e-2", "--payoff", "call"]) == 4
    assert cli_main(["tune", "--model", "bs", "--sigma", "0.2",
                     "--eps", "1e-6", "--n", "7"]) == 2
    capsys.readouterr()


def test_cli_experiment_writes_csv(tmp_path, capsys):
    path = os.fspath(tmp_path / "t1.csv")
    rc = cli_main(["experiment", "--id", "table1", "--out", path])
    capsys.readouterr()
    assert rc == 0
    assert os.path.exists(path)


def test_cli_config_file(tmp_path, capsys):
    cfg = tmp_path / "model.cfg"
    cfg.write_text("# lognormal desk setup\nmodel = bs\nsigma = 0.2\nT = 1\n")
    rc = cli_main(["tune", "--config", os.fspath(cfg), "--K", "100",
                   "--eps", "1e-8"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "N = 179" in out
    bad = tmp_path / "bad.cfg"
    bad.write_text("volatility = 0.2\n")
    assert cli_main(["tune", "--config", os.fspath(bad), "--eps", "1e-8"]) == 2


def test_cli_price_digital(capsys):
    rc = cli_main(["price", "--model", "cauchy", "--payoff", "digital",
                   "--d", "1.23", "--eps", "1e-3"])
    out = capsys.readouterr().out
    assert rc == 0
    price = float(out.splitlines()[0].split("=")[1])
    assert abs(price - cauchy_cdf(1.23)) <= 1e-3  # certified tolerance


@pytest.mark.parametrize("exp_id", EXPERIMENT_IDS)
def test_cli_every_experiment_writes_csv(exp_id, tmp_path, capsys):
    path = os.fspath(tmp_path / f"{exp_id}.csv")
    rc = cli_main(["experiment", "--id", exp_id, "--out", path,
                   "--n-max-exp", "8"])
    capsys.readouterr()
    assert rc == 0
    with open(path) as fh:
        text = fh.read()
    assert text.startswith("# coskit-version:")
    assert len([ln for ln in text.splitlines() if not ln.startswith("#")]) >= 2


def test_experiment_ids_complete():
    assert set(EXPERIMENT_IDS) == {
        "table1", "vg_counterexample", "fmls_study", "convergence_bs",
        "convergence_cauchy", "convergence_fmls", "l_optimal"}


def test_experiment_config_validates_id():
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="nope")


def test_run_experiment_dispatch():
    out = run_experiment(ExperimentConfig(experiment="convergence_cauchy",
                                          n_max_exp=8))
    assert "linear(0.1)" in out["results"]
