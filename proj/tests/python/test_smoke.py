import json
import math

import pytest

import hurstq


def test_filters():
    inc2 = hurstq.Filter.named("inc2")
    assert inc2.order == 2
    assert hurstq.dilate(inc2, 2).coeffs == [1, 0, -2, 0, 1]
    assert hurstq.Filter.named("db4").order == 2
    assert hurstq.Filter([1.0, -1.0]).order == 1
    with pytest.raises(ValueError):
        hurstq.Filter([1.0, 1.0])
    assert hurstq.apply_filter(hurstq.Filter.named("inc1"), [1, 2, 3, 4]) == [1, 1, 1]


def test_covariances():
    inc1 = hurstq.Filter.named("inc1")
    for h in (0.2, 0.5, 0.8):
        assert hurstq.gamma(inc1, inc1, 0, h) == pytest.approx(1.0)
    assert hurstq.gamma(inc1, inc1, 1, 0.5) == pytest.approx(0.0, abs=1e-14)
    assert hurstq.rho(inc1, inc1, 0, 0.3) == pytest.approx(1.0)
    assert hurstq.delta_n(inc1, inc1, 0, hurstq.fbm(0.7), 512) == 0.0

    cov = hurstq.filtered_cov_matrix(inc1, 1, hurstq.fbm(0.5), 16)
    assert cov.shape == (15, 15)
    assert cov[0, 0] == pytest.approx(1.0 / 16)
    assert cov[0, 1] == pytest.approx(0.0, abs=1e-12)


def test_synthesis_and_estimation():
    model = hurstq.fbm(0.8)
    path = hurstq.synth_path(model, 2000, 42)
    again = hurstq.synth_path(model, 2000, 42)
    assert path.values == again.values
    assert len(path) == 2000

    report = hurstq.estimate_h(path.values, filter=hurstq.Filter.named("db4"))
    assert abs(report.h_hat - 0.8) < 0.15
    assert len(report.responses) == 5

    qv = hurstq.estimate_h_quadratic_variations(path.values, hurstq.Filter.named("db4"))
    direct = hurstq.estimate_h(
        path.values, filter=hurstq.Filter.named("db4"), trim=(0.0, 0.0), transform="power", alpha=2.0
    )
    assert qv.h_hat == direct.h_hat

    w = hurstq.estimate_h_whittle(path.values)
    assert abs(w - 0.8) < 0.15

    noisy = hurstq.contaminate(path, bernoulli_p=0.0, seed=7)
    assert noisy.values == path.values


def test_quantile_stats():
    assert hurstq.sample_quantile([3.0, 1.0, 2.0], 0.5) == 2.0
    assert hurstq.quantile_combination([1.0, 2.0, 3.0, 4.0], [0.25, 0.75], [0.5, 0.5]) == 2.0
    assert hurstq.trimmed_mean(list(map(float, range(1, 11))), 0.1, 0.1) == pytest.approx(5.5)
    assert hurstq.abs_normal_quantile(0.5) == pytest.approx(0.674489750196082)
    assert hurstq.theoretical_trimmed_mean("power", alpha=2.0) == pytest.approx(1.0, abs=1e-8)


def test_asymptotics():
    inc1 = hurstq.Filter.named("inc1")
    assert hurstq.hermite_eval(2, 0.0) == -1.0
    assert hurstq.hermite_coeff_hp(0.5, 3) == 0.0

    base = hurstq.sigma2_alpha(inc1, 5, 0.5, alpha=0.0)
    for alpha in (0.5, 2.0, 4.0):
        other = hurstq.sigma2_alpha(inc1, 5, 0.5, alpha=alpha)
        assert other.value == pytest.approx(base.value, abs=1e-9)
    assert base.clt_valid

    tm = hurstq.sigma2_alpha_tm(inc1, 5, 0.5, beta1=0.1, beta2=0.1, alpha=2.0)
    assert tm.value > 0.0

    t = hurstq.rate_table(2, 0.5, 4096)
    assert t.r_n.branch == "alpha*tau>1"
    assert t.v_n.value == pytest.approx(1.0 / 4096)


def test_run_mc_json():
    cfg = {
        "model": {"type": "fbm", "hurst": 0.8},
        "n": 256,
        "replications": 16,
        "seed": 3,
        "estimators": ["median", "qv"],
        "threads": 2,
    }
    rows = hurstq.run_mc_json(json.dumps(cfg))
    assert [r["label"] for r in rows] == ["median", "qv"]
    for r in rows:
        assert r["ok"] == 16
        assert math.isfinite(r["mean"])
