import math

import pytest

import chemofront as cf


def test_model_constants():
    p = cf.ModelParams(chi2=2.0, mu2=3.0)
    assert cf.compute_M(p) == pytest.approx(6.0)
    assert cf.compute_K(p) == pytest.approx(6.0)
    c = cf.CoefficientField.constant(2.0, 1.0)
    assert cf.compute_M0(cf.ModelParams(), c) == pytest.approx(2.0)
    rep = cf.check_hypotheses(cf.ModelParams(chi1=1.0, mu1=1.0), cf.CoefficientField.constant(1.0, 0.5))
    assert rep["h1_holds"] is False
    with pytest.raises(cf.HypothesisViolation):
        cf.compute_M0(cf.ModelParams(chi1=1.0, mu1=1.0), cf.CoefficientField.constant(1.0, 0.5))
    with pytest.raises(cf.ConfigError):
        cf.ModelParams(chi1=-1.0).validate()


def test_spectrum():
    lam = cf.principal_eigenvalue(lambda x: 1.0, "mixed", 10.0)
    assert lam == pytest.approx(1.0 - math.pi**2 / 400.0, abs=1e-8)
    lam = cf.principal_eigenvalue(lambda x: 1.0, "dirichlet", 0.0, math.pi)
    assert abs(lam) < 1e-7
    one = cf.CoefficientField.constant(1.0, 1.0)
    assert cf.find_l_star(one) == pytest.approx(math.pi / 2, abs=1e-5)
    assert cf.find_l_star_star(one) == pytest.approx(math.pi, abs=1e-5)


def test_elliptic():
    n, h = 64, 2.0
    u = [1.0 + math.cos(math.pi * j / (n - 1)) for j in range(n)]
    a = cf.solve_potential(u, 1.0, 1.0, h)
    b = cf.potential_oracle_reflection(u, 1.0, 1.0, h)
    assert max(abs(x - y) for x, y in zip(a, b)) < 5 * (h / (n - 1)) ** 2
    assert cf.stefan_velocity([1.0 - j / 128 for j in range(129)], 1.0) == pytest.approx(1.0)


def test_logistic_orbit():
    c = cf.CoefficientField.from_json(
        '{"a": {"type": "sin_periodic", "offset": 1, "amplitude": 0.5, "period": 1},'
        ' "b": 1, "bounds": {"a_inf": 0.5, "a_sup": 1.5, "b_inf": 1, "b_sup": 1}}'
    )
    assert c.kind == "TimeOnly"
    vals = cf.logistic_orbit(c, [0.0, 0.5, 1.0])
    assert vals[0] == pytest.approx(vals[2], abs=1e-9)
    assert 0.5 < min(vals) and max(vals) < 1.5


def test_config_and_run():
    cfg = {"geometry": {"h0": 0.4}, "initial": {"type": "cosine", "amplitude": 0.1}, "h_max": 20.0}
    norm = cf.normalize_config(cfg)
    assert norm["geometry"]["h0"] == 0.4
    assert len(cf.config_digest(cfg)) == 64
    with pytest.raises(cf.ConfigError):
        cf.normalize_config({"geometry": {"h1": 1.0}})
    out = cf.run(cfg)
    assert out["verdict"] == "Vanishing"
    assert out["manifest"]["h_infinity_estimate"] <= math.pi / 2 + 0.05
    s = out["series"]
    assert len(s["t"]) == len(s["h"]) > 1
    assert all(b >= a for a, b in zip(s["h"], s["h"][1:]))
    short = cf.run(cfg, overrides=["time.t_end=0.2"])
    assert short["verdict"] == "Undetermined"


def test_sweep_is_deterministic():
    cfg = {
        "time": {"t_end": 0.5},
        "grid_n": 48,
        "sweep": {"axes": [{"path": "geometry.h0", "values": [0.5, 1.0, 2.0]}]},
    }
    a = cf.run_sweep(cfg, jobs=1)
    b = cf.run_sweep(cfg, jobs=3)
    assert a == b
    assert a.count("\n") == 4 and "\r" not in a


def test_experiment_presets():
    assert "spectrum-report" in cf.experiment_presets()
    rep = cf.run_experiment("spectrum-report")
    assert rep["passed"] is True
    with pytest.raises(cf.ConfigError):
        cf.run_experiment("no-such-preset")
