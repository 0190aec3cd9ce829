import dataclasses
import math

import numpy as np
import pytest

from ehrelay.params import (
    DEFAULT_CONFIG,
    SystemParams,
    db_to_linear,
    dbm_to_watts,
    derive_constants,
    from_db_config,
    to_db_config,
)


def _config(**overrides):
    cfg = {k: v for k, v in DEFAULT_CONFIG.items() if k != "seed"}
    cfg.update(overrides)
    return cfg


def test_dbm_conversions():
    assert dbm_to_watts(46.0) == pytest.approx(10.0**1.6, rel=1e-14)
    assert dbm_to_watts(-100.0) == pytest.approx(1e-13, rel=1e-14)
    assert db_to_linear(0.0) == 1.0
    assert db_to_linear(60.0) == pytest.approx(1e6, rel=1e-14)


def test_from_db_config_reference_set():
    p = from_db_config(_config())
    assert p.ps == pytest.approx(39.810717055, rel=1e-9)
    assert p.pr == pytest.approx(0.1, rel=1e-12)
    assert p.sigma_nr == pytest.approx(1e-10, rel=1e-12)
    assert p.sigma_nd == pytest.approx(1e-13, rel=1e-12)
    assert p.gamma_o == pytest.approx(1e6, rel=1e-12)
    assert p.t == 1.0


def test_from_db_config_missing_and_unknown_keys():
    cfg = _config()
    del cfg["pr_dbm"]
    with pytest.raises(ValueError, match="pr_dbm"):
        from_db_config(cfg)
    with pytest.raises(ValueError, match="unknown"):
        from_db_config(_config(bogus=1.0))


def test_from_db_config_non_finite():
    with pytest.raises(ValueError, match="gamma_o_db"):
        from_db_config(_config(gamma_o_db=float("nan")))


@pytest.mark.parametrize("field,value", [
    ("eta", 0.0), ("eta", 1.0), ("eta", 1.2), ("m", 1.5),
    ("ps", -1.0), ("d1", 0.0), ("sigma_nr", 0.0), ("gamma_o", -2.0),
])
def test_invariant_violations(field, value):
    good = dict(ps=1.0, pr=1.0, eta=0.5, m=3.0, d1=1.0, d2=1.0,
                sigma_nr=1.0, sigma_nd=1.0, gamma_o=1.0)
    good[field] = value
    with pytest.raises(ValueError, match=field):
        SystemParams(**good)


def test_db_round_trip():
    cfg = _config()
    back = to_db_config(from_db_config(cfg))
    for key, value in cfg.items():
        assert back[key] == pytest.approx(value, rel=1e-12, abs=1e-12), key


def test_derived_constants_unit_substitution():
    p = SystemParams(ps=1.0, pr=1.0, eta=0.5, m=3.0, d1=1.0, d2=1.0,
                     sigma_nr=1.0, sigma_nd=1.0, gamma_o=1.0)
    dc = derive_constants(p)
    assert (dc.a, dc.b, dc.c, dc.d) == (1.0, 1.0, 1.0, 1.0)
    assert dc.u == pytest.approx(math.sqrt(8.0), rel=1e-15)
    assert dc.rho == 0.5


def test_rho_unit_example():
    p = SystemParams(ps=1.0, pr=1.0, eta=0.5, m=3.0, d1=1.0, d2=1.0,
                     sigma_nr=1.0, sigma_nd=1.0, gamma_o=1.0, t=1.0)
    assert derive_constants(p).rho == 0.5


def test_a_bar_invariant_under_joint_scaling(p_ref):
    dc = derive_constants(p_ref)
    for factor in (10.0, 1e3, 1e-4):
        scaled = dataclasses.replace(p_ref, ps=p_ref.ps * factor,
                                     sigma_nr=p_ref.sigma_nr * factor)
        assert derive_constants(scaled).a_bar == pytest.approx(
            dc.a_bar, rel=1e-12)


def test_all_constants_positive_randomized():
    rng = np.random.default_rng(3)
    for _ in range(200):
        p = SystemParams(
            ps=10.0 ** rng.uniform(-2, 3),
            pr=10.0 ** rng.uniform(-5, 2),
            eta=rng.uniform(0.05, 0.95),
            m=rng.uniform(2.0, 4.0),
            d1=10.0 ** rng.uniform(0, 2),
            d2=10.0 ** rng.uniform(0, 2),
            sigma_nr=10.0 ** rng.uniform(-13, -6),
            sigma_nd=10.0 ** rng.uniform(-15, -8),
            gamma_o=10.0 ** rng.uniform(0, 8),
        )
        dc = derive_constants(p)
        for value in dataclasses.asdict(dc).values():
            assert math.isfinite(value) and value > 0.0
