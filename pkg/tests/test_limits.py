import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from schwarzflow.errors import ConfigError, HalfCurveError
from schwarzflow.limits import (LimitCase, LimitKind, limit_consistency, limit_model, nonrel_riemann_curves,
                                stiff_riemann)
from schwarzflow.model import FluidState, PhysParams, riemann_invariants
from schwarzflow.riemann import WaveKind, rarefaction_state, shock_state, solve_riemann

EPS = 0.5
STIFF = PhysParams(eps=EPS, k=1.0 / EPS, mass_M=1.0)


# configuration


def test_limit_case_rejects_mismatched_params():
    with pytest.raises(ConfigError):
        LimitCase(LimitKind.STIFF, PhysParams(eps=1.0, k=0.3, mass_M=1.0))
    with pytest.raises(ConfigError):
        LimitCase(LimitKind.MINKOWSKI, PhysParams(eps=1.0, k=0.3, mass_M=1.0))
    with pytest.raises(ConfigError):
        LimitCase(LimitKind.NON_RELATIVISTIC, PhysParams(eps=1.0, k=0.3, mass_M=0.0))


def test_limit_case_accepts_matching_params():
    LimitCase(LimitKind.STIFF, STIFF)
    LimitCase(LimitKind.MINKOWSKI, PhysParams(eps=1.0, k=0.3, mass_M=0.0))
    LimitCase(LimitKind.NON_RELATIVISTIC, PhysParams(eps=0.0, k=0.3, m=1.0))
    LimitCase(LimitKind.NONREL_MINKOWSKI, PhysParams(eps=0.0, k=0.3, m=0.0))


def test_limit_model_returns_five_fields():
    case = LimitCase(LimitKind.MINKOWSKI, PhysParams(eps=1.0, k=0.3, mass_M=0.0))
    out = limit_model(case, np.array([1.0, 2.0]), np.array([0.1, -0.2]), np.array([3.0, 4.0]))
    assert len(out) == 5
    lam, mu = out[3], out[4]
    assert np.all(lam < mu)


# consistency orders


def test_nonrelativistic_order_two():
    rep = limit_consistency(PhysParams(eps=0.0, k=0.3, m=1.0), LimitKind.NON_RELATIVISTIC, 1e-4)
    assert 1.8 <= rep.order <= 2.2
    assert rep.max_deviation < 1e-6


def test_nonrel_minkowski_order_two():
    rep = limit_consistency(PhysParams(eps=0.0, k=0.3, m=0.0), LimitKind.NONREL_MINKOWSKI, 1e-4)
    assert 1.8 <= rep.order <= 2.2


def test_minkowski_order_one():
    rep = limit_consistency(PhysParams(eps=1.0, k=0.3, mass_M=0.0), LimitKind.MINKOWSKI, 1e-6)
    assert 0.8 <= rep.order <= 1.2
    assert rep.max_deviation < 1e-4


def test_stiff_formulas_exact():
    rep = limit_consistency(STIFF, LimitKind.STIFF, 0.0)
    assert rep.exact
    assert rep.max_deviation <= 1e-13


def test_deviation_decreases_with_small():
    rep = limit_consistency(PhysParams(eps=0.0, k=0.3, m=1.0), LimitKind.NON_RELATIVISTIC, 1e-3)
    for vals in rep.deviations.values():
        assert np.all(np.diff(vals) <= 0.0)


# stiff Riemann problem


def test_stiff_identical_states_have_zero_strength():
    s = FluidState(1.3, 0.2)
    fan = stiff_riemann(s, s, 5.0, STIFF)
    assert fan.strength == 0.0
    assert fan.wave1.kind == WaveKind.NONE and fan.wave2.kind == WaveKind.NONE


def test_stiff_speeds_exact():
    r0 = 5.0
    fan = stiff_riemann(FluidState(1.0, 0.1), FluidState(2.0, -0.3), r0, STIFF)
    s = (1.0 - 2.0 / r0) / EPS
    assert fan.wave1.speed_lo == -s and fan.wave1.speed_hi == -s
    assert fan.wave2.speed_lo == s and fan.wave2.speed_hi == s


@given(st.floats(0.1, 10.0), st.floats(-1.9, 1.9), st.floats(0.1, 10.0), st.floats(-1.9, 1.9))
def test_stiff_invariants_carried(rl, vl, rr, vr):
    L, R = FluidState(rl, vl), FluidState(rr, vr)
    fan = stiff_riemann(L, R, 4.0, STIFF)
    iL, iM, iR = (riemann_invariants(x, STIFF) for x in (L, fan.middle, R))
    # w carries over the 1-contact, z over the 2-contact
    assert abs(iM.w - iL.w) <= 1e-13 * max(1.0, abs(iL.w))
    assert abs(iM.z - iR.z) <= 1e-13 * max(1.0, abs(iR.z))


def test_stiff_rejects_non_stiff_params():
    with pytest.raises(ConfigError):
        stiff_riemann(FluidState(1, 0), FluidState(1, 0), 4.0, PhysParams(eps=1.0, k=0.3, mass_M=1.0))


def test_general_solver_near_stiff_matches_stiff():
    near = PhysParams(eps=EPS, k=(1.0 / EPS) * (1.0 - 1e-10), mass_M=1.0)
    L, R = FluidState(1.0, 0.3), FluidState(1.7, -0.4)
    a = stiff_riemann(L, R, 4.0, STIFF)
    b = solve_riemann(L, R, 4.0, near)
    assert abs(b.middle.rho - a.middle.rho) / a.middle.rho < 1e-4
    assert abs(b.middle.v - a.middle.v) < 1e-4
    for wa, wb in ((a.wave1, b.wave1), (a.wave2, b.wave2)):
        assert abs(wb.speed_lo - wa.speed_lo) < 1e-4
        assert abs(wb.speed_hi - wa.speed_hi) < 1e-4


# non-relativistic curves


def test_nonrel_shock_example():
    s = nonrel_riemann_curves(FluidState(1.0, 0.0), 4.0, 1, "shock", 0.3)
    assert s.v == pytest.approx(-0.45, abs=1e-15)


@pytest.mark.parametrize("family", [1, 2])
@pytest.mark.parametrize("kind", ["shock", "rarefaction"])
def test_nonrel_base_density_returns_base(family, kind):
    b = FluidState(1.2, 0.1)
    assert nonrel_riemann_curves(b, 1.2, family, kind, 0.3) == b


def test_nonrel_half_curve_errors():
    b = FluidState(1.0, 0.0)
    with pytest.raises(HalfCurveError):
        nonrel_riemann_curves(b, 0.5, 1, "shock", 0.3)
    with pytest.raises(HalfCurveError):
        nonrel_riemann_curves(b, 2.0, 1, "rarefaction", 0.3)
    with pytest.raises(ConfigError):
        nonrel_riemann_curves(b, 2.0, 3, "shock", 0.3)
    with pytest.raises(ConfigError):
        nonrel_riemann_curves(b, 2.0, 1, "contact", 0.3)


@pytest.mark.parametrize("family", [1, 2])
@pytest.mark.parametrize("rho", [1.5, 4.0, 20.0])
def test_nonrel_shock_matches_small_eps(family, rho):
    p = PhysParams(eps=1e-5, k=0.3, mass_M=0.0)
    b = FluidState(1.0, 0.05)
    rel, _ = shock_state(b, rho, family, 4.0, p)
    lim = nonrel_riemann_curves(b, rho, family, "shock", 0.3)
    assert abs(rel.v - lim.v) < 1e-8


@pytest.mark.parametrize("family", [1, 2])
@pytest.mark.parametrize("rho", [0.05, 0.4, 0.9])
def test_nonrel_rarefaction_matches_small_eps(family, rho):
    p = PhysParams(eps=1e-5, k=0.3, mass_M=0.0)
    b = FluidState(1.0, 0.05)
    rel = rarefaction_state(b, rho, family, p)
    lim = nonrel_riemann_curves(b, rho, family, "rarefaction", 0.3)
    assert abs(rel.v - lim.v) < 1e-8


@given(st.floats(1.0, 50.0), st.floats(0.05, 2.0))
def test_nonrel_shock_velocity_monotone(ratio, k):
    b = FluidState(1.0, 0.0)
    a = nonrel_riemann_curves(b, ratio, 1, "shock", k)
    c = nonrel_riemann_curves(b, ratio * 1.01, 1, "shock", k)
    assert c.v < a.v or math.isclose(ratio, 1.0)
