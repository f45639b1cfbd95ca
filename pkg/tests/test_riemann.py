import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from schwarzflow.acceptance import nu_curve_residual, rh_residual
from schwarzflow.errors import HalfCurveError
from schwarzflow.model import FluidState, PhysParams, eigenvalues, riemann_invariants, scaled_velocity
from schwarzflow.riemann import (WaveKind, batch_sample, batch_strength, check_interaction, rarefaction_state,
                                 sample_fan, shock_speed_closed_form, shock_state, solve_riemann, wave_strength)

P = PhysParams(eps=1.0, k=0.3, mass_M=1.0)
R0 = 4.0
state = st.builds(lambda x, y: FluidState(math.exp(x), math.tanh(y)), st.floats(-4, 4), st.floats(-2.5, 2.5))


# rarefaction curves


def test_rarefaction_zero_strength():
    b = FluidState(1.5, 0.2)
    assert rarefaction_state(b, 1.5, 1, P) == pytest.approx(b, rel=1e-15)


def test_rarefaction_keeps_invariant(rng):
    for _ in range(1000):
        b = FluidState(math.exp(rng.uniform(-4, 4)), math.tanh(rng.uniform(-2, 2)))
        s = rarefaction_state(b, b.rho * math.exp(-rng.uniform(0, 6)), 1, P)
        assert abs(riemann_invariants(s, P).w - riemann_invariants(b, P).w) < 1e-13
        s = rarefaction_state(b, b.rho * math.exp(-rng.uniform(0, 6)), 2, P)
        assert abs(riemann_invariants(s, P).z - riemann_invariants(b, P).z) < 1e-13


def test_first_eigenvalue_increases_along_rarefaction():
    b = FluidState(2.0, 0.0)
    rhos = np.linspace(2.0, 0.05, 200)
    lam = [eigenvalues(rarefaction_state(b, r, 1, P), R0, P)[0] for r in rhos]
    assert np.all(np.diff(lam) > 0)


def test_half_curves_guarded():
    b = FluidState(1.0, 0.0)
    with pytest.raises(HalfCurveError):
        rarefaction_state(b, 2.0, 1, P)
    with pytest.raises(HalfCurveError):
        shock_state(b, 0.5, 1, R0, P)


# shock curves


def test_weak_shock_speed_tends_to_characteristic():
    b = FluidState(1.0, 0.1)
    _, s = shock_state(b, 1.0 * (1 + 1e-7), 1, R0, P)
    assert s == pytest.approx(eigenvalues(b, R0, P)[0], abs=1e-7)
    _, s = shock_state(b, 1.0 * (1 + 1e-7), 2, R0, P)
    assert s == pytest.approx(eigenvalues(b, R0, P)[1], abs=1e-7)


def test_shock_example_rankine_hugoniot():
    L = FluidState(1.0, 0.0)
    R, s = shock_state(L, 2.0, 1, R0, P)
    assert rh_residual(L, R, s, R0, P) < 1e-12
    assert s == pytest.approx(shock_speed_closed_form(L, R, 1, R0, P), rel=1e-12)


def test_shock_curve_slope_in_invariant_plane():
    """Along the 1-shock curve the transported invariant moves slower than the other one."""
    L = FluidState(1.0, 0.1)
    rhos = np.geomspace(1.0001, 1e3, 300)
    iv = [riemann_invariants(shock_state(L, r, 1, R0, P)[0], P) for r in rhos]
    w = np.array([i.w for i in iv])
    z = np.array([i.z for i in iv])
    slope = np.diff(w) / np.diff(z)
    assert np.all(slope >= 0.0) and np.all(slope < 1.0)


@given(state, st.floats(1e-6, 8.0), st.sampled_from([1, 2]))
def test_shock_lax_and_rh(b, d, fam):
    s, speed = shock_state(b, b.rho * math.exp(d), fam, R0, P)
    a, c = (b, s) if fam == 1 else (s, b)
    la, lc = eigenvalues(a, R0, P), eigenvalues(c, R0, P)
    assert la[fam - 1] > speed > lc[fam - 1]
    assert rh_residual(a, c, speed, R0, P) < 1e-11


# full solver


def test_identical_states():
    s = FluidState(1.3, -0.2)
    fan = solve_riemann(s, s, R0, P)
    assert fan.middle == pytest.approx(s, rel=1e-14)
    assert fan.wave1.kind == WaveKind.NONE and fan.wave2.kind == WaveKind.NONE
    assert fan.strength == 0.0


def test_single_shock_data():
    L = FluidState(1.0, 0.2)
    R, s = shock_state(L, 3.0, 1, R0, P)
    fan = solve_riemann(L, R, R0, P)
    assert fan.wave1.kind == WaveKind.SHOCK and fan.wave2.kind == WaveKind.NONE
    assert fan.middle.rho == pytest.approx(R.rho, rel=1e-12)
    assert fan.wave1.speed == pytest.approx(s, rel=1e-12)


@given(state, state)
def test_middle_state_on_both_curves(L, R):
    fan = solve_riemann(L, R, R0, P)
    assert nu_curve_residual(L, fan.middle, 1, P) < 1e-10
    assert nu_curve_residual(R, fan.middle, 2, P) < 1e-10


def test_scaled_velocity_monotone_along_wave_curves():
    """nu decreases with rho along the forward 1-curve and increases along the backward 2-curve."""
    b = FluidState(1.0, 0.1)
    rhos = np.geomspace(1e-3, 1e3, 400)

    def curve(fam):
        out = []
        for r in rhos:
            s = rarefaction_state(b, r, fam, P) if r <= 1.0 else shock_state(b, r, fam, R0, P)[0]
            out.append(float(scaled_velocity(s.v, P.eps)))
        return np.array(out)

    assert np.all(np.diff(curve(1)) < 0)
    assert np.all(np.diff(curve(2)) > 0)


def test_curves_touch_to_second_order():
    """Shock and rarefaction branches agree to third order in the density step."""
    b = FluidState(1.0, 0.1)
    errs = []
    hs = [0.04, 0.02, 0.01]
    for h in hs:
        up = shock_state(b, math.exp(h), 1, R0, P)[0]
        dn = rarefaction_state(b, math.exp(-h), 1, P)
        # extend the rarefaction branch through the base by its odd reflection in ln rho
        ext = 2 * math.atanh(b.v) - math.atanh(dn.v)
        errs.append(abs(math.atanh(up.v) - ext))
    order = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert order > 2.7


# sampling


def test_sample_regions():
    L, R = FluidState(2.0, 0.1), FluidState(0.5, -0.2)
    fan = solve_riemann(L, R, R0, P)
    assert sample_fan(fan, -10.0) == pytest.approx(L)
    assert sample_fan(fan, 10.0) == pytest.approx(R)
    mid = 0.5 * (fan.wave1.speed_hi + fan.wave2.speed_lo)
    assert sample_fan(fan, mid) == pytest.approx(fan.middle)


def test_rarefaction_interior_is_characteristic():
    L, R = FluidState(1.0, -0.3), FluidState(0.2, 0.3)
    fan = solve_riemann(L, R, R0, P)
    w = fan.wave1
    assert w.kind == WaveKind.RAREFACTION
    xi = np.linspace(w.speed_lo, w.speed_hi, 23)[1:-1]
    s = sample_fan(fan, xi)
    lam, _ = eigenvalues(s, R0, P)
    assert np.max(np.abs(lam - xi)) < 1e-10


def test_batch_sample_matches_scalar(rng):
    p = PhysParams(eps=1.0, k=0.3, planar=True)
    n = 200
    rl, rr = np.exp(rng.uniform(-3, 3, n)), np.exp(rng.uniform(-3, 3, n))
    vl, vr = np.tanh(rng.uniform(-2, 2, n)), np.tanh(rng.uniform(-2, 2, n))
    xi = rng.uniform(-1, 1, n)
    rho, v = batch_sample(rl, vl, rr, vr, xi, np.ones(n), p)
    for i in range(n):
        s = sample_fan(solve_riemann(FluidState(rl[i], vl[i]), FluidState(rr[i], vr[i]), 1.0, p), xi[i])
        assert rho[i] == pytest.approx(s.rho, rel=1e-10) and v[i] == pytest.approx(s.v, abs=1e-10)


# strength


def test_strength_examples():
    one = FluidState(1.0, 0.0)
    assert wave_strength(one, one, one) == 0.0
    assert wave_strength(one, FluidState(math.e, 0.0), one) == pytest.approx(2.0, rel=1e-15)


@given(state, state)
def test_strength_decomposes(L, R):
    fan = solve_riemann(L, R, R0, P)
    per_wave = sum(abs(math.log(w.right_state.rho / w.left_state.rho)) for w in (fan.wave1, fan.wave2))
    assert fan.strength == pytest.approx(per_wave, rel=1e-12, abs=1e-14)
    assert fan.strength == pytest.approx(wave_strength(L, fan.middle, R), rel=1e-12, abs=1e-14)
    assert fan.strength == pytest.approx(float(batch_strength(L.rho, L.v, R.rho, R.v, P)), rel=1e-10,
                                         abs=1e-13)


@given(state, state, state)
def test_interaction_never_increases_strength(L, S, R):
    lhs, rhs = check_interaction(L, S, R, R0, P)
    assert lhs <= rhs + 1e-12


def test_interaction_equality_cases():
    L, R = FluidState(2.0, 0.1), FluidState(0.5, -0.2)
    lhs, rhs = check_interaction(L, L, R, R0, P)
    assert lhs == pytest.approx(rhs, abs=1e-13)
    mid = solve_riemann(L, R, R0, P).middle
    lhs, rhs = check_interaction(L, mid, R, R0, P)
    assert lhs == pytest.approx(rhs, abs=1e-13)


def test_nonrelativistic_solver():
    p = PhysParams(eps=0.0, k=0.3, m=1.0)
    fan = solve_riemann(FluidState(1.0, 0.0), FluidState(1.0, -0.45 - 0.0), 2.0, p)
    assert fan.middle.rho > 1.0
