import numpy as np
import pytest

from schwarzflow.acceptance import _phi
from schwarzflow.errors import MisuseError
from schwarzflow.grp import eval_grp, fan_edge_mismatch, grp_region, shock_defects, solve_grp, weak_residual
from schwarzflow.model import FluidState, PhysParams
from schwarzflow.riemann import WaveKind, sample_fan, shock_state, solve_riemann
from schwarzflow.steady import SteadyBase, make_global_orbit

P = PhysParams(eps=1.0, k=0.3, mass_M=1.0)
R0 = 6.0


def orbit(rho, v, r0=R0, p=P):
    return make_global_orbit(SteadyBase.make(r0, rho, v, p), p)


@pytest.fixture(scope="module")
def left():
    return orbit(1.0, 0.05)


@pytest.fixture(scope="module")
def jump(left):
    return solve_grp(0.0, R0, left, orbit(0.5, 0.05), 0.1, P)


@pytest.mark.parametrize("rho,v", [(1.0, 0.05), (1.0, -0.2), (0.3, 0.6)])
def test_identical_orbits_are_exact(rho, v):
    o = orbit(rho, v)
    sol = solve_grp(0.0, R0, o, o, 0.1, P)
    assert sol.identical
    r = np.linspace(R0 - 0.5, R0 + 0.5, 101)
    ref = o(r)
    for t in (0.0, 0.03, 0.1):
        s = eval_grp(sol, t, r)
        assert np.max(np.abs(s.rho / ref.rho - 1)) < 1e-12 and np.max(np.abs(s.v - ref.v)) < 1e-12


def test_initial_time_gives_orbits(jump, left):
    r = np.array([R0 - 0.3, R0 - 0.01, R0 + 0.01, R0 + 0.3])
    s = eval_grp(jump, 0.0, r)
    L, R = left(r[:2]), jump.right_orbit(r[2:])
    assert np.allclose(s.rho[:2], L.rho, rtol=1e-14) and np.allclose(s.rho[2:], R.rho, rtol=1e-14)


def test_far_field_is_adjacent_orbit(jump, left):
    s = eval_grp(jump, 0.1, np.array([R0 - 0.5]))
    assert s.rho[0] == pytest.approx(left(R0 - 0.5).rho, rel=1e-14)
    assert grp_region(jump, 0.1, R0 - 0.5) == "left" and grp_region(jump, 0.1, R0 + 0.5) == "right"


def test_fan_interior_matches_frozen_fan_at_start(left):
    sol = solve_grp(0.0, R0, left, orbit(0.2, 0.3), 0.1, P)
    assert sol.fan.wave1.kind == WaveKind.RAREFACTION
    w = sol.fan.wave1
    xi = np.linspace(w.speed_lo, w.speed_hi, 9)[1:-1]
    tau = 1e-12
    r = R0 + xi * tau
    s = eval_grp(sol, tau, r)
    ref = sample_fan(sol.fan, (r - R0) / tau)  # the rays actually represented by the rounded radii
    assert np.max(np.abs(s.rho / ref.rho - 1)) < 1e-10 and np.max(np.abs(s.v - ref.v)) < 1e-10


def test_planar_constant_states_are_self_similar():
    p = PhysParams(eps=1.0, k=0.3, planar=True)
    L, R = FluidState(1.0, -0.25), FluidState(0.2, 0.35)
    oL, oR = make_global_orbit(SteadyBase.make(1.0, *L, p), p), make_global_orbit(SteadyBase.make(1.0, *R, p), p)
    sol = solve_grp(0.0, 1.0, oL, oR, 0.2, p)
    fan = solve_riemann(L, R, 1.0, p)
    xi = np.linspace(-0.9, 0.9, 301)
    for t in (0.05, 0.2):
        s = eval_grp(sol, t, 1.0 + xi * t)
        ref = sample_fan(fan, xi)
        assert np.max(np.abs(s.rho - ref.rho)) < 1e-12 and np.max(np.abs(s.v - ref.v)) < 1e-12


def test_pure_shock_data(left):
    U_L = left(R0)
    U_R, s = shock_state(U_L, 2.0, 1, R0, P)
    right = orbit(U_R.rho, U_R.v)
    sol = solve_grp(0.0, R0, left, right, 0.05, P)
    assert sol.fan.wave1.kind == WaveKind.SHOCK and sol.fan.wave2.kind == WaveKind.NONE
    t = 0.05
    edge = R0 + s * t
    a, b = eval_grp(sol, t, np.array([edge - 1e-3, edge + 1e-3]))
    assert a[0] == pytest.approx(left(edge - 1e-3).rho, rel=1e-13)
    assert a[1] == pytest.approx(right(edge + 1e-3).rho, rel=1e-13)


def _fit(dts, vals):
    return np.polyfit(np.log(dts), np.log(vals), 1)[0]


def test_edge_defects_shrink_linearly(left):
    right = orbit(2.0, 0.05)
    dts = 0.2 * 0.5 ** np.arange(4)
    sh, fa = [], []
    for dt in dts:
        g = solve_grp(0.0, R0, left, right, dt, P)
        sh.append(max(shock_defects(g, dt)))
        fa.append(max(fan_edge_mismatch(g, dt)))
    assert 0.7 <= _fit(dts, sh) <= 1.3
    assert 0.7 <= _fit(dts, fa) <= 1.3


def test_frozen_fan_variant_is_consistent(left):
    right = orbit(0.5, 0.05)
    dts = 0.2 * 0.5 ** np.arange(4)
    fa = [max(fan_edge_mismatch(solve_grp(0.0, R0, left, right, dt, P, frozen_fan_only=True), dt))
          for dt in dts]
    assert _fit(dts, fa) >= 0.7


def test_weak_residual_second_order(left):
    right = orbit(1.3, 0.2)
    dts = 0.2 * 0.5 ** np.arange(4)
    res = [np.hypot(*weak_residual(solve_grp(0.0, R0, left, right, dt, P), dt, 4 * dt, _phi(R0))) for dt in dts]
    assert 1.7 <= _fit(dts, res) <= 2.3


def test_weak_residual_zero_test_function(jump):
    zero = lambda t, r: (0.0 * r, 0.0 * r, 0.0 * r)
    assert weak_residual(jump, 0.1, 0.4, zero) == (0.0, 0.0)


def test_weak_residual_equilibrium_is_quadrature_level(left):
    sol = solve_grp(0.0, R0, left, left, 0.1, P)
    assert max(map(abs, weak_residual(sol, 0.1, 0.4, _phi(R0)))) < 1e-12


def test_weak_residual_rejects_unstable_slab(jump):
    with pytest.raises(MisuseError):
        weak_residual(jump, 0.1, 0.01, _phi(R0))
