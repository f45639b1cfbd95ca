import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from schwarzflow.errors import ConfigError, DomainError, InversionError, SolverError
from schwarzflow.model import (ConservedPair, FluidState, InvariantPair, PhysParams, PressureLaw,
                               classify_pressure_law, conserved, eigenvalues, flux, invariant_sources,
                               primitive_from_conserved, riemann_invariants, source, state_from_invariants,
                               steady_slope)

states = st.tuples(st.floats(-6.0, 6.0), st.floats(-0.99, 0.99))


def test_eigenvalues_at_rest(p_rel):
    lam, mu = eigenvalues(FluidState(1.0, 0.0), 4.0, p_rel)
    assert lam == pytest.approx(-0.15, abs=1e-15)
    assert mu == pytest.approx(0.15, abs=1e-15)


@pytest.mark.parametrize("r", [2.5, 4.0, 50.0])
def test_sonic_state_has_vanishing_first_eigenvalue(p_rel, r):
    lam, _ = eigenvalues(FluidState(1.0, p_rel.k), r, p_rel)
    assert abs(lam) < 1e-15


def test_eigenvalues_vanish_at_horizon(p_rel):
    lam, mu = eigenvalues(FluidState(1.0, 0.2), 2.0 * (1 + 1e-12), p_rel)
    assert abs(lam) < 1e-11 and abs(mu) < 1e-11


def test_invariants_examples():
    iv = riemann_invariants(FluidState(1.0, 0.0), PhysParams(eps=0.7, k=0.4, mass_M=1.0))
    assert iv.w == 0.0 and iv.z == 0.0
    iv = riemann_invariants(FluidState(math.e, 0.0), PhysParams(eps=1.0, k=0.5, mass_M=1.0))
    assert iv.w == pytest.approx(0.4, abs=1e-15)
    assert iv.z == pytest.approx(-0.4, abs=1e-15)
    s = state_from_invariants(InvariantPair(0.4, -0.4), PhysParams(eps=1.0, k=0.5, mass_M=1.0))
    assert s.rho == pytest.approx(math.e, rel=1e-15) and abs(s.v) < 1e-15


def test_nonrelativistic_invariants(p_nonrel):
    iv = riemann_invariants(FluidState(2.0, 0.1), p_nonrel)
    assert iv.w == pytest.approx(0.1 + 0.3 * math.log(2.0))
    assert iv.z == pytest.approx(0.1 - 0.3 * math.log(2.0))


def test_invariant_round_trip_fuzz(rng):
    p = PhysParams(eps=1.0, k=0.3, mass_M=1.0)
    rho = np.exp(rng.uniform(-8, 8, 10_000))
    v = rng.uniform(-0.999, 0.999, 10_000)
    s = state_from_invariants(riemann_invariants(FluidState(rho, v), p), p)
    assert np.max(np.abs(s.rho / rho - 1.0)) < 1e-12
    assert np.max(np.abs(s.v - v)) < 1e-12


def test_conserved_flux_source_examples(p_rel):
    s = FluidState(2.0, 0.0)
    u = conserved(s, 4.0, p_rel)
    assert (u.u1, u.u2) == pytest.approx((32.0, 0.0), abs=1e-13)
    f = flux(s, 4.0, p_rel)
    assert f.u1 == pytest.approx(0.0, abs=1e-15)
    assert f.u2 == pytest.approx(0.72, rel=1e-14)
    assert source(s, 4.0, p_rel).u2 == pytest.approx(-0.37, rel=1e-13)
    back = primitive_from_conserved(ConservedPair(32.0, 0.0), 4.0, p_rel)
    assert back.rho == pytest.approx(2.0, rel=1e-14) and abs(back.v) < 1e-15


def test_nonrelativistic_conserved(p_nonrel):
    u = conserved(FluidState(2.0, 0.3), 3.0, p_nonrel)
    assert u.u1 == 9.0 * 2.0 and u.u2 == pytest.approx(9.0 * 2.0 * 0.3, rel=1e-15)


def test_flat_source_is_geometric(p_flat):
    s = FluidState(1.7, 0.2)
    assert source(s, 3.0, p_flat).u2 == pytest.approx(2 * 3.0 * 0.09 * 1.7, rel=1e-14)


def test_primitive_rejects_nonpositive_density(p_rel):
    with pytest.raises(SolverError):
        primitive_from_conserved(ConservedPair(-1.0, 0.0), 4.0, p_rel)


@given(states, st.floats(2.05, 200.0))
def test_conserved_round_trip(s, r):
    p = PhysParams(eps=1.0, k=0.3, mass_M=1.0)
    state = FluidState(math.exp(s[0]), s[1])
    back = primitive_from_conserved(conserved(state, r, p), r, p)
    assert back.rho == pytest.approx(state.rho, rel=1e-12)
    assert back.v == pytest.approx(state.v, abs=1e-12)


@given(states, st.floats(2.05, 200.0))
def test_eigenvalues_ordered_and_subluminal(s, r):
    p = PhysParams(eps=1.0, k=0.3, mass_M=1.0)
    lam, mu = eigenvalues(FluidState(math.exp(s[0]), s[1]), r, p)
    phi = 1.0 - 2.0 / r
    assert lam < mu
    assert abs(lam) <= phi * (1 + 1e-12) and abs(mu) <= phi * (1 + 1e-12)


def test_pressure_law_classes():
    assert classify_pressure_law(1.0, 0.3) == PressureLaw.GENUINELY_NONLINEAR
    assert classify_pressure_law(1.0, 1.0) == PressureLaw.LINEARLY_DEGENERATE
    assert classify_pressure_law(1.0, 0.0) == PressureLaw.NON_STRICTLY_HYPERBOLIC


@pytest.mark.parametrize("kw", [dict(eps=1.0, k=1.5, mass_M=1.0), dict(eps=0.0, k=0.3),
                                dict(eps=-1.0, k=0.3, mass_M=1.0), dict(eps=0.0, k=0.3, mass_M=1.0, m=1.0),
                                dict(eps=1.0, k=0.3, mass_M=1.0, m=5.0)])
def test_bad_parameters(kw):
    with pytest.raises(ConfigError):
        PhysParams(**kw)


def test_characteristic_form_matches_conservation_form(p_rel):
    """Invariant sources agree with a finite-difference evaluation of the balance law."""
    rho, v, r = 1.3, 0.2, 5.0
    drho, dv = steady_slope(rho, v, r, p_rel)
    sw, sz = invariant_sources(rho, v, r, p_rel)
    lam, mu = eigenvalues(FluidState(rho, v), r, p_rel)
    h = 1e-6
    w1 = riemann_invariants(FluidState(rho + h * drho, v + h * dv), p_rel)
    w0 = riemann_invariants(FluidState(rho - h * drho, v - h * dv), p_rel)
    # along a steady profile the time derivative vanishes: speed * d/dr = source
    assert mu * (w1.w - w0.w) / (2 * h) == pytest.approx(sw, rel=1e-7)
    assert lam * (w1.z - w0.z) / (2 * h) == pytest.approx(sz, rel=1e-7)


def test_below_horizon_rejected(p_rel):
    with pytest.raises(DomainError):
        conserved(FluidState(1.0, 0.0), 1.5, p_rel)
