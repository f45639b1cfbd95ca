"""Exact Riemann solver for the homogeneous system frozen at a radius r0.

Wave curves are written in x = ln(rho) and the rapidity Phi(v) = artanh(eps v)/eps:

    family 1 (forward from the left state)
        rarefaction, x <= x_L:  Phi = Phi_L - c (x - x_L)
        shock,       x >= x_L:  Phi = Phi_L - asinh(chi sinh((x - x_L)/2)) / eps
    family 2 (backward from the right state)
        rarefaction, x <= x_R:  Phi = Phi_R + c (x - x_R)
        shock,       x >= x_R:  Phi = Phi_R + asinh(chi sinh((x - x_R)/2)) / eps

with c the invariant coefficient.  w = Phi + c x is constant across 1-rarefactions
and z = Phi - c x across 2-rarefactions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import HalfCurveError, NumericalError
from .model import (FluidState, PhysParams, _eigenvalues, check_radius, check_state,
                    rapidity, velocity_from_rapidity, weights)
from .roots import newton_bracketed

ZERO_STRENGTH = 1e-14
VACUUM_FLOOR = 1e-250


class WaveKind(enum.Enum):
    SHOCK = "Shock"
    RAREFACTION = "Rarefaction"
    CONTACT = "Contact"
    NONE = "None"


@dataclass(frozen=True)
class WaveDescriptor:
    family: int
    kind: WaveKind
    speed_lo: float
    speed_hi: float
    left_state: FluidState
    right_state: FluidState

    @property
    def speed(self) -> float:
        return 0.5 * (self.speed_lo + self.speed_hi)

    @property
    def strength(self) -> float:
        return abs(math.log(self.right_state.rho) - math.log(self.left_state.rho))


@dataclass(frozen=True)
class RiemannFan:
    r0: float
    left: FluidState
    middle: FluidState
    right: FluidState
    wave1: WaveDescriptor
    wave2: WaveDescriptor
    params: PhysParams

    @property
    def strength(self) -> float:
        return wave_strength(self.left, self.middle, self.right)


# ---------------------------------------------------------------------------
# curve kernels (vectorised)


def _shock_shift(d, p: PhysParams):
    """|Phi - Phi_base| along a shock curve as a function of d = x - x_base."""
    if p.eps == 0.0:
        return 2.0 * p.k * np.sinh(0.5 * d)
    return np.arcsinh(p.chi * np.sinh(0.5 * d)) / p.eps


def _shock_shift_prime(d, p: PhysParams):
    if p.eps == 0.0:
        return p.k * np.cosh(0.5 * d)
    sh = p.chi * np.sinh(0.5 * d)
    return 0.5 * p.chi * np.cosh(0.5 * d) / (p.eps * np.sqrt(1.0 + sh * sh))


def curve1(x, xL, PhL, p: PhysParams):
    """Rapidity along the forward 1-wave curve of the left state."""
    d = np.asarray(x, dtype=float) - xL
    c = p.inv_coef
    return np.where(d <= 0.0, PhL - c * d, PhL - _shock_shift(np.maximum(d, 0.0), p))


def curve2(x, xR, PhR, p: PhysParams):
    """Rapidity along the backward 2-wave curve of the right state."""
    d = np.asarray(x, dtype=float) - xR
    c = p.inv_coef
    return np.where(d <= 0.0, PhR + c * d, PhR + _shock_shift(np.maximum(d, 0.0), p))


def _curve1_prime(x, xL, p):
    d = np.asarray(x, dtype=float) - xL
    return np.where(d <= 0.0, -p.inv_coef, -_shock_shift_prime(np.maximum(d, 0.0), p))


def _curve2_prime(x, xR, p):
    d = np.asarray(x, dtype=float) - xR
    return np.where(d <= 0.0, p.inv_coef, _shock_shift_prime(np.maximum(d, 0.0), p))


def middle_states(xL, PhL, xR, PhR, p: PhysParams):
    """Vectorised intersection of the two wave curves; returns (x_M, Phi_M)."""
    xL, PhL, xR, PhR = (np.atleast_1d(np.asarray(a, dtype=float)) for a in (xL, PhL, xR, PhR))
    if p.is_stiff:
        c = p.inv_coef
        xM = (PhL - PhR + c * (xL + xR)) / (2.0 * c)
        return xM, PhL - c * (xM - xL)

    def g(x, act):
        f = curve2(x, xR[act], PhR[act], p) - curve1(x, xL[act], PhL[act], p)
        fp = _curve2_prime(x, xR[act], p) - _curve1_prime(x, xL[act], p)
        return f, fp

    lo = np.minimum(xL, xR) - 1.0
    hi = np.maximum(xL, xR) + 1.0
    all_ = np.ones(xL.shape, dtype=bool)
    for _ in range(80):
        glo = g(lo, all_)[0]
        ghi = g(hi, all_)[0]
        bad_lo = glo > 0.0
        bad_hi = ghi < 0.0
        if not (bad_lo.any() or bad_hi.any()):
            break
        span = hi - lo
        lo = np.where(bad_lo, lo - span, lo)
        hi = np.where(bad_hi, hi + span, hi)
    else:
        raise NumericalError("middle state could not be bracketed")
    # initial guess from the linearised (rarefaction-type) curves
    c = p.inv_coef
    x0 = (PhL - PhR + c * (xL + xR)) / (2.0 * c)
    xM = newton_bracketed(g, lo, hi, x0, xtol=2e-16)
    if np.any(xM < math.log(VACUUM_FLOOR)):
        raise NumericalError("middle state adjacent to vacuum")
    return xM, curve1(xM, xL, PhL, p)


def shock_speed(x1, Ph1, dx, dPh, r0, p: PhysParams):
    """RH speed phi [b]/[a] for a jump (dx, dPh) from the state (x1, Ph1), without cancellation."""
    phi = weights(r0, p)[3]
    if p.eps == 0.0:
        v1 = Ph1
        em = np.expm1(dx)
        ja = em
        jb = em * (v1 + dPh) + dPh
        return phi * jb / ja
    e = p.eps
    y1 = e * Ph1
    Ep = np.expm1(dx + 2.0 * e * dPh)
    Em = np.expm1(dx - 2.0 * e * dPh)
    Ex = np.expm1(dx)
    up = np.exp(2.0 * y1)
    dn = np.exp(-2.0 * y1)
    ja = 0.25 * (1.0 + p.a) * (up * Ep + dn * Em) + 0.5 * (1.0 - p.a) * Ex
    jb = 0.25 * (1.0 + p.a) / e * (up * Ep - dn * Em)
    return phi * jb / ja


def shock_speed_closed_form(base: FluidState, other: FluidState, family: int, r0: float, p: PhysParams) -> float:
    """Speed formula written in the densities and the velocity of the non-base state.

    Agrees with the Rankine-Hugoniot speed when the base state is at rest; kept for
    comparison only (see the ledger).
    """
    rho_i, rho, v = base.rho, other.rho, other.v
    e2 = p.eps**2
    X = rho / (rho - rho_i) * e2 * v * v / (1.0 - e2 * v * v)
    q = math.sqrt((X + p.a / (1.0 + p.a)) / (X + 1.0 / (1.0 + p.a))) / p.eps
    phi = float(weights(r0, p)[3])
    return -phi * q if family == 1 else phi * q


# ---------------------------------------------------------------------------
# public operations


def _xp(s: FluidState, p: PhysParams):
    return math.log(s.rho), float(rapidity(s.v, p.eps))


def _state(x, Ph, p: PhysParams) -> FluidState:
    return FluidState(float(np.exp(x)), float(velocity_from_rapidity(Ph, p.eps)))


def rarefaction_state(base: FluidState, rho: float, family: int, p: PhysParams) -> FluidState:
    """Point of the 1-rarefaction from a left state or the 2-rarefaction into a right state."""
    check_state(base, p)
    if rho > base.rho:
        raise HalfCurveError("rarefaction curves carry densities below the base density")
    xb, Pb = _xp(base, p)
    x = math.log(rho)
    Ph = curve1(x, xb, Pb, p) if family == 1 else curve2(x, xb, Pb, p)
    return _state(x, float(Ph), p)


def shock_state(base: FluidState, rho: float, family: int, r0: float, p: PhysParams) -> Tuple[FluidState, float]:
    """Point of the 1-shock from a left state or the 2-shock into a right state, with its speed."""
    check_state(base, p)
    check_radius(r0, p)
    if rho < base.rho:
        raise HalfCurveError("shock curves carry densities above the base density")
    xb, Pb = _xp(base, p)
    x = math.log(rho)
    d = x - xb
    shift = float(_shock_shift(d, p))
    if family == 1:
        Ph = Pb - shift
        st = _state(x, Ph, p)
        if d == 0.0:
            return st, float(_eigenvalues(base.rho, base.v, r0, p)[0])
        return st, float(shock_speed(xb, Pb, d, -shift, r0, p))
    Ph = Pb + shift
    st = _state(x, Ph, p)
    if d == 0.0:
        return st, float(_eigenvalues(base.rho, base.v, r0, p)[1])
    # speed from the middle (curve) state to the right (base) state
    return st, float(shock_speed(x, Ph, -d, -shift, r0, p))


def _wave(family, xa, Pa, xb, Pb, r0, p, stiff):
    a = _state(xa, Pa, p)
    b = _state(xb, Pb, p)
    d = xb - xa
    idx = 0 if family == 1 else 1
    if stiff:
        sp = float(_eigenvalues(a.rho, a.v, r0, p)[idx])
        kind = WaveKind.NONE if abs(d) < ZERO_STRENGTH else WaveKind.CONTACT
        return WaveDescriptor(family, kind, sp, sp, a, b)
    if abs(d) < ZERO_STRENGTH:
        sp = float(_eigenvalues(a.rho, a.v, r0, p)[idx])
        return WaveDescriptor(family, WaveKind.NONE, sp, sp, a, b)
    compress = (d > 0.0) if family == 1 else (d < 0.0)
    if compress:
        s = float(shock_speed(xa, Pa, d, Pb - Pa, r0, p))
        return WaveDescriptor(family, WaveKind.SHOCK, s, s, a, b)
    lo = float(_eigenvalues(a.rho, a.v, r0, p)[idx])
    hi = float(_eigenvalues(b.rho, b.v, r0, p)[idx])
    return WaveDescriptor(family, WaveKind.RAREFACTION, lo, hi, a, b)


def solve_riemann(left: FluidState, right: FluidState, r0: float, p: PhysParams) -> RiemannFan:
    check_state(left, p)
    check_state(right, p)
    check_radius(r0, p)
    xL, PL = _xp(left, p)
    xR, PR = _xp(right, p)
    if xL == xR and PL == PR:
        xM, PM = xL, PL
    else:
        xMa, PMa = middle_states(xL, PL, xR, PR, p)
        xM, PM = float(xMa[0]), float(PMa[0])
    mid = _state(xM, PM, p)
    check_state(mid, p)
    stiff = p.is_stiff
    w1 = _wave(1, xL, PL, xM, PM, r0, p, stiff)
    w2 = _wave(2, xM, PM, xR, PR, r0, p, stiff)
    return RiemannFan(float(r0), FluidState(float(left.rho), float(left.v)), mid,
                      FluidState(float(right.rho), float(right.v)), w1, w2, p)


def _fan_interior(xi_hat, wave: WaveDescriptor, p: PhysParams):
    e2k = p.eps**2 * p.k
    c = p.inv_coef
    if wave.family == 1:
        v = (xi_hat + p.k) / (1.0 + e2k * xi_hat)
        xL, PL = _xp(wave.left_state, p)
        x = (PL + c * xL - rapidity(v, p.eps)) / c
    else:
        v = (xi_hat - p.k) / (1.0 - e2k * xi_hat)
        xR, PR = _xp(wave.right_state, p)
        x = (rapidity(v, p.eps) - PR + c * xR) / c
    return np.exp(x), v


def sample_fan(fan: RiemannFan, xi) -> FluidState:
    """Self-similar solution at xi = (r - r0) / (t - t0)."""
    scalar = np.ndim(xi) == 0
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    p = fan.params
    phi = float(weights(fan.r0, p)[3])
    rho = np.empty_like(xi)
    v = np.empty_like(xi)
    regions = [
        (xi < fan.wave1.speed_lo, fan.left),
        ((xi > fan.wave1.speed_hi) & (xi < fan.wave2.speed_lo), fan.middle),
        (xi > fan.wave2.speed_hi, fan.right),
    ]
    done = np.zeros(xi.shape, dtype=bool)
    for sel, st in regions:
        rho[sel] = st.rho
        v[sel] = st.v
        done |= sel
    for wave, after in ((fan.wave1, fan.middle), (fan.wave2, fan.right)):
        inside = ~done & (xi >= wave.speed_lo) & (xi <= wave.speed_hi)
        if not inside.any():
            continue
        if wave.kind == WaveKind.RAREFACTION:
            rr, vv = _fan_interior(xi[inside] / phi, wave, p)
            rho[inside] = rr
            v[inside] = vv
        else:
            # on a discontinuity line: take the downstream-right value
            rho[inside] = after.rho
            v[inside] = after.v
        done |= inside
    if scalar:
        return FluidState(float(rho[0]), float(v[0]))
    return FluidState(rho, v)


def wave_strength(left: FluidState, middle: FluidState, right: FluidState) -> float:
    xm = math.log(middle.rho)
    return abs(math.log(left.rho) - xm) + abs(math.log(right.rho) - xm)


def check_interaction(left: FluidState, star: FluidState, right: FluidState, r0: float,
                      p: PhysParams) -> Tuple[float, float]:
    lhs = solve_riemann(left, right, r0, p).strength
    rhs = solve_riemann(left, star, r0, p).strength + solve_riemann(star, right, r0, p).strength
    return lhs, rhs


def batch_strength(rhoL, vL, rhoR, vR, p: PhysParams) -> np.ndarray:
    """Fan strengths of many Riemann problems at once (independent of the frozen radius)."""
    xL = np.log(rhoL)
    xR = np.log(rhoR)
    PL = rapidity(vL, p.eps)
    PR = rapidity(vR, p.eps)
    same = (xL == xR) & (PL == PR)
    out = np.zeros(np.shape(xL))
    if (~same).any():
        xM, _ = middle_states(xL[~same], PL[~same], xR[~same], PR[~same], p)
        out[~same] = np.abs(xL[~same] - xM) + np.abs(xR[~same] - xM)
    return out


def batch_sample(rhoL, vL, rhoR, vR, xi, r0, p: PhysParams):
    """Vectorised solve-and-sample of many Riemann problems, one xi each."""
    rhoL, vL, rhoR, vR, xi = (np.atleast_1d(np.asarray(a, dtype=float)) for a in (rhoL, vL, rhoR, vR, xi))
    xL, xR = np.log(rhoL), np.log(rhoR)
    PL, PR = rapidity(vL, p.eps), rapidity(vR, p.eps)
    xM, PM = middle_states(xL, PL, xR, PR, p)
    vM = velocity_from_rapidity(PM, p.eps)
    phi = weights(r0, p)[3]
    lamL, _ = _eigenvalues(rhoL, vL, r0, p)
    lamM, muM = _eigenvalues(None, vM, r0, p)
    _, muR = _eigenvalues(rhoR, vR, r0, p)
    d1 = xM - xL
    d2 = xR - xM
    shock1 = d1 > ZERO_STRENGTH
    shock2 = d2 < -ZERO_STRENGTH
    with np.errstate(divide="ignore", invalid="ignore"):
        s1 = shock_speed(xL, PL, d1, PM - PL, r0, p)
        s2 = shock_speed(xM, PM, d2, PR - PM, r0, p)
    if p.is_stiff:
        shock1[:] = False
        shock2[:] = False
    lo1 = np.where(shock1, s1, lamL)
    hi1 = np.where(shock1, s1, np.maximum(lamM, lamL))
    lo2 = np.where(shock2, s2, np.minimum(muM, muR))
    hi2 = np.where(shock2, s2, muR)
    x = np.where(xi < lo1, xL, np.where(xi > hi2, xR, xM))
    P = np.where(xi < lo1, PL, np.where(xi > hi2, PR, PM))
    c = p.inv_coef
    e2k = p.eps**2 * p.k
    xh = xi / phi
    fan1 = (xi >= lo1) & (xi <= hi1) & ~shock1 & (hi1 > lo1)
    fan2 = (xi >= lo2) & (xi <= hi2) & ~shock2 & (hi2 > lo2)
    if fan1.any():
        v = (xh[fan1] + p.k) / (1.0 + e2k * xh[fan1])
        Pv = rapidity(v, p.eps)
        x[fan1] = (PL[fan1] + c * xL[fan1] - Pv) / c
        P[fan1] = Pv
    if fan2.any():
        v = (xh[fan2] - p.k) / (1.0 - e2k * xh[fan2])
        Pv = rapidity(v, p.eps)
        x[fan2] = (Pv - PR[fan2] + c * xR[fan2]) / c
        P[fan2] = Pv
    return np.exp(x), velocity_from_rapidity(P, p.eps)


__all__ = [
    "WaveKind", "WaveDescriptor", "RiemannFan", "curve1", "curve2", "middle_states", "shock_speed",
    "shock_speed_closed_form", "rarefaction_state", "shock_state", "solve_riemann", "sample_fan",
    "wave_strength", "check_interaction", "batch_strength", "batch_sample",
]
