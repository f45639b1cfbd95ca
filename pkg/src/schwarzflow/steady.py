"""Steady (time-independent) solutions: first integrals, sonic points, global orbits.

The two first integrals are combined into an energy form

    A(v) + B(r) = const,

with A maximal at the sound speed v = k and B minimal at the sonic radius.
Writing dA = A(k) - A(v) >= 0 and dB = B(r) - B(r_s) >= 0, a branch through
(r0, v0) satisfies dA(v) = dB(r) + P where P = dA(v0) - dB(r0).  Velocities
are recovered by inverting the monotone map s(v) = sign(v - k) sqrt(dA(v)).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .errors import DomainError, MisuseError, NumericalError
from .model import (LIGHT_GUARD, FluidState, ModelKind, PhysParams, _eigenvalues,
                    check_state, rate_functions, steady_slope)
from .roots import bracket_root, newton_bracketed

CRITICAL_TOL = 1e-10


class SonicRegime(enum.Enum):
    NO_SONIC_POINT = "NoSonicPoint"
    CRITICAL_SONIC = "CriticalSonic"
    TWO_SONIC_POINTS = "TwoSonicPoints"
    ONE_SONIC_POINT = "OneSonicPoint"  # massless radial flow: no minimum of B


class OrbitKind(enum.Enum):
    SMOOTH = "Smooth"
    CONTINUOUS_SONIC_CROSSING = "ContinuousSonicCrossing"
    SHOCK_BEARING = "ShockBearing"
    STIFF_CLOSED_FORM = "StiffClosedForm"
    UNIFORM = "Uniform"


# ---------------------------------------------------------------------------
# energy functions


class Energy:
    """dA, dB and the velocity inversion for one parameter set."""

    def __init__(self, p: PhysParams):
        if p.is_stiff or p.planar:
            raise MisuseError("energy form needs a genuinely nonlinear radial model")
        self.p = p
        self.k = p.k
        self.a = p.a
        self.eps = p.eps
        self.M = p.mass_M
        self.h = p.horizon
        self.rel = p.eps > 0.0
        self.kinv = p.kinv if self.rel else math.inf
        self.m = p.reduced_mass
        self.r_s = p.sonic_radius
        self.q_max = -0.5 * math.log(self.a) if self.rel else math.inf

    # -- velocity part, in q = ln(v/k)
    def dA(self, q):
        q = np.asarray(q, dtype=float)
        if not self.rel:
            return -q + 0.5 * np.expm1(2.0 * q)
        den = -np.expm1(2.0 * q + math.log(self.a))
        return -q + self.kinv * np.log1p(self.a * np.expm1(2.0 * q) / den)

    def dA_prime(self, q):
        q = np.asarray(q, dtype=float)
        if not self.rel:
            return np.expm1(2.0 * q)
        return np.expm1(2.0 * q) / (-np.expm1(2.0 * q + math.log(self.a)))

    def s_of_q(self, q):
        return np.sign(q) * np.sqrt(np.maximum(self.dA(q), 0.0))

    def q_of_v(self, v):
        return np.log(np.asarray(v, dtype=float) / self.k)

    # -- radial part
    def dB(self, r, r0):
        """B(r) - B(r0)."""
        r = np.asarray(r, dtype=float)
        out = 2.0 * np.log(r / r0)
        if self.m == 0.0:
            return out
        if self.rel:
            x = 2.0 * self.M * (r - r0) / (r * (r0 - self.h))
            return out - self.kinv * np.log1p(x)
        return out + (self.m / self.k**2) * (r0 - r) / (r * r0)

    def dB_min(self, r):
        return self.dB(r, self.r_s)

    def dB_prime(self, r):
        r = np.asarray(r, dtype=float)
        if self.m == 0.0:
            return 2.0 / r
        rs = self.r_s
        return 2.0 * (r - rs) / (r * (r - self.h))

    # -- inversion of s(q) = target
    def q_hi(self, Y):
        Y = np.asarray(Y, dtype=float)
        if not self.rel:
            return np.log(2.0 + np.sqrt(2.0 * Y))
        delta = (1.0 - self.a) * np.exp(-(Y + self.q_max + 1.0) / self.kinv)
        delta = np.maximum(delta, 1e-300)
        return 0.5 * (np.log1p(-delta) - math.log(self.a))

    def invert(self, target):
        """q solving s(q) = target (vectorised)."""
        t = np.atleast_1d(np.asarray(target, dtype=float))
        Y = t * t
        sup = t > 0.0
        lo = np.where(sup, 0.0, -(Y + 1.5))
        hi = np.where(sup, self.q_hi(Y), 0.0)
        if np.any(sup):
            top = self.dA(hi[sup])
            if np.any(top < Y[sup]):
                raise DomainError("orbit velocity saturates the light speed")
        lim = 1.0 / math.sqrt(1.0 - self.a)

        def fun(q, act):
            d = np.maximum(self.dA(q), 0.0)
            sq = np.sqrt(d)
            f = np.sign(q) * sq - t[act]
            with np.errstate(divide="ignore", invalid="ignore"):
                fp = self.dA_prime(q) / (2.0 * np.sign(q) * sq)
            fp = np.where((d < 1e-24) | ~np.isfinite(fp), lim, fp)
            return f, fp

        x0 = t / lim
        q = newton_bracketed(fun, lo, hi, x0)
        q = np.where(t == 0.0, 0.0, q)
        return q if np.ndim(target) else float(q[0])

    # -- sonic radii: dB_min(r) = level on either side of r_s
    def sonic_radius_on_side(self, level: float, side: int) -> float:
        rs = self.r_s
        base = rs - self.h
        if level <= 0.0:
            return rs

        def f(x):
            r = self.h + math.exp(x)
            return float(self.dB_min(r)) - level

        x0 = math.log(base)
        if side < 0:
            x_lo, step = x0, -1.0
            while True:
                x_new = x_lo + step
                if x_new < -740.0:
                    return self.h
                if f(x_new) > 0.0:
                    break
                x_lo, step = x_new, 2.0 * step
            return self.h + math.exp(bracket_root(f, x_new, x_lo))
        x_hi, step = x0, 1.0
        while True:
            x_new = x_hi + step
            if x_new > 700.0:
                if f(700.0) < 0.0:
                    return math.inf
                x_new = 700.0
            if f(x_new) > 0.0:
                break
            x_hi, step = x_new, 2.0 * step
        return self.h + math.exp(bracket_root(f, x_hi, x_new))


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class SteadyBase:
    r0: float
    rho0: float
    v0: float
    d0: float
    c0: float

    @classmethod
    def make(cls, r0: float, rho0: float, v0: float, p: PhysParams) -> "SteadyBase":
        if not p.planar and not r0 > p.horizon:
            raise DomainError(f"base radius {r0} not outside the horizon {p.horizon}")
        if p.eps == 0.0 and not r0 > 0.0:
            raise DomainError("base radius must be positive")
        check_state(FluidState(rho0, v0), p)
        d0, c0 = first_integrals(r0, FluidState(rho0, v0), p)
        return cls(float(r0), float(rho0), float(v0), float(d0), float(c0))

    @property
    def state(self) -> FluidState:
        return FluidState(self.rho0, self.v0)


def first_integrals(r, s: FluidState, p: PhysParams):
    """The two conserved quantities along smooth steady solutions.

    eps > 0: (r^2 rho^kappa v, (1 - 2M/r) rho^(1-kappa) / (1 - eps^2 v^2)).
    eps = 0: (r^2 rho v, v^2/2 + k^2 ln rho - m/r).
    """
    r = np.asarray(r, dtype=float)
    rho, v = np.asarray(s.rho, dtype=float), np.asarray(s.v, dtype=float)
    if p.eps == 0.0:
        return r * r * rho * v, 0.5 * v * v + p.k**2 * np.log(rho) - p.reduced_mass / r
    kap = p.kappa
    phi = 1.0 - p.horizon / r
    return r * r * rho**kap * v, phi * rho ** (1.0 - kap) / (1.0 - p.eps**2 * v * v)


@dataclass(frozen=True)
class SonicClassification:
    p_value: float
    regime: SonicRegime
    r_under: Optional[float] = None
    r_bar: Optional[float] = None
    domain: Tuple[float, float] = (0.0, math.inf)


def p_value(r0: float, v0: float, p: PhysParams) -> float:
    """Sign indicator of sonic points, computed from the energy form."""
    en = Energy(p)
    v0 = abs(v0)
    if v0 == 0.0:
        return math.inf
    if en.r_s is None:
        return -math.inf
    return float(en.dA(en.q_of_v(v0)) - en.dB_min(r0))


def p_value_closed_form(r0: float, v0: float, p: PhysParams) -> float:
    """Closed-form indicator written directly in (r0, v0); an independent route to p_value."""
    v0 = abs(v0)
    k = p.k
    if p.eps == 0.0:
        m = p.reduced_mass
        return 1.5 + math.log(m * m / (4.0 * k**3 * r0 * r0 * v0)) + (v0 * v0 - 2.0 * m / r0) / (2.0 * k * k)
    a, M = p.a, p.mass_M
    e2v2 = (p.eps * v0) ** 2
    lead = 2.0 * math.log((1.0 + 3.0 * a) * M / (2.0 * a * r0)) + math.log(k / v0)
    X = (3.0 * a * r0 - 2.0 * M * (1.0 + 3.0 * a) + e2v2 * r0) / (r0 * (1.0 - e2v2))
    return lead + p.kinv * math.log1p(X)


def sonic_equation(r, r0: float, v0: float, p: PhysParams):
    """Residual of the sonic-point equation in its logarithmic form (zero at sonic radii)."""
    r = np.asarray(r, dtype=float)
    k = p.k
    if p.eps == 0.0:
        m = p.reduced_mass
        lhs = 0.5 * (v0 * v0 - k * k) / k**2 + math.log(k / v0)
        rhs = 2.0 * np.log(r / r0) + (m / k**2) * (1.0 / r - 1.0 / r0)
        return lhs - rhs
    e2 = p.eps**2
    ik = 1.0 / p.kinv
    M = p.mass_M
    lhs = math.log((1.0 - e2 * v0 * v0) / (1.0 - e2 * k * k)) + ik * math.log(v0 / k)
    rhs = ik * np.log(r * r / (r0 * r0)) + np.log(r * (r0 - 2.0 * M) / (r0 * (r - 2.0 * M)))
    return lhs - rhs


def classify(base: SteadyBase, p: PhysParams) -> SonicClassification:
    en = Energy(p)
    v0 = abs(base.v0)
    r0 = base.r0
    lower = p.horizon
    if v0 == 0.0:
        return SonicClassification(math.inf, SonicRegime.NO_SONIC_POINT, domain=(lower, math.inf))
    q0 = float(en.q_of_v(v0))
    if en.r_s is None:
        rs = r0 * math.exp(-0.5 * float(en.dA(q0)))
        return SonicClassification(-math.inf, SonicRegime.ONE_SONIC_POINT, rs, rs, (rs, math.inf))
    P = float(en.dA(q0) - en.dB_min(r0))
    if abs(P) <= CRITICAL_TOL:
        return SonicClassification(P, SonicRegime.CRITICAL_SONIC, en.r_s, en.r_s, (lower, math.inf))
    if P > 0.0:
        return SonicClassification(P, SonicRegime.NO_SONIC_POINT, domain=(lower, math.inf))
    r_under = en.sonic_radius_on_side(-P, -1)
    r_bar = en.sonic_radius_on_side(-P, +1)
    dom = (r_bar, math.inf) if r0 >= en.r_s else (lower, r_under)
    return SonicClassification(P, SonicRegime.TWO_SONIC_POINTS, r_under, r_bar, dom)


def eval_G(r, v, base: SteadyBase, p: PhysParams):
    """Algebraic residual whose zero set is the steady velocity profile through the base."""
    en = Energy(p)
    q = en.q_of_v(np.abs(v))
    q0 = en.q_of_v(abs(base.v0))
    return en.dA(q) - en.dA(q0) - en.dB(r, base.r0)


def steady_jump(s: FluidState, p: PhysParams) -> FluidState:
    """Stationary discontinuity: v' = k^2/v with the matching density."""
    rho, v = np.asarray(s.rho, dtype=float), np.asarray(s.v, dtype=float)
    if np.any(v == 0.0):
        raise DomainError("steady jump needs a nonzero velocity")
    k2 = p.k**2
    e2 = p.eps**2
    vn = k2 / v
    if p.eps > 0.0 and np.any(np.abs(p.eps * vn) > 1.0 - LIGHT_GUARD):
        raise DomainError("jumped velocity reaches light speed")
    rn = rho * (1.0 - e2 * k2 * k2 / (v * v)) / (1.0 - e2 * v * v) * (v * v / k2)
    return FluidState(_scalar(rn), _scalar(vn))


# ---------------------------------------------------------------------------
# branches


class _Branch:
    """Smooth piece of an orbit: velocity from a target of s, density anchored at a point."""

    def __init__(self, p: PhysParams, anchor_r: float, anchor_rho: float, anchor_v: float,
                 target: Callable[[np.ndarray], np.ndarray], label: int):
        self.p = p
        self.en = Energy(p)
        self.r_a = anchor_r
        self.rho_a = anchor_rho
        self.v_a = anchor_v
        self.target = target
        self.label = label
        k = p.kappa if p.eps > 0.0 else 1.0
        self.kap = k
        self.lnD = 2.0 * math.log(anchor_r) + k * math.log(anchor_rho) + math.log(anchor_v)
        if p.eps > 0.0:
            self.lnC = (math.log1p(-p.horizon / anchor_r) + (1.0 - k) * math.log(anchor_rho)
                        - math.log1p(-(p.eps * anchor_v) ** 2))

    def velocity(self, r):
        q = self.en.invert(self.target(r))
        return self.p.k * np.exp(q)

    def density(self, r, v):
        p = self.p
        if p.eps == 0.0 or self.kap >= 0.5:
            return np.exp((self.lnD - 2.0 * np.log(r) - np.log(v)) / self.kap)
        lr = self.lnC - np.log1p(-p.horizon / r) + np.log1p(-(p.eps * v) ** 2)
        return np.exp(lr / (1.0 - self.kap))

    def __call__(self, r):
        v = self.velocity(r)
        rho = self.density(r, v)
        hit = r == self.r_a
        if np.any(hit):
            v = np.where(hit, self.v_a, v)
            rho = np.where(hit, self.rho_a, rho)
        return rho, v


class _StaticBranch:
    label = 0

    def __init__(self, p: PhysParams, r0: float, rho0: float):
        self.p, self.r0, self.rho0 = p, r0, rho0

    def __call__(self, r):
        p = self.p
        if p.eps == 0.0:
            lr = (p.reduced_mass / p.k**2) * (1.0 / r - 1.0 / self.r0)
        else:
            lr = (math.log1p(-p.horizon / self.r0) - np.log1p(-p.horizon / r)) / (1.0 - p.kappa)
        rho = self.rho0 * np.exp(lr)
        return rho, np.zeros_like(rho)


class _StiffBranch:
    label = 0

    def __init__(self, p: PhysParams, r0: float, rho0: float, v0: float):
        self.p, self.r0, self.rho0, self.v0 = p, r0, rho0, v0

    def __call__(self, r):
        return _stiff_profile(r, self.r0, self.rho0, self.v0, self.p)


class _UniformBranch:
    label = 0

    def __init__(self, rho0: float, v0: float):
        self.rho0, self.v0 = rho0, v0

    def __call__(self, r):
        one = np.ones_like(r)
        return self.rho0 * one, self.v0 * one


def _stiff_profile(r, r0, rho0, v0, p: PhysParams):
    e2 = p.eps**2
    M2 = p.horizon
    v = r0 * r0 * v0 / (r * r)
    ratio = (1.0 - (r0**4) * e2 * v0 * v0 / r**4) * (r0 - M2) * r / (r0 * (r - M2) * (1.0 - e2 * v0 * v0))
    return rho0 * ratio, v


# ---------------------------------------------------------------------------
# orbits


@dataclass
class SteadyOrbit:
    base: SteadyBase
    params: PhysParams
    classification: SonicClassification
    kind: OrbitKind
    pieces: List[Tuple[float, float, object]]
    sign: float = 1.0
    shock_radius: Optional[float] = None
    branch_flags: Tuple[int, ...] = ()
    lax_admissible: Optional[bool] = None
    shock_between_base_and_sonic: Optional[bool] = None
    partial: bool = False
    domain: Tuple[float, float] = (0.0, math.inf)
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def __call__(self, r) -> FluidState:
        return eval_orbit(self, r)

    def limits_at_shock(self) -> Tuple[FluidState, FluidState]:
        if self.shock_radius is None:
            raise MisuseError("orbit has no steady shock")
        r1 = self.shock_radius
        (lo0, hi0, b0), (lo1, hi1, b1) = self.pieces
        left = b0 if hi0 == r1 else b1
        right = b1 if left is b0 else b0
        rl, vl = left(np.array([r1]))
        rr, vr = right(np.array([r1]))
        return (FluidState(float(rl[0]), self.sign * float(vl[0])),
                FluidState(float(rr[0]), self.sign * float(vr[0])))


def eval_orbit(orbit: SteadyOrbit, r) -> FluidState:
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    p = orbit.params
    if not p.planar and np.any(r <= p.horizon):
        raise DomainError("evaluation below the horizon")
    lo, hi = orbit.domain
    if np.any(r < lo) or np.any(r > hi) or (lo > p.horizon and np.any(r == lo) and orbit.partial):
        raise DomainError(f"radius outside the orbit domain ({lo}, {hi}); sonic radius bounds it")
    rho = np.empty_like(r)
    v = np.empty_like(r)
    done = np.zeros(r.shape, dtype=bool)
    for a, b, branch in orbit.pieces:
        sel = ~done & (r >= a) & (r <= b)
        if sel.any():
            rr, vv = branch(r[sel])
            rho[sel] = rr
            v[sel] = vv
            done |= sel
    if not done.all():
        raise DomainError("radius not covered by any orbit piece")
    v = orbit.sign * v
    if scalar:
        return FluidState(float(rho[0]), float(v[0]))
    return FluidState(rho, v)


def branch_id(orbit: SteadyOrbit, r) -> np.ndarray:
    """Index of the smooth piece used at each radius."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.full(r.shape, -1, dtype=int)
    for i, (a, b, _) in enumerate(orbit.pieces):
        sel = (out < 0) & (r >= a) & (r <= b)
        out[sel] = i
    return out


def _smooth_branch(p, en, r0, rho0, v0, sigma, label):
    q0 = float(en.q_of_v(v0))
    dA0 = float(en.dA(q0))

    def target(r):
        Y = dA0 + en.dB(r, r0)
        return sigma * np.sqrt(np.maximum(Y, 0.0))

    return _Branch(p, r0, rho0, v0, target, label)


def _critical_branch(p, en, r_a, rho_a, v_a, tau, label):
    rs = en.r_s

    def t_of(r):
        return np.sign(r - rs) * np.sqrt(np.maximum(en.dB_min(r), 0.0))

    s_a = float(en.s_of_q(en.q_of_v(v_a)))
    c0 = s_a - tau * float(t_of(np.array(r_a)))

    def target(r):
        return tau * t_of(r) + c0

    return _Branch(p, r_a, rho_a, v_a, target, label)


def make_global_orbit(base: SteadyBase, p: PhysParams) -> SteadyOrbit:
    """Equilibrium through the base point, continued to the whole exterior when possible."""
    sign = -1.0 if base.v0 < 0.0 else 1.0
    r0, rho0, v0 = base.r0, base.rho0, abs(base.v0)
    lower = p.horizon if not p.planar else -math.inf
    if p.planar:
        cls = SonicClassification(math.inf, SonicRegime.NO_SONIC_POINT, domain=(lower, math.inf))
        return SteadyOrbit(base, p, cls, OrbitKind.UNIFORM, [(lower, math.inf, _UniformBranch(rho0, v0))],
                           sign=sign, domain=(lower, math.inf))
    if p.is_stiff:
        return _stiff_orbit(base, p)
    en = Energy(p)
    cls = classify(base, p)
    if v0 == 0.0:
        return SteadyOrbit(base, p, cls, OrbitKind.SMOOTH, [(lower, math.inf, _StaticBranch(p, r0, rho0))],
                           sign=sign, branch_flags=(0,), domain=(lower, math.inf))
    q0 = float(en.q_of_v(v0))
    sigma = 1.0 if q0 > 0.0 else -1.0
    if cls.regime == SonicRegime.NO_SONIC_POINT:
        br = _smooth_branch(p, en, r0, rho0, v0, sigma, int(sigma))
        return SteadyOrbit(base, p, cls, OrbitKind.SMOOTH, [(lower, math.inf, br)], sign=sign,
                           branch_flags=(int(sigma),), domain=(lower, math.inf))
    if cls.regime == SonicRegime.ONE_SONIC_POINT:
        br = _smooth_branch(p, en, r0, rho0, v0, sigma, int(sigma))
        return SteadyOrbit(base, p, cls, OrbitKind.SMOOTH, [(cls.r_bar, math.inf, br)], sign=sign,
                           branch_flags=(int(sigma),), partial=True, domain=(cls.r_bar, math.inf),
                           notes=("massless radial flow has a single sonic radius",))
    rs = en.r_s
    if cls.regime == SonicRegime.CRITICAL_SONIC:
        side = 1.0 if r0 > rs else (-1.0 if r0 < rs else 0.0)
        # exactly at the sonic point: wind profile for outflow, accretion profile for inflow
        tau = sigma * side if side != 0.0 else sign
        br = _critical_branch(p, en, r0, rho0, v0, tau, 0)
        flags = (-int(tau), int(tau))
        return SteadyOrbit(base, p, cls, OrbitKind.CONTINUOUS_SONIC_CROSSING, [(lower, math.inf, br)],
                           sign=sign, branch_flags=flags, domain=(lower, math.inf))
    # two sonic points
    P = cls.p_value
    base_br = _smooth_branch(p, en, r0, rho0, v0, sigma, int(sigma))
    outer = r0 >= rs
    if sigma > 0.0:
        dom = cls.domain
        return SteadyOrbit(base, p, cls, OrbitKind.SMOOTH, [(dom[0], dom[1], base_br)], sign=sign,
                           branch_flags=(1,), partial=True, domain=dom,
                           notes=("supersonic base with two sonic points admits no critical jump",))
    q1 = _critical_jump_q(en, P)
    v1 = p.k * math.exp(q1)
    level = float(en.dA(q1)) - P
    r1 = en.sonic_radius_on_side(level, 1 if outer else -1)
    if not math.isfinite(r1) or r1 <= p.horizon:
        raise NumericalError("critical jump radius not representable")
    sonic = cls.r_bar if outer else cls.r_under
    if not min(r0, sonic) <= r1 <= max(r0, sonic):
        dom = cls.domain
        return SteadyOrbit(base, p, cls, OrbitKind.SMOOTH, [(dom[0], dom[1], base_br)], sign=sign,
                           branch_flags=(-1,), partial=True, domain=dom, shock_between_base_and_sonic=False,
                           notes=(f"critical jump radius {r1!r} lies beyond the base point",))
    rho1 = float(base_br.density(np.array([r1]), np.array([v1]))[0])
    jumped = steady_jump(FluidState(rho1, v1), p)
    tau = 1.0 if outer else -1.0
    cont = _critical_branch(p, en, r1, float(jumped.rho), float(jumped.v), tau, 2)
    if outer:
        pieces = [(lower, r1, cont), (r1, math.inf, base_br)]
        flags = (-1, 1, -1)
        left, right = FluidState(float(jumped.rho), float(jumped.v)), FluidState(rho1, v1)
    else:
        pieces = [(lower, r1, base_br), (r1, math.inf, cont)]
        flags = (-1, 1, -1)
        left, right = FluidState(rho1, v1), FluidState(float(jumped.rho), float(jumped.v))
    if sign < 0.0:
        left, right = FluidState(left.rho, -left.v), FluidState(right.rho, -right.v)
    lax = _steady_lax(left, right, r1, p)
    between = True
    return SteadyOrbit(base, p, cls, OrbitKind.SHOCK_BEARING, pieces, sign=sign, shock_radius=r1,
                       branch_flags=flags, lax_admissible=lax, shock_between_base_and_sonic=between,
                       domain=(lower, math.inf))


def _critical_jump_q(en: Energy, P: float) -> float:
    """q1 < 0 with dA(q1) - dA(-q1) = P."""
    def J(q):
        return float(en.dA(q) - en.dA(-q)) - P

    if en.rel:
        ql = -en.q_max
        for j in range(1, 53):
            u_hi = 1.0 - 2.0 ** (-j)
            if J(ql * u_hi) < 0.0:
                return bracket_root(lambda u: J(ql * u), 0.0, u_hi) * ql
        raise NumericalError("critical jump velocity not representable")
    q_lo = -1.0
    while J(q_lo) > 0.0:
        q_lo *= 2.0
        if q_lo < -1e3:
            raise NumericalError("critical jump velocity not representable")
    return bracket_root(J, q_lo, 0.0)


def _steady_lax(left: FluidState, right: FluidState, r1: float, p: PhysParams) -> bool:
    lamL, muL = _eigenvalues(left.rho, left.v, r1, p)
    lamR, muR = _eigenvalues(right.rho, right.v, r1, p)
    return bool((lamL > 0.0 > lamR) or (muL > 0.0 > muR))


def _stiff_orbit(base: SteadyBase, p: PhysParams) -> SteadyOrbit:
    r0, rho0, v0 = base.r0, base.rho0, base.v0
    lo = max(p.horizon, r0 * math.sqrt(p.eps * abs(v0)))
    cls = SonicClassification(math.inf, SonicRegime.NO_SONIC_POINT, domain=(lo, math.inf))
    partial = lo > p.horizon
    return SteadyOrbit(base, p, cls, OrbitKind.STIFF_CLOSED_FORM, [(lo, math.inf, _StiffBranch(p, r0, rho0, v0))],
                       sign=1.0, branch_flags=(0,), partial=partial, domain=(lo, math.inf))


# ---------------------------------------------------------------------------
# public wrappers


def eval_smooth(r, base: SteadyBase, p: PhysParams) -> FluidState:
    """Smooth branch through the base, restricted to its maximal domain."""
    cls = classify(base, p)
    lo, hi = cls.domain
    rr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(rr < lo) or np.any(rr > hi):
        raise DomainError(f"radius outside the smooth domain ({lo}, {hi}) bounded by a sonic radius")
    en = Energy(p)
    v0 = abs(base.v0)
    if v0 == 0.0:
        rho, v = _StaticBranch(p, base.r0, base.rho0)(rr)
    else:
        sigma = 1.0 if v0 > p.k else -1.0
        rho, v = _smooth_branch(p, en, base.r0, base.rho0, v0, sigma, 0)(rr)
    v = np.sign(base.v0 or 1.0) * v
    return FluidState(_scalar(rho), _scalar(v))


def eval_sonic_crossing(r, base: SteadyBase, p: PhysParams) -> FluidState:
    cls = classify(base, p)
    if cls.regime != SonicRegime.CRITICAL_SONIC:
        raise MisuseError("sonic crossing profile needs critical data")
    return eval_orbit(make_global_orbit(base, p), r)


def critical_jump_radius(base: SteadyBase, p: PhysParams) -> float:
    cls = classify(base, p)
    if cls.regime != SonicRegime.TWO_SONIC_POINTS:
        raise MisuseError("critical jump radius needs two sonic points")
    orbit = make_global_orbit(base, p)
    if orbit.shock_radius is None:
        raise MisuseError("supersonic base: no critical jump exists")
    return orbit.shock_radius


def stiff_steady(r, base: SteadyBase, p: PhysParams) -> FluidState:
    if not p.is_stiff:
        raise MisuseError("closed-form profile is for the stiff model only")
    rr = np.asarray(r, dtype=float)
    if not p.planar and np.any(rr <= p.horizon):
        raise DomainError("evaluation below the horizon")
    rho, v = _stiff_profile(rr, base.r0, base.rho0, base.v0, p)
    if np.any(rho <= 0.0):
        raise DomainError("stiff profile not admissible at this radius")
    return FluidState(_scalar(rho), _scalar(v))


def nonrel_orbit(base: SteadyBase, p: PhysParams) -> SteadyOrbit:
    if p.model_kind != ModelKind.NON_RELATIVISTIC:
        raise MisuseError("non-relativistic orbit needs eps = 0")
    return make_global_orbit(base, p)


def steady_residual(orbit: SteadyOrbit, r_lo: float, r_hi: float, n: int = 1000) -> float:
    """Max over n cells of |F(r_{i+1}) - F(r_i) - integral of S| relative to the local flux size.

    Cells are geometric in the distance to the horizon (or to the sonic end of a
    partial orbit), where profiles steepen.

    The cell integral of the source uses 8-point Gauss-Legendre; a cell holding
    the steady shock is split there, since the flux must be continuous across it.
    """
    from .model import flux, source

    p = orbit.params
    h0 = 0.0 if p.planar else p.horizon
    if orbit.domain[0] > h0 and r_lo > orbit.domain[0]:
        h0 = orbit.domain[0]  # partial orbit: profile has a square-root end there
    edges = h0 + np.geomspace(r_lo - h0, r_hi - h0, n + 1)
    if orbit.shock_radius is not None and r_lo < orbit.shock_radius < r_hi:
        edges = np.unique(np.append(edges, orbit.shock_radius))
    xg, wg = np.polynomial.legendre.leggauss(8)
    a, b = edges[:-1], edges[1:]
    h = b - a
    pts = (0.5 * (a + b))[:, None] + 0.5 * h[:, None] * xg[None, :]
    st = eval_orbit(orbit, pts.ravel())
    S = source(FluidState(st.rho, st.v), pts.ravel(), p).u2.reshape(pts.shape)
    intS = 0.5 * h * (S @ wg)
    # one-sided values at the edges so that the shock cell split is respected
    left_vals = _side_limits(orbit, a, +1)
    right_vals = _side_limits(orbit, b, -1)
    Fa = flux(left_vals, a, p)
    Fb = flux(right_vals, b, p)
    out = 0.0
    for fa, fb, s_int in ((Fa.u1, Fb.u1, 0.0 * intS), (Fa.u2, Fb.u2, intS)):
        fa, fb = np.asarray(fa), np.asarray(fb)
        scale = np.abs(fa) + np.abs(fb) + np.abs(s_int)
        res = np.abs(fb - fa - s_int) / np.maximum(scale, 1e-300)
        out = max(out, float(res.max()))
    return out


def _side_limits(orbit: SteadyOrbit, x: np.ndarray, side: int) -> FluidState:
    """Orbit values at x; at the steady shock take the limit from the given side."""
    st = eval_orbit(orbit, x)
    if orbit.shock_radius is None:
        return st
    hit = x == orbit.shock_radius
    if hit.any():
        left, right = orbit.limits_at_shock()
        pick = right if side > 0 else left
        return FluidState(np.where(hit, pick.rho, st.rho), np.where(hit, pick.v, st.v))
    return st


def orbit_slope(orbit: SteadyOrbit, r: float) -> Tuple[float, float]:
    """(drho/dr, dv/dr) at r from the differential form."""
    s = eval_orbit(orbit, r)
    return steady_slope(s.rho, s.v, r, orbit.params)


def sonic_slope(p: PhysParams) -> float:
    """|dv/dr| of the critical orbit at the sonic radius."""
    rs = p.sonic_radius
    return p.k * math.sqrt(1.0 - p.a) / math.sqrt(rs * (rs - p.horizon))


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


__all__ = [
    "SonicRegime", "OrbitKind", "Energy", "SteadyBase", "SonicClassification", "SteadyOrbit",
    "first_integrals", "p_value", "p_value_closed_form", "sonic_equation", "classify", "eval_G",
    "steady_jump", "make_global_orbit", "eval_orbit", "eval_smooth", "eval_sonic_crossing",
    "critical_jump_radius", "stiff_steady", "nonrel_orbit", "steady_residual", "orbit_slope",
    "sonic_slope", "branch_id", "rate_functions",
]
