"""Parameters, conserved variables and eigenstructure of the fluid model family."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np

from .errors import ConfigError, DomainError, InversionError, RangeError

ArrayLike = Union[float, np.ndarray]

RHO_FLOOR = 1e-300
LIGHT_GUARD = 1e-12
_STIFF_TOL = 1e-14


class ModelKind(enum.Enum):
    RELATIVISTIC = "Relativistic"
    NON_RELATIVISTIC = "NonRelativistic"
    STIFF = "Stiff"
    MINKOWSKI = "Minkowski"


class PressureLaw(enum.Enum):
    GENUINELY_NONLINEAR = "GenuinelyNonlinear"
    LINEARLY_DEGENERATE = "LinearlyDegenerate"
    NON_STRICTLY_HYPERBOLIC = "NonStrictlyHyperbolic"


class FluidState(NamedTuple):
    rho: ArrayLike
    v: ArrayLike


class ConservedPair(NamedTuple):
    u1: ArrayLike
    u2: ArrayLike


class InvariantPair(NamedTuple):
    w: ArrayLike
    z: ArrayLike


@dataclass(frozen=True)
class PhysParams:
    """Model selector (eps, k, M).

    With ``eps = 0`` the black-hole mass enters through ``m`` only and the
    horizon collapses to the origin.  ``planar`` drops the radial weights and
    the source entirely (homogeneous slab form of the flat model).
    """

    eps: float
    k: float
    mass_M: float = 0.0
    m: Optional[float] = None
    planar: bool = False
    _m: float = field(init=False, repr=False, compare=False, default=0.0)

    def __post_init__(self):
        eps, k, M = float(self.eps), float(self.k), float(self.mass_M)
        if not (math.isfinite(eps) and eps >= 0.0):
            raise ConfigError(f"eps must be finite and >= 0, got {eps}")
        if not (math.isfinite(k) and k >= 0.0):
            raise ConfigError(f"k must be finite and >= 0, got {k}")
        if not (math.isfinite(M) and M >= 0.0):
            raise ConfigError(f"mass_M must be finite and >= 0, got {M}")
        if eps > 0.0:
            if eps * k > 1.0 + _STIFF_TOL:
                raise ConfigError("sound speed exceeds light speed (eps*k > 1)")
            m = M / eps**2
            if self.m is not None and not math.isclose(self.m, m, rel_tol=1e-12, abs_tol=1e-300):
                raise ConfigError(f"m={self.m} inconsistent with M/eps^2={m}")
        else:
            if self.m is None:
                raise ConfigError("eps = 0 requires the reduced mass m")
            if M != 0.0:
                raise ConfigError("eps = 0: give the mass through m, keep mass_M = 0")
            m = float(self.m)
            if not (math.isfinite(m) and m >= 0.0):
                raise ConfigError(f"m must be finite and >= 0, got {m}")
        if self.planar and m != 0.0:
            raise ConfigError("planar form requires a vanishing mass")
        object.__setattr__(self, "_m", m)

    # derived constants -------------------------------------------------
    @property
    def reduced_mass(self) -> float:
        return self._m

    @property
    def a(self) -> float:
        return (self.eps * self.k) ** 2

    @property
    def is_stiff(self) -> bool:
        return self.eps > 0.0 and abs(self.eps * self.k - 1.0) <= _STIFF_TOL

    @property
    def kappa(self) -> float:
        if self.is_stiff:
            return 0.0
        return (1.0 - self.a) / (1.0 + self.a)

    @property
    def chi(self) -> float:
        if self.is_stiff:
            return 1.0
        return 2.0 * self.eps * self.k / (1.0 + self.a)

    @property
    def inv_coef(self) -> float:
        """Coefficient of ln(rho) in the Riemann invariants."""
        if self.is_stiff:
            return 0.5 / self.eps
        return self.k / (1.0 + self.a)

    @property
    def kinv(self) -> float:
        """kappa / (1 - kappa); infinite in the non-relativistic limit."""
        if self.eps == 0.0:
            return math.inf
        return (1.0 - self.a) / (2.0 * self.a)

    @property
    def horizon(self) -> float:
        return 2.0 * self.mass_M

    @property
    def model_kind(self) -> ModelKind:
        if self.eps == 0.0:
            return ModelKind.NON_RELATIVISTIC
        if self.is_stiff:
            return ModelKind.STIFF
        if self.mass_M == 0.0:
            return ModelKind.MINKOWSKI
        return ModelKind.RELATIVISTIC

    @property
    def light_speed(self) -> float:
        return math.inf if self.eps == 0.0 else 1.0 / self.eps

    @property
    def sonic_radius(self) -> Optional[float]:
        """Radius where the steady energy function in r is minimal (None without mass)."""
        if self.planar or self._m == 0.0:
            return None
        if self.eps == 0.0:
            return self._m / (2.0 * self.k**2)
        if self.is_stiff:
            return None
        return (1.0 + 3.0 * self.a) * self.mass_M / (2.0 * self.a)

    def with_(self, **kw) -> "PhysParams":
        d = dict(eps=self.eps, k=self.k, mass_M=self.mass_M, m=self.m, planar=self.planar)
        d.update(kw)
        if "eps" in kw or "mass_M" in kw:
            if "m" not in kw:
                d["m"] = None if d["eps"] > 0 else self._m
        return PhysParams(**d)


def classify_pressure_law(eps: float, k: float) -> PressureLaw:
    if k == 0.0:
        return PressureLaw.NON_STRICTLY_HYPERBOLIC
    if eps > 0.0 and abs(eps * k - 1.0) <= _STIFF_TOL:
        return PressureLaw.LINEARLY_DEGENERATE
    return PressureLaw.GENUINELY_NONLINEAR


# ---------------------------------------------------------------------------
# admissibility and geometry


def check_radius(r: ArrayLike, p: PhysParams) -> None:
    r = np.asarray(r, dtype=float)
    if p.planar:
        if not np.all(np.isfinite(r)):
            raise DomainError("non-finite radius")
        return
    if not np.all(r > p.horizon) or not np.all(np.isfinite(r)):
        raise DomainError(f"radius must exceed the horizon 2M={p.horizon}")


def check_state(s: FluidState, p: PhysParams) -> None:
    rho = np.asarray(s.rho, dtype=float)
    v = np.asarray(s.v, dtype=float)
    if not np.all(rho >= RHO_FLOOR) or not np.all(np.isfinite(rho)):
        raise DomainError("density must be positive and finite")
    if not np.all(np.isfinite(v)):
        raise DomainError("velocity must be finite")
    if p.eps > 0.0 and np.any(np.abs(p.eps * v) > 1.0 - LIGHT_GUARD):
        raise DomainError("velocity not below light speed")


def weights(r: ArrayLike, p: PhysParams):
    """Radial weights (alpha, beta, gamma) of U1, U2=F1, F2 and the lapse factor."""
    if p.planar:
        one = np.ones_like(np.asarray(r, dtype=float))
        return one, one, one, one
    r = np.asarray(r, dtype=float)
    h = r - p.horizon
    return r * r, r * h, h * h, h / r


def weight_derivs(r: ArrayLike, p: PhysParams):
    if p.planar:
        zero = np.zeros_like(np.asarray(r, dtype=float))
        return zero, zero
    r = np.asarray(r, dtype=float)
    return 2.0 * r - p.horizon, 2.0 * (r - p.horizon)


def rate_functions(rho: ArrayLike, v: ArrayLike, p: PhysParams):
    """Unweighted densities (a, b, c): U = (alpha a, beta b), F = (beta b, gamma c)."""
    e2 = p.eps**2
    d = 1.0 - e2 * v * v
    a_ = (1.0 + e2 * p.a * v * v) * rho / d
    b_ = (1.0 + p.a) * rho * v / d
    c_ = (v * v + p.k**2) * rho / d
    return a_, b_, c_


def rate_gradients(rho: ArrayLike, v: ArrayLike, p: PhysParams):
    """Partial derivatives of (a, b, c) with respect to (rho, v)."""
    e2 = p.eps**2
    d = 1.0 - e2 * v * v
    a_, b_, c_ = rate_functions(rho, v, p)
    ap = 2.0 * e2 * v * (1.0 + p.a) / d**2
    bp = (1.0 + p.a) * (1.0 + e2 * v * v) / d**2
    cp = 2.0 * v * (1.0 + p.a) / d**2
    return (a_ / rho, ap * rho), (b_ / rho, bp * rho), (c_ / rho, cp * rho)


# ---------------------------------------------------------------------------
# public operations


def eigenvalues(s: FluidState, r: ArrayLike, p: PhysParams) -> Tuple[ArrayLike, ArrayLike]:
    check_radius(r, p)
    check_state(s, p)
    return _eigenvalues(s.rho, s.v, r, p)


def _eigenvalues(rho, v, r, p: PhysParams):
    del rho
    phi = weights(r, p)[3]
    e2k = p.eps**2 * p.k
    lam = phi * (v - p.k) / (1.0 - e2k * v)
    mu = phi * (v + p.k) / (1.0 + e2k * v)
    return lam, mu


def rapidity(v: ArrayLike, eps: float) -> ArrayLike:
    """Velocity part of the invariants: artanh(eps v)/eps, or v when eps = 0."""
    if eps == 0.0:
        return v
    return np.arctanh(eps * np.asarray(v, dtype=float)) / eps


def velocity_from_rapidity(phi: ArrayLike, eps: float) -> ArrayLike:
    if eps == 0.0:
        return phi
    return np.tanh(eps * np.asarray(phi, dtype=float)) / eps


def riemann_invariants(s: FluidState, p: PhysParams) -> InvariantPair:
    check_state(s, p)
    f = rapidity(s.v, p.eps)
    g = p.inv_coef * np.log(s.rho)
    return InvariantPair(f + g, f - g)


def state_from_invariants(iv: InvariantPair, p: PhysParams) -> FluidState:
    w = np.asarray(iv.w, dtype=float)
    z = np.asarray(iv.z, dtype=float)
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(z))):
        raise DomainError("invariants must be finite")
    x = (w - z) / (2.0 * p.inv_coef)
    if np.any(x > 709.0) or np.any(x < -690.0):
        raise RangeError("density not representable for these invariants")
    v = velocity_from_rapidity(0.5 * (w + z), p.eps)
    if p.eps > 0.0 and np.any(np.abs(p.eps * v) > 1.0 - LIGHT_GUARD):
        raise RangeError("velocity saturates the light speed")
    return FluidState(_unwrap(np.exp(x)), _unwrap(v))


def scaled_velocity(v: ArrayLike, eps: float) -> ArrayLike:
    """nu = (1 + eps v) / (2 eps (1 - eps v))."""
    if eps == 0.0:
        raise DomainError("scaled velocity is singular at eps = 0")
    return (1.0 + eps * v) / (2.0 * eps * (1.0 - eps * v))


def conserved(s: FluidState, r: ArrayLike, p: PhysParams) -> ConservedPair:
    check_radius(r, p)
    check_state(s, p)
    al, be, _, _ = weights(r, p)
    a_, b_, _ = rate_functions(s.rho, s.v, p)
    return ConservedPair(_unwrap(al * a_), _unwrap(be * b_))


def flux(s: FluidState, r: ArrayLike, p: PhysParams) -> ConservedPair:
    check_radius(r, p)
    check_state(s, p)
    _, be, ga, _ = weights(r, p)
    _, b_, c_ = rate_functions(s.rho, s.v, p)
    return ConservedPair(_unwrap(be * b_), _unwrap(ga * c_))


def _source2(rho, v, r, p: PhysParams):
    if p.planar:
        return np.zeros_like(np.asarray(rho * v * r, dtype=float))
    a_, _, c_ = rate_functions(rho, v, p)
    M = p.mass_M
    h = r - p.horizon
    phi = h / r
    return 3.0 * M * phi * c_ - p.reduced_mass * phi * a_ + 2.0 * h * h * p.k**2 * rho / r


def source(s: FluidState, r: ArrayLike, p: PhysParams) -> ConservedPair:
    check_radius(r, p)
    check_state(s, p)
    s2 = _source2(s.rho, s.v, np.asarray(r, dtype=float), p)
    return ConservedPair(_unwrap(np.zeros_like(s2)), _unwrap(s2))


def primitive_from_conserved(c: ConservedPair, r: ArrayLike, p: PhysParams) -> FluidState:
    check_radius(r, p)
    u1 = np.asarray(c.u1, dtype=float)
    u2 = np.asarray(c.u2, dtype=float)
    if not np.all(u1 > 0.0):
        raise InversionError("first conserved density must be positive")
    al, be, _, _ = weights(r, p)
    if np.any(be == 0.0):
        raise InversionError("momentum weight vanishes")
    q = u2 * al / (u1 * be * (1.0 + p.a))
    e4k2 = p.eps**2 * p.a
    disc = 1.0 - 4.0 * e4k2 * q * q
    if np.any(disc < 0.0):
        raise InversionError("conserved pair outside the physical range")
    v = 2.0 * q / (1.0 + np.sqrt(disc))
    if p.eps > 0.0 and np.any(np.abs(p.eps * v) > 1.0 - LIGHT_GUARD):
        raise InversionError("implied velocity reaches light speed")
    a_unit = (1.0 + e4k2 * v * v) / (1.0 - p.eps**2 * v * v)
    rho = u1 / (al * a_unit)
    if not np.all(rho >= RHO_FLOOR):
        raise InversionError("implied density not positive")
    return FluidState(_unwrap(rho), _unwrap(v))


def quasilinear(rho, v, r, p: PhysParams):
    """Matrices of P W_t + Q W_r = g in primitive variables W = (rho, v)."""
    al, be, ga, _ = weights(r, p)
    (ar, av), (br, bv), (cr, cv) = rate_gradients(rho, v, p)
    _, b_, c_ = rate_functions(rho, v, p)
    dbe, dga = weight_derivs(r, p)
    P = ((al * ar, al * av), (be * br, be * bv))
    Q = ((be * br, be * bv), (ga * cr, ga * cv))
    g = (-dbe * b_, _source2(rho, v, r, p) - dga * c_)
    return P, Q, g


def _solve2(A, g):
    (a11, a12), (a21, a22) = A
    det = a11 * a22 - a12 * a21
    return (a22 * g[0] - a12 * g[1]) / det, (a11 * g[1] - a21 * g[0]) / det


def invariant_sources(rho, v, r, p: PhysParams):
    """Right-hand sides of w_t + mu w_r = S_w and z_t + lam z_r = S_z."""
    P, _, g = quasilinear(rho, v, r, p)
    drho, dv = _solve2(P, g)
    c = p.inv_coef
    dphi = 1.0 / (1.0 - p.eps**2 * v * v)
    return c * drho / rho + dphi * dv, -c * drho / rho + dphi * dv


def steady_slope(rho, v, r, p: PhysParams):
    """(drho/dr, dv/dr) of a smooth steady solution; singular at sonic states."""
    _, Q, g = quasilinear(rho, v, r, p)
    return _solve2(Q, g)


def _unwrap(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x
