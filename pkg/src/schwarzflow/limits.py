"""Limiting models as stand-alone configurations, with cross-limit consistency checks.

The limit formulas below are written out directly rather than obtained by setting
parameters in ``model``; comparing the two is the point of ``limit_consistency``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Dict

import numpy as np

from .errors import ConfigError, HalfCurveError
from .model import FluidState, PhysParams, _eigenvalues, _source2, rate_functions, weights
from .riemann import RiemannFan, WaveDescriptor, WaveKind


class LimitKind(enum.Enum):
    STIFF = "Stiff"
    NON_RELATIVISTIC = "NonRelativistic"
    MINKOWSKI = "Minkowski"
    NONREL_MINKOWSKI = "NonRelMinkowski"


@dataclass(frozen=True)
class LimitCase:
    kind: LimitKind
    params: PhysParams

    def __post_init__(self):
        p = self.params
        ok = {
            LimitKind.STIFF: p.is_stiff,
            LimitKind.NON_RELATIVISTIC: p.eps == 0.0,
            LimitKind.MINKOWSKI: p.eps > 0.0 and p.mass_M == 0.0,
            LimitKind.NONREL_MINKOWSKI: p.eps == 0.0 and p.reduced_mass == 0.0,
        }[self.kind]
        if not ok:
            raise ConfigError(f"parameters {p} do not describe the {self.kind.value} model")


# ---------------------------------------------------------------------------
# limit model formulas: returns (F1, F2, S2, lam, mu) on broadcast arrays


def _nonrel(rho, v, r, k, m):
    r2 = r * r
    return r2 * rho * v, r2 * rho * (v * v + k * k), -m * rho + 2.0 * r * k * k * rho, v - k, v + k


def _minkowski(rho, v, r, eps, k):
    e2 = eps * eps
    d = 1.0 - e2 * v * v
    a = e2 * k * k
    r2 = r * r
    b_ = (1.0 + a) * rho * v / d
    c_ = (v * v + k * k) * rho / d
    lam = (v - k) / (1.0 - e2 * k * v)
    mu = (v + k) / (1.0 + e2 * k * v)
    return r2 * b_, r2 * c_, 2.0 * r * k * k * rho, lam, mu


def _stiff(rho, v, r, eps, M):
    e2 = eps * eps
    d = 1.0 - e2 * v * v
    h = r - 2.0 * M
    phi = h / r
    m = M / e2
    a_ = (1.0 + e2 * v * v) * rho / d
    b_ = 2.0 * rho * v / d
    c_ = (v * v + 1.0 / e2) * rho / d
    s2 = 3.0 * M * phi * c_ - m * phi * a_ + 2.0 * h * h * rho / (e2 * r)
    speed = phi / eps * np.ones_like(v)
    return r * h * b_, h * h * c_, s2, -speed, speed


def _full(rho, v, r, p: PhysParams):
    _, be, ga, _ = weights(r, p)
    _, b_, c_ = rate_functions(rho, v, p)
    lam, mu = _eigenvalues(rho, v, r, p)
    return be * b_, ga * c_, _source2(rho, v, r, p), lam, mu


def limit_model(case: LimitCase, rho, v, r):
    p = case.params
    if case.kind == LimitKind.STIFF:
        return _stiff(rho, v, r, p.eps, p.mass_M)
    if case.kind == LimitKind.MINKOWSKI:
        return _minkowski(rho, v, r, p.eps, p.k)
    return _nonrel(rho, v, r, p.k, p.reduced_mass)


# ---------------------------------------------------------------------------
# consistency


@dataclass
class LimitReport:
    kind: LimitKind
    smalls: np.ndarray
    deviations: Dict[str, np.ndarray]  # per quantity, one entry per small value
    orders: Dict[str, float]
    max_deviation: float
    order: float
    exact: bool = False


def _grid(scale: float):
    rho = np.array([0.5, 1.0, 2.0])
    v = np.linspace(-0.3, 0.3, 7)
    r = scale * np.array([3.0, 5.0, 10.0, 20.0])
    R, V, Rr = np.meshgrid(rho, v, r, indexing="ij")
    return R.ravel(), V.ravel(), Rr.ravel()


def _rel(a, b):
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _deviations(full, lim) -> Dict[str, float]:
    names = ("flux1", "flux2", "source", "lambda", "mu")
    return {n: _rel(f, g) for n, f, g in zip(names, full, lim)}


def limit_consistency(base: PhysParams, kind: LimitKind, small: float, n: int = 4) -> LimitReport:
    """Deviation of the full model from a limit model at small, small/2, ..., and fitted orders.

    base fixes the parameters that stay put: (k, m) for the non-relativistic limit,
    (eps, k) for the Minkowski limit and (eps, M) for the stiff limit, where small is
    1/eps - k and small = 0 checks the stiff formulas directly.
    """
    smalls = small * 0.5 ** np.arange(n) if small > 0.0 else np.zeros(1)
    devs: Dict[str, list] = {}
    for s in smalls:
        if kind in (LimitKind.NON_RELATIVISTIC, LimitKind.NONREL_MINKOWSKI):
            m = base.reduced_mass if kind == LimitKind.NON_RELATIVISTIC else 0.0
            full_p = PhysParams(eps=float(s), k=base.k, mass_M=float(s) ** 2 * m)
            lim = LimitCase(kind, PhysParams(eps=0.0, k=base.k, m=m))
            scale = max(m, 1.0)
        elif kind == LimitKind.MINKOWSKI:
            full_p = PhysParams(eps=base.eps, k=base.k, mass_M=float(s))
            lim = LimitCase(kind, PhysParams(eps=base.eps, k=base.k, mass_M=0.0))
            scale = 1.0
        else:
            eps = base.eps
            full_p = PhysParams(eps=eps, k=1.0 / eps - float(s), mass_M=base.mass_M)
            lim = LimitCase(kind, PhysParams(eps=eps, k=1.0 / eps, mass_M=base.mass_M))
            scale = max(base.mass_M, 1.0)
        rho, v, r = _grid(scale)
        d = _deviations(_full(rho, v, r, full_p), limit_model(lim, rho, v, r))
        for key, val in d.items():
            devs.setdefault(key, []).append(val)
    dev_arr = {k: np.array(v) for k, v in devs.items()}
    orders: Dict[str, float] = {}
    if smalls.size > 1:
        for key, vals in dev_arr.items():
            # quantities already exact to rounding carry no order
            if np.all(vals > 1e-14):
                orders[key] = float(np.polyfit(np.log(smalls), np.log(vals), 1)[0])
    mx = float(max(v.max() for v in dev_arr.values()))
    order = min(orders.values()) if orders else math.nan
    return LimitReport(kind, smalls, dev_arr, orders, mx, order, exact=(small == 0.0 and mx <= 1e-13))


# ---------------------------------------------------------------------------
# stiff Riemann problem


def stiff_riemann(left: FluidState, right: FluidState, r0: float, p: PhysParams) -> RiemannFan:
    """Two contacts at -+(1 - 2M/r0)/eps; w carries over the 1-contact, z over the 2-contact."""
    if not p.is_stiff:
        raise ConfigError("stiff Riemann solver needs k = 1/eps")
    eps = p.eps
    c = 0.5 / eps

    def inv(s):
        y = 0.5 * math.log((1.0 + eps * s.v) / (1.0 - eps * s.v)) / eps
        return y + c * math.log(s.rho), y - c * math.log(s.rho)

    wL, _ = inv(left)
    _, zR = inv(right)
    x = (wL - zR) / (2.0 * c)
    y = 0.5 * (wL + zR)
    mid = FluidState(math.exp(x), math.tanh(eps * y) / eps)
    phi = 1.0 if p.planar else (r0 - 2.0 * p.mass_M) / r0
    s = phi / eps

    def wave(fam, a, b, speed):
        kind = WaveKind.NONE if abs(math.log(b.rho / a.rho)) < 1e-14 else WaveKind.CONTACT
        return WaveDescriptor(fam, kind, speed, speed, a, b)

    return RiemannFan(float(r0), left, mid, right, wave(1, left, mid, -s), wave(2, mid, right, s), p)


# ---------------------------------------------------------------------------
# non-relativistic wave curves


def nonrel_riemann_curves(base: FluidState, rho: float, family: int, curve_kind: str, k: float) -> FluidState:
    """Shock: v - v_b = -+k (sqrt(rho/rho_b) - sqrt(rho_b/rho)); rarefaction: v - v_b = -+k ln(rho/rho_b).

    The upper sign is family 1 (from a left state), the lower family 2 (into a right state).
    """
    if family not in (1, 2):
        raise ConfigError("family must be 1 or 2")
    sgn = -1.0 if family == 1 else 1.0
    ratio = rho / base.rho
    if curve_kind.lower() == "shock":
        if ratio < 1.0:
            raise HalfCurveError("shock curves carry densities above the base density")
        dv = k * (math.sqrt(ratio) - math.sqrt(1.0 / ratio))
    elif curve_kind.lower() == "rarefaction":
        if ratio > 1.0:
            raise HalfCurveError("rarefaction curves carry densities below the base density")
        dv = k * math.log(ratio)
    else:
        raise ConfigError(f"unknown curve kind {curve_kind!r}")
    return FluidState(float(rho), float(base.v + sgn * dv))


__all__ = ["LimitKind", "LimitCase", "LimitReport", "limit_model", "limit_consistency", "stiff_riemann",
           "nonrel_riemann_curves"]
