"""Approximate generalized Riemann solver on one time slab.

Outside the wave fans the solution is given by steady orbits (left, middle, right);
edges are the straight lines r0 + s (t - t0) with speeds frozen at r0.

Inside a rarefaction the fan is corrected for the source.  For a 1-fan the
rays carry z (z_t + lam z_r = S_z) along dr/dt = lam, while w enters from the
left edge; to first order w = w0 + (t - t0) a(eta) with

    a'(eta) = (a - S_w(h(eta))) / (eta - mu(h(eta))),   a(eta0) = eta0 S_w / mu at U_L(r0),

which is what the transverse equation w_t + mu w_r = S_w gives for w0 + tau a((r - r0)/tau).
A 2-fan is the mirror image, with w carried and z entering from the right edge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import DomainError, MisuseError, NumericalError, RangeError
from .model import (FluidState, InvariantPair, PhysParams, _eigenvalues, conserved, flux,
                    invariant_sources, riemann_invariants, source, state_from_invariants, weights)
from .riemann import RiemannFan, WaveDescriptor, WaveKind, _fan_interior, sample_fan, solve_riemann
from .steady import SteadyBase, SteadyOrbit, _side_limits, make_global_orbit

N_ETA = 32
N_LEVELS = 8
MAX_HALVINGS = 6


@dataclass
class FanTable:
    family: int
    etas: np.ndarray
    h: float  # time step of the levels
    rsharp: np.ndarray  # (levels + 1, n_eta)
    dw: np.ndarray  # invariant corrections relative to the frozen fan
    dz: np.ndarray
    wave: WaveDescriptor
    phi0: float
    params: PhysParams


@dataclass
class GrpSolution:
    t0: float
    r0: float
    dt_max: float
    left_orbit: SteadyOrbit
    middle_orbit: SteadyOrbit
    right_orbit: SteadyOrbit
    fan: RiemannFan
    wave_edges: Tuple[float, float, float, float]
    fan_tables: Dict[int, FanTable]
    params: PhysParams
    frozen_fan_only: bool = False
    clamped: bool = False
    notes: List[str] = field(default_factory=list)

    def __call__(self, t, r) -> FluidState:
        return eval_grp(self, t, r)

    @property
    def identical(self) -> bool:
        return self.left_orbit is self.right_orbit


# ---------------------------------------------------------------------------
# orbit helpers


def orbit_value(orbit: SteadyOrbit, r, side: int = 0) -> Tuple[FluidState, bool]:
    """Orbit evaluation clamped into the orbit domain; second item flags clamping."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    lo, hi = orbit.domain
    clamped = False
    if orbit.partial or lo > orbit.params.horizon:
        lo_ok = np.nextafter(lo, math.inf) if orbit.partial else lo
        hi_ok = hi
        rc = np.clip(r, lo_ok, hi_ok)
        clamped = bool(np.any(rc != r))
        r = rc
    st = _side_limits(orbit, r, side) if side else orbit(r)
    return FluidState(np.atleast_1d(st.rho), np.atleast_1d(st.v)), clamped


def _scalar_state(orbit: SteadyOrbit, r: float, side: int = 0) -> FluidState:
    st, _ = orbit_value(orbit, r, side)
    return FluidState(float(st.rho[0]), float(st.v[0]))


def _same_point(a: FluidState, b: FluidState) -> bool:
    return abs(math.log(a.rho / b.rho)) < 1e-14 and abs(a.v - b.v) <= 1e-14 * max(1.0, abs(a.v))


# ---------------------------------------------------------------------------
# construction


def solve_grp(t0: float, r0: float, left_orbit: SteadyOrbit, right_orbit: SteadyOrbit, dt_max: float,
              p: PhysParams, frozen_fan_only: bool = False, middle_orbit: Optional[SteadyOrbit] = None,
              n_eta: int = N_ETA, n_levels: int = N_LEVELS) -> GrpSolution:
    if not p.planar and r0 <= p.horizon:
        raise DomainError("slab anchor inside the horizon")
    if not dt_max > 0.0:
        raise MisuseError("slab height must be positive")
    UL = _scalar_state(left_orbit, r0, -1)
    UR = _scalar_state(right_orbit, r0, +1)
    fan = solve_riemann(UL, UR, r0, p)
    notes: List[str] = []
    if middle_orbit is None:
        if left_orbit is right_orbit or _same_point(fan.middle, UL):
            middle_orbit = left_orbit
        elif _same_point(fan.middle, UR):
            middle_orbit = right_orbit
        else:
            middle_orbit = make_global_orbit(SteadyBase.make(r0, fan.middle.rho, fan.middle.v, p), p)
            if middle_orbit.shock_radius is not None:
                notes.append("middle orbit carries a steady shock")
    w1, w2 = fan.wave1, fan.wave2
    edges = (w1.speed_lo, w1.speed_hi, w2.speed_lo, w2.speed_hi)
    if not (edges[0] <= edges[1] <= edges[2] <= edges[3]):
        raise NumericalError(f"unordered wave edges {edges}")
    tables: Dict[int, FanTable] = {}
    # planar form: no source, straight rays, the frozen fan is already exact
    if not frozen_fan_only and not p.planar:
        for wave in (w1, w2):
            if wave.kind == WaveKind.RAREFACTION:
                adj = left_orbit if wave.family == 1 else right_orbit
                tables[wave.family] = integrate_fan(wave, adj, t0, r0, dt_max, p, n_eta, n_levels)
    return GrpSolution(float(t0), float(r0), float(dt_max), left_orbit, middle_orbit, right_orbit, fan,
                       edges, tables, p, frozen_fan_only, notes=notes)


def _rk4_transverse(etas, S_t, other, a0, forward: bool):
    """Integrate a' = (a - S_t) / (eta - other) over the knots (RK4 on linear interpolants)."""
    n = etas.size
    out = np.empty(n)
    order = range(n) if forward else range(n - 1, -1, -1)
    idx = list(order)
    out[idx[0]] = a0

    def rhs(e, a):
        s = np.interp(e, etas, S_t)
        o = np.interp(e, etas, other)
        return (a - s) / (e - o)

    for i0, i1 in zip(idx[:-1], idx[1:]):
        a = out[i0]
        e = etas[i0]
        hstep = (etas[i1] - etas[i0]) / 4.0
        for _ in range(4):
            k1 = rhs(e, a)
            k2 = rhs(e + 0.5 * hstep, a + 0.5 * hstep * k1)
            k3 = rhs(e + 0.5 * hstep, a + 0.5 * hstep * k2)
            k4 = rhs(e + hstep, a + hstep * k3)
            a = a + hstep * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
            e = e + hstep
        out[i1] = a
    return out


def integrate_fan(wave: WaveDescriptor, adjacent: SteadyOrbit, t0: float, r0: float, dt_max: float,
                  p: PhysParams, n_eta: int = N_ETA, n_levels: int = N_LEVELS) -> FanTable:
    """Corrected rarefaction fan on [t0, t0 + dt_max] as a table over (level, eta knot)."""
    if wave.kind != WaveKind.RAREFACTION:
        raise MisuseError("fan tables are built for rarefactions only")
    fam = wave.family
    phi0 = float(weights(r0, p)[3])
    etas = np.linspace(wave.speed_lo, wave.speed_hi, n_eta)
    rho_h, v_h = _fan_interior(etas / phi0, wave, p)
    iv_h = riemann_invariants(FluidState(rho_h, v_h), p)
    Sw, Sz = invariant_sources(rho_h, v_h, r0, p)
    lam, mu = _eigenvalues(rho_h, v_h, r0, p)
    if fam == 1:
        base = wave.left_state
        Sw0, _ = invariant_sources(base.rho, base.v, r0, p)
        _, mu0 = _eigenvalues(base.rho, base.v, r0, p)
        a0 = etas[0] * Sw0 / mu0
        trans = _rk4_transverse(etas, Sw, mu, a0, forward=True)
        pin = 0
    else:
        base = wave.right_state
        _, Sz0 = invariant_sources(base.rho, base.v, r0, p)
        lam0, _ = _eigenvalues(base.rho, base.v, r0, p)
        a0 = etas[-1] * Sz0 / lam0
        trans = _rk4_transverse(etas, Sz, lam, a0, forward=False)
        pin = n_eta - 1
    if not np.all(np.isfinite(trans)):
        raise NumericalError("transverse fan correction not finite (sonic adjacent state)")
    h = dt_max / n_levels
    rs = np.empty((n_levels + 1, n_eta))
    dw = np.zeros((n_levels + 1, n_eta))
    dz = np.zeros((n_levels + 1, n_eta))
    rs[0] = r0
    inner = np.ones(n_eta, dtype=bool)
    inner[pin] = False
    # ray-carried invariant on the interior knots
    carried = (iv_h.z if fam == 1 else iv_h.w)[inner].copy()
    tr = trans[inner]
    eta_in = etas[inner]
    idx = 0 if fam == 1 else 1

    def rays(tau, r, X):
        T = (iv_h.w[inner] if fam == 1 else iv_h.z[inner]) + tau * tr
        iv = InvariantPair(T, X) if fam == 1 else InvariantPair(X, T)
        st = state_from_invariants(iv, p)
        speed = _eigenvalues(st.rho, st.v, r, p)[idx]
        S = invariant_sources(st.rho, st.v, r, p)[1 - idx]
        return speed, S

    def pinned(r):
        st = _scalar_state(adjacent, r)
        return float(_eigenvalues(st.rho, st.v, r, p)[idx])

    r_in = np.full(eta_in.shape, float(r0))
    r_pin = float(r0)
    for n in range(n_levels):
        tau = n * h
        for halv in range(MAX_HALVINGS + 1):
            try:
                sub = 2**halv
                hs = h / sub
                rr, XX, rp = r_in.copy(), carried.copy(), r_pin
                for m in range(sub):
                    ts = tau + m * hs
                    k1r, k1X = rays(ts, rr, XX)
                    k2r, k2X = rays(ts + 0.5 * hs, rr + 0.5 * hs * k1r, XX + 0.5 * hs * k1X)
                    rr, XX = rr + hs * k2r, XX + hs * k2X
                    rp = rp + hs * pinned(rp + 0.5 * hs * pinned(rp))
                break
            except (DomainError, RangeError):
                if halv == MAX_HALVINGS:
                    raise NumericalError("fan integration left the admissible set")
        r_in, carried, r_pin = rr, XX, rp
        rs[n + 1, inner] = r_in
        rs[n + 1, pin] = r_pin
        T = (n + 1) * h * tr
        if fam == 1:
            dw[n + 1, inner] = T
            dz[n + 1, inner] = carried - iv_h.z[inner]
        else:
            dz[n + 1, inner] = T
            dw[n + 1, inner] = carried - iv_h.w[inner]
        ivp = riemann_invariants(_scalar_state(adjacent, r_pin), p)
        dw[n + 1, pin] = ivp.w - iv_h.w[pin]
        dz[n + 1, pin] = ivp.z - iv_h.z[pin]
    if np.any(np.diff(rs[1:], axis=1) <= 0.0):
        raise NumericalError("fan rays crossed within the slab")
    return FanTable(fam, etas, h, rs, dw, dz, wave, phi0, p)


# ---------------------------------------------------------------------------
# evaluation


def _fan_eval(sol: GrpSolution, wave: WaveDescriptor, tau: float, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p = sol.params
    phi0 = float(weights(sol.r0, p)[3])
    tab = sol.fan_tables.get(wave.family)
    if tab is None:
        xi = np.clip((r - sol.r0) / tau, wave.speed_lo, wave.speed_hi)
        return _fan_interior(xi / phi0, wave, p)
    f = min(tau / tab.h, tab.rsharp.shape[0] - 1.0)
    n = min(int(f), tab.rsharp.shape[0] - 2)
    th = f - n
    if n == 0 and th == 0.0:
        eta = np.clip((r - sol.r0) / tau, tab.etas[0], tab.etas[-1])
    else:
        # interpolate in (r - r0) / tau: absolute radii lose all resolution as tau -> 0
        if n == 0:
            # first level: rays leave r0 tangent to eta, so fit r - r0 = eta tau + c tau^2
            row = tab.etas + ((tab.rsharp[1] - sol.r0) / tab.h - tab.etas) * th
        else:
            row = ((1.0 - th) * (tab.rsharp[n] - sol.r0) + th * (tab.rsharp[n + 1] - sol.r0)) / tau
        eta = np.interp((r - sol.r0) / tau, row, tab.etas)
    cw = (1.0 - th) * tab.dw[n] + th * tab.dw[n + 1]
    cz = (1.0 - th) * tab.dz[n] + th * tab.dz[n + 1]
    rho_h, v_h = _fan_interior(eta / phi0, wave, p)
    iv = riemann_invariants(FluidState(rho_h, v_h), p)
    st = state_from_invariants(InvariantPair(iv.w + np.interp(eta, tab.etas, cw),
                                             iv.z + np.interp(eta, tab.etas, cz)), p)
    return np.atleast_1d(st.rho), np.atleast_1d(st.v)


def eval_grp(sol: GrpSolution, t: float, r) -> FluidState:
    """Piecewise solution on the slab; t is a scalar, r scalar or array."""
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    tau = float(t) - sol.t0
    if tau < 0.0 or tau > sol.dt_max * (1.0 + 1e-12):
        raise DomainError("time outside the slab")
    rho = np.empty_like(r)
    v = np.empty_like(r)
    s1m, s1p, s2m, s2p = sol.wave_edges
    if tau == 0.0:
        regions = [(r < sol.r0, sol.left_orbit, -1), (r > sol.r0, sol.right_orbit, +1)]
        at = r == sol.r0
        if at.any():
            st = sample_fan(sol.fan, 0.0)
            rho[at], v[at] = st.rho, st.v
        fans = []
    else:
        xi = (r - sol.r0) / tau
        w1, w2 = sol.fan.wave1, sol.fan.wave2
        rare1 = w1.kind == WaveKind.RAREFACTION
        rare2 = w2.kind == WaveKind.RAREFACTION
        in1 = (xi >= s1m) & (xi <= s1p) & rare1
        in2 = (xi >= s2m) & (xi <= s2p) & rare2
        left = (xi < s1m) & ~in1
        mid = (xi >= s1p) & (xi < s2m) & ~in1 & ~in2
        right = ~left & ~mid & ~in1 & ~in2
        regions = [(left, sol.left_orbit, -1), (mid, sol.middle_orbit, 0), (right, sol.right_orbit, +1)]
        fans = [(in1, w1), (in2, w2)]
    for sel, orbit, side in regions:
        if sel.any():
            st, cl = orbit_value(orbit, r[sel])
            sol.clamped |= cl
            rho[sel], v[sel] = st.rho, st.v
    for sel, wave in fans:
        if sel.any():
            rho[sel], v[sel] = _fan_eval(sol, wave, tau, r[sel])
    if scalar:
        return FluidState(float(rho[0]), float(v[0]))
    return FluidState(rho, v)


def grp_region(sol: GrpSolution, t: float, r: float) -> str:
    """Name of the piece of the slab solution that holds (t, r)."""
    tau = t - sol.t0
    if tau <= 0.0:
        return "left" if r < sol.r0 else "right"
    xi = (r - sol.r0) / tau
    s1m, s1p, s2m, s2p = sol.wave_edges
    if sol.fan.wave1.kind == WaveKind.RAREFACTION and s1m <= xi <= s1p:
        return "fan1"
    if sol.fan.wave2.kind == WaveKind.RAREFACTION and s2m <= xi <= s2p:
        return "fan2"
    if xi < s1m:
        return "left"
    if xi < s2m:
        return "middle"
    return "right"


# ---------------------------------------------------------------------------
# diagnostics


def _edge_value(sol: GrpSolution, t: float, r_edge: float, region: str) -> FluidState:
    """Value at an edge taken from a named region (orbit or fan)."""
    tau = t - sol.t0
    w = {"fan1": sol.fan.wave1, "fan2": sol.fan.wave2}
    if region in w:
        rho, v = _fan_eval(sol, w[region], tau, np.array([r_edge]))
        return FluidState(float(rho[0]), float(v[0]))
    orbit = {"left": sol.left_orbit, "middle": sol.middle_orbit, "right": sol.right_orbit}[region]
    return _scalar_state(orbit, r_edge)


def shock_defects(sol: GrpSolution, t: float) -> List[float]:
    """RH defect |s [U] - [F]| at each discontinuous wave edge, in weighted conserved variables."""
    p = sol.params
    out = []
    for wave, lo, hi in ((sol.fan.wave1, "left", "middle"), (sol.fan.wave2, "middle", "right")):
        if wave.kind not in (WaveKind.SHOCK, WaveKind.CONTACT):
            continue
        s = wave.speed
        re = sol.r0 + s * (t - sol.t0)
        a, b = _edge_value(sol, t, re, lo), _edge_value(sol, t, re, hi)
        ua, ub = conserved(a, re, p), conserved(b, re, p)
        fa, fb = flux(a, re, p), flux(b, re, p)
        out.append(max(abs(s * (ub[i] - ua[i]) - (fb[i] - fa[i])) for i in range(2)))
    return out


def fan_edge_mismatch(sol: GrpSolution, t: float) -> List[float]:
    """Invariant gap between the fan and the adjacent orbit at both straight edges of each rarefaction."""
    p = sol.params
    out = []
    for wave, lo, hi, name in ((sol.fan.wave1, "left", "middle", "fan1"), (sol.fan.wave2, "middle", "right", "fan2")):
        if wave.kind != WaveKind.RAREFACTION:
            continue
        gap = 0.0
        for s, orb in ((wave.speed_lo, lo), (wave.speed_hi, hi)):
            re = sol.r0 + s * (t - sol.t0)
            a = riemann_invariants(_edge_value(sol, t, re, name), p)
            b = riemann_invariants(_edge_value(sol, t, re, orb), p)
            gap = max(gap, abs(a.w - b.w), abs(a.z - b.z))
        out.append(gap)
    return out


TestFunction = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray, np.ndarray]]


def _gauss_pieces(breaks: np.ndarray, n: int = 8):
    xg, wg = np.polynomial.legendre.leggauss(n)
    a, b = breaks[:-1], breaks[1:]
    keep = b > a
    a, b = a[keep], b[keep]
    x = (0.5 * (a + b))[:, None] + 0.5 * (b - a)[:, None] * xg[None, :]
    w = 0.5 * (b - a)[:, None] * wg[None, :]
    return x.ravel(), w.ravel()


def _r_breaks(sol: GrpSolution, tau: float, lo: float, hi: float) -> np.ndarray:
    pts = [lo, hi]
    if tau > 0.0:
        pts += [sol.r0 + s * tau for s in sol.wave_edges]
        for tab in sol.fan_tables.values():
            f = min(tau / tab.h, tab.rsharp.shape[0] - 1.0)
            n = min(int(f), tab.rsharp.shape[0] - 2)
            th = f - n
            pts += list((1.0 - th) * tab.rsharp[n] + th * tab.rsharp[n + 1])
    else:
        pts.append(sol.r0)
    for orb in (sol.left_orbit, sol.middle_orbit, sol.right_orbit):
        if orb.shock_radius is not None:
            pts.append(orb.shock_radius)
    pts = np.unique(np.clip(np.array(pts, dtype=float), lo, hi))
    return pts


def weak_residual(sol: GrpSolution, dt: float, dr: float, phi: TestFunction) -> Tuple[float, float]:
    """Theta minus its four boundary integrals, per conserved component.

    Theta is the slab integral of U phi_t + F phi_r + S phi over [t0, t0+dt] x [r0-dr, r0+dr].
    Quadrature is Gauss on pieces split at every edge, fan knot and level.
    """
    p = sol.params
    lo, hi = sol.r0 - dr, sol.r0 + dr
    if not p.planar and lo <= p.horizon:
        raise MisuseError("slab reaches the horizon")
    if dt > sol.dt_max * (1.0 + 1e-12):
        raise MisuseError("dt exceeds the slab height")
    states = (sol.fan.left, sol.fan.middle, sol.fan.right)
    fastest = max(max(-float(_eigenvalues(s.rho, s.v, sol.r0, p)[0]), float(_eigenvalues(s.rho, s.v, sol.r0, p)[1]))
                  for s in states)
    fastest = max(fastest, abs(sol.wave_edges[0]), abs(sol.wave_edges[3]))
    if not dr / dt > fastest:
        raise MisuseError("stability condition dr/dt > max(-lam, mu) violated")
    # time pieces: fan levels
    lv = [0.0, dt]
    for tab in sol.fan_tables.values():
        lv += [k * tab.h for k in range(tab.rsharp.shape[0]) if k * tab.h < dt]
    taus, wts = _gauss_pieces(np.unique(np.array(lv)))
    theta = np.zeros(2)
    for tau, wt in zip(taus, wts):
        x, wx = _gauss_pieces(_r_breaks(sol, tau, lo, hi))
        t = sol.t0 + tau
        st = eval_grp(sol, t, x)
        U, F, S = conserved(st, x, p), flux(st, x, p), source(st, x, p)
        ph, pt, pr = phi(np.full_like(x, t), x)
        for i in range(2):
            theta[i] += wt * np.sum(wx * (U[i] * pt + F[i] * pr + S[i] * ph))
    bnd = np.zeros(2)
    for tau, sgn in ((dt, 1.0), (0.0, -1.0)):
        x, wx = _gauss_pieces(_r_breaks(sol, tau, lo, hi))
        t = sol.t0 + tau
        if tau == 0.0:
            # one-sided orbit values at t0
            st = FluidState(*(np.where(x < sol.r0, a, b) for a, b in zip(
                orbit_value(sol.left_orbit, x)[0], orbit_value(sol.right_orbit, x)[0])))
        else:
            st = eval_grp(sol, t, x)
        U = conserved(st, x, p)
        ph = phi(np.full_like(x, t), x)[0]
        for i in range(2):
            bnd[i] += sgn * np.sum(wx * U[i] * ph)
    tq, tw = _gauss_pieces(np.array([0.0, dt]), 16)
    for rb, sgn, orb in ((hi, 1.0, sol.right_orbit), (lo, -1.0, sol.left_orbit)):
        st, _ = orbit_value(orb, np.full_like(tq, rb))
        F = flux(st, rb, p)
        ph = phi(sol.t0 + tq, np.full_like(tq, rb))[0]
        for i in range(2):
            bnd[i] += sgn * np.sum(tw * F[i] * ph)
    rem = theta - bnd
    return float(rem[0]), float(rem[1])


__all__ = ["GrpSolution", "FanTable", "solve_grp", "integrate_fan", "eval_grp", "weak_residual",
           "shock_defects", "fan_edge_mismatch", "orbit_value", "grp_region"]
