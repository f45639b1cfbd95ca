"""The ten acceptance criteria as callable checks (shared by the CLI and the test suite)."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .model import (FluidState, PhysParams, conserved, eigenvalues, flux, riemann_invariants, scaled_velocity,
                    steady_slope)
from .steady import (SteadyBase, first_integrals, make_global_orbit, p_value, p_value_closed_form,
                     steady_residual, stiff_steady)


@dataclass
class CriterionResult:
    cid: int
    title: str
    measured: float
    tolerance: float
    passed: bool
    seconds: float
    budget: float
    detail: Dict[str, object] = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"criterion {self.cid:2d} {verdict}  {self.title}: measured={self.measured:.3e} "
                f"tol={self.tolerance:.1e} time={self.seconds:.2f}s/{self.budget:.0f}s")


def _timed(fn):
    def wrapper(*a, **kw):
        t = time.perf_counter()
        res = fn(*a, **kw)
        res.seconds = time.perf_counter() - t
        res.passed = bool(res.passed and res.seconds <= res.budget)
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# 1


@_timed
def criterion_1(seed: int = 11) -> CriterionResult:
    """Indicator vanishes at the critical configuration (sonic radius, sound speed)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_cf = 0.0
    for _ in range(100):
        eps = rng.uniform(0.01, 1.0)
        k = rng.uniform(0.02, 0.95) / eps
        M = rng.uniform(0.1, 10.0)
        p = PhysParams(eps=eps, k=k, mass_M=M)
        kap = p.kappa
        r0 = (2.0 - kap) / (1.0 - kap) * M
        worst = max(worst, abs(p_value(r0, k, p)))
        worst_cf = max(worst_cf, abs(p_value_closed_form(r0, k, p)))
        m = rng.uniform(0.1, 10.0)
        k0 = rng.uniform(0.05, 2.0)
        q = PhysParams(eps=0.0, k=k0, m=m)
        r0 = m / (2.0 * k0**2)
        worst = max(worst, abs(p_value(r0, k0, q)))
        worst_cf = max(worst_cf, abs(p_value_closed_form(r0, k0, q)))
    meas = max(worst, worst_cf)
    return CriterionResult(1, "critical-configuration zeros", meas, 1e-12, meas < 1e-12, 0.0, 1.0,
                           {"energy_route": worst, "closed_form_route": worst_cf})


# ---------------------------------------------------------------------------
# 2


def _sonic_residual_x(x, r0, v0, p: PhysParams):
    """Sonic equation written in x = ln(r - 2M) so that radii next to the horizon stay exact."""
    M = p.mass_M
    h = np.exp(x)
    r = 2.0 * M + h
    e2 = p.eps**2
    ik = 2.0 * p.a / (1.0 - p.a)
    lhs = math.log1p(-e2 * v0 * v0) - math.log1p(-p.a) + ik * math.log(v0 / p.k)
    rhs = 2.0 * ik * (np.log(r) - math.log(r0)) + np.log(r) + math.log(r0 - 2.0 * M) - math.log(r0) - x
    return lhs - rhs


def sonic_root_count(r0: float, v0: float, p: PhysParams, n: int = 10_000) -> int:
    xs = np.linspace(-690.0, 690.0, n)
    f = _sonic_residual_x(xs, r0, v0, p)
    changes = int(np.count_nonzero(np.signbit(f[1:]) != np.signbit(f[:-1])))
    if changes:
        return changes
    i = int(np.argmax(f))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, n - 1)]
    res = minimize_scalar(lambda x: -float(_sonic_residual_x(np.array([x]), r0, v0, p)[0]),
                          bounds=(lo, hi), method="bounded", options={"xatol": 1e-14})
    return 2 if -res.fun > 0.0 else 0


@_timed
def criterion_2(n: int = 50) -> CriterionResult:
    """Sign of the indicator against a brute-force count of sonic radii."""
    p = PhysParams(eps=0.01, k=0.3, mass_M=1.0)
    rs = p.sonic_radius
    r0s = np.geomspace(rs / 100.0, rs * 100.0, n)
    v0s = np.geomspace(p.k / 30.0, p.k * 30.0, n)
    agree = total = borderline = 0
    bad = []
    for r0 in r0s:
        for v0 in v0s:
            P = p_value(r0, v0, p)
            if abs(P) <= 1e-8:
                borderline += 1
                continue
            total += 1
            expect = 2 if P < 0.0 else 0
            got = sonic_root_count(r0, v0, p)
            if got == expect:
                agree += 1
            else:
                bad.append((float(r0), float(v0), P, got))
    frac = agree / total
    return CriterionResult(2, "sonic classification vs brute force", 1.0 - frac, 0.0, agree == total, 0.0, 30.0,
                           {"agree": agree, "total": total, "borderline": borderline, "mismatches": bad[:5]})


# ---------------------------------------------------------------------------
# 3


def orbit_suite() -> List[tuple]:
    """Twenty (params, base, radial window) cases covering every orbit kind."""
    p1 = PhysParams(eps=1.0, k=0.3, mass_M=1.0)
    p2 = PhysParams(eps=0.5, k=0.6, mass_M=2.0)
    p0 = PhysParams(eps=0.0, k=0.3, m=1.0)
    ps = PhysParams(eps=1.0, k=1.0, mass_M=1.0)
    pm = PhysParams(eps=1.0, k=0.3, mass_M=0.0)
    rs1 = p1.sonic_radius
    rs2 = p2.sonic_radius
    rs0 = p0.sonic_radius
    cases = [
        (p1, (6.0, 1.0, -0.05), (2.2, 40.0)),
        (p1, (6.0, 1.0, 0.05), (2.2, 40.0)),
        (p1, (6.0, 2.0, 0.9), (2.2, 40.0)),
        (p1, (20.0, 1.0, -0.8), (2.2, 40.0)),
        (p1, (rs1, 1.0, 0.3), (2.2, 40.0)),
        (p1, (rs1, 1.0, -0.3), (2.2, 40.0)),
        (p1, (15.0, 1.0, 0.15), (2.2, 40.0)),
        (p1, (15.0, 1.0, -0.15), (2.2, 40.0)),
        (p1, (8.0, 3.0, 0.0), (2.2, 40.0)),
        (p2, (rs2, 1.0, 0.6), (4.3, 80.0)),
        (p2, (10.0, 0.5, -0.02), (4.3, 80.0)),
        (p2, (30.0, 1.0, 1.2), (4.3, 80.0)),
        (p0, (rs0, 1.0, 0.3), (0.5, 60.0)),
        (p0, (2.0, 1.0, 0.05), (0.5, 60.0)),
        (p0, (30.0, 1.0, -0.9), (0.5, 60.0)),
        (ps, (4.0, 1.0, 0.1), (3.0, 50.0)),
        (ps, (10.0, 2.0, -0.05), (3.2, 50.0)),
        (pm, (3.0, 1.0, 0.1), (0.5, 40.0)),
        (pm, (3.0, 1.0, 0.0), (0.5, 40.0)),
        (p1, (3.0, 1.0, -0.02), (2.2, 40.0)),
    ]
    return cases


def _piece_reference(orbit, r):
    """First integrals of the anchor of the smooth piece holding each radius."""
    p = orbit.params
    base = orbit.base
    d0, c0 = base.d0, base.c0
    D = np.full(r.shape, d0)
    C = np.full(r.shape, c0)
    if orbit.shock_radius is not None:
        left, right = orbit.limits_at_shock()
        r1 = orbit.shock_radius
        other = left if base.r0 > r1 else right
        dj, cj = first_integrals(r1, other, p)
        sel = (r < r1) if base.r0 > r1 else (r > r1)
        D[sel], C[sel] = dj, cj
    return D, C


@_timed
def criterion_3() -> CriterionResult:
    """First integrals along constructed orbits and the steady weak-form residual."""
    worst_fi = worst_res = 0.0
    kinds = {}
    for p, (r0, rho0, v0), (lo, hi) in orbit_suite():
        orbit = make_global_orbit(SteadyBase.make(r0, rho0, v0, p), p)
        kinds[orbit.kind.value] = kinds.get(orbit.kind.value, 0) + 1
        a = max(lo, orbit.domain[0] * (1.0 + 1e-9))
        b = min(hi, orbit.domain[1])
        r = np.geomspace(a, b, 1000)
        if orbit.shock_radius is not None:
            r = r[np.abs(r - orbit.shock_radius) > 1e-12]
        st = orbit(r)
        D, C = first_integrals(r, st, p)
        D0, C0 = _piece_reference(orbit, r)
        if v0 == 0.0:
            fi = float(np.max(np.abs(C - C0) / np.abs(C0)))
        else:
            fi = float(max(np.max(np.abs(D - D0) / np.abs(D0)), np.max(np.abs(C - C0) / np.abs(C0))))
        worst_fi = max(worst_fi, fi)
        worst_res = max(worst_res, steady_residual(orbit, a, b, 1000))
    ok = worst_fi < 1e-10 and worst_res < 1e-8
    return CriterionResult(3, "steady first integrals and weak residual", worst_fi, 1e-10,
                           ok, 0.0, 10.0, {"first_integrals": worst_fi, "weak_residual": worst_res, "kinds": kinds})


# ---------------------------------------------------------------------------
# 4


def rk4_sweep(r0, rho0, v0, r_end, p: PhysParams, n: int = 2000, every: int = 100):
    """Classical RK4 on the steady ODE, vectorised over bases.

    Returns the radii and states (rho, v) after every `every` steps, each of shape (n // every, n_bases).
    """
    r = np.array(r0, dtype=float)
    y = np.stack([np.array(rho0, dtype=float), np.array(v0, dtype=float)])
    h = (np.asarray(r_end, dtype=float) - r) / n

    def f(rr, yy):
        return np.stack(steady_slope(yy[0], yy[1], rr, p))

    rs, ys = [], []
    for i in range(1, n + 1):
        k1 = f(r, y)
        k2 = f(r + 0.5 * h, y + 0.5 * h * k1)
        k3 = f(r + 0.5 * h, y + 0.5 * h * k2)
        k4 = f(r + h, y + h * k3)
        y = y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
        r = r0 + i * h
        if i % every == 0:
            rs.append(r.copy())
            ys.append(y.copy())
    return np.array(rs), np.array(ys)


@_timed
def criterion_4(seed: int = 4) -> CriterionResult:
    """Stiff closed form against RK4 on [3M, 50M]; spot value at r = 8."""
    p = PhysParams(eps=1.0, k=1.0, mass_M=1.0)
    rng = np.random.default_rng(seed)
    r0 = rng.uniform(4.0, 20.0, 10)
    vmax = np.minimum(9.0 / r0**2, 0.9)
    v0 = rng.uniform(-0.9, 0.9, 10) * vmax
    rho0 = np.exp(rng.uniform(-1.0, 1.0, 10))
    worst = 0.0
    for end in (3.0, 50.0):
        rs, ys = rk4_sweep(r0, rho0, v0, np.full(10, end), p)
        for i in range(10):
            cf = stiff_steady(rs[:, i], SteadyBase.make(r0[i], rho0[i], v0[i], p), p)
            worst = max(worst, float(np.max(np.abs(cf.rho - ys[:, 0, i]) / np.abs(cf.rho))),
                        float(np.max(np.abs(cf.v - ys[:, 1, i]) / np.abs(cf.v))))
    spot = stiff_steady(8.0, SteadyBase.make(4.0, 1.0, 0.1, p), p).v
    spot_err = abs(spot - 0.025)
    meas = max(worst, spot_err)
    return CriterionResult(4, "stiff closed form vs RK4", meas, 1e-8, worst < 1e-8 and spot_err < 1e-14, 0.0, 5.0,
                           {"rk4_rel": worst, "v(8)": float(spot)})


# ---------------------------------------------------------------------------
# 5


def _fuzz_states(rng, n, p):
    rho = np.exp(rng.uniform(-5.0, 5.0, n))
    v = np.tanh(rng.uniform(-3.0, 3.0, n)) / p.eps
    return rho, v


def rh_residual(a: FluidState, b: FluidState, s: float, r0: float, p: PhysParams) -> float:
    """|s [U] - [F]| per component relative to the size of the states and fluxes."""
    ua, ub = conserved(a, r0, p), conserved(b, r0, p)
    fa, fb = flux(a, r0, p), flux(b, r0, p)
    out = 0.0
    for i in range(2):
        scale = abs(s) * max(abs(ua[i]), abs(ub[i])) + max(abs(fa[i]), abs(fb[i]))
        out = max(out, abs(s * (ub[i] - ua[i]) - (fb[i] - fa[i])) / scale)
    return out


def nu_curve_residual(base: FluidState, st: FluidState, family: int, p: PhysParams) -> float:
    """Residual of the wave curve in ln(nu): rarefactions nu ~ rho^(-+chi), shocks by the sqrt(nu) quadratic."""
    ln_nu_b = math.log(float(scaled_velocity(base.v, p.eps)))
    ln_nu = math.log(float(scaled_velocity(st.v, p.eps)))
    ratio = st.rho / base.rho
    sgn = -1.0 if family == 1 else 1.0
    if ratio <= 1.0:
        pred = ln_nu_b + sgn * p.chi * math.log(ratio)
    else:
        B = sgn * p.chi * (math.sqrt(ratio) - math.sqrt(1.0 / ratio))
        y = 0.5 * (B + math.sqrt(B * B + 4.0)) if B >= 0.0 else 2.0 / (-B + math.sqrt(B * B + 4.0))
        pred = ln_nu_b + 2.0 * math.log(y)
    return abs(ln_nu - pred)


@_timed
def criterion_5(n: int = 10_000, seed: int = 5) -> CriterionResult:
    """Riemann solver soundness on fuzzed data."""
    from .riemann import WaveKind, solve_riemann

    p = PhysParams(eps=1.0, k=0.3, mass_M=1.0)
    r0 = 4.0
    rng = np.random.default_rng(seed)
    rl, vl = _fuzz_states(rng, n, p)
    rr, vr = _fuzz_states(rng, n, p)
    curve = rh = inv = 0.0
    lax_fail = shocks = fans = 0
    for i in range(n):
        L, R = FluidState(float(rl[i]), float(vl[i])), FluidState(float(rr[i]), float(vr[i]))
        fan = solve_riemann(L, R, r0, p)
        curve = max(curve, nu_curve_residual(L, fan.middle, 1, p), nu_curve_residual(R, fan.middle, 2, p))
        for w in (fan.wave1, fan.wave2):
            a, b = w.left_state, w.right_state
            if w.kind == WaveKind.SHOCK:
                shocks += 1
                rh = max(rh, rh_residual(a, b, w.speed, r0, p))
                la, lb = eigenvalues(a, r0, p), eigenvalues(b, r0, p)
                j = w.family - 1
                if not (la[j] > w.speed > lb[j]):
                    lax_fail += 1
            elif w.kind == WaveKind.RAREFACTION:
                fans += 1
                ia, ib = riemann_invariants(a, p), riemann_invariants(b, p)
                inv = max(inv, float(abs(ia.w - ib.w) if w.family == 1 else abs(ia.z - ib.z)))
    ok = curve < 1e-10 and rh < 1e-10 and lax_fail == 0 and inv < 1e-12
    return CriterionResult(5, "Riemann solver soundness", max(curve, rh), 1e-10, ok, 0.0, 60.0,
                           {"curve": curve, "rh": rh, "lax_failures": lax_fail, "invariant": inv,
                            "shocks": shocks, "rarefactions": fans})


# ---------------------------------------------------------------------------
# 6


@_timed
def criterion_6(n: int = 10_000, seed: int = 6) -> CriterionResult:
    """Wave strength never grows under interaction."""
    from .riemann import batch_strength

    p = PhysParams(eps=1.0, k=0.3, mass_M=1.0)
    rng = np.random.default_rng(seed)
    (r1, v1), (r2, v2), (r3, v3) = (_fuzz_states(rng, n, p) for _ in range(3))
    lhs = batch_strength(r1, v1, r3, v3, p)
    rhs = batch_strength(r1, v1, r2, v2, p) + batch_strength(r2, v2, r3, v3, p)
    excess = float(np.max(lhs - rhs))
    return CriterionResult(6, "diminishing total variation", max(excess, 0.0), 1e-12, excess <= 1e-12, 0.0, 60.0,
                           {"max_excess": excess})


# ---------------------------------------------------------------------------
# 7


def _slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


GRP_CASES = ((0.5, 0.05), (2.0, 0.05), (1.0, -0.1), (1.3, 0.2))


def _phi(r0):
    def phi(t, r):
        a = np.cos(r - r0) * np.exp(-t)
        return a, -a, -np.sin(r - r0) * np.exp(-t)
    return phi


@_timed
def criterion_7() -> CriterionResult:
    """Slab solver: exact on equilibria, first-order edges, second-order weak residual."""
    from .grp import eval_grp, fan_edge_mismatch, shock_defects, solve_grp, weak_residual

    p = PhysParams(eps=1.0, k=0.3, mass_M=1.0)
    r0 = 6.0
    exact_dev = 0.0
    for base in ((r0, 1.0, 0.05), (r0, 1.0, -0.2), (r0, 0.3, 0.6)):
        L = make_global_orbit(SteadyBase.make(*base, p), p)
        sol = solve_grp(0.0, r0, L, L, 0.1, p)
        rr = np.linspace(r0 - 0.5, r0 + 0.5, 201)
        ref = L(rr)
        for t in np.linspace(0.0, 0.1, 6):
            s = eval_grp(sol, t, rr)
            exact_dev = max(exact_dev, float(np.max(np.abs(s.rho / ref.rho - 1.0))),
                            float(np.max(np.abs(s.v - ref.v))))
    L = make_global_orbit(SteadyBase.make(r0, 1.0, 0.05, p), p)
    dts = 0.2 * 0.5 ** np.arange(5)
    slopes = {"shock": [], "fan": [], "weak": []}
    for rhoR, vR in GRP_CASES:
        R = make_global_orbit(SteadyBase.make(r0, rhoR, vR, p), p)
        sh, fa, wk = [], [], []
        for dt in dts:
            g = solve_grp(0.0, r0, L, R, dt, p)
            wk.append(float(np.hypot(*weak_residual(g, dt, 4.0 * dt, _phi(r0)))))
            sh.append(max(shock_defects(g, dt), default=math.nan))
            fa.append(max(fan_edge_mismatch(g, dt), default=math.nan))
        slopes["weak"].append(_slope(dts, wk))
        if np.all(np.isfinite(sh)):
            slopes["shock"].append(_slope(dts, sh))
        if np.all(np.isfinite(fa)):
            slopes["fan"].append(_slope(dts, fa))
    lin_ok = all(0.7 <= s <= 1.3 for s in slopes["shock"] + slopes["fan"])
    quad_ok = all(1.7 <= s <= 2.3 for s in slopes["weak"])
    ok = exact_dev < 1e-12 and lin_ok and quad_ok and slopes["shock"] and slopes["fan"]
    return CriterionResult(7, "generalized Riemann solver", exact_dev, 1e-12, bool(ok), 0.0, 30.0,
                           {"equilibrium_deviation": exact_dev, **{k: [round(s, 3) for s in v] for k, v in slopes.items()}})


# ---------------------------------------------------------------------------
# 8


@_timed
def criterion_8() -> CriterionResult:
    """Well-balanced random choice on a smooth orbit and on a steady shock."""
    from .scheme import SchemeConfig, level_state, run, shock_location

    p = PhysParams(eps=1.0, k=0.3, mass_M=1.0)
    cfg = SchemeConfig(dr=0.05, dt=0.02, domain=(2.5, 20.0), t_end=2.0, params=p)
    rr = np.linspace(2.5, 20.0, 7001)
    smooth = make_global_orbit(SteadyBase.make(6.0, 1.0, -0.05, p), p)
    sol = run(cfg, lambda r: smooth(r))
    ref = smooth(rr)
    sup = 0.0
    for lv in sol.levels:
        st = level_state(lv, cfg, rr)
        sup = max(sup, float(np.max(np.abs(st.rho - ref.rho) / ref.rho)), float(np.max(np.abs(st.v - ref.v))))
    shock = make_global_orbit(SteadyBase.make(15.0, 1.0, 0.15, p), p)
    sol2 = run(cfg, lambda r: shock(r))
    ref2 = shock(rr)
    l1 = 0.0
    drift = 0.0
    prev = shock.shock_radius
    w = np.full(rr.shape, rr[1] - rr[0])
    for lv in sol2.levels:
        loc = shock_location(lv, cfg)
        if loc is None:
            drift = math.inf
            break
        drift = max(drift, abs(loc - prev))
        prev = loc
        st = level_state(lv, cfg, rr)
        far = np.abs(rr - loc) > 2.0 * cfg.dr
        l1 = max(l1, float(np.sum(w[far] * (np.abs(st.rho - ref2.rho) + np.abs(st.v - ref2.v))[far])))
    ok = (sup < 1e-8 and l1 < 1e-8 and drift <= cfg.dr and sol.failure is None and sol2.failure is None
          and len(sol.levels) == 101 and len(sol2.levels) == 101)
    return CriterionResult(8, "well-balanced random choice", max(sup, l1), 1e-8, ok, 0.0, 60.0,
                           {"smooth_sup": sup, "shock_l1": l1, "max_drift": drift, "shock_radius": shock.shock_radius})


# ---------------------------------------------------------------------------
# 9


CONVERGENCE_DATA = ((FluidState(2.0, 0.1), FluidState(0.5, -0.2)), (FluidState(1.0, -0.4), FluidState(1.5, 0.3)))


@_timed
def criterion_9() -> CriterionResult:
    """Planar random choice converges to the exact self-similar solution."""
    from .riemann import sample_fan, solve_riemann
    from .scheme import SchemeConfig, level_state, run, tv_growth_constant

    p = PhysParams(eps=1.0, k=0.3, planar=True)
    drs = np.array([1 / 50, 1 / 100, 1 / 200, 1 / 400])
    orders, mono, Cs, errs_all = [], [], [], []
    x = (np.arange(20000) + 0.5) * 1e-4
    for L, R in CONVERGENCE_DATA:
        fan = solve_riemann(L, R, 1.0, p)
        ex = sample_fan(fan, (x - 1.0) / 0.5)
        errs = []
        for dr in drs:
            cfg = SchemeConfig(dr=float(dr), dt=float(dr) / 4.0, domain=(0.0, 2.0), t_end=0.5, params=p)
            init = lambda r, L=L, R=R: FluidState(np.where(r < 1.0, L.rho, R.rho), np.where(r < 1.0, L.v, R.v))
            sol = run(cfg, init, keep_levels=False)
            st = level_state(sol.final, cfg, x)
            errs.append(float(np.sum(np.abs(st.rho - ex.rho) + np.abs(st.v - ex.v)) * 1e-4))
            Cs.append(tv_growth_constant(sol.diagnostics, cfg))
        errs_all.append(errs)
        orders.append(_slope(drs, errs))
        mono.append(bool(np.all(np.diff(errs) < 0.0)))
    ok = all(mono) and min(orders) >= 0.6
    return CriterionResult(9, "random choice convergence (planar)", min(orders), 0.6, ok, 0.0, 300.0,
                           {"orders": orders, "monotone": mono, "l1": errs_all, "tv_constant": max(Cs)})


# ---------------------------------------------------------------------------
# 10


@_timed
def criterion_10() -> CriterionResult:
    """Limit consistency orders."""
    from .limits import LimitKind, limit_consistency

    nr = limit_consistency(PhysParams(eps=0.0, k=0.3, m=1.0), LimitKind.NON_RELATIVISTIC, 1e-2)
    mk = limit_consistency(PhysParams(eps=1.0, k=0.3, mass_M=0.0), LimitKind.MINKOWSKI, 1e-3)
    st = limit_consistency(PhysParams(eps=1.0, k=1.0, mass_M=1.0), LimitKind.STIFF, 0.0)
    eps_ok = all(1.8 <= o <= 2.2 for o in nr.orders.values()) and len(nr.orders) == 5
    m_ok = all(0.8 <= o <= 1.2 for o in mk.orders.values()) and len(mk.orders) == 5
    ok = eps_ok and m_ok and st.exact
    return CriterionResult(10, "limit consistency", st.max_deviation, 1e-13, ok, 0.0, 10.0,
                           {"eps_orders": nr.orders, "mass_orders": mk.orders, "stiff_deviation": st.max_deviation})


CRITERIA: Dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run_criteria(ids: Optional[List[int]] = None) -> List[CriterionResult]:
    ids = sorted(CRITERIA) if not ids else ids
    return [CRITERIA[i]() for i in ids]


__all__ = ["CriterionResult", "CRITERIA", "run_criteria", "sonic_root_count", "orbit_suite", "rk4_sweep",
           "rh_residual", "nu_curve_residual"] + [f"criterion_{i}" for i in range(1, 11)]
