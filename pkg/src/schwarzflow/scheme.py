"""Equilibrium-based random choice method on a staggered radial mesh.

Mesh nodes are r_j = r_min + j dr.  Level i holds cells (r_j, r_{j+2}) with j = i mod 2,
each carrying a steady orbit.  A step solves the slab problem at every interface r_j,
samples it at r_j + w_{i+1} dr after one time step and takes the orbit through that
sample as the new cell profile (reusing the slab's orbit when the sample lies on one).

Half cells sticking out of [r_min, r_max] are ghosts that copy their neighbour's orbit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import CflError, ConfigError, SolverError
from .grp import grp_region, orbit_value, solve_grp
from .model import FluidState, PhysParams, _eigenvalues, conserved
from .riemann import batch_sample, batch_strength
from .steady import OrbitKind, SteadyBase, SteadyOrbit, make_global_orbit

TV_SAMPLES = 16
ADOPT_TOL = 1e-12


@dataclass(frozen=True)
class VanDerCorput:
    offset: int = 0


@dataclass(frozen=True)
class Supplied:
    values: Tuple[float, ...]


def radical_inverse2(n: int) -> float:
    inv, base = 0.0, 0.5
    while n > 0:
        if n & 1:
            inv += base
        n >>= 1
        base *= 0.5
    return inv


def van_der_corput(i: int, offset: int = 0) -> float:
    if i < 1:
        raise ConfigError("sequence index starts at 1")
    return 2.0 * radical_inverse2(i + offset) - 1.0


@dataclass
class SchemeConfig:
    dr: float
    dt: float
    domain: Tuple[float, float]
    t_end: float
    params: PhysParams
    sequence: Union[VanDerCorput, Supplied] = field(default_factory=VanDerCorput)
    frozen_fan_only: bool = False
    # experimental: hold the cells touching r_min on this orbit (pinned inner boundary)
    inner_orbit: Optional[SteadyOrbit] = None

    def __post_init__(self):
        lo, hi = self.domain
        p = self.params
        if not (self.dr > 0.0 and self.dt > 0.0):
            raise ConfigError("mesh width and time step must be positive")
        if not lo < hi:
            raise ConfigError("empty computational domain")
        if not p.planar and not lo > p.horizon:
            raise ConfigError("inner boundary must lie outside the horizon")
        if self.n_intervals < 2:
            raise ConfigError("domain holds fewer than two mesh intervals")
        if p.eps > 0.0 and not self.dr / self.dt > 2.0 / p.eps:
            raise CflError(f"dr/dt = {self.dr / self.dt} must exceed 2/eps = {2.0 / p.eps}")
        if self.t_end < 0.0:
            raise ConfigError("final time must be non-negative")
        if self.inner_orbit is not None and p.planar:
            raise ConfigError("a pinned inner boundary needs the radial geometry")

    @property
    def n_intervals(self) -> int:
        return int(round((self.domain[1] - self.domain[0]) / self.dr))

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def node(self, j):
        return self.domain[0] + np.asarray(j, dtype=float) * self.dr

    def sample(self, i: int) -> float:
        seq = self.sequence
        if isinstance(seq, Supplied):
            w = float(seq.values[(i - 1) % len(seq.values)])
            if not -1.0 < w < 1.0:
                raise ConfigError("supplied sample outside (-1, 1)")
            return w
        return van_der_corput(i, seq.offset)


@dataclass
class Level:
    index: int
    t: float
    parity: int
    left: np.ndarray  # left-edge node index of each cell
    ghost: np.ndarray
    nodes: np.ndarray  # sample radius of each cell
    rho: np.ndarray
    v: np.ndarray
    orbits: Optional[List[SteadyOrbit]] = None  # None on the planar path
    flags: List[str] = field(default_factory=list)

    @property
    def planar(self) -> bool:
        return self.orbits is None


@dataclass
class Diagnostics:
    t: float
    tv_lnrho: float
    tv_velocity: float
    L_J: float
    max_wavespeed: float
    mass: float


@dataclass
class GridSolution:
    config: SchemeConfig
    levels: List[Level]
    diagnostics: List[Diagnostics]
    failure: Optional[str] = None
    failed_level: Optional[int] = None

    @property
    def times(self) -> np.ndarray:
        return np.array([lv.t for lv in self.levels])

    @property
    def final(self) -> Level:
        return self.levels[-1]


# ---------------------------------------------------------------------------
# level layout


def _layout(parity: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    left = np.arange(-parity, n, 2)
    ghost = (left < 0) | (left + 2 > n)
    return left, ghost


def _fill_ghosts(orbits: List, ghost: np.ndarray) -> None:
    idx = np.flatnonzero(~ghost)
    if idx.size == 0:
        raise ConfigError("no interior cell on the mesh")
    for c in np.flatnonzero(ghost):
        orbits[c] = orbits[idx[0]] if c < idx[0] else orbits[idx[-1]]


def _group_eval(orbits: Sequence, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray, bool]:
    """Evaluate orbits[c] at r[c], batching cells that share an orbit object."""
    rho = np.empty(len(orbits))
    v = np.empty(len(orbits))
    clamped = False
    groups = {}
    for c, o in enumerate(orbits):
        groups.setdefault(id(o), (o, []))[1].append(c)
    for o, cells in groups.values():
        cells = np.array(cells)
        st, cl = orbit_value(o, r[cells])
        clamped |= cl
        rho[cells], v[cells] = st.rho, st.v
    return rho, v, clamped


def initial_level(cfg: SchemeConfig, initial: Union[SteadyOrbit, Callable]) -> Level:
    """Level 0.  A steady orbit is adopted by every cell; a callable r -> FluidState is
    reconstructed cell by cell (one orbit through each node, or constants on the planar path)."""
    n = cfg.n_intervals
    left, ghost = _layout(0, n)
    nodes = cfg.node(left + 1)
    p = cfg.params
    if isinstance(initial, SteadyOrbit):
        orbits = [initial] * left.size
        rho, v, _ = _group_eval(orbits, nodes)
        if p.planar:
            return Level(0, 0.0, 0, left, ghost, nodes, rho, v)
        return Level(0, 0.0, 0, left, ghost, nodes, rho, v, orbits)
    st = initial(nodes)
    rho = np.array(st.rho, dtype=float) * np.ones(nodes.shape)
    v = np.array(st.v, dtype=float) * np.ones(nodes.shape)
    if p.planar:
        return Level(0, 0.0, 0, left, ghost, nodes, rho, v)
    orbits: List = [None] * left.size
    inner = np.flatnonzero(~ghost)
    lo, hi = cfg.node(left[inner]), cfg.node(left[inner] + 2)
    built = reconstruct(nodes[inner], rho[inner], v[inner], p, np.stack([lo, hi], axis=1))
    for c, o in zip(inner, built):
        orbits[c] = o
    _fill_ghosts(orbits, ghost)
    return Level(0, 0.0, 0, left, ghost, nodes, rho, v, orbits)


def passes_through(orbit: SteadyOrbit, r: float, rho: float, v: float) -> bool:
    """True when the orbit reproduces the node value to ADOPT_TOL relative."""
    try:
        st, clamped = orbit_value(orbit, r)
    except SolverError:
        return False
    if clamped:
        return False
    return (abs(float(st.rho[0]) - rho) <= ADOPT_TOL * rho
            and abs(float(st.v[0]) - v) <= ADOPT_TOL * max(abs(v), orbit.params.k))


def _same_equilibrium(L: SteadyOrbit, R: SteadyOrbit, r0: float, cell: Tuple[float, float]):
    """Orbits agreeing at the interface are one equilibrium.

    Returns the one carrying a steady shock inside the cell, True when they agree but neither
    has a shock there, and None when they differ.
    """
    try:
        a, _ = orbit_value(L, r0, -1)
    except SolverError:
        return None
    if not passes_through(R, r0, float(a.rho[0]), float(a.v[0])):
        return None
    for o in (R, L):
        if o.shock_radius is not None and cell[0] < o.shock_radius < cell[1]:
            return o
    return True


def reconstruct(nodes: np.ndarray, rho: np.ndarray, v: np.ndarray, p: PhysParams,
                bounds: Optional[np.ndarray] = None) -> List[SteadyOrbit]:
    """Global orbit through each node value; a neighbour's orbit is reused when it passes through.

    With cell bounds given, a cell whose interval holds a neighbour's steady shock takes that
    shock-bearing orbit when it passes through the node, so a discontinuous steady datum keeps
    its jump inside the cell rather than at a cell edge.
    """
    out: List[SteadyOrbit] = []
    for c, (r, a, b) in enumerate(zip(nodes, rho, v)):
        r, a, b = float(r), float(a), float(b)
        if out and passes_through(out[-1], r, a, b):
            out.append(out[-1])
            continue
        try:
            out.append(make_global_orbit(SteadyBase.make(r, a, b, p), p))
        except SolverError as exc:
            raise type(exc)(f"cell {c}: {exc}") from exc
    if bounds is not None:
        for c in range(len(out)):
            for d in (c - 1, c + 1):
                if not 0 <= d < len(out) or out[d] is out[c]:
                    continue
                rs = out[d].shock_radius
                if (rs is not None and bounds[c, 0] < rs < bounds[c, 1]
                        and passes_through(out[d], float(nodes[c]), float(rho[c]), float(v[c]))):
                    out[c] = out[d]
                    break
    return out


# ---------------------------------------------------------------------------
# stepping


def max_wavespeed(level: Level, p: PhysParams) -> float:
    sel = ~level.ghost
    lam, mu = _eigenvalues(level.rho[sel], level.v[sel], level.nodes[sel], p)
    return float(np.max(np.maximum(np.abs(lam), np.abs(mu))))


def step(level: Level, cfg: SchemeConfig) -> Level:
    p = cfg.params
    s_max = max_wavespeed(level, p)
    if not cfg.dr / cfg.dt > s_max:
        raise CflError(f"level {level.index}: wave speed {s_max} exceeds dr/dt = {cfg.dr / cfg.dt}")
    n = cfg.n_intervals
    i = level.index + 1
    parity = i % 2
    left, ghost = _layout(parity, n)
    w = cfg.sample(i)
    centre = left + 1
    nodes = cfg.node(centre) + w * cfg.dr
    nodes = np.where(ghost, cfg.node(np.clip(centre, 0, n)), nodes)
    # old cell c spans (left_old[c], left_old[c] + 2); interface at centre j joins
    # old cells ending and starting there
    old_left = level.left
    start = {int(j): c for c, j in enumerate(old_left)}
    lo_cell = np.array([start.get(int(j) - 2, -1) for j in centre])
    hi_cell = np.array([start.get(int(j), -1) for j in centre])
    inner = ~ghost & (lo_cell >= 0) & (hi_cell >= 0)
    t_new = level.t + cfg.dt
    if level.planar:
        rho = np.empty(left.size)
        v = np.empty(left.size)
        a, b = lo_cell[inner], hi_cell[inner]
        xi = np.full(a.size, w * cfg.dr / cfg.dt)
        rho[inner], v[inner] = batch_sample(level.rho[a], level.v[a], level.rho[b], level.v[b], xi,
                                            cfg.node(centre[inner]), p)
        idx = np.flatnonzero(inner)
        for c in np.flatnonzero(~inner):
            near = idx[0] if c < idx[0] else idx[-1]
            rho[c], v[c] = rho[near], v[near]
        return Level(i, t_new, parity, left, ~inner, nodes, rho, v)
    orbits: List = [None] * left.size
    flags: List[str] = []
    fast = []
    for c in np.flatnonzero(inner):
        L = level.orbits[lo_cell[c]]
        R = level.orbits[hi_cell[c]]
        if L is R:
            orbits[c] = L
            fast.append(c)
            continue
        r0 = float(cfg.node(centre[c]))
        cell = (r0 - cfg.dr, r0 + cfg.dr)
        same = _same_equilibrium(L, R, r0, cell)
        if same is not None:
            orbits[c] = same if same is not True else (L if nodes[c] < r0 else R)
            fast.append(c)
            continue
        try:
            sol = solve_grp(level.t, r0, L, R, cfg.dt, p, frozen_fan_only=cfg.frozen_fan_only)
            reg = grp_region(sol, t_new, float(nodes[c]))
            if reg in ("left", "middle", "right"):
                orbits[c] = {"left": L, "middle": sol.middle_orbit, "right": R}[reg]
                if reg == "middle" and sol.middle_orbit.kind == OrbitKind.SHOCK_BEARING:
                    flags.append(f"cell {c}: shock-bearing middle orbit")
            else:
                st = sol(t_new, float(nodes[c]))
                rc = float(nodes[c])
                prev = orbits[c - 1] if c > 0 else None
                if prev is not None and passes_through(prev, rc, st.rho, st.v):
                    orbits[c] = prev
                else:
                    orbits[c] = make_global_orbit(SteadyBase.make(rc, st.rho, st.v, p), p)
        except SolverError as exc:
            raise type(exc)(f"level {i}, cell {c}: {exc}") from exc
    ghost_all = ~inner
    _fill_ghosts(orbits, ghost_all)
    if cfg.inner_orbit is not None:
        for c in np.flatnonzero(left <= 0):
            orbits[c] = cfg.inner_orbit
    rho, v, clamped = _group_eval(orbits, nodes)
    if clamped:
        flags.append("orbit evaluated outside its domain (clamped at a sonic radius)")
    return Level(i, t_new, parity, left, ghost_all, nodes, rho, v, orbits, flags)


# ---------------------------------------------------------------------------
# evaluation and diagnostics


def cell_bounds(level: Level, cfg: SchemeConfig) -> Tuple[np.ndarray, np.ndarray]:
    lo = np.clip(cfg.node(level.left), *cfg.domain)
    hi = np.clip(cfg.node(level.left + 2), *cfg.domain)
    return lo, hi


def level_state(level: Level, cfg: SchemeConfig, r) -> FluidState:
    """Piecewise-steady profile of a level at radii r (cells are closed on the left)."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    j0 = cfg.node(level.left[0])
    c = np.clip(np.floor((r - j0) / (2.0 * cfg.dr)).astype(int), 0, level.left.size - 1)
    if level.planar:
        return FluidState(level.rho[c], level.v[c])
    rho = np.empty_like(r)
    v = np.empty_like(r)
    groups = {}
    for k, cc in enumerate(c):
        o = level.orbits[cc]
        groups.setdefault(id(o), (o, []))[1].append(k)
    for o, ks in groups.values():
        ks = np.array(ks)
        st, _ = orbit_value(o, r[ks])
        rho[ks], v[ks] = st.rho, st.v
    return FluidState(rho, v)


def _velocity_variable(v, p: PhysParams):
    if p.eps == 0.0:
        return 2.0 * np.asarray(v)
    return np.log((1.0 - p.eps * v) / (1.0 + p.eps * v))


def tv_functionals(level: Level, cfg: SchemeConfig) -> Tuple[float, float, float]:
    """TV of ln rho and of ln((1 - eps v)/(1 + eps v)) (2v when eps = 0), and L(J)."""
    p = cfg.params
    lo, hi = cell_bounds(level, cfg)
    keep = hi > lo
    s = np.linspace(0.0, 1.0, TV_SAMPLES)
    tv_r = tv_v = 0.0
    if level.planar:
        x = np.log(level.rho[keep])
        y = _velocity_variable(level.v[keep], p)
        tv_r = float(np.sum(np.abs(np.diff(x))))
        tv_v = float(np.sum(np.abs(np.diff(y))))
        a, b = level.rho[keep], level.v[keep]
        L = float(np.sum(batch_strength(a[:-1], b[:-1], a[1:], b[1:], p)))
        return tv_r, tv_v, L
    cells = np.flatnonzero(keep)
    pts = lo[cells, None] + (hi - lo)[cells, None] * s[None, :]
    orbs = [level.orbits[c] for c in cells for _ in s]
    rho, v, _ = _group_eval(orbs, pts.ravel())
    x = np.log(rho).reshape(pts.shape)
    y = _velocity_variable(v, p).reshape(pts.shape)
    tv_r += float(np.sum(np.abs(np.diff(x, axis=1))))
    tv_v += float(np.sum(np.abs(np.diff(y, axis=1))))
    # interface jumps: last sample of a cell vs first sample of the next
    tv_r += float(np.sum(np.abs(x[1:, 0] - x[:-1, -1])))
    tv_v += float(np.sum(np.abs(y[1:, 0] - y[:-1, -1])))
    rl, vl = np.exp(x[:-1, -1]), v.reshape(pts.shape)[:-1, -1]
    rr, vr = np.exp(x[1:, 0]), v.reshape(pts.shape)[1:, 0]
    L = float(np.sum(batch_strength(rl, vl, rr, vr, p)))
    return tv_r, tv_v, L


def total_mass(level: Level, cfg: SchemeConfig) -> float:
    """Sum of cell integrals of the first conserved component (midpoint samples)."""
    p = cfg.params
    lo, hi = cell_bounds(level, cfg)
    keep = hi > lo
    s = (np.arange(TV_SAMPLES) + 0.5) / TV_SAMPLES
    pts = lo[keep, None] + (hi - lo)[keep, None] * s[None, :]
    st = level_state(level, cfg, pts.ravel())
    u1 = np.asarray(conserved(st, pts.ravel(), p).u1).reshape(pts.shape)
    return float(np.sum(u1.mean(axis=1) * (hi - lo)[keep]))


def diagnose(level: Level, cfg: SchemeConfig) -> Diagnostics:
    tv_r, tv_v, L = tv_functionals(level, cfg)
    return Diagnostics(level.t, tv_r, tv_v, L, max_wavespeed(level, cfg.params), total_mass(level, cfg))


def untrusted(level: Level, cfg: SchemeConfig, speed: Optional[float] = None) -> np.ndarray:
    """Cells that boundary data may have reached: within t * speed of either end."""
    if speed is None:
        speed = cfg.dr / cfg.dt
    reach = level.t * speed
    lo, hi = cfg.domain
    return level.ghost | (level.nodes - lo < reach) | (hi - level.nodes < reach)


def run(cfg: SchemeConfig, initial: Union[SteadyOrbit, Callable], keep_levels: bool = True,
        callback: Optional[Callable[[Level], None]] = None) -> GridSolution:
    """March to t_end.  A failure is recorded and the levels computed so far are kept."""
    level = initial_level(cfg, initial)
    levels = [level]
    diags = [diagnose(level, cfg)]
    if callback is not None:
        callback(level)
    sol = GridSolution(cfg, levels, diags)
    for _ in range(cfg.n_steps):
        try:
            level = step(level, cfg)
        except CflError:
            raise
        except SolverError as exc:
            sol.failure = str(exc)
            sol.failed_level = level.index + 1
            return sol
        if keep_levels:
            levels.append(level)
        else:
            levels[-1] = level
        diags.append(diagnose(level, cfg))
        if callback is not None:
            callback(level)
    return sol


def tv_growth_constant(diags: Sequence[Diagnostics], cfg: SchemeConfig) -> float:
    """Smallest C with L(J2) - L(J1) <= C (dt + dr) L(J1) over consecutive levels."""
    C = 0.0
    for a, b in zip(diags[:-1], diags[1:]):
        if a.L_J > 0.0:
            C = max(C, (b.L_J - a.L_J) / ((cfg.dt + cfg.dr) * a.L_J))
    return C


def shock_location(level: Level, cfg: SchemeConfig, threshold: float = 0.05) -> Optional[float]:
    """Radius of the largest jump in ln rho across the level (steady shock or cell interface)."""
    best, where = threshold, None
    if level.orbits is not None:
        for c in np.flatnonzero(~level.ghost):
            o = level.orbits[c]
            if o.shock_radius is not None:
                lo, hi = cfg.node(level.left[c]), cfg.node(level.left[c] + 2)
                if lo <= o.shock_radius < hi:
                    a, b = o.limits_at_shock()
                    jump = abs(math.log(a.rho / b.rho))
                    if jump > best:
                        best, where = jump, o.shock_radius
    cells = np.flatnonzero(~level.ghost)
    for c0, c1 in zip(cells[:-1], cells[1:]):
        rj = float(cfg.node(level.left[c1]))
        a = level_state(level, cfg, np.nextafter(rj, -math.inf))
        b = level_state(level, cfg, rj)
        jump = abs(math.log(float(a.rho[0]) / float(b.rho[0])))
        if jump > best:
            best, where = jump, rj
    return where


__all__ = [
    "VanDerCorput", "Supplied", "radical_inverse2", "van_der_corput", "SchemeConfig", "Level",
    "Diagnostics", "GridSolution", "initial_level", "reconstruct", "step", "level_state",
    "tv_functionals", "total_mass", "diagnose", "untrusted", "run", "tv_growth_constant",
    "shock_location", "max_wavespeed", "cell_bounds", "passes_through",
]
