"""Command-line front end.

    schwarzflow steady|riemann|evolve|limits --config run.json --out DIR [--seq-offset N] [--parallel N]
    schwarzflow verify [--suite 1,3,7] [--out DIR]
    schwarzflow plotscript --out DIR

Exit codes: 0 success, 2 solver error, 3 configuration or CFL error, 64 usage error.
"""
from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional

import click
import numpy as np

from . import __version__
from .errors import CflError, ConfigError, SolverError
from .io import RunManifest, write_csv, write_record
from .model import FluidState, PhysParams, riemann_invariants

EXIT_OK, EXIT_SOLVER, EXIT_CONFIG, EXIT_USAGE = 0, 2, 3, 64


class UsageFailure(click.UsageError):
    pass


# ---------------------------------------------------------------------------
# configuration parsing


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return doc


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}: missing required field {key!r}")
    return d[key]


def parse_params(d: dict, where: str = "params") -> PhysParams:
    """Every physical parameter must be given: eps, k and M (or m when eps = 0)."""
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected an object")
    eps = float(_need(d, "eps", where))
    k = float(_need(d, "k", where))
    planar = bool(d.get("planar", False))
    if eps == 0.0:
        return PhysParams(eps=0.0, k=k, m=float(_need(d, "m", where)), planar=planar)
    return PhysParams(eps=eps, k=k, mass_M=float(_need(d, "M", where)), planar=planar)


def parse_state(d, where: str) -> FluidState:
    if isinstance(d, dict):
        return FluidState(float(_need(d, "rho", where)), float(_need(d, "v", where)))
    if isinstance(d, (list, tuple)) and len(d) == 2:
        return FluidState(float(d[0]), float(d[1]))
    raise ConfigError(f"{where}: state must be {{rho, v}} or [rho, v]")


def parse_base(d, where: str):
    if isinstance(d, dict):
        return float(_need(d, "r0", where)), float(_need(d, "rho0", where)), float(_need(d, "v0", where))
    if isinstance(d, (list, tuple)) and len(d) == 3:
        return float(d[0]), float(d[1]), float(d[2])
    raise ConfigError(f"{where}: base must be {{r0, rho0, v0}} or [r0, rho0, v0]")


def worker_count(requested: Optional[int]) -> int:
    n = requested or 1
    cap = os.environ.get("SOLVER_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError as exc:
            raise ConfigError(f"SOLVER_THREADS={cap!r} is not an integer") from exc
    return max(1, n)


# ---------------------------------------------------------------------------
# steady atlas


def atlas_grid(p: PhysParams, n: int) -> np.ndarray:
    if p.eps > 0.0 and p.mass_M > 0.0:
        M = p.mass_M
        return np.geomspace(2.0 * M * (1.0 + 1e-6), 1e3 * M, n)
    scale = p.reduced_mass if p.reduced_mass > 0.0 else 1.0
    return np.geomspace(1e-3 * scale, 1e3 * scale, n)


def steady_case(job) -> dict:
    """Build one orbit and write its CSV; failures are returned, not raised."""
    from .steady import SteadyBase, branch_id, make_global_orbit

    idx, case, out = job
    name = str(case.get("name", f"case{idx:03d}"))
    try:
        p = parse_params(_need(case, "params", name), f"{name}.params")
        r0, rho0, v0 = parse_base(_need(case, "base", name), f"{name}.base")
        n = int(case.get("n", 2000))
        orbit = make_global_orbit(SteadyBase.make(r0, rho0, v0, p), p)
        r = atlas_grid(p, n)
        lo, hi = orbit.domain
        r = r[(r > lo) & (r <= hi)] if orbit.partial else r[(r >= lo) & (r <= hi)]
        with np.errstate(over="ignore", under="ignore", divide="ignore"):
            st = orbit(r)
        rho, v = np.asarray(st.rho), np.asarray(st.v)
        # near the horizon the density can exceed the float range; such rows are dropped
        finite = np.isfinite(rho) & np.isfinite(v) & (rho > 0.0)
        dropped = int(r.size - finite.sum())
        r, rho, v = r[finite], rho[finite], v[finite]
        shock = np.zeros(r.shape, dtype=bool)
        bid = branch_id(orbit, r)
        if orbit.shock_radius is not None and r.size and r[0] < orbit.shock_radius < r[-1]:
            left, right = orbit.limits_at_shock()
            r1 = orbit.shock_radius
            at = int(np.searchsorted(r, r1))
            b_lo = int(branch_id(orbit, np.array([r1 * (1 - 1e-9)]))[0])
            b_hi = int(branch_id(orbit, np.array([r1 * (1 + 1e-9)]))[0])
            r = np.insert(r, [at, at], [r1, r1])
            rho = np.insert(rho, [at, at], [left.rho, right.rho])
            v = np.insert(v, [at, at], [left.v, right.v])
            bid = np.insert(bid, [at, at], [b_lo, b_hi])
            shock = np.insert(shock, [at, at], [True, True])
        regime = orbit.classification.regime.value
        path = Path(out) / f"{name}.csv"
        write_csv(path, ["r", "rho", "v", "branch_id", "is_shock", "regime"],
                  [r, rho, v, bid, shock, [regime] * r.size])
        return {"name": name, "path": str(path), "kind": orbit.kind.value, "regime": regime, "error": None,
                "dropped": dropped}
    except SolverError as exc:
        return {"name": name, "path": None, "error": f"{type(exc).__name__}: {exc}"}


def cmd_steady(cfg: dict, out: Path, parallel: int, manifest: RunManifest) -> int:
    cases = cfg.get("cases", [])
    if not isinstance(cases, list):
        raise ConfigError("steady: 'cases' must be a list")
    jobs = [(i, c, str(out)) for i, c in enumerate(cases)]
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as ex:
            results = list(ex.map(steady_case, jobs))
    else:
        results = [steady_case(j) for j in jobs]
    failed = 0
    for res in results:
        if res["error"] is None:
            manifest.add(Path(res["path"]))
            if res["dropped"]:
                manifest.notes.append(f"{res['name']}: {res['dropped']} radii dropped (density not representable)")
            click.echo(f"{res['name']}: {res['kind']} ({res['regime']})")
        else:
            failed += 1
            manifest.notes.append(f"{res['name']}: {res['error']}")
            click.echo(f"{res['name']}: FAILED {res['error']}", err=True)
    if failed:
        manifest.status = f"{failed} case(s) failed"
    return EXIT_OK


# ---------------------------------------------------------------------------
# riemann


def fan_record(fan) -> Dict[str, object]:
    rec: Dict[str, object] = {"r0": fan.r0, "left_rho": fan.left.rho, "left_v": fan.left.v,
                              "middle_rho": fan.middle.rho, "middle_v": fan.middle.v,
                              "right_rho": fan.right.rho, "right_v": fan.right.v}
    for w in (fan.wave1, fan.wave2):
        key = f"wave{w.family}"
        rec[f"{key}_kind"] = w.kind.value
        rec[f"{key}_speed_lo"] = w.speed_lo
        rec[f"{key}_speed_hi"] = w.speed_hi
    rec["strength"] = fan.strength
    return rec


def cmd_riemann(cfg: dict, out: Path, manifest: RunManifest) -> int:
    from .limits import stiff_riemann
    from .riemann import sample_fan, solve_riemann

    p = parse_params(_need(cfg, "params", "riemann"))
    r0 = float(_need(cfg, "r0", "riemann"))
    left = parse_state(_need(cfg, "left", "riemann"), "left")
    right = parse_state(_need(cfg, "right", "riemann"), "right")
    fan = stiff_riemann(left, right, r0, p) if p.is_stiff else solve_riemann(left, right, r0, p)
    rec = fan_record(fan)
    smax = max(abs(fan.wave1.speed_lo), abs(fan.wave2.speed_hi), 1e-3)
    span = float(cfg.get("xi_span", 1.5 * smax))
    xi = np.linspace(-span, span, 512)
    st = sample_fan(fan, xi)
    manifest.add(write_record(out / "fan.csv", rec))
    manifest.add(write_csv(out / "profile.csv", ["xi", "rho", "v"], [xi, st.rho, st.v]))
    for k, v in rec.items():
        click.echo(f"{k} = {v}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# evolve


def parse_scheme(cfg: dict, seq_offset: Optional[int]):
    from .scheme import SchemeConfig, Supplied, VanDerCorput
    from .steady import SteadyBase, make_global_orbit

    p = parse_params(_need(cfg, "params", "evolve"))
    seq_doc = cfg.get("sequence", {})
    if "values" in seq_doc:
        seq = Supplied(tuple(float(x) for x in seq_doc["values"]))
    else:
        seq = VanDerCorput(int(seq_doc.get("offset", 0)))
    if seq_offset is not None:
        seq = VanDerCorput(seq_offset)
    inner = None
    if "inner_orbit_base" in cfg:
        inner = make_global_orbit(SteadyBase.make(*parse_base(cfg["inner_orbit_base"], "inner_orbit_base"), p), p)
    dom = _need(cfg, "domain", "evolve")
    return SchemeConfig(dr=float(_need(cfg, "dr", "evolve")), dt=float(_need(cfg, "dt", "evolve")),
                        domain=(float(dom[0]), float(dom[1])), t_end=float(_need(cfg, "t_end", "evolve")),
                        params=p, sequence=seq, frozen_fan_only=bool(cfg.get("frozen_fan_only", False)),
                        inner_orbit=inner)


def parse_initial(doc: dict, p: PhysParams):
    """Returns (callable initial data, reference orbit or None)."""
    from .steady import SteadyBase, make_global_orbit

    kind = _need(doc, "type", "initial")
    if kind == "orbit":
        orbit = make_global_orbit(SteadyBase.make(*parse_base(_need(doc, "base", "initial"), "initial.base"), p), p)
        return (lambda r: orbit(r)), orbit
    if kind == "riemann":
        split = float(_need(doc, "r_split", "initial"))
        L = parse_state(_need(doc, "left", "initial"), "initial.left")
        R = parse_state(_need(doc, "right", "initial"), "initial.right")
        return (lambda r: FluidState(np.where(r < split, L.rho, R.rho), np.where(r < split, L.v, R.v))), None
    raise ConfigError(f"initial: unknown type {kind!r} (expected 'orbit' or 'riemann')")


def cmd_evolve(cfg: dict, out: Path, seq_offset: Optional[int], manifest: RunManifest) -> int:
    from .scheme import run, untrusted

    scfg = parse_scheme(cfg, seq_offset)
    p = scfg.params
    init, ref = parse_initial(_need(cfg, "initial", "evolve"), p)
    every = int(cfg.get("snapshot_every", 0))
    n_steps = scfg.n_steps
    written: List[Path] = []

    def snapshot(level):
        if not (level.index == 0 or level.index == n_steps or (every > 0 and level.index % every == 0)):
            return
        keep = ~level.ghost
        r, rho, v = level.nodes[keep], level.rho[keep], level.v[keep]
        inv = riemann_invariants(FluidState(rho, v), p)
        cols = [np.full(r.size, level.t), r, rho, v, inv.w, inv.z]
        head = ["t", "r", "rho", "v", "w", "z"]
        if ref is not None:
            st = ref(r)
            cols.append(np.maximum(np.abs(rho / st.rho - 1.0), np.abs(v - st.v)))
            head.append("deviation")
        cols.append(untrusted(level, scfg)[keep])
        head.append("untrusted")
        written.append(write_csv(out / f"snapshot_{level.index:06d}.csv", head, cols))

    sol = run(scfg, init, keep_levels=False, callback=snapshot)
    d = sol.diagnostics
    written.append(write_csv(out / "diagnostics.csv", ["t", "tv_lnrho", "tv_velocity", "L_J", "max_wavespeed"],
                             [[x.t for x in d], [x.tv_lnrho for x in d], [x.tv_velocity for x in d],
                              [x.L_J for x in d], [x.max_wavespeed for x in d]]))
    for w in written:
        manifest.add(w)
    if sol.failure is not None:
        manifest.status = f"failed at level {sol.failed_level}"
        manifest.notes.append(sol.failure)
        click.echo(f"run failed at level {sol.failed_level}: {sol.failure}", err=True)
        return EXIT_SOLVER
    click.echo(f"{len(d)} levels, final t = {d[-1].t:.6g}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# limits


def cmd_limits(cfg: dict, out: Path, manifest: RunManifest) -> int:
    from .limits import LimitKind, limit_consistency

    checks = cfg.get("checks", [])
    for i, c in enumerate(checks):
        try:
            kind = LimitKind(_need(c, "kind", f"checks[{i}]"))
        except ValueError as exc:
            raise ConfigError(f"checks[{i}]: unknown limit kind") from exc
        p = parse_params(_need(c, "params", f"checks[{i}]"), f"checks[{i}].params")
        rep = limit_consistency(p, kind, float(_need(c, "small", f"checks[{i}]")), int(c.get("n", 4)))
        names = list(rep.deviations)
        manifest.add(write_csv(out / f"limit_{i:02d}_{kind.value}.csv", ["small"] + names,
                               [rep.smalls] + [rep.deviations[k] for k in names]))
        orders = ", ".join(f"{k}={v:.3f}" for k, v in rep.orders.items())
        click.echo(f"{kind.value}: max deviation {rep.max_deviation:.3e}"
                   + (f"; orders {orders}" if orders else f"; exact={rep.exact}"))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify and plot helper


def parse_suite(text: str) -> List[int]:
    from .acceptance import CRITERIA

    if text.strip().lower() == "all":
        return sorted(CRITERIA)
    ids = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok.isdigit() or int(tok) not in CRITERIA:
            raise UsageFailure(f"unknown suite id {tok!r}; choose from 1-{max(CRITERIA)} or 'all'")
        ids.append(int(tok))
    return ids


def gnuplot_script(out: Path) -> str:
    lines = ["set datafile separator ','", "set key autotitle columnhead", "set logscale x", ""]
    atlas = sorted(p for p in out.glob("*.csv") if p.name != "diagnostics.csv"
                   and not p.name.startswith(("snapshot_", "limit_", "fan", "profile")))
    if atlas:
        lines += ["set xlabel 'r'", "set ylabel 'v'",
                  "plot " + ", \\\n     ".join(f"'{p.name}' using 1:3 with lines title '{p.stem}'" for p in atlas), ""]
    if (out / "profile.csv").exists():
        lines += ["unset logscale x", "set xlabel 'xi'",
                  "plot 'profile.csv' using 1:2 with lines, '' using 1:3 with lines", ""]
    snaps = sorted(out.glob("snapshot_*.csv"))
    if snaps:
        lines += ["unset logscale x", "set xlabel 'r'", "set ylabel 'rho'",
                  "plot " + ", \\\n     ".join(f"'{p.name}' using 2:3 with lines title '{p.stem}'" for p in snaps), ""]
    if (out / "diagnostics.csv").exists():
        lines += ["unset logscale x", "set xlabel 't'",
                  "plot 'diagnostics.csv' using 1:2 with lines, '' using 1:3 with lines, '' using 1:4 with lines", ""]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# click wiring


def _common(fn):
    fn = click.option("--parallel", type=click.IntRange(min=1), default=1, help="worker processes")(fn)
    fn = click.option("--seq-offset", type=int, default=None, help="van der Corput offset (evolve)")(fn)
    fn = click.option("--out", "out", type=click.Path(file_okay=False), required=True)(fn)
    fn = click.option("--config", "config", type=click.Path(exists=True, dir_okay=False), required=True)(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="schwarzflow")
def cli():
    """Isothermal fluid flows on a Schwarzschild exterior."""


def _execute(command: str, config: str, out: str, body) -> int:
    cfg = load_config(config)
    outp = Path(out)
    outp.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(command, os.path.abspath(config), str(outp))
    try:
        code = body(cfg, outp, manifest)
    except SolverError as exc:
        manifest.status = f"{type(exc).__name__}: {exc}"
        manifest.write()
        raise
    manifest.write()
    return code


@cli.command()
@_common
def steady(config, out, seq_offset, parallel):
    """Steady-state atlas: one CSV per case."""
    n = worker_count(parallel)
    sys.exit(_execute("steady", config, out, lambda c, o, m: cmd_steady(c, o, n, m)))


@cli.command()
@_common
def riemann(config, out, seq_offset, parallel):
    """Exact Riemann solution: fan record and sampled profile."""
    sys.exit(_execute("riemann", config, out, cmd_riemann))


@cli.command()
@_common
def evolve(config, out, seq_offset, parallel):
    """Random choice evolution: snapshots and diagnostics."""
    sys.exit(_execute("evolve", config, out, lambda c, o, m: cmd_evolve(c, o, seq_offset, m)))


@cli.command()
@_common
def limits(config, out, seq_offset, parallel):
    """Deviation of the full model from its limiting models."""
    sys.exit(_execute("limits", config, out, cmd_limits))


@cli.command()
@click.option("--suite", default="all", help="comma-separated criterion ids, or 'all'")
@click.option("--out", "out", type=click.Path(file_okay=False), default=None)
def verify(suite, out):
    """Run acceptance criteria; one line per criterion."""
    from .acceptance import CRITERIA

    ids = parse_suite(suite)
    results = [CRITERIA[i]() for i in ids]
    for r in results:
        click.echo(r.line())
    if out is not None:
        outp = Path(out)
        manifest = RunManifest("verify", None, str(outp))
        manifest.add(write_csv(outp / "verify.csv", ["id", "measured", "tolerance", "pass", "seconds"],
                               [[r.cid for r in results], [r.measured for r in results],
                                [r.tolerance for r in results], [r.passed for r in results],
                                [r.seconds for r in results]]))
        manifest.status = "ok" if all(r.passed for r in results) else "failures"
        manifest.write()
    sys.exit(EXIT_OK if all(r.passed for r in results) else 1)


@cli.command()
@click.option("--out", "out", type=click.Path(file_okay=False, exists=True), required=True)
def plotscript(out):
    """Write plot.gp referencing the CSVs in an output directory."""
    outp = Path(out)
    path = outp / "plot.gp"
    path.write_text(gnuplot_script(outp))
    click.echo(str(path))


def main(argv: Optional[List[str]] = None) -> int:
    try:
        code = cli.main(args=argv, prog_name="schwarzflow", standalone_mode=False)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else (0 if exc.code is None else 1)
    except click.UsageError as exc:
        exc.show()
        code = EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        code = EXIT_USAGE
    except click.Abort:
        code = 1
    except (CflError, ConfigError) as exc:
        click.echo(f"configuration error: {exc}", err=True)
        code = EXIT_CONFIG
    except SolverError as exc:
        click.echo(f"solver error: {type(exc).__name__}: {exc}", err=True)
        code = EXIT_SOLVER
    return int(code or 0)


def entry() -> None:
    sys.exit(main())


__all__ = ["main", "entry", "cli", "parse_params", "atlas_grid", "fan_record", "gnuplot_script", "EXIT_OK",
           "EXIT_SOLVER", "EXIT_CONFIG", "EXIT_USAGE"]
