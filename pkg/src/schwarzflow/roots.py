"""Bracketed scalar root finding used by the steady and Riemann kernels."""
from __future__ import annotations

from typing import Callable, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import NumericalError


def newton_bracketed(
    fun: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]],
    lo: np.ndarray,
    hi: np.ndarray,
    x0: np.ndarray,
    xtol: float = 4e-16,
    maxiter: int = 200,
) -> np.ndarray:
    """Vectorised safeguarded Newton for increasing functions.

    ``fun`` returns value and derivative.  Each lane keeps its own bracket;
    a Newton step leaving the bracket is replaced by bisection.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    x = np.clip(np.array(x0, dtype=float), lo, hi)
    active = np.ones(x.shape, dtype=bool)
    for _ in range(maxiter):
        if not active.any():
            return x
        xa = x[active]
        f, fp = fun_active(fun, x, active)
        pos = f > 0.0
        hi_a = np.where(pos, xa, hi[active])
        lo_a = np.where(pos, lo[active], xa)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = xa - f / fp
        bad = ~np.isfinite(xn) | (xn <= lo_a) | (xn >= hi_a)
        xn = np.where(bad, 0.5 * (lo_a + hi_a), xn)
        step = np.abs(xn - xa)
        scale = xtol * np.maximum(1.0, np.abs(xn))
        done = (f == 0.0) | (step <= scale) | (hi_a - lo_a <= scale)
        xn = np.where(f == 0.0, xa, xn)
        lo[active] = lo_a
        hi[active] = hi_a
        x[active] = xn
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    if active.any():
        raise NumericalError("bracketed Newton iteration did not converge")
    return x


def fun_active(fun, x, active):
    sub = x[active]
    f, fp = fun(sub, active)
    return np.asarray(f, dtype=float), np.asarray(fp, dtype=float)


def bracket_root(
    f: Callable[[float], float],
    a: float,
    b: float,
    xtol: float = 1e-15,
    rtol: float = 8.9e-16,
    maxiter: int = 200,
) -> float:
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if np.sign(fa) == np.sign(fb):
        raise NumericalError(f"root not bracketed on [{a}, {b}]")
    try:
        return brentq(f, a, b, xtol=xtol, rtol=rtol, maxiter=maxiter)
    except RuntimeError as exc:
        raise NumericalError(str(exc)) from exc


def expand_bracket(
    f: Callable[[float], float], x0: float, step: float, limit: float, max_steps: int = 200
) -> Tuple[float, float]:
    """Walk from x0 in direction sign(step) doubling the step until f changes sign."""
    f0 = f(x0)
    x = x0
    for _ in range(max_steps):
        xn = x + step
        if (step > 0 and xn > limit) or (step < 0 and xn < limit):
            xn = limit
        fn = f(xn)
        if np.sign(fn) != np.sign(f0) or fn == 0.0:
            return (x, xn) if x < xn else (xn, x)
        if xn == limit:
            break
        x = xn
        step *= 2.0
    raise NumericalError("failed to bracket a sign change")
