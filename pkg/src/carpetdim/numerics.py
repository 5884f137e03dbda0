"""Deterministic numerical kernels: bracketed root finding, maximisation over
the open probability simplex, least-squares lines and gradient checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DegenerateInput, NoBracket, NonFinite, OptimizerFailure


@dataclass(frozen=True)
class RootConfig:
    abs_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass(frozen=True)
class SimplexOptConfig:
    starts: int = 16
    step_tol: float = 1e-10
    max_iter: int = 10000
    seed: int = 0

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("starts must be at least 1")


def _checked(f, x):
    y = f(x)
    if not math.isfinite(y):
        raise NonFinite(f"f({x!r}) = {y!r}")
    return y


def solve_monotone(f: Callable[[float], float], lo: float, hi: float,
                   cfg: RootConfig | None = None) -> float:
    """Bisection root of a continuous strictly monotone ``f`` on ``[lo, hi]``.

    Stops when the bracket is narrower than ``cfg.abs_tol`` or when the
    midpoint can no longer be separated from an endpoint in double precision.
    """
    cfg = cfg or RootConfig()
    flo, fhi = _checked(f, lo), _checked(f, hi)
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if (flo > 0) == (fhi > 0):
        raise NoBracket(f"f({lo})={flo:.6g} and f({hi})={fhi:.6g} have the same sign")
    lo, hi = float(lo), float(hi)
    for _ in range(cfg.max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= cfg.abs_tol or mid <= lo or mid >= hi:
            break
        fm = _checked(f, mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# -- simplex maximisation --------------------------------------------------------


def _softmax(z):
    w = np.exp(z - z.max())
    return w / w.sum()


def _logits(p):
    p = np.asarray(p, dtype=float)
    p = np.clip(p, 1e-300, None)
    z = np.log(p / p.sum())
    return z - z.max()


def numeric_gradient(g, p, h=1e-6):
    """Central-difference gradient of ``g`` in ambient coordinates."""
    p = np.asarray(p, dtype=float)
    out = np.empty_like(p)
    for i in range(p.size):
        e = np.zeros_like(p)
        e[i] = h
        out[i] = (g(p + e) - g(p - e)) / (2 * h)
    return out


def _ascend(g, grad, z, cfg):
    """Gradient ascent in softmax coordinates with Armijo backtracking."""
    p = _softmax(z)
    val = g(p)
    if not math.isfinite(val):
        return None
    step = 1.0
    for _ in range(cfg.max_iter):
        gp = np.asarray(grad(p), dtype=float)
        # chain rule through the softmax: dz_i = p_i (g_i - <p, g>)
        gz = p * (gp - np.dot(p, gp))
        gnorm2 = float(np.dot(gz, gz))
        if not math.isfinite(gnorm2):
            break
        if math.sqrt(gnorm2) < cfg.step_tol:
            break
        while True:
            z_new = z + step * gz
            p_new = _softmax(z_new)
            v_new = g(p_new) if np.all(p_new > 0) else -math.inf
            if math.isfinite(v_new) and v_new >= val + 1e-4 * step * gnorm2:
                break
            step *= 0.5
            if step < 1e-300:
                return z, p, val
        moved = np.max(np.abs(step * gz))
        z, p, val = z_new - z_new.max(), p_new, v_new
        step *= 2.0
        if moved < cfg.step_tol * 1e-3:
            break
    return z, p, val


def _newton_polish(g, grad, z, val, tol):
    """A few safeguarded Newton steps on the reduced logits (last one pinned).

    Finishes what gradient ascent leaves: the linear rate stalls long before
    the argmax is pinned to 1e-7 on badly scaled problems.
    """
    n = z.size
    if n < 2 or n > 64:
        return z, val

    def reduced_grad(y):
        zz = np.append(y, 0.0)
        p = _softmax(zz)
        gp = np.asarray(grad(p), dtype=float)
        return (p * (gp - np.dot(p, gp)))[:-1]

    y = z[:-1] - z[-1]
    for _ in range(20):
        gy = reduced_grad(y)
        if not np.all(np.isfinite(gy)) or np.max(np.abs(gy)) < tol:
            break
        h = 1e-5
        hess = np.empty((n - 1, n - 1))
        for i in range(n - 1):
            e = np.zeros(n - 1)
            e[i] = h
            hess[:, i] = (reduced_grad(y + e) - reduced_grad(y - e)) / (2 * h)
        hess = 0.5 * (hess + hess.T)
        try:
            direction = np.linalg.solve(hess, -gy)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(direction)) or np.dot(direction, gy) <= 0:
            break
        t = 1.0
        improved = False
        while t > 1e-6:
            y_new = y + t * direction
            v_new = g(_softmax(np.append(y_new, 0.0)))
            if math.isfinite(v_new) and v_new >= val - 1e-15:
                y, val, improved = y_new, v_new, True
                break
            t *= 0.5
        if not improved:
            break
    z = np.append(y, 0.0)
    return z - z.max(), val


def maximize_simplex(g: Callable[[np.ndarray], float], n: int,
                     cfg: SimplexOptConfig | None = None, *,
                     grad: Callable[[np.ndarray], np.ndarray] | None = None,
                     warm_starts: Iterable[Sequence[float]] = ()) -> tuple[np.ndarray, float]:
    """Maximise ``g`` over the open probability simplex of dimension ``n``.

    Multi-start ascent: ``cfg.starts`` seeded random starts plus the caller's
    warm starts, each refined by gradient ascent on softmax logits and a short
    Newton polish.  Returns ``(p_star, g(p_star))``; ties within 1e-13 are
    broken by the lexicographically smallest ``p_star``.
    """
    cfg = cfg or SimplexOptConfig()
    if n < 2:
        raise ValueError("n must be at least 2")
    if grad is None:
        def grad(p):
            return numeric_gradient(g, p, h=1e-7)

    rng = np.random.default_rng(cfg.seed)
    starts = [_logits(np.asarray(w, dtype=float)) for w in warm_starts]
    starts.append(np.zeros(n))
    starts.extend(rng.normal(scale=1.5, size=(cfg.starts, n)))

    results = []
    for z0 in starts:
        if z0.shape != (n,):
            raise ValueError(f"warm start has length {z0.size}, expected {n}")
        out = _ascend(g, grad, np.array(z0, dtype=float), cfg)
        if out is None:
            continue
        z, p, val = out
        z, val = _newton_polish(g, grad, z, val, cfg.step_tol)
        results.append((val, _softmax(z)))
    if not results:
        raise OptimizerFailure("objective non-finite at every start")

    best_val = max(v for v, _ in results)
    tied = [p for v, p in results if v >= best_val - 1e-13 * max(1.0, abs(best_val))]
    best_p = min(tied, key=lambda p: tuple(p))
    return best_p, float(best_val)


# -- regression and gradient checks -----------------------------------------------


def fit_line(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    """Ordinary least squares ``y = slope * x + intercept``; returns ``(slope, intercept, r2)``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise DegenerateInput("need at least two (x, y) pairs of equal length")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise DegenerateInput("all x values are equal")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    ss_tot = float(np.sum((y - ym) ** 2))
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return slope, intercept, r2


def grad_check(g: Callable[[np.ndarray], float], grad: Callable[[np.ndarray], np.ndarray],
               p: Sequence[float], h: float = 1e-6) -> float:
    """Largest deviation between ``grad(p)`` and central differences of ``g``,
    relative to the largest central-difference component."""
    p = np.asarray(p, dtype=float)
    analytic = np.asarray(grad(p), dtype=float)
    numeric = numeric_gradient(g, p, h)
    scale = max(float(np.max(np.abs(numeric))), 1e-300)
    return float(np.max(np.abs(analytic - numeric)) / scale)
