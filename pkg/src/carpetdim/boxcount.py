"""Empirical box-counting estimates, independent of the closed-form dimension formulas."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .core import TGLSystem
from .errors import CoverTooLarge, ValidationError
from .numerics import fit_line
from .render import MAX_COVER, chaos_game, cylinder_cover, rasterize

K_LIMITS = (3, 12)


@dataclass
class BoxCountEstimate:
    ks: list
    scales: list
    counts: list
    slope: float
    intercept: float
    r2: float
    method: str

    def to_dict(self, digits: int = 12) -> dict:
        def f(v):
            return float(f"{v:.{digits}g}")

        return {"ks": list(self.ks), "scales": [f(s) for s in self.scales],
                "counts": list(self.counts), "slope": f(self.slope),
                "intercept": f(self.intercept), "r2": f(self.r2), "method": self.method}

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("k,delta,count\n")
        for k, s, c in zip(self.ks, self.scales, self.counts):
            buf.write(f"{k},{s:.12g},{c}\n")
        return buf.getvalue()


def _check_range(k_min, k_max):
    lo, hi = K_LIMITS
    if not (lo <= k_min < k_max <= hi):
        raise ValidationError(f"need {lo} <= k_min < k_max <= {hi}, got {k_min}, {k_max}")


def _estimate(ks, counts, method):
    x = [k * math.log(2.0) for k in ks]
    y = [math.log(c) for c in counts]
    slope, intercept, r2 = fit_line(x, y)
    return BoxCountEstimate(list(ks), [2.0 ** -k for k in ks], [int(c) for c in counts],
                            slope, intercept, r2, method)


def empirical_box_dimension(system: TGLSystem, k_min: int = 4, k_max: int = 10, *,
                            method: str = "cylinder-cover", n_points: int = 10 ** 6,
                            seed: int = 0) -> BoxCountEstimate:
    """Slope of log N_delta against log(1/delta) over delta = 2^-k, k_min <= k <= k_max.

    ``cylinder-cover`` (default) rasterises the Moran cover at ``delta``
    conservatively on the 2^k grid; ``point-cloud`` counts cells hit by a
    chaos-game sample instead, which undercounts at fine scales.
    """
    _check_range(k_min, k_max)
    ks = list(range(k_min, k_max + 1))
    counts = []
    if method == "cylinder-cover":
        for k in ks:
            cover = cylinder_cover(system, 2.0 ** -k)
            counts.append(rasterize(cover, 2 ** k).occupied)
    elif method == "point-cloud":
        cloud = chaos_game(system, n_points, seed)
        for k in ks:
            counts.append(rasterize(cloud, 2 ** k).occupied)
    else:
        raise ValidationError(f"unknown method {method!r}")
    return _estimate(ks, counts, method)


def interval_cover(r, t, delta: float, max_intervals: int = MAX_COVER):
    """Left and right ends of the Moran cover of the 1-D IFS ``x -> r_i x + t_i``."""
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    thresh = delta * (1.0 + 1e-12)
    scale, shift = np.ones(1), np.zeros(1)
    lefts, rights = [], []
    total = 0
    while scale.size:
        if total + scale.size * r.size > max_intervals:
            raise CoverTooLarge(f"interval cover at delta = {delta:g} is too large")
        ns = (scale[:, None] * r[None, :]).ravel()
        nt = (shift[:, None] + scale[:, None] * t[None, :]).ravel()
        stop = np.abs(ns) <= thresh
        lo = nt + np.minimum(0.0, ns)
        lefts.append(lo[stop])
        rights.append(lo[stop] + np.abs(ns[stop]))
        total += int(stop.sum())
        scale, shift = ns[~stop], nt[~stop]
    return np.concatenate(lefts), np.concatenate(rights)


def count_intervals(lefts, rights, res: int) -> int:
    """Cells of the uniform grid of ``res`` cells on [0, 1] whose interior meets an interval."""
    eps = 1e-9
    c0 = np.clip(np.floor(lefts * res + eps).astype(np.int64), 0, res)
    c1 = np.clip(np.ceil(rights * res - eps).astype(np.int64), 0, res)
    mark = np.zeros(res + 1, dtype=np.int64)
    ok = c1 > c0
    np.add.at(mark, c0[ok], 1)
    np.add.at(mark, c1[ok], -1)
    return int(np.count_nonzero(np.cumsum(mark)[:res]))


def empirical_projection_dimension(system_or_ifs, k_min: int = 4,
                                   k_max: int = 10) -> BoxCountEstimate:
    """Box-counting estimate of the attractor of the column IFS (``s_H``).

    Accepts a system or a pair ``(r, t)`` of signed ratios and translations."""
    _check_range(k_min, k_max)
    if isinstance(system_or_ifs, TGLSystem):
        r, t = system_or_ifs.column_ifs()
    else:
        r, t = system_or_ifs
    ks = list(range(k_min, k_max + 1))
    counts = []
    for k in ks:
        lo, hi = interval_cover(r, t, 2.0 ** -k)
        counts.append(count_intervals(lo, hi, 2 ** k))
    return _estimate(ks, counts, "interval-cover")
