"""Separation and overlap conditions with numeric margins.

Margins follow one convention: ``margin > 0`` exactly when the condition holds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import TGLSystem
from .dimension import (
    box_dimension_upper,
    column_marginal,
    hausdorff_dimension_upper,
    natural_box_weights,
)
from .errors import AllColumnsSingleton, NotDiagHomo, ScanTooLarge, ZeroEntry
from .geometry import interiors_intersect_2d
from .numerics import RootConfig, solve_monotone

SCAN_LIMIT = 10 ** 6
EXACT_TOL = 1e-12


def _level1(system):
    return [m.corners() for m in system.maps]


def overlap_pairs(system: TGLSystem) -> list[list[tuple[int, int]]]:
    """Per column, the 1-based pairs of maps whose level-1 images overlap in their interiors."""
    polys = _level1(system)
    out = []
    for members in system.partition.members:
        pairs = [(k + 1, l + 1) for k, l in itertools.combinations(members, 2)
                 if interiors_intersect_2d(polys[k], polys[l])]
        out.append(pairs)
    return out


def _first_overlap(system, same_column_only):
    polys = _level1(system)
    phi = system.phi
    for k, l in itertools.combinations(range(system.n_maps), 2):
        if same_column_only and phi[k] != phi[l]:
            continue
        if interiors_intersect_2d(polys[k], polys[l]):
            return (k + 1, l + 1)
    return None


def check_rosc(system: TGLSystem) -> dict:
    witness = _first_overlap(system, same_column_only=False)
    return {"status": "holds" if witness is None else "fails", "witness": witness}


def check_columnwise_rosc(system: TGLSystem) -> dict:
    witness = _first_overlap(system, same_column_only=True)
    return {"status": "holds" if witness is None else "fails", "witness": witness}


def transversality_sufficient(system: TGLSystem, pairs=None) -> dict:
    """Sufficient criterion ``s_* b_min / (2 + s_* b_min) > r*`` over overlapping same-column pairs."""
    if pairs is None:
        pairs = overlap_pairs(system)
    slopes = system.d / system.b
    r_star = float(np.max(np.abs(system.a / system.b)))
    b_min = float(np.min(np.abs(system.b)))
    flat = [p for col in pairs for p in col]
    if not flat:
        return {"status": "holds", "vacuous": True, "s_star": None, "r_star": r_star,
                "b_min": b_min, "margin": None}
    s_star = min(abs(float(slopes[k - 1] - slopes[l - 1])) for k, l in flat)
    bound = s_star * b_min / (2.0 + s_star * b_min)
    margin = bound - r_star
    return {"status": "holds" if margin > 0 else "inconclusive", "vacuous": False,
            "s_star": s_star, "r_star": r_star, "b_min": b_min, "margin": margin}


def check_cond_main(system: TGLSystem, p) -> dict:
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0):
        raise ZeroEntry("cond_main needs a strictly positive probability vector")
    q = column_marginal(system, p)
    lhs = float(np.dot(p, np.log(np.abs(system.a))) / np.dot(p, np.log(np.abs(system.b))))
    counts = np.asarray(system.partition.sizes, dtype=float)
    log_n = float(np.dot(q, np.log(counts)))
    if log_n == 0.0:
        rhs = 1.0
    else:
        rhs = 1.0 + log_n / -float(np.dot(q, np.log(q)))
    margin = lhs - rhs
    return {"holds": bool(margin > 0), "margin": margin, "lhs": lhs, "rhs": rhs}


def check_cond_box(system: TGLSystem) -> dict:
    s, s_h, _ = box_dimension_upper(system)
    p, q = natural_box_weights(system, s, s_h)
    lhs = -float(np.dot(p, np.log(p))) + float(np.dot(q, np.log(q)))
    rhs = s_h * (float(np.dot(p, np.log(np.abs(system.b)))) - float(np.dot(p, np.log(np.abs(system.a)))))
    margin = rhs - lhs
    return {"holds": bool(margin > 0), "margin": margin, "lhs": lhs, "rhs": rhs}


def threshold_R(x: float, counts) -> float:
    """``R(x) = x + 1/(r(x) - 1)`` with ``r(x) = phi(sum N^x) / sum phi(N^x)``, ``phi(y) = y log y``."""
    n = np.asarray(counts, dtype=float)
    nx = n ** x
    tot = float(nx.sum())
    r = tot * math.log(tot) / float(np.sum(nx * np.log(nx)))
    return x + 1.0 / (r - 1.0)


def diag_homo_threshold(system_or_counts) -> float:
    """The root ``x0`` of ``R(x) = 1`` on (0, 1); accepts a system or column counts."""
    if isinstance(system_or_counts, TGLSystem):
        if not system_or_counts.diagonally_homogeneous:
            raise NotDiagHomo("threshold x0 is defined for diagonally homogeneous systems only")
        counts = system_or_counts.partition.sizes
    else:
        counts = list(system_or_counts)
    if all(c == 1 for c in counts):
        raise AllColumnsSingleton("every column has one map; cond_main holds vacuously")

    def f(x):
        return threshold_R(x, counts) - 1.0

    # R(x) -> -inf as x -> 0+ and R(1) > 1
    lo = 1e-9
    while f(lo) >= 0 and lo > 1e-300:
        lo *= 1e-3
    return solve_monotone(f, lo, 1.0 - 1e-15, RootConfig(abs_tol=1e-14, max_iter=400))


def exact_overlap_scan(system_or_ifs, n_max: int) -> dict:
    """Finite exact-overlap scan of the column IFS ``h_i(x) = r_i x + t_i``.

    ``system_or_ifs`` is a system or a pair of arrays ``(r, t)`` (signed).
    ``delta[n-1]`` is the least gap ``|h_w(0) - h_v(0)|`` over distinct words
    of length n with equal derivative (``inf`` if no two share one).
    """
    if isinstance(system_or_ifs, TGLSystem):
        r, t = system_or_ifs.column_ifs()
    else:
        r, t = (np.asarray(v, dtype=float) for v in system_or_ifs)
    m = r.size
    if n_max < 1:
        return {"found": False, "level": None, "words": None, "delta": [], "n_max": n_max}
    if float(m) ** n_max > SCAN_LIMIT:
        raise ScanTooLarge(f"{m}^{n_max} words exceed the scan limit of {SCAN_LIMIT}")

    deriv = np.ones(1)
    offset = np.zeros(1)
    words = np.zeros((1, 0), dtype=np.int64)
    delta = []
    for n in range(1, n_max + 1):
        offset = (offset[:, None] + deriv[:, None] * t[None, :]).ravel()
        deriv = (deriv[:, None] * r[None, :]).ravel()
        words = np.hstack([np.repeat(words, m, axis=0),
                           np.tile(np.arange(m), words.shape[0])[:, None]])
        gap, pair = _min_gap(deriv, offset)
        delta.append(gap)
        if gap <= EXACT_TOL:
            i, j = pair
            return {"found": True, "level": n,
                    "words": ([int(v) + 1 for v in words[i]], [int(v) + 1 for v in words[j]]),
                    "delta": delta, "n_max": n_max}
    return {"found": False, "level": None, "words": None, "delta": delta, "n_max": n_max}


def _min_gap(deriv, offset):
    order = np.argsort(deriv, kind="stable")
    dv = deriv[order]
    # split into groups of equal derivative (relative tolerance)
    breaks = np.flatnonzero(np.abs(np.diff(dv)) > EXACT_TOL * np.maximum(np.abs(dv[1:]), np.abs(dv[:-1])))
    best, pair = math.inf, None
    for grp in np.split(order, breaks + 1):
        if grp.size < 2:
            continue
        o = offset[grp]
        srt = np.argsort(o, kind="stable")
        gaps = np.diff(o[srt])
        k = int(np.argmin(gaps))
        if gaps[k] < best:
            best = float(gaps[k])
            pair = (int(grp[srt[k]]), int(grp[srt[k + 1]]))
    return best, pair


# -- report ------------------------------------------------------------------------


@dataclass
class ConditionReport:
    rosc: dict
    columnwise_rosc: dict
    transversality_sufficient: dict
    cond_main: dict
    cond_box: dict
    x0: float | None
    exact_overlap: dict | None
    overlap_pairs: list = field(default_factory=list)

    def to_dict(self, digits: int = 12) -> dict:
        def fmt(v):
            if isinstance(v, float):
                if math.isinf(v):
                    return "inf"
                return float(f"{v:.{digits}g}")
            if isinstance(v, (list, tuple)):
                return [fmt(x) for x in v]
            if isinstance(v, dict):
                return {k: fmt(x) for k, x in v.items()}
            return v

        return fmt(asdict(self))


def condition_report(system: TGLSystem, p_star=None, overlap_scan: int = 0) -> ConditionReport:
    if p_star is None:
        _, p_star = hausdorff_dimension_upper(system)
    pairs = overlap_pairs(system)
    x0 = None
    if system.diagonally_homogeneous and any(c > 1 for c in system.partition.sizes):
        x0 = diag_homo_threshold(system)
    scan = exact_overlap_scan(system, overlap_scan) if overlap_scan else None
    return ConditionReport(
        rosc=check_rosc(system),
        columnwise_rosc=check_columnwise_rosc(system),
        transversality_sufficient=transversality_sufficient(system, pairs),
        cond_main=check_cond_main(system, p_star),
        cond_box=check_cond_box(system),
        x0=x0,
        exact_overlap=scan,
        overlap_pairs=pairs,
    )
