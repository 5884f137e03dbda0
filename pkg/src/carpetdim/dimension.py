"""Dimension quantities of (shifted) TGL systems.

All formulas consume ``|a_i|`` and ``|b_i|``; natural logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import TGLSystem
from .errors import EmptyInput, LengthMismatch, RatioOutOfRange, ZeroEntry
from .numerics import RootConfig, SimplexOptConfig, maximize_simplex, solve_monotone

ROOT_CFG = RootConfig(abs_tol=1e-14, max_iter=400)

ASSUME_SH_SHIFTED = "s_H taken as the similarity dimension of the column IFS (assumes no dimension drop of H)"
ASSUME_SH_VIOLATED = "s_H assumption violated: exact overlap in the column IFS"
ASSUME_UNVALIDATED = "system bypassed axiom validation"


def _prob(p, n, name="p"):
    p = np.asarray(p, dtype=float)
    if p.shape != (n,):
        raise LengthMismatch(f"{name} has length {p.size}, expected {n}")
    return p


def _positive(p):
    if np.any(p <= 0):
        raise ZeroEntry(f"probability vector must be strictly positive (zero at index "
                        f"{int(np.flatnonzero(p <= 0)[0]) + 1})")
    return p


def column_marginal(system: TGLSystem, p) -> np.ndarray:
    p = _prob(p, system.n_maps)
    return np.bincount(system.phi, weights=p, minlength=system.n_columns)


def entropy_and_lyapunov(system: TGLSystem, p) -> tuple[float, float, float]:
    """``(h, chi1, chi2)`` of the Bernoulli measure with weights ``p``."""
    p = _positive(_prob(p, system.n_maps))
    h = -float(np.dot(p, np.log(p)))
    chi1 = -float(np.dot(p, np.log(np.abs(system.b))))
    chi2 = -float(np.dot(p, np.log(np.abs(system.a))))
    return h, chi1, chi2


def _d_parts(system, p):
    q = np.bincount(system.phi, weights=p, minlength=system.n_columns)
    hp = -float(np.dot(p, np.log(p)))
    hq = -float(np.dot(q, np.log(q)))
    chi1 = -float(np.dot(p, np.log(np.abs(system.b))))
    chi2 = -float(np.dot(p, np.log(np.abs(system.a))))
    return q, hp, hq, chi1, chi2


def dim_formula_D(system: TGLSystem, p) -> float:
    p = _positive(_prob(p, system.n_maps))
    _, hp, hq, chi1, chi2 = _d_parts(system, p)
    return hq / chi1 + (hp - hq) / chi2


def dim_formula_D_grad(system: TGLSystem, p) -> np.ndarray:
    """Gradient of :func:`dim_formula_D` in ambient coordinates (p not renormalised)."""
    p = _positive(_prob(p, system.n_maps))
    q, hp, hq, chi1, chi2 = _d_parts(system, p)
    lb, la = np.log(np.abs(system.b)), np.log(np.abs(system.a))
    dhp = -np.log(p) - 1.0
    dhq = -np.log(q)[system.phi] - 1.0
    return (dhq / chi1 + hq * lb / chi1 ** 2
            + (dhp - dhq) / chi2 + (hp - hq) * la / chi2 ** 2)


def _upper_bracket(f, start=2.0):
    hi = start
    while f(hi) > 0:
        hi *= 2.0
        if hi > 1e6:
            break
    return hi


def similarity_dimension(ratios) -> float:
    """Root ``s >= 0`` of ``sum r_i^s = 1``."""
    r = np.asarray(ratios, dtype=float).ravel()
    if r.size == 0:
        raise EmptyInput("no ratios given")
    if np.any(~((r > 0) & (r < 1))):
        raise RatioOutOfRange("every ratio must lie in (0, 1)")
    if r.size == 1:
        return 0.0

    def f(s):
        return float(np.sum(r ** s)) - 1.0

    return solve_monotone(f, 0.0, _upper_bracket(f), ROOT_CFG)


def _s_tilde_x(system):
    return similarity_dimension(np.abs(system.b))


def affinity_dimension(system: TGLSystem) -> float:
    stx = _s_tilde_x(system)
    if stx < 1.0:
        return stx
    ab, aa = np.abs(system.b), np.abs(system.a)

    def f(s):
        return float(np.sum(ab * aa ** (s - 1.0))) - 1.0

    return solve_monotone(f, 1.0, _upper_bracket(f), ROOT_CFG)


def box_dimension_upper(system: TGLSystem) -> tuple[float, float, str]:
    """``(s, s_H, assumption)``; ``assumption`` is empty for non-shifted systems."""
    s_h = similarity_dimension(system.partition.widths)
    ab, aa = np.abs(system.b), np.abs(system.a)

    def f(s):
        return float(np.sum(ab ** s_h * aa ** (s - s_h))) - 1.0

    s = solve_monotone(f, 0.0, _upper_bracket(f), ROOT_CFG)
    assumption = ASSUME_SH_SHIFTED if system.kind == "shifted" else ""
    return s, s_h, assumption


def natural_box_weights(system: TGLSystem, s: float | None = None,
                        s_h: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    if s is None or s_h is None:
        s, s_h, _ = box_dimension_upper(system)
    p = np.abs(system.b) ** s_h * np.abs(system.a) ** (s - s_h)
    p = p / p.sum()
    return p, column_marginal(system, p)


def diag_homo_optimum(system: TGLSystem) -> tuple[float, np.ndarray]:
    """Closed-form ``(alpha*, p*)`` for a diagonally homogeneous system."""
    b = float(np.abs(system.b[0]))
    a = float(np.abs(system.a[0]))
    x = math.log(b) / math.log(a)
    counts = np.asarray(system.partition.sizes, dtype=float)
    total = float(np.sum(counts ** x))
    p = counts[system.phi] ** (x - 1.0) / total
    return math.log(total) / -math.log(b), p


def _diag_homo_guess(system):
    """Closed-form p* of the diagonally homogeneous system with geometric-mean entries."""
    b = math.exp(float(np.mean(np.log(np.abs(system.b)))))
    a = math.exp(float(np.mean(np.log(np.abs(system.a)))))
    if not a < b:
        return None
    x = math.log(b) / math.log(a)
    counts = np.asarray(system.partition.sizes, dtype=float)
    p = counts[system.phi] ** (x - 1.0)
    return p / p.sum()


def hausdorff_dimension_upper(system: TGLSystem,
                              cfg: SimplexOptConfig | None = None) -> tuple[float, np.ndarray]:
    """``(alpha*, p*)``: the maximum of D over the probability simplex."""
    if system.diagonally_homogeneous:
        return diag_homo_optimum(system)
    n = system.n_maps
    warm = [np.full(n, 1.0 / n), natural_box_weights(system)[0]]
    guess = _diag_homo_guess(system)
    if guess is not None:
        warm.append(guess)

    def g(p):
        return dim_formula_D(system, p)

    def grad(p):
        return dim_formula_D_grad(system, p)

    p_star, value = maximize_simplex(g, n, cfg, grad=grad, warm_starts=warm)
    return value, p_star


# -- report ------------------------------------------------------------------------


@dataclass
class DimensionReport:
    alpha_star: float
    p_star: list
    s: float
    s_A: float
    s_H: float
    s_x: float
    s_tilde_x: float
    h: float
    chi1: float
    chi2: float
    equal_HB: str
    equal_B_Aff: str
    assumptions: list = field(default_factory=list)

    def to_dict(self, digits: int = 12) -> dict:
        def fmt(v):
            if isinstance(v, float):
                return float(f"{v:.{digits}g}")
            if isinstance(v, list):
                return [fmt(x) for x in v]
            return v

        return {k: fmt(v) for k, v in asdict(self).items()}


def uniform_fibre_criterion(system: TGLSystem, s: float, s_h: float, tol: float = 1e-9) -> bool:
    aa = np.abs(system.a)
    return all(abs(float(np.sum(aa[list(m)] ** (s - s_h))) - 1.0) <= tol
               for m in system.partition.members)


def dimension_report(system: TGLSystem, conditions=None,
                     cfg: SimplexOptConfig | None = None) -> DimensionReport:
    """Aggregate every dimension quantity.

    ``equal_HB`` is ``equal``/``strict`` only when the separation hypotheses are
    established: ROSC for a TGL system, or transversality (sufficient test)
    together with both overlap conditions.  ``conditions`` may be a
    precomputed :class:`~carpetdim.conditions.ConditionReport`.
    """
    s, s_h, assumption = box_dimension_upper(system)
    s_a = affinity_dimension(system)
    stx = _s_tilde_x(system)
    alpha, p_star = hausdorff_dimension_upper(system, cfg)
    h, chi1, chi2 = entropy_and_lyapunov(system, p_star)

    assumptions = []
    if not system.validated:
        assumptions.append(ASSUME_UNVALIDATED)

    if conditions is None:
        from .conditions import condition_report
        conditions = condition_report(system, p_star=p_star, overlap_scan=0)
    if assumption:
        found = getattr(conditions, "exact_overlap", None)
        assumptions.append(ASSUME_SH_VIOLATED if found and found.get("found")
                           else assumption)

    certified = False
    if system.kind == "tgl":
        if conditions.rosc["status"] == "holds":
            certified = True
            assumptions.append("ROSC holds")
        elif (conditions.transversality_sufficient["status"] == "holds"
              and conditions.cond_main["holds"] and conditions.cond_box["holds"]):
            certified = True
            assumptions.append("transversality (sufficient test), cond_main and cond_box hold")
    if certified:
        equal_hb = "equal" if uniform_fibre_criterion(system, s, s_h) else "strict"
    else:
        equal_hb = "unknown"
        assumptions.append("equality of Hausdorff and box dimension not certified")
    equal_baff = "equal" if abs(s_h - min(stx, 1.0)) <= 1e-9 else "strict"

    return DimensionReport(
        alpha_star=float(alpha), p_star=[float(v) for v in p_star], s=s, s_A=s_a, s_H=s_h,
        s_x=s_h, s_tilde_x=stx, h=h, chi1=chi1, chi2=chi2,
        equal_HB=equal_hb, equal_B_Aff=equal_baff, assumptions=assumptions)
