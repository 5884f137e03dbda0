"""Three-dimensional lower-triangular uplifts of planar TGL systems.

Map ``i`` acts on ``[0,1]^3`` by the matrix

    [[b_i, 0,   0       ],
     [d_i, a_i, 0       ],
     [u_i, v_i, lambda_i]]

plus the translation ``(tx_i, ty_i, tz_i)``; the first two rows are the base system.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .conditions import overlap_pairs
from .core import EPS_GEOM, TGLSystem, skewness_bound, system_from_spec
from .errors import (
    LambdaOrderViolation,
    LengthMismatch,
    OutOfUnitCube,
    SeriesDiverges,
    SpecFormatError,
    TheoremHypothesisViolation,
)
from .geometry import interiors_intersect_3d, parallelepiped_vertices

UPLIFT_KEYS = ("u", "v", "lambda", "tz")


@dataclass(frozen=True)
class UpliftSystem:
    base: TGLSystem
    u: np.ndarray
    v: np.ndarray
    lam: np.ndarray
    tz: np.ndarray
    rosc3d: str
    witness: tuple[int, int] | None = None

    @property
    def n_maps(self):
        return self.base.n_maps

    def matrix(self, i: int) -> np.ndarray:
        """Linear part of map ``i`` (0-based)."""
        s = self.base
        return np.array([[s.b[i], 0.0, 0.0],
                         [s.d[i], s.a[i], 0.0],
                         [self.u[i], self.v[i], self.lam[i]]])

    def translation(self, i: int) -> np.ndarray:
        return np.array([self.base.tx[i], self.base.ty[i], self.tz[i]])

    def edges(self, i: int) -> np.ndarray:
        """Edge vectors of the parallelepiped image of the unit cube (rows)."""
        return self.matrix(i).T

    def to_spec(self) -> dict:
        spec = self.base.to_spec()
        for m, u, v, lam, tz in zip(spec["maps"], self.u, self.v, self.lam, self.tz):
            m.update({"u": float(u), "v": float(v), "lambda": float(lam), "tz": float(tz)})
        return spec


def validate_uplift(base: TGLSystem, u, v, lam, tz) -> UpliftSystem:
    n = base.n_maps
    arrs = []
    for name, val in (("u", u), ("v", v), ("lambda", lam), ("tz", tz)):
        arr = np.asarray(val, dtype=float).ravel()
        if arr.size != n:
            raise LengthMismatch(f"{name} has length {arr.size}, expected {n}")
        arrs.append(arr)
    u, v, lam, tz = arrs
    aa, ab = np.abs(base.a), np.abs(base.b)
    bad = np.flatnonzero(~((np.abs(lam) > 0) & (np.abs(lam) < aa) & (aa < ab) & (ab < 1)))
    if bad.size:
        raise LambdaOrderViolation(
            "need 0 < |lambda_i| < a_i < b_i < 1; fails for maps "
            + ", ".join(str(i + 1) for i in bad))
    draft = UpliftSystem(base, u, v, lam, tz, "unknown")
    outside = []
    for i in range(n):
        verts = parallelepiped_vertices(draft.translation(i), draft.edges(i))
        if verts.min() < -EPS_GEOM or verts.max() > 1.0 + EPS_GEOM:
            outside.append(i + 1)
    if outside:
        raise OutOfUnitCube("images of the unit cube leave [0,1]^3 for maps "
                            + ", ".join(map(str, outside)))
    status, witness = _rosc3d(draft)
    return UpliftSystem(base, u, v, lam, tz, status, witness)


def _aabb(verts):
    return verts.min(axis=0), verts.max(axis=0)


def _rosc3d(up):
    boxes = [_aabb(parallelepiped_vertices(up.translation(i), up.edges(i)))
             for i in range(up.n_maps)]
    for i, j in itertools.combinations(range(up.n_maps), 2):
        lo = np.maximum(boxes[i][0], boxes[j][0])
        hi = np.minimum(boxes[i][1], boxes[j][1])
        if np.any(hi - lo <= EPS_GEOM):
            continue
        if interiors_intersect_3d(up.translation(i), up.edges(i),
                                  up.translation(j), up.edges(j)):
            return "fails", (i + 1, j + 1)
    return "holds", None


def uplift_from_spec(spec) -> UpliftSystem:
    """Planar spec whose maps also carry ``u, v, lambda, tz``."""
    try:
        maps = spec["maps"]
        extra = {k: [m[k] for m in maps] for k in UPLIFT_KEYS}
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"uplift spec is missing per-map key {exc}") from None
    planar = dict(spec)
    planar["maps"] = [{k: val for k, val in m.items() if k not in UPLIFT_KEYS} for m in maps]
    base = system_from_spec(planar)
    return validate_uplift(base, extra["u"], extra["v"], extra["lambda"], extra["tz"])


def is_uplift_spec(spec) -> bool:
    maps = spec.get("maps") if isinstance(spec, dict) else None
    return bool(maps) and isinstance(maps[0], dict) and any(k in maps[0] for k in UPLIFT_KEYS)


@dataclass
class UpliftDimension:
    value: float
    conditions_met: bool
    box_bound: float
    transversality_bound: float
    d_star: float | None
    caveat: str

    def __iter__(self):
        return iter((self.value, self.conditions_met))

    def to_dict(self, digits: int = 12) -> dict:
        def f(x):
            return x if x is None or math.isinf(x) else float(f"{x:.{digits}g}")

        return {"value": f(self.value), "conditions_met": self.conditions_met,
                "box_bound": f(self.box_bound) if math.isfinite(self.box_bound) else "inf",
                "transversality_bound": (f(self.transversality_bound)
                                         if math.isfinite(self.transversality_bound) else "inf"),
                "d_star": f(self.d_star), "caveat": self.caveat}


def uplift_dimension(up: UpliftSystem) -> UpliftDimension:
    """``1 + log(N b) / (-log a)`` and whether the smallness condition on ``a`` holds."""
    base = up.base
    if not base.diagonally_homogeneous:
        raise TheoremHypothesisViolation("base system must be diagonally homogeneous")
    sizes = base.partition.sizes
    if len(set(sizes)) != 1:
        raise TheoremHypothesisViolation("base system must have the same number of maps in every column")
    b = float(abs(base.b[0]))
    a = float(abs(base.a[0]))
    m, n = base.n_columns, base.n_maps
    if abs(m * b - 1.0) > 1e-9:
        raise TheoremHypothesisViolation(f"columns must tile [0,1] (M b = {m * b:.6g}, not 1)")
    value = 1.0 + math.log(n * b) / -math.log(a)
    box_bound = b ** (math.log(n) / math.log(m))
    pairs = [p for col in overlap_pairs(base) for p in col]
    if pairs:
        d_star = min(abs(float(base.d[k - 1] - base.d[l - 1])) for k, l in pairs)
        trans_bound = b * d_star / (2.0 + d_star)
    else:
        d_star, trans_bound = None, math.inf
    met = a < min(box_bound, trans_bound) and up.rosc3d == "holds"
    caveat = "" if met else "hypotheses unverified; value is the formula only"
    return UpliftDimension(value, met, box_bound, trans_bound, d_star, caveat)


def uplift_skew_bounds(up: UpliftSystem) -> dict:
    """Uniform bounds ``|D_w| <= K_x |b_w|``, ``|Y_w| <= K_y |b_w|``, ``|Z_w| <= K_z |b_w|``
    on the (2,1), (3,1), (3,2) entries of every composed matrix.

    With ``z_w = Z_w/b_w`` the recursion ``z_{wi} = (a_i/b_i) z_w + (lambda_w/b_w)(v_i/b_i)``
    gives ``|z_n| <= c rho^n``, ``c = V/(rho - sigma)``; summing the analogous
    recursion for ``y_w`` gives ``K_y``.
    """
    s = up.base
    ab = np.abs(s.b)
    rho = float(np.max(np.abs(s.a) / ab))
    sigma = float(np.max(np.abs(up.lam) / ab))
    if not (sigma < rho < 1.0):
        raise SeriesDiverges(f"need max|lambda|/b < max|a|/b < 1, got {sigma:.6g}, {rho:.6g}")
    big_v = float(np.max(np.abs(up.v) / ab))
    big_u = float(np.max(np.abs(up.u) / ab))
    big_d = float(np.max(np.abs(s.d) / ab))
    c = big_v / (rho - sigma)
    k_z = c * rho
    k_y = big_u / (1.0 - sigma) + c * big_d * rho / (1.0 - rho)
    return {"K_x": skewness_bound(s), "K_y": k_y, "K_z": k_z, "c": c, "rho": rho, "sigma": sigma}


def compose_matrices(up: UpliftSystem, word) -> np.ndarray:
    """Product of the linear parts along a 1-based word, left to right."""
    out = np.eye(3)
    for i in word:
        out = out @ up.matrix(int(i) - 1)
    return out
