"""Planar lower-triangular IFSs with column structure (TGL and shifted TGL).

A map is ``f(x, y) = (b*x + tx, d*x + a*y + ty)``.  Maps are grouped into
columns by a declared contiguous partition; maps in one column share ``b``
and ``tx``.  Words and map indices in the public API are 1-based.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    ColumnInconsistency,
    ColumnMassViolation,
    ColumnWidthViolation,
    DominationViolation,
    IndexOutOfRange,
    InvalidPartition,
    OutOfUnitSquare,
    OverlapColumnsInTGLClass,
    SpecFormatError,
)

EPS_GEOM = 1e-12
KINDS = ("tgl", "shifted")
MAP_KEYS = ("b", "a", "d", "tx", "ty")


class A2Warning(UserWarning):
    """The column IFS is not normalised so that its extreme fixed points are 0 and 1."""


@dataclass(frozen=True)
class AffineMap2:
    b: float
    a: float
    d: float
    tx: float
    ty: float

    def __call__(self, x, y):
        return self.b * x + self.tx, self.d * x + self.a * y + self.ty

    def corners(self):
        """Image of the unit square, counter-clockwise from f(0, 0) when b, a > 0."""
        return np.array([self(0.0, 0.0), self(1.0, 0.0), self(1.0, 1.0), self(0.0, 1.0)])

    def to_dict(self):
        return {k: float(getattr(self, k)) for k in MAP_KEYS}


@dataclass(frozen=True)
class ColumnPartition:
    sizes: tuple[int, ...]
    widths: tuple[float, ...]   # r_i = |b| shared by the column
    offsets: tuple[float, ...]  # u_i = left end of the column's x-interval

    @property
    def count(self):
        return len(self.sizes)

    @cached_property
    def members(self) -> tuple[tuple[int, ...], ...]:
        """0-based map indices of each column."""
        out, start = [], 0
        for n in self.sizes:
            out.append(tuple(range(start, start + n)))
            start += n
        return tuple(out)

    @cached_property
    def phi(self) -> np.ndarray:
        """Column index (0-based) of every map (0-based)."""
        return np.repeat(np.arange(len(self.sizes)), self.sizes)


@dataclass(frozen=True)
class TGLSystem:
    maps: tuple[AffineMap2, ...]
    partition: ColumnPartition
    kind: str = "tgl"
    diagonally_homogeneous: bool = False
    uniform_vertical_fibres: bool = False
    has_negative_entries: bool = False
    validated: bool = True
    notes: tuple[str, ...] = field(default=(), compare=False)

    # array views -- signed entries as given
    @cached_property
    def b(self):
        return _ro(np.array([m.b for m in self.maps]))

    @cached_property
    def a(self):
        return _ro(np.array([m.a for m in self.maps]))

    @cached_property
    def d(self):
        return _ro(np.array([m.d for m in self.maps]))

    @cached_property
    def tx(self):
        return _ro(np.array([m.tx for m in self.maps]))

    @cached_property
    def ty(self):
        return _ro(np.array([m.ty for m in self.maps]))

    @property
    def n_maps(self):
        return len(self.maps)

    @property
    def n_columns(self):
        return self.partition.count

    @property
    def column_sizes(self):
        return np.array(self.partition.sizes)

    @property
    def phi(self):
        return self.partition.phi

    def column_ifs(self):
        """Signed projected column maps ``x -> r*x + t`` as (r, t) arrays."""
        first = [members[0] for members in self.partition.members]
        return self.b[first].copy(), self.tx[first].copy()

    def to_spec(self) -> dict:
        return {
            "class": self.kind,
            "maps": [m.to_dict() for m in self.maps],
            "columns": list(self.partition.sizes),
        }


def _ro(arr):
    arr.setflags(write=False)
    return arr


# -- validation --------------------------------------------------------------------


def _as_map(m) -> AffineMap2:
    if isinstance(m, AffineMap2):
        return m
    if isinstance(m, Mapping):
        try:
            return AffineMap2(*(float(m[k]) for k in MAP_KEYS))
        except KeyError as exc:
            raise SpecFormatError(f"map is missing key {exc.args[0]!r}") from None
        except (TypeError, ValueError):
            raise SpecFormatError(f"map entries must be numbers: {dict(m)!r}") from None
    vals = tuple(float(v) for v in m)
    if len(vals) != 5:
        raise SpecFormatError("a map needs exactly five numbers (b, a, d, tx, ty)")
    return AffineMap2(*vals)


def _fmt(idx):
    return ", ".join(str(i + 1) for i in idx)


def _partition(maps, sizes):
    b = np.array([m.b for m in maps])
    tx = np.array([m.tx for m in maps])
    widths, offsets, start = [], [], 0
    for n in sizes:
        i = start
        widths.append(abs(b[i]))
        offsets.append(tx[i] + min(0.0, b[i]))
        start += n
    return ColumnPartition(tuple(sizes), tuple(widths), tuple(offsets))


def validate_system(maps: Iterable, columns: Sequence[int], kind: str = "tgl", *,
                    check: bool = True, notes: Sequence[str] = ()) -> TGLSystem:
    """Build a validated, immutable :class:`TGLSystem`.

    Raises the axiom-specific :class:`~carpetdim.errors.ValidationError`
    subclass naming the offending (1-based) indices.  ``check=False`` skips the
    axioms and marks the result ``validated=False``; only geometric routines
    should be fed such systems.
    """
    maps = tuple(_as_map(m) for m in maps)
    sizes = tuple(int(c) for c in columns)
    kind = str(kind).lower()
    if kind not in KINDS:
        raise SpecFormatError(f"class must be one of {KINDS}, got {kind!r}")
    n = len(maps)
    if n < 2:
        raise InvalidPartition("a system needs at least two maps")
    if len(sizes) < 2 and check:
        raise InvalidPartition("a system needs at least two columns")
    if any(c <= 0 for c in sizes) or sum(sizes) != n:
        raise InvalidPartition(f"column sizes {list(sizes)} must be positive and sum to {n}")
    for m in maps:
        if not all(math.isfinite(getattr(m, k)) for k in MAP_KEYS):
            raise SpecFormatError("map entries must be finite")

    b = np.array([m.b for m in maps])
    a = np.array([m.a for m in maps])
    partition = _partition(maps, sizes)

    if check:
        _check_domination(b, a)
        _check_columns(maps, b, partition)
        _check_column_mass(a, partition)
        _check_column_layout(partition, kind)
        _check_unit_square(maps)
        _warn_a2(partition, b)

    ab, aa = np.abs(b), np.abs(a)
    diag = bool(np.ptp(ab) <= EPS_GEOM and np.ptp(aa) <= EPS_GEOM)
    negative = bool(np.any(b < 0) or np.any(a < 0))
    system = TGLSystem(maps, partition, kind, diag, False, negative, check, tuple(notes))
    if check:
        from .dimension import box_dimension_upper, uniform_fibre_criterion
        s, s_h, _ = box_dimension_upper(system)
        if uniform_fibre_criterion(system, s, s_h):
            system = replace(system, uniform_vertical_fibres=True)
    return system


def _check_domination(b, a):
    bad = np.flatnonzero(~((np.abs(a) > 0) & (np.abs(a) < np.abs(b)) & (np.abs(b) < 1)))
    if bad.size:
        raise DominationViolation(f"need 0 < |a_i| < |b_i| < 1; fails for maps {_fmt(bad)}")


def _check_columns(maps, b, partition):
    for col, members in enumerate(partition.members):
        idx = list(members)
        signs = np.sign(b[idx])
        if np.ptp(signs) != 0:
            raise ColumnInconsistency(
                f"column {col + 1}: mixed signs of b among maps {_fmt(idx)}")
        bs = b[idx]
        txs = np.array([maps[i].tx for i in idx])
        if np.ptp(bs) > EPS_GEOM:
            raise ColumnInconsistency(f"column {col + 1}: b differs among maps {_fmt(idx)}")
        if np.ptp(txs) > EPS_GEOM:
            raise ColumnInconsistency(f"column {col + 1}: tx differs among maps {_fmt(idx)}")


def _check_column_mass(a, partition):
    for col, members in enumerate(partition.members):
        mass = float(np.sum(np.abs(a[list(members)])))
        if mass > 1.0 + EPS_GEOM:
            raise ColumnMassViolation(
                f"column {col + 1}: sum of |a| over maps {_fmt(members)} is {mass:.6g} > 1")


def _check_column_layout(partition, kind):
    r, u = partition.widths, partition.offsets
    if kind == "shifted":
        if sum(r) > 1.0 + EPS_GEOM:
            raise ColumnWidthViolation(f"column widths sum to {sum(r):.6g} > 1")
        return
    for i in range(len(r) - 1):
        if u[i] + r[i] > u[i + 1] + EPS_GEOM:
            raise OverlapColumnsInTGLClass(
                f"columns {i + 1} and {i + 2} overlap or are out of order "
                f"(u+r = {u[i] + r[i]:.6g} > {u[i + 1]:.6g})")
    if u[-1] + r[-1] > 1.0 + EPS_GEOM:
        raise OverlapColumnsInTGLClass(f"column {len(r)} extends past x = 1")


def _check_unit_square(maps):
    bad = []
    for i, m in enumerate(maps):
        c = m.corners()
        if c.min() < -EPS_GEOM or c.max() > 1.0 + EPS_GEOM:
            bad.append(i)
    if bad:
        raise OutOfUnitSquare(f"images of the unit square leave [0,1]^2 for maps {_fmt(bad)}")


def _warn_a2(partition, b):
    fixed = []
    for r, u, members in zip(partition.widths, partition.offsets, partition.members):
        bb = b[members[0]]
        t = u - min(0.0, bb)
        fixed.append(t / (1.0 - bb))
    if min(fixed) > 1e-9 or max(fixed) < 1.0 - 1e-9:
        warnings.warn(
            f"column IFS fixed points span [{min(fixed):.6g}, {max(fixed):.6g}], not [0, 1]",
            A2Warning, stacklevel=3)


# -- spec documents --------------------------------------------------------------


def system_from_spec(spec: Mapping, *, check: bool = True) -> TGLSystem:
    """Validate a spec document ``{"class", "maps", "columns"}``; unknown keys are rejected."""
    if not isinstance(spec, Mapping):
        raise SpecFormatError("system spec must be a JSON object")
    unknown = set(spec) - {"class", "maps", "columns"}
    if unknown:
        raise SpecFormatError(f"unknown keys in system spec: {sorted(unknown)}")
    missing = {"class", "maps", "columns"} - set(spec)
    if missing:
        raise SpecFormatError(f"missing keys in system spec: {sorted(missing)}")
    maps = spec["maps"]
    if not isinstance(maps, list):
        raise SpecFormatError("'maps' must be an array")
    for m in maps:
        if not isinstance(m, Mapping):
            raise SpecFormatError("each map must be an object {b, a, d, tx, ty}")
        extra = set(m) - set(MAP_KEYS)
        if extra:
            raise SpecFormatError(f"unknown keys in map: {sorted(extra)}")
    cols = spec["columns"]
    if not isinstance(cols, list) or not all(isinstance(c, int) and not isinstance(c, bool)
                                             for c in cols):
        raise SpecFormatError("'columns' must be an array of positive integers")
    return validate_system(maps, cols, spec["class"], check=check)


def load_spec(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecFormatError(f"{path}: invalid JSON ({exc})") from None


def load_system(path, *, check: bool = True) -> TGLSystem:
    return system_from_spec(load_spec(path), check=check)


def dump_spec(spec: Mapping, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- cylinders ----------------------------------------------------------------------


@dataclass(frozen=True)
class Cylinder:
    """The parallelogram ``f_w([0,1]^2)``; ``b, a, d`` are the composed linear part."""

    word: tuple[int, ...]
    b: float
    a: float
    d: float
    origin: tuple[float, float]

    @property
    def tan_angle(self):
        return self.d / self.b

    def compose(self, other: "Cylinder") -> "Cylinder":
        """``f_{self.word} o f_{other.word}``."""
        ox, oy = self.origin
        tx, ty = other.origin
        return Cylinder(
            self.word + other.word,
            self.b * other.b,
            self.a * other.a,
            self.d * other.b + self.a * other.d,
            (ox + self.b * tx, oy + self.d * tx + self.a * ty),
        )

    def corners(self):
        ox, oy = self.origin
        return np.array([
            (ox, oy),
            (ox + self.b, oy + self.d),
            (ox + self.b, oy + self.d + self.a),
            (ox, oy + self.a),
        ])


IDENTITY = Cylinder((), 1.0, 1.0, 0.0, (0.0, 0.0))


def cylinder(system: TGLSystem, word: Sequence[int]) -> Cylinder:
    """Compose the maps of ``word`` (1-based) left to right."""
    out = IDENTITY
    n = system.n_maps
    for i in word:
        if not (1 <= int(i) <= n):
            raise IndexOutOfRange(f"map index {i} outside 1..{n}")
        m = system.maps[int(i) - 1]
        out = out.compose(Cylinder((int(i),), m.b, m.a, m.d, (m.tx, m.ty)))
    return out


def skewness_bound(system: TGLSystem) -> float:
    """Uniform bound on ``|d_w / b_w|`` over all finite words."""
    ab = np.abs(system.b)
    s = float(np.max(np.abs(system.d) / ab))
    r = float(np.max(np.abs(system.a) / ab))
    return s / (1.0 - r)
