"""Built-in example systems with their published dimension values.

Maps are stored in column order (the partition must be contiguous), which
for some examples differs from the order in which they are usually
numbered; ``labels`` gives the conventional number of each stored map so
witnesses and words can be translated back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .core import TGLSystem, system_from_spec, validate_system
from .errors import ParamOutOfRange, UnknownEntry


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    params: tuple[str, ...]
    defaults: tuple[float, ...]
    ranges: tuple[tuple[float, float, bool], ...]  # (lo, hi, hi inclusive); lo exclusive
    builder: Callable[..., dict]
    expected: Callable[..., dict]
    tolerances: dict
    labels: Callable[..., list] | None = None
    bespoke: bool = False  # dimensions come from closed forms only
    uplift: bool = False
    notes: tuple[str, ...] = ()


@dataclass
class GalleryBuild:
    entry: GalleryEntry
    params: tuple[float, ...]
    spec: dict
    expected: dict
    labels: list
    notes: tuple[str, ...] = field(default=())

    @property
    def name(self):
        return self.entry.name

    def base_spec(self) -> dict:
        """The planar part of the spec (uplift fields stripped)."""
        maps = [{k: m[k] for k in ("b", "a", "d", "tx", "ty")} for m in self.spec["maps"]]
        return {"class": self.spec["class"], "maps": maps, "columns": list(self.spec["columns"])}

    def system(self) -> TGLSystem:
        if self.entry.bespoke:
            s = self.base_spec()
            return validate_system(s["maps"], s["columns"], s["class"], check=False,
                                   notes=self.notes)
        return system_from_spec(self.base_spec())

    def to_label(self, index: int) -> int:
        return self.labels[index - 1]

    def from_label(self, label: int) -> int:
        return self.labels.index(label) + 1


def _m(b, a, d, tx, ty, **extra):
    out = {"b": float(b), "a": float(a), "d": float(d), "tx": float(tx), "ty": float(ty)}
    out.update({k: float(v) for k, v in extra.items()})
    return out


def _spec(maps, columns, kind="tgl"):
    return {"class": kind, "maps": maps, "columns": list(columns)}


# -- smiley ---------------------------------------------------------------------------


def _smiley():
    b = 0.2
    mouth = dict(a=0.1)
    maps = [
        _m(b, d=-0.2, tx=0.0, ty=0.3, **mouth),   # f1
        _m(b, d=-0.1, tx=0.2, ty=0.1, **mouth),   # f2
        _m(b, 0.13, 0.0, 0.2, 0.75),              # f7, left eye
        _m(b, d=0.0, tx=0.4, ty=0.0, **mouth),    # f3
        _m(b, 0.13, 0.2, 0.4, 0.35),              # f6, nose
        _m(b, d=0.1, tx=0.6, ty=0.0, **mouth),    # f4
        _m(b, 0.13, 0.0, 0.6, 0.75),              # f8, right eye
        _m(b, d=0.2, tx=0.8, ty=0.1, **mouth),    # f5
    ]
    return _spec(maps, (1, 2, 2, 2, 1))


def _smiley_expected():
    return {"dim_H": 1.20665, "dim_B": 1.21340, "dim_Aff": 1.21340}


# -- Falconer-Miao type carpets --------------------------------------------------------


def _fm(a, overlap):
    third = 1.0 / 3.0
    d = 0.5 - a
    if overlap:
        ty = {1: 0.25, 2: 0.75 - a, 3: 0.25, 4: 0.25, 5: 0.75 - a, 6: 0.75 - a}
    else:
        ty = {1: 0.0, 2: 1.0 - a, 3: 0.5, 4: 0.0, 5: 0.5 - a, 6: 1.0 - a}
    maps = [
        _m(third, a, d, 0.0, ty[3]),            # f3
        _m(third, a, -d, 0.0, ty[5]),           # f5
        _m(third, a, 0.0, third, ty[1]),        # f1
        _m(third, a, 0.0, third, ty[2]),        # f2
        _m(third, a, d, 2 * third, ty[4]),      # f4
        _m(third, a, -d, 2 * third, ty[6]),     # f6
    ]
    return _spec(maps, (2, 2, 2))


def _fm_expected(a):
    v = 1.0 - math.log(2.0) / math.log(a)
    return {"dim_H": v, "dim_B": v, "dim_Aff": v}


def fm_transversality_bound(a: float) -> float:
    """Direct bound on the transversality constant K1 of the overlapping carpet (a < 1/6)."""
    return (1.0 / 9.0 - a / 3.0) / ((0.5 - a) * (1.0 / 3.0 - 2.0 * a))


# -- X = X ---------------------------------------------------------------------------------


XX_B = 0.28


def _xx(a):
    b = XX_B
    d = 0.5 - a
    u = (0.0, 0.36, 0.72)
    maps = [
        _m(b, a, d, u[0], 0.25),
        _m(b, a, -d, u[0], 0.75 - a),
        _m(b, a, 0.0, u[1], 0.25),
        _m(b, a, 0.0, u[1], 0.5 - a / 2),
        _m(b, a, 0.0, u[1], 0.75 - a),
        _m(b, a, d, u[2], 0.25),
        _m(b, a, -d, u[2], 0.75 - a),
    ]
    return _spec(maps, (2, 3, 2))


def _xx_expected(a):
    lb = -math.log(XX_B)
    la = -math.log(a)
    s_h = math.log(3.0) / lb
    return {
        "dim_H": math.log(2.0 * 2.0 ** (lb / la) + 3.0 ** (lb / la)) / lb,
        "dim_B": math.log(7.0 / 3.0) / la + s_h,
        "dim_Aff": 1.0 + math.log(7.0 * XX_B) / la,
    }


def xx_transversality_bound(a: float) -> float:
    return XX_B * (XX_B - a) / ((0.5 - a) * (XX_B - 2.0 * a))


# -- zipper -----------------------------------------------------------------------------


def _zipper(a):
    third = 1.0 / 3.0
    d = (1.0 - 5.0 * a) / 4.0
    maps = [
        _m(third, a, d, 0.0, 0.0),
        _m(third, a, d, third, a + d),
        _m(-third, a, 0.0, 2 * third, 2 * (a + d)),
        _m(third, a, d, third, 3 * a + 2 * d),
        _m(third, a, d, 2 * third, 4 * a + 3 * d),
    ]
    return _spec(maps, (1, 3, 1))


def _zipper_expected(a):
    x = math.log(3.0) / -math.log(a)
    dim_b = 1.0 + math.log(3.0 / 5.0) / math.log(a)
    return {"dim_H": math.log(2.0 + 3.0 ** x) / math.log(3.0), "dim_B": dim_b, "dim_Aff": dim_b}


# -- McMullen type -------------------------------------------------------------------------


def _mcmullen():
    maps = [
        _m(0.5, 0.25, 0.0, 0.0, 0.0),
        _m(0.5, 0.25, 0.0, 0.0, 0.5),
        _m(0.5, 0.25, 0.0, 0.5, 0.25),
    ]
    return _spec(maps, (2, 1))


def _mcmullen_expected():
    return {"dim_H": math.log(1.0 + math.sqrt(2.0)) / math.log(2.0),
            "dim_B": math.log(3.0) / math.log(4.0) + 0.5,
            "dim_Aff": math.log(3.0) / math.log(4.0) + 0.5}


# -- 3D uplift -------------------------------------------------------------------------------


def _uplift(a, lam):
    third = 1.0 / 3.0
    rows = [
        # (d, ty, u, tz): third row (u, 0, lambda)
        (1.0 - a, 0.0, 1.0 - lam, 0.0),         # A1
        (a - 1.0, 1.0 - a, 0.0, 0.0),           # A2
        (0.0, 0.0, lam - 1.0, 1.0 - lam),       # A3
        (0.0, 1.0 - a, lam - 1.0, 1.0 - lam),   # A4
        (1.0 - a, 0.0, 1.0 - lam, 0.0),         # A5
        (a - 1.0, 1.0 - a, 0.0, 1.0 - lam),     # A6
    ]
    maps = []
    for i, (d, ty, u, tz) in enumerate(rows):
        maps.append(_m(third, a, d, third * (i // 2), ty, u=u, v=0.0, tz=tz, **{"lambda": lam}))
    return _spec(maps, (2, 2, 2))


def _uplift_expected(a, lam):
    return {"dim": 1.0 - math.log(2.0) / math.log(a)}


# -- registry ----------------------------------------------------------------------------------


REGISTRY: dict[str, GalleryEntry] = {}


def _register(entry):
    REGISTRY[entry.name] = entry


_register(GalleryEntry(
    "smiley", (), (), (), lambda: _smiley(), lambda: _smiley_expected(),
    {"dim_H": 1e-3, "dim_B": 1e-5, "dim_Aff": 1e-5},
    labels=lambda: [1, 2, 7, 3, 6, 4, 8, 5],
    notes=("translations and column grouping are a reconstruction: mouth one map in each "
           "of five columns, eyes in columns 2 and 4, nose in column 3",)))
_register(GalleryEntry(
    "fm_carpet", ("a",), (0.3,), ((0.0, 1.0 / 3.0, False),),
    lambda a: _fm(a, False), _fm_expected, {"dim_H": 1e-6, "dim_B": 1e-6, "dim_Aff": 1e-6},
    labels=lambda a: [3, 5, 1, 2, 4, 6]))
_register(GalleryEntry(
    "fm_overlap", ("a",), (0.15,), ((0.0, 1.0 / 3.0, False),),
    lambda a: _fm(a, True), _fm_expected, {"dim_H": 1e-6, "dim_B": 1e-6, "dim_Aff": 1e-6},
    labels=lambda a: [3, 5, 1, 2, 4, 6],
    notes=("closed form certified for a < 1/6 (transversality and overlap conditions)",)))
_register(GalleryEntry(
    "x_equiv_x", ("a",), (0.045,), ((0.0, 1.0 / 6.0, True),),
    lambda a: _xx(a), _xx_expected, {"dim_H": 1e-3, "dim_B": 1e-6, "dim_Aff": 1e-6},
    notes=("translations are a reconstruction symmetric about x = 1/2 and y = 1/2",
           "dim_H formula certified for a < 0.10405, dim_B for a < 0.10254")))
_register(GalleryEntry(
    "zipper", ("a",), (0.2,), ((0.0, 0.2, True),),
    lambda a: _zipper(a), _zipper_expected, {"dim_H": 1e-6, "dim_B": 1e-6, "dim_Aff": 1e-6},
    bespoke=True,
    notes=("column 2 mixes orientations; dimensions come from closed forms only",)))
_register(GalleryEntry(
    "mcmullen", (), (), (), lambda: _mcmullen(), lambda: _mcmullen_expected(),
    {"dim_H": 1e-6, "dim_B": 1e-6, "dim_Aff": 1e-6}))
_register(GalleryEntry(
    "uplift_demo", ("a", "lambda"), (0.05, 0.03),
    ((0.0, 1.0 / 3.0, False), (0.0, 1.0 / 3.0, False)),
    _uplift, _uplift_expected, {"dim": 1e-9}, uplift=True,
    notes=("column grouping and translations reconstructed so that each outer column "
           "holds a crossing pair and the middle column two bars",)))


def names() -> list[str]:
    return sorted(REGISTRY)


def get(name: str) -> GalleryEntry:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownEntry(f"unknown gallery entry {name!r}; known: {', '.join(names())}") from None


def build(name: str, params=()) -> GalleryBuild:
    entry = get(name)
    params = tuple(float(p) for p in params)
    if not params:
        params = entry.defaults
    if len(params) != len(entry.params):
        raise ParamOutOfRange(
            f"{name} takes {len(entry.params)} parameter(s) {entry.params}, got {len(params)}")
    for pname, val, (lo, hi, inclusive) in zip(entry.params, params, entry.ranges):
        ok = lo < val < hi or (inclusive and val == hi)
        if not ok:
            bracket = "]" if inclusive else ")"
            raise ParamOutOfRange(f"{name}: {pname} = {val} outside ({lo:g}, {hi:g}{bracket}")
    if entry.uplift:
        a, lam = params
        if not lam < a:
            raise ParamOutOfRange(f"{name}: need lambda < a, got lambda = {lam}, a = {a}")
    spec = entry.builder(*params)
    expected = entry.expected(*params)
    labels = entry.labels(*params) if entry.labels else list(range(1, len(spec["maps"]) + 1))
    return GalleryBuild(entry, params, spec, expected, labels, entry.notes)
