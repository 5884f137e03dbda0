"""Attractor geometry: chaos-game samples, Moran cylinder covers, raster grids, images."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._accel import max_workers
from .core import Cylinder, TGLSystem
from .dimension import natural_box_weights
from .errors import CoverTooLarge, ResolutionOutOfRange, ValidationError, ZeroEntry

BURN_IN = 100
MAX_COVER = 10 ** 7
MAX_RES = 8192


@dataclass
class PointCloud:
    points: np.ndarray  # shape (n, 2)
    seed: int
    weights: np.ndarray
    chunks: int = 1

    def __len__(self):
        return self.points.shape[0]


@dataclass
class RasterGrid:
    resolution: int
    counts: np.ndarray  # counts[row, col]; row indexes y, col indexes x

    @property
    def occupied(self) -> int:
        return int(np.count_nonzero(self.counts))


def _cumulative(weights):
    cum = np.cumsum(weights / weights.sum())
    cum[-1] = 1.0
    return cum


def chunk_plan(n_points: int, chunks: int) -> list[int]:
    """Sizes of the chunks: equal split with the remainder spread over the first ones."""
    chunks = max(1, min(int(chunks), n_points))
    base, extra = divmod(n_points, chunks)
    return [base + (1 if c < extra else 0) for c in range(chunks)]


def chaos_game(system: TGLSystem, n_points: int, seed: int = 0, weights=None,
               chunks: int = 1) -> PointCloud:
    """Random iteration from (1/2, 1/2), 100 burn-in steps per chunk.

    Chunk ``c`` draws from the generator state :func:`kernels.chunk_state`
    (seed, c); the output is the concatenation of the chunks in order, so it
    depends on ``(seed, chunks)`` but not on how many workers run them.
    """
    if n_points < 1:
        raise ValidationError("n_points must be at least 1")
    if weights is None:
        weights = natural_box_weights(system)[0]
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (system.n_maps,):
        raise ValidationError(f"weights must have length {system.n_maps}")
    if np.any(weights <= 0):
        raise ZeroEntry("chaos-game weights must be strictly positive")
    cum = _cumulative(weights)
    coeffs = [np.ascontiguousarray(v, dtype=np.float64)
              for v in (system.b, system.a, system.d, system.tx, system.ty)]
    plan = chunk_plan(n_points, chunks)

    def run(c):
        return kernels.chaos_chunk(kernels.chunk_state(seed, c), plan[c], BURN_IN, cum, *coeffs)

    workers = min(max_workers(), len(plan))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(plan))))
    else:
        parts = [run(c) for c in range(len(plan))]
    return PointCloud(np.vstack(parts), int(seed), weights, len(plan))


# -- cylinder covers -------------------------------------------------------------------


@dataclass
class CylinderCover:
    """Struct-of-arrays Moran cover; ``words`` holds 1-based symbols padded with 0."""

    b: np.ndarray
    a: np.ndarray
    d: np.ndarray
    ox: np.ndarray
    oy: np.ndarray
    words: np.ndarray | None = None

    def __len__(self):
        return self.b.size

    def cylinders(self):
        for k in range(len(self)):
            word = () if self.words is None else tuple(int(v) for v in self.words[k] if v)
            yield Cylinder(word, float(self.b[k]), float(self.a[k]), float(self.d[k]),
                           (float(self.ox[k]), float(self.oy[k])))

    def word_list(self):
        if self.words is None:
            raise ValueError("cover was built without words")
        return [tuple(int(v) for v in row if v) for row in self.words]


def cylinder_cover(system: TGLSystem, delta: float, *, words: bool = False,
                   max_cylinders: int = MAX_COVER) -> CylinderCover:
    """Prefix-free cover stopping at the first level with ``|b_w| <= delta``.

    Every word has length at least one; ``|b_w| <= delta`` is tested with a
    relative slack of 1e-12 so that ``delta = 0.2**2`` stops after two 0.2 steps.
    """
    if not 0.0 < delta <= 1.0:
        raise ValidationError(f"delta must lie in (0, 1], got {delta}")
    n = system.n_maps
    if words and n > 255:
        raise ValidationError("word storage supports at most 255 maps")
    mb, ma, md = system.b, system.a, system.d
    mtx, mty = system.tx, system.ty
    thresh = delta * (1.0 + 1e-12)

    # pending cylinders (not yet small enough)
    b = np.ones(1)
    a = np.ones(1)
    d = np.zeros(1)
    ox = np.zeros(1)
    oy = np.zeros(1)
    w = np.zeros((1, 0), dtype=np.uint8)
    done = []
    total = 0
    while b.size:
        if total + b.size * n > max_cylinders:
            raise CoverTooLarge(f"cover at delta = {delta:g} needs more than {max_cylinders} cylinders")
        nb = (b[:, None] * mb[None, :]).ravel()
        na = (a[:, None] * ma[None, :]).ravel()
        nd = (d[:, None] * mb[None, :] + a[:, None] * md[None, :]).ravel()
        nox = (ox[:, None] + b[:, None] * mtx[None, :]).ravel()
        noy = (oy[:, None] + d[:, None] * mtx[None, :] + a[:, None] * mty[None, :]).ravel()
        if words:
            nw = np.hstack([np.repeat(w, n, axis=0),
                            np.tile(np.arange(1, n + 1, dtype=np.uint8), w.shape[0])[:, None]])
        stop = np.abs(nb) <= thresh
        if np.any(stop):
            done.append((nb[stop], na[stop], nd[stop], nox[stop], noy[stop],
                         nw[stop] if words else None))
            total += int(stop.sum())
        keep = ~stop
        b, a, d, ox, oy = nb[keep], na[keep], nd[keep], nox[keep], noy[keep]
        if words:
            w = nw[keep]

    parts = list(zip(*done))
    out = [np.concatenate(p) for p in parts[:5]]
    word_arr = None
    if words:
        depth = max(p.shape[1] for p in parts[5])
        word_arr = np.vstack([np.pad(p, ((0, 0), (0, depth - p.shape[1]))) for p in parts[5]])
    return CylinderCover(*out, words=word_arr)


# -- rasterisation -----------------------------------------------------------------------


def check_resolution(res: int) -> int:
    res = int(res)
    if not (2 <= res <= MAX_RES) or res & (res - 1):
        raise ResolutionOutOfRange(f"resolution must be a power of two in [2, {MAX_RES}], got {res}")
    return res


def rasterize(source, resolution: int) -> RasterGrid:
    """Point mode: add one to the cell of each point (x = 1 lands in the last cell).
    Cylinder mode (a :class:`CylinderCover` or iterable of :class:`Cylinder`): add
    one to every cell whose open interior meets the parallelogram."""
    res = check_resolution(resolution)
    if isinstance(source, PointCloud):
        return RasterGrid(res, kernels.raster_points(source.points, res))
    if isinstance(source, np.ndarray):
        return RasterGrid(res, kernels.raster_points(source, res))
    if isinstance(source, CylinderCover):
        arrs = (source.b, source.a, source.d, source.ox, source.oy)
    else:
        cyls = list(source)
        arrs = (np.array([c.b for c in cyls]), np.array([c.a for c in cyls]),
                np.array([c.d for c in cyls]), np.array([c.origin[0] for c in cyls]),
                np.array([c.origin[1] for c in cyls]))
    return RasterGrid(res, kernels.raster_cylinders(*arrs, res))


# -- images ----------------------------------------------------------------------------------


def _gray(grid: RasterGrid) -> np.ndarray:
    counts = grid.counts
    cmax = int(counts.max()) if counts.size else 0
    if cmax == 0:
        img = np.zeros(counts.shape, dtype=np.uint8)
    else:
        img = np.rint(255.0 * np.log1p(counts) / math.log1p(cmax)).astype(np.uint8)
    return img[::-1]  # first image row is the top (largest y)


def write_image(grid: RasterGrid, path) -> None:
    """Binary PGM (P5, maxval 255) of log-scaled counts."""
    img = _gray(grid)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img).tobytes())


def palette() -> np.ndarray:
    """Fixed 256-entry black-red-yellow-white ramp."""
    v = np.arange(256) / 255.0
    rgb = np.stack([np.clip(3 * v, 0, 1), np.clip(3 * v - 1, 0, 1), np.clip(3 * v - 2, 0, 1)], axis=1)
    return np.rint(255 * rgb).astype(np.uint8)


def write_heatmap(grid: RasterGrid, path) -> None:
    """Binary PPM (P6) of log-scaled counts through :func:`palette`."""
    img = palette()[_gray(grid)]
    h, w = img.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img).tobytes())
