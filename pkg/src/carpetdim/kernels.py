"""Hot loops: random generator, chaos game, point and parallelogram rasterisation.

Every kernel exists twice, a numba-compiled loop (``*_nb``) and a numpy
version (``*_np``).  Both perform the same floating-point operations in the
same order, so their outputs are bit-identical; ``tests/test_kernels.py``
checks this.  The public wrappers dispatch on :func:`numba_enabled`.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit, numba_enabled

GAMMA = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
TWO_M53 = 2.0 ** -53
RASTER_EPS = 1e-9  # in cell units; boundary contact does not mark a cell


# -- splitmix64 -----------------------------------------------------------------------


@njit
def _mix_nb(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _mix_np(z):
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * MIX1
        z = (z ^ (z >> np.uint64(27))) * MIX2
    return z ^ (z >> np.uint64(31))


def mix64(value: int) -> int:
    """One splitmix64 finaliser application on a 64-bit integer."""
    return int(_mix_np(np.uint64(value % 2 ** 64)))


def chunk_state(seed: int, chunk: int) -> int:
    """Initial generator state of chunk ``chunk`` for a run seeded with ``seed``."""
    return mix64((seed + (chunk + 1) * int(GAMMA)) % 2 ** 64)


def uniforms_np(state: int, count: int) -> np.ndarray:
    """The first ``count`` doubles in [0, 1) from generator state ``state``.

    splitmix64 is counter based: output k is mix(state + (k+1)*GAMMA).
    """
    k = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(state) + k * GAMMA
    return (_mix_np(z) >> np.uint64(11)).astype(np.float64) * TWO_M53


# -- chaos game -------------------------------------------------------------------------


@njit
def _chaos_nb(state, n_points, burn_in, cum, b, a, d, tx, ty, out):
    x = 0.5
    y = 0.5
    s = np.uint64(state)
    m = cum.shape[0]
    for k in range(burn_in + n_points):
        s = s + np.uint64(0x9E3779B97F4A7C15)
        u = np.float64(_mix_nb(s) >> np.uint64(11)) * 1.1102230246251565e-16
        j = m - 1
        for i in range(m):
            if u < cum[i]:
                j = i
                break
        xn = b[j] * x + tx[j]
        y = d[j] * x + a[j] * y + ty[j]
        x = xn
        if k >= burn_in:
            out[k - burn_in, 0] = x
            out[k - burn_in, 1] = y


def _chaos_np(state, n_points, burn_in, cum, b, a, d, tx, ty, out):
    u = uniforms_np(state, burn_in + n_points)
    idx = np.searchsorted(cum, u, side="right")
    np.minimum(idx, cum.size - 1, out=idx)
    bl, al, dl, txl, tyl = (v.tolist() for v in (b, a, d, tx, ty))
    x, y = 0.5, 0.5
    xs = [0.0] * n_points
    ys = [0.0] * n_points
    for k, j in enumerate(idx.tolist()):
        xn = bl[j] * x + txl[j]
        y = dl[j] * x + al[j] * y + tyl[j]
        x = xn
        if k >= burn_in:
            xs[k - burn_in] = x
            ys[k - burn_in] = y
    out[:, 0] = xs
    out[:, 1] = ys


def chaos_chunk(state, n_points, burn_in, cum, b, a, d, tx, ty, use_numba=None):
    out = np.empty((n_points, 2))
    if use_numba is None:
        use_numba = numba_enabled()
    fn = _chaos_nb if use_numba else _chaos_np
    fn(np.uint64(state), n_points, burn_in, cum, b, a, d, tx, ty, out)
    return out


# -- point rasterisation ------------------------------------------------------------------


@njit
def _raster_points_nb(pts, res, grid):
    for k in range(pts.shape[0]):
        c = int(np.floor(pts[k, 0] * res))
        r = int(np.floor(pts[k, 1] * res))
        c = min(max(c, 0), res - 1)
        r = min(max(r, 0), res - 1)
        grid[r, c] += 1


def _raster_points_np(pts, res, grid):
    c = np.clip(np.floor(pts[:, 0] * res).astype(np.int64), 0, res - 1)
    r = np.clip(np.floor(pts[:, 1] * res).astype(np.int64), 0, res - 1)
    grid += np.bincount(r * res + c, minlength=res * res).reshape(res, res)


def raster_points(pts, res, use_numba=None):
    grid = np.zeros((res, res), dtype=np.int64)
    pts = np.ascontiguousarray(pts, dtype=np.float64).reshape(-1, 2)
    if use_numba is None:
        use_numba = numba_enabled()
    (_raster_points_nb if use_numba else _raster_points_np)(pts, res, grid)
    return grid


# -- parallelogram rasterisation ----------------------------------------------------------
#
# A parallelogram is origin + s*(b, d) + t*(0, a), s, t in [0, 1].  A cell is
# marked when its open interior meets the closed parallelogram: columns are
# the cells whose open x-interval meets the x-extent, and within a column
# the y-extent over the slab is [min lower edge, max upper edge] at the slab ends.


@njit
def _raster_cyl_nb(b, a, d, ox, oy, res, grid):
    eps = 1e-9
    for k in range(b.shape[0]):
        bk = b[k]
        x0 = ox[k] + min(0.0, bk)
        x1 = ox[k] + max(0.0, bk)
        slope = d[k] / bk
        lo_off = oy[k] + min(0.0, a[k])
        hi_off = oy[k] + max(0.0, a[k])
        c0 = max(int(np.floor(x0 * res + eps)), 0)
        c1 = min(int(np.ceil(x1 * res - eps)), res)
        for c in range(c0, c1):
            xl = max(x0, c / res)
            xr = min(x1, (c + 1) / res)
            el = slope * (xl - ox[k])
            er = slope * (xr - ox[k])
            lo = lo_off + min(el, er)
            hi = hi_off + max(el, er)
            r0 = max(int(np.floor(lo * res + eps)), 0)
            r1 = min(int(np.ceil(hi * res - eps)), res)
            for r in range(r0, r1):
                grid[r, c] += 1


def _expand(starts, stops):
    """Flattened ``range(starts[i], stops[i])`` with the owning index of each entry."""
    n = np.maximum(stops - starts, 0)
    owner = np.repeat(np.arange(starts.size), n)
    offset = np.arange(owner.size) - np.repeat(np.cumsum(n) - n, n)
    return owner, starts[owner] + offset


def _raster_cyl_np(b, a, d, ox, oy, res, grid, batch=1 << 18):
    eps = 1e-9
    for lo_i in range(0, b.size, batch):
        sl = slice(lo_i, lo_i + batch)
        bk, ak, dk, oxk, oyk = b[sl], a[sl], d[sl], ox[sl], oy[sl]
        x0 = oxk + np.minimum(0.0, bk)
        x1 = oxk + np.maximum(0.0, bk)
        slope = dk / bk
        lo_off = oyk + np.minimum(0.0, ak)
        hi_off = oyk + np.maximum(0.0, ak)
        c0 = np.maximum(np.floor(x0 * res + eps).astype(np.int64), 0)
        c1 = np.minimum(np.ceil(x1 * res - eps).astype(np.int64), res)
        own, c = _expand(c0, c1)
        xl = np.maximum(x0[own], c / res)
        xr = np.minimum(x1[own], (c + 1) / res)
        el = slope[own] * (xl - oxk[own])
        er = slope[own] * (xr - oxk[own])
        lo = lo_off[own] + np.minimum(el, er)
        hi = hi_off[own] + np.maximum(el, er)
        r0 = np.maximum(np.floor(lo * res + eps).astype(np.int64), 0)
        r1 = np.minimum(np.ceil(hi * res - eps).astype(np.int64), res)
        own2, r = _expand(r0, r1)
        flat = r * res + c[own2]
        grid += np.bincount(flat, minlength=res * res).reshape(res, res)


def raster_cylinders(b, a, d, ox, oy, res, use_numba=None):
    grid = np.zeros((res, res), dtype=np.int64)
    arrs = [np.ascontiguousarray(v, dtype=np.float64) for v in (b, a, d, ox, oy)]
    if use_numba is None:
        use_numba = numba_enabled()
    (_raster_cyl_nb if use_numba else _raster_cyl_np)(*arrs, res, grid)
    return grid
