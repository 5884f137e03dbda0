"""Compare the numba and numpy kernel paths.

    python3 benchmarks/bench_kernels.py [--points N] [--res R] [--repeat K]

Each kernel runs once per path to warm up (numba compiles or loads its
cache), then the best of ``--repeat`` timings is reported.  Outputs of the
two paths are compared for bit-identity on the way.
"""

import argparse
import time

import numpy as np

from carpetdim import _accel, gallery, kernels
from carpetdim.dimension import natural_box_weights
from carpetdim.render import _cumulative, cylinder_cover


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench(label, fn_nb, fn_np, repeat):
    fn_nb(), fn_np()
    t_nb, out_nb = best_of(fn_nb, repeat)
    t_np, out_np = best_of(fn_np, repeat)
    same = np.array_equal(out_nb, out_np)
    print(f"{label:<34} numba {t_nb * 1e3:9.2f} ms   numpy {t_np * 1e3:9.2f} ms   "
          f"speedup {t_np / t_nb:6.1f}x   identical {same}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=10 ** 6)
    ap.add_argument("--res", type=int, default=1024)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    system = gallery.build("smiley").system()
    cum = _cumulative(natural_box_weights(system)[0])
    coeffs = [np.ascontiguousarray(v, dtype=np.float64)
              for v in (system.b, system.a, system.d, system.tx, system.ty)]
    state = kernels.chunk_state(0, 0)

    def chaos(flag):
        return lambda: kernels.chaos_chunk(state, args.points, 100, cum, *coeffs, use_numba=flag)

    bench(f"chaos game, {args.points} points", chaos(True), chaos(False), args.repeat)

    pts = kernels.chaos_chunk(state, args.points, 100, cum, *coeffs)
    bench(f"point raster, {args.res}^2", lambda: kernels.raster_points(pts, args.res, True),
          lambda: kernels.raster_points(pts, args.res, False), args.repeat)

    cover = cylinder_cover(system, 1.0 / args.res)
    arrs = (cover.b, cover.a, cover.d, cover.ox, cover.oy)
    bench(f"cylinder raster, {len(cover)} cyl, {args.res}^2",
          lambda: kernels.raster_cylinders(*arrs, args.res, use_numba=True),
          lambda: kernels.raster_cylinders(*arrs, args.res, use_numba=False), args.repeat)


if __name__ == "__main__":
    main()
