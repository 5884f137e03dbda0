"""Command-line entry point: ``carpet-dim <command> ...``.

Exit codes: 0 success, 2 validation failure, 3 numeric failure, 4 I/O error,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

from . import boxcount, conditions, dimension, gallery, render, uplift3d
from .core import A2Warning, dump_spec, load_spec, system_from_spec
from .errors import NumericError, ValidationError

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO, EXIT_USAGE = 0, 2, 3, 4, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _num(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return f"{v:.6f}"
    return str(v)


def _dump_json(obj, out):
    json.dump(obj, out, indent=2, sort_keys=True)
    out.write("\n")


def _load(path):
    spec = load_spec(path)
    if uplift3d.is_uplift_spec(spec):
        up = uplift3d.uplift_from_spec(spec)
        return up.base, up
    return system_from_spec(spec), None


# -- printers --------------------------------------------------------------------------


def _print_dims(rep, out):
    out.write(f"dim_H upper bound alpha* = {_num(rep.alpha_star)}\n")
    out.write(f"box dimension s          = {_num(rep.s)}\n")
    out.write(f"affinity dimension s_A   = {_num(rep.s_A)}\n")
    out.write(f"s_H = {_num(rep.s_H)}   s~_x = {_num(rep.s_tilde_x)}\n")
    out.write(f"h = {_num(rep.h)}   chi1 = {_num(rep.chi1)}   chi2 = {_num(rep.chi2)}\n")
    out.write("p* = [" + ", ".join(_num(p) for p in rep.p_star) + "]\n")
    out.write(f"dim_H = dim_B: {rep.equal_HB}\n")
    out.write(f"dim_B = dim_Aff: {rep.equal_B_Aff}\n")
    for a in rep.assumptions:
        out.write(f"  note: {a}\n")


def _print_conditions(rep, out):
    def status(d):
        w = d.get("witness")
        return d["status"] + (f" (witness {w[0]}, {w[1]})" if w else "")

    out.write(f"ROSC: {status(rep.rosc)}\n")
    out.write(f"column-wise ROSC: {status(rep.columnwise_rosc)}\n")
    t = rep.transversality_sufficient
    extra = " (no overlapping pairs)" if t["vacuous"] else (
        f" (s_* = {_num(t['s_star'])}, r* = {_num(t['r_star'])}, "
        f"b_min = {_num(t['b_min'])}, margin = {_num(t['margin'])})")
    out.write(f"transversality (sufficient test): {t['status']}{extra}\n")
    out.write(f"cond_main at p*: {_num(rep.cond_main['holds'])} (margin {_num(rep.cond_main['margin'])})\n")
    out.write(f"cond_box: {_num(rep.cond_box['holds'])} (margin {_num(rep.cond_box['margin'])})\n")
    if rep.x0 is not None:
        out.write(f"x0 = {_num(rep.x0)}\n")
    pairs = "; ".join(f"column {c + 1}: " + ", ".join(f"({k}, {l})" for k, l in ps)
                      for c, ps in enumerate(rep.overlap_pairs) if ps)
    out.write(f"overlapping pairs: {pairs or 'none'}\n")
    if rep.exact_overlap is not None:
        e = rep.exact_overlap
        if e["found"]:
            out.write(f"exact overlap at level {e['level']}: words {e['words'][0]} and {e['words'][1]}\n")
        else:
            out.write(f"no exact overlap up to level {e['n_max']}\n")
        out.write("Delta_n = [" + ", ".join(_num(v) for v in e["delta"]) + "]\n")


def _print_estimate(est, out):
    out.write(f"empirical box dimension ({est.method}, k = {est.ks[0]}..{est.ks[-1]}): "
              f"{_num(est.slope)} (r2 = {_num(est.r2)})\n")


def _print_uplift(ud, bounds, up, out):
    out.write(f"uplift dimension = {_num(ud.value)}; conditions met: {_num(ud.conditions_met)}\n")
    out.write(f"  a-bounds: {_num(ud.box_bound)} (box), {_num(ud.transversality_bound)} (transversality)\n")
    out.write(f"  3D ROSC: {up.rosc3d}\n")
    if ud.caveat:
        out.write(f"  note: {ud.caveat}\n")
    out.write(f"  skew bounds K_x = {_num(bounds['K_x'])}, K_y = {_num(bounds['K_y'])}, "
              f"K_z = {_num(bounds['K_z'])}\n")


# -- commands ------------------------------------------------------------------------------


def cmd_validate(args, out):
    system, up = _load(args.file)
    out.write(f"valid {system.kind} system: {system.n_maps} maps in {system.n_columns} columns "
              f"{list(system.partition.sizes)}\n")
    out.write(f"diagonally homogeneous: {_num(system.diagonally_homogeneous)}\n")
    out.write(f"uniform vertical fibres: {_num(system.uniform_vertical_fibres)}\n")
    out.write(f"negative entries: {_num(system.has_negative_entries)}\n")
    if up is not None:
        out.write(f"3D uplift: valid, ROSC {up.rosc3d}\n")
    return EXIT_OK


def cmd_dims(args, out):
    system, up = _load(args.file)
    rep = dimension.dimension_report(system)
    if args.json:
        doc = rep.to_dict()
        if up is not None:
            doc["uplift"] = uplift3d.uplift_dimension(up).to_dict()
        _dump_json(doc, out)
    else:
        _print_dims(rep, out)
        if up is not None:
            _print_uplift(uplift3d.uplift_dimension(up), uplift3d.uplift_skew_bounds(up), up, out)
    return EXIT_OK


def cmd_check(args, out):
    system, _ = _load(args.file)
    rep = conditions.condition_report(system, overlap_scan=args.overlap_scan)
    if args.json:
        _dump_json(rep.to_dict(), out)
    else:
        _print_conditions(rep, out)
    return EXIT_OK


def cmd_render(args, out):
    system, _ = _load(args.file)
    if args.cover is not None:
        if args.cover < 1:
            raise ValidationError("--cover depth must be at least 1")
        delta = float(max(abs(system.b))) ** args.cover
        grid = render.rasterize(render.cylinder_cover(system, delta), args.res)
    else:
        cloud = render.chaos_game(system, args.points, args.seed, chunks=args.chunks)
        grid = render.rasterize(cloud, args.res)
    if args.ppm:
        render.write_heatmap(grid, args.out)
    else:
        render.write_image(grid, args.out)
    out.write(f"wrote {args.out} ({args.res}x{args.res}, {grid.occupied} occupied cells)\n")
    return EXIT_OK


def _estimate(system, args):
    if args.projection:
        return boxcount.empirical_projection_dimension(system, args.kmin, args.kmax)
    return boxcount.empirical_box_dimension(system, args.kmin, args.kmax)


def cmd_estimate(args, out):
    system, _ = _load(args.file)
    est = _estimate(system, args)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(est.to_csv())
    if args.json:
        _dump_json(est.to_dict(), out)
    else:
        _print_estimate(est, out)
    return EXIT_OK


def cmd_report(args, out):
    system, up = _load(args.file)
    dims = dimension.dimension_report(system)
    conds = conditions.condition_report(system, p_star=dims.p_star, overlap_scan=args.overlap_scan)
    est = boxcount.empirical_box_dimension(system, args.kmin, args.kmax)
    doc = {"dimensions": dims.to_dict(), "conditions": conds.to_dict(), "estimate": est.to_dict()}
    if up is not None:
        doc["uplift"] = uplift3d.uplift_dimension(up).to_dict()
        doc["uplift_skew_bounds"] = {k: float(f"{v:.12g}")
                                     for k, v in uplift3d.uplift_skew_bounds(up).items()}
    _dump_json(doc, out)
    return EXIT_OK


def _computed_values(built, system, up):
    """Computed counterparts of the gallery's expected quantities."""
    if built.entry.uplift:
        return {"dim": uplift3d.uplift_dimension(up).value}, None
    if built.entry.bespoke:
        return dict(built.expected), None
    rep = dimension.dimension_report(system)
    return {"dim_H": rep.alpha_star, "dim_B": rep.s, "dim_Aff": rep.s_A}, rep


def cmd_example(args, out):
    built = gallery.build(args.name, args.param or ())
    if args.export:
        dump_spec(built.spec, args.export)
        out.write(f"exported {built.name} to {args.export}\n")
    up = uplift3d.uplift_from_spec(built.spec) if built.entry.uplift else None
    system = built.system()
    pnames = ", ".join(f"{n} = {v:g}" for n, v in zip(built.entry.params, built.params))
    out.write(f"{built.name}" + (f" ({pnames})" if pnames else "") + f": {system.n_maps} maps, "
              f"columns {list(system.partition.sizes)}\n")
    if built.labels != list(range(1, system.n_maps + 1)):
        out.write("map order (conventional numbering): " + " ".join(map(str, built.labels)) + "\n")
    for note in built.notes:
        out.write(f"  note: {note}\n")
    if not args.full:
        for key, val in built.expected.items():
            out.write(f"expected {key} = {_num(val)}\n")
        return EXIT_OK

    values, rep = _computed_values(built, system, up)
    all_ok = True
    for key, expected in built.expected.items():
        tol = built.entry.tolerances[key]
        got = values[key]
        ok = abs(got - expected) <= tol
        all_ok &= ok
        source = " (closed form)" if built.entry.bespoke else ""
        verdict = "matches" if ok else "does not match"
        out.write(f"{key} = {_num(got)}{source}  expected {_num(expected)}  "
                  f"{'PASS' if ok else 'FAIL'}: {verdict} expected within {tol:.0e}\n")
    if rep is not None:
        _print_dims(rep, out)
    if up is not None:
        _print_uplift(uplift3d.uplift_dimension(up), uplift3d.uplift_skew_bounds(up), up, out)
    if not built.entry.bespoke:
        _print_conditions(conditions.condition_report(system), out)
        est = boxcount.empirical_box_dimension(system, args.kmin, args.kmax)
        _print_estimate(est, out)
    out.write("overall: " + ("PASS" if all_ok else "FAIL") + "\n")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="carpet-dim",
                description="Dimension theory toolkit for triangular Gatzouras-Lalley-type carpets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check a system file against the axioms")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("dims", help="dimension report")
    s.add_argument("file")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_dims)

    s = sub.add_parser("check", help="separation and overlap conditions")
    s.add_argument("file")
    s.add_argument("--overlap-scan", type=int, default=0, metavar="N",
                   help="run the exact-overlap scan up to level N")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("render", help="write a PGM (or PPM) image of the attractor")
    s.add_argument("file")
    s.add_argument("--out", required=True)
    s.add_argument("--res", type=int, default=512)
    s.add_argument("--points", type=int, default=10 ** 6)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--chunks", type=int, default=1)
    s.add_argument("--cover", type=int, metavar="DEPTH",
                   help="rasterise the cylinder cover at delta = max|b|^DEPTH instead of points")
    s.add_argument("--ppm", action="store_true", help="colour heatmap (P6) instead of P5")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("estimate", help="empirical box-counting estimate")
    s.add_argument("file")
    s.add_argument("--kmin", type=int, default=4)
    s.add_argument("--kmax", type=int, default=10)
    s.add_argument("--projection", action="store_true", help="estimate s_H from the column IFS")
    s.add_argument("--csv", metavar="FILE")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("example", help="build a gallery example")
    s.add_argument("name", help="one of: " + ", ".join(gallery.names()))
    s.add_argument("--param", type=float, action="append")
    s.add_argument("--export", metavar="FILE")
    s.add_argument("--full", action="store_true",
                   help="dimensions, conditions and estimate, compared to published values")
    s.add_argument("--kmin", type=int, default=4)
    s.add_argument("--kmax", type=int, default=10)
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("report", help="dims + check + estimate as one JSON document")
    s.add_argument("file")
    s.add_argument("--overlap-scan", type=int, default=0, metavar="N")
    s.add_argument("--kmin", type=int, default=4)
    s.add_argument("--kmax", type=int, default=10)
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", A2Warning)
            code = args.func(args, out)
        for w in caught:
            err.write(f"warning: {w.message}\n")
        return code
    except ValidationError as exc:
        err.write(f"invalid: {type(exc).__name__}: {exc}\n")
        return EXIT_INVALID
    except NumericError as exc:
        err.write(f"numeric failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        err.write(f"i/o error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
