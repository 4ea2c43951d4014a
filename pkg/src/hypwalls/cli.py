"""Command-line front end.

Exit codes: 0 on success, 2 for bad input, 3 when a computation is
inconclusive or runs out of steps.
"""

import argparse
import json
import sys

from . import _config
from .exceptions import (
    BisectorIsPlane,
    DeterminantError,
    DomainError,
    IdentityHasAllPoints,
    Inconclusive,
    InSU2,
    NoIsometricSphere,
    NotSquarefree,
    ParseError,
    StepLimit,
)

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 2, 3


def _boundary_json(p):
    return "inf" if p.is_infinity else [p.z.real, p.z.imag]


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _matrix_arg(args):
    from .io import parse_matrix

    if args.matrix is not None:
        return parse_matrix(args.matrix)
    if args.input is None:
        raise ParseError("give a matrix literal with --matrix or a file path")
    return parse_matrix(_read(args.input))


def _group_arg(path):
    from .fixtures import load_fixture
    from .io import parse_group

    if path.startswith("fixture:"):
        return load_fixture(path.split(":", 1)[1])
    return parse_group(_read(path))


def _parse_slice(text):
    try:
        axis, value = text.split("=")
        axis = axis.strip().lower().replace(" ", "")
        axis = {"im": "im", "imz": "im", "re": "re", "rez": "re"}[axis]
        return axis, float(value)
    except (ValueError, KeyError):
        raise ParseError(f"slice must look like 'im=0' or 're=0.5', got {text!r}") from None


# --- subcommands ---


def cmd_classify(args):
    from .classify import classify_geometric, classify_trace, fixed_points, wall_relation
    from .models import is_su2

    g = _matrix_arg(args)
    tc = classify_trace(g, args.tol)
    report = {"class": tc.cls.value, "trace": [tc.trace.real, tc.trace.imag], "marginal": tc.marginal}
    try:
        report["fixed_points"] = [_boundary_json(p) for p in fixed_points(g, args.tol)]
    except IdentityHasAllPoints:
        report["fixed_points"] = "all"
    rel = None
    if not is_su2(g, args.tol):
        wr = wall_relation(g, args.tol)
        rel = {"kind": wr.kind, "gap": wr.gap, "at": None if wr.at is None else _boundary_json(wr.at)}
    report["wall_relation"] = rel
    report["n_used"] = None
    if args.method == "geometric":
        gc = classify_geometric(g, args.max_power, args.tol)
        report["class"] = gc.cls.value
        report["n_used"] = gc.n_used
    return report


def cmd_wall(args):
    from .walls import bisector_ball, bisector_half_space, isometric_sphere_half_space

    g = _matrix_arg(args)
    if args.model == "half":
        wall = bisector_half_space(g, args.tol) if args.kind == "bisector" else isometric_sphere_half_space(g, args.tol)
    else:
        # in the ball the bisector is the isometric sphere of the conjugated element
        wall = bisector_ball(g, args.tol)
    return {"model": args.model, "kind": args.kind, "wall": wall.to_json()}


def _domain_report(dom, spec, args, extra=None):
    from .domains import df_check, faces
    from .render import write_slice

    face_walls = faces(dom, args.samples, args.seed, args.threads)
    ids = {id(dw): i for i, dw in enumerate(dom.walls)}
    report = dict(extra or {})
    report["walls"] = [dw.to_json() for dw in dom.walls]
    report["faces"] = [ids[id(dw)] for dw in face_walls]
    report["f_infty"] = None if dom.f_infty is None else dom.f_infty.to_json()
    report["df"] = df_check(spec, dom, face_walls, args.tol).to_json()
    if args.svg:
        axis, value = _parse_slice(args.slice)
        write_slice(dom, args.svg, axis, value, walls=face_walls)
        report["svg"] = args.svg
    return report


def _group_domain(args):
    from .domains import build_domain, enumerate_group

    spec = _group_arg(args.generators)
    elements = enumerate_group(spec, args.max_word_len, args.norm_bound)
    dom = build_domain(elements, spec.stabilizer, tol=args.tol, fuchsian=spec.fuchsian)
    return spec, dom


def cmd_domain(args):
    spec, dom = _group_domain(args)
    return _domain_report(dom, spec, args)


def cmd_df_check(args):
    from .domains import df_check, faces

    spec, dom = _group_domain(args)
    face_walls = faces(dom, args.samples, args.seed, args.threads)
    return df_check(spec, dom, face_walls, args.tol).to_json()


def cmd_bianchi(args):
    from .bianchi import class_number, enumerate_bianchi, ideal_points, ring_ctx

    ctx = ring_ctx(args.d)
    if args.sub == "ideal-points":
        return {
            "d": args.d,
            "class_number": class_number(ctx),
            "ideal_points": [p.to_json() for p in ideal_points(ctx)],
        }
    if args.sub == "enumerate":
        mats = enumerate_bianchi(ctx, args.norm_bound)
        return {
            "d": args.d,
            "norm_bound": args.norm_bound,
            "count": len(mats),
            "elements": [[[e.u, e.v] for e in m.entries()] for m in mats],
        }
    from .domains import bianchi_domain, bianchi_group_spec

    dom = bianchi_domain(args.d, args.norm_bound, args.tol)
    return _domain_report(dom, bianchi_group_spec(args.d), args, {"d": args.d, "norm_bound": args.norm_bound})


def cmd_reduce(args):
    from .domains import bianchi_domain, bianchi_group_spec, membership, reduce_point
    from .io import matrix_to_json
    from .models import HalfSpacePoint

    try:
        re_, im_, r = (float(t) for t in args.point.split(","))
    except ValueError:
        raise ParseError(f"--point must be 're,im,r', got {args.point!r}") from None
    P = HalfSpacePoint(complex(re_, im_), r)
    dom = bianchi_domain(args.d, args.norm_bound, args.tol)
    Q, g = reduce_point(P, dom, bianchi_group_spec(args.d), args.max_steps, args.tol)
    return {
        "d": args.d,
        "input": list(P.as_tuple()),
        "output": list(Q.as_tuple()),
        "element": matrix_to_json(g),
        "membership": membership(Q, dom),
    }


# --- parser ---


def _common(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--tol", type=float, default=default,
                        help="numeric tolerance (default 1e-9, or $HYPWALLS_TOL)")
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0,
                        help="seed for face sampling")
    parser.add_argument("--threads", type=int, default=argparse.SUPPRESS if suppress else 1)
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="print the JSON report")


def _matrix_inputs(p):
    p.add_argument("input", nargs="?", help="matrix JSON file, or - for stdin")
    p.add_argument("--matrix", help="matrix literal such as '[[[1,0]],[[1,0]],[[0,0]],[[1,0]]]'")


def _domain_outputs(p):
    p.add_argument("--samples", type=int, default=200, help="sample points per wall for face detection")
    p.add_argument("--svg", help="write an SVG slice to this path")
    p.add_argument("--slice", default="im=0", help="slice for --svg: 'im=c' or 're=c'")


def build_parser():
    parser = argparse.ArgumentParser(prog="hypwalls", description="Dirichlet and Ford domains of Kleinian groups.")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify an isometry")
    _common(p, True)
    _matrix_inputs(p)
    p.add_argument("--method", choices=["trace", "geometric"], default="trace")
    p.add_argument("--max-power", type=int, default=64)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("wall", help="wall of a single element")
    _common(p, True)
    _matrix_inputs(p)
    p.add_argument("--model", choices=["half", "ball"], default="half")
    p.add_argument("--kind", choices=["bisector", "isometric"], default="bisector")
    p.set_defaults(func=cmd_wall)

    for name, func, helptext in (("domain", cmd_domain, "domain of a finitely generated group"),
                                 ("df-check", cmd_df_check, "test the side pairings for d = conj(a)")):
        p = sub.add_parser(name, help=helptext)
        _common(p, True)
        p.add_argument("--generators", required=True,
                       help="generator JSON file, or fixture:figure_eight / fixture:whitehead")
        p.add_argument("--max-word-len", type=int, default=3)
        p.add_argument("--norm-bound", type=float, default=30.0)
        if name == "domain":
            _domain_outputs(p)
        else:
            p.add_argument("--samples", type=int, default=200)
        p.set_defaults(func=func)

    p = sub.add_parser("bianchi", help="Bianchi groups")
    _common(p, True)
    p.add_argument("sub", choices=["ideal-points", "domain", "enumerate"])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--norm-bound", type=int, default=20)
    _domain_outputs(p)
    p.set_defaults(func=cmd_bianchi)

    p = sub.add_parser("reduce", help="reduce a point into a Bianchi domain")
    _common(p, True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--point", required=True, help="'re,im,r' with r > 0")
    p.add_argument("--norm-bound", type=int, default=20)
    p.add_argument("--max-steps", type=int, default=1000)
    p.set_defaults(func=cmd_reduce)
    return parser


def _text(report):
    lines = []
    for key, value in report.items():
        if isinstance(value, list) and len(value) > 6:
            lines.append(f"{key}: {len(value)} entries")
        elif isinstance(value, dict):
            inner = ", ".join(f"{k}={v if not isinstance(v, list) or len(v) <= 6 else len(v)}" for k, v in value.items())
            lines.append(f"{key}: {inner}")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.tol is not None:
            _config.set_tol(args.tol)
        else:
            _config.reset_tol()
        args.tol = _config.get_tol()
        report = args.func(args)
    except (Inconclusive, StepLimit) as exc:
        print(f"hypwalls: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ParseError, DeterminantError, DomainError, NotSquarefree, InSU2, NoIsometricSphere,
            BisectorIsPlane, ValueError, OSError) as exc:
        print(f"hypwalls: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        _config.reset_tol()
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(_text(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
