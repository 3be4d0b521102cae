"""Command-line interface: ``hypcone <group> <command> [options]``.

Exit status is 0 on success, 1 for domain errors (printed as a JSON error
object) and 2 for usage errors.  JSON output is deterministic: keys are
sorted and floats carry 17 significant digits.  Wall time is only included
with ``--timing`` so that repeated runs are byte-identical.
"""
import argparse
import csv
import io
import json
import math
import os
import re
import sys
import time

import numpy as np

from . import __version__
from .errors import HypconeError

# ---------------------------------------------------------------- formatting


def _float_text(x):
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        x = 0.0
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps(obj, indent=2, _level=0):
    """Deterministic JSON text for plain data, numpy scalars and arrays."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float_text(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {dumps(obj[k], indent, _level + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


_PI_RE = re.compile(r"^(?P<num>[0-9]*\.?[0-9]*)\s*\*?\s*pi(?:\s*/\s*(?P<den>[0-9]*\.?[0-9]+))?$")


def parse_angle(text):
    """A float, or a multiple of pi such as ``pi``, ``pi/2``, ``2pi/3``, ``0.5*pi``."""
    s = text.strip().lower()
    m = _PI_RE.match(s)
    if m:
        num = float(m.group("num")) if m.group("num") not in ("", None) else 1.0
        den = float(m.group("den")) if m.group("den") else 1.0
        return num * math.pi / den
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def parse_angle_list(text):
    return [parse_angle(p) for p in text.split(",") if p.strip()]


# ---------------------------------------------------------------- commands


def _cmd_tube_report(args):
    from . import tube
    T = tube.Tube(args.sigma, args.delta, args.theta, args.tau, args.K)
    return tube.report(T), None


def _cmd_smoothing_check(args):
    from . import smoothing
    P = smoothing.default_profile(args.epsilon)
    rep = smoothing.negativity_check(P, args.grid, oracle_h=args.h)
    table = (["delta", "K12", "K13", "K23"], rep.rows())
    if args.csv:
        _write(args.csv, csv_text(*table))
    return rep.to_json(), table


def _load_apoly(source):
    from .volume import APolynomial
    if not os.path.exists(source) and re.fullmatch(r"[a-z0-9_]+", source):
        return APolynomial.bundled(source)
    return APolynomial.from_file(source)


def _cmd_volume_curve(args):
    from . import volume
    A = _load_apoly(args.apoly)
    path = volume.AnglePath.linear(args.start, args.end)
    curve = volume.schlafli_integrate(volume.length_function(A), path, args.v0, samples=args.samples, tol=args.tol)
    table = (["t", "theta", "length", "volume"], curve.rows())
    payload = {"summary": curve.summary(), "rows": [list(r) for r in curve.rows()]}
    return payload, table


def _cmd_volume_range(args):
    from . import volume
    A = _load_apoly(args.apoly)
    return volume.deformation_range(A, args.v0).to_json(), None


def _load_space(path):
    from .gh import FinitePointedMetricSpace
    return FinitePointedMetricSpace.load(path)


def _cmd_gh_check(args):
    from . import gh
    X, Y = _load_space(args.x), _load_space(args.y)
    if args.relation:
        try:
            with open(args.relation, encoding="utf-8") as fh:
                pairs = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise HypconeError(f"cannot read relation: {exc}", field="relation") from None
        R = gh.relation(pairs, X, Y)
        v = gh.is_eps_approximation(R, X, Y, args.eps)
        return {"eps": args.eps, "relation": sorted([list(p) for p in R]), **v.to_json()}, None
    R = gh.find_approximation(X, Y, args.eps)
    return {"eps": args.eps, "exists": R is not None,
            "relation": sorted([list(p) for p in R]) if R is not None else None}, None


def _cmd_gh_mineps(args):
    from . import gh
    X, Y = _load_space(args.x), _load_space(args.y)
    return gh.min_eps(X, Y, args.mode).to_json(), None


def _cmd_gh_cover(args):
    from . import gh
    X = _load_space(args.x)
    return {"r": args.r, "eps": args.eps, **gh.covering_number(X, args.r, args.eps, args.mode).to_json()}, None


def _cmd_classify_surface(args):
    from . import classify
    S = classify.ConeSurface(args.chi, args.angles)
    out = {"chi": S.chi, "defect": classify.gauss_bonnet_defect(S)}
    if all(a <= math.pi for a in S.angles):
        out.update(classify.classify_flat_le_pi(S).to_json())
    else:
        out.update({"verdict": None, "flat": abs(out["defect"]) <= classify.FLAT_TOL and S.chi == 2,
                    "note": "angles above pi are outside the flat classification"})
    return out, None


def _cmd_classify_tetra(args):
    from . import classify
    T = classify.TetrahedronAngles(args.alpha, args.beta, args.gamma, args.eps)
    out = classify.tetrahedron_regime(T).to_json()
    out["gram_matrix"] = classify.gram_matrix(T)
    return out, None


def _cmd_examples_figure8(args):
    from . import volume
    return volume.figure8_pipeline(samples=args.samples), None


# ---------------------------------------------------------------- parser


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall time (output is then not reproducible)")

    p = argparse.ArgumentParser(prog="hypcone", description="Hyperbolic cone-manifold computations.")
    p.add_argument("--version", action="version", version=f"hypcone {__version__}")
    groups = p.add_subparsers(dest="group", required=True, metavar="GROUP")

    def leaf(group, name, fn, help_text):
        sp = group.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=fn)
        return sp

    g = groups.add_parser("tube", help="tube geometry").add_subparsers(dest="command", required=True)
    sp = leaf(g, "report", _cmd_tube_report, "all derived quantities of a tube")
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--theta", type=parse_angle, required=True)
    sp.add_argument("--tau", type=float, default=0.0)
    sp.add_argument("--K", type=float, default=-1.0)

    g = groups.add_parser("smoothing", help="cusp smoothing metric").add_subparsers(dest="command", required=True)
    sp = leaf(g, "check", _cmd_smoothing_check, "curvature negativity report")
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("--grid", type=int, default=1000)
    sp.add_argument("--h", type=float, default=1e-4, help="oracle step in log(delta)")
    sp.add_argument("--csv", help="also write (delta, K12, K13, K23) rows here")

    g = groups.add_parser("volume", help="Schlafli volume integration").add_subparsers(dest="command", required=True)
    sp = leaf(g, "curve", _cmd_volume_curve, "volume along a straight angle path")
    sp.add_argument("--apoly", required=True, help="A-polynomial file or bundled name (figure8)")
    sp.add_argument("--from", dest="start", type=parse_angle, default=0.0)
    sp.add_argument("--to", dest="end", type=parse_angle, required=True)
    sp.add_argument("--samples", type=_positive_int, default=101)
    sp.add_argument("--v0", type=float, default=0.0, help="volume at the start angle")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp = leaf(g, "range", _cmd_volume_range, "degeneration angle of the increasing deformation")
    sp.add_argument("--apoly", required=True)
    sp.add_argument("--v0", type=float, default=None, help="complete volume; enables the volume criterion")

    g = groups.add_parser("gh", help="pointed Gromov-Hausdorff approximations").add_subparsers(dest="command", required=True)
    sp = leaf(g, "check", _cmd_gh_check, "verify a relation or search for one")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--relation", help="JSON list of [i, j] pairs")
    sp = leaf(g, "mineps", _cmd_gh_mineps, "smallest eps admitting an approximation")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--mode", choices=["exact", "heuristic"], default="exact")
    sp = leaf(g, "cover", _cmd_gh_cover, "covering number of a basepoint ball")
    sp.add_argument("--x", required=True)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--mode", choices=["auto", "exact", "greedy"], default="auto")

    g = groups.add_parser("classify", help="cone surfaces and tetrahedra").add_subparsers(dest="command", required=True)
    sp = leaf(g, "surface", _cmd_classify_surface, "Gauss-Bonnet classification")
    sp.add_argument("--chi", type=int, required=True)
    sp.add_argument("--angles", type=parse_angle_list, required=True)
    sp = leaf(g, "tetra", _cmd_classify_tetra, "ideal or truncated tetrahedron")
    sp.add_argument("--alpha", type=parse_angle, required=True)
    sp.add_argument("--beta", type=parse_angle, required=True)
    sp.add_argument("--gamma", type=parse_angle, required=True)
    sp.add_argument("--eps", type=float, default=0.0)

    g = groups.add_parser("examples", help="worked examples").add_subparsers(dest="command", required=True)
    sp = leaf(g, "figure8", _cmd_examples_figure8, "figure-eight deformation end to end")
    sp.add_argument("--samples", type=_positive_int, default=121)
    return p


_SKIP = {"func", "group", "command", "format", "out", "timing"}


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise HypconeError(f"cannot write {path}: {exc}", field="out") from None


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    name = f"{args.group} {args.command}"
    inputs = {k: v for k, v in vars(args).items() if k not in _SKIP}
    report = {"command": name, "inputs": inputs, "version": __version__}
    start = time.perf_counter()
    try:
        result, table = args.func(args)
    except HypconeError as exc:
        report["error"] = exc.to_dict()
        sys.stdout.write(dumps(report) + "\n")
        return 1
    if args.format == "csv":
        if table is None:
            try:
                parser.error(f"--format csv is not available for '{name}'")
            except SystemExit as exc:
                return int(exc.code)
        text = csv_text(*table)
    else:
        report["result"] = result
        if args.timing:
            report["wall_time"] = time.perf_counter() - start
        text = dumps(report) + "\n"
    if args.out:
        try:
            _write(args.out, text)
        except HypconeError as exc:
            report.pop("result", None)
            report["error"] = exc.to_dict()
            sys.stdout.write(dumps(report) + "\n")
            return 1
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
