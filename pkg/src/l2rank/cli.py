"""Command-line front end: `l2rank betti | odo | lang | check | graph`.

Exit codes: 0 success, 1 failed invariant, 2 bad input (including Reject
and NonConstant), 3 elimination memory cap (L2RANK_MAX_MEM) exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .betti import (
    Enclosure,
    betti_enclosure,
    census,
    closed_form_an,
    closed_form_enclosure,
    decimal_str,
    expected_closed_form,
    graph_export,
)
from .checks import SUITES, parse_range
from .crossed import CrossedMatrix, crossed_matrix_from_json
from .dynamics import NonConstant, Space
from .exactla import MemoryCapExceeded
from .factories import TEMPLATES, PolySpec, an_element, factory, parse_poly
from .genexpr import Reject, generator_expr_eval, membership_translate
from .odometer import Supernatural, element_level, odo_rank, znumber_contains
from .ratlang import Automaton, alpha, balanced_alpha, balanced_closed_form_square, encloses_sqrt, gen_function
from .scheme import half_itinerary, preset, window_from_itinerary


class CliError(Exception):
    """Input or configuration problem (exit 2)."""


def qstr(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_arg(text: str) -> Fraction:
    """'1/100', '0.01' or '1e-10' as an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def unit_interval(text: str) -> Fraction:
    q = rational_arg(text)
    if not 0 < q < 1:
        raise argparse.ArgumentTypeError("must lie strictly between 0 and 1")
    return q


def _ints(text: str):
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise CliError(f"expected comma-separated integers, got {text!r}") from None


def _enc_json(enc: Enclosure, digits: int):
    return {
        "lo": qstr(enc.lo),
        "hi": qstr(enc.hi),
        "width": qstr(enc.width),
        "decimal": {"lo": decimal_str(enc.lo, digits), "hi": decimal_str(enc.hi, digits)},
    }


def emit(report: dict, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    elif fmt == "csv":
        flat = {}

        def walk(prefix, v):
            if isinstance(v, dict):
                for k in sorted(v):
                    walk(f"{prefix}.{k}" if prefix else k, v[k])
            else:
                flat[prefix] = v if not isinstance(v, (list, tuple)) else json.dumps(v)

        walk("", report)
        out.write("key,value\n")
        for k, v in flat.items():
            out.write(f"{k},{v}\n")
    else:
        for k in sorted(report):
            out.write(f"{k}: {report[k]}\n")


# ------------------------------------------------------------ element input


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise CliError(f"{path} is not valid JSON: {e}") from None


def _element_from_file(path, scheme):
    if path.endswith(".json"):
        obj = _load_json(path)
        try:
            return crossed_matrix_from_json(obj, scheme.space)
        except (KeyError, TypeError, ValueError) as e:
            raise CliError(f"bad element file {path}: {e}") from None
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None
    return CrossedMatrix.scalar(generator_expr_eval(text.strip(), scheme))


def _spec_from_args(args):
    polys = [parse_poly(p) for p in args.polys.split(";")] if args.polys else []
    bases = _ints(args.bases) if args.bases else ()
    return PolySpec(tuple(polys), bases)


def resolve_element(args):
    """(scheme, element, closed form info or None) from the betti/graph flags."""
    sources = [x for x in (args.factory, args.element, args.expr, args.an) if x is not None]
    if len(sources) != 1:
        raise CliError("give exactly one of --factory, --element, --expr, --an")
    closed = None
    if args.an is not None:
        if args.preset and args.preset != f"a{args.an}":
            raise CliError(f"--an {args.an} uses the scheme a{args.an}")
        scheme, A = an_element(args.an)
        closed = {"form": f"3/(1+2^{2 * args.an + 3})", "value": qstr(closed_form_an(args.an))}
        return scheme, A, closed
    try:
        scheme = preset(args.preset or "half")
    except ValueError as e:
        raise CliError(str(e)) from None
    if args.factory is not None:
        if scheme.name != "lamplighter_half":
            raise CliError("factory elements live in the scheme 'half'")
        t = args.factory
        try:
            if t == "eleven":
                spec = None
            elif t == "single_poly":
                spec = PolySpec((parse_poly(args.poly),))
            elif t == "poly_times_power":
                if args.d is None:
                    raise CliError("poly_times_power needs --d")
                spec = PolySpec(((0, 1), parse_poly(args.poly)), (args.d,))
            else:
                spec = _spec_from_args(args)
        except (TypeError, ValueError, AttributeError) as e:
            raise CliError(f"bad polynomial data: {e}") from None
        A = factory(t, spec)
        closed = _closed_form_info(t, spec, args.digits)
        return scheme, A, closed
    if args.element is not None:
        return scheme, _element_from_file(args.element, scheme), None
    try:
        return scheme, CrossedMatrix.scalar(generator_expr_eval(args.expr, scheme)), None
    except (SyntaxError, ValueError) as e:
        raise CliError(f"bad expression: {e}") from None


def _closed_form_info(template, spec, digits):
    q0, q1, series = expected_closed_form(template, spec)
    info = {"template": template, "q1": qstr(q1), "series_polys": [list(p) for p in series.polys],
            "series_bases": list(series.bases)}
    if q0 is None:
        info["q0"] = None
        return info
    enc = closed_form_enclosure(template, spec)
    info["q0"] = qstr(q0)
    info["enclosure"] = _enc_json(enc, digits)
    info["_enc"] = enc
    return info


# ---------------------------------------------------------------- commands


def cmd_betti(args):
    scheme, A, closed = resolve_element(args)
    if args.verify_membership:
        membership_translate(A, scheme)
    t0 = time.perf_counter()
    res = betti_enclosure(
        scheme,
        A,
        max_depth=args.depth,
        coverage_target=args.coverage,
        jobs=args.jobs,
        lumped=False if args.plain else None,
        sharpen=args.sharpen,
    )
    report = {
        "command": "betti",
        "config": {
            "scheme": scheme.name,
            "size": A.size,
            "depth": args.depth,
            "coverage_target": qstr(args.coverage) if args.coverage is not None else None,
            "sharpen": args.sharpen,
            "engine": "plain" if args.plain else "default",
        },
        **_enc_json(res.enclosure, args.digits),
        "coverage": qstr(res.coverage),
        "coverage_decimal": decimal_str(res.coverage, args.digits),
        "windows": res.windows,
        "groups": res.groups,
        "depth_reached": res.depth,
        "engine_version": __version__,
    }
    if closed is not None:
        enc = closed.pop("_enc", None)
        if enc is not None:
            closed["contained"] = res.lo <= enc.hi and enc.lo <= res.hi
        elif "value" in closed:
            closed["contained"] = res.enclosure.contains(Fraction(closed["value"]))
        report["closed_form"] = closed
    if args.timing:
        report["wall_time"] = round(time.perf_counter() - t0, 3)
    emit(report, args.format)
    return 0


def _space_from_args(args):
    try:
        return Space("mixed", _ints(args.radices), args.continuation)
    except ValueError as e:
        raise CliError(str(e)) from None


def cmd_odo(args):
    space = _space_from_args(args)
    obj = _load_json(args.element)
    try:
        A = crossed_matrix_from_json(obj, space)
    except (KeyError, TypeError, ValueError) as e:
        raise CliError(f"bad element file {args.element}: {e}") from None
    level = args.level if args.level is not None else element_level(A)
    try:
        r = odo_rank(A, level)
    except ValueError as e:
        raise CliError(str(e)) from None
    inz = znumber_contains(Supernatural.of(space), r)
    report = {
        "command": "odo rank",
        "rank": qstr(r),
        "rank_decimal": decimal_str(r, args.digits),
        "level": level,
        "p_m": space.p(level),
        "in_Zn": inz,
    }
    emit(report, args.format)
    return 0 if inz else 1


def _series_text(f):
    """num/den scaled so den(0) = 1, the usual way to write a series."""
    c = f.den.c[0] if f.den.c else 0
    num, den = (f.num, f.den) if not c else (f.num * (1 / c), f.den * (1 / c))
    return f"({num})/({den})".replace("s", "x")


def cmd_lang(args):
    if args.lang_cmd == "alpha":
        obj = _load_json(args.automaton)
        try:
            A = Automaton.from_json(obj, args.alphabet)
        except (KeyError, TypeError, ValueError) as e:
            raise CliError(f"bad automaton file {args.automaton}: {e}") from None
        a = alpha(A)
        report = {
            "command": "lang alpha",
            "alpha": qstr(a),
            "decimal": decimal_str(a, args.digits),
            "generating_function": _series_text(gen_function(A)),
            "alphabet": A.n,
        }
        emit(report, args.format)
        return 0
    if args.r < 1 or args.s < 1:
        raise CliError("--r and --s must be >= 1")
    enc = balanced_alpha(args.r, args.s, args.eps)
    sq = balanced_closed_form_square(args.r, args.s)
    ok = encloses_sqrt(enc, sq)
    report = {
        "command": "lang balanced",
        "r": args.r,
        "s": args.s,
        "lo": qstr(enc.lo),
        "hi": qstr(enc.hi),
        "decimal": {"lo": decimal_str(enc.lo, args.digits), "hi": decimal_str(enc.hi, args.digits)},
        "closed_form_square": qstr(sq),
        "encloses_closed_form": ok,
    }
    emit(report, args.format)
    return 0 if ok else 1


def cmd_check(args):
    kw = {}
    if args.suite == "macci":
        kw["ms"] = parse_range(args.m)
        if args.lmax is not None:
            kw["lmax"] = args.lmax
    elif args.suite in ("coverage", "shift"):
        if args.depth is not None:
            kw["depth"] = args.depth
    elif args.suite in ("sylvester", "homomorphism"):
        kw["seed"] = args.seed
        if args.trials is not None:
            kw["trials" if args.suite == "sylvester" else "count"] = args.trials
    res = SUITES[args.suite](**kw)
    emit(res.to_json(), args.format)
    return 0 if res.ok else 1


def cmd_graph(args):
    scheme, A, _ = resolve_element(args)
    if (args.itinerary is None) == (args.ks is None):
        raise CliError("give exactly one of --itinerary, --ks")
    try:
        if args.ks is not None:
            if scheme.name != "lamplighter_half":
                raise CliError("--ks describes windows of the scheme 'half'")
            it = half_itinerary(_ints(args.ks))
        else:
            it = _ints(args.itinerary)
        W = window_from_itinerary(scheme, it)
    except (ValueError, IndexError) as e:
        raise CliError(str(e)) from None
    text = graph_export(A, W)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.census:
        comps = census(A, W)
        rep = {
            "window": W.cylinder.notation(),
            "length": W.length,
            "components": [
                {"size": c.size, "kernel": c.kernel, "levels": c.levels, "positions": c.positions}
                for c in comps
                if c.size > 1 or c.kernel == 0
            ],
            "isolated": sum(1 for c in comps if c.size == 1 and c.kernel == 1),
            "kernel_dim": sum(c.kernel for c in comps),
        }
        sys.stderr.write(json.dumps(rep, sort_keys=True) + "\n")
    return 0


# ------------------------------------------------------------------ parser


def _element_flags(p):
    p.add_argument("--factory", choices=TEMPLATES)
    p.add_argument("--poly", default="2,1,1", help="coefficients, lowest degree first")
    p.add_argument("--d", type=int, help="base of the power for poly_times_power")
    p.add_argument("--polys", help="general template: p0;p1;... each comma-separated")
    p.add_argument("--bases", help="general template: d1,d2,...")
    p.add_argument("--element", help="CrossedMatrix JSON, or a text file with a generator expression")
    p.add_argument("--expr", help="generator expression, e.g. \"g0 + g0'\"")
    p.add_argument("--an", type=int, help="the element a_n with its scheme a<n>")
    p.add_argument("--preset", help="scheme: half, a<n> (default half)")
    p.add_argument("--digits", type=int, default=12)


def build_parser():
    ap = argparse.ArgumentParser(prog="l2rank", description="Exact enclosures of l2-Betti numbers and ranks.")
    ap.add_argument("--version", action="version", version=f"l2rank {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("betti", help="enclosure of b(A) over the windows of a scheme")
    _element_flags(p)
    stop = p.add_mutually_exclusive_group(required=True)
    stop.add_argument("--depth", type=int)
    stop.add_argument("--coverage", type=unit_interval, help="coverage target in (0, 1)")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="processes for the plain engine (default: all cores)")
    p.add_argument("--plain", action="store_true", help="compress every window separately")
    p.add_argument("--sharpen", action="store_true", help="use the partial windows at the cut")
    p.add_argument("--verify-membership", action="store_true",
                   help="translate every entry into generators first")
    p.add_argument("--timing", action="store_true", help="add wall_time to the report")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("odo", help="odometer algebra")
    osub = p.add_subparsers(dest="odo_cmd", required=True)
    q = osub.add_parser("rank", help="rank of an element")
    q.add_argument("--radices", required=True)
    q.add_argument("--continuation", choices=("periodic", "constant"), default="periodic")
    q.add_argument("--element", required=True)
    q.add_argument("--level", type=int)
    q.add_argument("--digits", type=int, default=12)
    q.add_argument("--format", choices=("json", "csv", "text"), default="json")
    q.set_defaults(func=cmd_odo)

    p = sub.add_parser("lang", help="rational languages")
    lsub = p.add_subparsers(dest="lang_cmd", required=True)
    q = lsub.add_parser("alpha", help="exact alpha of an automaton")
    q.add_argument("--automaton", required=True)
    q.add_argument("--alphabet", type=int, help="n, when the file has no 'alphabet' key")
    q.add_argument("--digits", type=int, default=12)
    q.add_argument("--format", choices=("json", "csv", "text"), default="json")
    q.set_defaults(func=cmd_lang)
    q = lsub.add_parser("balanced", help="enclosure for the balanced language")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--eps", type=unit_interval, default=Fraction(1, 10 ** 10))
    q.add_argument("--digits", type=int, default=12)
    q.add_argument("--format", choices=("json", "csv", "text"), default="json")
    q.set_defaults(func=cmd_lang)

    p = sub.add_parser("check", help="run an invariant suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--m", default="2..8", help="macci: range like 2..8")
    p.add_argument("--lmax", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("graph", help="DOT export of the graph of pi(A)_W")
    _element_flags(p)
    p.add_argument("--itinerary", help="indices of P members, e.g. 2,0,1")
    p.add_argument("--ks", help="scheme half: zero-block lengths k_1,...,k_r")
    p.add_argument("--census", action="store_true", help="component census as JSON on stderr")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_graph)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"l2rank: error: {e}", file=sys.stderr)
        return 2
    except Reject as e:
        print(f"l2rank: rejected: {e}", file=sys.stderr)
        return 2
    except NonConstant as e:
        print(f"l2rank: not constant: {e}", file=sys.stderr)
        return 2
    except MemoryCapExceeded as e:
        print(f"l2rank: memory cap: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
