"""Command-line front end: ``tentlimit <subcommand> [options]``.

Exit status: 0 success, 1 usage or input error, 2 a verification failed.
Errors go to stderr as ``error[CODE]: message`` with a stable CODE.
Relative ``--out`` paths land in ``$TENTLIMIT_OUTPUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import chains, folding, inverse_limit, ppoints, symbolic, tentmap
from .numbers import AmbiguousComparison, parse_number, to_canonical

OUTPUT_DIR_ENV = "TENTLIMIT_OUTPUT_DIR"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2

_ERROR_CODES = [
    (tentmap.SlopeError, "E_SLOPE"),
    (tentmap.DomainError, "E_DOMAIN"),
    (tentmap.PrecisionExhausted, "E_PRECISION"),
    (AmbiguousComparison, "E_PRECISION"),
    (symbolic.InadmissibleWord, "E_INADMISSIBLE"),
    (symbolic.PrefixUnresolvable, "E_UNRESOLVABLE"),
    (inverse_limit.InsufficientDepth, "E_DEPTH"),
    (inverse_limit.InvalidTail, "E_TAIL"),
    (folding.FoldingObstruction, "E_FOLDING"),
    (folding.SearchExhausted, "E_SEARCH"),
    (ValueError, "E_INPUT"),
]


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _number(text: str):
    try:
        return parse_number(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not an exact number: {text!r}") from exc


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        path = Path(args.out)
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base and not path.is_absolute():
            path = Path(base) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _slope(args) -> tentmap.Slope:
    return tentmap.Slope.parse(args.slope)


# -- subcommands ------------------------------------------------------------


def cmd_orbit(args):
    s = _slope(args)
    orb = tentmap.critical_orbit(s, args.n)
    if args.format == "csv":
        return _csv([(k, to_canonical(orb[k])) for k in range(1, args.n + 1)], ["k", "c_k"])
    return _dump(
        {
            "slope": s.describe(),
            "points": [to_canonical(x) for x in orb.points],
            "periodic": orb.periodic,
            "preperiod": orb.preperiod,
            "period": orb.period,
            "near_period": orb.near_period,
        }
    )


def cmd_kneading(args):
    s = _slope(args)
    word = symbolic.kneading_sequence(s, args.n)
    if args.format == "json":
        return _dump({"slope": s.describe(), "word": str(word), "ambiguous": sorted(word.ambiguous)})
    return str(word)


def cmd_slope_from_kneading(args):
    word = symbolic.ladder_nu() if args.prefix == "nu" else symbolic.SymbolWord.parse(args.prefix)
    fit = symbolic.slope_from_kneading(word, args.eps, args.max_length)
    return _dump(
        {
            "prefix": word.prefix(fit.length),
            "estimate": float(fit.estimate),
            "lower": float(fit.lower),
            "upper": float(fit.upper),
            "width": float(fit.width),
            "length": fit.length,
        }
    )


def cmd_fp(args):
    s = _slope(args)
    fp = ppoints.folding_pattern(inverse_limit.FundamentalArc(s, args.p, args.depth))
    if args.format == "csv":
        return fp.to_csv()
    if args.format == "json":
        return _dump(
            {
                "slope": s.describe(),
                "p": args.p,
                "n": args.depth,
                "levels": ["inf" if l == ppoints.INF else int(l) for l in fp.levels],
                "u": [to_canonical(u) for u in fp.us],
            }
        )
    return fp.level_string()


def cmd_salient(args):
    s = _slope(args)
    rows = []
    ok = True
    for sp in ppoints.salient_points(s, args.p, args.count):
        x = sp.point()
        level = ppoints.p_level(x, args.p)
        dom = ppoints.salient_dominance(sp.ppoint.arc)
        nxt = inverse_limit.shift(x, 1)
        succ = ppoints.salient_point(s, args.p, sp.index + 1)
        shift_ok = nxt.coords == succ.coords
        ok &= level == sp.index and bool(dom) and shift_ok
        rows.append((sp.index, level, bool(dom), shift_ok, " ".join(to_canonical(v) for v in reversed(x.coords))))
    text = _csv(rows, ["i", "level", "dominant", "shift_to_next", "coords"])
    if not ok:
        raise VerificationFailed(text)
    return text


def cmd_chain(args):
    s = _slope(args)
    ch = chains.build_chain(s, args.p, args.extra_depth)
    report = {"links": ch.size, "mesh_bound": to_canonical(chains.mesh_bound(ch))}
    if args.verify:
        ax = chains.check_chain_axioms(ch)
        report["axioms"] = ax.ok
        if args.p > 0:
            coarse = chains.build_chain(s, args.p - 1, args.extra_depth)
            ref = chains.verify_refinement(ch, coarse)
            report["refines_previous"] = ref.ok
            report["refinement_detail"] = ref.detail
        if not all(v for k, v in report.items() if k in ("axioms", "refines_previous")):
            raise VerificationFailed(_dump(report))
    if args.svg:
        stack = [chains.build_chain(s, q, args.extra_depth) for q in range(0, args.p + 1)]
        svg_path = Path(args.svg)
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base and not svg_path.is_absolute():
            svg_path = Path(base) / svg_path
        svg_path.parent.mkdir(parents=True, exist_ok=True)
        svg_path.write_text(chains.chains_svg(stack), encoding="utf-8")
    if args.format == "csv":
        return ch.to_csv()
    return _dump(report)


def cmd_linkseq(args):
    s = _slope(args)
    arc = inverse_limit.FundamentalArc(s, args.p, args.depth)
    seq = chains.link_sequence(arc, chains.build_chain(s, args.p))
    return json.dumps(seq.to_json())


def cmd_symmetric(args):
    s = _slope(args)
    rep = chains.salient_center_check(s, args.p, args.level, args.depth)
    res = rep.data
    out = {
        "slope": s.describe(),
        "p": args.p,
        "level": args.level,
        "u_interval": [to_canonical(res.lo), to_canonical(res.hi)],
        "sequence": list(res.sequence),
        "center_level": None if res.center is None else res.center.level,
        "center_u": None if res.center is None else to_canonical(res.center.u),
        "left_limited": res.left_limited,
        "right_limited": res.right_limited,
        "salient_is_center": rep.ok,
    }
    text = _dump(out)
    if not rep.ok:
        raise VerificationFailed(text)
    return text


def _point_from_args(s, args) -> inverse_limit.ILPoint:
    if args.point:
        raw = Path(args.point).read_text() if os.path.exists(args.point) else args.point
        return inverse_limit.ILPoint.from_json(raw)
    if args.cycle is not None:
        pts = folding.certified_folding_points(s)
        if pts is None:
            raise ValueError("omega(c) is not a certified cycle for this slope")
        return pts[args.cycle % len(pts)]
    if args.u is None:
        raise UsageError("give --point, --cycle or --u with --depth")
    return inverse_limit.FundamentalArc(s, args.p, args.depth).point(_number(args.u))


def cmd_folding_test(args):
    s = _slope(args)
    x = _point_from_args(s, args)
    if args.method == "omega":
        v = folding.folding_test_omega(x, args.scan)
    else:
        v = folding.folding_test_ppoints(x, args.p, args.K, _number(args.radius))
    return v.dumps()


def cmd_isotopy(args):
    s = _slope(args)
    arc = inverse_limit.FundamentalArc(s, args.p, args.depth)
    path = folding.build_isotopy(arc, _number(args.a), _number(args.b), args.m)
    ts = [Fraction(k, args.steps) for k in range(args.steps + 1)]
    rows = []
    for t, v, u in path.trace(ts):
        x = arc.point(u)
        rows.append((str(t), to_canonical(v), " ".join(to_canonical(c) for c in reversed(x.coords))))
    if path.parameter(0) != path.a or path.parameter(1) != path.b:
        raise VerificationFailed("endpoints not reproduced")
    return f"# m={path.m}\n" + _csv(rows, ["t", "pi_m", "coords"])


def cmd_two_sided_limits(args):
    word = symbolic.ladder_nu() if args.word == "nu" else symbolic.SymbolWord.parse(args.word)
    found = symbolic.two_sided_limit_set(word, args.radius, args.prefix_length)
    rows = sorted(f"{l}.{r}" for l, r in found)
    out = {"radius": args.radius, "windows": rows}
    if args.word == "nu":
        expected = symbolic.ladder_limit_factors(args.radius)
        out["matches_ladder_set"] = found == expected
        if found != expected:
            raise VerificationFailed(_dump(out))
    return _dump(out)


def cmd_density(args):
    s = _slope(args)
    frac, _ = tentmap.orbit_density(s, args.n, args.bins)
    return _dump({"slope": s.describe(), "occupied_fraction": round(frac, 6), "bins": args.bins, "samples": args.n, "certificate": False})


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tentlimit", description="Tent-map inverse limit toolkit.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, slope=True, **kw):
        sp = sub.add_parser(name, **kw)
        if slope:
            sp.add_argument("--slope", required=True, help="2, 7/4, golden, quad:a,b,D, float:x[,err]")
        sp.add_argument("--out", help="write output to this file")
        sp.set_defaults(func=fn)
        return sp

    sp = add("orbit", cmd_orbit, help="critical orbit c_1..c_n")
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--format", choices=["json", "csv"], default="json")

    sp = add("kneading", cmd_kneading, help="kneading sequence of the slope")
    sp.add_argument("--n", type=int, default=24)
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = add("slope-from-kneading", cmd_slope_from_kneading, slope=False, help="bisection for s from a kneading prefix")
    sp.add_argument("--prefix", required=True, help='word like "1001", "1(0)" or "nu"')
    sp.add_argument("--eps", type=float, default=1e-9)
    sp.add_argument("--max-length", type=int, default=None)

    sp = add("fp", cmd_fp, help="folding pattern of the depth-n arc of the 0-composant")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--p", type=int, default=0)
    sp.add_argument("--format", choices=["text", "csv", "json"], default="text")

    sp = add("salient", cmd_salient, help="salient points and their laws")
    sp.add_argument("--p", type=int, default=0)
    sp.add_argument("--count", type=int, default=6)

    sp = add("chain", cmd_chain, help="natural chain, refinement check, SVG strips")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--extra-depth", type=int, default=0)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--svg", help="write an SVG strip diagram of depths 0..p")
    sp.add_argument("--format", choices=["json", "csv"], default="json")

    sp = add("linkseq", cmd_linkseq, help="links visited by the depth-n arc")
    sp.add_argument("--p", type=int, default=0)
    sp.add_argument("--depth", type=int, required=True)

    sp = add("symmetric", cmd_symmetric, help="maximal link-symmetric arc about a salient point")
    sp.add_argument("--p", type=int, default=0)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--depth", type=int, default=None)

    sp = add("folding-test", cmd_folding_test, help="folding-point verdict for a point")
    sp.add_argument("--method", choices=["omega", "ppoints"], default="omega")
    sp.add_argument("--point", help="ILPoint JSON (inline or a file path)")
    sp.add_argument("--cycle", type=int, help="index into the certified folding points")
    sp.add_argument("--u", help="parameter on the depth-n fundamental arc")
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--p", type=int, default=0)
    sp.add_argument("--K", type=int, default=10)
    sp.add_argument("--radius", default="1/256")
    sp.add_argument("--scan", type=int, default=32, help="coordinates examined by the omega test")

    sp = add("isotopy", cmd_isotopy, help="straight-line isotopy path along a subarc")
    sp.add_argument("--p", type=int, default=0)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--steps", type=int, default=4)

    sp = add("two-sided-limits", cmd_two_sided_limits, slope=False, help="recurring centered windows of a word")
    sp.add_argument("--word", default="nu")
    sp.add_argument("--radius", type=int, default=3)
    sp.add_argument("--prefix-length", type=int, default=5000)

    sp = add("density", cmd_density, help="float diagnostic for density of orb(c) in the core")
    sp.add_argument("--n", type=int, default=200_000)
    sp.add_argument("--bins", type=int, default=256)
    return ap


def _code_for(exc: BaseException) -> str:
    for cls, code in _ERROR_CODES:
        if isinstance(exc, cls):
            return code
    return "E_INTERNAL"


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        text = args.func(args)
        _emit(args, text)
        return EXIT_OK
    except UsageError as exc:
        print(f"error[E_USAGE]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationFailed as exc:
        sys.stdout.write(str(exc) if str(exc).endswith("\n") else f"{exc}\n")
        print("error[E_VERIFY]: verification failed", file=sys.stderr)
        return EXIT_VERIFY
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"error[{_code_for(exc)}]: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
