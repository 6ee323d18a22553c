"""Command line: partitions, tilings, renormalization arithmetic, domains, proof checks.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bundle, renorm, verify
from .exactnum import format_rat, parse_rat, rat
from .pet import PETError, concrete_tetra, periodic_tiling
from .render import RenderSpec, polygon_json, render_partition, render_tiling

log = logging.getLogger("tetratwist")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _rat_arg(text: str):
    try:
        return parse_rat(text)
    except ValueError as exc:
        raise InputError(f"bad rational {text!r}: {exc}") from None


def _interval_arg(text: str) -> tuple:
    try:
        return renorm.parse_interval(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _identity_partition(s):
    from .pet import ConcretePET, Piece
    from .torus import CHART

    return ConcretePET([Piece(CHART, (rat(0), rat(0)), 1, ())], s)


def cmd_partition(args) -> int:
    s = _rat_arg(args.s)
    if not (0 <= s < 1):
        raise InputError("s must lie in [0, 1)")
    f = concrete_tetra(s) if s != 0 else _identity_partition(s)
    if args.format == "json":
        data = {
            "s": format_rat(s),
            "pieces": [
                {"domain": polygon_json(pc.poly.verts), "shift": [format_rat(c) for c in pc.shift], "label": list(pc.label or ())}
                for pc in f.pieces
            ],
        }
        _emit(json.dumps(data, indent=1) + "\n", args.out)
    else:
        _emit(render_partition(f, RenderSpec(width=args.width, label=f"s = {format_rat(s)}")), args.out)
    return EXIT_OK


def _tiling_param(args):
    if args.surd:
        if args.surd != "sqrt2-1":
            raise InputError("only --surd sqrt2-1 is supported")
        exp = renorm.split_expansion(renorm.sqrt2_minus_1(), max_terms=args.depth)
        p, q = renorm.convergents(exp)[-1]
        return rat(p, q), True
    if args.s is None:
        raise InputError("need --s or --surd")
    return _rat_arg(args.s), False


def cmd_tiling(args) -> int:
    s, approx = _tiling_param(args)
    if not (0 < s < 1):
        raise InputError("s must lie in (0, 1)")
    T = periodic_tiling(concrete_tetra(s), budget=args.budget)
    if not T.complete:
        log.warning("tiling incomplete: coverage %s", format_rat(T.coverage()))
    if args.format == "json":
        data = {
            "s": format_rat(s),
            "approximate": approx,
            "complete": T.complete,
            "coverage": format_rat(T.coverage()),
            "periods": {str(k): format_rat(v) for k, v in sorted(T.periods().items())},
            "tiles": [{"period": t.period, "poly": polygon_json(t.poly.verts)} for t in T.tiles],
        }
        _emit(json.dumps(data, indent=1) + "\n", args.out)
    else:
        spec = RenderSpec(width=args.width, color_mode="by-period", label=f"s = {format_rat(s)}", approximate=approx)
        _emit(render_tiling(T, spec), args.out)
    return EXIT_OK


def _ints(text: str) -> list:
    try:
        return [int(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def cmd_renorm(args) -> int:
    if args.action == "code":
        s = _rat_arg(args.value)
        if not (0 <= s < 1):
            raise InputError("s must lie in [0, 1)")
        print(" ".join(str(c) for c in renorm.coding_sequence(s)))
    elif args.action == "split":
        s = _rat_arg(args.value)
        if not (0 < s < 1):
            raise InputError("s must lie in (0, 1)")
        print(renorm.split_expansion(s))
    elif args.action == "eval":
        terms = _ints(args.value)
        try:
            print(format_rat(renorm.eval_split(terms)))
        except ZeroDivisionError as exc:
            raise InputError(str(exc)) from None
    elif args.action == "interval":
        parts = args.value.split(",")
        if len(parts) != 3:
            raise InputError("interval needs KIND,m,n (e.g. A,2,3)")
        try:
            print(renorm.named_interval(parts[0], int(parts[1]), int(parts[2])))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    elif args.action == "convergents":
        terms = _ints(args.value)
        for p, q in renorm.convergents(terms):
            print(f"{p}/{q}")
    return EXIT_OK


def cmd_domains(args) -> int:
    lo, hi = _interval_arg(args.interval)
    try:
        doms = bundle.maximal_domains(args.space, (lo, hi), args.max_steps)
    except bundle.ReturnBoundExceeded as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    if args.format == "cert":
        cert = verify.domains_to_certificate(args.space.upper(), (lo, hi), doms)
        _emit(verify.format_certificate(cert), args.out)
        return EXIT_OK
    data = {
        "space": args.space.upper(),
        "interval": [format_rat(lo), format_rat(hi)],
        "count": len(doms),
        "volume": format_rat(sum((d.volume() for d in doms), rat(0))),
        "domains": [
            {
                "piece": d.piece,
                "return_time": d.return_time,
                "transvec": list(d.transvec),
                "vertices": [[format_rat(c) for c in p] for p in d.body.key()],
            }
            for d in doms
        ],
    }
    _emit(json.dumps(data, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    target = args.target
    if target in ("a23", "a24"):
        rep = verify.verify_lemma51(target.upper())
    elif target == "half":
        rep = verify.verify_half_interval()
    elif target.startswith("at:"):
        rep = verify.verify_theorem21_at(_rat_arg(target[3:]), args.max_steps)
    elif target.startswith("swap:"):
        rep = verify.verify_theorem22_at(_rat_arg(target[5:]))
    else:
        raise InputError(f"unknown target {target!r} (a23 | a24 | half | at:<s> | swap:<s>)")
    print(rep)
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tetratwist", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("partition", help="domain and image partition of the PET at s")
    p.add_argument("--s", required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("svg", "json"), default="svg")
    p.add_argument("--width", type=int, default=800)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("tiling", help="periodic tiling at s, or near sqrt(2)-1")
    p.add_argument("--s")
    p.add_argument("--surd", help="sqrt2-1: render at a convergent")
    p.add_argument("--depth", type=int, default=5, help="number of expansion terms for --surd (5 gives 29/70)")
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--out")
    p.add_argument("--format", choices=("svg", "json"), default="svg")
    p.add_argument("--width", type=int, default=800)
    p.set_defaults(func=cmd_tiling)

    p = sub.add_parser("renorm", help="renormalization arithmetic")
    p.add_argument("action", choices=("code", "split", "eval", "interval", "convergents"))
    p.add_argument("value", help="p/q, comma-separated integers, or KIND,m,n")
    p.set_defaults(func=cmd_renorm)

    p = sub.add_parser("domains", help="maximal domains over a parameter interval")
    p.add_argument("--space", choices=("X", "Y", "Z", "x", "y", "z"), default="X")
    p.add_argument("--interval", required=True)
    p.add_argument("--max-steps", type=int, default=bundle.DEFAULT_RETURN_CAP)
    p.add_argument("--format", choices=("json", "cert"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_domains)

    p = sub.add_parser("verify", help="run a proof battery")
    p.add_argument("target", help="a23 | a24 | half | at:<s> | swap:<s>")
    p.add_argument("--max-steps", type=int, default=bundle.DEFAULT_RETURN_CAP)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PETError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
