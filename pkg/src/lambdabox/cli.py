"""Command-line front end: ``lambdabox <command> [flags] files``.

Exit codes: 0 success or true, 1 false or not found, 2 error.
A term file may carry its typing context on a ``-- context:`` line; other
``--`` lines are comments. ``--ctx`` adds entries on the command line.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cbn, comp, cps, s4
from .gen import GenConfig, gen_terms
from .parsing import ParseError, parse, parse_context, show
from .reduction import FuelExhausted, DEFAULT_FUEL, normalize, rules_for
from .syntax import BoxUp, Calculus, LetBox, MVar, Term, alpha_eq, show_type
from .typecheck import LambdaBoxTypeError, infer

OK, FALSE, ERROR = 0, 1, 2
CALCS = [c.value for c in Calculus]


class CliError(Exception):
    pass


def read_input(path: str, extra_ctx: str, cps_names: bool) -> tuple[tuple, Term]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    ctx_src, body = [], []
    for line in text.splitlines():
        if line.startswith("-- context:"):
            ctx_src.append(line.split(":", 1)[1])
        elif not line.startswith("--"):
            body.append(line)
    if extra_ctx:
        ctx_src.append(extra_ctx)
    ctx = parse_context(", ".join(s.strip() for s in ctx_src if s.strip()), cps=cps_names)
    return ctx, parse("\n".join(body), cps=cps_names)


def is_dual(t: Term) -> bool:
    if isinstance(t, (MVar, BoxUp, LetBox)):
        return True
    from .syntax import children

    return any(is_dual(c) for c in children(t))


def split_modal(ctx) -> tuple[tuple, tuple]:
    delta = tuple((x, ty) for x, ty in ctx if x.startswith("@"))
    gamma = tuple((x, ty) for x, ty in ctx if not x.startswith("@"))
    return delta, gamma


def _calc(args) -> Calculus:
    return Calculus(args.calc)


def _show_trace(trace) -> list[str]:
    return [f"{lab} at {list(path)}: {show(redex)} ~> {show(out)}" for lab, path, redex, out in trace]


def _nf(t, ctx, args, trace):
    calc = _calc(args)
    rules = cbn.CBN_RULES if calc is Calculus.S4EQ else rules_for(calc)
    return normalize(t, rules, ctx, args.fuel, trace)


def cmd_check(args):
    ctx, t = read_input(args.files[0], args.ctx, True)
    ty = s4.dual_infer(*split_modal(ctx), t) if is_dual(t) else infer(ctx, t)
    return OK, show_type(ty, spaced=True), None, None


def cmd_norm(args):
    ctx, t = read_input(args.files[0], args.ctx, True)
    trace = [] if args.trace else None
    nf, n = _nf(t, ctx, args, trace)
    return OK, show(nf), n, _show_trace(trace) if trace is not None else None


def _via(args, ctx, t):
    if args.via == "cps":
        return cps.cps_term(t, ctx)
    if args.via == "cpsx":
        return cps.cpsx(t, ctx)
    return t


def cmd_eq(args):
    (ca, a), (cb, b) = (read_input(f, args.ctx, True) for f in args.files[:2])
    ctx = tuple(dict(ca + cb).items())
    calc = _calc(args)
    if args.via:
        a, b = _via(args, ctx, a), _via(args, ctx, b)
        calc = Calculus.CBN
    if calc is Calculus.S4EQ:
        if is_dual(a) or is_dual(b):
            res = s4.dual_eq_bounded(a, b, args.budget)
        else:
            theory = s4.EqTheory(st=args.st, sym=args.sym)
            res = s4.eq_bounded(theory, a, b, args.budget)
        trace = [f"{lab}: {show(u)}" for lab, u in res.trace] if res and args.trace else None
        steps = len(res.trace) - 1 if res else None
        verdict = "proven" if res else f"not found within budget ({res.expanded} expanded)"
        return (OK if res else FALSE), verdict, steps, trace
    ta, tb = ([] if args.trace else None), ([] if args.trace else None)
    args.calc = calc.value
    na, sa = _nf(a, ctx, args, ta)
    nb, sb = _nf(b, ctx, args, tb)
    same = alpha_eq(na, nb)
    trace = _show_trace(ta) + ["--"] + _show_trace(tb) if args.trace else None
    return (OK if same else FALSE), "equal" if same else "not equal", sa + sb, trace


def _translate(fn, cps_names=False):
    def run(args):
        ctx, t = read_input(args.files[0], args.ctx, cps_names)
        return OK, show(fn(t, ctx)), None, None

    return run


def cmd_translate(args):
    ctx, t = read_input(args.files[0], args.ctx, False)
    if bool(args.to_dual) == bool(args.from_dual):
        raise CliError("translate needs exactly one of --to dual or --from dual")
    if args.to_dual:
        return OK, show(s4.floorx(t)), None, None
    return OK, show(s4.ceilx(t, *split_modal(ctx))), None, None


def cmd_classify(args):
    _, t = read_input(args.files[0], args.ctx, True)
    cls = cps.classify_cps(t)
    if cls is None:
        return FALSE, "not in the CPS language", None, None
    return OK, cls.value, None, None


def cmd_gen(args):
    calc = _calc(args)
    cfg = GenConfig(seed=args.seed, max_size=args.size, calculus=calc, restricted=args.restricted)
    terms = gen_terms(cfg, args.count)
    if args.json:
        result = [{"context": ", ".join(f"{x}:{show_type(ty)}" for x, ty in c), "term": show(t)} for c, t in terms]
        return OK, result, None, None
    return OK, "\n".join(show(t) for _, t in terms), None, None


def cmd_suite(args):
    from .suite import SuiteConfig, run_suite

    cfg = SuiteConfig(count=args.count, max_size=args.size)
    results = run_suite(cfg, args.only, jobs=args.jobs)
    code = OK if all(r.passed for r in results) else FALSE
    if args.json:
        rows = [{"id": r.cid, "name": r.name, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 3)} for r in results]
        return code, rows, None, None
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return code, "\n".join(lines), None, None


def _ceil(t, ctx):
    return cps.ceil(t)


def _floor(t, ctx):
    return comp.floor(t)


COMMANDS = {
    "check": (cmd_check, 1, "infer the type of a term"),
    "norm": (cmd_norm, 1, "normalize under the chosen calculus"),
    "eq": (cmd_eq, 2, "decide (or search for) equality of two terms"),
    "cps": (_translate(cps.cps_term), 1, "CPS transform"),
    "cpsx": (_translate(cps.cpsx), 1, "modified CPS transform on full terms"),
    "uncps": (_translate(cps.icps, cps_names=True), 1, "inverse CPS transform"),
    "admin-nf": (_translate(cps.admin_nf), 1, "administrative normal form of the CPS image"),
    "ceil": (_translate(_ceil), 1, "continuation-monad translation to box-free terms"),
    "floor": (_translate(_floor), 1, "box elimination for restricted comp terms"),
    "translate": (cmd_translate, 1, "convert to or from the dual-context calculus"),
    "classify": (cmd_classify, 1, "stratum of a term in the CPS language"),
    "gen": (cmd_gen, 0, "generate well-typed terms"),
    "suite": (cmd_suite, 0, "run the acceptance battery"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--calc", choices=CALCS, default="cbn")
    common.add_argument("--budget", type=int, default=s4.DEFAULT_BUDGET)
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    common.add_argument("--trace", action="store_true")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true")
    common.add_argument("--ctx", default="", help="extra context entries, e.g. 'x:p, f:p->q'")

    parser = argparse.ArgumentParser(prog="lambdabox", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, nfiles, help_) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_)
        if nfiles:
            p.add_argument("files", nargs=nfiles, metavar="FILE")
        if name == "eq":
            p.add_argument("--via", choices=["cps", "cpsx"], help="compare the translated images under cbn")
            p.add_argument("--st", action="store_true", help="add the strongness schemes (s4)")
            p.add_argument("--sym", action="store_true", help="add the symmetricity scheme (s4)")
        elif name == "translate":
            p.add_argument("--to", dest="to_dual", choices=["dual"])
            p.add_argument("--from", dest="from_dual", choices=["dual"])
        elif name == "gen":
            p.add_argument("--size", type=int, default=25)
            p.add_argument("--count", type=int, default=10)
            p.add_argument("--restricted", action="store_true")
        elif name == "suite":
            p.add_argument("--count", type=int, default=500)
            p.add_argument("--size", type=int, default=25)
            p.add_argument("--only", type=int, nargs="+", metavar="ID")
            p.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fn = COMMANDS[args.command][0]
    inputs = getattr(args, "files", [])
    try:
        code, result, steps, trace = fn(args)
    except (ParseError, LambdaBoxTypeError, FuelExhausted, CliError, OSError, ValueError, TypeError) as e:
        if args.json:
            print(json.dumps({"command": args.command, "inputs": inputs, "error": f"{type(e).__name__}: {e}"}))
        else:
            print(f"lambdabox {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return ERROR
    if args.json:
        out = {"command": args.command, "inputs": inputs, "result": result, "steps": steps}
        if trace is not None:
            out["trace"] = trace
        print(json.dumps(out))
    else:
        if trace:
            print("\n".join(trace))
        print(result)
    return code


if __name__ == "__main__":
    sys.exit(main())
