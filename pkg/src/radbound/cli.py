"""Command-line entry point: one binary, verb-noun subcommands.

Every subcommand prints human-readable text by default and a deterministic
JSON document with --json.  Exit codes: 0 = all checks pass / value
computed, 1 = a verification item failed, 2 = configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import chainwalk, dptable, prawitz, verify
from .core import Direction, Mode, TailQuery, exact_tail, high_dim_exact_tail
from .reporting import emit_report
from .verify import TableResolutionError

CONFIG_ERROR = 2


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from e


def _parse_weights(arg: str):
    """Comma-separated rationals/decimals, or a path to a one-per-line file.

    A file whose lines hold several whitespace-separated coordinates is a
    d-dimensional vector set; returns (kind, payload) with kind 'scalar'
    or 'vectors'.
    """
    if os.path.exists(arg):
        rows = []
        with open(arg, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                rows.append([_fraction(tok) for tok in line.split()])
        if not rows:
            raise argparse.ArgumentTypeError(f"no weights in file {arg}")
        if all(len(r) == 1 for r in rows):
            return "scalar", [r[0] for r in rows]
        return "vectors", rows
    return "scalar", [_fraction(tok) for tok in arg.split(",") if tok]


def _emit(args, payload: dict, text_lines) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _emit_value(args, value: Fraction, extra: dict = None) -> None:
    payload = {"value": str(value), "decimal": float(value)}
    payload.update(extra or {})
    _emit(args, payload, [f"{value} = {float(value)!r}"]
          + [f"{k}: {v}" for k, v in (extra or {}).items()])


def _finish_report(args, rep) -> int:
    print(emit_report(rep, "json" if args.json else "text"))
    return rep.exit_code


def _load_table(args) -> dptable.BoundTable:
    path = args.table or os.environ.get("RDMC_TABLE")
    if not path:
        raise SystemExit2("no table given: pass --table or set RDMC_TABLE")
    return dptable.load_table(path)


class SystemExit2(Exception):
    """Configuration error carrying a message; mapped to exit code 2."""


# ---------------------------------------------------------------------------
# Subcommand handlers.
# ---------------------------------------------------------------------------

def _cmd_oracle_tail(args) -> int:
    kind, payload = _parse_weights(args.weights)
    if kind == "vectors":
        direction = {"norm_ge": Direction.NORM_GE_1,
                     "norm_le": Direction.NORM_LE_1}.get(args.mode)
        if direction is None:
            raise SystemExit2("vector-set input needs --mode norm_ge|norm_le")
        if Fraction(args.t) != 1:
            raise SystemExit2("vector-set tails are defined against t = 1")
        value = high_dim_exact_tail(
            verify._scaled_vector_set(payload), direction)
        _emit_value(args, value, {"mode": args.mode, "n": len(payload)})
        return 0
    mode = {"ge": Mode.GE, "gt": Mode.GT, "abs_ge": Mode.ABS_GE,
            "abs_in_open": Mode.ABS_IN_OPEN}.get(args.mode)
    if mode is None:
        raise SystemExit2(f"unknown mode {args.mode!r} for scalar weights")
    from .core import normalize_weights
    w = normalize_weights(payload)
    q = TailQuery(_fraction(args.t), mode,
                  second_threshold=None if args.t2 is None
                  else _fraction(args.t2))
    _emit_value(args, exact_tail(w, q), {"mode": args.mode, "n": w.n})
    return 0


def _cmd_prawitz_eval(args) -> int:
    p = prawitz.default_params(args.a, args.x)
    if args.T is not None or args.q is not None:
        p = prawitz.PrawitzParams(
            a=p.a, x=p.x,
            T=p.T if args.T is None else args.T,
            q=p.q if args.q is None else args.q)
    mode = (prawitz.Integrator.TRAPEZOID_CERTIFIED if args.mode == "trapezoid"
            else prawitz.Integrator.ADAPTIVE_DISCOUNTED)
    ev = prawitz.prawitz_F(p, mode, panels=args.panels)
    _emit(args,
          {"value": ev.value, "error_budget": ev.error_budget,
           "integrator": ev.integrator.value,
           "a": p.a, "x": p.x, "T": p.T, "q": p.q},
          [f"F({p.a}, {p.x}; T={p.T:.6g}, q={p.q}) = {ev.value!r}",
           f"error budget {ev.error_budget:.3g}"
           f" [{ev.integrator.value}]"])
    return 0


def _cmd_table_build(args) -> int:
    g = dptable.GridSpec(delta=_fraction(args.delta), iterations=args.iters)
    t0 = time.time()
    t = dptable.build_table(g, d0_cache=args.d0_cache, progress=not args.json)
    dptable.save_table(t, args.out)
    _emit(args,
          {"out": args.out, "delta": str(g.delta), "iterations": g.iterations,
           "sweeps": len(t.history), "build_seconds": round(t.build_seconds, 3)},
          [f"wrote {args.out}: delta={g.delta}, {len(t.history)} sweeps, "
           f"{t.build_seconds:.1f}s"])
    return 0


def _cmd_table_query(args) -> int:
    t = _load_table(args)
    v = t.query(args.a, args.x)
    _emit(args, {"a": args.a, "x": args.x, "value": v},
          [f"D({args.a}, {args.x}) >= {v!r}"])
    return 0


def _cmd_table_verify_stash(args) -> int:
    return _finish_report(args, dptable.verify_stash(_load_table(args)))


def _cmd_chain_f(args) -> int:
    v = chainwalk.f_largest_binomials(args.k, args.t)
    _emit(args, {"k": args.k, "t": args.t, "f": v}, [str(v)])
    return 0


def _cmd_chain_check(args) -> int:
    kind, b = _parse_weights(args.weights)
    if kind != "scalar":
        raise SystemExit2("chain check takes scalar weights")
    tail = ()
    if args.tail:
        kind, tail = _parse_weights(args.tail)
        if kind != "scalar":
            raise SystemExit2("tail must be scalar weights")
    cert = chainwalk.ChainCertificate(
        b=tuple(sorted(b, reverse=True)), k=args.k,
        alpha=_fraction(args.alpha), tail_weights=tuple(tail))
    return _finish_report(args, chainwalk.check_antichain_bound(cert))


_POLICIES = {"best": chainwalk.Policy.BEST_ORDER_EXHAUSTIVE,
             "fixed": chainwalk.Policy.FIXED_ORDER,
             "heuristic": chainwalk.Policy.HEURISTIC_DESCENDING}


def _walk_instance(args, eta=None) -> chainwalk.WalkInstance:
    kind, s = _parse_weights(args.set)
    if kind != "scalar":
        raise SystemExit2("walk commands take scalar weights")
    return chainwalk.WalkInstance(
        S=tuple(s), x=_fraction(args.x),
        policy=_POLICIES[getattr(args, "policy", "heuristic")], eta=eta)


def _cmd_walk_prob(args) -> int:
    w = _walk_instance(args)
    p = chainwalk.walk_success_probability(w)
    _emit_value(args, p, {"policy": w.policy.value, "n": len(w.S)})
    return 0


def _cmd_walk_lemma(args) -> int:
    eta = None if args.eta is None else _fraction(args.eta)
    return _finish_report(
        args, chainwalk.check_hitting_lemma(_walk_instance(args, eta=eta)))


def _cmd_walk_sim(args) -> int:
    w = _walk_instance(args)
    out = chainwalk.simulate_walk(w, args.trials, args.seed)
    _emit(args, out,
          [f"estimate {out['estimate']:.6f} from {out['hits']}/{out['trials']}"
           f" hits (seed {out['seed']})",
           f"99% Wilson interval [{out['wilson_lcb_99']:.6f}, "
           f"{out['wilson_ucb_99']:.6f}]"])
    return 0


def _cmd_verify(args) -> int:
    which = args.campaign
    if which == "fixtures":
        rep = verify.verify_fixtures(seed=args.seed)
    elif which == "stash":
        rep = dptable.verify_stash(_load_table(args))
    elif which == "qsums":
        rep = verify.verify_qsums(_load_table(args))
    else:
        fn = {"a1": verify.verify_A1, "a2": verify.verify_A2,
              "a3": verify.verify_A3}[which]
        kw = {"seed": args.seed}
        if args.delta is not None:
            kw["delta"] = args.delta
        rep = fn(_load_table(args), **kw)
    return _finish_report(args, rep)


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit deterministic JSON instead of text")
    common.add_argument("--threads", type=int, default=None,
                        help="cap worker threads for campaigns")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized layers and simulation")

    p = argparse.ArgumentParser(
        prog="radbound",
        description="certified lower bounds on Rademacher tail probabilities")
    sub = p.add_subparsers(dest="noun", required=True)

    oracle = sub.add_parser("oracle", help="exact enumeration oracle")
    osub = oracle.add_subparsers(dest="verb", required=True)
    ot = osub.add_parser("tail", parents=[common])
    ot.add_argument("--weights", required=True,
                    help="comma-separated rationals, or a weights file")
    ot.add_argument("--t", required=True, help="threshold (rational)")
    ot.add_argument("--t2", default=None,
                    help="second threshold for abs_in_open")
    ot.add_argument("--mode", default="ge",
                    choices=["ge", "gt", "abs_ge", "abs_in_open",
                             "norm_ge", "norm_le"])
    ot.set_defaults(fn=_cmd_oracle_tail)

    praw = sub.add_parser("prawitz", help="smoothing lower bound F")
    psub = praw.add_subparsers(dest="verb", required=True)
    pe = psub.add_parser("eval", parents=[common])
    pe.add_argument("--a", type=float, required=True)
    pe.add_argument("--x", type=float, required=True)
    pe.add_argument("--T", type=float, default=None)
    pe.add_argument("--q", type=float, default=None)
    pe.add_argument("--mode", default="trapezoid",
                    choices=["trapezoid", "adaptive"])
    pe.add_argument("--panels", type=int, default=20000)
    pe.set_defaults(fn=_cmd_prawitz_eval)

    table = sub.add_parser("table", help="the certified D(a, x) table")
    tsub = table.add_subparsers(dest="verb", required=True)
    tb = tsub.add_parser("build", parents=[common])
    tb.add_argument("--delta", default="1/400")
    tb.add_argument("--iters", type=int, default=10)
    tb.add_argument("--out", required=True)
    tb.add_argument("--d0-cache", default=None)
    tb.set_defaults(fn=_cmd_table_build)
    tq = tsub.add_parser("query", parents=[common])
    tq.add_argument("--table", default=None)
    tq.add_argument("--a", type=float, required=True)
    tq.add_argument("--x", type=float, required=True)
    tq.set_defaults(fn=_cmd_table_query)
    tv = tsub.add_parser("verify-stash", parents=[common])
    tv.add_argument("--table", default=None)
    tv.set_defaults(fn=_cmd_table_verify_stash)

    chain = sub.add_parser("chain", help="antichain window-mass bounds")
    csub = chain.add_subparsers(dest="verb", required=True)
    cf = csub.add_parser("f", parents=[common])
    cf.add_argument("--k", type=int, required=True)
    cf.add_argument("--t", type=int, required=True)
    cf.set_defaults(fn=_cmd_chain_f)
    cc = csub.add_parser("check", parents=[common])
    cc.add_argument("--weights", required=True)
    cc.add_argument("--k", type=int, required=True)
    cc.add_argument("--alpha", required=True)
    cc.add_argument("--tail", default=None)
    cc.set_defaults(fn=_cmd_chain_check)

    walk = sub.add_parser("walk", help="the stopped sign-walk")
    wsub = walk.add_subparsers(dest="verb", required=True)
    wp = wsub.add_parser("prob", parents=[common])
    wp.add_argument("--set", required=True)
    wp.add_argument("--x", required=True)
    wp.add_argument("--policy", default="heuristic",
                    choices=sorted(_POLICIES))
    wp.set_defaults(fn=_cmd_walk_prob)
    wl = wsub.add_parser("lemma", parents=[common])
    wl.add_argument("--set", required=True)
    wl.add_argument("--x", required=True)
    wl.add_argument("--eta", default=None)
    wl.add_argument("--policy", default="heuristic",
                    choices=sorted(_POLICIES))
    wl.set_defaults(fn=_cmd_walk_lemma)
    ws = wsub.add_parser("sim", parents=[common])
    ws.add_argument("--set", required=True)
    ws.add_argument("--x", required=True)
    ws.add_argument("--trials", type=int, required=True)
    ws.set_defaults(fn=_cmd_walk_sim)

    ver = sub.add_parser("verify", parents=[common],
                         help="verification campaigns")
    ver.add_argument("campaign",
                     choices=["a1", "a2", "a3", "qsums", "stash", "fixtures"])
    ver.add_argument("--table", default=None,
                     help="table path (default: RDMC_TABLE env var)")
    ver.add_argument("--delta", type=float, default=None,
                     help="campaign mesh delta override")
    ver.set_defaults(fn=_cmd_verify)

    return p


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit2 as e:
        print(f"error: {e}", file=sys.stderr)
        return CONFIG_ERROR
    except (TableResolutionError, dptable.TableFormatError, OSError,
            ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
