"""Command-line front end.

Exit statuses: 0 when every verdict holds, 1 when some verdict fails, 2 for
usage or input errors, 3 when a budget, depth cap or continuity search gives up.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, TextIO

from selprod import bw, realizers, samples
from selprod.errors import (
    BudgetExhausted,
    DepthCapExceeded,
    GameFileError,
    InternalInvariantViolation,
    MonotonicityViolation,
    MuSearchFailed,
)
from selprod.gamefile import is_trace, load_json, parse_game, replay_matches, trace_document, verdicts
from selprod.unbounded import Budget, PaddedSequence

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _budget(args) -> Budget:
    return Budget(expansions=args.max_depth) if args.max_depth is not None else Budget()


def _jsonable(v: Any) -> Any:
    if isinstance(v, PaddedSequence):
        if v.fill == 0:
            return v.to_json()
        return {"prefix": v.to_json(), "then": _jsonable(v.fill)}
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, set):
        return sorted(v)
    return v


# demos --------------------------------------------------------------------


def demo_drinkers(args) -> tuple[dict, dict]:
    rng = random.Random(args.seed)
    failures = 0
    shown = []
    for i in range(args.samples):
        P, p = samples.random_predicate(rng), samples.random_nat_map(rng)
        eps = realizers.drinkers_selection(P)
        x = eps(p)
        ok = realizers.drinkers_holds(P, p, eps)
        failures += not ok
        if i < 5:
            shown.append({"move": x, "p(move)": p(x), "P(move)": P(x), "P(p(move))": P(p(x))})
    return {"samples": args.samples, "first": shown, "failures": failures}, {"drinkers": failures == 0}


def demo_metastability(args) -> tuple[dict, dict]:
    k, c = args.k, args.c
    x = lambda n: 1 - Fraction(1, 2**n)
    p = lambda n: n + c
    n = realizers.metastability_search(x, k, p)
    start, tried = realizers.schedule_search(x, k, p)
    result = {"k": k, "window": f"n + {c}", "n": n, "schedule_start": start, "candidates": tried}
    return result, {
        "window_stable": realizers.window_stable(x, n, p(n), k),
        "candidate_bound": tried <= 2**k + 1,
    }


def demo_ca(args) -> tuple[dict, dict]:
    rng = random.Random(args.seed)
    phi = samples.random_relation(rng)
    omega, q = samples.random_prefix_functional(rng), samples.random_prefix_functional(rng)
    F = realizers.sigma1_ca_realizer(phi, omega, q, _budget(args))
    result = {
        "F": list(F.take(omega(F) + 1)),
        "omega(F)": omega(F),
        "q(F)": q(F),
        "approximation": realizers.approximation_set(phi, F, omega),
    }
    return result, {"sigma1_ca": realizers.sigma1_ca_holds(phi, F, omega, q)}


def demo_noinj(args) -> tuple[dict, dict]:
    Psi = samples.random_functional(random.Random(args.seed))
    w = realizers.no_injection_witness(Psi, _budget(args))
    result = {"g1": w.g1, "g2": w.g2, "index": w.index, "Psi(g1)": Psi(w.g1), "Psi(g2)": Psi(w.g2)}
    return result, {"collision": w.holds(Psi)}


def parse_sequence(spec: str) -> Callable[[int], Fraction]:
    """``alternating``, ``ratio``, ``const:P/Q``, ``random:SEED`` or a file of ``n d`` lines."""
    if spec == "alternating":
        return bw.alternating
    if spec == "ratio":
        return bw.ratio
    if spec.startswith("const:"):
        try:
            v = Fraction(spec[len("const:"):])
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad constant in {spec!r}") from None
        return bw.cycled([v])
    if spec.startswith("random:"):
        try:
            seed = int(spec[len("random:"):])
        except ValueError:
            raise UsageError(f"bad seed in {spec!r}") from None
        return bw.cycled(samples.random_rationals(random.Random(seed)))
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"unknown sequence {spec!r}")
    values = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        if not line.strip():
            continue
        try:
            n, d = (int(t) for t in line.split())
            values.append(Fraction(n, d))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"{path}:{lineno}: expected 'n d'") from None
    try:
        return bw.cycled(values)
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None


def parse_psi(spec: str) -> bw.Psi:
    """``const:C`` or ``read:J:C`` (``min(B(J), C)``)."""
    parts = spec.split(":")
    try:
        if parts[0] == "const" and len(parts) == 2:
            return bw.psi_constant(int(parts[1]))
        if parts[0] == "read" and len(parts) == 3:
            return bw.psi_read(int(parts[1]), int(parts[2]))
    except ValueError:
        pass
    raise UsageError(f"bad psi spec {spec!r}; use const:C or read:J:C")


def demo_bw(args) -> tuple[dict, dict]:
    x = parse_sequence(args.sequence)
    psi = parse_psi(args.psi)
    cfg = bw.BWConfig()
    if args.max_depth is not None:
        cfg.eps_budget = args.max_depth
    approx = bw.bw_realizer(x, psi, cfg)
    n = approx.psi_value
    result = {
        "sequence": args.sequence,
        "psi": args.psi,
        "psi(A,B)": n,
        "A": list(approx.A.take(n + 1)),
        "B": approx.b_prefix(),
        "points": [x(i) for i in approx.b_prefix()],
        "beta": list(approx.beta.take(approx.bar_depth + 2)),
        "bar_depth": approx.bar_depth,
        "fallbacks_in_range": sorted(i for i in approx.fallbacks if i <= n),
    }
    return result, {"bolzano_weierstrass": bw.verify_bw(x, psi, approx)}


DEMOS = {
    "drinkers": demo_drinkers,
    "metastability": demo_metastability,
    "ca": demo_ca,
    "noinj": demo_noinj,
    "bw": demo_bw,
}


# games --------------------------------------------------------------------


def _load_game_doc(path: str):
    doc = load_json(path)
    if is_trace(doc):
        return doc, parse_game(doc.get("game"))
    return None, parse_game(doc)


def cmd_solve_game(args) -> tuple[dict, dict]:
    _, gf = _load_game_doc(args.file)
    doc = trace_document(gf, _budget(args))
    return doc, doc["verdicts"]


def cmd_verify(args) -> tuple[dict, dict]:
    trace, gf = _load_game_doc(args.file)
    result = verdicts(gf, _budget(args))
    if trace is not None:
        result["trace_replay"] = replay_matches(trace, _budget(args))
        result["recorded_verdicts"] = trace.get("verdicts") == {
            k: v for k, v in result.items() if k != "trace_replay"
        }
    return {"file": args.file, "verdicts": result}, result


# plumbing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-depth", type=int, default=None, metavar="N", help="expansion budget of the product")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled inputs")

    parser = argparse.ArgumentParser(prog="selprod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    demo = sub.add_parser("demo", parents=[common], help="run a realizer on sample inputs")
    demo.add_argument("name", choices=sorted(DEMOS))
    demo.add_argument("--samples", type=int, default=1000, help="drinkers: number of (P, p) pairs")
    demo.add_argument("-k", type=int, default=1, help="metastability: precision 2^-k")
    demo.add_argument("-c", type=int, default=5, help="metastability: window p(n) = n + c")
    demo.add_argument("--psi", default="const:1", help="bw: const:C or read:J:C")
    demo.add_argument("--sequence", default="alternating", help="bw: alternating, ratio, const:P/Q, random:SEED or a file")

    solve = sub.add_parser("solve-game", parents=[common], help="solve a game file and print its trace")
    solve.add_argument("file")
    verify = sub.add_parser("verify", parents=[common], help="check a game file or trace")
    verify.add_argument("file")
    return parser


def _render(result: dict, verdict: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(_jsonable({"result": result, "verdicts": verdict}), indent=2)
    lines = [f"{k}: {_jsonable(v)}" for k, v in result.items() if k != "verdicts"]
    lines += [f"verdict {k}: {'holds' if v else 'FAILS'}" for k, v in verdict.items()]
    return "\n".join(lines)


def run_command(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if args.max_depth is not None and args.max_depth <= 0:
        print("error: --max-depth must be positive", file=err)
        return EXIT_USAGE
    try:
        if args.command == "demo":
            result, verdict = DEMOS[args.name](args)
        elif args.command == "solve-game":
            result, verdict = cmd_solve_game(args)
        else:
            result, verdict = cmd_verify(args)
    except (UsageError, GameFileError, MonotonicityViolation) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except (BudgetExhausted, DepthCapExceeded, MuSearchFailed, InternalInvariantViolation) as e:
        print(f"error: {type(e).__name__}: {e}", file=err)
        return EXIT_BUDGET
    if args.command == "solve-game" and args.json:
        print(json.dumps(_jsonable(result), indent=2), file=out)
    else:
        print(_render(result, verdict, args.json), file=out)
    return EXIT_OK if all(verdict.values()) else EXIT_FALSE


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
