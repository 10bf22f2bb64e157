"""File-defined finite games and their JSON trace documents.

A game file is a JSON object::

    {
      "domain": [0, 1],          # moves, in search order
      "default": 0,              # optional, defaults to the first move
      "control": 1,              # constant control: rounds 0..control are relevant
      "outcome": ["and", ["read", 0], ["read", 1]],
      "strategy": [[[], 1], [[1], 1]]   # optional (position, move) table
    }

Every position uses Hilbert's epsilon over ``domain``.  Outcomes are small
expression trees over reads of the play: integers and booleans are constants,
and a list ``[op, arg, ...]`` applies one of the operators in ``OPERATORS``.
Because an expression reads finitely many indices the outcome is continuous
by construction.  Unlisted strategy positions play the default move.
"""

from __future__ import annotations

import json
import operator
import random
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Any, Callable

from selprod.core import FiniteDomain, hilbert_epsilon
from selprod.unbounded import Budget, Game, PaddedSequence, Solver, check_equilibrium, check_prefix_consistency
from selprod.errors import GameFileError
from selprod.games import brute_force_backward_induction, optimal_strategy, verify_optimality

MAX_READ_INDEX = 64
TRACE_SCHEMA = "selprod.trace/1"

Expr = Any
Compiled = Callable[[PaddedSequence], Any]


def _fold(fn):
    return lambda *args: reduce(fn, args)


# name -> (min arity, max arity or None, implementation)
OPERATORS: dict[str, tuple[int, int | None, Callable[..., Any]]] = {
    "+": (1, None, _fold(operator.add)),
    "-": (1, 2, lambda a, b=None: -a if b is None else a - b),
    "*": (1, None, _fold(operator.mul)),
    "min": (1, None, min),
    "max": (1, None, max),
    "==": (2, 2, operator.eq),
    "!=": (2, 2, operator.ne),
    "<": (2, 2, operator.lt),
    "<=": (2, 2, operator.le),
    ">": (2, 2, operator.gt),
    ">=": (2, 2, operator.ge),
    "and": (1, None, lambda *a: all(a)),
    "or": (1, None, lambda *a: any(a)),
    "not": (1, 1, operator.not_),
}


def compile_expr(expr: Expr, max_index: int = MAX_READ_INDEX) -> Compiled:
    """Compile an expression tree to a function of a play."""
    if isinstance(expr, bool) or isinstance(expr, int):
        return lambda alpha: expr
    if not isinstance(expr, list) or not expr or not isinstance(expr[0], str):
        raise GameFileError(f"malformed expression {expr!r}")
    op, args = expr[0], expr[1:]
    if op == "read":
        if len(args) != 1 or isinstance(args[0], bool) or not isinstance(args[0], int):
            raise GameFileError(f"read takes one integer index, got {expr!r}")
        i = args[0]
        if not 0 <= i < max_index:
            raise GameFileError(f"read index {i} outside [0, {max_index})")
        return lambda alpha: alpha[i]
    if op not in OPERATORS:
        raise GameFileError(f"unknown operator {op!r}")
    lo, hi, fn = OPERATORS[op]
    if len(args) < lo or (hi is not None and len(args) > hi):
        raise GameFileError(f"wrong number of arguments for {op!r}: {len(args)}")
    parts = [compile_expr(a, max_index) for a in args]
    return lambda alpha: fn(*(part(alpha) for part in parts))


def read_indices(expr: Expr) -> set[int]:
    if isinstance(expr, list) and expr:
        if expr[0] == "read":
            return {expr[1]}
        return set().union(*(read_indices(a) for a in expr[1:]))
    return set()


@dataclass
class GameFile:
    spec: dict
    domain: FiniteDomain
    control: int
    outcome: Compiled
    strategy_table: dict[tuple, Any] | None

    @property
    def game(self) -> Game:
        eps_x = hilbert_epsilon(self.domain)
        control = self.control
        return Game(lambda s: eps_x, self.outcome, lambda alpha: control, self.domain.default, self.domain)

    def file_strategy(self):
        if self.strategy_table is None:
            return None
        table, default = self.strategy_table, self.domain.default
        return lambda s: table.get(tuple(s), default)


def parse_game(spec: Any) -> GameFile:
    if not isinstance(spec, dict):
        raise GameFileError("a game file must be a JSON object")
    for key in ("domain", "control", "outcome"):
        if key not in spec:
            raise GameFileError(f"missing field {key!r}")
    moves = spec["domain"]
    if not isinstance(moves, list) or not all(_is_int(m) for m in moves):
        raise GameFileError("domain must be a list of integers")
    try:
        domain = FiniteDomain(moves, spec.get("default"))
    except ValueError as e:
        raise GameFileError(str(e)) from None
    control = spec["control"]
    if not _is_int(control) or control < 0:
        raise GameFileError("control must be a natural number")
    outcome = compile_expr(spec["outcome"])
    table = None
    if "strategy" in spec:
        table = {}
        try:
            for position, move in spec["strategy"]:
                if move not in domain or not all(m in domain for m in position):
                    raise GameFileError(f"strategy entry {position!r} -> {move!r} uses unknown moves")
                table[tuple(position)] = move
        except (TypeError, ValueError) as e:
            if isinstance(e, GameFileError):
                raise
            raise GameFileError("strategy must be a list of [position, move] pairs") from None
    return GameFile(spec, domain, control, outcome, table)


def load_game(path: str | Path) -> GameFile:
    return parse_game(load_json(path))


def load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise GameFileError(f"cannot read {path}: {e}") from None


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def verdicts(gf: GameFile, budget: Budget | None = None) -> dict[str, bool]:
    """Run every game-level check; keys name the property checked."""
    budget = budget if budget is not None else Budget()
    game = gf.game
    cap = gf.control + 2
    alpha = Solver(game, budget.fresh()).play()
    result = {
        "prefix_consistency": check_prefix_consistency(game, (), gf.control + 1, budget),
        "equilibrium": check_equilibrium(game, budget),
        "optimality": verify_optimality(game, optimal_strategy(game, budget.fresh()), cap).ok,
        "oracle_agreement": brute_force_backward_induction(game, gf.control, budget.fresh()) == alpha,
    }
    strategy = gf.file_strategy()
    if strategy is not None:
        result["strategy_optimality"] = verify_optimality(game, strategy, cap).ok
    return result


def trace_document(gf: GameFile, budget: Budget | None = None) -> dict:
    budget = budget if budget is not None else Budget()
    game = gf.game
    solver = Solver(game, budget.fresh())
    alpha = solver.play()
    relevant = game.control(alpha)
    rounds = []
    for n in range(relevant + 1):
        s = alpha.take(n)
        outcomes = [[x, solver.outcome_after(s, x)] for x in gf.domain]
        rounds.append(
            {
                "position": list(s),
                "move": alpha[n],
                "outcomes": outcomes,
                "value": solver.outcome_after(s, alpha[n]),
            }
        )
    return {
        "schema": TRACE_SCHEMA,
        "game": gf.spec,
        "play": list(alpha.take(relevant + 1)),
        "outcome": game.outcome(alpha),
        "relevant_length": relevant,
        "rounds": rounds,
        "verdicts": verdicts(gf, budget),
    }


def replay_matches(doc: dict, budget: Budget | None = None) -> bool:
    """Whether the play and outcome recorded in a trace are reproduced."""
    fresh = trace_document(parse_game(doc["game"]), budget)
    return all(fresh[k] == doc.get(k) for k in ("play", "outcome", "relevant_length", "rounds"))


def is_trace(doc: Any) -> bool:
    return isinstance(doc, dict) and doc.get("schema") == TRACE_SCHEMA


# random corpora -----------------------------------------------------------

_BOOL_OPS = ["and", "or", "not", "==", "!=", "<", "<=", ">", ">="]
_NUM_OPS = ["+", "-", "*", "min", "max"]


def random_expr(rng: random.Random, reads: int, values: int, depth: int = 3) -> Expr:
    """A random boolean-valued expression over ``read(0..reads-1)``."""
    return _random_bool(rng, reads, values, depth)


def _random_bool(rng, reads, values, depth):
    if depth <= 0:
        return rng.choice([["read", rng.randrange(reads)], [">", ["read", rng.randrange(reads)], 0]])
    op = rng.choice(_BOOL_OPS)
    if op in ("and", "or"):
        return [op] + [_random_bool(rng, reads, values, depth - 1) for _ in range(rng.randint(2, 3))]
    if op == "not":
        return [op, _random_bool(rng, reads, values, depth - 1)]
    return [op, _random_num(rng, reads, values, depth - 1), _random_num(rng, reads, values, depth - 1)]


def _random_num(rng, reads, values, depth):
    if depth <= 0 or rng.random() < 0.4:
        if rng.random() < 0.7:
            return ["read", rng.randrange(reads)]
        return rng.randrange(values)
    op = rng.choice(_NUM_OPS)
    return [op, _random_num(rng, reads, values, depth - 1), _random_num(rng, reads, values, depth - 1)]


def random_game_spec(rng: random.Random, domain_size: int, control: int, depth: int = 3) -> dict:
    """A random game file over ``{0, ..., domain_size - 1}``.

    The outcome reads the relevant rounds and one round past them.
    """
    return {
        "domain": list(range(domain_size)),
        "default": 0,
        "control": control,
        "outcome": random_expr(rng, control + 2, domain_size, depth),
    }
