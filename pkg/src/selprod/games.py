"""Strategies for sequential games and their optimality.

The product computes an optimal strategy; this module provides the
strategy view of it, a direct checker of optimality, and an independent
backward-induction oracle that tabulates the whole finite game tree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from selprod.core import Move, Outcome
from selprod.unbounded import Budget, Game, PaddedSequence, Position, Solver
from selprod.errors import BudgetExhausted

Strategy = Callable[[Position], Move]

DEFAULT_DEPTH_CAP = 12


def is_relevant(game: Game, s: Sequence[Move]) -> bool:
    return len(s) <= game.control(game.extend(s))


def strategic_extension(strategy: Strategy, s: Sequence[Move], stop_at: int, zero: Move = 0) -> PaddedSequence:
    """Follow ``strategy`` from ``s`` for ``stop_at`` moves, zero-padded after.

    The result holds only the moves played after ``s``.
    """
    s = tuple(s)
    moves: list[Move] = []
    for _ in range(stop_at):
        moves.append(strategy(s + tuple(moves)))
    return PaddedSequence(moves, zero)


class OptimalStrategy:
    """``next(s)``: the first move of the product at ``s``.

    Continuations are cached across calls, which is sound because they
    depend only on the position for a fixed game.
    """

    def __init__(self, game: Game, budget: Budget | None = None):
        self.game = game
        self._solver = Solver(game, budget)

    def __call__(self, s: Sequence[Move]) -> Move:
        return self._solver.step(tuple(s))[1]

    def extension(self, s: Sequence[Move]) -> PaddedSequence:
        return self._solver.play_from(tuple(s))


def optimal_strategy(game: Game, budget: Budget | None = None) -> OptimalStrategy:
    return OptimalStrategy(game, budget)


@dataclass
class OptimalityReport:
    ok: bool
    checked: int = 0
    failures: list[tuple[Position, Move, Move]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _play_positions(strategy: Strategy, s: Position, cap: int) -> Iterator[Position]:
    """Positions visited when following ``strategy`` from ``s`` up to length ``cap``."""
    while len(s) <= cap:
        yield s
        if len(s) == cap:
            return
        s = s + (strategy(s),)


def _positions_to_check(game: Game, strategy: Strategy, cap: int, sweep: bool) -> Iterator[Position]:
    if sweep:
        for n in range(cap + 1):
            yield from itertools.product(game.domain.elements, repeat=n)
        return
    seen: set[Position] = set()
    for s in _play_positions(strategy, (), cap):
        if not is_relevant(game, s):
            continue
        for t in [s] + [s + (x,) for x in game.domain.elements if len(s) < cap]:
            for u in _play_positions(strategy, t, cap):
                if u not in seen:
                    seen.add(u)
                    yield u


def verify_optimality(
    game: Game,
    strategy: Strategy,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    sweep: bool = False,
) -> OptimalityReport:
    """Check that at each relevant position the strategy plays what the
    position's selection function recommends, given the outcomes of following
    the strategy after each candidate move.

    Positions are those on the strategic play and on every single-deviation
    branch from it, up to length ``depth_cap``.  With ``sweep=True`` every
    position up to that length is checked (exponential).  Strategic
    extensions are truncated at absolute length ``depth_cap``.
    """
    if game.domain is None:
        raise ValueError("verify_optimality needs a game with a finite move domain")
    report = OptimalityReport(True)
    for s in _positions_to_check(game, strategy, depth_cap, sweep):
        if not is_relevant(game, s):
            continue
        if len(s) >= depth_cap:
            raise BudgetExhausted(
                f"relevant position of length {len(s)} at the depth cap {depth_cap}"
            )

        def p(x: Move, s: Position = s) -> Outcome:
            t = s + (x,)
            alpha = strategic_extension(strategy, t, depth_cap - len(t), game.zero)
            return game.outcome(alpha.prepend(t))

        recommended = game.selections(s)(p)
        played = strategy(s)
        report.checked += 1
        if played != recommended:
            report.ok = False
            report.failures.append((s, played, recommended))
    return report


def brute_force_backward_induction(
    game: Game, depth: int, budget: Budget | None = None
) -> PaddedSequence:
    """Solve a finite game by tabulating every position up to ``depth``.

    Works bottom-up over the full tree without calling the product: terminal
    positions (``omega(s^) < |s|``) are valued by their canonical extension,
    and each other position plays its selection function against the table
    of child plays.  Positions of length ``depth + 1`` must all be terminal.
    Returns the whole play from the empty position.
    """
    budget = budget if budget is not None else Budget()
    elements = game.domain.elements
    leaves = len(elements) ** (depth + 1)
    if leaves > budget.expansions:
        raise BudgetExhausted(f"{leaves} leaves exceed the budget of {budget.expansions}")

    # None marks a subtree that reaches past the depth; an error only at the root
    best: dict[Position, PaddedSequence | None] = {}
    for n in range(depth + 1, -1, -1):
        for s in itertools.product(elements, repeat=n):
            if game.control(game.extend(s)) < n:
                best[s] = game.extend(s)
            elif n == depth + 1:
                best[s] = None
            else:
                best[s] = _solve_node(game, s, elements, best)
    if best[()] is None:
        raise BudgetExhausted(f"relevant positions remain at length {depth + 1}")
    return best[()]


def _solve_node(game, s, elements, best):
    children = {x: best[s + (x,)] for x in elements}
    if any(c is None for c in children.values()):
        return None
    outcomes = {x: game.outcome(children[x]) for x in elements}
    return children[game.selections(s)(outcomes.__getitem__)]
