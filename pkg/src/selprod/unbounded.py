"""The explicitly controlled unbounded product of selection functions.

Infinite sequences are represented by :class:`PaddedSequence`: a finite
prefix followed by a constant tail (the canonical zero unless stated
otherwise).  Every play the product produces has this shape, so outcome and
control functionals only ever see padded sequences.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence, Tuple

from selprod.core import Move, Outcome, Selection, quantifier
from selprod.errors import BudgetExhausted

Position = Tuple[Move, ...]

DEFAULT_EXPANSIONS = 100_000
DEFAULT_MAX_DEPTH = 400


class PaddedSequence:
    """An eventually constant infinite sequence ``prefix * fill * fill * ...``.

    The prefix is normalized by trimming trailing ``fill`` values, so two
    padded sequences are equal exactly when they agree at every index.
    Instances are immutable and hashable and may themselves be used as moves.
    """

    __slots__ = ("prefix", "fill", "_hash")

    def __init__(self, prefix: Iterable[Any] = (), fill: Any = 0):
        items = list(prefix)
        while items and items[-1] == fill:
            items.pop()
        self.prefix: Tuple[Any, ...] = tuple(items)
        self.fill = fill
        self._hash = hash((self.prefix, fill))

    @classmethod
    def zeros(cls, fill: Any = 0) -> "PaddedSequence":
        return cls((), fill)

    def __getitem__(self, n: int) -> Any:
        if n < 0:
            raise IndexError("padded sequences are indexed by naturals")
        if n < len(self.prefix):
            return self.prefix[n]
        return self.fill

    get = __getitem__

    def __call__(self, n: int) -> Any:
        return self[n]

    def take(self, n: int) -> Tuple[Any, ...]:
        """The initial segment of length ``n``."""
        return tuple(self[i] for i in range(n))

    def drop(self, n: int) -> "PaddedSequence":
        return PaddedSequence(self.prefix[n:], self.fill)

    def prepend(self, moves: Sequence[Any]) -> "PaddedSequence":
        return PaddedSequence(tuple(moves) + self.prefix, self.fill)

    @property
    def support(self) -> int:
        """Length of the normalized prefix."""
        return len(self.prefix)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PaddedSequence):
            return NotImplemented
        return self.prefix == other.prefix and self.fill == other.fill

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(map(repr, self.prefix))
        if self.fill == 0:
            return f"PaddedSequence([{body}])"
        return f"PaddedSequence([{body}], fill={self.fill!r})"

    def to_json(self) -> Any:
        return [_jsonable(v) for v in self.prefix]


def _jsonable(v: Any) -> Any:
    if isinstance(v, PaddedSequence):
        return {"prefix": v.to_json(), "fill": _jsonable(v.fill)}
    return v


def canonical_extension(s: Sequence[Move], zero: Move = 0) -> PaddedSequence:
    return PaddedSequence(s, zero)


def shift_outcome(q: Callable[[PaddedSequence], Outcome], a: Move | Sequence[Move]):
    """``q_a``: the outcome function ``alpha -> q(a * alpha)``.

    ``a`` may be a single move or a finite sequence of moves; tuples and
    lists are taken as sequences.
    """
    moves = tuple(a) if isinstance(a, (tuple, list)) else (a,)
    return lambda alpha: q(alpha.prepend(moves))


@dataclass
class Budget:
    """Limits on the number of product expansions and on position length."""

    expansions: int = DEFAULT_EXPANSIONS
    max_depth: int = DEFAULT_MAX_DEPTH
    used: int = 0

    def spend(self, depth: int) -> None:
        self.used += 1
        if self.used > self.expansions:
            raise BudgetExhausted(
                f"more than {self.expansions} expansions of the product; "
                "the control function did not end the play in time"
            )
        if depth > self.max_depth:
            raise BudgetExhausted(
                f"position length {depth} exceeds the depth cap {self.max_depth}"
            )

    def fresh(self) -> "Budget":
        return Budget(self.expansions, self.max_depth)


@dataclass(frozen=True)
class Game:
    """A sequential game: selection functions per position, outcome ``q`` and
    control ``omega``.

    ``selections(s)`` is the selection function played at position ``s``.
    ``domain`` is only needed by procedures that enumerate moves (oracles,
    optimality sweeps); the product itself never enumerates moves.
    """

    selections: Callable[[Position], Selection]
    outcome: Callable[[PaddedSequence], Outcome]
    control: Callable[[PaddedSequence], int]
    zero: Move = 0
    domain: Any = None

    def extend(self, s: Sequence[Move]) -> PaddedSequence:
        return PaddedSequence(s, self.zero)

    def with_control(self, omega: Callable[[PaddedSequence], int]) -> "Game":
        return Game(self.selections, self.outcome, omega, self.zero, self.domain)


class Solver:
    """Evaluates the product for one game.

    The recursion is evaluated by need: the outcome map handed to the
    selection function at ``s`` evaluates ``q`` on a :class:`LazyPlay`, whose
    moves past ``s * x`` are computed only when ``q`` reads them.  The values
    are those of the eager recursion; an outcome that reads a short prefix
    simply never forces the rest of the continuation.

    Chosen moves are cached by position, which is sound because for a fixed
    game the move at ``s`` depends on ``s`` alone.  A solver is not
    thread-safe; use one per thread.
    """

    def __init__(self, game: Game, budget: Budget | None = None):
        self.game = game
        self.budget = budget if budget is not None else Budget()
        self._moves: dict[Position, tuple[bool, Move]] = {}

    def step(self, s: Position) -> tuple[bool, Move]:
        """``(False, a_s)`` at a relevant position, ``(True, zero)`` once the
        control function ends the play."""
        hit = self._moves.get(s)
        if hit is not None:
            return hit
        game = self.game
        if game.control(game.extend(s)) < len(s):
            result = (True, game.zero)
        else:
            self.budget.spend(len(s))
            try:
                a = game.selections(s)(lambda x: self.outcome_after(s, x))
            except RecursionError:
                raise BudgetExhausted(
                    f"Python recursion limit reached at position length {len(s)}"
                ) from None
            result = (False, a)
        self._moves[s] = result
        return result

    def play_from(self, s: Sequence[Move]) -> PaddedSequence:
        """The continuation chosen by the product at ``s``: ``EPS_s(q_s)``.

        Holds only the moves after ``s``.
        """
        t = tuple(s)
        while True:
            done, a = self.step(t)
            if done:
                return PaddedSequence(t[len(s):], self.game.zero)
            t = t + (a,)

    def lazy(self, t: Sequence[Move]) -> "LazyPlay":
        """``t * EPS_t(q_t)`` as a sequence forced on demand."""
        return LazyPlay(self, tuple(t))

    def outcome_after(self, s: Sequence[Move], x: Move) -> Outcome:
        """``p_s(x)``: the outcome of playing ``x`` at ``s`` and continuing
        with the product."""
        return self.game.outcome(self.lazy(tuple(s) + (x,)))

    def play(self) -> PaddedSequence:
        return self.play_from(())


class LazyPlay:
    """A play ``t * EPS_t(q_t)`` whose moves after ``t`` are computed on demand.

    Indexing forces only the moves up to the index read.  Anything needing
    the whole sequence (equality, hashing, ``prefix``) forces all of it.
    """

    __slots__ = ("_solver", "_known", "_done", "_forced")

    def __init__(self, solver: Solver, t: Position):
        self._solver = solver
        self._known = list(t)
        self._done = False
        self._forced: PaddedSequence | None = None

    @property
    def fill(self) -> Any:
        return self._solver.game.zero

    def __getitem__(self, n: int) -> Any:
        if n < 0:
            raise IndexError("plays are indexed by naturals")
        known = self._known
        while n >= len(known) and not self._done:
            done, a = self._solver.step(tuple(known))
            if done:
                self._done = True
            else:
                known.append(a)
        return known[n] if n < len(known) else self.fill

    get = __getitem__

    def __call__(self, n: int) -> Any:
        return self[n]

    def take(self, n: int) -> Tuple[Any, ...]:
        return tuple(self[i] for i in range(n))

    def force(self) -> PaddedSequence:
        if self._forced is None:
            while not self._done:
                self[len(self._known)]
            self._forced = PaddedSequence(self._known, self.fill)
        return self._forced

    @property
    def prefix(self) -> Tuple[Any, ...]:
        return self.force().prefix

    @property
    def support(self) -> int:
        return self.force().support

    def drop(self, n: int) -> PaddedSequence:
        return self.force().drop(n)

    def prepend(self, moves: Sequence[Any]) -> PaddedSequence:
        return self.force().prepend(moves)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LazyPlay):
            other = other.force()
        return self.force() == other

    def __hash__(self) -> int:
        return hash(self.force())

    def __repr__(self) -> str:
        return f"LazyPlay({self._known!r}{'' if self._done else ', ...'})"


def eps(s: Sequence[Move], game: Game, budget: Budget | None = None) -> PaddedSequence:
    """The product at position ``s`` against the shifted outcome ``q_s``.

    The result is the continuation of ``s``; for ``s = ()`` it is the whole
    play.
    """
    return Solver(game, budget).play_from(s)


def unbounded_product(
    s: Sequence[Move],
    selections: Callable[[Position], Selection],
    control: Callable[[PaddedSequence], int],
    q: Callable[[PaddedSequence], Outcome],
    zero: Move = 0,
    budget: Budget | None = None,
) -> PaddedSequence:
    """``EPS_s(q)`` with ``q`` read relative to ``s``.

    ``q`` receives only the moves played after ``s``, while ``control`` is
    evaluated on the whole canonical extension, as in the recursion schema.
    """
    s = tuple(s)
    n = len(s)

    def absolute(alpha: PaddedSequence) -> Outcome:
        return q(alpha.drop(n))

    return eps(s, Game(selections, absolute, control, zero), budget)


def finite_product(n: int, game: Game, budget: Budget | None = None) -> PaddedSequence:
    """The product with constant control ``n``: at most ``n + 1`` rounds."""
    return eps((), game.with_control(lambda alpha: n), budget)


def continuation_outcome(
    s: Sequence[Move], x: Move, game: Game, budget: Budget | None = None
) -> Outcome:
    return Solver(game, budget).outcome_after(s, x)


def check_prefix_consistency(
    game: Game, s: Sequence[Move], n_max: int, budget: Budget | None = None
) -> bool:
    """Check that restarting the product on an initial segment of its own
    play reproduces that play, for every segment length up to ``n_max``.

    Each restart uses a fresh solver, so no cached continuation is shared
    with the run being checked.
    """
    budget = budget if budget is not None else Budget()
    s = tuple(s)
    alpha = eps(s, game, budget.fresh())
    for n in range(n_max + 1):
        head = alpha.take(n)
        again = eps(s + head, game, budget.fresh()).prepend(head)
        if again != alpha:
            return False
    return True


def equilibrium_rounds(game: Game, budget: Budget | None = None):
    """Per-round data of the play ``alpha = EPS(q)``.

    Yields ``(n, position, move, local_outcome_map)`` for every
    ``n <= omega(alpha)``.
    """
    solver = Solver(game, budget)
    alpha = solver.play()
    for n in range(game.control(alpha) + 1):
        s = alpha.take(n)
        p = lambda x, s=s: solver.outcome_after(s, x)
        yield n, s, alpha[n], p


def check_equilibrium(game: Game, budget: Budget | None = None) -> bool:
    """Check that every relevant move of the play is the one its selection
    function picks against the true continuation outcomes, and that the
    outcome of the play is the value of each round's quantifier."""
    budget = budget if budget is not None else Budget()
    alpha = eps((), game, budget.fresh())
    outcome = game.outcome(alpha)
    # fresh solver for the local outcome maps
    check = Solver(game, budget.fresh())
    for n in range(game.control(alpha) + 1):
        s = alpha.take(n)
        eps_s = game.selections(s)
        p = lambda x, s=s: check.outcome_after(s, x)
        if eps_s(p) != alpha[n]:
            return False
        if quantifier(eps_s)(p) != outcome:
            return False
    return True


# each product round costs about four interpreter frames
if sys.getrecursionlimit() < 10_000:
    sys.setrecursionlimit(10_000)
