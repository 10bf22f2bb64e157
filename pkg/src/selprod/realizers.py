"""Computational content of some classical principles.

Each realizer is a selection function (or a product of them) defeating an
arbitrary counterexample functional, together with a checker for the
property it is meant to guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from selprod.core import Move, OutcomeMap, Selection
from selprod.unbounded import Budget, Game, PaddedSequence, Solver
from selprod.errors import MonotonicityViolation

Predicate = Callable[[Move], bool]


def drinkers_selection(P: Predicate, zero: Move = 0) -> Selection:
    """Look one step ahead: play ``p(zero)`` if it satisfies ``P``, else ``zero``.

    For every ``p``, ``P(p(eps(p)))`` implies ``P(eps(p))``.
    """

    def select(p: OutcomeMap) -> Move:
        y = p(zero)
        return y if P(y) else zero

    return select


def drinkers_holds(P: Predicate, p: OutcomeMap, eps: Selection) -> bool:
    x = eps(p)
    return not P(p(x)) or P(x)


# metastability ------------------------------------------------------------


def window_stable(x: Callable[[int], Fraction], n: int, width: int, k: int) -> bool:
    """``|x_i - x_j| <= 2^-k`` for all ``i, j`` in ``[n, n + width]``."""
    values = [x(i) for i in range(n, n + width + 1)]
    for a, b in zip(values, values[1:]):
        if b < a:
            raise MonotonicityViolation(f"sequence decreases between {a} and {b}")
    if values[0] < 0 or values[-1] > 1:
        raise MonotonicityViolation("sequence leaves the unit interval")
    return values[-1] - values[0] <= Fraction(1, 2**k)


def schedule_search(x: Callable[[int], Fraction], k: int, p: Callable[[int], int]) -> tuple[int, int]:
    """Try the disjoint windows starting at ``n_0 = 0``, ``n_{t+1} = n_t + p(n_t) + 1``.

    Returns the first stable start and the number of candidates tried.  A
    monotone sequence in [0, 1] can have at most ``2^k - 1`` unstable
    disjoint windows, so more than ``2^k + 1`` candidates means the input is
    not monotone.
    """
    limit = 2**k + 1
    n = 0
    for tried in range(1, limit + 1):
        if window_stable(x, n, p(n), k):
            return n, tried
        n = n + p(n) + 1
    raise MonotonicityViolation(f"no stable window among {limit} disjoint candidates")


def metastability_search(x: Callable[[int], Fraction], k: int, p: Callable[[int], int]) -> int:
    """Least ``n`` with ``x`` varying by at most ``2^-k`` on ``[n, n + p(n)]``.

    The disjoint-window schedule bounds the search; the linear scan below
    that bound then returns the least stable start.
    """
    bound, _ = schedule_search(x, k, p)
    for n in range(bound + 1):
        if window_stable(x, n, p(n), k):
            return n
    raise AssertionError("unreachable: the schedule's window is stable")


# Sigma_1 arithmetic comprehension ----------------------------------------

Phi = Callable[[int, int], bool]


def sigma1_ca_selection(phi: Phi, n: int) -> Selection:
    """Round ``n``: play ``p(0)`` if it bounds a witness for ``n``, else 0."""

    def select(p: OutcomeMap) -> int:
        bound = p(0)
        if any(phi(n, k) for k in range(bound)):
            return bound
        return 0

    return select


def sigma1_ca_realizer(
    phi: Phi,
    omega: Callable[[PaddedSequence], int],
    q: Callable[[PaddedSequence], int],
    budget: Budget | None = None,
) -> PaddedSequence:
    game = Game(lambda s: sigma1_ca_selection(phi, len(s)), q, omega)
    return Solver(game, budget).play()


def approximation_set(phi: Phi, F: PaddedSequence, omega: Callable[[PaddedSequence], int]) -> list[int]:
    """``{i <= omega(F) | exists k < F(i). phi(i, k)}``."""
    return [i for i in range(omega(F) + 1) if any(phi(i, k) for k in range(F[i]))]


def sigma1_ca_holds(phi: Phi, F: PaddedSequence, omega, q) -> bool:
    """For all ``i <= omega(F)``: a witness below ``q(F)`` implies one below ``F(i)``."""
    depth = q(F)
    for i in range(omega(F) + 1):
        if any(phi(i, k) for k in range(depth)) and not any(phi(i, k) for k in range(F[i])):
            return False
    return True


# no injection from functions to naturals ---------------------------------

ZERO_FUNCTION = PaddedSequence.zeros()


@dataclass(frozen=True)
class CollisionWitness:
    g1: PaddedSequence
    g2: PaddedSequence
    index: int

    def holds(self, Psi: Callable[[PaddedSequence], int]) -> bool:
        return (
            Psi(self.g1) == self.index
            and Psi(self.g2) == self.index
            and self.g1[self.index] == self.g2[self.index] + 1
        )


def diagonal(F: PaddedSequence) -> PaddedSequence:
    """``k -> F_k(k) + 1``; eventually 1 because ``F`` is eventually zero."""
    return PaddedSequence((F[k][k] + 1 for k in range(F.support)), fill=1)


def no_injection_selection(Psi: Callable[[PaddedSequence], int], n: int) -> Selection:
    def select(p: OutcomeMap) -> PaddedSequence:
        f = p(ZERO_FUNCTION)
        return f if Psi(f) == n else ZERO_FUNCTION

    return select


def no_injection_witness(
    Psi: Callable[[PaddedSequence], int], budget: Budget | None = None
) -> CollisionWitness:
    """Find two different functions that ``Psi`` maps to the same number.

    Moves are functions (padded sequences of naturals); the outcome of a play
    is its diagonal function and the control is ``Psi`` of that diagonal.
    """
    game = Game(
        lambda s: no_injection_selection(Psi, len(s)),
        diagonal,
        lambda F: Psi(diagonal(F)),
        zero=ZERO_FUNCTION,
    )
    F = Solver(game, budget).play()
    g1 = diagonal(F)
    index = Psi(g1)
    return CollisionWitness(g1, F[index], index)
