"""Seeded sample generators shared by the demos and the test corpora.

Every generator takes a :class:`random.Random` so that a seed fixes the
whole sample bit for bit.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable

from selprod.unbounded import PaddedSequence

NAT_BOUND = 100


def random_predicate(rng: random.Random, bound: int = NAT_BOUND) -> Callable[[int], bool]:
    """A predicate on ``0..bound`` given by a random membership table."""
    density = rng.random()
    table = frozenset(i for i in range(bound + 1) if rng.random() < density)
    return table.__contains__


def random_nat_map(rng: random.Random, bound: int = NAT_BOUND) -> Callable[[int], int]:
    table = [rng.randint(0, bound) for _ in range(bound + 1)]
    return lambda i: table[min(i, bound)]


def random_relation(rng: random.Random, size: int = 8) -> Callable[[int, int], bool]:
    """A relation on ``n, k <= size``, false outside that square."""
    density = rng.random() * 0.5
    table = frozenset((n, k) for n in range(size + 1) for k in range(size + 1) if rng.random() < density)
    return lambda n, k: (n, k) in table


def random_prefix_functional(rng: random.Random, cap: int = 8) -> Callable[[PaddedSequence], int]:
    """Either a constant or ``min(cap, F(j) + c)`` for a random ``j``."""
    if rng.random() < 0.5:
        c = rng.randint(0, cap)
        return lambda F: c
    j, c = rng.randint(0, 3), rng.randint(0, 3)
    return lambda F: min(cap, F[j] + c)


def random_functional(
    rng: random.Random, reads: int = 3, inner: int = 3, outputs: int = 4
) -> Callable[[PaddedSequence], int]:
    """A continuous functional on padded sequences.

    It reads at most ``reads`` positions, clips each value read to
    ``0..inner-1`` and looks the clipped tuple up in a random table.
    """
    positions = rng.sample(range(6), rng.randint(1, reads))
    keys = itertools.product(range(inner), repeat=len(positions))
    table = {key: rng.randrange(outputs) for key in keys}

    def Psi(f: PaddedSequence) -> int:
        return table[tuple(min(f[j], inner - 1) for j in positions)]

    return Psi


def random_rationals(rng: random.Random, max_den: int = 16, length: tuple[int, int] = (2, 6)) -> list[Fraction]:
    """Values in ``[0, 1]`` with denominators at most ``max_den``."""
    values = []
    for _ in range(rng.randint(*length)):
        d = rng.randint(1, max_den)
        values.append(Fraction(rng.randint(0, d), d))
    return values
