"""Selection functions, their quantifiers, and the binary product.

A selection function over moves ``X`` with outcomes ``R`` is any callable
taking an outcome map ``p: X -> R`` and returning a move.  Outcome maps are
treated as opaque functions; they are only ever evaluated pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Hashable, Sequence, Tuple

Move = Any
Outcome = Any
OutcomeMap = Callable[[Move], Outcome]
Selection = Callable[[OutcomeMap], Move]
Quantifier = Callable[[OutcomeMap], Outcome]


@dataclass(frozen=True)
class FiniteDomain:
    """An ordered, nonempty set of moves with a distinguished default.

    The declared order is the search order of :func:`hilbert_epsilon`.
    """

    elements: Tuple[Hashable, ...]
    default: Hashable = None

    def __init__(self, elements: Sequence[Hashable], default: Hashable = None):
        elements = tuple(elements)
        if not elements:
            raise ValueError("a finite domain needs at least one element")
        if len(set(elements)) != len(elements):
            raise ValueError(f"duplicate elements in domain {elements!r}")
        if default is None:
            default = elements[0]
        if default not in elements:
            raise ValueError(f"default {default!r} is not in {elements!r}")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "default", default)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements

    @classmethod
    def booleans(cls) -> "FiniteDomain":
        return cls((0, 1), 0)

    @classmethod
    def range(cls, n: int, default: int = 0) -> "FiniteDomain":
        return cls(tuple(range(n)), default)


def quantifier(eps: Selection) -> Quantifier:
    """The quantifier attained by ``eps``: ``p -> p(eps(p))``."""

    def quant(p: OutcomeMap) -> Outcome:
        return p(eps(p))

    return quant


def hilbert_epsilon(domain: FiniteDomain) -> Selection:
    """Bounded epsilon search over ``domain``.

    Returns the first element (in declared order) whose outcome is truthy,
    or ``domain.default`` when there is none.  Its quantifier is the
    existential quantifier over the domain.
    """
    elements = domain.elements
    default = domain.default

    def select(p: OutcomeMap) -> Move:
        for x in elements:
            if p(x):
                return x
        return default

    return select


def constant_selection(move: Move) -> Selection:
    return lambda p: move


def binary_product(
    eps: Selection,
    delta: Callable[[Move], Selection],
    q: Callable[[Move, Move], Outcome],
) -> Tuple[Move, Move]:
    """Apply the dependent product of ``eps`` and the family ``delta`` to ``q``.

    ``delta(x)`` is the selection function used for the second move once the
    first move is ``x``.  For the simple product pass ``lambda x: d``.
    """

    def reply(x: Move) -> Move:
        return delta(x)(lambda y: q(x, y))

    a = eps(lambda x: q(x, reply(x)))
    return a, reply(a)


def product(eps: Selection, delta: Callable[[Move], Selection] | Selection) -> Selection:
    """The product as a selection function on pairs.

    ``delta`` may be a single selection function (simple product) or a family
    indexed by the first move (dependent product); a family must be marked by
    wrapping it with :func:`dependent`.
    """
    family = delta.family if isinstance(delta, dependent) else (lambda x: delta)

    def select(q: Callable[[Tuple[Move, Move]], Outcome]) -> Tuple[Move, Move]:
        return binary_product(eps, family, lambda x, y: q((x, y)))

    return select


class dependent:
    """Marks a move-indexed family of selection functions for :func:`product`."""

    __slots__ = ("family",)

    def __init__(self, family: Callable[[Move], Selection]):
        self.family = family
