"""Independent reference implementations used to cross-check the library.

These are direct transcriptions of the definitions: no caching, no lazy
evaluation, no shortcuts.  They are slow and only meant for small inputs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from selprod.unbounded import PaddedSequence


def naive_eps(s, selections, q, omega, zero=0, depth=60):
    """The continuation after ``s``, by the plain recursion with absolute ``q``."""
    s = tuple(s)
    if omega(PaddedSequence(s, zero)) < len(s):
        return PaddedSequence((), zero)
    if len(s) > depth:
        raise RecursionError("naive oracle went too deep")

    def continuation(x):
        return naive_eps(s + (x,), selections, q, omega, zero, depth).prepend((x,))

    a = selections(s)(lambda x: q(continuation(x).prepend(s)))
    return continuation(a)


def exists(domain, p):
    return any(p(x) for x in domain)


def all_predicates(points):
    """Every predicate on a finite list of points, as frozensets of true points."""
    for bits in itertools.product((False, True), repeat=len(points)):
        yield frozenset(pt for pt, b in zip(points, bits) if b)


def dyadic_interval(bits):
    """``I_s`` from the definition, summing bit weights."""
    lo = Fraction(0)
    for i, b in enumerate(bits):
        if b:
            lo += Fraction(1, 2 ** (i + 1))
    return lo, lo + Fraction(1, 2 ** len(bits))


def delta_by_definition(x, n, p):
    """``p^i(0)`` for the least ``i <= 2^n`` such that ``T(s, p^{i+1}(0)) -> T(s, p^i(0))`` for all ``s``."""
    strings = [tuple(b) for b in itertools.product((0, 1), repeat=n)]

    def T(s, k):
        lo, hi = dyadic_interval(s)
        return len(s) < k and any(lo <= x(i) <= hi for i in range(len(s) + 1, k + 1))

    m = 0
    for _ in range(2**n + 1):
        following = p(m)
        if all(T(s, m) or not T(s, following) for s in strings):
            return m
        m = following
    raise AssertionError("no i <= 2^n")


def howard_by_definition(phi, beta, t=(), limit=30):
    """``N^beta(t)`` with no memo and no continuity shortcut."""
    t = tuple(t)
    for i in range(len(t) + 1):
        if phi(PaddedSequence(t[:i]), beta) < i:
            return 0
    if len(t) > limit:
        raise RecursionError("tree not barred")
    return 1 + max(howard_by_definition(phi, beta, t + (0,), limit), howard_by_definition(phi, beta, t + (1,), limit))
