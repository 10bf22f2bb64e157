"""A realizer for the Bolzano-Weierstrass theorem on rational sequences in [0, 1].

Given a counterexample functional ``psi(A, B)``, :func:`bw_realizer` returns a
bit sequence ``A`` (a candidate limit point, read as a binary expansion) and
an index sequence ``B`` such that for every ``n <= psi(A, B)``::

    B(n) < B(n + 1)   and   x_{B(n)} lies in the dyadic interval coded by A|n

The pipeline: a product of the selection functions ``delta_n`` builds an
approximation ``beta`` to a "how far to look" function, Howard's binary bar
recursion bounds the depth needed for a branch ``A`` of the tree, and ``B``
is read off by bounded search.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Sequence

from selprod.unbounded import Budget, Game, PaddedSequence, Solver
from selprod.errors import BudgetExhausted, DepthCapExceeded, InternalInvariantViolation, MuSearchFailed

Bits = tuple  # tuple of 0/1
RationalSequence = Callable[[int], Fraction]
Psi = Callable[[PaddedSequence, "IndexSequence"], int]
Phi = Callable[[PaddedSequence, PaddedSequence], int]


@dataclass
class BWConfig:
    depth_cap: int = 16
    eps_budget: int = 100_000
    bar_budget: int = 1_000_000
    mu_fallback: bool = True

    def __post_init__(self):
        if self.depth_cap <= 0 or self.eps_budget <= 0 or self.bar_budget <= 0:
            raise ValueError("BWConfig caps must be positive")


# dyadic intervals and the tree -------------------------------------------


def interval(s: Sequence[int]) -> tuple[Fraction, Fraction]:
    lo = sum((Fraction(b, 2 ** (i + 1)) for i, b in enumerate(s)), Fraction(0))
    return lo, lo + Fraction(1, 2 ** len(s))


def in_interval(v: Fraction, s: Sequence[int]) -> bool:
    lo, hi = interval(s)
    return lo <= v <= hi


def cells(v: Fraction, n: int) -> tuple[int, ...]:
    """Codes of the length-``n`` intervals containing ``v``.

    A bit string ``s`` is coded by the integer with binary digits ``s``, so
    ``I_s = [j / 2^n, (j + 1) / 2^n]``.  Dyadic points lie in two intervals.
    """
    scaled = v * 2**n
    j = scaled.numerator // scaled.denominator
    if j == 2**n:
        return (j - 1,)
    if scaled.denominator == 1 and j > 0:
        return (j - 1, j)
    return (j,)


def code(s: Sequence[int]) -> int:
    j = 0
    for b in s:
        j = 2 * j + b
    return j


def tree_predicate(x: RationalSequence, s: Sequence[int], k: int) -> bool:
    """``T(s, k)``: ``|s| < k`` and some ``x_i`` with ``|s| < i <= k`` lies in ``I_s``."""
    n = len(s)
    return n < k and any(in_interval(x(i), s) for i in range(n + 1, k + 1))


class Tree:
    """Cached view of ``T`` for a fixed sequence.

    For each length ``n`` it records, per interval code, the first index
    ``i > n`` whose point lies in that interval, scanning ``x`` lazily.
    """

    def __init__(self, x: RationalSequence):
        self.source = x
        self.x = lru_cache(maxsize=None)(x)
        self._first: dict[int, dict[int, int]] = {}
        self._scanned: dict[int, int] = {}

    def _scan(self, n: int, k: int) -> dict[int, int]:
        first = self._first.setdefault(n, {})
        done = self._scanned.get(n, n)
        for i in range(done + 1, k + 1):
            for j in cells(self.x(i), n):
                first.setdefault(j, i)
        if k > done:
            self._scanned[n] = k
        return first

    def holds(self, s: Sequence[int], k: int) -> bool:
        n = len(s)
        if n >= k:
            return False
        first = self._scan(n, k).get(code(s))
        return first is not None and first <= k

    def saturated(self, n: int, k: int) -> bool:
        """Whether no length-``n`` interval can gain ``T(s, k')`` for any ``k' > k``.

        True when every interval already has ``T(s, k)``, or when the
        sequence declares (via ``closed_from``) that all intervals it ever
        visits past ``n`` are visited by index ``k``.
        """
        if k <= n:
            return False
        closed_from = getattr(self.source, "closed_from", None)
        if closed_from is not None and k >= closed_from(n):
            return True
        first = self._scan(n, k)
        return len(first) == 2**n and all(i <= k for i in first.values())

    def new_cells(self, n: int, lo: int, hi: int) -> bool:
        """Whether some length-``n`` string ``s`` has ``T(s, hi)`` but not ``T(s, lo)``."""
        if hi <= n or hi <= lo:
            return False
        first = self._scan(n, hi)
        floor = max(lo, n)
        return any(floor < i <= hi for i in first.values())


# the selection functions delta_n and beta --------------------------------


def delta_selection(x: RationalSequence | Tree, n: int, p: Callable[[int], int], cfg: BWConfig | None = None) -> int:
    """``p^i(0)`` for the least ``i <= 2^n`` such that, for every bit string
    ``s`` of length ``n``, ``T(s, p^{i+1}(0))`` implies ``T(s, p^i(0))``.

    Such ``i`` exists because each failing step adds one of the ``2^n``
    intervals; not finding one is reported as an invariant violation.
    """
    cfg = cfg or BWConfig()
    if n > cfg.depth_cap:
        raise DepthCapExceeded(f"delta_{n} requested but the depth cap is {cfg.depth_cap}")
    tree = x if isinstance(x, Tree) else Tree(x)
    m = 0
    for _ in range(2**n + 1):
        # no interval can gain a point past m, so p(m) is not needed
        if tree.saturated(n, m):
            return m
        following = p(m)
        if not tree.new_cells(n, m, following):
            return m
        m = following
    raise InternalInvariantViolation(f"no stable iterate of p among the first {2**n + 1} for n={n}")


def beta_game(
    x: RationalSequence | Tree,
    q: Callable[[PaddedSequence], int],
    omega: Callable[[PaddedSequence], int],
    cfg: BWConfig | None = None,
) -> Game:
    cfg = cfg or BWConfig()
    tree = x if isinstance(x, Tree) else Tree(x)

    def selections(s):
        n = len(s)
        return lambda p: delta_selection(tree, n, p, cfg)

    return Game(selections, q, omega)


def beta_via_eps(
    x: RationalSequence | Tree,
    q: Callable[[PaddedSequence], int],
    omega: Callable[[PaddedSequence], int],
    cfg: BWConfig | None = None,
) -> PaddedSequence:
    """The product of the ``delta_n``: for ``n <= omega(beta)`` and every
    ``s`` of length ``n``, ``T(s, q(beta))`` implies ``T(s, beta(n))``."""
    cfg = cfg or BWConfig()
    game = beta_game(x, q, omega, cfg)
    return Solver(game, Budget(cfg.eps_budget)).play()


def beta_holds(x: RationalSequence, beta: PaddedSequence, q, omega) -> bool:
    """Direct check of the property of :func:`beta_via_eps`, by enumerating all bit strings."""
    depth = q(beta)
    for n in range(omega(beta) + 1):
        for j in range(2**n):
            s = tuple(int(b) for b in format(j, f"0{n}b")) if n else ()
            if tree_predicate(x, s, depth) and not tree_predicate(x, s, beta[n]):
                return False
    return True


# Howard's binary bar recursion, h, A and B --------------------------------


class _ReadTracker(PaddedSequence):
    """A padded sequence that records the highest index read from it."""

    __slots__ = ("highest",)

    def __init__(self, prefix):
        super().__init__(prefix)
        self.highest = -1

    def __getitem__(self, n: int):
        if n > self.highest:
            self.highest = n
        return super().__getitem__(n)

    get = __getitem__

    def take(self, n: int):
        if n:
            self[n - 1]
        return super().take(n)

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


def howard_bar_rec(
    phi: Phi, beta: PaddedSequence, t: Sequence[int] = (), cfg: BWConfig | None = None
) -> int:
    """``N(t)``: 0 if some prefix ``s`` of ``t`` has ``phi(s^, beta) < |s|``,
    otherwise ``1 + max(N(t*0), N(t*1))``.

    When ``phi(s^, beta)`` reads no bit at or past ``|s|`` it takes the same
    value on every extension of ``s``, so the unbarred subtree below ``s`` is
    complete and its height is known without visiting it.  ``phi`` must read
    its first argument only by indexing (or ``take``) for this to be sound.
    """
    cfg = cfg or BWConfig()
    spent = [0]

    @lru_cache(maxsize=None)
    def evaluate(u: Bits) -> tuple[int, bool]:
        tracked = _ReadTracker(u)
        value = phi(tracked, beta)
        return value, tracked.highest < len(u)

    @lru_cache(maxsize=None)
    def prefix_barred(u: Bits) -> bool:
        return evaluate(u)[0] < len(u) or (len(u) > 0 and prefix_barred(u[:-1]))

    @lru_cache(maxsize=None)
    def N(u: Bits) -> int:
        spent[0] += 1
        if spent[0] > cfg.bar_budget or len(u) > 5_000:
            raise BudgetExhausted("bar recursion did not bar the binary tree within budget")
        if prefix_barred(u):
            return 0
        value, settled = evaluate(u)
        if settled:
            return value + 1 - len(u)
        return 1 + max(N(u + (0,)), N(u + (1,)))

    t = tuple(int(b) for b in t)
    # prefixes are tested bottom-up so the caches stay shallow
    for i in range(len(t) + 1):
        prefix_barred(t[:i])
    try:
        return N(t)
    except RecursionError:
        raise BudgetExhausted("bar recursion too deep") from None


def h_function(x: RationalSequence, n: int) -> Bits:
    """Bits of length ``n`` locating ``x_n``; ties at a midpoint go left."""
    v = x(n)
    lo, width = Fraction(0), Fraction(1)
    bits = []
    for _ in range(n):
        width /= 2
        if v <= lo + width:
            bits.append(0)
        else:
            bits.append(1)
            lo += width
    return tuple(bits)


def construct_a(x: RationalSequence, phi: Phi, beta: PaddedSequence, cfg: BWConfig | None = None) -> PaddedSequence:
    """The shortest prefix ``t`` of ``h(N(<>))`` with ``phi(t^, beta) < |t|``, extended by zeros."""
    cfg = cfg or BWConfig()
    depth = howard_bar_rec(phi, beta, (), cfg)
    branch = h_function(x, depth)
    for n in range(depth + 1):
        t = branch[:n]
        if phi(PaddedSequence(t), beta) < n:
            return PaddedSequence(t)
    raise MuSearchFailed(f"no prefix of h({depth}) = {branch} is barred")


class IndexSequence:
    """The subsequence indices ``b`` built from ``A`` and ``beta``, computed lazily.

    ``b(0) = 0`` and ``b(n + 1)`` is the least ``i`` in
    ``(b(n) + 1, beta(b(n) + 1)]`` with ``x_i`` in ``I_{A|b(n)+1}``.  When the
    range holds no such ``i`` the value ``b(n) + 1`` is used instead and ``n + 1``
    is recorded in :attr:`fallbacks`.
    """

    def __init__(self, x: RationalSequence, A: PaddedSequence, beta: PaddedSequence, fallback: bool = True):
        self.x = x
        self.A = A
        self.beta = beta
        self.fallback = fallback
        self.values = [0]
        self.fallbacks: set[int] = set()

    def __getitem__(self, n: int) -> int:
        while len(self.values) <= n:
            self._extend()
        return self.values[n]

    __call__ = __getitem__

    def _extend(self) -> None:
        prev = self.values[-1]
        m = prev + 1
        segment = self.A.take(m)
        for i in range(m + 1, self.beta[m] + 1):
            if in_interval(self.x(i), segment):
                self.values.append(i)
                return
        if not self.fallback:
            raise MuSearchFailed(f"no index in ({m}, {self.beta[m]}] for b({len(self.values)})")
        self.fallbacks.add(len(self.values))
        self.values.append(m)

    def take(self, n: int) -> list[int]:
        return [self[i] for i in range(n)]


def construct_b(
    x: RationalSequence, A: PaddedSequence, beta: PaddedSequence, bound: int = 0, cfg: BWConfig | None = None
) -> IndexSequence:
    cfg = cfg or BWConfig()
    b = IndexSequence(x, A, beta, cfg.mu_fallback)
    b[bound]
    return b


def beta_tilde(beta: PaddedSequence, n: int) -> int:
    return max(beta[i] for i in range(n + 2))


def phi_from_psi(x: RationalSequence, psi: Psi, cfg: BWConfig | None = None) -> Phi:
    """``phi(A, beta) = beta~^{psi(A, b_{A,beta})}(0)`` with ``beta~(n) = max_{i <= n+1} beta(i)``."""
    cfg = cfg or BWConfig()

    def phi(A: PaddedSequence, beta: PaddedSequence) -> int:
        b = IndexSequence(x, A, beta, fallback=True)
        v = 0
        for _ in range(psi(A, b)):
            v = beta_tilde(beta, v)
        return v

    return phi


@dataclass
class BWApproximation:
    A: PaddedSequence
    B: Any
    beta: PaddedSequence
    psi_value: int
    bar_depth: int = 0
    fallbacks: set = field(default_factory=set)

    def b_prefix(self) -> list[int]:
        return [self.B[i] for i in range(self.psi_value + 2)]


def bw_realizer(x: RationalSequence, psi: Psi, cfg: BWConfig | None = None) -> BWApproximation:
    cfg = cfg or BWConfig()
    tree = Tree(x)
    x = tree.x
    phi = phi_from_psi(x, psi, cfg)

    # only finite positions are cached: hashing a lazy play would force it
    depths: dict[PaddedSequence, int] = {}

    def bar_depth(beta) -> int:
        if type(beta) is PaddedSequence:
            if beta not in depths:
                depths[beta] = howard_bar_rec(phi, beta, (), cfg) + 1
            return depths[beta]
        return howard_bar_rec(phi, beta, (), cfg) + 1

    beta = beta_via_eps(tree, bar_depth, bar_depth, cfg)
    A = construct_a(x, phi, beta, cfg)
    B = IndexSequence(x, A, beta, cfg.mu_fallback)
    value = psi(A, B)
    B[value + 1]
    return BWApproximation(A, B, beta, value, bar_depth(beta) - 1, set(B.fallbacks))


def verify_bw(x: RationalSequence, psi: Psi, approx: BWApproximation) -> bool:
    A, B = approx.A, approx.B
    for n in range(psi(A, B) + 1):
        if not B[n] < B[n + 1]:
            return False
        if not in_interval(x(B[n]), A.take(n)):
            return False
    return True


# sequences and counterexample functionals --------------------------------


class Periodic:
    """``x_i = values[i mod len(values)]``.

    Every index past ``n + period`` repeats one in ``(n, n + period]``, so
    the intervals visited after ``n`` are all visited by then.
    """

    def __init__(self, values: Sequence[Fraction]):
        values = [Fraction(v) for v in values]
        if not values:
            raise ValueError("need at least one value")
        for v in values:
            if not 0 <= v <= 1:
                raise ValueError(f"{v} is outside [0, 1]")
        self.values = tuple(values)

    def __call__(self, i: int) -> Fraction:
        return self.values[i % len(self.values)]

    def closed_from(self, n: int) -> int:
        return n + len(self.values)

    def __repr__(self) -> str:
        return f"Periodic({[str(v) for v in self.values]})"


class Ratio:
    """``x_i = i / (i + 1)``: from ``i = 2^n - 1`` on, every point lies in the top length-``n`` interval."""

    def __call__(self, i: int) -> Fraction:
        return Fraction(i, i + 1)

    def closed_from(self, n: int) -> int:
        return max(2**n - 1, n + 1)

    def __repr__(self) -> str:
        return "Ratio()"


alternating = Periodic([0, 1])
ratio = Ratio()


def constant(v: Fraction) -> Periodic:
    return Periodic([v])


def cycled(values: Sequence[Fraction]) -> Periodic:
    return Periodic(values)


def psi_constant(c: int) -> Psi:
    return lambda A, B: c


def psi_read(j: int, cap: int) -> Psi:
    """``min(B(j), cap)``."""
    return lambda A, B: min(B[j], cap)
