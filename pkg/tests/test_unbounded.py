import random

import pytest
from hypothesis import given, strategies as st

from oracles import naive_eps
from selprod.core import FiniteDomain, hilbert_epsilon
from selprod.errors import BudgetExhausted
from selprod.gamefile import compile_expr, random_expr
from selprod.unbounded import (
    Budget,
    Game,
    PaddedSequence,
    Solver,
    canonical_extension,
    check_equilibrium,
    check_prefix_consistency,
    continuation_outcome,
    eps,
    finite_product,
    shift_outcome,
    unbounded_product,
)

H = hilbert_epsilon(FiniteDomain.booleans())


def boolean_game(q, omega):
    return Game(lambda s: H, q, omega, 0, FiniteDomain.booleans())


CONJUNCTION = boolean_game(lambda a: bool(a[0] and a[1]), lambda a: 1)


# padded sequences ----------------------------------------------------------


def test_padded_sequence_examples():
    s = canonical_extension((3, 1))
    assert (s[0], s[1], s[2], s[50]) == (3, 1, 0, 0)
    assert canonical_extension(()) == PaddedSequence.zeros()
    assert canonical_extension((0, 0)) == PaddedSequence.zeros()


def test_padded_sequence_rejects_negative_index():
    with pytest.raises(IndexError):
        PaddedSequence((1,))[-1]


def test_fill_is_part_of_the_value():
    assert PaddedSequence((1,), fill=1) == PaddedSequence((), fill=1)
    assert PaddedSequence((), fill=1) != PaddedSequence.zeros()


@given(st.lists(st.integers(0, 3), max_size=8), st.lists(st.integers(0, 3), max_size=8))
def test_equality_is_pointwise(a, b):
    x, y = PaddedSequence(a), PaddedSequence(b)
    pointwise = all(x[i] == y[i] for i in range(10))
    assert (x == y) == pointwise
    if x == y:
        assert hash(x) == hash(y)


@given(st.lists(st.integers(0, 3), max_size=8), st.integers(0, 10))
def test_take_drop_prepend_round_trip(a, n):
    x = PaddedSequence(a)
    assert x.drop(n).prepend(x.take(n)) == x


def test_padded_sequences_can_be_moves():
    f = PaddedSequence((1, 2))
    table = {f: "seen"}
    assert table[PaddedSequence((1, 2, 0))] == "seen"


# shifting outcomes ---------------------------------------------------------


def test_shift_outcome_examples():
    read0 = lambda a: a[0]
    read1 = lambda a: a[1]
    assert shift_outcome(read0, 7)(PaddedSequence((4, 5))) == 7
    assert shift_outcome(read1, 7)(PaddedSequence((4, 5))) == 4


@given(st.lists(st.integers(0, 3), max_size=4), st.lists(st.integers(0, 3), max_size=4),
       st.lists(st.integers(0, 3), max_size=6))
def test_shifts_compose(s, t, alpha):
    q = lambda a: a.take(10)
    alpha = PaddedSequence(alpha)
    assert shift_outcome(shift_outcome(q, s), t)(alpha) == shift_outcome(q, s + t)(alpha)


# the product -----------------------------------------------------------------


def test_conjunction_game_play():
    alpha = eps((), CONJUNCTION)
    assert alpha == PaddedSequence((1, 1))
    assert CONJUNCTION.outcome(alpha) is True


def test_immediate_termination_after_one_move():
    game = boolean_game(lambda a: a[0] == 1, lambda a: 0)
    assert eps((1,), game) == PaddedSequence.zeros()
    assert eps((), game) == PaddedSequence((1,))


def test_negated_first_move():
    game = boolean_game(lambda a: not a[0], lambda a: 1)
    alpha = eps((), game)
    assert alpha == PaddedSequence.zeros()
    assert game.outcome(alpha) is True


def test_finite_product_examples():
    assert finite_product(0, boolean_game(lambda a: a[0] == 1, lambda a: 99)) == PaddedSequence((1,))
    assert finite_product(1, CONJUNCTION) == PaddedSequence((1, 1))
    assert finite_product(1, boolean_game(lambda a: False, lambda a: 1)) == PaddedSequence.zeros()


def test_continuation_outcome_examples():
    assert continuation_outcome((), 1, CONJUNCTION) is True
    assert continuation_outcome((), 0, CONJUNCTION) is False
    ends = boolean_game(lambda a: a.take(3), lambda a: 0)
    assert continuation_outcome((1,), 1, ends) == (1, 1, 0)


def test_prefix_consistency_examples():
    assert check_prefix_consistency(CONJUNCTION, (), 3)
    assert check_prefix_consistency(boolean_game(lambda a: a[2] == 1, lambda a: 2), (), 0)


def test_equilibrium_examples():
    assert check_equilibrium(CONJUNCTION)
    assert check_equilibrium(boolean_game(lambda a: a[0] == 1, lambda a: 0))


def test_relative_outcome_sees_only_the_continuation():
    q = lambda beta: beta[0] == 1 and beta[1] == 0
    alpha = unbounded_product((1, 1), lambda s: H, lambda a: 3, q)
    assert alpha == PaddedSequence((1,))


def test_outcome_reading_a_prefix_forces_only_that_prefix():
    budget = Budget()
    game = boolean_game(lambda a: a[0] == 1, lambda a: 50)
    solver = Solver(game, budget)
    assert solver.outcome_after((), 1) is True
    # one move past the candidate is never needed
    assert budget.used == 0
    assert solver.play_from(()) == PaddedSequence((1,))
    assert budget.used == 51


def _random_game(seed, control_reads):
    rng = random.Random(seed)
    size = rng.choice([2, 3])
    domain = FiniteDomain.range(size)
    q = compile_expr(random_expr(rng, 5, size))
    if control_reads:
        w = compile_expr(["min", 3, ["+", ["read", rng.randrange(3)], rng.randrange(2)]])
    else:
        c = rng.randrange(4)
        w = lambda a: c
    return Game(lambda s: hilbert_epsilon(domain), q, w, 0, domain)


@given(st.integers(0, 10_000), st.booleans())
def test_agrees_with_the_naive_recursion(seed, control_reads):
    g = _random_game(seed, control_reads)
    expected = naive_eps((), g.selections, g.outcome, g.control, g.zero)
    assert eps((), g) == expected


@given(st.integers(0, 10_000), st.lists(st.integers(0, 2), max_size=3))
def test_agrees_with_the_naive_recursion_from_any_position(seed, s):
    g = _random_game(seed, True)
    s = tuple(min(x, len(g.domain) - 1) for x in s)
    assert eps(s, g) == naive_eps(s, g.selections, g.outcome, g.control, g.zero)


@given(st.integers(0, 10_000), st.integers(0, 4))
def test_bounded_control_terminates_within_its_bound(seed, bound):
    g = _random_game(seed, True).with_control(lambda a, b=bound: min(b, a[0] + a[1]))
    assert eps((), g).support <= bound + 1


@given(st.integers(0, 10_000))
def test_prefix_consistency_and_equilibrium_on_random_games(seed):
    g = _random_game(seed, True)
    assert check_prefix_consistency(g, (), 5)
    assert check_equilibrium(g)


def test_runaway_control_exhausts_the_budget():
    always_one = Game(lambda s: lambda p: 1, lambda a: 0, lambda a: a.support)
    with pytest.raises(BudgetExhausted):
        eps((), always_one)
    with pytest.raises(BudgetExhausted):
        eps((), boolean_game(lambda a: 0, lambda a: 10**6), Budget(expansions=1000))
