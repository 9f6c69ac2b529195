import math
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from route_invariants.arithmetic import (
    IndexSequence,
    continued_fraction,
    eventual_period,
    is_prime,
    padic_expand,
    route_index_sequence,
    trace_invariant,
)
from route_invariants.braid import BraidWord, identity
from route_invariants.burau import trace_at, unit_root
from route_invariants.errors import BraidError


def test_fibonacci_convergents():
    conv = continued_fraction(IndexSequence((1, 1, 1, 1, 1)))
    assert conv.fractions == [Fraction(1), Fraction(2), Fraction(3, 2), Fraction(5, 3), Fraction(8, 5)]

    golden = (1 + math.sqrt(5)) / 2
    ten = continued_fraction(IndexSequence((1,) * 10))
    assert abs(float(ten.value) - golden) < 1e-3
    assert ten.decimal().startswith("1.618")


def test_convergents_recurrence_and_coprimality():
    rng = random.Random(6)
    for _ in range(200):
        terms = tuple(rng.randint(1, 50) for _ in range(rng.randint(1, 12)))
        conv = continued_fraction(IndexSequence(terms))
        ps, qs = conv.numerators, conv.denominators
        for n in range(len(terms)):
            assert math.gcd(ps[n], qs[n]) == 1
            if n >= 1:
                assert ps[n] * qs[n - 1] - ps[n - 1] * qs[n] == (-1) ** (n + 1)
        x = terms[-1]
        for c in reversed(terms[:-1]):
            x = c + Fraction(1, x)
        assert conv.value == x


def test_convergents_alternate_toward_the_limit():
    rng = random.Random(10)
    terms = tuple(rng.randint(1, 9) for _ in range(10))
    values = continued_fraction(IndexSequence(terms)).fractions
    gaps = [abs(b - a) for a, b in zip(values, values[1:])]
    assert all(later < earlier for earlier, later in zip(gaps, gaps[1:]))


def test_big_terms_stay_exact():
    conv = continued_fraction(IndexSequence((10 ** 30, 7)))
    assert conv.to_json()[-1] == [str(7 * 10 ** 30 + 1), "7"]


def test_empty_and_nonpositive_sequences_are_rejected():
    with pytest.raises(BraidError):
        continued_fraction(IndexSequence(()))
    with pytest.raises(BraidError):
        IndexSequence((1, 0))


def test_padic_digits():
    digits = padic_expand(IndexSequence((2, 3, 5)), 2)
    assert digits.digits == (0, 1, 1)
    assert digits.partial_sum == 6
    assert digits.to_json() == {"p": 2, "digits": [0, 1, 1], "sum": "6"}
    with pytest.raises(BraidError):
        padic_expand(IndexSequence((1,)), 4)


def test_padic_partial_sums_are_congruent():
    rng = random.Random(12)
    for prime in (2, 3, 5, 7):
        terms = tuple(rng.randint(1, 1000) for _ in range(15))
        sums = [padic_expand(IndexSequence(terms[:d]), prime).partial_sum for d in range(1, len(terms) + 1)]
        for d in range(1, len(sums)):
            assert (sums[d] - sums[d - 1]) % prime ** d == 0


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_eventual_period():
    assert eventual_period([0, 1, 0, 1, 0, 1]) == (0, 2)
    assert eventual_period([1, 1, 0, 1, 0, 1, 0]) == (1, 2)
    assert eventual_period([3, 3, 3]) == (0, 1)
    assert eventual_period([1, 2, 3]) is None


def test_trace_invariant_parallel_matches_serial():
    braids = [BraidWord(3, (1, -2)), BraidWord(5, (1, 2, -3, 4)), identity(2)]
    t0 = unit_root(5)
    serial = trace_invariant(braids, t0)
    with ThreadPoolExecutor(max_workers=3) as pool:
        parallel = trace_invariant(braids, t0, executor=pool)
    assert serial == parallel
    assert serial[0] == trace_at(braids[0], t0)
    with pytest.raises(BraidError):
        trace_invariant(braids, 0)


def test_route_sequence_orders_by_braid():
    s1 = BraidWord(2, (1,))
    one = ("cascade-0", [(s1, 3)])
    two = ("cascade-1", [(identity(2), 5), (BraidWord(3, (2,)), 7)])
    merged = route_index_sequence([one, two])
    # identity < σ2 < σ1 after inclusion into B_3
    assert merged.terms == (5, 7, 3)
    assert route_index_sequence([two, one]) == merged


def test_route_sequence_needs_braids():
    with pytest.raises(BraidError):
        route_index_sequence([("cascade-0", [])])
