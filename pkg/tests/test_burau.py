import cmath
import json
import math
import random

import numpy as np
import pytest

from route_invariants.braid import BraidWord, compose, identity, inverse
from route_invariants.burau import (
    ONE,
    T,
    ZERO,
    IntMatrix,
    LaurentMatrix,
    LaurentPoly,
    burau,
    burau_generator,
    characteristic_polynomial,
    det_laurent,
    evaluate,
    spectral_log,
    symplectic,
    trace_at,
    unit_root,
)
from route_invariants.errors import BraidError


def random_word(rng: random.Random, strands: int, length: int) -> BraidWord:
    return BraidWord(strands, tuple(rng.choice([1, -1]) * rng.randint(1, strands - 1) for _ in range(length)))


def test_generator_matrices_match_the_b3_display():
    assert burau_generator(3, 1, 1).rows == (
        (ONE - T, T, ZERO),
        (ONE, ZERO, ZERO),
        (ZERO, ZERO, ONE),
    )
    assert burau_generator(3, 2, 1).rows == (
        (ONE, ZERO, ZERO),
        (ZERO, ONE - T, T),
        (ZERO, ONE, ZERO),
    )
    with pytest.raises(BraidError):
        burau_generator(3, 3, 1)


def test_generator_times_inverse_is_identity():
    for i in (1, 2, 3):
        assert burau_generator(4, i, 1) @ burau_generator(4, i, -1) == LaurentMatrix.identity(4)


def test_braid_relation_holds_exactly():
    assert burau(identity(3)) == LaurentMatrix.identity(3)
    assert burau(BraidWord(3, (1, 2, 1))) == burau(BraidWord(3, (2, 1, 2)))
    for n in range(3, 7):
        for i in range(1, n - 1):
            assert burau(BraidWord(n, (i, i + 1, i))) == burau(BraidWord(n, (i + 1, i, i + 1)))


def test_far_generators_commute():
    for n in range(4, 7):
        for i in range(1, n):
            for j in range(i + 2, n):
                for s, r in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    a, b = burau_generator(n, i, s), burau_generator(n, j, r)
                    assert a @ b == b @ a


@pytest.mark.parametrize("strands", [3, 4, 5, 6])
def test_burau_is_a_homomorphism(strands):
    rng = random.Random(100 + strands)
    for _ in range(100):
        a = random_word(rng, strands, rng.randint(0, 7))
        b = random_word(rng, strands, rng.randint(0, 7))
        assert burau(compose(a, b)) == burau(a) @ burau(b)
        assert burau(inverse(a)) @ burau(a) == LaurentMatrix.identity(strands)


def test_evaluate_commutes_with_products():
    rng = random.Random(31)
    for _ in range(50):
        strands = rng.randint(3, 6)
        left = burau(random_word(rng, strands, rng.randint(1, 8)))
        right = burau(random_word(rng, strands, rng.randint(1, 8)))
        t0 = cmath.exp(2j * math.pi * rng.random())
        product = evaluate(left @ right, t0)
        expected = evaluate(left, t0) @ evaluate(right, t0)
        assert np.linalg.norm(product - expected) <= 1e-10 * max(1.0, np.linalg.norm(expected))


def test_matrix_json_round_trip():
    rng = random.Random(44)
    for _ in range(50):
        m = burau(random_word(rng, rng.randint(2, 6), rng.randint(0, 9)))
        assert LaurentMatrix.from_json(json.loads(json.dumps(m.to_json()))) == m
    big = LaurentMatrix(((LaurentPoly.monomial(10 ** 40, -3) + ONE,),))
    assert LaurentMatrix.from_json(json.loads(json.dumps(big.to_json()))) == big


def test_determinant_is_a_power_of_minus_t():
    assert det_laurent(LaurentMatrix.identity(3)) == ONE
    assert det_laurent(burau_generator(3, 1, 1)) == LaurentPoly.monomial(-1, 1)

    rng = random.Random(2)
    for _ in range(60):
        word = random_word(rng, 4, rng.randint(0, 8))
        e = sum(1 if x > 0 else -1 for x in word.letters)
        assert det_laurent(burau(word)) == LaurentPoly.monomial(-1 if e % 2 else 1, e)


def test_laurent_exact_division():
    p = (ONE - T) * (ONE + T)
    assert p.exact_div(ONE + T) == ONE - T


def test_evaluate_at_minus_one_and_one():
    m = evaluate(burau(BraidWord(3, (1,))), -1)
    assert np.allclose(m, [[2, -1, 0], [1, 0, 0], [0, 0, 1]])

    rng = random.Random(4)
    for _ in range(20):
        at_one = evaluate(burau(random_word(rng, 4, 6)), 1)
        assert np.allclose(at_one.sum(axis=1), 1.0)

    with pytest.raises(BraidError):
        evaluate(burau(identity(2)), 0)


def test_trace_examples():
    assert abs(trace_at(identity(3), 0.37 + 0.2j) - 3) < 1e-12
    assert trace_at(BraidWord(3, (1,)), -1) == 3
    assert trace_at(BraidWord(3, (1, -2)), -1) == 4


def test_trace_matches_symbolic_trace():
    word = BraidWord(4, (1, -2, 3, 2, -1))
    t0 = unit_root(5)
    assert abs(trace_at(word, t0) - burau(word).trace().evaluate(t0)) < 1e-9


def test_symplectic_is_burau_at_minus_one():
    assert symplectic(BraidWord(2, (1,))) == IntMatrix(((2, -1), (1, 0)))
    rng = random.Random(9)
    for _ in range(100):
        word = random_word(rng, 5, rng.randint(0, 10))
        m = symplectic(word)
        assert m.determinant() == 1
        assert set(m.row_sums()) == {1}
    word = BraidWord(3, (2, -1, 2))
    assert np.allclose(symplectic(word).to_numpy(), evaluate(burau(word), -1))


def test_characteristic_polynomial_of_sigma1_sigma2_inverse():
    # (λ - 1)(λ² - 3λ + 1)
    assert characteristic_polynomial(symplectic(BraidWord(3, (1, -2)))) == [1, -4, 4, -1]


def test_spectral_log():
    assert spectral_log(identity(3)) == 0.0
    assert spectral_log(BraidWord(2, (1,))) == 0.0
    assert abs(spectral_log(BraidWord(3, (1, -2))) - math.log((3 + math.sqrt(5)) / 2)) < 1e-9


def test_unit_root():
    assert abs(unit_root(4) - 1j) < 1e-12
