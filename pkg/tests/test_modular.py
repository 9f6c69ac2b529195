import random

import pytest

from route_invariants.braid import BraidWord, conjugate, identity
from route_invariants.burau import IntMatrix, symplectic
from route_invariants.errors import BraidError, ResourceLimitError
from route_invariants.modular import (
    ModMatrix,
    OrderCache,
    braid_image_order,
    generator_images,
    group_closure,
    matrix_order,
    reduce_mod,
    relative_index,
    sl_order,
)

SIGMA = IntMatrix(((2, -1), (1, 0)))


def test_reduce_mod_examples():
    assert reduce_mod(SIGMA, 2).rows == ((0, 1), (1, 0))
    assert reduce_mod(SIGMA, 3).rows == ((2, 2), (1, 0))
    assert reduce_mod(IntMatrix.identity(3), 5).is_identity()
    with pytest.raises(BraidError):
        reduce_mod(SIGMA, 1)


def test_reduce_mod_is_a_homomorphism():
    a = symplectic(BraidWord(3, (1, -2, 1)))
    b = symplectic(BraidWord(3, (2, 2, -1)))
    for modulus in (2, 3, 4):
        assert reduce_mod(a @ b, modulus) == reduce_mod(a, modulus) @ reduce_mod(b, modulus)


def test_matrix_order():
    assert matrix_order(ModMatrix.identity(2, 3)) == 1
    assert matrix_order(reduce_mod(SIGMA, 2)) == 2


def test_group_closure_small_cases():
    assert group_closure([ModMatrix.identity(2, 5)]).count == 1
    closure = group_closure(generator_images(2, 2))
    assert closure.count == 2
    assert reduce_mod(SIGMA, 2) in closure


def test_group_closure_ignores_generator_order():
    rng = random.Random(5)
    for strands, modulus in ((3, 2), (3, 3), (3, 5), (4, 2)):
        gens = generator_images(strands, modulus)
        expected = group_closure(gens).count
        for _ in range(10):
            shuffled = list(gens)
            rng.shuffle(shuffled)
            assert group_closure(shuffled).count == expected


def test_image_order_mod_five_covers_sl2():
    cache = OrderCache()
    order = braid_image_order(3, 5, cache=cache)
    # the reduced block alone maps B_3 onto SL(2, Z/5)
    assert order % sl_order(2, 5) == 0
    assert order % matrix_order(reduce_mod(symplectic(BraidWord(3, (1,))), 5)) == 0
    assert group_closure(list(reversed(generator_images(3, 5)))).count == order


def test_group_closure_cap_is_reported():
    with pytest.raises(ResourceLimitError) as excinfo:
        group_closure(generator_images(3, 3), cap=10)
    assert excinfo.value.cap == 10
    assert "cap 10" in str(excinfo.value)


def test_image_orders():
    cache = OrderCache()
    assert braid_image_order(2, 2, cache=cache) == 2
    assert braid_image_order(3, 2, cache=cache) == 6
    assert 168 % braid_image_order(3, 2, cache=cache) == 0
    assert sl_order(2, 3) % braid_image_order(2, 3, cache=cache) == 0
    assert cache.get(3, 2) == 6


def test_mod_two_shortcut_matches_enumeration():
    for strands in (2, 3, 4):
        assert braid_image_order(strands, 2, cache=OrderCache(), enumerate_always=True) == braid_image_order(
            strands, 2, cache=OrderCache()
        )


def test_relative_index_examples():
    cache = OrderCache()
    assert relative_index(BraidWord(2, (1,)), 2, cache=cache) == 1
    assert relative_index(BraidWord(2, (1, 1)), 2, cache=cache) == 2
    assert relative_index(identity(3), 3, cache=cache) == braid_image_order(3, 3, cache=cache)


def test_cyclic_order_divides_the_image_order():
    cache = OrderCache()
    rng = random.Random(1)
    for _ in range(50):
        word = BraidWord(3, tuple(rng.choice([1, -1]) * rng.randint(1, 2) for _ in range(rng.randint(1, 7))))
        for modulus in (2, 3, 5):
            ambient = braid_image_order(3, modulus, cache=cache)
            assert ambient % matrix_order(reduce_mod(symplectic(word), modulus)) == 0
            assert relative_index(word, modulus, cache=cache) >= 1


def test_relative_index_is_conjugation_invariant():
    cache = OrderCache()
    word = BraidWord(3, (1, -2))
    by = BraidWord(3, (2, 2, 1))
    for modulus in (2, 3):
        assert relative_index(word, modulus, cache=cache) == relative_index(conjugate(word, by), modulus, cache=cache)


def test_sl_order():
    assert sl_order(2, 2) == 6
    assert sl_order(2, 3) == 24
    assert sl_order(3, 2) == 168
