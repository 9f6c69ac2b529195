"""Exact unreduced Burau representation and its specialisations.

Laurent polynomials in ``t`` have arbitrary-precision integer coefficients and
all matrix arithmetic over them is exact.  Floating point only appears in
:func:`evaluate`, :func:`trace_at` (away from ``t = -1``) and
:func:`spectral_log`.
"""
from __future__ import annotations

import cmath
import dataclasses
import functools
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

from .braid import BraidWord
from .errors import BraidError, ConsistencyError

EIGEN_TOLERANCE = 1e-9

Number = Union[int, float, complex]


@dataclasses.dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial stored as sorted ``(exponent, coefficient)`` terms."""

    terms: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        merged: Dict[int, int] = {}
        for exp, coef in self.terms:
            merged[int(exp)] = merged.get(int(exp), 0) + int(coef)
        cleaned = tuple(sorted((e, c) for e, c in merged.items() if c != 0))
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def from_dict(cls, coefficients: Mapping[int, int]) -> "LaurentPoly":
        return cls(tuple(coefficients.items()))

    @classmethod
    def constant(cls, value: int) -> "LaurentPoly":
        return cls(((0, value),))

    @classmethod
    def monomial(cls, coefficient: int, exponent: int) -> "LaurentPoly":
        return cls(((exponent, coefficient),))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(self.terms + other.terms)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.terms or not other.terms:
            return ZERO
        product: Dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                product[e1 + e2] = product.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly.from_dict(product)

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent < 0:
            if len(self.terms) != 1 or abs(self.terms[0][1]) != 1:
                raise BraidError(f"{self} is not a unit in Z[t, 1/t]")
            (e, c), = self.terms
            # c = ±1, so c^k == c^|k|
            return LaurentPoly.monomial(c ** (-exponent), e * exponent)
        result = ONE
        for _ in range(exponent):
            result = result * self
        return result

    def degree_range(self) -> Tuple[int, int]:
        if not self.terms:
            raise BraidError("zero polynomial has no degree")
        return self.terms[0][0], self.terms[-1][0]

    def exact_div(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Divide exactly in ``Z[t, 1/t]``; raise if the division leaves a remainder."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return ZERO
        low_n, _ = self.degree_range()
        low_d, _ = divisor.degree_range()
        remainder = {e - low_n: c for e, c in self.terms}
        dcoefs = {e - low_d: c for e, c in divisor.terms}
        ddeg = max(dcoefs)
        lead = dcoefs[ddeg]
        quotient: Dict[int, int] = {}
        while remainder:
            top = max(remainder)
            if top < ddeg:
                raise ConsistencyError(f"{self} is not divisible by {divisor}")
            coef, rest = divmod(remainder[top], lead)
            if rest:
                raise ConsistencyError(f"{self} is not divisible by {divisor}")
            shift = top - ddeg
            quotient[shift] = coef
            for e, c in dcoefs.items():
                value = remainder.get(e + shift, 0) - coef * c
                if value:
                    remainder[e + shift] = value
                else:
                    remainder.pop(e + shift, None)
        return LaurentPoly(tuple((e + low_n - low_d, c) for e, c in quotient.items()))

    def evaluate(self, t0: Number) -> complex:
        if t0 == 0:
            raise BraidError("Laurent polynomials cannot be evaluated at t = 0")
        return complex(sum(c * (t0 ** e) for e, c in self.terms))

    def evaluate_int(self, t0: int) -> int:
        """Exact evaluation at a unit ``t0 = ±1``."""
        if t0 not in (1, -1):
            raise BraidError("exact integer evaluation needs t = ±1")
        return sum(c * (t0 ** (e % 2)) for e, c in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*t^{e}" for e, c in self.terms)

    def to_json(self) -> List[List[object]]:
        return [[e, str(c)] for e, c in self.terms]

    @classmethod
    def from_json(cls, data: Iterable[Sequence[object]]) -> "LaurentPoly":
        return cls(tuple((int(e), int(c)) for e, c in data))  # type: ignore[arg-type]


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
T = LaurentPoly.monomial(1, 1)
T_INV = LaurentPoly.monomial(1, -1)


@dataclasses.dataclass(frozen=True)
class LaurentMatrix:
    """Square matrix of :class:`LaurentPoly` entries."""

    rows: Tuple[Tuple[LaurentPoly, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        if any(len(row) != n for row in self.rows):
            raise BraidError("Laurent matrix must be square")

    @property
    def size(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if other.size != self.size:
            raise BraidError("matrix size mismatch")
        n = self.size
        cols = [[other.rows[k][j] for k in range(n)] for j in range(n)]
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = ZERO
                for a, b in zip(self.rows[i], cols[j]):
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return LaurentMatrix(tuple(rows))

    def trace(self) -> LaurentPoly:
        acc = ZERO
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return acc

    def to_json(self) -> List[List[List[List[object]]]]:
        return [[entry.to_json() for entry in row] for row in self.rows]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[Iterable[Sequence[object]]]]) -> "LaurentMatrix":
        return cls(tuple(tuple(LaurentPoly.from_json(entry) for entry in row) for row in data))


@dataclasses.dataclass(frozen=True)
class IntMatrix:
    """Square matrix of arbitrary-precision integers."""

    rows: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        n = self.size
        cols = list(zip(*other.rows))
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(self.rows[i], cols[j])) for j in range(n)) for i in range(n))
        )

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.size))

    def row_sums(self) -> Tuple[int, ...]:
        return tuple(sum(row) for row in self.rows)

    def determinant(self) -> int:
        """Bareiss fraction-free elimination."""
        m = [list(row) for row in self.rows]
        n = len(m)
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1] if n else 1

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)

    def to_json(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.rows]


def _check_index(n: int, i: int) -> None:
    if not 1 <= i <= n - 1:
        raise BraidError(f"generator index {i} out of range for {n} strands")


@functools.lru_cache(maxsize=None)
def burau_generator(n: int, i: int, sign: int) -> LaurentMatrix:
    """Unreduced Burau image of ``σ_i^sign`` in ``GL_n(Z[t, 1/t])``."""
    _check_index(n, i)
    if sign not in (1, -1):
        raise BraidError(f"sign must be ±1, got {sign}")
    if sign > 0:
        block = ((ONE - T, T), (ONE, ZERO))
    else:
        block = ((ZERO, ONE), (T_INV, ONE - T_INV))
    rows = [list(r) for r in LaurentMatrix.identity(n).rows]
    a = i - 1
    for r in range(2):
        for c in range(2):
            rows[a + r][a + c] = block[r][c]
    return LaurentMatrix(tuple(tuple(r) for r in rows))


def burau(word: BraidWord) -> LaurentMatrix:
    result = LaurentMatrix.identity(word.strands)
    for letter in word.letters:
        result = result @ burau_generator(word.strands, abs(letter), 1 if letter > 0 else -1)
    return result


def det_laurent(m: LaurentMatrix) -> LaurentPoly:
    """Exact determinant by Bareiss elimination over ``Z[t, 1/t]``."""
    rows = [list(r) for r in m.rows]
    n = len(rows)
    if n == 0:
        return ONE
    negate = False
    prev = ONE
    for k in range(n - 1):
        if rows[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not rows[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            rows[k], rows[swap] = rows[swap], rows[k]
            negate = not negate
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]).exact_div(prev)
        prev = rows[k][k]
    det = rows[n - 1][n - 1]
    return -det if negate else det


def _check_point(t0: Number) -> None:
    if t0 == 0:
        raise BraidError("evaluation point t must be nonzero")


def evaluate(m: LaurentMatrix, t0: Number) -> np.ndarray:
    _check_point(t0)
    return np.array([[entry.evaluate(t0) for entry in row] for row in m.rows], dtype=complex)


@functools.lru_cache(maxsize=4096)
def _generator_at(n: int, letter: int, t0: complex) -> np.ndarray:
    return evaluate(burau_generator(n, abs(letter), 1 if letter > 0 else -1), t0)


def evaluate_word(word: BraidWord, t0: Number) -> np.ndarray:
    """Numerical Burau matrix of ``word`` at ``t0`` (product of evaluated generators)."""
    _check_point(t0)
    t0 = complex(t0)
    result = np.eye(word.strands, dtype=complex)
    for letter in word.letters:
        result = result @ _generator_at(word.strands, letter, t0)
    return result


def trace_at(word: BraidWord, t0: Number) -> complex:
    """Trace of the Burau matrix of ``word`` at ``t0``; exact at ``t0 = -1``."""
    _check_point(t0)
    if complex(t0) == -1:
        return complex(symplectic(word).trace())
    return complex(np.trace(evaluate_word(word, t0)))


_SYMPLECTIC_BLOCKS = {1: ((2, -1), (1, 0)), -1: ((0, 1), (-1, 2))}


def _symplectic_generator(n: int, letter: int) -> IntMatrix:
    i = abs(letter)
    _check_index(n, i)
    block = _SYMPLECTIC_BLOCKS[1 if letter > 0 else -1]
    rows = [list(r) for r in IntMatrix.identity(n).rows]
    for r in range(2):
        for c in range(2):
            rows[i - 1 + r][i - 1 + c] = block[r][c]
    return IntMatrix(tuple(tuple(r) for r in rows))


def symplectic(word: BraidWord) -> IntMatrix:
    """Burau representation at ``t = -1`` as an exact integer matrix."""
    n = word.strands
    rows = [list(r) for r in IntMatrix.identity(n).rows]
    # Right multiplication by a generator only touches two columns.
    for letter in word.letters:
        i = abs(letter) - 1
        (p, q), (r, s) = _SYMPLECTIC_BLOCKS[1 if letter > 0 else -1]
        for row in rows:
            x, y = row[i], row[i + 1]
            row[i], row[i + 1] = x * p + y * r, x * q + y * s
    return IntMatrix(tuple(tuple(r) for r in rows))


def characteristic_polynomial(m: IntMatrix) -> List[int]:
    """Coefficients ``[1, c_{n-1}, …, c_0]`` of ``det(λI - m)`` (Faddeev–LeVerrier)."""
    n = m.size
    coefficients = [1]
    current = [[0] * n for _ in range(n)]
    previous_coef = 1
    rows = m.rows
    for k in range(1, n + 1):
        # current <- m @ current + previous_coef * I
        product = [[sum(rows[i][l] * current[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            product[i][i] += previous_coef
        current = product
        am = sum(sum(rows[i][l] * current[l][i] for l in range(n)) for i in range(n))
        coef, rest = divmod(-am, k)
        if rest:
            raise ConsistencyError("non-integral characteristic polynomial coefficient")
        coefficients.append(coef)
        previous_coef = coef
    return coefficients


def _poly_trim(p: List[Fraction]) -> List[Fraction]:
    while p and p[0] == 0:
        p = p[1:]
    return p


def _poly_rem(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = list(a)
    while len(a) >= len(b) and a:
        factor = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= factor * b[i]
        a = _poly_trim(a)
    return a


def _poly_div(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = list(a)
    quotient: List[Fraction] = []
    while len(a) >= len(b):
        factor = a[0] / b[0]
        quotient.append(factor)
        for i in range(len(b)):
            a[i] -= factor * b[i]
        a = a[1:]
    return quotient


def squarefree_part(coefficients: Sequence[int]) -> List[Fraction]:
    """Return ``p / gcd(p, p')`` for an integer polynomial given high degree first."""
    p = [Fraction(c) for c in coefficients]
    degree = len(p) - 1
    if degree < 1:
        return p
    derivative = [c * (degree - i) for i, c in enumerate(p[:-1])]
    a, b = p, _poly_trim(derivative)
    while b:
        a, b = b, _poly_rem(a, b)
    if len(a) <= 1:
        return p
    return _poly_div(p, a)


def spectral_radius(m: IntMatrix) -> float:
    if m.size == 0:
        return 0.0
    reduced = squarefree_part(characteristic_polynomial(m))
    if len(reduced) <= 1:
        return 0.0
    roots = np.roots([float(c) for c in reduced])
    return float(np.max(np.abs(roots)))


def spectral_log(word: BraidWord) -> float:
    """``log`` of the spectral radius of :func:`symplectic`, floored at zero."""
    radius = spectral_radius(symplectic(word))
    if radius <= 1.0 + EIGEN_TOLERANCE:
        return 0.0
    return math.log(radius)


def unit_root(order: int) -> complex:
    return cmath.exp(2j * math.pi / order)


__all__ = [
    "EIGEN_TOLERANCE",
    "IntMatrix",
    "LaurentMatrix",
    "LaurentPoly",
    "ONE",
    "T",
    "T_INV",
    "ZERO",
    "burau",
    "burau_generator",
    "characteristic_polynomial",
    "det_laurent",
    "evaluate",
    "evaluate_word",
    "spectral_log",
    "spectral_radius",
    "squarefree_part",
    "symplectic",
    "trace_at",
    "unit_root",
]
