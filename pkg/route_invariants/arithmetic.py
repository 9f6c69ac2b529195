"""Index sequences turned into continued fractions, p-adic digits and trace lists."""
from __future__ import annotations

import dataclasses
import decimal
import functools
import math
from concurrent.futures import Executor
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .braid import BraidWord, include, max_strands
from .burau import trace_at
from .errors import BraidError
from .ordering import ComparisonResult, compare


DECIMAL_DIGITS = 30


@dataclasses.dataclass(frozen=True)
class IndexSequence:
    terms: Tuple[int, ...]

    def __post_init__(self) -> None:
        terms = tuple(int(x) for x in self.terms)
        if any(x < 1 for x in terms):
            raise BraidError(f"index terms must be positive, got {terms}")
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return len(self.terms)

    def truncate(self, depth: int) -> "IndexSequence":
        return IndexSequence(self.terms[:depth])


@dataclasses.dataclass(frozen=True)
class Convergents:
    """Exact convergents ``p_n / q_n`` of a finite continued fraction."""

    numerators: Tuple[int, ...]
    denominators: Tuple[int, ...]

    @property
    def fractions(self) -> List[Fraction]:
        return [Fraction(p, q) for p, q in zip(self.numerators, self.denominators)]

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerators[-1], self.denominators[-1])

    def decimal(self, digits: int = DECIMAL_DIGITS) -> str:
        with decimal.localcontext() as ctx:
            ctx.prec = digits
            return str(decimal.Decimal(self.numerators[-1]) / decimal.Decimal(self.denominators[-1]))

    def to_json(self) -> List[List[str]]:
        return [[str(p), str(q)] for p, q in zip(self.numerators, self.denominators)]


@dataclasses.dataclass(frozen=True)
class PadicDigits:
    prime: int
    digits: Tuple[int, ...]
    partial_sum: int

    def to_json(self) -> dict:
        return {"p": self.prime, "digits": list(self.digits), "sum": str(self.partial_sum)}


def continued_fraction(seq: IndexSequence) -> Convergents:
    if not seq.terms:
        raise BraidError("continued fraction of an empty sequence")
    p_prev, p = 1, seq.terms[0]
    q_prev, q = 0, 1
    numerators = [p]
    denominators = [q]
    for c in seq.terms[1:]:
        p_prev, p = p, c * p + p_prev
        q_prev, q = q, c * q + q_prev
        numerators.append(p)
        denominators.append(q)
    return Convergents(tuple(numerators), tuple(denominators))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % f for f in range(3, math.isqrt(n) + 1, 2))


def padic_expand(seq: IndexSequence, prime: int) -> PadicDigits:
    if not is_prime(prime):
        raise BraidError(f"p-adic expansion needs a prime, got {prime}")
    if not seq.terms:
        raise BraidError("p-adic expansion of an empty sequence")
    digits = tuple(c % prime for c in seq.terms)
    total = sum(d * prime ** i for i, d in enumerate(digits))
    return PadicDigits(prime=prime, digits=digits, partial_sum=total)


def eventual_period(digits: Sequence[int]) -> Optional[Tuple[int, int]]:
    """Shortest period, then shortest pre-period, visible in the truncated digits.

    A candidate counts only if its period repeats at least twice inside the
    truncation; the result describes the truncation and proves nothing about
    rationality.
    """
    n = len(digits)
    for period in range(1, n // 2 + 1):
        for pre in range(0, n - 2 * period + 1):
            tail = digits[pre:]
            if all(tail[i] == tail[i + period] for i in range(len(tail) - period)):
                return pre, period
    return None


def trace_invariant(
    braids: Sequence[BraidWord], t0: complex, executor: Optional[Executor] = None
) -> List[complex]:
    if t0 == 0:
        raise BraidError("trace invariant needs a nonzero t")
    if executor is None:
        return [trace_at(b, t0) for b in braids]
    return list(executor.map(trace_at, braids, [t0] * len(braids)))


def route_index_sequence(per_cascade: Sequence[Tuple[str, Sequence[Tuple[BraidWord, int]]]]) -> IndexSequence:
    """Merge cascades' ``(braid, c)`` lists into one sequence ordered by the braids.

    Braids are included into the largest strand count first.  Ties between
    equal braids fall back to ``(cascade id, position)``, so the result does not
    depend on the order in which cascades are listed.
    """
    entries = [
        (cid, pos, word, c) for cid, items in per_cascade for pos, (word, c) in enumerate(items)
    ]
    if not entries:
        raise BraidError("route index sequence needs at least one braid")
    n = max_strands([word for _, _, word, _ in entries])
    entries.sort(key=lambda e: (e[0], e[1]))
    lifted = [(include(word, n), c) for _, _, word, c in entries]

    def _cmp(x: Tuple[BraidWord, int], y: Tuple[BraidWord, int]) -> int:
        result = compare(x[0], y[0])
        if result is ComparisonResult.LESS:
            return -1
        return 1 if result is ComparisonResult.GREATER else 0

    lifted.sort(key=functools.cmp_to_key(_cmp))
    return IndexSequence(tuple(c for _, c in lifted))


__all__ = [
    "Convergents",
    "DECIMAL_DIGITS",
    "IndexSequence",
    "PadicDigits",
    "continued_fraction",
    "eventual_period",
    "is_prime",
    "padic_expand",
    "route_index_sequence",
    "trace_invariant",
]
