"""Braid words, their permutations, inclusions and period-doubling cabling.

A braid word is stored as a tuple of signed generator indices: ``+i`` stands for
``σ_i`` and ``-i`` for ``σ_i⁻¹`` (1-based, as in the usual ``σ_i`` notation).
Equality of :class:`BraidWord` values is equality of letter sequences; deciding
whether two words are the same group element is the job of
:mod:`route_invariants.ordering`.
"""
from __future__ import annotations

import dataclasses
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import BraidError


@dataclasses.dataclass(frozen=True)
class BraidWord:
    """A word in the Artin generators of ``B_n`` together with its strand count."""

    strands: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 1:
            raise BraidError(f"strand count must be positive, got {self.strands}")
        letters = tuple(int(x) for x in self.letters)
        for letter in letters:
            if letter == 0 or abs(letter) > self.strands - 1:
                raise BraidError(
                    f"generator {letter} out of range for {self.strands} strands"
                )
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_braid(self)

    @property
    def is_empty(self) -> bool:
        return not self.letters


@dataclasses.dataclass(frozen=True)
class Permutation:
    """A bijection of ``{1..n}`` stored as its image tuple.

    For a braid, ``images[q - 1]`` is the starting position of the strand that
    finishes at position ``q``.  With this convention the permutation of a word
    is the functional composition ``τ_{i1} ∘ τ_{i2} ∘ …`` of its transpositions,
    so ``permutation(compose(a, b)) == permutation(a) * permutation(b)``.
    """

    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise BraidError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Functional composition: ``(self * other)(x) == self(other(x))``."""
        if other.size != self.size:
            raise BraidError("cannot compose permutations of different sizes")
        return Permutation(tuple(self(other(x)) for x in range(1, self.size + 1)))

    def inverse(self) -> "Permutation":
        result = [0] * self.size
        for source, target in enumerate(self.images, start=1):
            result[target - 1] = source
        return Permutation(tuple(result))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Return the cycles, each starting at its smallest element."""
        seen = set()
        cycles: List[Tuple[int, ...]] = []
        for start in range(1, self.size + 1):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            point = self(start)
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self(point)
            cycles.append(tuple(cycle))
        return cycles

    def cycle_type(self) -> Tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        from math import lcm

        result = 1
        for cycle in self.cycles():
            result = lcm(result, len(cycle))
        return result


def identity(strands: int) -> BraidWord:
    return BraidWord(strands, ())


def _check_same_strands(a: BraidWord, b: BraidWord) -> None:
    if a.strands != b.strands:
        raise BraidError(f"strand mismatch: {a.strands} != {b.strands}")


def compose(a: BraidWord, b: BraidWord) -> BraidWord:
    """Concatenate ``a`` then ``b`` (no cancellation)."""
    _check_same_strands(a, b)
    return BraidWord(a.strands, a.letters + b.letters)


def compose_all(words: Iterable[BraidWord], strands: Optional[int] = None) -> BraidWord:
    words = list(words)
    if not words:
        if strands is None:
            raise BraidError("cannot compose an empty list without a strand count")
        return identity(strands)
    result = words[0]
    for word in words[1:]:
        result = compose(result, word)
    return result


def power(a: BraidWord, exponent: int) -> BraidWord:
    if exponent < 0:
        return power(inverse(a), -exponent)
    return BraidWord(a.strands, a.letters * exponent)


def inverse(a: BraidWord) -> BraidWord:
    return BraidWord(a.strands, tuple(-x for x in reversed(a.letters)))


def free_reduce(a: BraidWord) -> BraidWord:
    """Cancel adjacent ``σ_i σ_i⁻¹`` pairs until none remain."""
    stack: List[int] = []
    for letter in a.letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return BraidWord(a.strands, tuple(stack))


def permutation(a: BraidWord) -> Permutation:
    """Return the permutation induced on strand positions (signs ignored)."""
    # Track which starting position currently sits at each final position.
    occupant = list(range(1, a.strands + 1))
    for letter in a.letters:
        i = abs(letter) - 1
        occupant[i], occupant[i + 1] = occupant[i + 1], occupant[i]
    return Permutation(tuple(occupant))


def exponent_sum(a: BraidWord) -> int:
    return sum(1 if x > 0 else -1 for x in a.letters)


def include(a: BraidWord, strands: int) -> BraidWord:
    """Return ``a`` viewed in ``B_strands`` through the standard inclusion."""
    if strands < a.strands:
        raise BraidError(f"cannot include B_{a.strands} into B_{strands}")
    return BraidWord(strands, a.letters)


def conjugate(a: BraidWord, by: BraidWord) -> BraidWord:
    """Return ``by · a · by⁻¹``."""
    return compose_all([by, a, inverse(by)])


def pd_cable(a: BraidWord, twist: int) -> BraidWord:
    """Period-doubling cable of ``a``.

    Every strand is doubled; a letter ``σ_i^s`` becomes the block
    ``σ_{2i}^s σ_{2i-1}^s σ_{2i+1}^s σ_{2i}^s`` that carries the pair
    ``{2i-1, 2i}`` across the pair ``{2i+1, 2i+2}``.  A final half-twist
    ``σ_1^twist`` joins the two copies of the first strand.
    """
    if twist not in (1, -1):
        raise BraidError(f"twist must be +1 or -1, got {twist}")
    letters: List[int] = []
    for letter in a.letters:
        sign = 1 if letter > 0 else -1
        i = abs(letter)
        letters.extend(sign * g for g in (2 * i, 2 * i - 1, 2 * i + 1, 2 * i))
    letters.append(twist)
    return BraidWord(2 * a.strands, tuple(letters))


def pair_collapse(strands: int) -> Mapping[int, int]:
    """Map positions ``2j-1`` and ``2j`` of a doubled braid to position ``j``."""
    return {q: (q + 1) // 2 for q in range(1, 2 * strands + 1)}


def parse_braid(text: str, strands: int) -> BraidWord:
    """Parse whitespace separated signed integers, e.g. ``"-1 2"``."""
    tokens = text.split()
    try:
        letters = tuple(int(tok) for tok in tokens)
    except ValueError as exc:
        raise BraidError(f"bad braid word {text!r}: {exc}") from exc
    return BraidWord(strands, letters)


def format_braid(a: BraidWord) -> str:
    return " ".join(str(x) for x in a.letters)


def max_strands(words: Sequence[BraidWord]) -> int:
    if not words:
        raise BraidError("empty braid list")
    return max(w.strands for w in words)


__all__ = [
    "BraidWord",
    "Permutation",
    "compose",
    "compose_all",
    "conjugate",
    "exponent_sum",
    "format_braid",
    "free_reduce",
    "identity",
    "include",
    "inverse",
    "max_strands",
    "pair_collapse",
    "parse_braid",
    "pd_cable",
    "permutation",
    "power",
]
