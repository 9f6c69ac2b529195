"""Left-invariant braid ordering by handle reduction.

A ``σ_i``-handle is a subword ``σ_i^e w σ_i^-e`` where ``w`` only uses
generators of index greater than ``i``.  Reducing it replaces every
``σ_{i+1}^d`` in ``w`` by ``σ_{i+1}^-e σ_i^d σ_{i+1}^e`` and drops the two
ends.  The handle whose right end is leftmost never contains a nested
``σ_{i+1}``-handle, so reducing it first is always permitted.

A handle-free word is empty, or its lowest-index generator occurs with one
sign only; ``a < b`` exactly when ``a⁻¹b`` reduces to a word whose lowest
generator occurs positively.
"""
from __future__ import annotations

import enum
import functools
from typing import List, Optional, Sequence, Tuple

from .braid import BraidWord, compose, include, inverse, max_strands
from .errors import BraidError, ResourceLimitError

DEFAULT_REDUCTION_CAP = 1_000_000


class ComparisonResult(enum.Enum):
    LESS = "LESS"
    EQUAL = "EQUAL"
    GREATER = "GREATER"

    def flipped(self) -> "ComparisonResult":
        if self is ComparisonResult.LESS:
            return ComparisonResult.GREATER
        if self is ComparisonResult.GREATER:
            return ComparisonResult.LESS
        return self


def _leftmost_handle(letters: Sequence[int]) -> Optional[Tuple[int, int]]:
    # For each closing position j look back for an opening letter of the
    # same index and opposite sign, skipping only higher-index letters.
    for j in range(1, len(letters)):
        index = abs(letters[j])
        for p in range(j - 1, -1, -1):
            other = abs(letters[p])
            if other > index:
                continue
            if other == index and letters[p] == -letters[j]:
                return p, j
            break
    return None


def _reduce_handle(letters: List[int], start: int, end: int) -> List[int]:
    opening = letters[start]
    index = abs(opening)
    e = 1 if opening > 0 else -1
    middle: List[int] = []
    for letter in letters[start + 1 : end]:
        if abs(letter) == index + 1:
            d = 1 if letter > 0 else -1
            middle.extend((-e * (index + 1), d * index, e * (index + 1)))
        else:
            middle.append(letter)
    return letters[:start] + middle + letters[end + 1 :]


def _free_cancel(letters: List[int]) -> List[int]:
    stack: List[int] = []
    for letter in letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return stack


def handle_reduce(word: BraidWord, cap: int = DEFAULT_REDUCTION_CAP) -> BraidWord:
    """Return a handle-free word representing the same braid."""
    letters = _free_cancel(list(word.letters))
    steps = 0
    while True:
        handle = _leftmost_handle(letters)
        if handle is None:
            return BraidWord(word.strands, tuple(letters))
        steps += 1
        if steps > cap:
            raise ResourceLimitError("handle reduction did not finish", cap)
        letters = _free_cancel(_reduce_handle(letters, *handle))


def sign_of_reduced(word: BraidWord) -> int:
    """``+1``/``-1`` for a σ-positive/σ-negative handle-free word, ``0`` if empty."""
    if not word.letters:
        return 0
    lowest = min(abs(x) for x in word.letters)
    signs = {x > 0 for x in word.letters if abs(x) == lowest}
    if len(signs) != 1:
        raise BraidError("word is not handle-free")
    return 1 if signs.pop() else -1


def compare(a: BraidWord, b: BraidWord, cap: int = DEFAULT_REDUCTION_CAP) -> ComparisonResult:
    if a.strands != b.strands:
        raise BraidError(f"strand mismatch: {a.strands} != {b.strands}; include() both first")
    sign = sign_of_reduced(handle_reduce(compose(inverse(a), b), cap=cap))
    if sign == 0:
        return ComparisonResult.EQUAL
    return ComparisonResult.LESS if sign > 0 else ComparisonResult.GREATER


def is_trivial(word: BraidWord, cap: int = DEFAULT_REDUCTION_CAP) -> bool:
    return not handle_reduce(word, cap=cap).letters


def are_equal(a: BraidWord, b: BraidWord, cap: int = DEFAULT_REDUCTION_CAP) -> bool:
    """Group-element equality after including both words into the larger ``B_n``."""
    n = max(a.strands, b.strands)
    return compare(include(a, n), include(b, n), cap=cap) is ComparisonResult.EQUAL


def sort_braids(words: Sequence[BraidWord], cap: int = DEFAULT_REDUCTION_CAP) -> List[BraidWord]:
    """Stable ascending sort; words are first included into the largest strand count."""
    if not words:
        return []
    n = max_strands(words)
    lifted = [include(w, n) for w in words]

    def _cmp(x: BraidWord, y: BraidWord) -> int:
        result = compare(x, y, cap=cap)
        return -1 if result is ComparisonResult.LESS else (1 if result is ComparisonResult.GREATER else 0)

    return sorted(lifted, key=functools.cmp_to_key(_cmp))


__all__ = [
    "ComparisonResult",
    "DEFAULT_REDUCTION_CAP",
    "are_equal",
    "compare",
    "handle_reduce",
    "is_trivial",
    "sign_of_reduced",
    "sort_braids",
]
