"""Finite images of the braid group in ``SL(k, Z_N)`` and relative indices.

The cyclic subgroup generated by a cascade braid has an image whose order is a
matrix order, so :func:`relative_index` never enumerates it.  The image of the
whole braid group is enumerated by breadth-first closure, except at ``N = 2``
where ``t = -1 ≡ 1`` turns every generator into a transposition matrix and the
image is the symmetric group.
"""
from __future__ import annotations

import dataclasses
import logging
import math
import threading
from collections import deque
from typing import Dict, FrozenSet, List, Optional, Protocol, Sequence, Tuple

from .braid import BraidWord
from .burau import IntMatrix, symplectic
from .errors import BraidError, ConsistencyError, ResourceLimitError

logger = logging.getLogger(__name__)

DEFAULT_ELEMENT_CAP = 10_000_000


@dataclasses.dataclass(frozen=True)
class ModMatrix:
    """Square matrix with entries in ``{0..N-1}``."""

    modulus: int
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise BraidError(f"modulus must be at least 2, got {self.modulus}")
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise BraidError("modular matrix must be square")
        rows = tuple(tuple(int(x) % self.modulus for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, size: int, modulus: int) -> "ModMatrix":
        return cls(modulus, tuple(tuple(1 if i == j else 0 for j in range(size)) for i in range(size)))

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        if other.modulus != self.modulus or other.size != self.size:
            raise BraidError("modular matrices differ in size or modulus")
        return ModMatrix(self.modulus, _mul(self.rows, other.rows, self.modulus))

    def key(self) -> int:
        """Row-major digits read in base ``N``: a canonical hashable encoding."""
        return encode(self.rows, self.modulus)

    def determinant(self) -> int:
        return IntMatrix(self.rows).determinant() % self.modulus

    def is_identity(self) -> bool:
        return all(x == (1 if i == j else 0) for i, r in enumerate(self.rows) for j, x in enumerate(r))


def _mul(a: Tuple[Tuple[int, ...], ...], b: Tuple[Tuple[int, ...], ...], modulus: int) -> Tuple[Tuple[int, ...], ...]:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % modulus for col in cols) for row in a)


def encode(rows: Sequence[Sequence[int]], modulus: int) -> int:
    value = 0
    for row in rows:
        for x in row:
            value = value * modulus + x
    return value


@dataclasses.dataclass(frozen=True)
class GroupClosure:
    """The finite group generated by a list of :class:`ModMatrix` values."""

    modulus: int
    size: int
    generators: Tuple[ModMatrix, ...]
    elements: FrozenSet[int]

    @property
    def count(self) -> int:
        return len(self.elements)

    def __contains__(self, matrix: ModMatrix) -> bool:
        return matrix.modulus == self.modulus and matrix.key() in self.elements


def reduce_mod(m: IntMatrix, modulus: int) -> ModMatrix:
    if modulus < 2:
        raise BraidError(f"modulus must be at least 2, got {modulus}")
    reduced = ModMatrix(modulus, m.rows)
    if reduced.determinant() != 1 % modulus:
        raise BraidError(f"matrix determinant is not 1 mod {modulus}")
    return reduced


def matrix_order(m: ModMatrix, cap: int = DEFAULT_ELEMENT_CAP) -> int:
    power = m
    order = 1
    while not power.is_identity():
        power = power @ m
        order += 1
        if order > cap:
            raise ResourceLimitError(f"matrix order exceeds the iteration limit mod {m.modulus}", cap)
    return order


def group_closure(generators: Sequence[ModMatrix], cap: int = DEFAULT_ELEMENT_CAP) -> GroupClosure:
    """Breadth-first closure of ``generators`` under right multiplication."""
    if not generators:
        raise BraidError("group closure needs at least one generator")
    modulus = generators[0].modulus
    size = generators[0].size
    if any(g.modulus != modulus or g.size != size for g in generators):
        raise BraidError("generators differ in size or modulus")
    for g in generators:
        if math.gcd(g.determinant(), modulus) != 1:
            raise BraidError("generator is not invertible")

    gen_rows = [g.rows for g in generators]
    start = ModMatrix.identity(size, modulus).rows
    seen = {encode(start, modulus)}
    frontier = deque([start])
    while frontier:
        current = frontier.popleft()
        for g in gen_rows:
            product = _mul(current, g, modulus)
            key = encode(product, modulus)
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > cap:
                raise ResourceLimitError(
                    f"group closure of {len(generators)} generators in SL({size}, Z_{modulus}) is too large", cap
                )
            frontier.append(product)
    logger.debug("closure in SL(%d, Z_%d): %d elements", size, modulus, len(seen))
    return GroupClosure(modulus=modulus, size=size, generators=tuple(generators), elements=frozenset(seen))


def generator_images(strands: int, modulus: int) -> List[ModMatrix]:
    return [reduce_mod(symplectic(BraidWord(strands, (i,))), modulus) for i in range(1, strands)]


class OrderStore(Protocol):
    def get(self, strands: int, modulus: int) -> Optional[int]:
        ...

    def set(self, strands: int, modulus: int, order: int) -> None:
        ...


class OrderCache:
    """In-memory memo of image orders keyed by ``(k, N)``; many readers, one writer."""

    def __init__(self, entries: Optional[Dict[Tuple[int, int], int]] = None) -> None:
        self._entries: Dict[Tuple[int, int], int] = dict(entries or {})
        self._lock = threading.Lock()

    def get(self, strands: int, modulus: int) -> Optional[int]:
        return self._entries.get((strands, modulus))

    def set(self, strands: int, modulus: int, order: int) -> None:
        with self._lock:
            self._entries.setdefault((strands, modulus), order)

    def items(self) -> List[Tuple[Tuple[int, int], int]]:
        with self._lock:
            return sorted(self._entries.items())

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, OrderCache) and self.items() == other.items()


_DEFAULT_CACHE = OrderCache()


def braid_image_order(
    strands: int,
    modulus: int,
    cache: Optional[OrderStore] = None,
    cap: int = DEFAULT_ELEMENT_CAP,
    enumerate_always: bool = False,
) -> int:
    """Order of the image of ``B_strands`` in ``SL(strands, Z_modulus)``."""
    if modulus < 2:
        raise BraidError(f"modulus must be at least 2, got {modulus}")
    if strands < 1:
        raise BraidError(f"strand count must be positive, got {strands}")
    if strands == 1:
        return 1
    store = _DEFAULT_CACHE if cache is None else cache
    cached = store.get(strands, modulus)
    if cached is not None and not enumerate_always:
        return cached
    if modulus == 2 and not enumerate_always:
        order = math.factorial(strands)
    else:
        order = group_closure(generator_images(strands, modulus), cap=cap).count
    store.set(strands, modulus, order)
    return order


def relative_index(
    word: BraidWord,
    modulus: int,
    cache: Optional[OrderStore] = None,
    cap: int = DEFAULT_ELEMENT_CAP,
) -> int:
    """Index of the cyclic image of ``⟨word⟩`` inside the image of the full braid group."""
    if modulus < 2:
        raise BraidError(f"modulus must be at least 2, got {modulus}")
    ambient = braid_image_order(word.strands, modulus, cache=cache, cap=cap)
    if word.strands == 1:
        return ambient
    cyclic = matrix_order(reduce_mod(symplectic(word), modulus), cap=cap)
    index, rest = divmod(ambient, cyclic)
    if rest:
        raise ConsistencyError(
            f"cyclic order {cyclic} does not divide image order {ambient} (k={word.strands}, N={modulus})"
        )
    return index


def sl_order(size: int, modulus: int) -> int:
    """``|SL(size, Z_N)|`` via the prime-power factorisation of ``N``."""
    total = 1
    remaining = modulus
    p = 2
    while remaining > 1:
        if remaining % p == 0:
            e = 0
            while remaining % p == 0:
                remaining //= p
                e += 1
            gl = 1
            for i in range(size):
                gl *= p ** size - p ** i
            total *= (gl // (p - 1)) * p ** ((e - 1) * (size * size - 1))
        p += 1
    return total


__all__ = [
    "DEFAULT_ELEMENT_CAP",
    "GroupClosure",
    "ModMatrix",
    "OrderCache",
    "OrderStore",
    "braid_image_order",
    "encode",
    "generator_images",
    "group_closure",
    "matrix_order",
    "reduce_mod",
    "relative_index",
    "sl_order",
]
