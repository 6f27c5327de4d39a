"""Optimized pattern orderings built three independent ways.

The same milestone structure can be produced by the streaming pipeline
(cheap), by the classical search that extends every lower-resolution basis
to the display size and looks its rows up in the big matrix (expensive,
kept as an oracle), and by pure index arithmetic on the Sylvester row
layout.  Tests cross-validate all three at every resolution milestone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, InternalInconsistencyError, ShapeError
from .pipeline import Traversal, generate
from .signmatrix import (
    DEFAULT_ENTRY_LIMIT,
    Convention,
    HadamardMatrix,
    Pattern,
    SignMatrix,
    build_hadamard,
    kron,
    reshape_row,
    upscale,
)


class OrderingScheme(enum.Enum):
    NATURAL = "natural"
    MPCGI = "mpcgi"
    RUSSIAN_DOLLS = "rd"


class Provenance(enum.Enum):
    PIPELINE = "pipeline"
    THDC_SEARCH = "thdc-search"
    INDEX_EXTRACTION = "index-extraction"


@dataclass
class PatternSequence:
    """Ordered patterns at a common display resolution."""

    scheme: OrderingScheme
    display_side: int
    items: list[Pattern]
    provenance: Provenance | None = None
    convention: Convention | None = None

    def __post_init__(self):
        for p in self.items:
            if p.side != self.display_side:
                raise ShapeError(
                    f"pattern side {p.side} differs from display side {self.display_side}")

    def __len__(self):
        return len(self.items)

    def prefix(self, n: int) -> "PatternSequence":
        if not 1 <= n <= len(self.items):
            raise ContractError(f"prefix length {n} outside 1..{len(self.items)}")
        return PatternSequence(self.scheme, self.display_side, self.items[:n],
                               self.provenance, self.convention)

    def dense_stack(self) -> np.ndarray:
        """All patterns as one (count, side, side) int8 array."""
        return np.stack([p.dense() for p in self.items])


@dataclass
class RowPermutation:
    """Permutation of the 1-based rows of an order-2^K Hadamard matrix."""

    order_n: int
    indices: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        self.indices = tuple(int(i) for i in self.indices)
        if sorted(self.indices) != list(range(1, self.order_n + 1)):
            raise ContractError(f"indices are not a permutation of 1..{self.order_n}")


def scheme_milestones(scheme: OrderingScheme, level: int) -> list[int]:
    """Prefix lengths at which the scheme promises a complete basis."""
    if scheme is OrderingScheme.MPCGI:
        return [4 ** t for t in range(level + 1)]
    if scheme is OrderingScheme.RUSSIAN_DOLLS:
        return [2 ** j for j in range(2 * level + 1)]
    return [4 ** level]


def natural_sequence(level: int, convention: Convention = Convention.LEFT,
                     entry_limit=DEFAULT_ENTRY_LIMIT) -> PatternSequence:
    """Reshaped rows of the order-4^level matrix in construction order."""
    h = build_hadamard(2 * level, convention, entry_limit)
    items = [reshape_row(h, m) for m in range(1, 4 ** level + 1)]
    return PatternSequence(OrderingScheme.NATURAL, 2 ** level, items,
                           provenance=None, convention=convention)


def _pipeline_sequence(level, scheme, entry_limit):
    side = 2 ** level
    items = [upscale(p, side, entry_limit)
             for p in generate(level, Traversal.BREADTH_FIRST, entry_limit)]
    return PatternSequence(scheme, side, items, Provenance.PIPELINE)


def mpcgi_sequence(level: int, entry_limit=DEFAULT_ENTRY_LIMIT) -> PatternSequence:
    """Level-major pipeline order; the prefix of length 4^t is a complete
    basis for images constant on 2^(level-t) square blocks."""
    return _pipeline_sequence(level, OrderingScheme.MPCGI, entry_limit)


def rd_sequence(level: int, entry_limit=DEFAULT_ENTRY_LIMIT) -> PatternSequence:
    """Nested ordering with the fixed rule order 1,2,3,4 inside every
    expansion; prefixes of length 2*4^t additionally complete the
    vertically refined (taller-block) spaces between square resolutions."""
    return _pipeline_sequence(level, OrderingScheme.RUSSIAN_DOLLS, entry_limit)


def match_rows(haystack: HadamardMatrix, needles: SignMatrix) -> list[int]:
    """1-based haystack row index of every needle row, by exact sign
    equality.  Every needle must match exactly one row."""
    if needles.cols != haystack.order:
        raise ShapeError(
            f"needle width {needles.cols} differs from haystack order {haystack.order}")
    lookup = {}
    dup = set()
    hay = haystack.body.dense()
    for i in range(haystack.order):
        key = hay[i].tobytes()
        if key in lookup:
            dup.add(key)
        lookup[key] = i + 1
    found = []
    nee = needles.dense()
    for j in range(needles.rows):
        key = nee[j].tobytes()
        if key in dup:
            raise InternalInconsistencyError(f"needle row {j + 1} matches multiple rows")
        if key not in lookup:
            raise InternalInconsistencyError(f"needle row {j + 1} matches no row")
        found.append(lookup[key])
    return found


def _hadamard_chain(max_k, entry_limit):
    """SignMatrix bodies of H_1, H_2, ..., H_{2^max_k}, each allocated once."""
    chain = [SignMatrix(np.array([[1]], dtype=np.int8))]
    if max_k >= 1:
        chain.append(SignMatrix(np.array([[1, 1], [1, -1]], dtype=np.int8)))
    for k in range(2, max_k + 1):
        chain.append(kron(chain[1], chain[k - 1], entry_limit))
    return chain


def _stage_factors(k):
    """Row-axis and column-axis factor exponents of the order-2^k nested
    basis: square at even k, one extra row refinement at odd k."""
    t = k // 2
    return (t + 1, t) if k % 2 else (t, t)


def _extended_rows(chain, ra, rb, fa, fb, entry_limit):
    """The order-2^(ra+rb) pattern basis grown to the display size by
    constant blocks and flattened to row vectors, one matrix per stage."""
    dense = np.kron(np.repeat(chain[ra].dense(), fa, axis=1),
                    np.repeat(chain[rb].dense(), fb, axis=1))
    return SignMatrix(dense, entry_limit=entry_limit)


def thdc_permutation(K: int, scheme: OrderingScheme,
                     entry_limit=DEFAULT_ENTRY_LIMIT) -> RowPermutation:
    """Classical ordering search over the rows of the order-2^K matrix.

    Every nested lower-resolution basis (each order for Russian Dolls, even
    orders for MPCGI) is extended to the display size by the constant-block
    direct product, flattened to full-width row vectors, found in the big
    matrix by exact search, and front-ranked smallest basis first with a
    stable partition.  Between square resolutions the nesting refines rows
    first, matching the fixed-rule pipeline, so prefix spans agree with the
    pipeline sequences at every milestone.
    """
    if scheme is OrderingScheme.MPCGI and K % 2:
        raise ContractError("MPCGI ordering needs an even matrix order exponent")
    if scheme is OrderingScheme.NATURAL:
        return RowPermutation(2 ** K, tuple(range(1, 2 ** K + 1)))
    if K == 0:
        return RowPermutation(1, (1,))
    a_bits, b_bits = (K + 1) // 2, K // 2
    step = 2 if scheme is OrderingScheme.MPCGI else 1
    stages = list(range(K - step, -1, -step))
    chain = _hadamard_chain(max(a_bits, 1), entry_limit)
    top = HadamardMatrix(kron(chain[a_bits], chain[b_bits], entry_limit),
                         Convention.LEFT)
    perm = list(range(1, 2 ** K + 1))
    for k in stages:
        ra, rb = _stage_factors(k)
        needles = _extended_rows(chain, ra, rb,
                                 1 << (a_bits - ra), 1 << (b_bits - rb),
                                 entry_limit)
        matched = set(match_rows(top, needles))
        if len(matched) != 2 ** k:
            raise InternalInconsistencyError(
                f"stage 2^{k} matched {len(matched)} rows, expected {2 ** k}")
        perm = [m for m in perm if m in matched] + [m for m in perm if m not in matched]
    return RowPermutation(2 ** K, tuple(perm))


def _thdc_order(level, scheme, entry_limit):
    perm = thdc_permutation(2 * level, scheme, entry_limit)
    h = build_hadamard(2 * level, Convention.LEFT, entry_limit)
    items = [reshape_row(h, m) for m in perm.indices]
    seq = PatternSequence(scheme, 2 ** level, items, Provenance.THDC_SEARCH)
    return perm, seq


def thdc_mpcgi_order(level: int, entry_limit=DEFAULT_ENTRY_LIMIT):
    """Search-built MPCGI ordering of the order-4^level rows, with the
    reshaped pattern sequence."""
    return _thdc_order(level, OrderingScheme.MPCGI, entry_limit)


def thdc_rd_order(level: int, entry_limit=DEFAULT_ENTRY_LIMIT):
    """Search-built Russian-Dolls ordering (all lower orders, odd included)."""
    return _thdc_order(level, OrderingScheme.RUSSIAN_DOLLS, entry_limit)


def odd_row_extract(h: HadamardMatrix, steps: int = 1) -> HadamardMatrix:
    """Rows 1, 1+2^steps, 1+2*2^steps, ... with columns compressed by the
    same factor reproduce the order-(N/2^steps) matrix bit-exactly.

    Both convention tags are accepted because the two recursions build the
    same matrix; the compression check still guards against inputs that are
    not Sylvester-ordered.
    """
    if steps < 1:
        raise ContractError("steps must be at least 1")
    f = 2 ** steps
    if h.order < f:
        raise ContractError(f"order {h.order} too small for {steps} extraction steps")
    dense = h.body.dense()
    sel = dense[::f]
    runs = sel.reshape(sel.shape[0], h.order // f, f)
    if not (runs == runs[:, :, :1]).all():
        raise InternalInconsistencyError(
            "selected rows are not constant on stretched runs; "
            "input is not a Sylvester-ordered Hadamard matrix")
    return HadamardMatrix(SignMatrix(runs[:, :, 0]), h.convention)


def index_ordering(K: int, scheme: OrderingScheme) -> RowPermutation:
    """Ordering permutation from index arithmetic alone, no search.

    A 0-based row index splits into row-axis and column-axis halves
    (a, b) = (i >> (K//2), i mod 2^(K//2)); the row belongs to the order-2^k
    nested basis when a and b are divisible by that resolution's block
    factors (rows refining first at odd k).  Ranking rows by their smallest
    containing basis (even k only for MPCGI) while preserving natural order
    inside each rank reproduces the search result exactly.
    """
    if scheme is OrderingScheme.NATURAL:
        return RowPermutation(2 ** K, tuple(range(1, 2 ** K + 1)))
    if scheme is OrderingScheme.MPCGI and K % 2:
        raise ContractError("MPCGI ordering needs an even matrix order exponent")
    even_only = scheme is OrderingScheme.MPCGI
    a_bits, b_bits = (K + 1) // 2, K // 2

    def trailing_zeros(x, width):
        return width if x == 0 else (x & -x).bit_length() - 1

    def group(i):
        a, b = i >> b_bits, i & ((1 << b_bits) - 1)
        za = trailing_zeros(a, a_bits)
        zb = trailing_zeros(b, b_bits)
        even_k = 2 * max(a_bits - za, b_bits - zb)
        if even_only:
            return even_k
        odd_k = 1 + 2 * max(a_bits - za - 1, b_bits - zb)
        return min(even_k, odd_k)

    order = sorted(range(2 ** K), key=lambda i: (group(i), i))
    return RowPermutation(2 ** K, tuple(i + 1 for i in order))
