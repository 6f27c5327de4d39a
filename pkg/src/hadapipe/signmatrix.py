"""Sign matrices, Sylvester-Hadamard construction, and reshaping helpers.

Entries are stored one sign per bit (bit 1 means +1), packed row-major with
most-significant-bit-first byte layout, so in-memory storage matches the
HPC1 file format and the bit-per-entry figures of the memory model.  Dense
int8 views are materialized on demand for arithmetic.

All public row and pattern indices are 1-based; internal storage is 0-based.
"""

from __future__ import annotations

import enum

import numpy as np

from . import counting
from .errors import (
    ContractError,
    IndexRangeError,
    ResourceLimitError,
    ShapeError,
)

# Hard cap on stored entries for any single matrix, so oversized requests
# fail predictably instead of exhausting memory.  Override per call.
DEFAULT_ENTRY_LIMIT = 1 << 26


def _check_entry_budget(entries, entry_limit, what):
    if entry_limit is not None and entries > entry_limit:
        raise ResourceLimitError(
            f"{what} would hold {entries} entries, over the limit {entry_limit}")


class Convention(enum.Enum):
    """Recursion direction of the Kronecker construction.

    LEFT doubles as H_2 (x) H, RIGHT as H (x) H_2.  Both directions produce
    bit-identical matrices (the Kronecker product is associative, and every
    factor is the same H_2), so the tag is recorded metadata rather than a
    behavioural switch.
    """

    LEFT = "left"
    RIGHT = "right"


class SignMatrix:
    """Dense rectangular matrix with entries in {+1, -1}, bit-packed."""

    __slots__ = ("rows", "cols", "_bits")

    def __init__(self, dense, entry_limit=DEFAULT_ENTRY_LIMIT):
        arr = np.asarray(dense)
        if arr.ndim != 2 or arr.size == 0:
            raise ShapeError("sign matrix must be a non-empty 2D array")
        _check_entry_budget(arr.size, entry_limit, "sign matrix")
        plus = arr == 1
        if not (plus | (arr == -1)).all():
            raise ShapeError("sign matrix entries must be exactly +1 or -1")
        self.rows, self.cols = arr.shape
        self._bits = np.packbits(plus)
        counting.record_alloc(self.entry_count)

    @classmethod
    def from_packed(cls, rows, cols, packed):
        """Rebuild from packed bits (row-major, MSB first, bit 1 = +1)."""
        need = (rows * cols + 7) // 8
        buf = np.frombuffer(bytes(packed), dtype=np.uint8)
        if buf.size != need:
            raise ShapeError(f"packed buffer holds {buf.size} bytes, need {need}")
        self = cls.__new__(cls)
        self.rows, self.cols = rows, cols
        self._bits = buf.copy()
        # zero the padding so equality can compare raw bytes
        pad = need * 8 - rows * cols
        if pad:
            self._bits[-1] &= (0xFF << pad) & 0xFF
        counting.record_alloc(self.entry_count)
        return self

    @property
    def entry_count(self):
        return self.rows * self.cols

    @property
    def packed_bits(self) -> bytes:
        return self._bits.tobytes()

    def dense(self):
        """Entries as an int8 array of +1/-1."""
        bits = np.unpackbits(self._bits, count=self.entry_count)
        return (bits.astype(np.int8) * 2 - 1).reshape(self.rows, self.cols)

    def dense_row(self, i):
        """0-based single row as int8, without unpacking the whole matrix."""
        if self.cols % 8 == 0:
            nb = self.cols // 8
            bits = np.unpackbits(self._bits[i * nb:(i + 1) * nb])
            return bits.astype(np.int8) * 2 - 1
        return self.dense()[i]

    @property
    def is_all_plus(self):
        bits = np.unpackbits(self._bits, count=self.entry_count)
        return bool(bits.all())

    def __eq__(self, other):
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and self._bits.tobytes() == other._bits.tobytes())

    def __hash__(self):
        return hash((self.rows, self.cols, self._bits.tobytes()))

    def __repr__(self):
        return f"SignMatrix({self.rows}x{self.cols})"


class HadamardMatrix:
    """Square Sylvester-type Hadamard matrix of order 2^k."""

    __slots__ = ("order", "body", "convention")

    def __init__(self, body: SignMatrix, convention: Convention):
        if body.rows != body.cols:
            raise ShapeError("Hadamard matrix must be square")
        if body.rows & (body.rows - 1):
            raise ShapeError("Hadamard order must be a power of two")
        self.order = body.rows
        self.body = body
        self.convention = convention

    def __repr__(self):
        return f"HadamardMatrix(order={self.order}, {self.convention.value})"


class Pattern:
    """Square illumination pattern with its generation lineage.

    ``rule_path`` records the expansion rules that produced the pattern from
    the all-ones seed, oldest rule first; it is None for patterns that came
    from reshaped matrix rows or from files.  Equality and hashing compare
    the sign content only, so pipeline output can be matched against
    reshaped rows regardless of provenance.
    """

    __slots__ = ("body", "level", "rule_path")

    def __init__(self, body: SignMatrix, level: int, rule_path=None):
        if body.rows != body.cols:
            raise ShapeError("pattern must be square")
        if body.rows & (body.rows - 1):
            raise ShapeError("pattern side must be a power of two")
        self.body = body
        self.level = level
        self.rule_path = None if rule_path is None else tuple(rule_path)

    @property
    def side(self):
        return self.body.rows

    @property
    def entry_count(self):
        return self.body.entry_count

    def dense(self):
        return self.body.dense()

    def __eq__(self, other):
        if not isinstance(other, Pattern):
            return NotImplemented
        return self.body == other.body

    def __hash__(self):
        return hash(self.body)

    def __repr__(self):
        return f"Pattern(side={self.side}, level={self.level}, rule_path={self.rule_path})"


_H2 = np.array([[1, 1], [1, -1]], dtype=np.int8)


def kron(a: SignMatrix, b: SignMatrix, entry_limit=DEFAULT_ENTRY_LIMIT) -> SignMatrix:
    """Kronecker product of two sign matrices."""
    entries = a.entry_count * b.entry_count
    _check_entry_budget(entries, entry_limit, "Kronecker product")
    return SignMatrix(np.kron(a.dense(), b.dense()), entry_limit=entry_limit)


def build_hadamard(k: int, convention: Convention = Convention.LEFT,
                   entry_limit=DEFAULT_ENTRY_LIMIT) -> HadamardMatrix:
    """Order-2^k Hadamard matrix via the iterated Kronecker product."""
    if k < 0:
        raise ContractError("k must be nonnegative")
    _check_entry_budget(4 ** k, entry_limit, f"Hadamard matrix of order 2^{k}")
    dense = np.array([[1]], dtype=np.int8)
    for _ in range(k):
        if convention is Convention.LEFT:
            dense = np.kron(_H2, dense).astype(np.int8)
        else:
            dense = np.kron(dense, _H2).astype(np.int8)
    return HadamardMatrix(SignMatrix(dense, entry_limit=entry_limit), convention)


def verify_hadamard(h: HadamardMatrix) -> bool:
    """Exact integer check of body * body^T == order * identity."""
    b = h.body.dense().astype(np.int64)
    gram = b @ b.T
    return bool(np.array_equal(gram, h.order * np.eye(h.order, dtype=np.int64)))


def reshape_row(h: HadamardMatrix, m: int) -> Pattern:
    """Reshape the 1-based row m of H_{2^k} (k even) into a square pattern,
    row-major."""
    k = h.order.bit_length() - 1
    if k % 2:
        raise ShapeError(f"order 2^{k} has no square reshape; k must be even")
    if not 1 <= m <= h.order:
        raise IndexRangeError(f"row index {m} outside 1..{h.order}")
    p = 1 << (k // 2)
    row = h.body.dense_row(m - 1).reshape(p, p)
    return Pattern(SignMatrix(row), level=k // 2, rule_path=None)


def stretch_columns(m: SignMatrix, f: int, entry_limit=DEFAULT_ENTRY_LIMIT) -> SignMatrix:
    """Repeat every entry f times along rows (Kronecker with an all-ones
    1 x f block)."""
    if f < 1:
        raise ContractError("stretch factor must be positive")
    _check_entry_budget(m.entry_count * f, entry_limit, "stretched matrix")
    return SignMatrix(np.repeat(m.dense(), f, axis=1), entry_limit=entry_limit)


def upscale(p: Pattern, target_side: int, entry_limit=DEFAULT_ENTRY_LIMIT) -> Pattern:
    """Grow a pattern to target_side by constant square blocks, keeping its
    lineage metadata."""
    if target_side % p.side:
        raise ShapeError(f"target side {target_side} not divisible by {p.side}")
    f = target_side // p.side
    if f == 1:
        return p
    _check_entry_budget(target_side * target_side, entry_limit, "upscaled pattern")
    d = np.repeat(np.repeat(p.dense(), f, axis=0), f, axis=1)
    return Pattern(SignMatrix(d, entry_limit=entry_limit), p.level, p.rule_path)
