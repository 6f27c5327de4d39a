"""File formats: the HPC1 pattern container, PGM/PBM images, CSV tables.

HPC1 layout (16-byte header, little-endian):

    offset 0   magic  b"HPC1"
    offset 4   version, 1
    offset 5   convention: 0 left, 1 right, 2 not applicable (pipeline)
    offset 6   scheme: 0 natural, 1 mpcgi, 2 rd
    offset 7   reserved, 0
    offset 8   side, u32
    offset 12  count, u32

followed by count patterns, each side*side bits packed row-major with the
most significant bit first, bit 1 meaning +1, padded to a byte boundary per
pattern.  All writers are deterministic: identical inputs give byte-identical
files.
"""

from __future__ import annotations

import csv
import struct
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .errors import FormatError, ShapeError
from .ordering import OrderingScheme, PatternSequence, RowPermutation
from .signmatrix import Convention, Pattern, SignMatrix
from .simulate import ObjectImage

MAGIC = b"HPC1"
VERSION = 1

_CONV_CODE = {Convention.LEFT: 0, Convention.RIGHT: 1, None: 2}
_CODE_CONV = {0: Convention.LEFT, 1: Convention.RIGHT, 2: None}
_SCHEME_CODE = {OrderingScheme.NATURAL: 0, OrderingScheme.MPCGI: 1,
                OrderingScheme.RUSSIAN_DOLLS: 2}
_CODE_SCHEME = {v: k for k, v in _SCHEME_CODE.items()}


@contextmanager
def _open_bytes(target, mode):
    if isinstance(target, (str, Path)):
        with open(target, mode) as fh:
            yield fh
    else:
        yield target


def write_patterns(seq: PatternSequence, sink) -> None:
    """Serialize a pattern sequence to HPC1. sink is a path or a binary
    file object."""
    side = seq.display_side
    count = len(seq.items)
    if count > side * side:
        raise ShapeError(f"{count} patterns exceed side^2 = {side * side}")
    out = bytearray()
    out += MAGIC
    out += bytes([VERSION, _CONV_CODE[seq.convention], _SCHEME_CODE[seq.scheme], 0])
    out += struct.pack("<II", side, count)
    for p in seq.items:
        if p.side != side:
            raise ShapeError("sequence is not homogeneous in side")
        out += p.body.packed_bits
    with _open_bytes(sink, "wb") as fh:
        fh.write(bytes(out))


def read_patterns(source) -> PatternSequence:
    """Parse an HPC1 file back into a PatternSequence.  Lineage metadata is
    not stored, so patterns come back with an empty rule path."""
    with _open_bytes(source, "rb") as fh:
        data = fh.read()
    if len(data) < 16:
        raise FormatError("truncated header", offset=len(data))
    if data[:4] != MAGIC:
        raise FormatError(f"bad magic {data[:4]!r}", offset=0)
    if data[4] != VERSION:
        raise FormatError(f"unsupported version {data[4]}", offset=4)
    if data[5] not in _CODE_CONV:
        raise FormatError(f"unknown convention code {data[5]}", offset=5)
    if data[6] not in _CODE_SCHEME:
        raise FormatError(f"unknown scheme code {data[6]}", offset=6)
    if data[7] != 0:
        raise FormatError(f"reserved byte is {data[7]}", offset=7)
    side, count = struct.unpack_from("<II", data, 8)
    if side == 0 or side & (side - 1):
        raise FormatError(f"side {side} is not a power of two", offset=8)
    if count > side * side:
        raise FormatError(f"count {count} exceeds side^2", offset=12)
    nbytes = (side * side + 7) // 8
    body = data[16:]
    if len(body) != count * nbytes:
        good = min(len(body) // nbytes, count)
        raise FormatError(
            f"payload holds {len(body)} bytes, expected {count * nbytes}",
            offset=16 + good * nbytes)
    level = side.bit_length() - 1
    items = []
    for i in range(count):
        packed = body[i * nbytes:(i + 1) * nbytes]
        items.append(Pattern(SignMatrix.from_packed(side, side, packed), level, None))
    return PatternSequence(_CODE_SCHEME[data[6]], side, items,
                           provenance=None, convention=_CODE_CONV[data[5]])


def write_pgm(target, pixels, maxval=None) -> None:
    """Binary P5 image.  Two bytes per sample, big-endian, above maxval 255."""
    arr = np.asarray(pixels)
    if arr.ndim != 2:
        raise ShapeError("PGM payload must be 2D")
    if not np.issubdtype(arr.dtype, np.integer):
        raise ShapeError("PGM payload must be integer")
    if maxval is None:
        maxval = 255 if arr.max(initial=0) <= 255 else 65535
    if not 0 < maxval <= 65535:
        raise ShapeError(f"maxval {maxval} outside 1..65535")
    if arr.min(initial=0) < 0 or arr.max(initial=0) > maxval:
        raise ShapeError("pixels outside 0..maxval")
    h, w = arr.shape
    header = f"P5\n{w} {h}\n{maxval}\n".encode("ascii")
    if maxval <= 255:
        payload = arr.astype(np.uint8).tobytes()
    else:
        payload = arr.astype(">u2").tobytes()
    with _open_bytes(target, "wb") as fh:
        fh.write(header + payload)


def _pgm_tokens(data):
    """First three whitespace-separated header tokens after the magic,
    skipping comments; returns tokens and the payload offset."""
    pos = 2
    tokens = []
    while len(tokens) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if pos == start:
            raise FormatError("truncated PGM header", offset=pos)
        tokens.append(data[start:pos])
    return tokens, pos + 1  # single whitespace byte terminates the header


def read_pgm_array(source):
    """P5 payload as an int array, with its maxval.  No shape policy."""
    with _open_bytes(source, "rb") as fh:
        data = fh.read()
    if data[:2] == b"P2":
        raise FormatError("ASCII PGM (P2) is not supported; use binary P5", offset=0)
    if data[:2] != b"P5":
        raise FormatError(f"not a PGM file (magic {data[:2]!r})", offset=0)
    tokens, payload_at = _pgm_tokens(data)
    try:
        w, h, maxval = (int(t) for t in tokens)
    except ValueError:
        raise FormatError("non-numeric PGM header field", offset=2) from None
    if w <= 0 or h <= 0 or not 0 < maxval <= 65535:
        raise FormatError(f"bad PGM dimensions {w}x{h} maxval {maxval}", offset=2)
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    need = w * h * dtype.itemsize
    payload = data[payload_at:payload_at + need]
    if len(payload) != need:
        raise FormatError(f"payload holds {len(payload)} bytes, expected {need}",
                          offset=payload_at + len(payload))
    arr = np.frombuffer(payload, dtype=dtype).reshape(h, w).astype(np.int64)
    return arr, maxval


def read_pgm(source) -> ObjectImage:
    """Read a target object: square, power-of-two side."""
    arr, _ = read_pgm_array(source)
    h, w = arr.shape
    if h != w or h & (h - 1):
        raise FormatError(f"object must be square with power-of-two side, got {w}x{h}")
    return ObjectImage(arr)


def write_pbm(target, p: Pattern) -> None:
    """Binary P4 bitmap of one pattern; bit 1 (black) marks +1 entries."""
    bits = (p.dense() == 1).astype(np.uint8)
    payload = np.packbits(bits, axis=1).tobytes()
    header = f"P4\n{p.side} {p.side}\n".encode("ascii")
    with _open_bytes(target, "wb") as fh:
        fh.write(header + payload)


def _open_text(target):
    if isinstance(target, (str, Path)):
        return open(target, "w", newline="")
    return target


def write_permutation_csv(perm: RowPermutation, target) -> None:
    fh = _open_text(target)
    try:
        w = csv.writer(fh)
        w.writerow(["row_index"])
        for m in perm.indices:
            w.writerow([m])
    finally:
        if fh is not target:
            fh.close()


def write_metrics_csv(rows, target) -> None:
    """rows: iterables of (prefix_length, sampling_ratio, mse, psnr_db, pearson)."""
    fh = _open_text(target)
    try:
        w = csv.writer(fh)
        w.writerow(["prefix_length", "sampling_ratio", "mse", "psnr_db", "pearson"])
        for row in rows:
            w.writerow(list(row))
    finally:
        if fh is not target:
            fh.close()


def write_values_csv(values, target) -> None:
    """Raw reconstruction values as a CSV grid with a column header row."""
    arr = np.asarray(values)
    fh = _open_text(target)
    try:
        w = csv.writer(fh)
        w.writerow([f"col_{j}" for j in range(arr.shape[1])])
        for row in arr:
            w.writerow([repr(float(v)) for v in row])
    finally:
        if fh is not target:
            fh.close()


def write_rescale_csv(rows, target) -> None:
    """Affine pairs mapping PGM levels back to raw values:
    value = level * scale + offset."""
    fh = _open_text(target)
    try:
        w = csv.writer(fh)
        w.writerow(["prefix_length", "scale", "offset"])
        for row in rows:
            w.writerow(list(row))
    finally:
        if fh is not target:
            fh.close()


def write_bench_csv(rows, target) -> None:
    fh = _open_text(target)
    try:
        w = csv.writer(fh)
        w.writerow(["K", "thdc_total", "nhpc_breadth_peak", "nhpc_depth_peak",
                    "measured_breadth_peak", "measured_depth_peak",
                    "measured_thdc_total"])
        for r in rows:
            w.writerow([r.K, r.thdc_total, r.nhpc_breadth_peak, r.nhpc_depth_peak,
                        "" if r.measured_breadth_peak is None else r.measured_breadth_peak,
                        "" if r.measured_depth_peak is None else r.measured_depth_peak,
                        "" if r.measured_thdc_total is None else r.measured_thdc_total])
    finally:
        if fh is not target:
            fh.close()
