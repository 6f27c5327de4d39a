"""Computational ghost imaging: bucket acquisition and correlation
reconstruction.

Reconstruction follows the differential correlation

    O(x,y) = <B I(x,y)> - <B><I(x,y)>,   <.> = (1/M) sum over measurements,

with the +1/-1 patterns themselves as illumination.  Buckets are exact
integers while noise is off; the correlation sums run in float64 in fixed
sequence order so repeated runs agree bit for bit.  Gaussian noise draws
come from numpy's PCG64 seeded per record as (seed, record index), which
makes records independent of acquisition order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ContractError, ShapeError
from .ordering import PatternSequence
from .signmatrix import Pattern


class ObjectImage:
    """Square reflectance map, side a power of two, values 0..65535."""

    __slots__ = ("side", "pixels")

    def __init__(self, pixels):
        arr = np.asarray(pixels)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ShapeError("object image must be square")
        side = arr.shape[0]
        if side & (side - 1) or side == 0:
            raise ShapeError("object side must be a power of two")
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.equal(np.mod(arr, 1), 0).all():
                raise ShapeError("object pixels must be integers")
            arr = arr.astype(np.int64)
        if arr.min() < 0 or arr.max() > 65535:
            raise ShapeError("object pixels must lie in 0..65535")
        self.side = side
        self.pixels = arr.astype(np.uint16)

    def __repr__(self):
        return f"ObjectImage(side={self.side})"


@dataclass(frozen=True)
class GaussianNoise:
    """Additive bucket noise, seeded and portable (numpy PCG64)."""

    sigma: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ContractError("noise sigma must be nonnegative")


@dataclass(frozen=True)
class MeasurementRecord:
    m: int            # 1-based measurement index
    bucket: float     # exact integer when noise is off


@dataclass
class Reconstruction:
    side: int
    values: np.ndarray
    used_m: int


class QualityMetrics(NamedTuple):
    mse: float
    psnr_db: float
    pearson: float    # NaN when either side has zero variance


def bucket(p: Pattern, o: ObjectImage) -> int:
    """Differential bucket value: signed sum of the object under the
    +1/-1 pattern, exact."""
    if p.side != o.side:
        raise ShapeError(f"pattern side {p.side} differs from object side {o.side}")
    return int(np.sum(p.dense().astype(np.int64) * o.pixels.astype(np.int64)))


def bucket_binary_pair(p: Pattern, o: ObjectImage) -> tuple[int, int]:
    """Bucket values of the two complementary binary masks realizing the
    pattern on on/off hardware; their difference equals bucket(p, o)."""
    if p.side != o.side:
        raise ShapeError(f"pattern side {p.side} differs from object side {o.side}")
    d = p.dense()
    px = o.pixels.astype(np.int64)
    b_plus = int(px[d == 1].sum())
    b_minus = int(px[d == -1].sum())
    return b_plus, b_minus


def _noise_draw(noise: GaussianNoise, m: int) -> float:
    return float(np.random.default_rng((noise.seed, m)).normal(0.0, noise.sigma))


def acquire(seq: PatternSequence, o: ObjectImage,
            noise: GaussianNoise | None = None) -> list[MeasurementRecord]:
    """One measurement per pattern, in sequence order."""
    if seq.display_side != o.side:
        raise ShapeError(
            f"sequence side {seq.display_side} differs from object side {o.side}")
    add_noise = noise is not None and noise.sigma > 0
    records = []
    for m, p in enumerate(seq.items, start=1):
        b = bucket(p, o)
        if add_noise:
            b = b + _noise_draw(noise, m)
        records.append(MeasurementRecord(m, b))
    return records


def _accumulate(records, seq, use_m):
    if use_m < 1:
        raise ContractError("reconstruction needs at least one measurement")
    if use_m > len(records):
        raise ContractError(f"prefix {use_m} exceeds {len(records)} records")
    side = seq.display_side
    bi_sum = np.zeros((side, side), dtype=np.float64)
    i_sum = np.zeros((side, side), dtype=np.float64)
    b_sum = 0.0
    for idx in range(use_m):
        pat = seq.items[idx].dense().astype(np.float64)
        b = float(records[idx].bucket)
        bi_sum += b * pat
        i_sum += pat
        b_sum += b
    return bi_sum, b_sum, i_sum


def correlation_first_term(records, seq: PatternSequence, use_m: int) -> np.ndarray:
    """The <B I(x,y)> term alone.  With a full orthogonal sequence and no
    noise it reproduces the object exactly; with a milestone prefix it
    equals the scaled block average (see block_average)."""
    bi_sum, _, _ = _accumulate(records, seq, use_m)
    return bi_sum / use_m


def reconstruct(records, seq: PatternSequence, use_m: int | None = None) -> Reconstruction:
    """Differential correlation reconstruction from the first use_m records."""
    if use_m is None:
        use_m = len(records)
    bi_sum, b_sum, i_sum = _accumulate(records, seq, use_m)
    values = bi_sum / use_m - (b_sum / use_m) * (i_sum / use_m)
    return Reconstruction(seq.display_side, values, use_m)


def block_average(o: ObjectImage, bh: int, bw: int) -> np.ndarray:
    """Each pixel replaced by the mean over its bh x bw block."""
    s = o.side
    if bh < 1 or bw < 1 or s % bh or s % bw:
        raise ShapeError(f"block {bh}x{bw} does not tile a {s}x{s} image")
    px = o.pixels.astype(np.float64)
    means = px.reshape(s // bh, bh, s // bw, bw).mean(axis=(1, 3))
    return np.repeat(np.repeat(means, bh, axis=0), bw, axis=1)


def progressive(seq: PatternSequence, o: ObjectImage, milestones,
                noise: GaussianNoise | None = None) -> list[Reconstruction]:
    """Reconstructions at several prefix lengths from a single acquisition."""
    ms = list(milestones)
    if not ms:
        raise ContractError("need at least one milestone")
    if any(b <= a for a, b in zip(ms, ms[1:])):
        raise ContractError("milestones must be strictly ascending")
    if ms[0] < 1 or ms[-1] > len(seq.items):
        raise ContractError("milestones outside the sequence length")
    records = acquire(seq, o, noise)
    return [reconstruct(records, seq, m) for m in ms]


def metrics(r: Reconstruction, ref: ObjectImage) -> QualityMetrics:
    """Affine-fit MSE, PSNR from the fitted error (peak = max reference
    value), and Pearson correlation of the raw values.

    Pearson is NaN, not an exception, when either image has zero variance.
    """
    if r.side != ref.side:
        raise ShapeError(f"reconstruction side {r.side} differs from reference {ref.side}")
    x = r.values.astype(np.float64).ravel()
    y = ref.pixels.astype(np.float64).ravel()
    var_x = float(np.var(x))
    if var_x > 0:
        a = float(np.cov(x, y, bias=True)[0, 1]) / var_x
    else:
        a = 0.0
    b = float(np.mean(y)) - a * float(np.mean(x))
    mse = float(np.mean((a * x + b - y) ** 2))
    peak = float(y.max())
    if mse == 0.0:
        psnr = math.inf
    elif peak == 0.0:
        psnr = -math.inf
    else:
        psnr = 10.0 * math.log10(peak * peak / mse)
    var_y = float(np.var(y))
    if var_x == 0.0 or var_y == 0.0:
        pearson = math.nan
    else:
        pearson = float(np.corrcoef(x, y)[0, 1])
    return QualityMetrics(mse, psnr, pearson)
