"""Shared brute-force oracles, kept independent of the package internals."""

import numpy as np
import pytest

H2 = np.array([[1, 1], [1, -1]], dtype=np.int8)


def sylvester(k):
    """Plain numpy Kronecker chain, the reference for all constructions."""
    h = np.array([[1]], dtype=np.int8)
    for _ in range(k):
        h = np.kron(H2, h).astype(np.int8)
    return h


def reshaped_row_set(level):
    """Byte keys of every row of the order-4^level matrix reshaped square."""
    h = sylvester(2 * level)
    side = 2 ** level
    return {h[m].reshape(side, side).tobytes() for m in range(4 ** level)}


def gram_of(dense_patterns):
    """Integer sum of vec(P) vec(P)^T over the given dense patterns."""
    n = dense_patterns[0].size
    g = np.zeros((n, n), dtype=np.int64)
    for p in dense_patterns:
        v = p.astype(np.int64).ravel()
        g += np.outer(v, v)
    return g


def block_gram(level, bh, bw):
    """The same integer scale of the projector onto images constant on
    bh x bw pixel blocks: (4^level / (bh*bw)) times the same-block indicator."""
    n = 2 ** level
    scale = 4 ** level // (bh * bw)
    idx = np.arange(n * n)
    x, y = idx // n, idx % n
    same = ((x[:, None] // bh == x[None, :] // bh)
            & (y[:, None] // bw == y[None, :] // bw))
    return scale * same.astype(np.int64)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
