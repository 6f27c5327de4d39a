"""Runtime invariant suites behind the `verify` command.

Each check re-derives an expected result by brute force (reshaped natural
rows, block projectors, instrumented counters) and compares the library's
output against it, scaled down so the whole suite stays interactive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .memory import measure_generate, measure_thdc_search, nhpc_cost, thdc_cost
from .ordering import (
    OrderingScheme,
    index_ordering,
    mpcgi_sequence,
    natural_sequence,
    rd_sequence,
    thdc_permutation,
)
from .ordering import odd_row_extract
from .pipeline import Traversal, count_level, count_total, generate, natural_row_index
from .signmatrix import Convention, build_hadamard, upscale, verify_hadamard
from .simulate import ObjectImage, acquire, correlation_first_term, reconstruct
from . import io as hio


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _check(name, cond, detail=""):
    return CheckResult(name, bool(cond), "" if cond else detail)


def _orthogonality(level):
    ks = range(0, min(2 * level, 10) + 1)
    ok = all(verify_hadamard(build_hadamard(k, conv))
             for k in ks for conv in (Convention.LEFT, Convention.RIGHT))
    same = all(build_hadamard(k, Convention.LEFT).body ==
               build_hadamard(k, Convention.RIGHT).body for k in ks)
    return [_check("hadamard orthogonality", ok, "some order failed the Gram check"),
            _check("convention identity", same, "recursion directions disagree")]


def _pipeline_counts(level):
    per_level = {}
    total = 0
    for p in generate(level):
        per_level[p.level] = per_level.get(p.level, 0) + 1
        total += 1
    ok = (total == count_total(level)
          and all(per_level.get(t, 0) == count_level(t) for t in range(level + 1)))
    return [_check("pipeline emission counts", ok, f"got {per_level}")]


def _central_theorem(level):
    side = 2 ** level
    ours = {upscale(p, side) for p in generate(level)}
    nat = set(natural_sequence(level).items)
    return [_check("pipeline output equals reshaped rows", ours == nat,
                   f"{len(ours)} generated vs {len(nat)} natural patterns")]


def _block_gram(level, bh, bw):
    n = 2 ** level
    scale = 4 ** level // (bh * bw)
    idx = np.arange(n * n)
    x, y = idx // n, idx % n
    same = ((x[:, None] // bh == x[None, :] // bh)
            & (y[:, None] // bw == y[None, :] // bw))
    return scale * same.astype(np.int64)


def _prefix_gram(seq, n):
    vs = [p.dense().astype(np.int64).ravel() for p in seq.items[:n]]
    g = np.zeros((len(vs[0]), len(vs[0])), dtype=np.int64)
    for v in vs:
        g += np.outer(v, v)
    return g


def _milestones(level):
    l = min(level, 4)
    if l == 0:
        return [_check("ordering milestones", True)]
    results = []
    mp = mpcgi_sequence(l)
    rd = rd_sequence(l)
    ok = True
    for t in range(l + 1):
        blk = 2 ** (l - t)
        if not np.array_equal(_prefix_gram(mp, 4 ** t), _block_gram(l, blk, blk)):
            ok = False
    for t in range(l):
        if not np.array_equal(_prefix_gram(rd, 2 * 4 ** t),
                              _block_gram(l, 2 ** (l - t - 1), 2 ** (l - t))):
            ok = False
    results.append(_check("pipeline milestone spans", ok, "a prefix span mismatched"))
    same = (thdc_permutation(2 * l, OrderingScheme.MPCGI).indices
            == index_ordering(2 * l, OrderingScheme.MPCGI).indices
            and thdc_permutation(2 * l, OrderingScheme.RUSSIAN_DOLLS).indices
            == index_ordering(2 * l, OrderingScheme.RUSSIAN_DOLLS).indices)
    results.append(_check("search and index orderings agree", same,
                          "permutation mismatch"))
    pipe_rows = [natural_row_index(p.rule_path, l) for p in generate(l)]
    rd_perm = thdc_permutation(2 * l, OrderingScheme.RUSSIAN_DOLLS)
    agree = all(set(pipe_rows[:2 ** j]) == set(rd_perm.indices[:2 ** j])
                for j in range(2 * l + 1))
    results.append(_check("pipeline and search prefixes agree at milestones", agree,
                          "prefix sets differ"))
    return results


def _odd_rows(level):
    ok = True
    for k in range(1, min(2 * level, 10) + 1):
        h = build_hadamard(k, Convention.RIGHT)
        if not odd_row_extract(h, 1).body == build_hadamard(k - 1, Convention.RIGHT).body:
            ok = False
    return [_check("odd-row extraction", ok, "extraction disagreed with direct build")]


def _reconstruction(level):
    l = max(min(level, 4), 1)
    rng = np.random.default_rng(20240 + l)
    obj = ObjectImage(rng.integers(0, 256, size=(2 ** l, 2 ** l)))
    seq = mpcgi_sequence(l)
    records = acquire(seq, obj)
    first = correlation_first_term(records, seq, len(records))
    exact = np.array_equal(first, obj.pixels.astype(np.float64))
    rec = reconstruct(records, seq)
    finite = np.isfinite(rec.values).all()
    return [_check("full-sampling first term reproduces the object", exact),
            _check("reconstruction values finite", finite)]


def _memory(level):
    l = max(min(level, 5), 1)
    depth = measure_generate(l, Traversal.DEPTH_FIRST).peak_entries
    breadth = measure_generate(l, Traversal.BREADTH_FIRST).peak_entries
    census = measure_thdc_search(2 * l).total_entries
    ok_d = depth == nhpc_cost(2 * l, Traversal.DEPTH_FIRST).high_order_entries
    ok_b = breadth == nhpc_cost(2 * l, Traversal.BREADTH_FIRST).high_order_entries
    ok_t = census == thdc_cost(2 * l).total_entries
    return [_check("measured pipeline peaks match the model", ok_d and ok_b,
                   f"depth {depth}, breadth {breadth}"),
            _check("measured search census matches the model", ok_t,
                   f"census {census} vs {thdc_cost(2 * l).total_entries}")]


def _roundtrip(level):
    import io as stdio
    l = min(level, 4)
    seq = mpcgi_sequence(l)
    buf = stdio.BytesIO()
    hio.write_patterns(seq, buf)
    buf.seek(0)
    back = hio.read_patterns(buf)
    ok = (back.scheme == seq.scheme and back.display_side == seq.display_side
          and back.items == seq.items)
    return [_check("HPC1 round trip", ok)]


def run_suite(level: int) -> list[CheckResult]:
    """All invariant checks, scaled to the requested level."""
    results = []
    results += _orthogonality(level)
    results += _pipeline_counts(level)
    results += _central_theorem(level)
    results += _milestones(level)
    results += _odd_rows(level)
    results += _reconstruction(level)
    results += _memory(level)
    results += _roundtrip(level)
    return results
