"""Streaming generator of two-dimensional Hadamard-derived patterns.

A single 1x1 all-ones seed is grown by four fixed quadruple-expansion rules,
each doubling the side and quadrupling the entry count:

    rule 1: [[+P, +P], [+P, +P]]      rule 2: [[+P, +P], [-P, -P]]
    rule 3: [[+P, -P], [+P, -P]]      rule 4: [[+P, -P], [-P, +P]]

Applying rule r is exactly the Kronecker product of the corresponding 2x2
sign block with the parent, so the full level-l output set equals the set of
row-reshaped patterns of the order-4^l Hadamard matrix (tested exhaustively).
Rule 1 fixes the constant pattern, so the constant parent only emits rules
2..4; that single suppression makes the emission counts 1, 3, 12, 48, ...
and keeps the output duplicate-free.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import counting
from .errors import ContractError, ResourceLimitError
from .signmatrix import DEFAULT_ENTRY_LIMIT, Pattern, SignMatrix

RULE_BLOCKS = {
    1: np.array([[1, 1], [1, 1]], dtype=np.int8),
    2: np.array([[1, 1], [-1, -1]], dtype=np.int8),
    3: np.array([[1, -1], [1, -1]], dtype=np.int8),
    4: np.array([[1, -1], [-1, 1]], dtype=np.int8),
}

# Row/column sign factors of each rule block, viewed as an outer product of
# (1,1) / (1,-1) vectors; used to map a rule path to a natural row index.
_ROW_BIT = {1: 0, 2: 1, 3: 0, 4: 1}
_COL_BIT = {1: 0, 2: 0, 3: 1, 4: 1}


class Traversal(enum.Enum):
    BREADTH_FIRST = "breadth"
    DEPTH_FIRST = "depth"


@dataclass
class LevelBatch:
    """All patterns of one pipeline level, in canonical order."""

    level: int
    patterns: list[Pattern]

    def __post_init__(self):
        expected = count_level(self.level)
        if self.level < 1:
            raise ContractError("level batches start at level 1")
        if len(self.patterns) != expected:
            raise ContractError(
                f"level {self.level} holds {expected} patterns, got {len(self.patterns)}")
        paths = {p.rule_path for p in self.patterns}
        if None in paths or len(paths) != expected:
            raise ContractError("level batch requires distinct rule paths")


def seed_pattern() -> Pattern:
    """The 1x1 all-ones pattern every lineage starts from."""
    return Pattern(SignMatrix(np.array([[1]], dtype=np.int8)), level=0, rule_path=())


def apply_rule(p: Pattern, rule: int, entry_limit=DEFAULT_ENTRY_LIMIT) -> Pattern:
    """One expansion step: side doubles, the rule index is appended to the
    lineage."""
    if rule not in RULE_BLOCKS:
        raise ContractError(f"rule must be 1..4, got {rule}")
    entries = 4 * p.entry_count
    if entry_limit is not None and entries > entry_limit:
        raise ResourceLimitError(
            f"expanded pattern would hold {entries} entries, over the limit {entry_limit}")
    dense = np.kron(RULE_BLOCKS[rule], p.dense()).astype(np.int8)
    path = None if p.rule_path is None else p.rule_path + (rule,)
    return Pattern(SignMatrix(dense, entry_limit=entry_limit), p.level + 1, path)


def _child_rules(p: Pattern):
    # rule 1 fixes the constant pattern; emitting it would duplicate the parent
    return (2, 3, 4) if p.body.is_all_plus else (1, 2, 3, 4)


def expand_level(batch: LevelBatch, entry_limit=DEFAULT_ENTRY_LIMIT) -> LevelBatch:
    """Children of every pattern in the batch, parent order then rule order
    1,2,3,4."""
    children = [apply_rule(p, r, entry_limit)
                for p in batch.patterns for r in (1, 2, 3, 4)]
    return LevelBatch(batch.level + 1, children)


def count_level(t: int) -> int:
    """Patterns emitted at level t: 1 for the seed, 3*4^(t-1) above it."""
    if t < 0:
        raise ContractError("level must be nonnegative")
    return 1 if t == 0 else 3 * 4 ** (t - 1)


def count_total(l: int) -> int:
    """Total patterns emitted through level l: 4^l."""
    if l < 0:
        raise ContractError("level must be nonnegative")
    return 4 ** l


def generate(level: int, traversal: Traversal = Traversal.BREADTH_FIRST,
             entry_limit=DEFAULT_ENTRY_LIMIT,
             level_budget=DEFAULT_ENTRY_LIMIT) -> Iterator[Pattern]:
    """Stream the 4^level patterns of the pipeline.

    Breadth-first yields whole levels in canonical sequence order (level-major,
    then parent order, then rule order) and keeps at most the current and the
    previous level alive.  Depth-first yields the same set in pre-order over
    the rule tree while holding only one lineage path, which is the
    low-memory mode; consumers that need sequence order must use
    breadth-first.
    """
    if level < 0:
        raise ContractError("level must be nonnegative")
    if traversal is Traversal.BREADTH_FIRST:
        return _generate_breadth(level, entry_limit, level_budget)
    return _generate_depth(level, entry_limit)


def _release(p: Pattern) -> None:
    counting.record_free(p.entry_count)


def _generate_breadth(level, entry_limit, level_budget):
    seed = seed_pattern()
    yield seed
    current = [seed]
    for t in range(1, level + 1):
        batch_entries = count_level(t) * 4 ** t
        if level_budget is not None and batch_entries > level_budget:
            raise ResourceLimitError(
                f"level {t} holds {batch_entries} entries, over the budget {level_budget}")
        children = [apply_rule(p, r, entry_limit)
                    for p in current for r in _child_rules(p)]
        for p in current:
            _release(p)
        yield from children
        current = children
    for p in current:
        _release(p)


def _generate_depth(level, entry_limit):
    def walk(p, t):
        yield p
        if t < level:
            for r in _child_rules(p):
                child = apply_rule(p, r, entry_limit)
                yield from walk(child, t + 1)
                _release(child)

    seed = seed_pattern()
    yield from walk(seed, 0)
    _release(seed)


def natural_row_index(rule_path, display_level: int) -> int:
    """1-based row of the order-4^display_level Hadamard matrix whose
    reshape equals this lineage upscaled to side 2^display_level.

    Each rule contributes one bit to the row-factor index and one to the
    column-factor index; upscaling appends all-ones factors, i.e. trailing
    zero bits.
    """
    t = len(rule_path)
    if t > display_level:
        raise ContractError("rule path longer than the display level")
    a = b = 0
    for i, r in enumerate(rule_path, start=1):
        if r not in RULE_BLOCKS:
            raise ContractError(f"rule must be 1..4, got {r}")
        shift = display_level - t - 1 + i
        a |= _ROW_BIT[r] << shift
        b |= _COL_BIT[r] << shift
    return a * 2 ** display_level + b + 1


def canonical_position(rule_path) -> int:
    """1-based position of a lineage in the canonical breadth-first sequence."""
    path = tuple(rule_path)
    if not path:
        return 1
    t = len(path)
    if path[0] == 1:
        raise ContractError("level-1 rule of an emitted lineage is never 1")
    rank = (path[0] - 2) * 4 ** (t - 1)
    for i, r in enumerate(path[1:], start=2):
        rank += (r - 1) * 4 ** (t - i)
    return count_total(t - 1) + rank + 1
