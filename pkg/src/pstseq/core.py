"""Partial Steiner triple systems and admissibility of sequences.

A system is a set of ``n`` points together with 3-element blocks, no two
blocks sharing a pair of points.  Points not covered by any block are
allowed and count toward the order.  A sequence of all points is
*admissible* when no proper segment of it is a disjoint union of blocks;
a system admitting an admissible sequence is *sequenceable*.

Everything here is pure and the system object is immutable after
validation, so instances are safe to share across threads or processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from . import kernels
from .errors import (
    PairInTwoBlocks,
    PointOutOfRange,
    RepeatedPointInBlock,
    SequenceNotPermutation,
)


@dataclass(frozen=True, order=True)
class Block:
    """A block: three distinct points, stored in ascending order."""

    points: tuple[int, int, int]

    def __post_init__(self):
        if len(self.points) != 3 or len(set(self.points)) != 3:
            raise RepeatedPointInBlock(f"not a triple of distinct points: {self.points}")
        if tuple(sorted(self.points)) != self.points:
            object.__setattr__(self, "points", tuple(sorted(self.points)))

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point):
        return point in self.points

    @property
    def mask(self) -> int:
        a, b, c = self.points
        return (1 << a) | (1 << b) | (1 << c)


@dataclass(frozen=True)
class Sequence:
    """A candidate witness: a permutation of all points of a system."""

    entries: tuple[int, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def reversed(self) -> "Sequence":
        return Sequence(tuple(reversed(self.entries)))


@dataclass(frozen=True)
class Segment:
    """Positions ``start .. start+length-1`` of a sequence."""

    start: int
    length: int
    proper: bool


@dataclass(frozen=True)
class PartitionWitness:
    """Pairwise disjoint blocks whose union is the witnessed point set."""

    parts: tuple[Block, ...]

    def point_set(self) -> frozenset[int]:
        return frozenset(p for blk in self.parts for p in blk)

    def mask(self) -> int:
        m = 0
        for blk in self.parts:
            m |= blk.mask
        return m


def _checked_witness(parts: tuple[Block, ...], expected_mask: int) -> PartitionWitness:
    m = 0
    for blk in parts:
        if m & blk.mask:
            raise AssertionError(f"witness parts overlap: {parts}")
        m |= blk.mask
    if m != expected_mask:
        raise AssertionError("witness union differs from the witnessed set")
    return PartitionWitness(parts)


class TripleSystem:
    """Validated point set plus edge-disjoint block family.

    ``labels`` maps dense indices 0..n-1 back to the input tokens;
    ``pair_index`` maps each covered unordered pair to its unique block.
    """

    __slots__ = ("n", "blocks", "labels", "pair_index", "block_masks", "_kernel", "_label_to_index")

    def __init__(self, n: int, blocks: tuple[Block, ...], labels: tuple[str, ...]):
        self.n = n
        self.blocks = blocks
        self.labels = labels
        pair_index: dict[tuple[int, int], Block] = {}
        for blk in blocks:
            a, b, c = blk.points
            for pair in ((a, b), (a, c), (b, c)):
                other = pair_index.get(pair)
                if other is not None:
                    raise PairInTwoBlocks(
                        f"pair {self._pair_repr(pair)} lies in two blocks: "
                        f"{self.block_labels(other)} and {self.block_labels(blk)}"
                    )
                pair_index[pair] = blk
        self.pair_index: Mapping[tuple[int, int], Block] = pair_index
        self.block_masks = tuple(blk.mask for blk in blocks)
        self._kernel = kernels.prepare(n, self.block_masks)
        self._label_to_index = {lab: i for i, lab in enumerate(labels)}

    def _pair_repr(self, pair):
        return "{" + ", ".join(self.labels[p] for p in pair) + "}"

    # -- label helpers -------------------------------------------------

    def label_of(self, point: int) -> str:
        return self.labels[point]

    def index_of(self, label) -> int:
        key = str(label)
        try:
            return self._label_to_index[key]
        except KeyError:
            raise PointOutOfRange(f"unknown point label: {label!r}") from None

    def block_labels(self, blk: Block) -> tuple[str, str, str]:
        return tuple(self.labels[p] for p in blk.points)

    def sequence_labels(self, seq: "Sequence | Iterable[int]") -> list[str]:
        return [self.labels[p] for p in _entries_of(seq)]

    def sequence_from_labels(self, tokens: Iterable) -> Sequence:
        return Sequence(tuple(self.index_of(t) for t in tokens))

    # -- structure helpers ---------------------------------------------

    def points(self) -> range:
        return range(self.n)

    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def block_of_pair(self, a: int, b: int) -> Optional[Block]:
        if a > b:
            a, b = b, a
        return self.pair_index.get((a, b))

    def is_block(self, points: Iterable[int]) -> bool:
        pts = tuple(sorted(points))
        if len(pts) != 3:
            return False
        blk = self.block_of_pair(pts[0], pts[1])
        return blk is not None and blk.points == pts

    def blocks_inside(self, point_set: frozenset[int] | set[int]) -> list[Block]:
        return [b for b in self.blocks if all(p in point_set for p in b)]

    def subsystem(self, points: Iterable[int]) -> tuple["TripleSystem", dict[int, int]]:
        """Induced system on ``points``; also returns old->new index map."""
        pts = sorted(set(points))
        back = {old: new for new, old in enumerate(pts)}
        keep = set(pts)
        blocks = [
            tuple(back[p] for p in blk.points)
            for blk in self.blocks
            if all(p in keep for p in blk.points)
        ]
        sub = TripleSystem(
            len(pts),
            tuple(sorted(Block(tuple(sorted(b))) for b in blocks)),
            tuple(self.labels[p] for p in pts),
        )
        return sub, back

    def __eq__(self, other):
        return (
            isinstance(other, TripleSystem)
            and self.n == other.n
            and self.blocks == other.blocks
            and self.labels == other.labels
        )

    def __hash__(self):
        return hash((self.n, self.blocks, self.labels))

    def __repr__(self):
        return f"TripleSystem(n={self.n}, blocks={len(self.blocks)})"


def _all_index_tokens(raw_blocks, n: int):
    """Interpret tokens as dense indices when every one is an int in [0, n)."""
    out = []
    for triple in raw_blocks:
        row = []
        for tok in triple:
            if isinstance(tok, bool):
                return None
            if isinstance(tok, int):
                v = tok
            elif isinstance(tok, str) and tok.lstrip("-").isdigit():
                v = int(tok)
            else:
                return None
            if not 0 <= v < n:
                return None
            row.append(v)
        out.append(row)
    return out


def validate_system(n: int, raw_blocks: Iterable) -> TripleSystem:
    """Build a TripleSystem from raw triples of labels or indices.

    When every token is an integer in [0, n) the tokens are taken as
    point indices and labels become their decimal strings; otherwise
    tokens are opaque labels, indexed by first appearance, and points
    never named get synthetic labels.  Raises RepeatedPointInBlock,
    PairInTwoBlocks or PointOutOfRange on malformed input.
    """
    if n < 0:
        raise PointOutOfRange(f"order must be nonnegative, got {n}")
    triples = [tuple(t) for t in raw_blocks]
    for t in triples:
        if len(t) != 3:
            raise RepeatedPointInBlock(f"block must have exactly 3 points: {t!r}")

    indexed = _all_index_tokens(triples, n)
    if indexed is not None:
        labels = tuple(str(i) for i in range(n))
        index_triples = indexed
    else:
        label_map: dict[str, int] = {}
        index_triples = []
        for t in triples:
            row = []
            for tok in t:
                key = str(tok)
                if key not in label_map:
                    label_map[key] = len(label_map)
                row.append(label_map[key])
            index_triples.append(row)
        if len(label_map) > n:
            raise PointOutOfRange(
                f"{len(label_map)} distinct labels exceed the declared order {n}"
            )
        labels_list = [None] * n
        for key, idx in label_map.items():
            labels_list[idx] = key
        used = set(label_map)
        for i in range(n):
            if labels_list[i] is None:
                synth = str(i)
                while synth in used:
                    synth = "_" + synth
                labels_list[i] = synth
                used.add(synth)
        labels = tuple(labels_list)

    blocks = []
    for t, row in zip(triples, index_triples):
        if len(set(row)) != 3:
            raise RepeatedPointInBlock(f"block repeats a point: {t!r}")
        blocks.append(Block(tuple(sorted(row))))
    blocks.sort()
    for a, b in zip(blocks, blocks[1:]):
        if a == b:
            raise PairInTwoBlocks(f"block listed twice: {a.points}")
    return TripleSystem(n, tuple(blocks), labels)


def _entries_of(seq) -> tuple[int, ...]:
    if isinstance(seq, Sequence):
        return seq.entries
    return tuple(seq)


def _checked_permutation(seq, system: TripleSystem) -> tuple[int, ...]:
    entries = _entries_of(seq)
    if len(entries) != system.n or set(entries) != set(range(system.n)):
        raise SequenceNotPermutation(
            f"sequence of length {len(entries)} is not a permutation of "
            f"{system.n} points"
        )
    return entries


def _mask_of(points: Iterable[int], system: TripleSystem) -> int:
    m = 0
    for p in points:
        if not 0 <= p < system.n:
            raise PointOutOfRange(f"point index {p} outside [0, {system.n})")
        m |= 1 << p
    return m


def partition_into_blocks(
    point_set: Iterable[int], system: TripleSystem
) -> Optional[PartitionWitness]:
    """Partition the set into vertex-disjoint blocks, if possible.

    Deterministic: backtracks on the least-index uncovered point, trying
    its containing blocks in canonical order.  Absence is a value, not
    an error.
    """
    mask = _mask_of(point_set, system)
    mod, handle = system._kernel
    ids = mod.find_partition(handle, mask)
    if ids is None:
        return None
    return _checked_witness(tuple(system.blocks[i] for i in ids), mask)


def inadmissible_segments(
    seq, system: TripleSystem
) -> list[tuple[Segment, PartitionWitness]]:
    """Every proper segment that is a disjoint union of blocks.

    Only lengths that are positive multiples of 3 and below n can
    qualify, so only those are scanned.  Empty result means the
    sequence is admissible.
    """
    entries = _checked_permutation(seq, system)
    mod, handle = system._kernel
    hits = mod.inadmissible_scan(handle, list(entries), False)
    out = []
    for start, length, ids in hits:
        seg_mask = 0
        for p in entries[start : start + length]:
            seg_mask |= 1 << p
        witness = _checked_witness(tuple(system.blocks[i] for i in ids), seg_mask)
        out.append((Segment(start, length, 0 < length < system.n), witness))
    return out


def is_admissible(seq, system: TripleSystem) -> bool:
    """True when no proper segment partitions into disjoint blocks."""
    entries = _checked_permutation(seq, system)
    mod, handle = system._kernel
    return not mod.inadmissible_scan(handle, list(entries), True)
