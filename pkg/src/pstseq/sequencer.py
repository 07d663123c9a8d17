"""Deciding and constructing sequenceability.

``decide`` is an exact depth-first search with a node budget.
``construct`` dispatches on the disjoint-block number: systems with at
most three pairwise disjoint blocks always get a sequence built from
the guaranteed labeling procedures (each output re-verified before it
is returned); larger packings fall back to the interleaving
construction when the order allows, and to plain search otherwise.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from . import kernels
from .core import (
    Block,
    Sequence,
    TripleSystem,
    is_admissible,
    partition_into_blocks,
)
from .errors import (
    BudgetExhausted,
    CertificateFailure,
    NoAdmissibleLabeling,
    NotSequenceableSystem,
    RepairFailed,
    ResidualNotAdmissible,
    SequenceNotPermutation,
)
from .generators import CyclicBase, cyclic_system
from .packing import bad_sets, max_disjoint_blocks

#: Default node budget for exhaustive decision searches.
DEFAULT_BUDGET = 10**8

#: Number of seeded orderings the interleaving repair loop will try.
REPAIR_ATTEMPTS = 100

_PI_PATTERN = ("1", "2", "4", "3", "5", "7", "6", "8", "a", "9", "b", "c")


class Outcome(str, Enum):
    SEQUENCEABLE = "sequenceable"
    NOT_SEQUENCEABLE = "not-sequenceable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Decision:
    """Three-valued search verdict.

    A sequenceable decision carries a verified witness; a negative one
    is only issued when the search tree was exhausted.
    """

    outcome: Outcome
    witness: Optional[Sequence]
    nodes_explored: int
    exhausted: bool
    budget_spent: int


@dataclass(frozen=True)
class Labeling:
    """Role assignment of three disjoint blocks plus point labels."""

    block_roles: tuple[Block, Block, Block]
    assignment: dict[str, int]
    sequence: Sequence


@dataclass(frozen=True)
class CertificateEntry:
    vertex: int
    exponent: int
    blocks: tuple[Block, Block, Block, Block]


@dataclass(frozen=True)
class Sts13Certificate:
    """Per-vertex families of four disjoint blocks avoiding that vertex.

    Existence of such a family for every vertex means every permutation
    of the 13 points has partitionable 12-segments at both ends, so the
    system has no admissible sequence.
    """

    entries: tuple[CertificateEntry, ...]
    system: TripleSystem = field(compare=False, repr=False)


def _verified(system: TripleSystem, entries: Iterable[int], context: str) -> Sequence:
    seq = Sequence(tuple(entries))
    if not is_admissible(seq, system):
        raise RuntimeError(
            f"internal error: {context} produced an inadmissible sequence "
            f"{seq.entries} for order {system.n}"
        )
    return seq


def _decide_worker(args):
    n, masks, budget, prefix, exhaust = args
    mod, handle = kernels.prepare(n, masks)
    return mod.decide_search(handle, budget, exhaust, tuple(prefix))


def decide(
    system: TripleSystem,
    budget: Optional[int] = DEFAULT_BUDGET,
    parallel: int = 1,
    exhaust: bool = False,
) -> Decision:
    """Exact sequenceability search over permutation prefixes.

    Prefixes grow by unused points in canonical order; any proper
    segment ending at the new entry that partitions into blocks prunes.
    A full admissible prefix gives Sequenceable, an exhausted tree gives
    NotSequenceable, a spent budget gives Unknown.  ``exhaust`` keeps
    walking after the first witness so the full tree gets counted.

    With ``parallel`` > 1 the top-level branches are split across
    processes (budget shared evenly); the first witness cancels the
    rest, so the witness may differ from the sequential one.
    """
    if parallel > 1 and system.n > 1:
        return _decide_parallel(system, budget, parallel, exhaust)
    mod, handle = system._kernel
    witness, nodes, exhausted = mod.decide_search(handle, budget, exhaust, ())
    return _decision_from(system, witness, nodes, exhausted)


def _decision_from(system, witness, nodes, exhausted) -> Decision:
    if witness is not None:
        seq = _verified(system, witness, "decide")
        return Decision(Outcome.SEQUENCEABLE, seq, nodes, exhausted, nodes)
    if exhausted:
        return Decision(Outcome.NOT_SEQUENCEABLE, None, nodes, True, nodes)
    return Decision(Outcome.UNKNOWN, None, nodes, False, nodes)


def _decide_parallel(system, budget, parallel, exhaust) -> Decision:
    n = system.n
    share = None if budget is None else max(1, budget // n)
    tasks = [(n, system.block_masks, share, (p,), exhaust) for p in range(n)]
    total_nodes = 0
    witness = None
    exhausted_count = 0
    budget_hit = False
    executor = ProcessPoolExecutor(max_workers=parallel)
    try:
        pending = {executor.submit(_decide_worker, t) for t in tasks}
        while pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                w, nodes, exh = fut.result()
                total_nodes += nodes
                if w is not None and witness is None:
                    witness = w
                if exh:
                    exhausted_count += 1
                else:
                    budget_hit = True
            if witness is not None:
                break
    finally:
        executor.shutdown(wait=False, cancel_futures=True)
    if witness is not None:
        return _decision_from(system, witness, total_nodes, False)
    if exhausted_count == len(tasks) and not budget_hit:
        return _decision_from(system, None, total_nodes, True)
    return _decision_from(system, None, total_nodes, False)


# ---------------------------------------------------------------------------
# constructions by disjoint-block number


def _construct_nu_le1(system: TripleSystem) -> Sequence:
    # Any two blocks meet, so only 3-segments can ever be inadmissible.
    blocks = system.blocks
    if not blocks:
        return _verified(system, range(system.n), "identity construction")
    b1 = blocks[0]
    p1, p2, p3 = b1.points
    extras = [p for p in system.points() if p not in b1]
    if not extras:
        return _verified(system, b1.points, "single-block construction")
    others = [b for b in blocks[1:]]
    if not others:
        rest = [p for p in extras[1:]]
        return _verified(
            system, [p1, p2, extras[0], p3, *rest], "one-block-with-extras construction"
        )
    # Some other block meets b1 in exactly one point; anchor on it.
    b2 = others[0]
    shared = [p for p in b2 if p in b1][0]
    one = shared
    two, three = sorted(p for p in b1 if p != shared)
    a_pt, b_pt = sorted(p for p in b2 if p != shared)
    pool = [p for p in system.points() if p not in b1 and p not in (a_pt, b_pt)]
    if not pool:
        return _verified(
            system, [one, two, a_pt, b_pt, three], "intersecting-blocks construction"
        )
    c_pt = pool[0]
    rest = [p for p in pool[1:]]
    return _verified(
        system,
        [one, c_pt, two, three, a_pt, b_pt, *rest],
        "intersecting-blocks construction",
    )


def _label_search(system, candidates, context) -> Sequence:
    """Return the first candidate entry list that checks out admissible."""
    mod, handle = system._kernel
    for entries in candidates:
        if not mod.inadmissible_scan(handle, list(entries), True):
            return Sequence(tuple(entries))
    raise RuntimeError(f"internal error: no labeling worked for {context}")


def _construct_nu2(system: TripleSystem, witness) -> Sequence:
    w1, w2 = witness
    n = system.n
    if n == 6:
        x1, x2, x3 = w1.points
        y1, y2, y3 = w2.points
        return _verified(system, [x1, x2, y1, y2, x3, y3], "two-block order-6")

    def roles():
        yield w1, w2
        yield w2, w1

    if n == 7:
        extra = next(p for p in system.points() if p not in w1 and p not in w2)

        def candidates7():
            for b1, b2 in roles():
                for l1 in itertools.permutations(b1.points):
                    for l2 in itertools.permutations(b2.points):
                        yield (l1[0], l1[1], l2[0], extra, l2[1], l1[2], l2[2])

        return _label_search(system, candidates7(), "two-block order-7")
    if n == 8:
        extras = [p for p in system.points() if p not in w1 and p not in w2]

        def candidates8():
            for b1, b2 in roles():
                for l1 in itertools.permutations(b1.points):
                    for l2 in itertools.permutations(b2.points):
                        for ea, eb in itertools.permutations(extras):
                            yield (l1[0], l1[1], l2[0], l1[2], ea, l2[1], l2[2], eb)

        return _label_search(system, candidates8(), "two-block order-8")

    # n > 8: fix the three smallest outside points, search the labeling
    # freedom the construction allows, append everything else in order.
    outside = [p for p in system.points() if p not in w1 and p not in w2]
    chosen = outside[:3]
    rest = outside[3:]

    def candidates_large():
        for b1, b2 in roles():
            for l1 in itertools.permutations(b1.points):
                for l2 in itertools.permutations(b2.points):
                    for la in itertools.permutations(chosen):
                        yield (
                            l1[0], l1[1], l2[0], l1[2], l2[1],
                            la[0], l2[2], la[1], la[2], *rest,
                        )

    return _label_search(system, candidates_large(), "two-block general")


def _construct_nine(system: TripleSystem, witness) -> Sequence:
    assign = {}
    for base, blk in zip((1, 4, 7), witness):
        for off, p in enumerate(sorted(blk.points)):
            assign[base + off] = p
    if system.is_block((assign[3], assign[5], assign[7])):
        assign[2], assign[3] = assign[3], assign[2]
    order = [assign[i] for i in (1, 2, 4, 3, 5, 7, 6, 8, 9)]
    return _verified(system, order, "three-block order-9")


def _bad_points(system: TripleSystem) -> set[int]:
    return {t[0] for t in bad_sets(system).bad_sets}


def _construct_ten(system: TripleSystem, witness) -> Sequence:
    bad = _bad_points(system)
    wpoints = {p for blk in witness for p in blk}
    a_pt = next(p for p in system.points() if p not in wpoints)

    def good_count(blk):
        return sum(1 for p in blk if p not in bad)

    low = [blk for blk in witness if good_count(blk) < 2]
    b3 = low[0] if low else witness[0]
    others = [blk for blk in witness if blk is not b3]
    nine = min(b3.points)

    def has_hazard(blk):
        return any(system.is_block((nine, x, a_pt)) for x in blk)

    b1 = others[0] if not has_hazard(others[0]) else others[1]
    if has_hazard(b1):
        raise RuntimeError("internal error: both candidate blocks carry the hazard pair")
    b2 = others[0] if b1 is others[1] else others[1]

    goods = sorted(p for p in b1 if p not in bad)
    bads = [p for p in b1 if p in bad]
    assign = {1: goods[0], 2: goods[1], 3: bads[0] if bads else goods[2], 9: nine}
    b3_rest = sorted(p for p in b3 if p != nine)
    for l2 in itertools.permutations(sorted(b2.points)):
        for l3 in itertools.permutations(b3_rest):
            six, eight = l2[2], l3[1]
            if (
                not system.is_block((assign[3], six, eight))
                and not system.is_block((assign[3], six, nine))
                and not system.is_block((assign[3], six, a_pt))
            ):
                assign.update({4: l2[0], 5: l2[1], 6: six, 7: l3[0], 8: eight})
                break
        else:
            continue
        break
    else:
        raise RuntimeError("internal error: no hazard-free labeling of the order-10 blocks")
    if system.is_block((assign[2], assign[6], nine)):
        assign[1], assign[2] = assign[2], assign[1]
    order = [assign[i] for i in (1, 4, 5, 7, 6, 8, 3, 9)] + [a_pt, assign[2]]
    return _verified(system, order, "three-block order-10")


def _construct_eleven(system: TripleSystem, witness) -> Sequence:
    wpoints = sorted(p for blk in witness for p in blk)
    extras = [p for p in system.points() if p not in set(wpoints)]
    a_pt, b_pt = extras
    everything = set(system.points())

    def good_for(x, p):
        return partition_into_blocks(everything - {x, p}, system) is None

    good_a = {p for p in wpoints if good_for(a_pt, p)}
    good_b = {p for p in wpoints if good_for(b_pt, p)}
    common = sorted(good_a & good_b)
    if not common:
        raise RuntimeError("internal error: no doubly good point among the block points")
    nine = common[0]
    b3 = next(blk for blk in witness if nine in blk)
    others = [blk for blk in witness if blk is not b3]
    b1 = next(blk for blk in others if sum(1 for p in blk if p in good_b) >= 2)
    b2 = others[0] if b1 is others[1] else others[1]

    gb = sorted(p for p in b1 if p in good_b)
    assign = {1: gb[0], 2: gb[1], 3: next(p for p in b1 if p not in gb[:2]), 9: nine}
    for off, p in enumerate(sorted(b2.points)):
        assign[4 + off] = p
    for off, p in enumerate(sorted(q for q in b3 if q != nine)):
        assign[7 + off] = p

    mid = {assign[3], assign[5], assign[7], assign[6], assign[8], a_pt}
    if partition_into_blocks(mid, system) is not None:
        assign[4], assign[5] = assign[5], assign[4]

    pattern = (1, 2, 4, 3, 5, 7, 6, 8)
    for swaps in ((), ((5, 6),), ((7, 8),), ((5, 6), (7, 8))):
        trial = dict(assign)
        for x, y in swaps:
            trial[x], trial[y] = trial[y], trial[x]
        order = [b_pt] + [trial[i] for i in pattern] + [a_pt, trial[9]]
        if is_admissible(order, system):
            return Sequence(tuple(order))
    raise RuntimeError("internal error: order-11 relabeling rules did not converge")


def pi_template_instantiate(system: TripleSystem, disjoint_blocks) -> Labeling:
    """Search all labelings of the fixed 12-point positional pattern.

    Runs through role assignments of the three disjoint blocks, the
    within-block labels, and the three leftover points in a fixed order
    (3! * 6^3 * 3! candidates), returning the first labeling whose
    induced sequence is admissible.  On an order-12 system with exactly
    three disjoint blocks a hit is guaranteed; NoAdmissibleLabeling
    therefore signals a packing number of four or more, or a genuine
    counterexample, and must be surfaced loudly.
    """
    if system.n != 12:
        raise ValueError(f"the positional template needs order 12, got {system.n}")
    d = tuple(disjoint_blocks)
    if len(d) != 3:
        raise ValueError(f"need exactly three disjoint blocks, got {len(d)}")
    cover = 0
    for blk in d:
        if not system.is_block(blk.points):
            raise ValueError(f"{blk.points} is not a block of the system")
        if cover & blk.mask:
            raise ValueError("the given blocks are not pairwise disjoint")
        cover |= blk.mask
    extras = [p for p in system.points() if not (cover >> p) & 1]

    mod, handle = system._kernel
    for roles in itertools.permutations(d):
        pts1, pts2, pts3 = (sorted(b.points) for b in roles)
        for l1 in itertools.permutations(pts1):
            for l2 in itertools.permutations(pts2):
                for l3 in itertools.permutations(pts3):
                    for ll in itertools.permutations(extras):
                        entries = (
                            l1[0], l1[1], l2[0], l1[2], l2[1], l3[0],
                            l2[2], l3[1], ll[0], l3[2], ll[1], ll[2],
                        )
                        if not mod.inadmissible_scan(handle, list(entries), True):
                            assignment = {
                                "1": l1[0], "2": l1[1], "3": l1[2],
                                "4": l2[0], "5": l2[1], "6": l2[2],
                                "7": l3[0], "8": l3[1], "9": l3[2],
                                "a": ll[0], "b": ll[1], "c": ll[2],
                            }
                            return Labeling(
                                block_roles=roles,
                                assignment=assignment,
                                sequence=Sequence(entries),
                            )
    raise NoAdmissibleLabeling(
        "no labeling of the 12-point pattern is admissible; either the system "
        "has four disjoint blocks or this instance is a reportable defect"
    )


def extend(
    system: TripleSystem, residual_points: Iterable[int], residual_sequence
) -> Sequence:
    """Grow an admissible 12-point residual sequence to the whole system.

    The residual must be three disjoint blocks plus three points,
    ordered by the positional template; the remaining points are
    appended in canonical order and the result re-verified.
    """
    pts = sorted(set(residual_points))
    if len(pts) != 12:
        raise ValueError(f"residual must have 12 points, got {len(pts)}")
    if system.n < 13:
        raise ValueError(f"extension needs order >= 13, got {system.n}")
    entries = tuple(
        residual_sequence.entries
        if isinstance(residual_sequence, Sequence)
        else residual_sequence
    )
    if sorted(entries) != pts:
        raise SequenceNotPermutation(
            "residual sequence is not a permutation of the residual points"
        )
    sub, back = system.subsystem(pts)
    if not is_admissible([back[p] for p in entries], sub):
        raise ResidualNotAdmissible(
            "the residual sequence is inadmissible on the induced subsystem"
        )
    rest = [p for p in system.points() if p not in set(pts)]
    full = list(entries) + rest
    if not is_admissible(full, system):
        raise ValueError(
            "extension came out inadmissible; the residual sequence must "
            "follow the 12-point positional template"
        )
    return Sequence(tuple(full))


def _construct_extend(system: TripleSystem, witness) -> Sequence:
    wpts = sorted(p for blk in witness for p in blk)
    pool = [p for p in system.points() if p not in set(wpts)]
    residual = wpts + pool[:3]
    sub, back = system.subsystem(residual)
    sub_blocks = tuple(Block(tuple(sorted(back[p] for p in blk))) for blk in witness)
    labeling = pi_template_instantiate(sub, sub_blocks)
    fwd = {new: old for old, new in back.items()}
    residual_seq = [fwd[e] for e in labeling.sequence.entries]
    return extend(system, residual, residual_seq)


def interleave_large(system: TripleSystem, k: int) -> Sequence:
    """Thread a maximum packing through the other points, then repair.

    Packing points are spread out with runs of outside points between
    consecutive ones (five per gap when the order allows, else as even
    as possible).  Segments longer than three cannot then collect enough
    packing points to partition; block 3-segments are repaired by
    swapping an adjacent outside point, retrying with reseeded outside
    orders until the verifier passes or the attempt budget runs out.
    """
    result = max_disjoint_blocks(system)
    if result.nu != k:
        raise ValueError(f"system has packing number {result.nu}, not {k}")
    if system.n < 15 * k - 5:
        raise ValueError(
            f"interleaving needs order >= {15 * k - 5} for packing number {k}, "
            f"got {system.n}"
        )
    u_points = [p for blk in result.witness for p in blk.points]
    u_set = set(u_points)
    outside = sorted(p for p in system.points() if p not in u_set)
    gaps = 3 * k - 1

    for attempt in range(REPAIR_ATTEMPTS):
        vs = list(outside)
        if attempt:
            random.Random(attempt).shuffle(vs)
        entries = _interleave_order(u_points, vs, gaps)
        repaired = _repair_three_segments(system, entries, u_set)
        if repaired is not None and is_admissible(repaired, system):
            return Sequence(tuple(repaired))
    raise RepairFailed(
        f"no admissible interleaving found in {REPAIR_ATTEMPTS} seeded attempts"
    )


def _interleave_order(u_points, vs, gaps):
    if len(vs) >= 5 * gaps:
        sizes = [5] * gaps
    else:
        q, r = divmod(len(vs), gaps)
        sizes = [q + 1] * r + [q] * (gaps - r)
    entries = [u_points[0]]
    vi = 0
    for g in range(gaps):
        entries.extend(vs[vi : vi + sizes[g]])
        vi += sizes[g]
        entries.append(u_points[g + 1])
    entries.extend(vs[vi:])
    return entries


def _repair_three_segments(system, entries, u_set):
    n = len(entries)
    seen = {tuple(entries)}
    for _ in range(20 * n):
        pos = -1
        for p in range(n - 2):
            if system.is_block(entries[p : p + 3]):
                pos = p
                break
        if pos < 0:
            return entries
        window = entries[pos : pos + 3]
        in_u = [i for i, e in enumerate(window) if e in u_set]
        if len(in_u) != 1:
            raise RuntimeError(
                "internal error: a block segment without exactly one packing point"
            )
        q = pos + in_u[0]
        if in_u[0] == 0:
            swaps = [(pos + 2, pos + 3), (pos - 1, pos + 1)]
        elif in_u[0] == 1:
            swaps = [(pos - 1, pos), (pos + 2, pos + 3)]
        else:
            swaps = [(pos - 1, pos), (pos + 1, pos + 3)]
        done = False
        for i, j in swaps:
            if 0 <= i < n and 0 <= j < n and entries[i] not in u_set and entries[j] not in u_set:
                entries[i], entries[j] = entries[j], entries[i]
                state = tuple(entries)
                if state in seen:
                    entries[i], entries[j] = entries[j], entries[i]
                    continue
                seen.add(state)
                done = True
                break
        if not done:
            return None
    return None


def construct(system: TripleSystem) -> Sequence:
    """Build an admissible sequence, choosing the proof-backed route.

    Dispatches on the exact disjoint-block number: the labeling recipes
    for at most two disjoint blocks, the per-order procedures and the
    positional-template search for three, the interleaving construction
    for large sparse systems, and exhaustive search as a last resort.
    Every returned sequence has passed the admissibility checker.
    """
    result = max_disjoint_blocks(system)
    nu = result.nu
    if nu <= 1:
        return _construct_nu_le1(system)
    if nu == 2:
        return _construct_nu2(system, result.witness)
    if nu == 3:
        n = system.n
        if n == 9:
            return _construct_nine(system, result.witness)
        if n == 10:
            return _construct_ten(system, result.witness)
        if n == 11:
            return _construct_eleven(system, result.witness)
        if n == 12:
            labeling = pi_template_instantiate(system, result.witness)
            return _verified(system, labeling.sequence.entries, "order-12 template")
        return _construct_extend(system, result.witness)
    if system.n >= 15 * nu - 5:
        return interleave_large(system, nu)
    decision = decide(system)
    if decision.outcome is Outcome.SEQUENCEABLE:
        return decision.witness
    if decision.outcome is Outcome.NOT_SEQUENCEABLE:
        raise NotSequenceableSystem(
            f"search exhausted after {decision.nodes_explored} nodes: "
            "no admissible sequence exists"
        )
    raise BudgetExhausted(
        f"search budget spent ({decision.nodes_explored} nodes) without a verdict"
    )


_STS13_BASES = ((0, 1, 4), (0, 2, 7))
_STS13_QUAD = ((0, 2, 7), (1, 3, 8), (5, 6, 9), (4, 10, 12))


def verify_sts13_certificate() -> Sts13Certificate:
    """Certify that the cyclic order-13 system is not sequenceable.

    Develops the system from its two base blocks, then for every vertex
    rotates a fixed family of four disjoint blocks onto a family
    avoiding that vertex and checks it.  Once every vertex has such a
    family, any permutation has partitionable 12-segments after
    dropping its first or last entry, so no admissible sequence exists.
    """
    system = cyclic_system(CyclicBase(13, _STS13_BASES))
    if len(system.blocks) != 26:
        raise CertificateFailure(f"expected 26 blocks, built {len(system.blocks)}")
    for a in range(13):
        for b in range(a + 1, 13):
            if system.block_of_pair(a, b) is None:
                raise CertificateFailure(f"pair {{{a}, {b}}} is in no block")
    entries = []
    for vertex in range(13):
        exponent = (vertex - 11) % 13
        rotated = tuple(
            Block(tuple(sorted((x + exponent) % 13 for x in q))) for q in _STS13_QUAD
        )
        cover = 0
        for blk in rotated:
            if not system.is_block(blk.points):
                raise CertificateFailure(f"{blk.points} is not a block of the system")
            if cover & blk.mask:
                raise CertificateFailure(f"blocks for vertex {vertex} overlap")
            cover |= blk.mask
        if cover != system.full_mask() & ~(1 << vertex):
            raise CertificateFailure(
                f"blocks for vertex {vertex} do not cover exactly the other 12 points"
            )
        entries.append(CertificateEntry(vertex=vertex, exponent=exponent, blocks=rotated))
    return Sts13Certificate(entries=tuple(entries), system=system)
