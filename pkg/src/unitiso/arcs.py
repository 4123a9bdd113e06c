"""Arcs in linear spaces: greedy search and exact branch-and-bound.

An arc is a point set meeting every block in at most two points; sets of
size <= 2 qualify vacuously and "complete" means no point can extend it.
Everything here requires lambda = 1 (each point pair lies in exactly one
block), which gives the pair -> block index the search leans on: adding a
point p to an arc rules out exactly the third-or-later points of the
blocks joining p to current members, so candidate sets shrink by a few
bitset ands per extension.

The exact search branches on the lowest-id candidate (take it or drop
it) and prunes when |arc| + |candidates| cannot reach the target.  With
an explored tree it proves optimality or infeasibility; with a node
budget it reports how far it got.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .designs import Design


class ArcError(ValueError):
    pass


class ArcBudgetExceeded(RuntimeError):
    """Search stopped by its node/restart budget before an answer."""


class ArcInfeasible(RuntimeError):
    """Exhaustive search proved no arc of the requested size exists."""


class CollinearityIndex:
    """Pair -> block lookup plus block bitsets, for lambda = 1 designs."""

    def __init__(self, design: Design):
        if design.params.lam != 1:
            raise ArcError("collinearity index needs lambda = 1")
        v = design.v
        self.v = v
        self.block_bits = design.block_bitsets()
        self.not_block_bits = [~bits for bits in self.block_bits]
        pair = [-1] * (v * v)
        for j, B in enumerate(design.blocks):
            for i1 in range(len(B)):
                for i2 in range(i1 + 1, len(B)):
                    a, c = B[i1], B[i2]
                    if pair[a * v + c] != -1:
                        raise ArcError(f"pair ({a}, {c}) lies in two blocks")
                    pair[a * v + c] = j
                    pair[c * v + a] = j
        missing = next((i for i, x in enumerate(pair) if x == -1 and i // v != i % v), None)
        if missing is not None:
            raise ArcError(f"pair ({missing // v}, {missing % v}) lies in no block")
        self.pair_block = pair

    def block_of(self, a: int, c: int) -> int:
        return self.pair_block[a * self.v + c]


def is_arc(design: Design, points) -> bool:
    """Does every block meet the set in at most two points?"""
    bits = 0
    for p in points:
        if not 0 <= p < design.v:
            raise ArcError(f"point {p} out of range")
        if bits >> p & 1:
            raise ArcError(f"point {p} repeated")
        bits |= 1 << p
    return all((B & bits).bit_count() <= 2 for B in design.block_bitsets())


def is_complete_arc(design: Design, points) -> bool:
    """An arc no point of the design extends."""
    if not is_arc(design, points):
        return False
    bits = 0
    for p in points:
        bits |= 1 << p
    blockbits = design.block_bitsets()
    for q in range(design.v):
        if bits >> q & 1:
            continue
        nb = bits | (1 << q)
        if all((B & nb).bit_count() <= 2 for B in blockbits):
            return False
    return True


def _greedy_pass(idx: CollinearityIndex, order: list[int]) -> list[int]:
    """Extend along the order, keeping every point that preserves the arc."""
    cand = (1 << idx.v) - 1
    arc: list[int] = []
    for p in order:
        if not cand >> p & 1:
            continue
        for a in arc:
            cand &= idx.not_block_bits[idx.block_of(p, a)]
        cand &= ~(1 << p)
        arc.append(p)
    return arc


@dataclass
class _TreeStats:
    nodes: int = 0
    recheck_every: int = 4096


class _StopSearch(Exception):
    def __init__(self, witness):
        self.witness = witness


def _bb(
    idx: CollinearityIndex,
    arc: list[int],
    cand: int,
    target: int | None,
    best: list,
    budget: int | None,
    stats: _TreeStats,
) -> None:
    stats.nodes += 1
    if budget is not None and stats.nodes > budget:
        raise ArcBudgetExceeded(f"node budget {budget} exhausted")
    if stats.nodes % stats.recheck_every == 0 and arc:
        # paranoia: the incremental candidate set must agree with a recheck
        bits = 0
        for p in arc:
            bits |= 1 << p
        for q in list(_bits(cand))[:4]:
            probe = bits | (1 << q)
            if any((B & probe).bit_count() > 2 for B in idx.block_bits):
                raise ArcError("candidate set drifted from the arc property")
    size = len(arc)
    if target is not None and size >= target:
        raise _StopSearch(sorted(arc))
    limit = size + cand.bit_count()
    if target is not None:
        if limit < target:
            return
    elif limit <= len(best[0]):
        return
    if cand == 0:
        if target is None and size > len(best[0]):
            best[0] = sorted(arc)
        return
    low = cand & -cand
    c = low.bit_length() - 1
    rest = cand ^ low
    taken = rest
    for a in arc:
        taken &= idx.not_block_bits[idx.block_of(c, a)]
    arc.append(c)
    _bb(idx, arc, taken, target, best, budget, stats)
    arc.pop()
    _bb(idx, arc, rest, target, best, budget, stats)


def _bits(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def find_arc(
    design: Design,
    target: int,
    mode: str = "exact",
    seed: int = 0,
    budget: int | None = None,
    restarts: int = 512,
) -> tuple[int, ...]:
    """An arc with at least ``target`` points.

    ``greedy`` runs seeded randomized passes (raises ArcBudgetExceeded when
    the restarts run out); ``exact`` is branch-and-bound and raises
    ArcInfeasible once the whole tree is explored.
    """
    if target < 1 or target > design.v:
        raise ArcError(f"target {target} out of range 1..{design.v}")
    idx = CollinearityIndex(design)
    if mode == "greedy":
        rng = random.Random(f"{seed}")
        order = list(range(design.v))
        best: list[int] = []
        for _ in range(restarts):
            rng.shuffle(order)
            arc = _greedy_pass(idx, order)
            if len(arc) > len(best):
                best = arc
            if len(best) >= target:
                return tuple(sorted(best))
        raise ArcBudgetExceeded(
            f"greedy found only {len(best)} < {target} points in {restarts} restarts"
        )
    if mode != "exact":
        raise ArcError(f"unknown mode {mode!r}")
    stats = _TreeStats()
    try:
        _bb(idx, [], (1 << design.v) - 1, target, [[]], budget, stats)
    except _StopSearch as hit:
        return tuple(hit.witness)
    raise ArcInfeasible(
        f"no arc of size {target} exists ({stats.nodes} nodes explored)"
    )


def max_arc(
    design: Design, budget: int | None = None, seed: int = 0
) -> tuple[int, tuple[int, ...], bool]:
    """(size, witness, proven): the largest arc, exactly when the tree completes.

    A seeded greedy warm start seeds the incumbent; the proof flag only
    turns on when branch-and-bound finishes inside the budget.
    """
    idx = CollinearityIndex(design)
    rng = random.Random(f"{seed}")
    order = list(range(design.v))
    warm: list[int] = []
    for _ in range(64):
        rng.shuffle(order)
        arc = _greedy_pass(idx, order)
        if len(arc) > len(warm):
            warm = arc
    best = [sorted(warm)]
    stats = _TreeStats()
    try:
        _bb(idx, [], (1 << design.v) - 1, None, best, budget, stats)
    except ArcBudgetExceeded:
        return len(best[0]), tuple(best[0]), False
    return len(best[0]), tuple(best[0]), True
