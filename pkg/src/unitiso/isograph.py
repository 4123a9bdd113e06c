"""Bipartite (non-)incidence graphs of designs and their isoperimetric numbers.

The graph of a design has the v points on one side, the b blocks on the
other, and an edge point~block exactly when the point lies in the block
("incidence" flavor) or outside it ("nonincidence" flavor).  Each side's
adjacency is a list of Python-int bitsets over the opposite side, which
keeps neighborhood unions and counts exact and fast.

For a vertex subset S the quantity of interest is |N(S)|/|S| over
nonempty S with 2|S| <= v+b, where N(S) is the set of vertices outside S
adjacent to S.  All ratio comparisons are exact: either
``fractions.Fraction`` or integer cross-multiplication, never floats.

``brute_force_iso`` is the reference oracle: it enumerates every eligible
subset, organized by (point-side size, block-side size) classes whose
members extend one another, with two admissible prunes: a class whose
counting lower bound already exceeds the incumbent ratio strictly cannot
contain a minimizer, and the incumbent only improves.  ``heuristic_iso``
is a seeded multi-start local search usable far beyond oracle range; its
output is a valid ratio, hence an upper bound on the minimum.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .designs import Design, DesignParams, complement_params

DEFAULT_WORK_GUARD = 20_000_000

FLAVORS = ("incidence", "nonincidence")


class IsoGraphError(ValueError):
    pass


class WorkGuardExceeded(RuntimeError):
    """Exhaustive enumeration refused; use heuristic_iso plus certificates."""


class TheoremViolation(AssertionError):
    """A certified counting inequality failed on concrete data."""


@dataclass(frozen=True)
class VertexSubset:
    """A set of graph vertices: point-side and block-side bitsets."""

    x_bits: int
    y_bits: int

    @property
    def x_size(self) -> int:
        return self.x_bits.bit_count()

    @property
    def y_size(self) -> int:
        return self.y_bits.bit_count()

    @property
    def size(self) -> int:
        return self.x_size + self.y_size

    def points(self) -> tuple[int, ...]:
        return tuple(_iter_bits(self.x_bits))

    def blocks(self) -> tuple[int, ...]:
        return tuple(_iter_bits(self.y_bits))

    def sort_key(self) -> tuple[int, int, int]:
        return (self.size, self.x_bits, self.y_bits)


def _iter_bits(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def subset_from_ids(points, blocks) -> VertexSubset:
    x = 0
    for p in points:
        x |= 1 << p
    y = 0
    for b in blocks:
        y |= 1 << b
    return VertexSubset(x, y)


class IsoGraph:
    """Bipartite graph of a design in one of the two flavors.

    ``params`` are the parameters of the design whose *incidence* graph
    this is; for the nonincidence flavor that is the complement design.
    The counting bounds below are stated for incidence graphs, so this is
    the parameter tuple they apply to.
    """

    def __init__(self, design: Design, flavor: str = "incidence"):
        if flavor not in FLAVORS:
            raise IsoGraphError(f"flavor must be one of {FLAVORS}")
        self.flavor = flavor
        self.v = design.v
        self.b = design.b
        self.design = design
        if flavor == "incidence":
            self.params = design.params
            self.block_adj = design.block_bitsets()
            self.point_adj = design.point_block_bitsets()
        else:
            self.params = complement_params(design.params)
            pmask = (1 << design.v) - 1
            bmask = (1 << design.b) - 1
            self.block_adj = [pmask ^ bits for bits in design.block_bitsets()]
            self.point_adj = [bmask ^ bits for bits in design.point_block_bitsets()]
        deg_p = self.point_adj[0].bit_count()
        deg_b = self.block_adj[0].bit_count()
        if any(a.bit_count() != deg_p for a in self.point_adj):
            raise IsoGraphError("point degrees are not uniform")
        if any(a.bit_count() != deg_b for a in self.block_adj):
            raise IsoGraphError("block degrees are not uniform")
        if deg_p * self.v != deg_b * self.b:
            raise IsoGraphError("edge count disagrees between the two sides")
        self.edges = deg_p * self.v

    @property
    def n_vertices(self) -> int:
        return self.v + self.b

    def size_cap(self) -> int:
        # 2|S| <= v+b, in integers
        return (self.v + self.b) // 2

    def union_point_adj(self, x_bits: int) -> int:
        out = 0
        for p in _iter_bits(x_bits):
            out |= self.point_adj[p]
        return out

    def union_block_adj(self, y_bits: int) -> int:
        out = 0
        for j in _iter_bits(y_bits):
            out |= self.block_adj[j]
        return out


def build_graph(design: Design, flavor: str = "incidence") -> IsoGraph:
    return IsoGraph(design, flavor)


def neighborhood(graph: IsoGraph, s: VertexSubset) -> VertexSubset:
    """Vertices outside s adjacent to s."""
    nb = graph.union_point_adj(s.x_bits) & ~s.y_bits
    np_ = graph.union_block_adj(s.y_bits) & ~s.x_bits
    return VertexSubset(np_, nb)


def subset_profile(graph: IsoGraph, s: VertexSubset) -> tuple[int, int, int, int]:
    """(x, y, x', y'): side sizes of s and of its neighborhood."""
    n = neighborhood(graph, s)
    return (s.x_size, s.y_size, n.x_size, n.y_size)


def iso_ratio(graph: IsoGraph, s: VertexSubset) -> Fraction:
    size = s.size
    if size == 0:
        raise IsoGraphError("the ratio needs a nonempty subset")
    if 2 * size > graph.v + graph.b:
        raise IsoGraphError(f"|S| = {size} exceeds half of {graph.v + graph.b} vertices")
    return Fraction(neighborhood(graph, s).size, size)


@dataclass
class IsoResult:
    ratio: Fraction
    witness: VertexSubset
    method: str
    flavor: str
    stats: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "ratio": {"num": self.ratio.numerator, "den": self.ratio.denominator},
            "witness": {
                "points": list(self.witness.points()),
                "blocks": list(self.witness.blocks()),
            },
            "method": self.method,
            "flavor": self.flavor,
            "stats": self.stats,
        }


# ----------------------------------------------------------------------
# counting lower bounds (incidence graphs of 2-designs)
# ----------------------------------------------------------------------


def lb_main1(params: DesignParams, x: int, m: int) -> Fraction:
    """Block-side neighborhood bound from the m/(m+1) section split."""
    if m < 1:
        raise IsoGraphError("the split parameter m must be >= 1")
    r, lam = params.r, params.lam
    return Fraction(x * (2 * r * m - lam * (x - 1)), m * (m + 1))

def lb_main2(params: DesignParams, x: int) -> Fraction:
    """Block-side neighborhood bound from Cauchy-Schwarz counting."""
    r, lam = params.r, params.lam
    if x == 0:
        return Fraction(0)
    return Fraction(r * r * x, r + lam * (x - 1))


def lb_main3(params: DesignParams, y: int) -> Fraction:
    """Point-side neighborhood bound for a set of y blocks; 0 when vacuous."""
    r, k, b, lam = params.r, params.k, params.b, params.lam
    den = r * r - lam * (b - y)
    if den <= 0:
        return Fraction(0)
    return Fraction(r * k * y, den)


def lb_main4(params: DesignParams, x: int, x_prime: int) -> Fraction:
    """Bound on blocks adjacent to X but outside Y, via uncovered points."""
    v, k, lam = params.v, params.k, params.lam
    return Fraction(4 * lam * x * (v - x - x_prime), k * k)


def check_theorem3(graph: IsoGraph, s: VertexSubset, m_values=(1, 2, 3)) -> dict:
    """Verify every counting inequality on concrete (X, Y); raise on violation.

    Works on the graph's own incidence parameters.  Returns the profile
    and the m values for which the block sections force equality.
    """
    p = graph.params
    nbx = graph.union_point_adj(s.x_bits)
    npy = graph.union_block_adj(s.y_bits)
    x = s.x_size
    y = s.y_size
    nx = nbx.bit_count()  # |N(X)| on the block side
    ny = npy.bit_count()  # |N(Y)| on the point side
    yp = (nbx & ~s.y_bits).bit_count()  # y' = |N(X) \ Y|
    xp = (npy & ~s.x_bits).bit_count()  # x' = |N(Y) \ X|

    def fail(name, detail):
        raise TheoremViolation(
            f"{name} fails for x={x}, y={y}, x'={xp}, y'={yp}: {detail} "
            f"(witness points={list(s.points())}, blocks={list(s.blocks())})"
        )

    r, k, b, lam, v = p.r, p.k, p.b, p.lam, p.v
    if x > 0:
        for m in m_values:
            # nx >= x(2rm - lam(x-1)) / (m(m+1)), integer cross-multiplied
            if nx * m * (m + 1) < x * (2 * r * m - lam * (x - 1)):
                fail("main1", f"m={m}, |N(X)|={nx}")
            if (y + yp) * m * (m + 1) < x * (2 * r * m - lam * (x - 1)):
                fail("main1-cover", f"m={m}, y+y'={y + yp}")
        if nx * (r + lam * (x - 1)) < r * r * x:
            fail("main2", f"|N(X)|={nx}")
        if (y + yp) * (r + lam * (x - 1)) < r * r * x:
            fail("main2-cover", f"y+y'={y + yp}")
    if y > 0:
        den = r * r - lam * (b - y)
        if den > 0:
            if ny * den < r * k * y:
                fail("main3", f"|N(Y)|={ny}")
            if (x + xp) * den < r * k * y:
                fail("main3-cover", f"x+x'={x + xp}")
    if yp * k * k < 4 * lam * x * (v - x - xp):
        fail("main4", f"y'={yp}")

    equality_m = []
    if x > 0:
        sections = [(graph.block_adj[j] & s.x_bits).bit_count() for j in _iter_bits(nbx)]
        for m in m_values:
            if all(c in (m, m + 1) for c in sections):
                if nx * m * (m + 1) != x * (2 * r * m - lam * (x - 1)):
                    fail("main1-equality", f"m={m}, |N(X)|={nx}, sections all in ({m},{m + 1})")
                equality_m.append(m)
    return {"x": x, "y": y, "x_prime": xp, "y_prime": yp, "nx": nx, "ny": ny,
            "equality_m": equality_m}


# ----------------------------------------------------------------------
# exact oracle
# ----------------------------------------------------------------------


def brute_force_work(v: int, b: int, cap: int) -> int:
    """Number of subsets the oracle would visit."""
    total = 0
    for x in range(0, min(v, cap) + 1):
        cx = math.comb(v, x)
        for y in range(0, min(b, cap - x) + 1):
            total += cx * math.comb(b, y)
    return total - 1  # the empty set is skipped


def _adjacency_levels(adj: list[int], cap: int):
    """All subsets of one side grouped by size, with their neighbor unions.

    levels[s] is a list of (bits, union, ~bits); subsets of size s+1 are
    the size-s subsets extended past their highest member, so each subset
    appears exactly once and inherits its union in O(1).
    """
    n = len(adj)
    levels = [[(0, 0, -1)]]
    for s in range(1, cap + 1):
        cur = []
        for bits, un, _ in levels[s - 1]:
            for j in range(bits.bit_length(), n):
                nb = bits | (1 << j)
                cur.append((nb, un | adj[j], ~nb))
        if not cur:
            break
        levels.append(cur)
    return levels


def _scan_classes(xlevels, ylevels, classes, lb2, lb3, best):
    """Enumerate (X, Y) classes in order, keeping the best (num, den, key).

    ``best`` is (num, den, size, x_bits, y_bits) or None.  A class is
    skipped only when its counting lower bound is strictly worse than the
    incumbent, which cannot hide a minimizer or change tie-breaking.
    """
    for xs, ys in classes:
        s = xs + ys
        if best is not None:
            bn, bd = best[0], best[1]
            lo = max(Fraction(0), lb2[xs] - ys) + max(Fraction(0), lb3[ys] - xs)
            if lo * bd > bn * s:
                continue
        for xb, nb, nxb in xlevels[xs]:
            for yb, npb, nyb in ylevels[ys]:
                nsz = (nb & nyb).bit_count() + (npb & nxb).bit_count()
                if best is None:
                    best = (nsz, s, s, xb, yb)
                    continue
                lhs = nsz * best[1]
                rhs = best[0] * s
                if lhs < rhs or (lhs == rhs and (s, xb, yb) < best[2:]):
                    best = (nsz, s, s, xb, yb)
    return best


def brute_force_iso(
    graph: IsoGraph,
    size_cap: int | None = None,
    work_guard: int = DEFAULT_WORK_GUARD,
    threads: int = 1,
) -> IsoResult:
    """Exact minimum of |N(S)|/|S| by full enumeration.

    Ties resolve to the smallest |S|, then the lexicographically least
    (point bitset, block bitset) pair, independent of thread count.
    """
    v, b = graph.v, graph.b
    cap = graph.size_cap()
    if size_cap is not None:
        if size_cap < 1:
            raise IsoGraphError("size_cap must be >= 1")
        cap = min(cap, size_cap)
    work = brute_force_work(v, b, cap)
    if work > work_guard:
        raise WorkGuardExceeded(
            f"enumeration needs {work} subset visits > guard {work_guard}; "
            "raise the guard (ISO_WORK_GUARD) or use heuristic_iso with certificates"
        )
    xlevels = _adjacency_levels(graph.point_adj, min(cap, v))
    ylevels = _adjacency_levels(graph.block_adj, min(cap, b))
    p = graph.params
    lb2 = [lb_main2(p, x) for x in range(len(xlevels))]
    lb3 = [lb_main3(p, y) for y in range(len(ylevels))]

    classes = [
        (xs, ys)
        for s in range(1, cap + 1)
        for xs in range(0, min(s, len(xlevels) - 1) + 1)
        for ys in (s - xs,)
        if ys < len(ylevels)
    ]
    if threads <= 1:
        best = _scan_classes(xlevels, ylevels, classes, lb2, lb3, None)
    else:
        stripes = [classes[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(
                    lambda cs: _scan_classes(xlevels, ylevels, cs, lb2, lb3, None),
                    stripes,
                )
            )
        best = None
        for cand in results:
            if cand is None:
                continue
            if best is None:
                best = cand
                continue
            lhs = cand[0] * best[1]
            rhs = best[0] * cand[1]
            if lhs < rhs or (lhs == rhs and cand[2:] < best[2:]):
                best = cand
    if best is None:
        raise IsoGraphError("nothing to enumerate")
    nsz, s, _, xb, yb = best
    witness = VertexSubset(xb, yb)
    return IsoResult(
        ratio=Fraction(nsz, s),
        witness=witness,
        method="brute",
        flavor=graph.flavor,
        stats={"work_estimate": work, "size_cap": cap},
    )


# ----------------------------------------------------------------------
# heuristic search
# ----------------------------------------------------------------------


def _evaluate(graph: IsoGraph, x_bits: int, y_bits: int) -> tuple[int, int]:
    nb = graph.union_point_adj(x_bits) & ~y_bits
    np_ = graph.union_block_adj(y_bits) & ~x_bits
    return nb.bit_count() + np_.bit_count(), x_bits.bit_count() + y_bits.bit_count()


def _closure_kick(graph: IsoGraph, x_bits: int, y_bits: int, cap: int) -> int:
    """Add the blocks adjacent to X into Y, lowest ids first, up to the cap."""
    want = graph.union_point_adj(x_bits) & ~y_bits
    room = cap - x_bits.bit_count() - y_bits.bit_count()
    for j in _iter_bits(want):
        if room <= 0:
            break
        y_bits |= 1 << j
        room -= 1
    return y_bits


def _one_restart(graph: IsoGraph, rng: random.Random, eval_budget: int):
    v, b = graph.v, graph.b
    cap = graph.size_cap()
    n_all = v + b
    size0 = rng.randint(1, cap)
    ids = rng.sample(range(n_all), size0)
    x_bits = 0
    y_bits = 0
    for i in ids:
        if i < v:
            x_bits |= 1 << i
        else:
            y_bits |= 1 << (i - v)
    evals = 0

    def ratio(xb, yb):
        nonlocal evals
        evals += 1
        return _evaluate(graph, xb, yb)

    cur_n, cur_s = ratio(x_bits, y_bits)
    best = (cur_n, cur_s, cur_s, x_bits, y_bits)
    kicked = False
    order = list(range(n_all))
    while evals < eval_budget:
        improved = False
        rng.shuffle(order)
        for i in order:
            if evals >= eval_budget:
                break
            if i < v:
                nx, ny = x_bits ^ (1 << i), y_bits
            else:
                nx, ny = x_bits, y_bits ^ (1 << (i - v))
            ns = nx.bit_count() + ny.bit_count()
            if not 1 <= ns <= cap:
                continue
            nn, _ = ratio(nx, ny)
            # accept strict decrease of the ratio
            if nn * cur_s < cur_n * ns:
                x_bits, y_bits, cur_n, cur_s = nx, ny, nn, ns
                improved = True
                if nn * best[1] < best[0] * ns or (
                    nn * best[1] == best[0] * ns and (ns, nx, ny) < best[2:]
                ):
                    best = (nn, ns, ns, nx, ny)
        if not improved:
            # sampled swaps: one member out, one non-member in
            members = list(_iter_bits(x_bits)) + [v + j for j in _iter_bits(y_bits)]
            for _ in range(min(len(members) * 4, eval_budget - evals)):
                u = rng.choice(members)
                w = rng.randrange(n_all)
                nx, ny = x_bits, y_bits
                for i, on in ((u, False), (w, True)):
                    if i < v:
                        nx = nx & ~(1 << i) if not on else nx | (1 << i)
                    else:
                        jb = 1 << (i - v)
                        ny = ny & ~jb if not on else ny | jb
                if (nx, ny) == (x_bits, y_bits):
                    continue
                ns = nx.bit_count() + ny.bit_count()
                if not 1 <= ns <= cap:
                    continue
                nn, _ = ratio(nx, ny)
                if nn * cur_s < cur_n * ns:
                    x_bits, y_bits, cur_n, cur_s = nx, ny, nn, ns
                    improved = True
                    if nn * best[1] < best[0] * ns or (
                        nn * best[1] == best[0] * ns and (ns, nx, ny) < best[2:]
                    ):
                        best = (nn, ns, ns, nx, ny)
                    break
        if not improved:
            if not kicked:
                kicked = True
                ny = _closure_kick(graph, x_bits, y_bits, cap)
                if ny != y_bits:
                    y_bits = ny
                    cur_n, cur_s = ratio(x_bits, y_bits)
                    if cur_n * best[1] < best[0] * cur_s or (
                        cur_n * best[1] == best[0] * cur_s
                        and (cur_s, x_bits, y_bits) < best[2:]
                    ):
                        best = (cur_n, cur_s, cur_s, x_bits, y_bits)
                    continue
            break  # stagnated after the kick: give this restart up
    return best, evals


def heuristic_iso(
    graph: IsoGraph,
    budget: int = 20000,
    seed: int = 0,
    restarts: int = 16,
    threads: int = 1,
) -> IsoResult:
    """Seeded multi-start local search. Returns a valid (upper-bounding) ratio.

    The restart streams are fixed by (seed, restart index), so the result
    does not depend on the thread count.
    """
    if budget < 1 or restarts < 1:
        raise IsoGraphError("budget and restarts must be positive")
    per = max(1, budget // restarts)

    def run(i: int):
        rng = random.Random(f"{seed}:{i}")
        return _one_restart(graph, rng, per)

    if threads <= 1:
        outcomes = [run(i) for i in range(restarts)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, range(restarts)))
    best = None
    used = 0
    for cand, evals in outcomes:
        used += evals
        if best is None:
            best = cand
            continue
        lhs = cand[0] * best[1]
        rhs = best[0] * cand[1]
        if lhs < rhs or (lhs == rhs and cand[2:] < best[2:]):
            best = cand
    nsz, s, _, xb, yb = best
    return IsoResult(
        ratio=Fraction(nsz, s),
        witness=VertexSubset(xb, yb),
        method="heuristic",
        flavor=graph.flavor,
        stats={"evaluations": used, "restarts": restarts, "seed": seed},
    )


# ----------------------------------------------------------------------
# exports
# ----------------------------------------------------------------------


def graph_to_json_dict(graph: IsoGraph) -> dict:
    return {
        "v": graph.v,
        "b": graph.b,
        "flavor": graph.flavor,
        "edges": graph.edges,
        "point_adj": [sorted(_iter_bits(a)) for a in graph.point_adj],
    }


def graph_to_dimacs(graph: IsoGraph) -> str:
    """Edge list with 1-indexed ids: 'p bip v b e' then 'e <point> <block>'."""
    lines = [f"p bip {graph.v} {graph.b} {graph.edges}"]
    for p, adj in enumerate(graph.point_adj):
        for j in _iter_bits(adj):
            lines.append(f"e {p + 1} {j + 1}")
    return "\n".join(lines) + "\n"
