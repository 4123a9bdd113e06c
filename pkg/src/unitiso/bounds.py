"""Closed-form isoperimetric bounds for unitals, with checkable certificates.

A unital of order n has v = n^3 + 1 points and b = n^2(n^2 - n + 1) blocks
of size n + 1, every point on r = n^2 blocks, every pair on one.  For its
incidence graph the minimum of |N(S)|/|S| over subsets spanning at most
half the vertices is pinned between

    2(n^3 + 1 - floor(c(n))) / (n^2(n^2 + 1))

and the same expression with floor(c(n)) replaced by min(m, floor(c(n))),
m the largest arc size.  Here c(n) is where the closed block coverage of a
growing arc crosses half the vertex count; g_of measures that coverage and
floor_c inverts it in pure integer arithmetic.

construct_extremal_set realizes the upper bound as an explicit subset and
returns a certificate any third party can replay; verify_certificate is
that replay.  audit_lowerbound_machinery re-checks, in exact rational
arithmetic on integer grids, every inequality the lower-bound argument
rests on.  None of this is a formal proof, but a falsified inequality
anywhere would surface here as an AuditError.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .arcs import is_arc
from .designs import Design, design_hash, unital_order
from .isograph import IsoGraph, build_graph, iso_ratio, neighborhood, subset_from_ids


class BoundsError(ValueError):
    pass


class CertificateError(RuntimeError):
    """A stored certificate does not replay on the given design."""


class AuditError(RuntimeError):
    """An inequality the lower-bound argument relies on failed at a point."""


# exhaustive audit grids up to here; sampled (and marked so) beyond
AUDIT_EXHAUSTIVE_MAX = 12


def g_of(n: int, z: int) -> int:
    """Size of a z-point arc plus the blocks meeting it: (n^2+1)z - z(z-1)/2.

    Exact integer; increasing and concave for 0 <= z <= n^2 + 1.
    """
    if n < 2:
        raise BoundsError(f"order {n} out of range, need n >= 2")
    if not 0 <= z <= n * n + 1:
        raise BoundsError(f"z = {z} outside 0..{n * n + 1}")
    return (n * n + 1) * z - z * (z - 1) // 2


def _floor_c_isqrt(n: int) -> int:
    # largest z with 2(n^2 - z) + 3 >= sqrt(8n^2 + 9)
    d = 8 * n * n + 9
    t = isqrt(d)
    if t * t < d:
        t += 1
    return n * n - (t - 2) // 2


def floor_c(n: int) -> int:
    """Largest integer z with g_of(n, z) <= n^2(n^2+1)/2.

    Computed two independent ways (monotone search on g_of and an integer
    square root of the closed form) which must agree.
    """
    if n < 2:
        raise BoundsError(f"order {n} out of range, need n >= 2")
    cap = n * n * (n * n + 1) // 2
    lo, hi = 0, n * n + 1  # g_of is increasing here and exceeds cap at hi
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if g_of(n, mid) <= cap:
            lo = mid
        else:
            hi = mid - 1
    root = _floor_c_isqrt(n)
    if lo != root:
        raise BoundsError(f"floor_c methods disagree at n={n}: scan {lo}, root {root}")
    return lo


def floor_c_scan(n_max: int):
    """Yield (n, floor_c(n)) for n = 2..n_max.

    Walks the threshold incrementally from one n to the next and
    cross-checks every value against the integer-square-root form, so a
    full scan is a self-test of both methods.
    """
    if n_max < 2:
        raise BoundsError("scan needs n_max >= 2")
    z = 2
    for n in range(2, n_max + 1):
        nn = n * n
        cap = nn * (nn + 1) // 2
        # the threshold advances by roughly 2n per step
        z = min(z + 2 * n, nn)
        while (nn + 1) * z - z * (z - 1) // 2 > cap:
            z -= 1
        while z < nn and (nn + 1) * (z + 1) - (z + 1) * z // 2 <= cap:
            z += 1
        if z != _floor_c_isqrt(n):
            raise BoundsError(f"floor_c methods disagree at n={n}")
        yield n, z


@dataclass(frozen=True)
class BoundReport:
    n: int
    floor_c: int
    lower: Fraction
    upper: Fraction
    m_used: int
    pinch: bool

    def __post_init__(self):
        assert self.lower <= self.upper
        assert self.pinch == (self.m_used >= self.floor_c)


def theorem1_bounds(n: int, m_arc: int) -> BoundReport:
    """Two-sided bounds on the incidence isoperimetric number.

    m_arc is any certified arc size of the unital at hand; the bounds
    pinch to equality as soon as it reaches floor_c(n).
    """
    if n < 2:
        raise BoundsError(f"order {n} out of range, need n >= 2")
    if m_arc < 3:
        raise BoundsError(f"arc size {m_arc} too small, need at least 3")
    c = floor_c(n)
    den = n * n * (n * n + 1)
    lower = Fraction(2 * (n ** 3 + 1 - c), den)
    upper = Fraction(2 * (n ** 3 + 1 - min(m_arc, c)), den)
    return BoundReport(n, c, lower, upper, m_arc, m_arc >= c)


def theorem2_value(n: int) -> Fraction:
    """Exact isoperimetric number of the non-incidence graph."""
    if n < 2:
        raise BoundsError(f"order {n} out of range, need n >= 2")
    if n == 2:
        return Fraction(4, 5)
    return Fraction(2 * (n ** 3 + 1), n * n * (n * n + 1))


def corollary4_m_bound(n: int, iso_value: Fraction) -> Fraction:
    """Cap on the largest arc size implied by an isoperimetric value.

    Feeding back the theorem1 lower bound returns exactly floor_c(n);
    any unital whose largest arc beats the cap pins its isoperimetric
    number to the lower bound instead.
    """
    iso_value = Fraction(iso_value)
    if not 0 < iso_value <= n * n:
        raise BoundsError(f"isoperimetric value {iso_value} out of range")
    return n ** 3 + 1 - Fraction(n * n * (n * n + 1), 2) * iso_value


# ----------------------------------------------------------------------
# extremal subset certificates
# ----------------------------------------------------------------------


def construct_extremal_set(design: Design, arc, graph: IsoGraph | None = None) -> dict:
    """Build the half-spanning subset that realizes the theorem1 upper bound.

    Takes the first x = min(|arc|, floor_c(n)) points of the arc, all
    blocks meeting them, and pads with the lowest-id remaining blocks up
    to n^2(n^2+1)/2 total vertices.  Every count the argument predicts is
    recomputed on the actual graph; the returned certificate carries the
    witness, the measured ratio, and the checks that passed.
    """
    params = design.params
    n = unital_order(params)
    if n is None:
        raise BoundsError(f"design {params} is not a unital")
    arc = sorted(arc)
    m = len(arc)
    if m < 3:
        raise BoundsError(f"arc of size {m} too small, need at least 3")
    if not is_arc(design, arc):
        raise CertificateError("witness point set is not an arc")
    report = theorem1_bounds(n, m)
    c = report.floor_c
    x = min(m, c)
    pts = arc[:x]
    xbits = 0
    for p in pts:
        xbits |= 1 << p
    meeting = [j for j, bb in enumerate(design.block_bitsets()) if bb & xbits]
    # x points of an arc meet exactly n^2 x - C(x,2) blocks
    expect = g_of(n, x) - x
    if len(meeting) != expect:
        raise CertificateError(
            f"{x} arc points meet {len(meeting)} blocks, expected {expect}"
        )
    quota = n * n * (n * n + 1) // 2 - x
    assert len(meeting) <= quota  # guaranteed by x <= floor_c(n)
    ybits = 0
    for j in meeting:
        ybits |= 1 << j
    blocks = list(meeting)
    j = 0
    while len(blocks) < quota:
        if not ybits >> j & 1:
            blocks.append(j)
            ybits |= 1 << j
        j += 1
    if graph is None:
        graph = build_graph(design, "incidence")
    s = subset_from_ids(pts, blocks)
    nb = neighborhood(graph, s)
    ratio = iso_ratio(graph, s)
    checks = {
        "arc_property": True,
        "secant_tangent_count": True,
        "block_side_clean": nb.y_size == 0,
        "within_theorem_upper": ratio <= report.upper,
    }
    if report.pinch:
        checks["pinch_equals_lower"] = ratio == report.lower
    for name, ok in checks.items():
        if not ok:
            raise CertificateError(f"extremal construction check failed: {name}")
    return {
        "kind": "extremal-subset",
        "design": {
            "hash": design_hash(design),
            "params": list(params.as_tuple()),
            "provenance": design.provenance,
        },
        "n": n,
        "floor_c": c,
        "arc": arc,
        "x": x,
        "witness": {"points": pts, "blocks": sorted(blocks)},
        "sizes": {"subset": s.size, "neighborhood": nb.size},
        "claimed": {"num": ratio.numerator, "den": ratio.denominator},
        "bounds": {
            "lower": {"num": report.lower.numerator, "den": report.lower.denominator},
            "upper": {"num": report.upper.numerator, "den": report.upper.denominator},
            "m_used": m,
            "pinch": report.pinch,
        },
        "checks": checks,
    }


def verify_certificate(cert: dict, design: Design, graph: IsoGraph | None = None) -> dict:
    """Replay a stored certificate against a design, field by field.

    Raises CertificateError naming the first discrepancy; returns the
    dict of checks (all true) otherwise.
    """
    try:
        kind = cert["kind"]
        stored_hash = cert["design"]["hash"]
        arc = list(cert["arc"])
        pts = list(cert["witness"]["points"])
        blocks = list(cert["witness"]["blocks"])
        claimed = Fraction(cert["claimed"]["num"], cert["claimed"]["den"])
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise CertificateError(f"malformed certificate: {exc}") from exc
    if kind != "extremal-subset":
        raise CertificateError(f"unknown certificate kind {kind!r}")
    if stored_hash != design_hash(design):
        raise CertificateError("design hash mismatch")
    rebuilt = construct_extremal_set(design, arc, graph)
    if rebuilt["witness"]["points"] != sorted(pts):
        raise CertificateError("point witness does not match the construction")
    if rebuilt["witness"]["blocks"] != sorted(blocks):
        raise CertificateError("block witness does not match the construction")
    if Fraction(rebuilt["claimed"]["num"], rebuilt["claimed"]["den"]) != claimed:
        raise CertificateError(
            f"claimed ratio {claimed} does not replay, got "
            f"{rebuilt['claimed']['num']}/{rebuilt['claimed']['den']}"
        )
    for key in ("n", "floor_c", "x", "sizes", "bounds"):
        if key in cert and cert[key] != rebuilt[key]:
            raise CertificateError(f"certificate field {key!r} does not replay")
    return rebuilt["checks"]


# ----------------------------------------------------------------------
# audits of the lower-bound argument
# ----------------------------------------------------------------------


@dataclass
class AuditReport:
    n: int
    mode: str  # "exhaustive" or "sampled"
    checked: dict


def _rational_le_c(num: int, den: int, n: int) -> bool:
    # is num/den <= c(n) = (2n^2 + 3 - sqrt(8n^2 + 9)) / 2, exactly
    if den < 0:
        num, den = -num, -den
    m = (2 * n * n + 3) * den - 2 * num
    return m >= 0 and m * m >= (8 * n * n + 9) * den * den


def _h_value(n: int, z: int) -> Fraction:
    a = (n + 1) ** 2
    return z - (1 - Fraction(a, 4 * z)) * (
        Fraction(n ** 4 * z, n * n - 1 + z) + z - Fraction(n ** 4 + n * n, 2)
    )


def _audit_grid_stripe(n: int, c: int, xs, ys_for) -> int:
    a = (n + 1) ** 2
    p = n * n * (n + 1)
    q = n * n * (n - 1)
    v = n ** 3 + 1
    t = n * n * (n * n + 1)
    ra = 2 * (v - c) * a
    count = 0
    for x in xs:
        # f(x, y) times a(q + y), split into constant and linear-in-y parts
        c0 = x * q * (4 * v - a)
        c1 = 4 * x * (v - p) + a * (p - x)
        for y in ys_for(x):
            if x + y == 0:
                continue
            if (c0 + c1 * y) * t < ra * (x + y) * (q + y):
                raise AuditError(f"grid inequality fails at n={n}, x={x}, y={y}")
            count += 1
    return count


def audit_lowerbound_machinery(
    n: int, seed: int = 0, samples: int = 64, threads: int = 1
) -> AuditReport:
    """Recheck every inequality behind the theorem1 lower bound at order n.

    Exhaustive integer grids up to n = 12, stratified seeded samples
    beyond (the report says which).  All comparisons are exact: integer
    cross-multiplication or Fraction arithmetic, never floats.
    """
    if n < 3:
        raise BoundsError("the audit applies from order 3 up")
    c = floor_c(n)
    exhaustive = n <= AUDIT_EXHAUSTIVE_MAX
    rng = random.Random(f"{seed}:{n}")
    a = (n + 1) ** 2
    xmax = a // 4
    ymax = (n ** 4 - n ** 3 + n * n) // 2
    checked = {}

    if exhaustive:
        xs = range(xmax + 1)
        ys_for = lambda x: range(ymax + 1)
    else:
        xpool = sorted({0, 1, xmax} | {rng.randint(0, xmax) for _ in range(samples)})
        ypool = sorted({0, 1, ymax} | {rng.randint(0, ymax) for _ in range(samples)})
        xs = xpool
        ys_for = lambda x: ypool
    if threads > 1:
        stripes = [list(xs)[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = pool.map(lambda st: _audit_grid_stripe(n, c, st, ys_for), stripes)
        checked["grid"] = sum(counts)
    else:
        checked["grid"] = _audit_grid_stripe(n, c, xs, ys_for)

    # positivity of the slope once y is pushed past half the blocks
    if 4 * (n ** 3 + 1) * (n - 1) <= a * (n * n + n - 1):
        raise AuditError(f"slope coefficient fails to be positive at n={n}")
    checked["slope_coefficient"] = 1

    if not _rational_le_c(2 * n * n - 3 * (n - 1), 2, n):
        raise AuditError(f"threshold undercut n^2 - 3(n-1)/2 fails at n={n}")
    # n^2 - 3(n-1)/2 >= n(n+1)/2 >= (n+1)^2/4, both plain integer facts
    if (n - 1) * (n - 3) < 0 or 2 * n < n + 1:
        raise AuditError(f"threshold chain fails at n={n}")
    checked["threshold_floor"] = 3

    h_at = _h_value(n, n * n)
    if not _rational_le_c(h_at.numerator, h_at.denominator, n):
        raise AuditError(f"h(n^2) = {h_at} exceeds the threshold at n={n}")
    checked["h_start"] = 1

    if exhaustive:
        zs = range(n * n, n ** 3 + 1)
    else:
        zs = sorted(
            {n * n, n ** 3} | {rng.randint(n * n, n ** 3) for _ in range(samples)}
        )
    count = 0
    for z in zs:
        if _h_value(n, z + 1) > _h_value(n, z):
            raise AuditError(f"h increases from z={z} at n={n}")
        count += 1
    checked["h_decreasing"] = count

    gc = g_of(n, c)
    gn2 = g_of(n, n * n)
    if exhaustive:
        xs2 = range(c + 1, n * n + 1)
    else:
        xs2 = sorted({c + 1, n * n} | {rng.randint(c + 1, n * n) for _ in range(samples)})
    count = 0
    for x in xs2:
        snum = g_of(n, x) - gc
        sden = x - c
        # chords of a concave function from a fixed left end flatten rightward
        if snum * (n * n - c) < (gn2 - gc) * sden:
            raise AuditError(f"concavity chord fails at n={n}, x={x}")
        if 4 * x <= a:
            raise AuditError(f"slope denominator not positive at n={n}, x={x}")
        if snum * (4 * x - a) < 4 * x * sden:
            raise AuditError(f"slope link fails at n={n}, x={x}")
        count += 1
    checked["slope_chain"] = count

    return AuditReport(n, "exhaustive" if exhaustive else "sampled", checked)
