"""2-designs and unital constructions.

A design is a point set 0..v-1 plus a list of blocks (sorted tuples of
point ids, lexicographically ordered).  Every construction and every
import goes through :func:`validate_design`, which recovers the parameter
tuple (v, b, r, k, lambda) by counting and checks the standard identities
vr = bk and r(k-1) = lambda(v-1).

Unitals of order n are the 2-(n^3+1, n+1, 1) designs.  Two embedded
families are built from PG(2, q^2):

* the classical curve of degree q+1 cut out by the norm form
  x0^(q+1) + x1^(q+1) + x2^(q+1) = 0, with q^3+1 rational points;
* the parabolic family with point set
  {(x, a*x^2 + b*x^(q+1) + r, 1) : x in GF(q^2), r in GF(q)} + {(0,1,0)},
  admissible for odd q when (b^q - b)^2 + 4*a^(q+1) is a nonzero
  non-square of GF(q), and for even q when b lies outside GF(q) and
  a^(q+1) / (b^q + b)^2 has absolute trace 0.

In both families the blocks are the secant-line sections: every ambient
line meets the point set in 1 or q+1 points, and the (q+1)-point
sections, re-indexed along the embedding, form the block list.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .gf import FieldError, gf, prime_power
from .plane import ProjectivePlane


class DesignError(ValueError):
    """Block data that is not a 2-design, or parameters out of range."""


class AdmissibilityError(DesignError):
    """Parabolic parameters that do not yield a unital."""


@dataclass(frozen=True)
class DesignParams:
    v: int
    b: int
    r: int
    k: int
    lam: int

    def __post_init__(self):
        if self.v * self.r != self.b * self.k:
            raise DesignError(f"vr != bk for {self}")
        if self.r * (self.k - 1) != self.lam * (self.v - 1):
            raise DesignError(f"r(k-1) != lambda(v-1) for {self}")
        if not (self.v > self.k >= 2 and self.lam >= 1 and self.r >= 1):
            raise DesignError(f"need v > k >= 2 and positive r, lambda, got {self}")

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.v, self.b, self.r, self.k, self.lam)


def unital_params(n: int) -> DesignParams:
    return DesignParams(n**3 + 1, n**4 - n**3 + n**2, n**2, n + 1, 1)


def unital_order(params: DesignParams) -> int | None:
    """The n with params == unital_params(n), or None."""
    n = params.k - 1
    if n >= 2 and params.as_tuple() == unital_params(n).as_tuple():
        return n
    return None


def complement_params(params: DesignParams) -> DesignParams:
    v, b, r, k, lam = params.as_tuple()
    return DesignParams(v, b, b - r, v - k, b - 2 * r + lam)


def validate_design(v: int, blocks) -> DesignParams:
    """Check that blocks form a 2-design on v points and recover parameters."""
    if v < 2:
        raise DesignError("need at least two points")
    if not blocks:
        raise DesignError("empty block list")
    k = len(blocks[0])
    degrees = [0] * v
    paircount = [0] * (v * v)
    for B in blocks:
        if len(B) != k:
            raise DesignError(f"block {B} has size {len(B)}, expected {k}")
        prev = -1
        for p in B:
            if not 0 <= p < v:
                raise DesignError(f"point {p} out of range in block {B}")
            if p <= prev:
                raise DesignError(f"block {B} is not strictly increasing")
            prev = p
            degrees[p] += 1
        for i in range(k):
            base = B[i] * v
            for j in range(i + 1, k):
                paircount[base + B[j]] += 1
    lam = paircount[blocks[0][0] * v + blocks[0][1]]
    for i in range(v):
        base = i * v
        for j in range(i + 1, v):
            if paircount[base + j] != lam:
                raise DesignError(
                    f"pair ({i}, {j}) lies in {paircount[base + j]} blocks, expected {lam}"
                )
    r = degrees[0]
    bad = next((i for i, d in enumerate(degrees) if d != r), None)
    if bad is not None:
        raise DesignError(f"point {bad} has degree {degrees[bad]}, expected {r}")
    return DesignParams(v, len(blocks), r, k, lam)


class Design:
    """A validated 2-design with canonical block order."""

    def __init__(self, v: int, blocks, provenance: dict | None = None):
        canon = sorted(tuple(sorted(B)) for B in blocks)
        self.v = v
        self.blocks: tuple[tuple[int, ...], ...] = tuple(canon)
        self.params = validate_design(v, self.blocks)
        self.provenance = dict(provenance or {"kind": "imported"})

    @property
    def b(self) -> int:
        return self.params.b

    def block_bitsets(self) -> list[int]:
        out = []
        for B in self.blocks:
            bits = 0
            for p in B:
                bits |= 1 << p
            out.append(bits)
        return out

    def point_block_bitsets(self) -> list[int]:
        out = [0] * self.v
        for j, B in enumerate(self.blocks):
            for p in B:
                out[p] |= 1 << j
        return out

    def to_json_dict(self) -> dict:
        return {
            "v": self.v,
            "blocks": [list(B) for B in self.blocks],
            "provenance": self.provenance,
        }

    def __repr__(self) -> str:
        t = self.params.as_tuple()
        return f"Design{t}[{self.provenance.get('kind', '?')}]"


# ----------------------------------------------------------------------
# JSON round trip
# ----------------------------------------------------------------------


def canonical_json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()


def design_to_json_bytes(design: Design) -> bytes:
    return canonical_json_bytes(design.to_json_dict())


def design_hash(design: Design) -> str:
    return hashlib.sha256(design_to_json_bytes(design)).hexdigest()


def design_from_json_dict(d: dict) -> Design:
    try:
        v = d["v"]
        blocks = d["blocks"]
    except (KeyError, TypeError) as e:
        raise DesignError(f"malformed design object: missing {e}") from e
    return Design(v, blocks, d.get("provenance"))


def save_design(design: Design, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(design_to_json_bytes(design))


def load_design(path: str) -> Design:
    with open(path, "rb") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as e:
            raise DesignError(f"{path} is not valid JSON: {e}") from e
    return design_from_json_dict(d)


def complement(design: Design) -> Design:
    """The design whose blocks are the point-set complements."""
    allpts = set(range(design.v))
    blocks = [tuple(sorted(allpts.difference(B))) for B in design.blocks]
    prov = {"kind": "complement", "of": design.provenance}
    out = Design(design.v, blocks, prov)
    if out.params != complement_params(design.params):
        raise DesignError("complement parameters disagree with the arithmetic prediction")
    return out


# ----------------------------------------------------------------------
# constructions
# ----------------------------------------------------------------------


def construct_order2_unital() -> Design:
    """The 2-(9, 3, 1) design: the nine-point affine plane with all twelve lines."""
    blocks = []
    for m in range(3):
        for c in range(3):
            blocks.append(tuple(sorted(3 * x + (m * x + c) % 3 for x in range(3))))
    for c in range(3):
        blocks.append(tuple(3 * c + y for y in range(3)))
    d = Design(9, blocks, {"kind": "order2"})
    if d.params.as_tuple() != (9, 12, 4, 3, 1):
        raise DesignError("order-2 unital has wrong parameters")
    return d


def _quadratic_context(q: int):
    p, e = prime_power(q)
    field = gf(p, 2 * e)
    return field, ProjectivePlane(field)


def _blocks_from_embedded(plane: ProjectivePlane, point_ids: list[int], q: int):
    """Secant sections of an embedded (q^3+1)-point set, as design blocks.

    Asserts the 1-or-(q+1) line dichotomy and that the tangent count
    equals the point count.
    """
    idx = {pid: i for i, pid in enumerate(point_ids)}
    members = set(point_ids)
    blocks = []
    tangents = 0
    for pids in plane.line_points:
        hit = [p for p in pids if p in members]
        if len(hit) == 1:
            tangents += 1
        elif len(hit) == q + 1:
            blocks.append(tuple(sorted(idx[p] for p in hit)))
        else:
            raise DesignError(
                f"line section of size {len(hit)} breaks the 1-or-(q+1) dichotomy"
            )
    if tangents != len(point_ids):
        raise DesignError(f"{tangents} tangent lines for {len(point_ids)} points")
    return blocks


def construct_hermitian(q: int) -> Design:
    """The classical unital of order q from the norm-form curve in PG(2, q^2)."""
    if q <= 2:
        raise DesignError("the curve construction needs a prime power q > 2")
    field, plane = _quadratic_context(q)
    zero_sum = []
    for pid, (x0, x1, x2) in enumerate(plane.points):
        s = field.add(
            field.add(field.norm_to_subfield(x0), field.norm_to_subfield(x1)),
            field.norm_to_subfield(x2),
        )
        if s == 0:
            zero_sum.append(pid)
    if len(zero_sum) != q**3 + 1:
        raise DesignError(f"curve has {len(zero_sum)} points, expected {q**3 + 1}")
    blocks = _blocks_from_embedded(plane, zero_sum, q)
    d = Design(q**3 + 1, blocks, {"kind": "hermitian", "q": q})
    if d.params.as_tuple() != unital_params(q).as_tuple():
        raise DesignError("curve construction produced wrong parameters")
    return d


def bm_admissible(q: int, alpha: int, beta: int) -> tuple[bool, str]:
    """Check the parabolic admissibility condition. Returns (ok, reason)."""
    field, _ = _quadratic_context(q)
    field._check(alpha)
    field._check(beta)
    if q % 2:
        t = field.sub(field.frobenius_q(beta), beta)
        four = 4 % field.p
        disc = field.add(field.mul(t, t), field.mul(four, field.norm_to_subfield(alpha)))
        if not field.in_subfield(disc):
            raise DesignError("discriminant landed outside GF(q)")
        if disc == 0:
            return False, "discriminant is zero"
        if field.subfield_is_square(disc):
            return False, "discriminant is a square in GF(q)"
        return True, "ok"
    if field.in_subfield(beta):
        return False, "beta lies in GF(q)"
    s = field.add(field.frobenius_q(beta), beta)
    val = field.div(field.norm_to_subfield(alpha), field.mul(s, s))
    if field.subfield_trace_bit(val) != 0:
        return False, "trace condition fails"
    return True, "ok"


def construct_bm(q: int, alpha: int, beta: int) -> Design:
    """A parabolic unital of order q in PG(2, q^2) for admissible (alpha, beta)."""
    ok, reason = bm_admissible(q, alpha, beta)
    if not ok:
        raise AdmissibilityError(f"(alpha={alpha}, beta={beta}) inadmissible for q={q}: {reason}")
    field, plane = _quadratic_context(q)
    sub = field.subfield_elements()
    point_ids = set()
    for x in field.elements():
        xx = field.mul(x, x)
        xq1 = field.norm_to_subfield(x)
        y0 = field.add(field.mul(alpha, xx), field.mul(beta, xq1))
        for r in sub:
            t = plane.normalize((x, field.add(y0, r), 1))
            pid = plane.point_id[t]
            if pid in point_ids:
                raise DesignError("parabolic point set has a collision")
            point_ids.add(pid)
    infinity = plane.point_id[(0, 1, 0)]
    if infinity in point_ids:
        raise DesignError("point at infinity collided with an affine point")
    point_ids.add(infinity)
    if len(point_ids) != q**3 + 1:
        raise DesignError(f"parabolic set has {len(point_ids)} points, expected {q**3 + 1}")
    ordered = sorted(point_ids)
    blocks = _blocks_from_embedded(plane, ordered, q)
    d = Design(
        q**3 + 1, blocks, {"kind": "bm", "q": q, "alpha": alpha, "beta": beta}
    )
    if d.params.as_tuple() != unital_params(q).as_tuple():
        raise DesignError("parabolic construction produced wrong parameters")
    return d


def admissible_bm_pairs(q: int):
    """All admissible (alpha, beta) pairs over GF(q^2)^2, ascending."""
    field, _ = _quadratic_context(q)
    out = []
    for alpha in field.elements():
        for beta in field.elements():
            ok, _ = bm_admissible(q, alpha, beta)
            if ok:
                out.append((alpha, beta))
    return out
