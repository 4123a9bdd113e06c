"""The classical projective plane PG(2, F) over a finite field.

Points and lines are homogeneous coordinate triples normalized so the
first nonzero coordinate is 1, stored as tuples of element indices and
addressed by dense integer ids (ascending in the lexicographic order of
the normalized triples).  A point lies on a line when the bilinear dot
product of their triples vanishes.
"""

from __future__ import annotations

from .gf import GF, FieldError, gf_of_order


class PlaneError(ValueError):
    pass


class ProjectivePlane:
    def __init__(self, field: GF):
        self.field = field
        m = field.order
        self.order = m  # plane order = field order

        pts = [(0, 0, 1)]
        pts += [(0, 1, a) for a in range(m)]
        pts += [(1, a, b) for a in range(m) for b in range(m)]
        pts.sort()
        if len(pts) != m * m + m + 1:
            raise PlaneError("wrong point count")
        self.points: list[tuple[int, int, int]] = pts
        self.point_id: dict[tuple[int, int, int], int] = {t: i for i, t in enumerate(pts)}
        # lines carry the same normalized triples under duality
        self.lines = pts
        self.line_id = self.point_id

        self.line_points: list[tuple[int, ...]] = [
            self._solve_line(t) for t in self.lines
        ]
        self.point_lines: list[tuple[int, ...]] = self._transpose()

    # -- coordinate plumbing ------------------------------------------------

    def normalize(self, triple) -> tuple[int, int, int]:
        F = self.field
        x0, x1, x2 = triple
        for lead in (x0, x1, x2):
            if lead:
                s = F.inv(lead)
                return (F.mul(s, x0), F.mul(s, x1), F.mul(s, x2))
        raise PlaneError("zero triple has no projective class")

    def dot(self, a, b) -> int:
        F = self.field
        return F.add(F.add(F.mul(a[0], b[0]), F.mul(a[1], b[1])), F.mul(a[2], b[2]))

    def incident(self, point_id: int, line_id: int) -> bool:
        return self.dot(self.points[point_id], self.lines[line_id]) == 0

    def line_through(self, pid1: int, pid2: int) -> int:
        """Id of the unique line joining two distinct points (cross product)."""
        if pid1 == pid2:
            raise PlaneError("two distinct points are needed to span a line")
        F = self.field
        x0, x1, x2 = self.points[pid1]
        y0, y1, y2 = self.points[pid2]
        c0 = F.sub(F.mul(x1, y2), F.mul(x2, y1))
        c1 = F.sub(F.mul(x2, y0), F.mul(x0, y2))
        c2 = F.sub(F.mul(x0, y1), F.mul(x1, y0))
        return self.line_id[self.normalize((c0, c1, c2))]

    def _solve_line(self, line: tuple[int, int, int]) -> tuple[int, ...]:
        """Ids of the order+1 points on a line, from a kernel basis."""
        F = self.field
        pivot = next(i for i in range(3) if line[i])
        free = [i for i in range(3) if i != pivot]
        inv_lead = F.inv(line[pivot])

        def kernel_vec(v_free0: int, v_free1: int) -> tuple[int, int, int]:
            v = [0, 0, 0]
            v[free[0]] = v_free0
            v[free[1]] = v_free1
            s = F.add(F.mul(line[free[0]], v_free0), F.mul(line[free[1]], v_free1))
            v[pivot] = F.neg(F.mul(inv_lead, s))
            return tuple(v)

        ids = [self.point_id[self.normalize(kernel_vec(0, 1))]]
        for t in range(F.order):
            ids.append(self.point_id[self.normalize(kernel_vec(1, t))])
        ids = sorted(set(ids))
        if len(ids) != self.order + 1:
            raise PlaneError("line does not carry order+1 points")
        return tuple(ids)

    def _transpose(self) -> list[tuple[int, ...]]:
        through: list[list[int]] = [[] for _ in self.points]
        for lid, pids in enumerate(self.line_points):
            for pid in pids:
                through[pid].append(lid)
        out = [tuple(ls) for ls in through]
        if any(len(ls) != self.order + 1 for ls in out):
            raise PlaneError("point does not carry order+1 lines")
        return out

    def to_json_dict(self) -> dict:
        return {
            "field": self.field.serialize(),
            "order": self.order,
            "points": [list(t) for t in self.points],
            "lines": [list(t) for t in self.lines],
            "line_points": [list(t) for t in self.line_points],
        }

    def __repr__(self) -> str:
        return f"ProjectivePlane(order={self.order})"


def plane_of_order(m: int) -> ProjectivePlane:
    try:
        return ProjectivePlane(gf_of_order(m))
    except FieldError as e:
        raise PlaneError(str(e)) from e
