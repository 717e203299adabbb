"""Affine flats in R^4 and exact incidence classification.

Lines, 2-flats and hyperplanes are stored in a canonical form, so
structural equality coincides with geometric equality and the objects
hash consistently for deduplication and rich-flat bucketing.

All coordinates are `fractions.Fraction`; every classification is an
exact linear-algebra decision.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .exactpoly import ONE, ZERO, rat

Point4 = tuple[Fraction, Fraction, Fraction, Fraction]


class IdenticalLinesError(ValueError):
    """span_flat2_of_lines needs two distinct lines."""


class InvariantViolationError(ValueError):
    """A flat failed its structural invariants (zero direction, dependent span...)."""


def vec(values) -> Point4:
    out = tuple(rat(v) for v in values)
    if len(out) != 4:
        raise InvariantViolationError(f"expected 4 coordinates, got {len(out)}")
    return out


def vdot(a, b) -> Fraction:
    return sum(x * y for x, y in zip(a, b))


def vsub(a, b) -> Point4:
    return tuple(x - y for x, y in zip(a, b))


def vadd(a, b) -> Point4:
    return tuple(x + y for x, y in zip(a, b))


def vscale(a, k) -> Point4:
    k = rat(k)
    return tuple(x * k for x in a)


def is_zero_vec(a) -> bool:
    return all(x == 0 for x in a)


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [row[:] for row in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = ONE / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def matrix_rank(rows) -> int:
    return len(rref([list(map(rat, row)) for row in rows])[0])


# ---------------------------------------------------------------------------
# Flat types (canonical on construction)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Line4:
    """Affine line: base + t*direction.

    Canonical: direction scaled so its first nonzero coordinate is 1 and
    the base's coordinate at that pivot is 0.
    """

    base: Point4
    direction: Point4

    def __init__(self, base, direction):
        b, d = vec(base), vec(direction)
        if is_zero_vec(d):
            raise InvariantViolationError("line direction must be nonzero")
        pivot = next(i for i, x in enumerate(d) if x != 0)
        d = vscale(d, ONE / d[pivot])
        b = vsub(b, vscale(d, b[pivot]))
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "direction", d)

    def point_at(self, t) -> Point4:
        return vadd(self.base, vscale(self.direction, t))

    def contains_point(self, p) -> bool:
        diff = vsub(vec(p), self.base)
        pivot = next(i for i, x in enumerate(self.direction) if x != 0)
        t = diff[pivot] / self.direction[pivot]
        return diff == vscale(self.direction, t)


@dataclass(frozen=True)
class Flat2:
    """Affine 2-flat: base + a*u + b*v.

    Canonical: (u, v) replaced by the reduced row echelon basis of their
    span, base reduced to have zeros at both pivot coordinates.
    """

    base: Point4
    u: Point4
    v: Point4

    def __init__(self, base, u, v):
        b = vec(base)
        rows, pivots = rref([list(vec(u)), list(vec(v))])
        if len(rows) != 2:
            raise InvariantViolationError("2-flat spanning vectors must be independent")
        r1, r2 = (tuple(r) for r in rows)
        b = vsub(b, vadd(vscale(r1, b[pivots[0]]), vscale(r2, b[pivots[1]])))
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "u", r1)
        object.__setattr__(self, "v", r2)

    def point_at(self, a, b) -> Point4:
        return vadd(self.base, vadd(vscale(self.u, a), vscale(self.v, b)))

    def contains_point(self, p) -> bool:
        diff = vsub(vec(p), self.base)
        rows, pivots = rref([list(self.u), list(self.v)])
        a = diff[pivots[0]]
        b = diff[pivots[1]]
        combo = vadd(vscale(tuple(rows[0]), a), vscale(tuple(rows[1]), b))
        return diff == combo


@dataclass(frozen=True)
class Hyperplane3:
    """Affine hyperplane {x : normal . x = offset}; first nonzero normal
    coordinate scaled to 1."""

    normal: Point4
    offset: Fraction

    def __init__(self, normal, offset):
        n = vec(normal)
        if is_zero_vec(n):
            raise InvariantViolationError("hyperplane normal must be nonzero")
        pivot = next(i for i, x in enumerate(n) if x != 0)
        scale = ONE / n[pivot]
        object.__setattr__(self, "normal", vscale(n, scale))
        object.__setattr__(self, "offset", rat(offset) * scale)

    def contains_point(self, p) -> bool:
        return vdot(self.normal, vec(p)) == self.offset


# ---------------------------------------------------------------------------
# Incidence classification
# ---------------------------------------------------------------------------

class IncidenceKind(enum.Enum):
    DISJOINT = "disjoint"
    POINT = "point"
    CONTAINED = "contained"


@dataclass(frozen=True)
class IncidenceOutcome:
    kind: IncidenceKind
    location: Point4 | None = None

    @property
    def is_point(self) -> bool:
        return self.kind is IncidenceKind.POINT


def classify_line_flat2(ln: Line4, fl: Flat2) -> IncidenceOutcome:
    """Exact outcome of intersecting a line with a 2-flat in R^4.

    Solves base_ln + t*d = base_fl + a*u + b*v (4 equations, 3 unknowns):
    inconsistent -> DISJOINT, unique solution -> POINT with its location,
    a one-dimensional solution space -> CONTAINED.
    """
    cols = (ln.direction, vscale(fl.u, -1), vscale(fl.v, -1))
    rhs = vsub(fl.base, ln.base)
    aug = [[cols[0][i], cols[1][i], cols[2][i], rhs[i]] for i in range(4)]
    rows, pivots = rref(aug)
    if 3 in pivots:
        return IncidenceOutcome(IncidenceKind.DISJOINT)
    if len(pivots) == 3:
        t = rows[pivots.index(0)][3]
        location = ln.point_at(t)
        return IncidenceOutcome(IncidenceKind.POINT, location)
    # u, v independent forces rank >= 2; rank 2 means the line lies inside.
    return IncidenceOutcome(IncidenceKind.CONTAINED)


def line_in_flat2(ln: Line4, fl: Flat2) -> bool:
    return classify_line_flat2(ln, fl).kind is IncidenceKind.CONTAINED


def flat2_in_hyperplane(fl: Flat2, h: Hyperplane3) -> bool:
    return (
        vdot(h.normal, fl.base) == h.offset
        and vdot(h.normal, fl.u) == 0
        and vdot(h.normal, fl.v) == 0
    )


def line_in_hyperplane(ln: Line4, h: Hyperplane3) -> bool:
    return vdot(h.normal, ln.base) == h.offset and vdot(h.normal, ln.direction) == 0


def span_flat2_of_lines(l1: Line4, l2: Line4) -> Flat2 | None:
    """The unique 2-flat containing both lines, or None when they are skew.

    Intersecting and parallel pairs are both coplanar; identical lines
    are rejected since they span no unique 2-flat.
    """
    if l1 == l2:
        raise IdenticalLinesError("identical lines span no unique 2-flat")
    diff = vsub(l2.base, l1.base)
    hull_rank = matrix_rank([l1.direction, l2.direction, diff])
    if hull_rank >= 3:
        return None
    if matrix_rank([l1.direction, l2.direction]) == 2:
        return Flat2(l1.base, l1.direction, l2.direction)
    # Parallel distinct lines: diff leaves the common direction.
    return Flat2(l1.base, l1.direction, diff)


def hyperplane_of_flat2_pair(f1: Flat2, f2: Flat2) -> Hyperplane3 | None:
    """The unique hyperplane containing both 2-flats, or None when their
    affine hull is all of R^4."""
    if f1 == f2:
        raise InvariantViolationError("identical 2-flats span no unique hyperplane")
    diff = vsub(f2.base, f1.base)
    span_rows = [list(f1.u), list(f1.v), list(f2.u), list(f2.v), list(diff)]
    rows, _ = rref(span_rows)
    if len(rows) != 3:
        return None
    # Normal = kernel of the 3 x 4 span matrix.
    aug = [row[:] for row in rows]
    _, pivots = rref(aug)
    free = next(i for i in range(4) if i not in pivots)
    normal = [ZERO] * 4
    normal[free] = ONE
    for r, p in zip(rows, pivots):
        normal[p] = -r[free]
    n = tuple(normal)
    return Hyperplane3(n, vdot(n, f1.base))
