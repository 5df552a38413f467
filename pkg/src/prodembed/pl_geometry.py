"""Exact piecewise-linear geometry over the rationals.

Everything here is mod 2 and exact: coordinates are ints or ``Fraction``s and
every predicate reduces to fraction-free integer elimination. Non-generic
configurations raise :class:`DegeneracyError` rather than being resolved.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .complex_core import SimplicialComplex

Number = Union[int, Fraction]
Point = tuple  # tuple[Number, ...]
Simplex = Sequence[Point]

DEFAULT_COORD_RANGE = 10**6
DEFAULT_BUDGET = 100


class DegeneracyError(ArithmeticError):
    """A configuration is not in general position."""

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


class AffineDependenceError(ValueError):
    """A simplex has affinely dependent vertices."""


class BoundaryCollisionError(DegeneracyError):
    """Boundaries of two maps are not certifiably disjoint."""


class ResampleBudgetError(RuntimeError):
    """Random sampling failed to reach general position within the budget."""


def as_point(coords: Iterable) -> Point:
    out = []
    for c in coords:
        if isinstance(c, int):
            out.append(c)
        else:
            f = Fraction(c)
            out.append(f.numerator if f.denominator == 1 else f)
    return tuple(out)


def format_number(x: Number) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------

def _scale(p: Point) -> int:
    den = 1
    for c in p:
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    return den


def _left_col(p: Point) -> list[int]:
    s = _scale(p)
    return [int(c * s) for c in p] + [s, 0]


def _right_col(p: Point) -> list[int]:
    s = _scale(p)
    return [-int(c * s) for c in p] + [0, s]


def _bareiss_solve(cols: list[list[int]], rhs: list[int]) -> tuple[int, list[int]] | None:
    """Solve the square integer system with columns ``cols``.

    Returns ``(D, y)`` with x_i = y_i / D, or None when singular.
    """
    n = len(cols)
    a = [[cols[j][i] for j in range(n)] + [rhs[i]] for i in range(n)]
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    break
            else:
                return None
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n + 1):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    d = a[n - 1][n - 1]
    if d == 0:
        return None
    y = [0] * n
    for i in range(n - 1, -1, -1):
        acc = d * a[i][n]
        row = a[i]
        for j in range(i + 1, n):
            acc -= row[j] * y[j]
        y[i] = acc // row[i]
    return d, y


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        for r in range(rank + 1, len(m)):
            if m[r][c] != 0:
                f = Fraction(m[r][c]) / pr[c]
                m[r] = [x - f * y for x, y in zip(m[r], pr)]
        rank += 1
    return rank


def affine_rank(points: Sequence[Point]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return _rank([[Fraction(x) - y for x, y in zip(p, base)] for p in points[1:]])


def affinely_independent(points: Sequence[Point]) -> bool:
    return affine_rank(points) == len(points) - 1


# ---------------------------------------------------------------------------
# Simplex-simplex intersection
# ---------------------------------------------------------------------------

def _solve_pair(s_cols: list[list[int]], t_cols: list[list[int]]) -> int:
    dim = len(s_cols[0]) - 2
    rhs = [0] * dim + [1, 1]
    sol = _bareiss_solve(s_cols + t_cols, rhs)
    if sol is None:
        raise DegeneracyError("singular intersection system")
    d, y = sol
    if d < 0:
        y = [-v for v in y]
    if any(v < 0 for v in y):
        return 0  # affine hulls meet outside one of the closed simplices
    if any(v == 0 for v in y):
        raise DegeneracyError("intersection on the boundary of a simplex")
    return 1


def simplex_intersection_parity(s: Simplex, t: Simplex) -> int:
    """1 if the open simplices meet (transversally, in one point), else 0.

    ``s`` and ``t`` are vertex lists of complementary dimension in R^d.
    """
    if not s or not t:
        raise ValueError("empty simplex")
    d = len(s[0])
    if any(len(p) != d for p in [*s, *t]):
        raise ValueError("points of mixed dimension")
    if (len(s) - 1) + (len(t) - 1) != d:
        raise ValueError(f"dimensions {len(s) - 1} + {len(t) - 1} do not sum to {d}")
    if not affinely_independent(s) or not affinely_independent(t):
        raise AffineDependenceError("degenerate simplex")
    return _solve_pair([_left_col(p) for p in s], [_right_col(p) for p in t])


class _Prepared:
    """Integer columns and a bounding box for a simplex used many times."""

    __slots__ = ("points", "left", "right", "lo", "hi")

    def __init__(self, points: Sequence[Point]):
        self.points = tuple(points)
        self.left = [_left_col(p) for p in points]
        self.right = [_right_col(p) for p in points]
        self.lo = tuple(min(c) for c in zip(*points))
        self.hi = tuple(max(c) for c in zip(*points))

    def boxes_apart(self, other: "_Prepared") -> bool:
        return any(
            h1 < l2 or h2 < l1
            for l1, h1, l2, h2 in zip(self.lo, self.hi, other.lo, other.hi)
        )


def _pair_parity(a: _Prepared, b: _Prepared) -> int:
    if a.boxes_apart(b):
        return 0
    return _solve_pair(a.left, b.right)


def closed_simplices_intersect(p: Simplex, q: Simplex) -> bool:
    """Exact test whether conv(p) and conv(q) meet (any dimensions)."""
    pts = [*p, *q]
    if len(set(pts)) == len(pts) and affinely_independent(pts):
        return False
    if _Prepared(p).boxes_apart(_Prepared(q)):
        return False
    d = len(pts[0])
    # feasibility of {sum l_i p_i = sum m_j q_j, sum l = sum m = 1, l, m >= 0}
    cols = [[Fraction(c) for c in x] + [Fraction(1), Fraction(0)] for x in p]
    cols += [[-Fraction(c) for c in x] + [Fraction(0), Fraction(1)] for x in q]
    rhs = [Fraction(0)] * d + [Fraction(1), Fraction(1)]
    rank = _rank([[c[i] for c in cols] for i in range(d + 2)])
    for size in range(1, rank + 1):
        for basis in itertools.combinations(range(len(cols)), size):
            x = _least_exact([cols[j] for j in basis], rhs)
            if x is not None and all(v >= 0 for v in x):
                return True
    return False


def _least_exact(cols: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique exact solution of an overdetermined system, or None."""
    n = len(cols)
    m = [[cols[j][i] for j in range(n)] + [rhs[i]] for i in range(len(rhs))]
    row = 0
    pivots = []
    for c in range(n):
        piv = next((r for r in range(row, len(m)) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][c]
        m[row] = [x * inv for x in m[row]]
        for r in range(len(m)):
            if r != row and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        pivots.append(c)
        row += 1
    if any(m[r][n] != 0 for r in range(row, len(m))):
        return None
    return [m[k][n] for k in range(n)]


# ---------------------------------------------------------------------------
# Geometric complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeometricComplex:
    complex: SimplicialComplex
    coords: dict = field(hash=False)
    ambient_dim: int

    def __post_init__(self):
        for v in self.complex.vertices:
            if v not in self.coords:
                raise ValueError(f"vertex {v!r} has no coordinates")
            if len(self.coords[v]) != self.ambient_dim:
                raise ValueError(f"vertex {v!r} has {len(self.coords[v])} coordinates, expected {self.ambient_dim}")

    def point(self, v: str) -> Point:
        return self.coords[v]

    def simplex(self, face: Iterable[str]) -> tuple[Point, ...]:
        return tuple(self.coords[v] for v in sorted(face))

    def facet_simplices(self) -> list[tuple[Point, ...]]:
        return [self.simplex(f) for f in self.complex.facets]

    def to_text(self) -> str:
        lines = [f"ambient {self.ambient_dim}"]
        if self.complex.join_structure is not None:
            lines.append(
                "join_structure: " + " | ".join(" ".join(g) for g in self.complex.join_structure)
            )
        for v in self.complex.vertices:
            lines.append("v " + v + " " + " ".join(format_number(c) for c in self.coords[v]))
        for f in self.complex.facets:
            lines.append("f " + " ".join(sorted(f)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GeometricComplex":
        ambient = None
        coords: dict[str, Point] = {}
        order: list[str] = []
        facets = []
        js = None
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "ambient":
                ambient = int(parts[1])
            elif parts[0] == "join_structure:":
                js = [g.split() for g in line.split(":", 1)[1].split("|")]
            elif parts[0] == "v":
                coords[parts[1]] = as_point(Fraction(x) for x in parts[2:])
                order.append(parts[1])
            elif parts[0] == "f":
                facets.append(parts[1:])
            else:
                raise ValueError(f"unrecognized line {line!r}")
        if ambient is None:
            raise ValueError("missing 'ambient' header")
        return cls(SimplicialComplex.from_facets(facets, order, js), coords, ambient)


# ---------------------------------------------------------------------------
# General position
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralPosition:
    ok: bool
    witness: tuple[frozenset, frozenset] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _faces_of(f: frozenset) -> list[frozenset]:
    items = sorted(f)
    return [frozenset(c) for r in range(1, len(items) + 1) for c in itertools.combinations(items, r)]


def _face_pair_generic(g: GeometricComplex, a: frozenset, b: frozenset) -> str:
    d = g.ambient_dim
    da, db = len(a) - 1, len(b) - 1
    if da + db < d:
        if not affinely_independent([g.coords[v] for v in sorted(a | b)]):
            return "affinely dependent union"
    elif da + db == d:
        try:
            _solve_pair(
                [_left_col(g.coords[v]) for v in sorted(a)],
                [_right_col(g.coords[v]) for v in sorted(b)],
            )
        except DegeneracyError as exc:
            return str(exc)
    return ""


def general_position_check(g: GeometricComplex) -> GeneralPosition:
    """Every pair of vertex-disjoint faces is generic: complementary-dimension
    pairs have a nonsingular intersection system with no zero barycentric
    coordinate, lower-dimensional pairs span affinely independent sets.

    Pairs of facets whose vertex union has at most d+1 points are certified
    at once by affine independence of the union (this also makes a linear
    map of a complex of dimension <= (d-1)/2 an embedding).
    """
    d = g.ambient_dim
    facets = list(g.complex.facets)
    coords = g.coords
    for f in facets:
        if not affinely_independent([coords[v] for v in sorted(f)]):
            return GeneralPosition(False, (f, f), "degenerate simplex")
    seen_pairs = set()
    for i, f in enumerate(facets):
        for h in facets[i:]:
            union = f | h
            if len(union) <= d + 1:
                pts = [coords[v] for v in sorted(union)]
                if len(set(pts)) != len(pts) or not affinely_independent(pts):
                    return GeneralPosition(False, (f, h), "affinely dependent facet union")
                continue
            for a in _faces_of(f):
                for b in _faces_of(h):
                    if a & b or len(a) + len(b) - 2 > d:
                        continue
                    key = (a, b) if sorted(a) <= sorted(b) else (b, a)
                    if key in seen_pairs:
                        continue
                    seen_pairs.add(key)
                    why = _face_pair_generic(g, a, b)
                    if why:
                        return GeneralPosition(False, (a, b), why)
    return GeneralPosition(True)


def random_embedding(
    c: SimplicialComplex,
    ambient_dim: int,
    seed: int,
    budget: int = DEFAULT_BUDGET,
    coord_range: int = DEFAULT_COORD_RANGE,
    require_embedding: bool = True,
) -> GeometricComplex:
    """Random integer coordinates in [-coord_range, coord_range], resampled
    until the realization is in general position.

    With ``require_embedding`` the complex must have dimension at most
    (ambient_dim - 1)/2, where general position certifies injectivity.
    """
    if require_embedding and 2 * c.dim + 1 > ambient_dim:
        raise ValueError(
            f"cannot certify a linear embedding of a {c.dim}-complex in R^{ambient_dim}"
        )
    rng = random.Random(seed)
    for _ in range(budget):
        coords = {
            v: tuple(rng.randint(-coord_range, coord_range) for _ in range(ambient_dim))
            for v in c.vertices
        }
        g = GeometricComplex(c, coords, ambient_dim)
        if general_position_check(g):
            return g
    raise ResampleBudgetError(f"no general-position sample in {budget} attempts (seed {seed})")


# ---------------------------------------------------------------------------
# Intersection and linking parities
# ---------------------------------------------------------------------------

def _boundary_faces(c: SimplicialComplex) -> list[frozenset]:
    count: dict[frozenset, int] = {}
    for f in c.facets:
        for v in f:
            r = f - {v}
            if r:
                count[r] = count.get(r, 0) + 1
    return [r for r, k in count.items() if k == 1]


def intersection_parity_maps(a: GeometricComplex, b: GeometricComplex) -> int:
    """Mod-2 intersection number of two n-dimensional PL maps into R^{2n}."""
    d = a.ambient_dim
    if b.ambient_dim != d:
        raise ValueError("ambient dimensions differ")
    if a.complex.dim + b.complex.dim != d:
        raise ValueError("dimensions are not complementary")
    for fa in _boundary_faces(a.complex):
        for fb in _boundary_faces(b.complex):
            if closed_simplices_intersect(a.simplex(fa), b.simplex(fb)):
                raise BoundaryCollisionError("boundaries intersect", (fa, fb))
    prep_b = [(fb, _Prepared(b.simplex(fb))) for fb in b.complex.facets]
    total = 0
    for fa in a.complex.facets:
        pa = _Prepared(a.simplex(fa))
        for fb, pb in prep_b:
            try:
                total ^= _pair_parity(pa, pb)
            except DegeneracyError as exc:
                raise DegeneracyError(str(exc), (fa, fb)) from None
    return total


def apex_sequence(dim: int, start: int = 0) -> Iterator[Point]:
    """Deterministic cone apexes; each retry shifts by a growing offset."""
    for j in itertools.count(start):
        yield tuple(
            Fraction(1009 * (i + 1) + 3 * j * (i + 2), 11) + Fraction(1, 13 + i + j)
            for i in range(dim)
        )


def _simplices_of(x) -> list[tuple[Point, ...]]:
    if isinstance(x, GeometricComplex):
        return x.facet_simplices()
    return [tuple(s) for s in x]


def _cone_parity(alpha: list, beta: list, apex: Point) -> int:
    cones = [_Prepared((apex, *s)) for s in alpha]
    targets = [_Prepared(s) for s in beta]
    total = 0
    for ca in cones:
        for tb in targets:
            total ^= _pair_parity(ca, tb)
    return total


def linking_parity_cone(alpha, beta, apex: Point | None = None, max_tries: int = 64) -> int:
    """Mod-2 linking number of disjoint (n-1)-spheres in R^{2n-1}.

    Counts intersections of the cone over ``alpha`` with ``beta``. Spheres are
    given as facet simplices (or a GeometricComplex). Without an explicit
    apex the deterministic apex sequence is tried in order.
    """
    a, b = _simplices_of(alpha), _simplices_of(beta)
    if apex is not None:
        return _cone_parity(a, b, as_point(apex))
    dim = len(a[0][0])
    for p in itertools.islice(apex_sequence(dim), max_tries):
        try:
            return _cone_parity(a, b, p)
        except DegeneracyError:
            continue
    raise DegeneracyError(f"no generic apex among {max_tries} candidates")


def membrane_offsets(dim: int) -> Iterator[Point]:
    for j in itertools.count():
        yield tuple(Fraction(i + 1, 7 + 2 * j) + Fraction(1, 31 + 5 * i + j) for i in range(dim))


def membrane_linking_parity(
    alpha: Sequence[tuple[Point, Point]],
    beta: Sequence[tuple[Point, Point]],
    offset: Point | None = None,
    max_tries: int = 64,
) -> int:
    """Linking parity through the membrane I * a_2 * ... * a_n bounded by alpha.

    ``alpha[k]`` / ``beta[k]`` are the two points the spheres pick on line k.
    The segment I between the two points of ``alpha[0]`` is bent at its
    midpoint by ``offset`` so that the membrane meets beta generically; the
    chain still has boundary alpha, so the parity is unchanged.
    """
    n = len(alpha)
    if n == 0 or len(beta) != n:
        raise ValueError("alpha and beta need one point pair per line")
    dim = len(alpha[0][0])
    targets = [_Prepared(s) for s in itertools.product(*beta)]
    p0, p1 = alpha[0]
    mid = tuple(Fraction(x + y, 2) for x, y in zip(p0, p1))
    rest = list(itertools.product(*alpha[1:]))
    offsets = [as_point(offset)] if offset is not None else itertools.islice(membrane_offsets(dim), max_tries)
    for off in offsets:
        m = as_point(x + y for x, y in zip(mid, off))
        pieces = [_Prepared((u, w, *r)) for u, w in ((p0, m), (m, p1)) for r in rest]
        try:
            total = 0
            for piece in pieces:
                for tb in targets:
                    total ^= _pair_parity(piece, tb)
            return total
        except DegeneracyError:
            if offset is not None:
                raise
    raise DegeneracyError(f"no generic membrane among {max_tries} offsets")


def cone_complex(sphere: Sequence[Sequence[Point]], apex: Point, ambient_dim: int) -> GeometricComplex:
    """Cone from ``apex`` over a sphere given by simplices in a hyperplane;
    sphere points are lifted by zero-padding to ``ambient_dim``."""
    coords: dict[str, Point] = {"apex": as_point(apex)}
    label: dict[Point, str] = {}
    facets = []
    for s in sphere:
        names = []
        for p in s:
            q = tuple(p) + (0,) * (ambient_dim - len(p))
            if q not in label:
                label[q] = f"p{len(label)}"
                coords[label[q]] = q
            names.append(label[q])
        facets.append(["apex", *names])
    return GeometricComplex(SimplicialComplex.from_facets(facets), coords, ambient_dim)


def lift_apexes(dim: int) -> Iterator[tuple[Point, Point]]:
    """Pairs of distinct apexes above the hyperplane R^{dim} in R^{dim+1}."""
    seq = apex_sequence(dim)
    for j, (p, q) in enumerate(zip(seq, apex_sequence(dim, start=500))):
        yield (*p, Fraction(1) + Fraction(j, 3)), (*q, Fraction(3, 2) + Fraction(j, 7))


def cone_lift_parity(alpha, beta, max_tries: int = 64) -> int:
    """Intersection parity of the cones over alpha and beta in R^{2n}, built
    from distinct apexes on the same side of R^{2n-1}."""
    a, b = _simplices_of(alpha), _simplices_of(beta)
    dim = len(a[0][0])
    for p, q in itertools.islice(lift_apexes(dim), max_tries):
        try:
            return intersection_parity_maps(cone_complex(a, p, dim + 1), cone_complex(b, q, dim + 1))
        except DegeneracyError as exc:
            if isinstance(exc, BoundaryCollisionError):
                raise
            continue
    raise DegeneracyError(f"no generic apex pair among {max_tries} candidates")
