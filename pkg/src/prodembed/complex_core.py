"""Abstract simplicial complexes stored by facets: skeleta of simplices, joins,
cones, vertex links, and links of vertices in products of graphs."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph_core import Graph


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple[str, ...]
    facets: tuple[frozenset[str], ...]
    join_structure: tuple[tuple[str, ...], ...] | None = None

    @classmethod
    def from_facets(
        cls,
        facets: Iterable[Iterable[str]],
        vertices: Sequence[str] | None = None,
        join_structure: Sequence[Sequence[str]] | None = None,
    ) -> "SimplicialComplex":
        faces = {frozenset(f) for f in facets}
        faces.discard(frozenset())
        maximal = [f for f in faces if not any(f < g for g in faces)]
        maximal.sort(key=lambda f: (len(f), sorted(f)))
        if vertices is None:
            seen: dict[str, None] = {}
            for f in maximal:
                for v in sorted(f):
                    seen.setdefault(v)
            vertices = tuple(seen)
        else:
            vertices = tuple(vertices)
            covered = set().union(*maximal) if maximal else set()
            if not covered <= set(vertices):
                raise ValueError("facet uses an undeclared vertex")
            # declared vertices missing from every facet become isolated points
            maximal += [frozenset((v,)) for v in vertices if v not in covered]
        js = None
        if join_structure is not None:
            js = tuple(tuple(g) for g in join_structure if g)
            if sorted(v for g in js for v in g) != sorted(vertices):
                raise ValueError("join_structure must partition the vertices")
            group_of = {v: k for k, g in enumerate(js) for v in g}
            for f in maximal:
                if len({group_of[v] for v in f}) != len(f):
                    raise ValueError("a facet meets some join group twice")
        if js is not None and len(js) == 1 and all(len(f) == 1 for f in maximal):
            js = None  # a discrete set is implicitly a single group
        return cls(vertices, tuple(maximal), js)

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def faces(self, k: int | None = None) -> set[frozenset[str]]:
        """All non-empty faces (of dimension ``k`` if given)."""
        out: set[frozenset[str]] = set()
        sizes = range(1, self.dim + 2) if k is None else (k + 1,)
        for f in self.facets:
            for size in sizes:
                if size <= len(f):
                    out.update(frozenset(c) for c in itertools.combinations(sorted(f), size))
        return out

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces(k)) for k in range(self.dim + 1))

    def contains(self, face: Iterable[str]) -> bool:
        face = frozenset(face)
        return any(face <= f for f in self.facets)

    def edges(self) -> set[frozenset[str]]:
        return self.faces(1)

    def one_skeleton(self) -> Graph:
        return Graph.from_edges(sorted(tuple(sorted(e)) for e in self.edges()), self.vertices)

    def groups(self) -> tuple[tuple[str, ...], ...] | None:
        """Join groups; a 0-dimensional complex without metadata is one group."""
        if self.join_structure is not None:
            return self.join_structure
        if self.dim <= 0 and self.vertices:
            return (self.vertices,)
        return None

    def relabel(self, mapping) -> "SimplicialComplex":
        f = mapping if callable(mapping) else mapping.__getitem__
        js = None
        if self.join_structure is not None:
            js = [[f(v) for v in g] for g in self.join_structure]
        return SimplicialComplex.from_facets(
            ([f(v) for v in facet] for facet in self.facets),
            [f(v) for v in self.vertices],
            js,
        )

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        if self.join_structure is not None:
            lines.append("join_structure: " + " | ".join(" ".join(g) for g in self.join_structure))
        lines += [" ".join(sorted(f)) for f in self.facets]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SimplicialComplex":
        js = None
        facets = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("join_structure:"):
                js = [g.split() for g in line.split(":", 1)[1].split("|")]
            else:
                facets.append(line.split())
        vertices = None
        if js is not None:
            vertices = [v for g in js for v in g]
        return cls.from_facets(facets, vertices, js)


def skeleton_complex(m: int, n: int) -> SimplicialComplex:
    """The m-skeleton of the n-simplex on vertices ``0..n``."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    labels = [str(k) for k in range(n + 1)]
    return SimplicialComplex.from_facets(itertools.combinations(labels, m + 1), labels)


def _prefixed(c: SimplicialComplex, offset: int) -> SimplicialComplex:
    groups = c.groups() or (c.vertices,)
    index = {v: offset + k for k, g in enumerate(groups) for v in g}
    return c.relabel(lambda v: f"g{index[v]}:{v}")


def join(k: SimplicialComplex, l: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join; colliding labels are prefixed with ``g{group}:``."""
    if set(k.vertices) & set(l.vertices):
        nk = len(k.groups() or (k.vertices,))
        k, l = _prefixed(k, 1), _prefixed(l, nk + 1)
    kf = k.facets or (frozenset(),)
    lf = l.facets or (frozenset(),)
    facets = [a | b for a in kf for b in lf]
    gk, gl = k.groups(), l.groups()
    js = None
    if gk is not None and gl is not None:
        js = [list(g) for g in gk] + [list(g) for g in gl]
    return SimplicialComplex.from_facets(facets, k.vertices + l.vertices, js)


def join_power(c: SimplicialComplex, n: int) -> SimplicialComplex:
    """``c * c * ... * c`` (n copies) with labels ``g{k}:{original}``."""
    if n < 1:
        raise ValueError("join power needs n >= 1")
    copies = [c.relabel(lambda v, k=k: f"g{k}:{v}") for k in range(1, n + 1)]
    out = copies[0]
    for nxt in copies[1:]:
        out = join(out, nxt)
    return out


def cone(base: SimplicialComplex, apex_label: str = "O") -> SimplicialComplex:
    if apex_label in base.vertices:
        raise ValueError(f"apex label {apex_label!r} already used by the base")
    return join(base, SimplicialComplex.from_facets([[apex_label]]))


def vertex_link(c: SimplicialComplex, v: str) -> SimplicialComplex:
    if v not in c.vertices:
        raise KeyError(f"unknown vertex {v!r}")
    facets = [f - {v} for f in c.facets if v in f]
    facets = [f for f in facets if f]
    verts = [w for w in c.vertices if any(w in f for f in facets)]
    js = None
    if c.join_structure is not None:
        keep = set(verts)
        js = [[w for w in g if w in keep] for g in c.join_structure]
    return SimplicialComplex.from_facets(facets, verts, js)


def product_vertex_link(degrees: Sequence[int]) -> SimplicialComplex:
    """Link of O_1 x ... x O_n when deg O_k = degrees[k]: the join of the
    discrete sets of size d_k."""
    if not degrees:
        raise ValueError("empty degree list")
    if any(d < 1 for d in degrees):
        raise ValueError("degrees must be >= 1")
    out = None
    for k, d in enumerate(degrees, start=1):
        piece = skeleton_complex(0, d - 1).relabel(lambda v, k=k: f"g{k}:{v}")
        out = piece if out is None else join(out, piece)
    return out


def direct_product_link_2(g: Graph, h: Graph, u: str, v: str) -> SimplicialComplex:
    """Link of (u, v) in the square-cell structure of g x h, assembled from the
    cells e x f with e containing u and f containing v.

    Each square contributes the arc joining its two edges at (u, v); the link
    vertex ``(x,v)`` stands for the edge from (u, v) towards (x, v).
    """
    if u not in g.vertices or v not in h.vertices:
        raise KeyError("vertex not in factor graph")
    e_u = [b if a == u else a for a, b in g.edges if u in (a, b)]
    f_v = [b if a == v else a for a, b in h.edges if v in (a, b)]
    verts = [f"({x},{v})" for x in e_u] + [f"({u},{y})" for y in f_v]
    squares = [(f"({x},{v})", f"({u},{y})") for x in e_u for y in f_v]
    return SimplicialComplex.from_facets(squares, verts)


def join_signature(c: SimplicialComplex) -> tuple[int, ...] | None:
    """Sorted group sizes if ``c`` is a join of discrete sets, else None.

    Groups are recovered from the 1-skeleton: in such a join two vertices are
    non-adjacent exactly when they share a group.
    """
    verts = list(c.vertices)
    edges = c.edges()
    group_of: dict[str, int] = {}
    groups: list[list[str]] = []
    for v in verts:
        for k, g in enumerate(groups):
            if frozenset((v, g[0])) not in edges:
                group_of[v] = k
                g.append(v)
                break
        else:
            group_of[v] = len(groups)
            groups.append([v])
    for g in groups:
        if any(frozenset(p) in edges for p in itertools.combinations(g, 2)):
            return None
    expected = {frozenset(t) for t in itertools.product(*groups)} if groups else set()
    if set(c.facets) != expected:
        return None
    return tuple(sorted(len(g) for g in groups))


def isomorphic_joins(a: SimplicialComplex, b: SimplicialComplex) -> bool:
    sa, sb = join_signature(a), join_signature(b)
    return sa is not None and sa == sb


# ---------------------------------------------------------------------------
# The pair of tori through a product vertex of (K5)^n
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusPairReport:
    n: int
    torus_alpha: frozenset[tuple[str, ...]]
    torus_beta: frozenset[tuple[str, ...]]
    contains_cone_alpha: bool
    contains_cone_beta: bool
    intersection: frozenset[tuple[str, ...]]

    @property
    def ok(self) -> bool:
        apex = tuple("O" for _ in range(self.n))
        return (
            self.contains_cone_alpha
            and self.contains_cone_beta
            and self.intersection == frozenset({apex})
        )


def torus_pair_check(
    n: int,
    alpha: Sequence[Iterable[str]],
    beta: Sequence[Iterable[str]],
    link: Sequence[str] = ("A", "B", "C", "D"),
) -> TorusPairReport:
    """Build T_a = prod O A_k C_k and T_b = prod O B_k D_k inside (K5)^n.

    ``alpha[k]`` / ``beta[k]`` are the 2-point selections from the link of
    O_k (labels from ``link``). Tori are recorded by their product vertex
    sets; the product cells are products of faces of the triangles, so the
    tori intersect exactly in the product of the per-factor intersections.
    """
    if n < 1 or len(alpha) != n or len(beta) != n:
        raise ValueError("need one selection per factor")
    alpha = [frozenset(a) for a in alpha]
    beta = [frozenset(b) for b in beta]
    for a, b in zip(alpha, beta):
        if len(a) != 2 or len(b) != 2 or a & b or not (a | b) <= set(link):
            raise ValueError("selections must be complementary 2-subsets of the link")
    tri_a = [frozenset({"O"}) | a for a in alpha]
    tri_b = [frozenset({"O"}) | b for b in beta]
    t_alpha = frozenset(itertools.product(*[sorted(t) for t in tri_a]))
    t_beta = frozenset(itertools.product(*[sorted(t) for t in tri_b]))

    def cone_cells(sel):
        # cells of C(sphere): for each subset S of factors and choice x_k in
        # sel[k] (k in S), the product of edges O x_k (k in S) and O elsewhere
        cells = []
        for mask in itertools.product((False, True), repeat=n):
            choices = [sorted(sel[k]) if mask[k] else [None] for k in range(n)]
            for pick in itertools.product(*choices):
                per = [("O", x) if x is not None else ("O",) for x in pick]
                cells.append(frozenset(itertools.product(*per)))
        return cells

    has_a = all(cell <= t_alpha for cell in cone_cells(alpha))
    has_b = all(cell <= t_beta for cell in cone_cells(beta))
    inter = frozenset(
        itertools.product(*[sorted(ta & tb) for ta, tb in zip(tri_a, tri_b)])
    )
    if inter != (t_alpha & t_beta):
        raise AssertionError("product intersection disagrees with vertex intersection")
    return TorusPairReport(n, t_alpha, t_beta, has_a, has_b, inter)


def fvector_of_join(fk: Sequence[int], fl: Sequence[int]) -> tuple[int, ...]:
    """f-vector of K*L from those of K and L (with f_{-1} = 1)."""
    a = [1, *fk]
    b = [1, *fl]
    out = Counter()
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    top = len(a) + len(b) - 2
    return tuple(out[k] for k in range(1, top + 1))
