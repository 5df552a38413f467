"""Linked spheres in joins of 4-point sets, the van Kampen parity v(f), the
standard line-configuration embedding, almost embeddings, and Monte Carlo
campaigns over random exact embeddings."""

from __future__ import annotations

import itertools
import os
import random
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .complex_core import SimplicialComplex, join_power, skeleton_complex
from .graph_core import Graph, complete_bipartite, complete_graph
from .pl_geometry import (
    DegeneracyError,
    GeometricComplex,
    Point,
    ResampleBudgetError,
    closed_simplices_intersect,
    cone_lift_parity,
    general_position_check,
    linking_parity_cone,
    membrane_linking_parity,
    random_embedding,
)

DEFAULT_MAX_N = 4
PARAMS = (1, 2, 3, 4)


def max_n() -> int:
    return int(os.environ.get("PRODEMBED_MAX_N", DEFAULT_MAX_N))


def _check_n(n: int, limit: int | None = None) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    limit = max_n() if limit is None else limit
    if n > limit:
        raise ValueError(f"n={n} exceeds the cap {limit} (set PRODEMBED_MAX_N to override)")


def label(k: int, j: int) -> str:
    """Vertex j of factor group k (1-based), as produced by join_power."""
    return f"g{k}:{j}"


# ---------------------------------------------------------------------------
# Join spheres
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class JoinSphere:
    """An (n-1)-sphere in a join of discrete sets: two vertices per factor."""

    selections: tuple[tuple[int, int], ...]

    def __post_init__(self):
        sel = tuple(tuple(sorted(s)) for s in self.selections)
        if not sel or any(len(s) != 2 or s[0] == s[1] for s in sel):
            raise ValueError("each factor needs a 2-subset")
        object.__setattr__(self, "selections", sel)

    @property
    def n(self) -> int:
        return len(self.selections)

    def vertices(self) -> list[str]:
        return [label(k, j) for k, s in enumerate(self.selections, 1) for j in s]

    def simplices(self) -> list[tuple[str, ...]]:
        per = [[label(k, j) for j in s] for k, s in enumerate(self.selections, 1)]
        return list(itertools.product(*per))

    def contains(self, c: Sequence[int]) -> bool:
        return all(ck in s for ck, s in zip(c, self.selections))

    def disjoint(self, other: "JoinSphere") -> bool:
        return all(not set(a) & set(b) for a, b in zip(self.selections, other.selections))

    def complement(self, d: int = 3) -> "JoinSphere":
        if d != 3:
            raise ValueError("the complement is a sphere only for 4-point factors")
        return JoinSphere(tuple(tuple(sorted(set(range(4)) - set(s))) for s in self.selections))

    def as_list(self) -> list[list[int]]:
        return [list(s) for s in self.selections]


@dataclass(frozen=True)
class SpherePair:
    alpha: JoinSphere
    beta: JoinSphere

    @property
    def disjoint(self) -> bool:
        return self.alpha.disjoint(self.beta)

    def as_dict(self) -> dict:
        return {"alpha": self.alpha.as_list(), "beta": self.beta.as_list()}


def enumerate_spheres(n: int, d: int = 3) -> list[JoinSphere]:
    if n < 1:
        raise ValueError("n must be >= 1")
    pairs = list(itertools.combinations(range(d + 1), 2))
    return [JoinSphere(sel) for sel in itertools.product(pairs, repeat=n)]


def _check_base(n: int, c: Sequence[int], d: int) -> tuple[int, ...]:
    c = tuple(c)
    if len(c) != n or any(not 0 <= x <= d for x in c):
        raise ValueError(f"base simplex must pick one vertex in 0..{d} from each of {n} factors")
    return c


def disjoint_pairs(n: int, c: Sequence[int] | None = None, d: int = 3) -> list[SpherePair]:
    """Disjoint sphere pairs; with ``c``, the ordered pairs whose first sphere
    contains the simplex ``c`` (one vertex index per factor)."""
    spheres = enumerate_spheres(n, d)
    if c is not None:
        c = _check_base(n, c, d)
        return [
            SpherePair(a, b)
            for a in spheres if a.contains(c)
            for b in spheres if a.disjoint(b)
        ]
    return [
        SpherePair(a, b)
        for i, a in enumerate(spheres)
        for b in spheres[i + 1:]
        if a.disjoint(b)
    ]


def default_base(n: int) -> tuple[int, ...]:
    return (0,) * n


def _factor_count(g: GeometricComplex) -> int:
    groups = g.complex.groups()
    if groups is None:
        raise ValueError("complex carries no join structure")
    return len(groups)


def _sphere_simplices(g: GeometricComplex, s: JoinSphere) -> list[tuple[Point, ...]]:
    return [tuple(g.coords[v] for v in simplex) for simplex in s.simplices()]


def sphere_link_parity(g: GeometricComplex, pair: SpherePair) -> int:
    return linking_parity_cone(_sphere_simplices(g, pair.alpha), _sphere_simplices(g, pair.beta))


def sphere_lift_parity(g: GeometricComplex, pair: SpherePair) -> int:
    return cone_lift_parity(_sphere_simplices(g, pair.alpha), _sphere_simplices(g, pair.beta))


# ---------------------------------------------------------------------------
# Standard embedding from n lines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StandardEmbedding:
    n: int
    lines: tuple[tuple[Point, Point], ...]  # (origin, direction)
    params: tuple[int, ...]
    apex: Point
    geometric: GeometricComplex = field(compare=False)
    cone: GeometricComplex = field(compare=False)
    seed: int = 0

    def point(self, k: int, j: int) -> Point:
        """Point j of line k (both 0-based)."""
        origin, direction = self.lines[k]
        t = self.params[j]
        return tuple(o + t * v for o, v in zip(origin, direction))

    def sphere_points(self, s: JoinSphere) -> list[tuple[Point, Point]]:
        return [(self.point(k, a), self.point(k, b)) for k, (a, b) in enumerate(s.selections)]

    def sphere_params(self, s: JoinSphere) -> list[list[int]]:
        return [[self.params[j] for j in sel] for sel in s.selections]


def _lines_to_complex(n, lines, params) -> GeometricComplex:
    c = join_power(skeleton_complex(0, 3), n)
    coords = {}
    for k, (origin, direction) in enumerate(lines):
        for j, t in enumerate(params):
            coords[label(k + 1, j)] = tuple(o + t * v for o, v in zip(origin, direction))
    return GeometricComplex(c, coords, 2 * n - 1)


def _cone_over(g: GeometricComplex, apex: Point) -> GeometricComplex:
    c = g.complex
    facets = [set(f) | {"O"} for f in c.facets]
    js = [list(grp) for grp in c.groups()] + [["O"]]
    cc = SimplicialComplex.from_facets(facets, list(c.vertices) + ["O"], js)
    coords = {v: tuple(p) + (0,) for v, p in g.coords.items()}
    coords["O"] = tuple(apex)
    return GeometricComplex(cc, coords, g.ambient_dim + 1)


def standard_join_embedding(
    n: int, seed: int = 0, budget: int = 100, coord_range: int = 20, limit: int | None = None
) -> StandardEmbedding:
    """n lines in general position in R^{2n-1}, four points on each at
    parameters 1..4; their join realizes (4 points)^{*n}, coned to R^{2n}."""
    _check_n(n, limit)
    dim = 2 * n - 1
    apex = (0,) * dim + (1,)
    if n == 1:
        lines = (((0,), (1,)),)
        g = _lines_to_complex(1, lines, PARAMS)
        return StandardEmbedding(1, lines, PARAMS, apex, g, _cone_over(g, apex), seed)
    rng = random.Random(seed)
    for _ in range(budget):
        lines = []
        for _k in range(n):
            origin = tuple(rng.randint(-coord_range, coord_range) for _ in range(dim))
            direction = (0,) * dim
            while not any(direction):
                direction = tuple(rng.randint(-coord_range, coord_range) for _ in range(dim))
            lines.append((origin, direction))
        lines = tuple(lines)
        g = _lines_to_complex(n, lines, PARAMS)
        if general_position_check(g):
            return StandardEmbedding(n, lines, PARAMS, apex, g, _cone_over(g, apex), seed)
    raise ResampleBudgetError(f"no general-position line configuration in {budget} attempts")


def alternation_criterion(e: StandardEmbedding, p: SpherePair) -> int:
    """1 iff on every line the two parameter pairs interleave."""
    for a, b in zip(p.alpha.selections, p.beta.selections):
        lo, hi = sorted((e.params[a[0]], e.params[a[1]]))
        inside = sum(lo < e.params[j] < hi for j in b)
        if inside != 1:
            return 0
    return 1


def standard_membrane_parity(e: StandardEmbedding, p: SpherePair) -> int:
    return membrane_linking_parity(e.sphere_points(p.alpha), e.sphere_points(p.beta))


# ---------------------------------------------------------------------------
# The obstruction v(f) and linked-pair search
# ---------------------------------------------------------------------------

@dataclass
class ObstructionReport:
    n: int
    base_simplex: tuple[str, ...]
    pairs_examined: int
    linked_pairs: list[SpherePair]
    v: int

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "base_simplex": list(self.base_simplex),
            "pairs_examined": self.pairs_examined,
            "linked_count": len(self.linked_pairs),
            "linked_pairs": [p.as_dict() for p in self.linked_pairs],
            "v": self.v,
        }


def _realization_n(g: GeometricComplex) -> int:
    n = _factor_count(g)
    if g.ambient_dim != 2 * n - 1:
        raise ValueError(f"expected a realization in R^{2 * n - 1}, got R^{g.ambient_dim}")
    return n


def compute_obstruction(
    g: GeometricComplex, c: Sequence[int] | None = None, method: str = "cone"
) -> ObstructionReport:
    """v = number of linked disjoint pairs (alpha, beta) with c in alpha, mod 2.

    ``method`` is ``cone`` (cone over alpha inside R^{2n-1}) or ``lift``
    (intersection of the two cones in R^{2n}).
    """
    n = _realization_n(g)
    c = default_base(n) if c is None else _check_base(n, c, 3)
    parity = {"cone": sphere_link_parity, "lift": sphere_lift_parity}[method]
    pairs = disjoint_pairs(n, c)
    linked = [p for p in pairs if parity(g, p)]
    base = tuple(label(k + 1, j) for k, j in enumerate(c))
    return ObstructionReport(n, base, len(pairs), linked, len(linked) % 2)


def find_linked_pair(g: GeometricComplex) -> SpherePair | None:
    n = _realization_n(g)
    for p in disjoint_pairs(n):
        if sphere_link_parity(g, p):
            return p
    return None


@dataclass
class TriangleLinkReport:
    linked_pair: tuple[tuple[str, ...], tuple[str, ...]] | None
    linked_pairs: list[tuple[tuple[str, ...], tuple[str, ...]]]
    parity_sum: int
    pairs_examined: int


def triangle_pairs(vertices: Sequence[str]) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """The 10 unordered pairs of disjoint triangles on six vertices."""
    first = vertices[0]
    out = []
    for tri in itertools.combinations(vertices, 3):
        if first in tri:
            rest = tuple(v for v in vertices if v not in tri)
            out.append((tri, rest))
    return out


def _cycle_edges(g: GeometricComplex, tri: Sequence[str]) -> list[tuple[Point, Point]]:
    return [(g.coords[tri[i]], g.coords[tri[(i + 1) % 3]]) for i in range(3)]


def find_linked_triangles_k6(g: GeometricComplex) -> TriangleLinkReport:
    if len(g.complex.vertices) != 6 or g.ambient_dim != 3:
        raise ValueError("expected K6 realized in R^3")
    pairs = triangle_pairs(list(g.complex.vertices))
    linked = [
        (a, b) for a, b in pairs if linking_parity_cone(_cycle_edges(g, a), _cycle_edges(g, b))
    ]
    return TriangleLinkReport(linked[0] if linked else None, linked, len(linked) % 2, len(pairs))


def k6_complex() -> SimplicialComplex:
    g = complete_graph(6)
    return SimplicialComplex.from_facets(g.edges, g.vertices)


# ---------------------------------------------------------------------------
# Almost embeddings
# ---------------------------------------------------------------------------

class IllDefinedMapError(ValueError):
    """Images of a cell and of one of its faces are inconsistent."""


@dataclass
class AlmostEmbeddingInstance:
    """A cellular map given cell by cell.

    ``cells`` maps a cell key to its vertex set in the source. In combinatorial
    mode an image is a set of target cells (each a frozenset of target
    vertices); in geometric mode it is a tuple of simplices in R^d.
    """

    cells: dict[Hashable, frozenset]
    images: dict[Hashable, object]
    geometric: bool = False
    source: Graph | None = None
    target: Graph | None = None
    vertex_image: dict[str, str] | None = None
    arcs: dict[frozenset, tuple[str, ...]] | None = None


@dataclass(frozen=True)
class AlmostEmbeddingResult:
    ok: bool
    violation: tuple[Hashable, Hashable] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _image_vertices(img) -> frozenset:
    return frozenset().union(*img) if img else frozenset()


def _image_points(img) -> set:
    return {p for s in img for p in s}


def _check_well_defined(inst: AlmostEmbeddingInstance) -> None:
    keys = list(inst.cells)
    for a in keys:
        for b in keys:
            if inst.cells[a] < inst.cells[b]:
                if inst.geometric:
                    ok = _image_points(inst.images[a]) <= _image_points(inst.images[b])
                else:
                    ok = _image_vertices(inst.images[a]) <= _image_vertices(inst.images[b])
                if not ok:
                    raise IllDefinedMapError(f"image of {a!r} is not inside the image of {b!r}")


def almost_embedding_check(inst: AlmostEmbeddingInstance) -> AlmostEmbeddingResult:
    """Disjoint closed cells must have disjoint images."""
    if set(inst.cells) != set(inst.images):
        raise IllDefinedMapError("every cell needs an image")
    _check_well_defined(inst)
    keys = list(inst.cells)
    if not inst.geometric:
        verts = {k: _image_vertices(inst.images[k]) for k in keys}
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            if inst.cells[a] & inst.cells[b]:
                continue
            if inst.geometric:
                hit = any(
                    closed_simplices_intersect(s, t)
                    for s in inst.images[a]
                    for t in inst.images[b]
                )
            else:
                hit = bool(verts[a] & verts[b])
            if hit:
                return AlmostEmbeddingResult(False, (a, b))
    return AlmostEmbeddingResult(True)


def _graph_cells(g: Graph) -> dict:
    cells = {("v", v): frozenset((v,)) for v in g.vertices}
    cells.update({("e", frozenset(e)): frozenset(e) for e in g.edges})
    return cells


def graph_map_instance(
    source: Graph, target: Graph, vertex_image: dict[str, str], arcs: dict
) -> AlmostEmbeddingInstance:
    """Map sending each source edge onto a path of target edges."""
    tedges = target.edge_set()
    images = {}
    norm_arcs = {}
    for v in source.vertices:
        if vertex_image.get(v) not in target.vertices:
            raise IllDefinedMapError(f"vertex {v!r} has no image in the target")
        images[("v", v)] = frozenset({frozenset((vertex_image[v],))})
    for u, w in source.edges:
        key = frozenset((u, w))
        path = tuple(arcs[key])
        if {path[0], path[-1]} != {vertex_image[u], vertex_image[w]} or len(path) < 2:
            raise IllDefinedMapError(f"arc for edge ({u}, {w}) does not join the endpoint images")
        steps = list(zip(path, path[1:]))
        if any(frozenset(s) not in tedges for s in steps):
            raise IllDefinedMapError(f"arc for edge ({u}, {w}) leaves the target graph")
        norm_arcs[key] = path
        images[("e", key)] = frozenset(
            {frozenset((x,)) for x in path} | {frozenset(s) for s in steps}
        )
    return AlmostEmbeddingInstance(
        _graph_cells(source), images, False, source, target, dict(vertex_image), norm_arcs
    )


def _all_shortest_paths(adj, a: str, b: str) -> list[tuple[str, ...]]:
    dist = {a: 0}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    if b not in dist:
        return []
    out = []

    def walk(path):
        x = path[-1]
        if x == a:
            out.append(tuple(reversed(path)))
            return
        for y in adj[x]:
            if dist.get(y) == dist[x] - 1:
                walk(path + [y])

    walk([b])
    return out


def shortest_arc_map(source: Graph, target: Graph, vertex_image: dict[str, str]) -> AlmostEmbeddingInstance:
    """Send each edge to a shortest target path between the endpoint images.

    Ties prefer paths whose interior avoids the other vertex images, then the
    lexicographically smallest vertex sequence.
    """
    adj = target.adjacency()
    images = set(vertex_image.values())
    arcs = {}
    for u, w in source.edges:
        a, b = vertex_image[u], vertex_image[w]
        candidates = _all_shortest_paths(adj, a, b)
        if not candidates:
            raise IllDefinedMapError(f"no path from {a!r} to {b!r}")
        arcs[frozenset((u, w))] = min(
            candidates, key=lambda p: (sum(x in images for x in p[1:-1]), p)
        )
    return graph_map_instance(source, target, vertex_image, arcs)


K5_SPECIAL = "0"
K33_EDGE = ("a0", "b0")


def k5_into_k33_map() -> AlmostEmbeddingInstance:
    """K5 vertex 0 goes to the midpoint of edge a0-b0 of K3,3; vertices 1..4
    go to the four vertices off that edge; edges follow shortest arcs."""
    source = complete_graph(5)
    target = complete_bipartite(3).subdivide([K33_EDGE])
    mid = f"{K33_EDGE[0]}~{K33_EDGE[1]}"
    vertex_image = {"0": mid, "1": "a1", "2": "a2", "3": "b1", "4": "b2"}
    return shortest_arc_map(source, target, vertex_image)


def product_instance(f: AlmostEmbeddingInstance, g: AlmostEmbeddingInstance) -> AlmostEmbeddingInstance:
    """Cellwise product map: the cell a x b goes to f(a) x g(b)."""
    if f.geometric or g.geometric:
        raise ValueError("product instances are combinatorial")
    cells = {}
    images = {}
    for ka, va in f.cells.items():
        for kb, vb in g.cells.items():
            key = (ka, kb)
            cells[key] = frozenset(itertools.product(va, vb))
            images[key] = frozenset(
                frozenset(itertools.product(x, y)) for x in f.images[ka] for y in g.images[kb]
            )
    return AlmostEmbeddingInstance(cells, images, False)


def compose_with_embedding(f: AlmostEmbeddingInstance, emb: GeometricComplex) -> AlmostEmbeddingInstance:
    """Follow a combinatorial map by a linear map of the target complex."""
    if f.geometric:
        raise ValueError("expected a combinatorial map")
    images = {
        k: tuple(emb.simplex(cell) for cell in sorted(img, key=sorted))
        for k, img in f.images.items()
    }
    return AlmostEmbeddingInstance(dict(f.cells), images, True, f.source)


def embedding_instance(g: GeometricComplex) -> AlmostEmbeddingInstance:
    """The identity map of a realized complex, cell by cell."""
    cells = {face: face for face in g.complex.faces()}
    images = {face: (g.simplex(face),) for face in cells}
    return AlmostEmbeddingInstance(cells, images, True)


def graph_complex(g: Graph) -> SimplicialComplex:
    return SimplicialComplex.from_facets(g.edges, g.vertices)


# ---------------------------------------------------------------------------
# Campaigns
# ---------------------------------------------------------------------------

CAMPAIGN_KINDS = ("sacks_n", "conway_gordon_k6", "obstruction_invariance")


@dataclass
class TrialOutcome:
    seed: int
    linked: bool = False
    v: int | None = None
    ok: bool = False
    error: str | None = None
    detail: dict = field(default_factory=dict)


@dataclass
class CampaignResult:
    kind: str
    n: int
    trials: int
    seed: int
    linked_count: int
    v_histogram: dict[str, int]
    failing_seeds: list[int]
    error_seeds: list[int]
    lift_checked: bool

    @property
    def linked_fraction(self) -> float:
        return self.linked_count / self.trials

    @property
    def ok(self) -> bool:
        return not self.failing_seeds and not self.error_seeds

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "linked_count": self.linked_count,
            "linked_fraction": self.linked_fraction,
            "v_histogram": dict(sorted(self.v_histogram.items())),
            "failing_seeds": self.failing_seeds,
            "error_seeds": self.error_seeds,
            "lift_checked": self.lift_checked,
        }


def _run_trial(kind: str, n: int, seed: int, lift: bool) -> TrialOutcome:
    out = TrialOutcome(seed)
    try:
        if kind == "conway_gordon_k6":
            g = random_embedding(k6_complex(), 3, seed)
            rep = find_linked_triangles_k6(g)
            out.linked = rep.linked_pair is not None
            out.v = rep.parity_sum
            out.ok = out.linked and rep.parity_sum == 1
            return out
        g = random_embedding(join_power(skeleton_complex(0, 3), n), 2 * n - 1, seed)
        pair = find_linked_pair(g)
        out.linked = pair is not None
        bases = [default_base(n)]
        if kind == "obstruction_invariance":
            rng = random.Random(seed)
            bases.append(tuple(rng.randrange(4) for _ in range(n)))
        values = [compute_obstruction(g, c).v for c in bases]
        out.v = values[0]
        out.ok = out.linked and all(v == 1 for v in values)
        out.detail["v_by_base"] = values
        if lift:
            v_lift = compute_obstruction(g, bases[0], method="lift").v
            out.detail["v_lift"] = v_lift
            out.ok = out.ok and v_lift == out.v
    except (ResampleBudgetError, DegeneracyError) as exc:
        out.error = f"{type(exc).__name__}: {exc}"
    return out


def _run_trial_args(args):
    return _run_trial(*args)


def campaign(
    kind: str,
    n: int = 2,
    trials: int = 100,
    seed: int = 0,
    lift: bool | None = None,
    workers: int = 1,
    limit: int | None = None,
) -> CampaignResult:
    """Run ``trials`` independent random embeddings (trial i uses seed + i)."""
    if kind not in CAMPAIGN_KINDS:
        raise ValueError(f"unknown campaign kind {kind!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if kind == "conway_gordon_k6":
        n = 2
        lift = False
    else:
        _check_n(n, limit)
        if lift is None:
            lift = n <= 2
    jobs = [(kind, n, seed + i, lift) for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_trial_args, jobs, chunksize=8))
    else:
        outcomes = [_run_trial(*job) for job in jobs]
    outcomes.sort(key=lambda o: o.seed)
    hist = Counter(str(o.v) for o in outcomes if o.error is None)
    return CampaignResult(
        kind=kind,
        n=n,
        trials=trials,
        seed=seed,
        linked_count=sum(o.linked for o in outcomes),
        v_histogram=dict(hist),
        failing_seeds=[o.seed for o in outcomes if o.error is None and not o.ok],
        error_seeds=[o.seed for o in outcomes if o.error is not None],
        lift_checked=bool(lift),
    )
