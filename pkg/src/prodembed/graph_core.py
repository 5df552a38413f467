"""Graphs, factor classification, planarity with Kuratowski witnesses, and the
minimal embedding dimension of a product of graphs."""

from __future__ import annotations

import enum
import itertools
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence


class GraphParseError(ValueError):
    """Raised for malformed graph sources; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class HypothesisError(ValueError):
    """The input falls outside the hypotheses of the dimension formula."""


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphParseError("duplicate vertex label")
        known = set(self.vertices)
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise GraphParseError(f"self-loop at {u!r}")
            if u not in known or v not in known:
                raise GraphParseError(f"edge ({u}, {v}) uses an undeclared vertex")
            key = frozenset((u, v))
            if key in seen:
                raise GraphParseError(f"duplicate edge ({u}, {v})")
            seen.add(key)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]], vertices: Iterable[str] = ()) -> "Graph":
        edges = [(str(u), str(v)) for u, v in edges]
        order: dict[str, None] = {str(v): None for v in vertices}
        for u, v in edges:
            order.setdefault(u)
            order.setdefault(v)
        return cls(tuple(order), tuple(edges))

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v: str) -> int:
        return sum(v in e for e in self.edges)

    def edge_set(self) -> set[frozenset[str]]:
        return {frozenset(e) for e in self.edges}

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj = self.adjacency()
        return len(_reach(adj, self.vertices[0])) == len(self.vertices)

    def relabel(self, mapping: dict[str, str]) -> "Graph":
        return Graph(
            tuple(mapping[v] for v in self.vertices),
            tuple((mapping[u], mapping[v]) for u, v in self.edges),
        )

    def subdivide(self, edges: Iterable[tuple[str, str]] | None = None) -> "Graph":
        """Insert a midpoint vertex ``u~v`` into each given edge (default: all)."""
        targets = self.edge_set() if edges is None else {frozenset(e) for e in edges}
        vertices = list(self.vertices)
        new_edges = []
        for u, v in self.edges:
            if frozenset((u, v)) in targets:
                mid = f"{u}~{v}"
                vertices.append(mid)
                new_edges += [(u, mid), (mid, v)]
            else:
                new_edges.append((u, v))
        return Graph(tuple(vertices), tuple(new_edges))


def _reach(adj: dict[str, set[str]], start: str) -> set[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def complete_graph(n: int) -> Graph:
    labels = [str(k) for k in range(n)]
    return Graph.from_edges(itertools.combinations(labels, 2), labels)


def complete_bipartite(p: int, q: int | None = None) -> Graph:
    q = p if q is None else q
    left = [f"a{k}" for k in range(p)]
    right = [f"b{k}" for k in range(q)]
    return Graph.from_edges(itertools.product(left, right), left + right)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphParseError("a simple cycle needs at least 3 vertices")
    labels = [str(k) for k in range(n)]
    return Graph.from_edges(((labels[k], labels[(k + 1) % n]) for k in range(n)), labels)


def path_graph(n: int) -> Graph:
    """Path on ``n`` vertices."""
    if n < 1:
        raise GraphParseError("a path needs at least 1 vertex")
    labels = [str(k) for k in range(n)]
    return Graph.from_edges(zip(labels, labels[1:]), labels)


def triod() -> Graph:
    return Graph.from_edges([("0", "1"), ("0", "2"), ("0", "3")])


_BUILTIN = re.compile(r"^(kn|knn|cycle|path):(\d+)$")


def parse_graph(source: str) -> Graph:
    """Parse a builtin name (``k5``, ``k33``, ``kn:N``, ``knn:N``, ``cycle:N``,
    ``path:N``, ``triod``, ``point``) or edge-list text.

    Edge-list lines hold ``u v``; a lone label declares an isolated vertex and
    ``#`` starts a comment.
    """
    name = source.strip().lower()
    if name == "k5":
        return complete_graph(5)
    if name == "k33":
        return complete_bipartite(3)
    if name == "triod":
        return triod()
    if name == "point":
        return Graph(("0",), ())
    m = _BUILTIN.match(name)
    if m:
        kind, size = m.group(1), int(m.group(2))
        if kind == "kn":
            if size < 1:
                raise GraphParseError("kn:N needs N >= 1")
            return complete_graph(size)
        if kind == "knn":
            if size < 1:
                raise GraphParseError("knn:N needs N >= 1")
            return complete_bipartite(size)
        if kind == "cycle":
            return cycle_graph(size)
        return path_graph(size)

    vertices: dict[str, None] = {}
    edges: list[tuple[str, str]] = []
    seen: set[frozenset[str]] = set()
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            vertices.setdefault(parts[0])
            continue
        if len(parts) != 2:
            raise GraphParseError(f"expected 'u v', got {raw.strip()!r}", lineno)
        u, v = parts
        if u == v:
            raise GraphParseError(f"self-loop at {u!r}", lineno)
        key = frozenset((u, v))
        if key in seen:
            raise GraphParseError(f"duplicate edge ({u}, {v})", lineno)
        seen.add(key)
        vertices.setdefault(u)
        vertices.setdefault(v)
        edges.append((u, v))
    if not vertices:
        raise GraphParseError(f"not a builtin graph name and no edges found: {source!r}")
    return Graph(tuple(vertices), tuple(edges))


# ---------------------------------------------------------------------------
# Planarity (path addition) and Kuratowski witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KuratowskiWitness:
    kind: str  # "K5" or "K3,3"
    branch_vertices: tuple[str, ...]
    paths: tuple[tuple[str, ...], ...]
    bipartition: tuple[tuple[str, ...], tuple[str, ...]] | None = None

    def edges(self) -> set[frozenset[str]]:
        return {frozenset(p) for path in self.paths for p in zip(path, path[1:])}


def _blocks(adj: dict[str, set[str]]) -> list[set[frozenset[str]]]:
    """Biconnected components as edge sets (Hopcroft-Tarjan)."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    stack: list[frozenset[str]] = []
    blocks: list[set[frozenset[str]]] = []
    counter = itertools.count()

    for root in adj:
        if root in index:
            continue
        index[root] = low[root] = next(counter)
        work = [(root, None, iter(sorted(adj[root])))]
        while work:
            v, parent, it = work[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w not in index:
                    stack.append(frozenset((v, w)))
                    index[w] = low[w] = next(counter)
                    work.append((w, v, iter(sorted(adj[w]))))
                    advanced = True
                    break
                if index[w] < index[v]:
                    stack.append(frozenset((v, w)))
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if parent is not None:
                low[parent] = min(low[parent], low[v])
                if low[v] >= index[parent]:
                    block = set()
                    edge = frozenset((parent, v))
                    while True:
                        e = stack.pop()
                        block.add(e)
                        if e == edge:
                            break
                    blocks.append(block)
    return blocks


def _find_cycle(adj: dict[str, set[str]]) -> list[str]:
    start = min(adj)
    parent = {start: None}
    order = [start]
    depth = {start: 0}
    stack = [(start, iter(sorted(adj[start])))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if w not in parent:
                parent[w] = v
                depth[w] = depth[v] + 1
                stack.append((w, iter(sorted(adj[w]))))
                break
            if w != parent[v] and depth[w] < depth[v]:
                cycle = [v]
                while cycle[-1] != w:
                    cycle.append(parent[cycle[-1]])
                return cycle
        else:
            stack.pop()
    raise ValueError("graph has no cycle")


def _biconnected_planar(adj: dict[str, set[str]]) -> bool:
    """Demoucron-Malgrange-Pertuiset on a 2-connected graph with >= 3 vertices."""
    nv = len(adj)
    ne = sum(len(s) for s in adj.values()) // 2
    if ne > 3 * nv - 6:
        return False
    cycle = _find_cycle(adj)
    emb_v = set(cycle)
    emb_e = {frozenset((cycle[k], cycle[(k + 1) % len(cycle)])) for k in range(len(cycle))}
    faces = [list(cycle), list(cycle)]

    while len(emb_e) < ne:
        fragments = []  # (attachments, path)
        for u in sorted(emb_v):
            for w in sorted(adj[u]):
                if w in emb_v and u < w and frozenset((u, w)) not in emb_e:
                    fragments.append(({u, w}, [u, w]))
        seen: set[str] = set()
        for start in sorted(adj):
            if start in emb_v or start in seen:
                continue
            comp = {start}
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if y not in emb_v and y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            attach = {y for x in comp for y in adj[x] if y in emb_v}
            fragments.append((attach, _fragment_path(adj, comp, attach)))

        best = None
        for attach, path in fragments:
            admissible = [k for k, f in enumerate(faces) if attach <= set(f)]
            if not admissible:
                return False
            if best is None or len(admissible) < len(best[0]):
                best = (admissible, path)
        admissible, path = best
        face = faces.pop(admissible[0])
        a, b, inner = path[0], path[-1], path[1:-1]
        i, j = face.index(a), face.index(b)
        if i <= j:
            arc_ab, arc_ba = face[i:j + 1], face[j:] + face[:i + 1]
        else:
            arc_ab, arc_ba = face[i:] + face[:j + 1], face[j:i + 1]
        faces.append(arc_ab + inner[::-1])
        faces.append(arc_ba + inner)
        emb_v.update(path)
        emb_e.update(frozenset(p) for p in zip(path, path[1:]))
    return True


def _fragment_path(adj, comp: set[str], attach: set[str]) -> list[str]:
    a = min(attach)
    parent: dict[str, str | None] = {}
    queue = deque()
    for c in sorted(adj[a]):
        if c in comp:
            parent[c] = None
            queue.append(c)
    while queue:
        x = queue.popleft()
        for y in sorted(adj[x]):
            if y in attach and y != a:
                path = [y, x]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return [a] + path[::-1]
            if y in comp and y not in parent:
                parent[y] = x
                queue.append(y)
    raise AssertionError("fragment of a 2-connected graph has a single attachment")


def _planar_adj(adj: dict[str, set[str]]) -> bool:
    for block in _blocks(adj):
        if len(block) < 3:
            continue
        sub: dict[str, set[str]] = {}
        for e in block:
            u, v = tuple(e)
            sub.setdefault(u, set()).add(v)
            sub.setdefault(v, set()).add(u)
        if not _biconnected_planar(sub):
            return False
    return True


def is_planar(g: Graph) -> tuple[bool, KuratowskiWitness | None]:
    """Planarity test; non-planar graphs come with a K5 or K3,3 subdivision."""
    adj = g.adjacency()
    if _planar_adj(adj):
        return True, None
    return False, _extract_witness(adj)


def _extract_witness(adj: dict[str, set[str]]) -> KuratowskiWitness:
    adj = {v: set(ws) for v, ws in adj.items()}
    edges = sorted(tuple(sorted((u, w))) for u in adj for w in adj[u] if u < w)
    for u, w in edges:
        adj[u].discard(w)
        adj[w].discard(u)
        if _planar_adj(adj):
            adj[u].add(w)
            adj[w].add(u)
    # edge-minimal non-planar: a Kuratowski subdivision plus isolated vertices
    adj = {v: ws for v, ws in adj.items() if ws}
    branch = sorted(v for v, ws in adj.items() if len(ws) >= 3)
    branch_set = set(branch)
    paths = []
    for b in branch:
        for first in sorted(adj[b]):
            path = [b, first]
            while path[-1] not in branch_set:
                nxt = next(x for x in adj[path[-1]] if x != path[-2])
                path.append(nxt)
            if (path[0], path[1]) < (path[-1], path[-2]):
                paths.append(tuple(path))
    if len(branch) == 5:
        return KuratowskiWitness("K5", tuple(branch), tuple(sorted(paths)))
    if len(branch) != 6:
        raise AssertionError(f"unexpected minimal non-planar graph with {len(branch)} branch vertices")
    side = {branch[0]: 0}
    queue = deque([branch[0]])
    ends = {b: [p[-1] if p[0] == b else p[0] for p in paths if b in (p[0], p[-1])] for b in branch}
    while queue:
        x = queue.popleft()
        for y in ends[x]:
            if y not in side:
                side[y] = 1 - side[x]
                queue.append(y)
    left = tuple(b for b in branch if side[b] == 0)
    right = tuple(b for b in branch if side[b] == 1)
    return KuratowskiWitness("K3,3", tuple(branch), tuple(sorted(paths)), (left, right))


def verify_witness(g: Graph, w: KuratowskiWitness) -> bool:
    """Check that ``w`` is a subdivision of K5 / K3,3 sitting inside ``g``."""
    edges = g.edge_set()
    branch = set(w.branch_vertices)
    inner_seen: set[str] = set()
    pairs = set()
    for path in w.paths:
        if len(path) < 2 or path[0] not in branch or path[-1] not in branch:
            return False
        if any(frozenset(e) not in edges for e in zip(path, path[1:])):
            return False
        inner = path[1:-1]
        if len(set(inner)) != len(inner) or branch & set(inner) or inner_seen & set(inner):
            return False
        inner_seen |= set(inner)
        pairs.add(frozenset((path[0], path[-1])))
    if len(pairs) != len(w.paths):
        return False
    if w.kind == "K5":
        return len(branch) == 5 and pairs == {frozenset(p) for p in itertools.combinations(branch, 2)}
    if w.kind == "K3,3" and w.bipartition is not None:
        left, right = w.bipartition
        if len(left) != 3 or len(right) != 3 or set(left) | set(right) != branch:
            return False
        return pairs == {frozenset(p) for p in itertools.product(left, right)}
    return False


# ---------------------------------------------------------------------------
# Factor classification and the dimension formula
# ---------------------------------------------------------------------------

class FactorKind(enum.Enum):
    POINT = "point"
    INTERVAL = "interval"
    CIRCLE = "circle"
    OTHER = "other"


@dataclass(frozen=True)
class FactorClass:
    kind: FactorKind
    planar: bool | None = None  # only filled for OTHER


def classify_factor(g: Graph) -> FactorClass:
    if not g.is_connected():
        raise HypothesisError("factor graph is not connected")
    degrees = [len(ws) for ws in g.adjacency().values()]
    nv, ne = len(g.vertices), len(g.edges)
    if nv == 1:
        return FactorClass(FactorKind.POINT)
    if ne == nv - 1 and max(degrees) <= 2:
        return FactorClass(FactorKind.INTERVAL)
    if all(d == 2 for d in degrees):
        return FactorClass(FactorKind.CIRCLE)
    planar, _ = is_planar(g)
    return FactorClass(FactorKind.OTHER, planar)


@dataclass(frozen=True)
class DimensionResult:
    n: int
    s: int
    i: int
    case: int
    d: int
    planar_factors: int = 0
    dropped_points: int = 0

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "s": self.s,
            "i": self.i,
            "case": self.case,
            "d": self.d,
            "planar_factors": self.planar_factors,
            "dropped_points": self.dropped_points,
        }


def min_embedding_dim(factors: Sequence[Graph], s: int = 0, i: int = 0) -> DimensionResult:
    """Minimal d with G_1 x ... x G_n x (S^1)^s x I^i embeddable in R^d.

    Point factors are dropped and interval/circle-shaped factors are absorbed
    into ``i``/``s`` before the hypotheses are checked.
    """
    if s < 0 or i < 0:
        raise ValueError("s and i must be non-negative")
    n = planar = points = 0
    for g in factors:
        cls = classify_factor(g)
        if cls.kind is FactorKind.POINT:
            points += 1
        elif cls.kind is FactorKind.INTERVAL:
            i += 1
        elif cls.kind is FactorKind.CIRCLE:
            s += 1
        else:
            n += 1
            planar += bool(cls.planar)
    if n == 0:
        raise HypothesisError(
            "outside the formula's hypotheses: every factor is a point, interval or circle"
        )
    if i != 0 or planar:
        return DimensionResult(n, s, i, 1, 2 * n + s + i, planar, points)
    return DimensionResult(n, s, i, 2, 2 * n + s + 1, planar, points)
