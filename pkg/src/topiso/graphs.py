"""Finite simple graphs, Mekler's niceness condition, and graph isomorphism.

Graphs live on vertices ``0..n-1`` and store each edge once as ``(r, s)``
with ``r < s``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Union


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n_vertices < 0:
            raise ValueError("n_vertices must be non-negative")
        edges = frozenset(self.edges)
        for e in edges:
            r, s = e
            if not (0 <= r < s < self.n_vertices):
                raise ValueError(f"edge {e!r} is not of the form (r, s) with r < s < {self.n_vertices}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from edges given in either orientation."""
        canon = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            canon.add((min(u, v), max(u, v)))
        return cls(n, frozenset(canon))

    @cached_property
    def neighbours(self) -> tuple[frozenset, ...]:
        adj = [set() for _ in range(self.n_vertices)]
        for r, s in self.edges:
            adj[r].add(s)
            adj[s].add(r)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def non_edges(self) -> tuple[tuple[int, int], ...]:
        """All pairs ``(r, s)``, ``r < s``, that are not edges, sorted."""
        return tuple(
            (r, s)
            for r, s in itertools.combinations(range(self.n_vertices), 2)
            if (r, s) not in self.edges
        )

    def degree(self, v: int) -> int:
        return len(self.neighbours[v])

    def has_edge(self, r: int, s: int) -> bool:
        return has_edge(self, r, s)

    def __repr__(self):
        return f"Graph({self.n_vertices}, {sorted(self.edges)})"


def _check_vertex(g: Graph, v: int) -> None:
    if not (0 <= v < g.n_vertices):
        raise IndexError(f"vertex {v} out of range for graph on {g.n_vertices} vertices")


def has_edge(g: Graph, r: int, s: int) -> bool:
    _check_vertex(g, r)
    _check_vertex(g, s)
    if r == s:
        return False
    return (min(r, s), max(r, s)) in g.edges


def restrict(g: Graph, n: int) -> Graph:
    """Induced subgraph on ``{0, ..., n-1}``."""
    if not (0 <= n <= g.n_vertices):
        raise IndexError(f"cannot restrict a graph on {g.n_vertices} vertices to {n}")
    return Graph(n, frozenset((r, s) for r, s in g.edges if s < n))


def induced(g: Graph, vertices: Iterable[int]) -> Graph:
    """Induced subgraph on ``vertices``, relabelled ``vertices[k] -> k``."""
    vertices = list(vertices)
    pos = {v: k for k, v in enumerate(vertices)}
    if len(pos) != len(vertices):
        raise ValueError("repeated vertex")
    for v in vertices:
        _check_vertex(g, v)
    return Graph.from_edges(
        len(vertices), ((pos[r], pos[s]) for r, s in g.edges if r in pos and s in pos)
    )


def relabel(g: Graph, perm) -> Graph:
    """The image of ``g`` under the vertex bijection ``v -> perm[v]``."""
    perm = tuple(perm)
    if sorted(perm) != list(range(g.n_vertices)):
        raise ValueError("not a permutation of the vertex set")
    return Graph.from_edges(g.n_vertices, ((perm[r], perm[s]) for r, s in g.edges))


def complement(g: Graph) -> Graph:
    return Graph(g.n_vertices, frozenset(g.non_edges))


# -- standard graphs ---------------------------------------------------------

def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(itertools.combinations(range(n), 2)))


def petersen_graph() -> Graph:
    """Outer 5-cycle 0..4, spokes i -- i+5, inner pentagram on 5..9."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# -- niceness ----------------------------------------------------------------

@dataclass(frozen=True)
class Triangle:
    a: int
    b: int
    c: int

    def __str__(self):
        return f"Triangle({self.a},{self.b},{self.c})"


@dataclass(frozen=True)
class Square:
    a: int
    b: int
    c: int
    d: int

    def __str__(self):
        return f"Square({self.a},{self.b},{self.c},{self.d})"


@dataclass(frozen=True)
class SeparationFailure:
    x: int
    y: int

    def __str__(self):
        return f"SeparationFailure({self.x},{self.y})"


Violation = Union[Triangle, Square, SeparationFailure]


@dataclass(frozen=True)
class NicenessReport:
    is_nice: bool
    violation: Optional[Violation] = None

    def __str__(self):
        return "nice" if self.is_nice else f"not nice: {self.violation}"


def find_triangle(g: Graph) -> Optional[Triangle]:
    adj = g.neighbours
    for a, b, c in itertools.combinations(range(g.n_vertices), 3):
        if b in adj[a] and c in adj[b] and a in adj[c]:
            return Triangle(a, b, c)
    return None


def find_square(g: Graph) -> Optional[Square]:
    """First 4-cycle ``a-b-c-d-a`` in lexicographic order of ``(a, b, c, d)``.

    Chords are ignored: any C4 subgraph counts.
    """
    adj = g.neighbours
    for quad in itertools.permutations(range(g.n_vertices), 4):
        a, b, c, d = quad
        if b in adj[a] and c in adj[b] and d in adj[c] and a in adj[d]:
            return Square(a, b, c, d)
    return None


def separation_witness(g: Graph, x: int, y: int) -> Optional[int]:
    """Least ``z`` not in ``{x, y}`` joined to ``x`` but not to ``y``."""
    adj = g.neighbours
    for z in sorted(adj[x]):
        if z != y and z not in adj[y]:
            return z
    return None


def is_nice(g: Graph) -> NicenessReport:
    t = find_triangle(g)
    if t is not None:
        return NicenessReport(False, t)
    sq = find_square(g)
    if sq is not None:
        return NicenessReport(False, sq)
    for x, y in itertools.permutations(range(g.n_vertices), 2):
        if separation_witness(g, x, y) is None:
            return NicenessReport(False, SeparationFailure(x, y))
    return NicenessReport(True)


def has_universal_vertex(g: Graph) -> bool:
    """True if some vertex is joined to every other vertex."""
    return any(len(nb) == g.n_vertices - 1 for nb in g.neighbours)


# -- isomorphism -------------------------------------------------------------

def are_isomorphic(g1: Graph, g2: Graph) -> Optional[tuple[int, ...]]:
    """Return ``pi`` with ``g1.edge(r, s) <=> g2.edge(pi[r], pi[s])``, or None.

    Plain backtracking. Vertices of ``g1`` are matched in an order that keeps
    each new vertex adjacent to already-placed ones where possible, and
    candidates must agree in degree and in adjacency to everything placed.
    """
    n = g1.n_vertices
    if n != g2.n_vertices or len(g1.edges) != len(g2.edges):
        return None
    deg1 = [g1.degree(v) for v in range(n)]
    deg2 = [g2.degree(v) for v in range(n)]
    if sorted(deg1) != sorted(deg2):
        return None
    adj1, adj2 = g1.neighbours, g2.neighbours

    # connectivity-first, high-degree-first matching order
    order: list[int] = []
    placed = set()
    while len(order) < n:
        start = max((v for v in range(n) if v not in placed), key=lambda v: (deg1[v], -v))
        frontier = [start]
        while frontier:
            v = max(frontier, key=lambda u: (len(adj1[u] & placed), deg1[u], -u))
            frontier.remove(v)
            if v in placed:
                continue
            order.append(v)
            placed.add(v)
            frontier.extend(u for u in adj1[v] if u not in placed and u not in frontier)

    image = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for w in range(n):
            if used[w] or deg2[w] != deg1[v]:
                continue
            ok = True
            for u in order[:k]:
                if (u in adj1[v]) != (image[u] in adj2[w]):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = w
            used[w] = True
            if extend(k + 1):
                return True
            used[w] = False
            image[v] = -1
        return False

    if extend(0):
        return tuple(image)
    return None


def is_isomorphism(g1: Graph, g2: Graph, pi) -> bool:
    """Direct re-check that ``pi`` is an isomorphism ``g1 -> g2``."""
    n = g1.n_vertices
    if n != g2.n_vertices or sorted(pi) != list(range(n)):
        return False
    return all(
        has_edge(g1, r, s) == has_edge(g2, pi[r], pi[s])
        for r, s in itertools.combinations(range(n), 2)
    )


# -- random nice graphs ------------------------------------------------------

def _short_path(adj, u: int, v: int, max_len: int) -> bool:
    """Is there a path of length <= max_len from u to v?"""
    frontier = {u}
    seen = {u}
    for _ in range(max_len):
        nxt = set()
        for a in frontier:
            for b in adj[a]:
                if b == v:
                    return True
                if b not in seen:
                    seen.add(b)
                    nxt.add(b)
        frontier = nxt
    return False


def _random_girth5(n: int, rng: random.Random) -> list[set]:
    """Random maximal graph with no cycles of length 3 or 4."""
    adj = [set() for _ in range(n)]
    pairs = list(itertools.combinations(range(n), 2))
    rng.shuffle(pairs)
    for u, v in pairs:
        if not _short_path(adj, u, v, 3):
            adj[u].add(v)
            adj[v].add(u)
    return adj


def _repair_low_degree(adj, n: int, rng: random.Random) -> None:
    # Nice <=> girth >= 5 and minimum degree >= 2, so only low-degree
    # vertices need fixing: drop an edge near them and re-saturate.
    for _ in range(4 * n):
        low = [v for v in range(n) if len(adj[v]) < 2]
        if not low:
            return
        v = rng.choice(low)
        blockers = [
            u for u in range(n)
            if u != v and u not in adj[v] and _short_path(adj, v, u, 3)
        ]
        if not blockers:
            return
        u = rng.choice(blockers)
        # remove an edge on some short v..u path, away from v itself
        cands = [(a, b) for a in adj[u] for b in adj[a] if b != u and a != v and b != v]
        cands += [(u, a) for a in adj[u] if a != v]
        cands = [(a, b) for a, b in cands if len(adj[a]) > 2 and len(adj[b]) > 2]
        if not cands:
            return
        a, b = rng.choice(sorted(cands))
        adj[a].discard(b)
        adj[b].discard(a)
        for w in rng.sample(range(n), n):
            if w != v and w not in adj[v] and not _short_path(adj, v, w, 3):
                adj[v].add(w)
                adj[w].add(v)
        for x, y in itertools.combinations(range(n), 2):
            if y not in adj[x] and not _short_path(adj, x, y, 3):
                adj[x].add(y)
                adj[y].add(x)


def generate_nice(n: int, seed: int, restarts: int = 200) -> Optional[Graph]:
    """Search for a nice graph on ``n`` vertices; None if the budget runs out."""
    if n < 5:
        raise ValueError("nice graphs need at least 5 vertices")
    rng = random.Random(seed)
    for _ in range(restarts):
        adj = _random_girth5(n, rng)
        _repair_low_degree(adj, n, rng)
        g = Graph.from_edges(n, ((u, v) for u in range(n) for v in adj[u] if u < v))
        if is_nice(g).is_nice:
            return g
    return None


# -- text format -------------------------------------------------------------

class GraphFormatError(ValueError):
    pass


def parse_graph(text: str) -> Graph:
    """Parse ``graph <n>`` followed by ``e <u> <v>`` lines."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphFormatError("empty graph file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "graph":
        raise GraphFormatError(f"expected 'graph <n>', got {lines[0]!r}")
    try:
        n = int(head[1])
    except ValueError:
        raise GraphFormatError(f"bad vertex count {head[1]!r}") from None
    if n < 0:
        raise GraphFormatError("negative vertex count")
    edges = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3 or parts[0] != "e":
            raise GraphFormatError(f"expected 'e <u> <v>', got {ln!r}")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphFormatError(f"bad edge line {ln!r}") from None
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge {u} {v} out of range")
        e = (min(u, v), max(u, v))
        if e in edges:
            raise GraphFormatError(f"duplicate edge {u} {v}")
        edges.add(e)
    return Graph(n, frozenset(edges))


def format_graph(g: Graph) -> str:
    out = [f"graph {g.n_vertices}"]
    out.extend(f"e {r} {s}" for r, s in sorted(g.edges))
    return "\n".join(out) + "\n"
