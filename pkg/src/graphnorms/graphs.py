"""Simple graphs, the blow-up constructions, and structural predicates.

Vertices are dense 0-based integers. Named families fix a documented
labeling so that certificates are reproducible:

* ``cycle_graph(k)``: vertices 0..k-1 around the cycle.
* ``complete_bipartite(m, n)``: classes 0..m-1 and m..m+n-1.
* ``kpm_graph(m)`` (K_{m,m} minus a perfect matching): a_i = i, b_i = m+i,
  the removed matching is {(i, m+i)}.
* ``hypercube_graph(d)``: vertices are d-bit integers, edges flip one bit.
* ``bowtie_blowup(H)``: vertex v of H becomes the edge (v, v(H)+v); the
  two copies are the bipartition classes.
"""

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import SizeGuardError, UsageError

ISO_GUARD = 16  # backtracking isomorphism / subset enumeration limit


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: vertex count plus canonically sorted edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise UsageError("graph needs at least one vertex")
        seen = set()
        for (u, v) in self.edges:
            if u == v:
                raise UsageError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise UsageError(f"edge ({u},{v}) out of range for n={self.n}")
            if u > v:
                raise UsageError(f"edge ({u},{v}) not in canonical (min,max) order")
            if (u, v) in seen:
                raise UsageError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            raise UsageError("edge list not sorted")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a Graph from any iterable of pairs, normalizing order."""
        canon = sorted({(min(u, v), max(u, v)) for (u, v) in edges})
        return cls(n, tuple(canon))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for (u, v) in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for (u, v) in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def relabel(self, perm: list[int]) -> "Graph":
        """Apply the vertex bijection i -> perm[i]."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for (u, v) in self.edges))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        try:
            return cls.from_edges(int(data["n"]), data["edges"])
        except UsageError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed graph JSON: {exc}") from exc


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise UsageError("cycle needs k >= 3")
    return Graph.from_edges(k, ((i, (i + 1) % k) for i in range(k)))


def path_graph(k: int) -> Graph:
    if k < 2:
        raise UsageError("path needs k >= 2")
    return Graph.from_edges(k, ((i, i + 1) for i in range(k - 1)))


def complete_bipartite(m: int, n: int) -> Graph:
    if m < 1 or n < 1:
        raise UsageError("complete bipartite needs m, n >= 1")
    return Graph.from_edges(m + n, ((i, m + j) for i in range(m) for j in range(n)))


def kpm_graph(m: int) -> Graph:
    """K_{m,m} minus the perfect matching {(i, m+i)}."""
    if m < 2:
        raise UsageError("kpm needs m >= 2")
    return Graph.from_edges(
        2 * m, ((i, m + j) for i in range(m) for j in range(m) if i != j)
    )


def hypercube_graph(d: int) -> Graph:
    if d < 1:
        raise UsageError("hypercube needs d >= 1")
    edges = []
    for v in range(1 << d):
        for b in range(d):
            u = v ^ (1 << b)
            if u > v:
                edges.append((v, u))
    return Graph.from_edges(1 << d, edges)


FAMILIES = ("cycle", "complete_bipartite", "kpm", "hypercube", "edge_list")


def construct_family(family: str, *params) -> Graph:
    """Dispatch on a family name; ``edge_list`` takes (n, edges)."""
    if family == "cycle":
        return cycle_graph(*params)
    if family == "complete_bipartite":
        return complete_bipartite(*params)
    if family == "kpm":
        return kpm_graph(*params)
    if family == "hypercube":
        return hypercube_graph(*params)
    if family == "edge_list":
        return Graph.from_edges(*params)
    raise UsageError(f"unknown family {family!r}; choose from {FAMILIES}")


def bowtie_blowup(h: Graph) -> Graph:
    """Blow up every vertex into an edge, joining blown-up pairs crosswise.

    Vertex v becomes v_1 = v and v_2 = v(H)+v; edges are (v_1, v_2) for every
    vertex and (u_1, v_2), (u_2, v_1) for every edge uv. The result is
    bipartite with classes {v_1} and {v_2}, and its bipartite adjacency
    matrix is the adjacency matrix of H plus the identity, so
    e = v(H) + 2 e(H).
    """
    n = h.n
    edges = [(v, n + v) for v in range(n)]
    for (u, v) in h.edges:
        edges.append((u, n + v))
        edges.append((v, n + u))
    return Graph.from_edges(2 * n, edges)


def cartesian_k2(h: Graph) -> Graph:
    """Cartesian product with a single edge: two copies of H plus a matching."""
    n = h.n
    edges = [(v, n + v) for v in range(n)]
    for (u, v) in h.edges:
        edges.append((u, v))
        edges.append((n + u, n + v))
    return Graph.from_edges(2 * n, edges)


def _refine_colors(adj, colors):
    """Iterate (color, sorted neighbour colors) until the partition stabilizes."""
    n = len(adj)
    while True:
        sig = [(colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in range(n)]
        order = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [order[sig[v]] for v in range(n)]
        if new == colors:
            return colors
        colors = new


def is_isomorphic(g: Graph, h: Graph, max_vertices: int = ISO_GUARD) -> bool:
    """Decide isomorphism by backtracking with iterated degree refinement."""
    if g.n > max_vertices or h.n > max_vertices:
        raise SizeGuardError(
            f"isomorphism guard: {max(g.n, h.n)} vertices > {max_vertices}"
        )
    if g.n != h.n or g.edge_count != h.edge_count:
        return False
    adj_g, adj_h = g.adjacency(), h.adjacency()
    cols_g = _refine_colors(adj_g, [0] * g.n)
    cols_h = _refine_colors(adj_h, [0] * h.n)
    if sorted(cols_g) != sorted(cols_h):
        return False

    candidates = [[w for w in range(h.n) if cols_h[w] == cols_g[v]] for v in range(g.n)]
    # start from the most constrained vertex, then grow greedily along edges
    # so each placement is checked against as many mapped vertices as possible
    order = []
    placed = set()
    while len(order) < g.n:
        best = min(
            (v for v in range(g.n) if v not in placed),
            key=lambda v: (-len(adj_g[v] & placed), len(candidates[v]), v),
        )
        order.append(best)
        placed.add(best)
    mapping = [-1] * g.n
    used = [False] * h.n

    def extend(i):
        if i == g.n:
            return True
        v = order[i]
        for w in candidates[v]:
            if used[w]:
                continue
            ok = True
            for u in order[:i]:
                # adjacency and non-adjacency must both be preserved
                if (u in adj_g[v]) != (mapping[u] in adj_h[w]):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used[w] = True
                if extend(i + 1):
                    return True
                used[w] = False
                mapping[v] = -1
        return False

    return extend(0)


def bipartition(g: Graph):
    """Two-color by BFS; returns (class0, class1) as sorted tuples or None."""
    adj = g.adjacency()
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] >= 0:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            v = queue.pop()
            for u in adj[v]:
                if color[u] < 0:
                    color[u] = 1 - color[v]
                    queue.append(u)
                elif color[u] == color[v]:
                    return None
    side0 = tuple(v for v in range(g.n) if color[v] == 0)
    side1 = tuple(v for v in range(g.n) if color[v] == 1)
    return side0, side1


@dataclass(frozen=True)
class StructuralReport:
    vertex_count: int
    edge_count: int
    degree_sequence: tuple[int, ...]
    bipartite: bool
    classes: tuple[tuple[int, ...], tuple[int, ...]] | None
    eulerian: bool
    regular: int | None

    def to_json(self) -> dict:
        return {
            "vertices": self.vertex_count,
            "edges": self.edge_count,
            "degree_sequence": list(self.degree_sequence),
            "bipartite": self.bipartite,
            "classes": [list(c) for c in self.classes] if self.classes else None,
            "eulerian": self.eulerian,
            "regular": self.regular,
        }


def structural_report(g: Graph) -> StructuralReport:
    """Bipartiteness, eulerian-ness (all degrees even), regularity, degrees."""
    deg = g.degrees()
    classes = bipartition(g)
    return StructuralReport(
        vertex_count=g.n,
        edge_count=g.edge_count,
        degree_sequence=tuple(sorted(deg)),
        bipartite=classes is not None,
        classes=classes,
        eulerian=all(d % 2 == 0 for d in deg),
        regular=deg[0] if len(set(deg)) == 1 else None,
    )


def exterior_neighbourhood(g: Graph, members) -> frozenset[int]:
    """Union of the neighbourhoods of the members, minus the members."""
    members = frozenset(members)
    if not all(0 <= v < g.n for v in members):
        raise UsageError("vertex set out of range")
    adj = g.adjacency()
    out = set()
    for v in members:
        out |= adj[v]
    return frozenset(out - members)


def _induced_edges(g: Graph, subset):
    sub = set(subset)
    return [(u, v) for (u, v) in g.edges if u in sub and v in sub]


@dataclass(frozen=True)
class BowtieStructureReport:
    """Outcome of the two structural conditions used by the blow-up proofs.

    Condition (i): some edge lies in exactly one 4-cycle, i.e. its exterior
    neighbourhood induces exactly one edge. Condition (ii): every vertex
    subset spanning exactly two edges has an edge inside its exterior
    neighbourhood.
    """

    edge_in_unique_4cycle: tuple[int, int] | None
    two_edge_sets_ok: bool
    counterexample: frozenset[int] | None

    def to_json(self) -> dict:
        return {
            "edge_in_unique_4cycle": list(self.edge_in_unique_4cycle)
            if self.edge_in_unique_4cycle
            else None,
            "two_edge_sets_ok": self.two_edge_sets_ok,
            "counterexample": sorted(self.counterexample)
            if self.counterexample is not None
            else None,
        }


def verify_bowtie_structure(g: Graph, max_vertices: int = ISO_GUARD) -> BowtieStructureReport:
    """Check conditions (i) and (ii) by exhaustive enumeration (v <= 16)."""
    if g.n > max_vertices:
        raise SizeGuardError(f"structure guard: {g.n} vertices > {max_vertices}")

    witness_edge = None
    for e in g.edges:
        ext = exterior_neighbourhood(g, e)
        if len(_induced_edges(g, ext)) == 1:
            witness_edge = e
            break

    # all 2^n subsets, filtered to those spanning exactly two edges
    two_ok = True
    counterexample = None
    for size in range(2, g.n + 1):
        for subset in combinations(range(g.n), size):
            if len(_induced_edges(g, subset)) != 2:
                continue
            ext = exterior_neighbourhood(g, subset)
            if not _induced_edges(g, ext):
                two_ok = False
                counterexample = frozenset(subset)
                break
        if not two_ok:
            break

    return BowtieStructureReport(witness_edge, two_ok, counterexample)


def load_graph_text(text: str) -> Graph:
    """Parse a graph from JSON or a plain "u v" edge list (n = max index + 1)."""
    text = text.strip()
    if not text:
        raise UsageError("empty graph input")
    if text.startswith("{"):
        try:
            return Graph.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad graph JSON: {exc}") from exc
    edges = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"bad edge line {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise UsageError(f"bad edge line {line!r}: {exc}") from exc
    if not edges:
        raise UsageError("edge list is empty")
    n = max(max(e) for e in edges) + 1
    return Graph.from_edges(n, edges)
