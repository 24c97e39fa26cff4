"""Feynman diagrams as undirected multigraphs with external legs.

A diagram is given by an ordered list of internal edges (pairs of 1-based
vertex ids, parallel edges and self-loops allowed) and an ordered list of
``nodes``: the vertices carrying the external legs, one entry per leg.
Edge labels 1..E are implied by list order and fix the Schwinger-variable
order used by every downstream module.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction


class DiagramError(ValueError):
    """Raised for malformed diagram input (disconnected, empty, bad JSON)."""


@dataclass(frozen=True)
class Diagram:
    """Connected multigraph with external legs attached to ``nodes``."""

    edges: tuple[tuple[int, int], ...]
    nodes: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        if not self.edges:
            raise DiagramError("diagram needs at least one internal edge")
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        object.__setattr__(self, "nodes", tuple(int(v) for v in self.nodes))
        verts = self.vertices
        for v in self.nodes:
            if v not in verts:
                raise DiagramError(f"leg vertex {v} does not occur in any edge")
        if not _connected(verts, self.edges):
            raise DiagramError("diagram is not connected")

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for e in self.edges for v in e}))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_legs(self) -> int:
        return len(self.nodes)

    @property
    def num_loops(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def __str__(self):
        tag = self.name or "diagram"
        return (f"{tag}(E={self.num_edges}, legs={self.num_legs}, "
                f"loops={self.num_loops})")


@dataclass(frozen=True)
class SpanningForest:
    """Kept-edge set of a spanning k-tree (k=1 tree, k=2 two-tree).

    For two-trees, ``leg_partition`` holds the frozenset of leg labels on the
    side containing the lowest-labelled leg.
    """

    kept: frozenset[int]
    components: int
    leg_partition: frozenset[int] | None = field(default=None)

    @property
    def removed_count_hint(self):
        return None  # removal set depends on the ambient diagram


def load_diagram(source: str, name: str = "") -> Diagram:
    """Parse a diagram from JSON text with ``edges`` and ``nodes`` arrays."""
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"invalid diagram JSON: {exc}") from exc
    if not isinstance(data, dict) or "edges" not in data or "nodes" not in data:
        raise DiagramError("diagram JSON must be an object with 'edges' and 'nodes'")
    edges = data["edges"]
    nodes = data["nodes"]
    if not all(isinstance(e, list) and len(e) == 2 for e in edges):
        raise DiagramError("'edges' must be an array of [v, w] pairs")
    return Diagram(tuple((e[0], e[1]) for e in edges), tuple(nodes),
                   name=name or data.get("name", ""))


def _connected(verts, edges) -> bool:
    if not verts:
        return False
    adj = {v: set() for v in verts}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def _is_spanning_tree(d: Diagram, kept) -> bool:
    uf = _UnionFind(d.vertices)
    for i in kept:
        a, b = d.edges[i - 1]
        if a == b or not uf.union(a, b):
            return False
    return True


def spanning_trees(d: Diagram) -> list[SpanningForest]:
    """All spanning trees, as kept-edge sets of size E - L."""
    nkeep = len(d.vertices) - 1
    out = []
    for kept in itertools.combinations(range(1, d.num_edges + 1), nkeep):
        if _is_spanning_tree(d, kept):
            out.append(SpanningForest(frozenset(kept), 1))
    return out


def _components_of(d: Diagram, kept):
    uf = _UnionFind(d.vertices)
    for i in kept:
        a, b = d.edges[i - 1]
        if a == b or not uf.union(a, b):
            return None  # cycle
    comps = {}
    for v in d.vertices:
        comps.setdefault(uf.find(v), set()).add(v)
    return list(comps.values())


def spanning_2trees(d: Diagram, legs: set[int]) -> list[SpanningForest]:
    """Spanning 2-trees separating leg set ``legs`` from its complement.

    Each result keeps E - L - 1 edges forming two disjoint trees that cover
    all vertices, with the legs in ``legs`` on one tree and the rest on the
    other.  The list may be empty.
    """
    legs = set(legs)
    all_legs = set(range(1, d.num_legs + 1))
    if not legs or legs == all_legs:
        raise DiagramError("leg subset must be nonempty and proper")
    comp_legs = all_legs - legs
    seen = set()
    out = []
    for tree in spanning_trees(d):
        for drop in tree.kept:
            kept = tree.kept - {drop}
            if kept in seen:
                continue
            seen.add(kept)
            comps = _components_of(d, kept)
            if comps is None or len(comps) != 2:
                continue
            side = {v: i for i, c in enumerate(comps) for v in c}
            leg_sides = [{side[d.nodes[l - 1]] for l in ls} for ls in (legs, comp_legs)]
            if any(len(s) != 1 for s in leg_sides):
                continue
            if leg_sides[0] == leg_sides[1]:
                continue
            lowest = min(all_legs)
            part = frozenset(legs if lowest in legs else comp_legs)
            out.append(SpanningForest(kept, 2, part))
    return out


def contract(d: Diagram, edge_ids: set[int]) -> Diagram:
    """Contract the given edges; self-loops created on the way are kept."""
    edge_ids = set(edge_ids)
    if edge_ids >= set(range(1, d.num_edges + 1)):
        raise DiagramError("cannot contract every edge")
    uf = _UnionFind(d.vertices)
    for i in sorted(edge_ids):
        a, b = d.edges[i - 1]
        if a != b:
            uf.union(a, b)
    new_edges = tuple((uf.find(a), uf.find(b))
                      for i, (a, b) in enumerate(d.edges, start=1)
                      if i not in edge_ids)
    new_nodes = tuple(uf.find(v) for v in d.nodes)
    return Diagram(new_edges, new_nodes, name=d.name and f"{d.name}/{sorted(edge_ids)}")


def delete(d: Diagram, edge_id: int) -> Diagram:
    """Remove one edge; raises if that disconnects the diagram."""
    if not 1 <= edge_id <= d.num_edges:
        raise DiagramError(f"no edge {edge_id}")
    new_edges = tuple(e for i, e in enumerate(d.edges, start=1) if i != edge_id)
    if not new_edges:
        raise DiagramError("deletion leaves no edges")
    verts = tuple(sorted({v for e in new_edges for v in e}))
    if set(verts) != set(d.vertices) or not _connected(verts, new_edges):
        raise DiagramError(f"deleting edge {edge_id} disconnects the diagram")
    return Diagram(new_edges, d.nodes, name=d.name and f"{d.name}-e{edge_id}")


def is_1vi(d: Diagram) -> bool:
    """True iff no single vertex separates the edges into two parts.

    A loopless diagram passes only when it is a single edge.
    """
    if d.num_loops == 0:
        return d.num_edges == 1
    return not _has_edge_cut_vertex(d)


def _has_edge_cut_vertex(d: Diagram) -> bool:
    for v in d.vertices:
        groups = _edge_components_without(d, v)
        if len(groups) > 1:
            return True
    return False


def _edge_components_without(d: Diagram, v):
    """Partition edge ids by connectivity when vertex v is split apart."""
    uf = _UnionFind(range(1, d.num_edges + 1))
    by_vertex = {}
    for i, (a, b) in enumerate(d.edges, start=1):
        for w in {a, b}:
            if w != v:
                by_vertex.setdefault(w, []).append(i)
    for ids in by_vertex.values():
        for j in ids[1:]:
            uf.union(ids[0], j)
    groups = {}
    for i in range(1, d.num_edges + 1):
        groups.setdefault(uf.find(i), []).append(i)
    return list(groups.values())


def subdiagram(d: Diagram, edge_ids) -> Diagram:
    """Subgraph on the given edges with their incident vertices and no legs."""
    edge_ids = sorted(set(edge_ids))
    if not edge_ids:
        raise DiagramError("empty subdiagram")
    sub_edges = tuple(d.edges[i - 1] for i in edge_ids)
    verts = tuple(sorted({v for e in sub_edges for v in e}))
    if not _connected(verts, sub_edges):
        raise DiagramError("subdiagram is not connected")
    return Diagram(sub_edges, (), name="")


def enumerate_1vi_subdiagrams(d: Diagram) -> list[frozenset[int]]:
    """Nonempty proper connected edge subsets that are 1VI as subgraphs."""
    out = []
    all_ids = range(1, d.num_edges + 1)
    for r in range(1, d.num_edges):
        for combo in itertools.combinations(all_ids, r):
            try:
                sub = subdiagram(d, combo)
            except DiagramError:
                continue
            if is_1vi(sub):
                out.append(frozenset(combo))
    return out


def kirchhoff_tree_count(d: Diagram) -> int:
    """Spanning-tree count via the matrix-tree determinant (exact)."""
    verts = d.vertices
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    lap = [[Fraction(0)] * n for _ in range(n)]
    for a, b in d.edges:
        if a == b:
            continue
        i, j = idx[a], idx[b]
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    # determinant of the (n-1)x(n-1) minor, exact Gaussian elimination
    m = [row[:-1] for row in lap[:-1]]
    det = Fraction(1)
    for col in range(n - 1):
        piv = next((r for r in range(col, n - 1) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n - 1):
            f = m[r][col] * inv
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    assert det.denominator == 1
    return int(abs(det))
