"""Hypergraphs over partition blocks, alpha-acyclicity and join trees.

Vertices are block ids (1-based ints). Edges are sorted tuples of block ids
with at least two members. Everything here is immutable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidJoinTree, NotAlphaAcyclic, ValidationError


def _edge(e) -> tuple:
    return tuple(sorted(set(e)))


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple
    edges: tuple = ()

    def __post_init__(self):
        vertices = tuple(sorted(set(self.vertices)))
        edges = tuple(sorted({_edge(e) for e in self.edges}))
        vset = set(vertices)
        for e in edges:
            if len(e) < 2:
                raise ValidationError(f"hyperedge {list(e)} has fewer than two vertices")
            if not set(e) <= vset:
                raise ValidationError(f"hyperedge {list(e)} uses unknown vertices")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def has_edge(self, e) -> bool:
        return _edge(e) in self.edge_set

    def groups(self) -> tuple:
        """Singletons of V followed by E: the index set L(V) u E."""
        return tuple((v,) for v in self.vertices) + self.edges

    @property
    def rank(self) -> int:
        """Largest edge size (1 when there are no edges but some vertex)."""
        if self.edges:
            return max(len(e) for e in self.edges)
        return 1 if self.vertices else 0

    def __or__(self, other: Hypergraph) -> Hypergraph:
        return Hypergraph(self.vertices + other.vertices, self.edges + other.edges)

    def is_subhypergraph_of(self, other: Hypergraph) -> bool:
        return set(self.vertices) <= set(other.vertices) and self.edge_set <= other.edge_set

    def restrict(self, vertices) -> Hypergraph:
        """Edges of H fully inside ``vertices``."""
        vs = set(vertices)
        return Hypergraph(tuple(vs), tuple(e for e in self.edges if set(e) <= vs))

    def to_dict(self) -> dict:
        return {"V": list(self.vertices), "E": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class JoinTree:
    """A tree whose nodes are hyperedges, with the running intersection property."""

    nodes: tuple
    tree_edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(_edge(e) for e in self.nodes))
        pairs = []
        for a, b in self.tree_edges:
            a, b = _edge(a), _edge(b)
            pairs.append((a, b) if a <= b else (b, a))
        object.__setattr__(self, "tree_edges", tuple(sorted(set(pairs))))

    @cached_property
    def adjacency(self) -> dict:
        adj = {e: [] for e in self.nodes}
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def path(self, a, b) -> list:
        """Nodes on the unique tree path from ``a`` to ``b`` (inclusive)."""
        a, b = _edge(a), _edge(b)
        parent = {a: None}
        stack = [a]
        while stack:
            u = stack.pop()
            for v in self.adjacency[u]:
                if v not in parent:
                    parent[v] = u
                    stack.append(v)
        if b not in parent:
            raise InvalidJoinTree(f"nodes {a} and {b} are not connected")
        out = [b]
        while out[-1] != a:
            out.append(parent[out[-1]])
        return out[::-1]

    def problems(self) -> list[str]:
        nodes = set(self.nodes)
        if len(nodes) != len(self.nodes):
            return ["duplicate nodes"]
        out = []
        for a, b in self.tree_edges:
            if a not in nodes or b not in nodes or a == b:
                out.append(f"tree edge {a}-{b} is not between distinct nodes")
        if out:
            return out
        if self.nodes and len(self.tree_edges) != len(self.nodes) - 1:
            return [f"{len(self.tree_edges)} tree edges for {len(self.nodes)} nodes"]
        if not self.nodes and self.tree_edges:
            return ["tree edges without nodes"]
        if self.nodes:
            seen = {self.nodes[0]}
            stack = [self.nodes[0]]
            while stack:
                for v in self.adjacency[stack.pop()]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            if seen != nodes:
                return ["tree is not connected"]
        for a, b in itertools.combinations(self.nodes, 2):
            common = set(a) & set(b)
            for mid in self.path(a, b):
                if not common <= set(mid):
                    out.append(f"{mid} on the path {a}..{b} misses {sorted(common)}")
                    break
        return out

    def verify(self, H: Hypergraph | None = None) -> bool:
        if H is not None and set(self.nodes) != H.edge_set:
            return False
        return not self.problems()

    def check(self, H: Hypergraph) -> JoinTree:
        if set(self.nodes) != H.edge_set:
            raise InvalidJoinTree("join tree nodes differ from the hyperedges")
        bad = self.problems()
        if bad:
            raise InvalidJoinTree("; ".join(bad))
        return self

    def to_dict(self) -> dict:
        return {
            "nodes": [list(e) for e in self.nodes],
            "tree_edges": [[list(a), list(b)] for a, b in self.tree_edges],
        }


def gyo_residual(H: Hypergraph) -> Hypergraph:
    """Run the GYO reduction and return what is left.

    Repeatedly drop vertices lying in a single edge and edges contained in
    another edge. The hypergraph is alpha-acyclic iff nothing is left.
    """
    edges = [set(e) for e in H.edges]
    changed = True
    while changed:
        changed = False
        count: dict = {}
        for e in edges:
            for v in e:
                count[v] = count.get(v, 0) + 1
        for e in edges:
            lonely = {v for v in e if count[v] == 1}
            if lonely:
                e -= lonely
                changed = True
        kept = []
        for k, e in enumerate(edges):
            if not e:
                changed = True
                continue
            covered = any(
                e <= f and (e != f or j < k) for j, f in enumerate(edges) if j != k and f
            )
            if covered:
                changed = True
            else:
                kept.append(e)
        edges = kept
    rest = [tuple(sorted(e)) for e in edges if len(e) > 1]
    verts = sorted({v for e in rest for v in e})
    return Hypergraph(tuple(verts), tuple(rest))


def _max_spanning_tree(nodes: tuple) -> JoinTree:
    weighted = [
        (-len(set(a) & set(b)), i, j)
        for (i, a), (j, b) in itertools.combinations(enumerate(nodes), 2)
    ]
    weighted.sort()
    parent = list(range(len(nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for _, i, j in weighted:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            chosen.append((nodes[i], nodes[j]))
    return JoinTree(nodes, tuple(chosen))


def is_alpha_acyclic(H: Hypergraph) -> tuple[bool, JoinTree | Hypergraph]:
    """Return ``(True, join tree)`` or ``(False, GYO residual)``."""
    residual = gyo_residual(H)
    if residual.edges:
        return False, residual
    tree = _max_spanning_tree(H.edges)
    if tree.problems():
        raise AssertionError("GYO succeeded but the spanning tree is not a join tree")
    return True, tree


def build_join_tree(H: Hypergraph) -> JoinTree:
    """Deterministic join tree: maximum-weight spanning tree on |e & e'|, ties lexicographic."""
    ok, witness = is_alpha_acyclic(H)
    if not ok:
        raise NotAlphaAcyclic(
            f"hypergraph has no join tree; GYO residual edges {[list(e) for e in witness.edges]}"
        )
    return witness.check(H)


def _spanning_trees(n: int):
    """All labelled trees on range(n), via Pruefer sequences."""
    if n == 1:
        yield ()
        return
    if n == 2:
        yield ((0, 1),)
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for v in seq:
            degree[v] += 1
        edges = []
        for v in seq:
            leaf = min(u for u in range(n) if degree[u] == 1)
            edges.append((leaf, v))
            degree[leaf] -= 1
            degree[v] -= 1
        u, w = [u for u in range(n) if degree[u] == 1]
        edges.append((u, w))
        yield tuple(edges)


def all_join_trees(H: Hypergraph, max_edges: int = 6) -> list[JoinTree]:
    """Every join tree of H by exhaustive search over labelled trees."""
    n = len(H.edges)
    if n > max_edges:
        raise ValidationError(f"exhaustive join tree search limited to {max_edges} edges")
    if n == 0:
        return [JoinTree((), ())]
    out = []
    for pairs in _spanning_trees(n):
        t = JoinTree(H.edges, tuple((H.edges[i], H.edges[j]) for i, j in pairs))
        if not t.problems():
            out.append(t)
    return out


def is_downward_closed(H: Hypergraph) -> bool:
    edges = H.edge_set
    for e in H.edges:
        for k in range(2, len(e)):
            for sub in itertools.combinations(e, k):
                if sub not in edges:
                    return False
    return True


def downward_closure(H: Hypergraph) -> Hypergraph:
    """Smallest downward-closed hypergraph on the same vertices containing H."""
    edges = set()
    for e in H.edges:
        for k in range(2, len(e) + 1):
            edges.update(itertools.combinations(e, k))
    return Hypergraph(H.vertices, tuple(edges))
