"""Finite metric trees with exact rational edge lengths.

Covers isometry classification, cores and common fixed points, the
four-point condition, additive-metric reconstruction, minimal subtrees, and
translation lengths read off from orbit distances.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np


class TreeError(ValueError):
    pass


class NonAdditiveError(TreeError):
    def __init__(self, defect, witness):
        self.defect = defect
        self.witness = witness
        super().__init__(f"metric is not additive: defect {defect} at {witness}")


class NotRealizableError(TreeError):
    pass


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class MetricTree:
    """Connected acyclic graph with positive rational edge lengths."""

    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        self.adj: dict = {v: {} for v in self.vertices}
        if len(self.adj) != len(self.vertices):
            raise TreeError("duplicate vertex ids")
        for u, v, length in edges:
            length = _q(length)
            if length <= 0:
                raise TreeError(f"edge {u}-{v} has nonpositive length {length}")
            if u not in self.adj or v not in self.adj:
                raise TreeError(f"edge {u}-{v} uses an unknown vertex")
            if u == v or v in self.adj[u]:
                raise TreeError(f"loop or repeated edge {u}-{v}")
            self.adj[u][v] = length
            self.adj[v][u] = length
        if not self.vertices:
            raise TreeError("a tree needs at least one vertex")
        if sum(len(n) for n in self.adj.values()) // 2 != len(self.vertices) - 1:
            raise TreeError("graph is not a tree (edge count)")
        if len(self._bfs(self.vertices[0])[0]) != len(self.vertices):
            raise TreeError("graph is not connected")
        self._dist_cache: dict = {}

    @property
    def edges(self) -> list:
        out = []
        seen = set()
        for u in self.vertices:
            for v, length in self.adj[u].items():
                if (v, u) not in seen:
                    seen.add((u, v))
                    out.append((u, v, length))
        return out

    def degree(self, v) -> int:
        return len(self.adj[v])

    def edge_length(self, u, v) -> Fraction:
        return self.adj[u][v]

    def _bfs(self, src):
        dist = {src: Fraction(0)}
        parent = {src: None}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v, length in self.adj[u].items():
                if v not in dist:
                    dist[v] = dist[u] + length
                    parent[v] = u
                    queue.append(v)
        return dist, parent

    def distances_from(self, v) -> dict:
        cached = self._dist_cache.get(v)
        if cached is None:
            cached = self._dist_cache[v] = self._bfs(v)[0]
        return cached

    def vertex_distance(self, u, v) -> Fraction:
        return self.distances_from(u)[v]

    def path(self, u, v) -> list:
        _, parent = self._bfs(u)
        out = [v]
        while out[-1] != u:
            out.append(parent[out[-1]])
        return out[::-1]

    def point(self, u, v=None, offset=0) -> "TreePoint":
        """Canonical TreePoint at ``offset`` from u along edge u-v."""
        offset = _q(offset)
        if v is None or offset == 0:
            return TreePoint(u)
        length = self.adj[u][v]
        if not 0 <= offset <= length:
            raise TreeError(f"offset {offset} outside edge {u}-{v} of length {length}")
        if offset == length:
            return TreePoint(v)
        return TreePoint(u, v, offset)

    def to_edge_list(self) -> str:
        if len(self.vertices) == 1:
            return f"{self.vertices[0]}\n"
        return "".join(f"{u} {v} {length}\n" for u, v, length in self.edges)

    @classmethod
    def from_edge_list(cls, text: str) -> "MetricTree":
        vertices: list = []
        edges = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) == 1:
                names = parts
            elif len(parts) == 3:
                names = parts[:2]
                try:
                    edges.append((parts[0], parts[1], Fraction(parts[2])))
                except (ValueError, ZeroDivisionError):
                    raise TreeError(f"line {lineno}: bad length {parts[2]!r}") from None
            else:
                raise TreeError(f"line {lineno}: expected 'u v length'")
            for name in names:
                if name not in vertices:
                    vertices.append(name)
        return cls(vertices, edges)


@dataclass(frozen=True)
class TreePoint:
    """A vertex (v is None) or the point at ``offset`` from u on edge u-v."""

    u: object
    v: object = None
    offset: Fraction = Fraction(0)

    def is_vertex(self) -> bool:
        return self.v is None


def tree_distance(tree: MetricTree, p: TreePoint, q: TreePoint) -> Fraction:
    if p.is_vertex() and q.is_vertex():
        return tree.vertex_distance(p.u, q.u)
    if not p.is_vertex() and not q.is_vertex() and {p.u, p.v} == {q.u, q.v}:
        qo = q.offset if q.u == p.u else tree.edge_length(q.u, q.v) - q.offset
        return abs(p.offset - qo)

    def ends(x: TreePoint):
        if x.is_vertex():
            return [(x.u, Fraction(0))]
        length = tree.edge_length(x.u, x.v)
        return [(x.u, x.offset), (x.v, length - x.offset)]

    return min(a + tree.vertex_distance(e1, e2) + b for e1, a in ends(p) for e2, b in ends(q))


@dataclass(frozen=True)
class Subtree:
    """Vertex-spanned subtree; convexity is checked on construction."""

    tree: MetricTree
    vertices: frozenset

    def __post_init__(self):
        vs = frozenset(self.vertices)
        object.__setattr__(self, "vertices", vs)
        if not vs:
            raise TreeError("empty subtree")
        if not is_convex(self.tree, vs):
            raise TreeError("vertex set does not span a subtree")

    def contains(self, p: TreePoint) -> bool:
        if p.is_vertex():
            return p.u in self.vertices
        return p.u in self.vertices and p.v in self.vertices

    def distance_to(self, other: "Subtree") -> Fraction:
        return min(self.tree.vertex_distance(u, v) for u in self.vertices for v in other.vertices)


def is_convex(tree: MetricTree, vertices) -> bool:
    vs = set(vertices)
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in tree.adj[u]:
            if v in vs and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen == vs


def hull_vertices(tree: MetricTree, vertices) -> frozenset:
    """Vertex set of the smallest subtree containing ``vertices`` (leaf pruning)."""
    keep = set(vertices)
    if not keep:
        raise TreeError("hull of an empty set")
    alive = set(tree.vertices)
    deg = {v: tree.degree(v) for v in alive}
    leaves = deque(v for v in alive if deg[v] <= 1 and v not in keep)
    while leaves:
        v = leaves.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for u in tree.adj[v]:
            if u in alive:
                deg[u] -= 1
                if deg[u] <= 1 and u not in keep:
                    leaves.append(u)
    return frozenset(alive)


def induced_tree(tree: MetricTree, vertices) -> MetricTree:
    vs = [v for v in tree.vertices if v in set(vertices)]
    edges = [(u, v, w) for u, v, w in tree.edges if u in vertices and v in vertices]
    return MetricTree(vs, edges)


# --- isometries -------------------------------------------------------------

@dataclass(frozen=True)
class TreeIsometry:
    vertex_map: dict = field(hash=False)

    def __call__(self, v):
        return self.vertex_map[v]

    def validate(self, tree: MetricTree) -> None:
        m = self.vertex_map
        if set(m) != set(tree.vertices) or set(m.values()) != set(tree.vertices):
            raise TreeError("vertex map is not a bijection of the tree's vertices")
        for u, v, length in tree.edges:
            if m[v] not in tree.adj[m[u]] or tree.adj[m[u]][m[v]] != length:
                raise TreeError(f"edge {u}-{v} is not mapped to an edge of equal length")

    def compose(self, other: "TreeIsometry") -> "TreeIsometry":
        """self after other."""
        return TreeIsometry({v: self.vertex_map[other.vertex_map[v]] for v in other.vertex_map})


@dataclass
class IsometryReport:
    kind: str  # "elliptic" or "hyperbolic"
    t: Fraction
    core: Subtree
    tree: MetricTree  # the tree the core lives in (subdivided if an edge was inverted)
    isometry: TreeIsometry


def subdivide_edge(tree: MetricTree, u, v, midpoint_id=None):
    """Insert a vertex at the midpoint of u-v; returns (new tree, midpoint id)."""
    m = midpoint_id if midpoint_id is not None else ("mid", u, v)
    half = tree.edge_length(u, v) / 2
    edges = [e for e in tree.edges if {e[0], e[1]} != {u, v}]
    edges += [(u, m, half), (m, v, half)]
    return MetricTree(list(tree.vertices) + [m], edges), m


def barycentric_subdivision(tree: MetricTree):
    """Subdivide every edge at its midpoint; midpoint ids are ("mid", u, v)."""
    vertices = list(tree.vertices)
    edges = []
    for u, v, length in tree.edges:
        m = ("mid",) + tuple(sorted((u, v), key=repr))
        vertices.append(m)
        edges += [(u, m, length / 2), (m, v, length / 2)]
    return MetricTree(vertices, edges)


def lift_to_subdivision(iso: TreeIsometry, tree: MetricTree) -> TreeIsometry:
    m = dict(iso.vertex_map)
    for u, v, _ in tree.edges:
        src = ("mid",) + tuple(sorted((u, v), key=repr))
        dst = ("mid",) + tuple(sorted((iso(u), iso(v)), key=repr))
        m[src] = dst
    return TreeIsometry(m)


def classify_isometry(tree: MetricTree, iso: TreeIsometry) -> IsometryReport:
    """On a finite tree every isometry is elliptic: it fixes a vertex or inverts an edge.

    An inverted edge is subdivided so the fixed midpoint becomes a vertex.
    """
    iso.validate(tree)
    fixed = [v for v in tree.vertices if iso(v) == v]
    if fixed:
        return IsometryReport("elliptic", Fraction(0), Subtree(tree, frozenset(fixed)), tree, iso)
    for u, v, _ in tree.edges:
        if iso(u) == v and iso(v) == u:
            sub, m = subdivide_edge(tree, u, v)
            lifted = TreeIsometry({**iso.vertex_map, m: m})
            return IsometryReport("elliptic", Fraction(0), Subtree(sub, frozenset([m])), sub, lifted)
    raise TreeError("isometry fixes no vertex and inverts no edge; not an isometry of a finite tree")


@dataclass(frozen=True)
class OrbitClassification:
    kind: str
    t: Fraction
    distance_to_fixed: Fraction | None = None


def classify_from_orbit(d1, d2, tolerance=0) -> OrbitClassification:
    """Kind and translation length of g from d1 = d(x, gx) and d2 = d(x, g^2 x) in an R-tree."""
    d1, d2 = _q(d1), _q(d2)
    if d1 < 0 or d2 < 0 or d2 > 2 * d1 + tolerance:
        raise NotRealizableError(f"not realizable in a tree: d(x,gx)={d1}, d(x,g^2x)={d2}")
    if d2 > d1:
        return OrbitClassification("hyperbolic", d2 - d1)
    return OrbitClassification("elliptic", Fraction(0), d1 / 2)


def product_translation_length(t_a, t_b, core_dist) -> Fraction:
    """t(ab) = t(a) + t(b) + 2 d(core a, core b) for isometries with disjoint cores."""
    core_dist = _q(core_dist)
    if core_dist <= 0:
        raise TreeError("formula requires disjoint cores")
    return _q(t_a) + _q(t_b) + 2 * core_dist


def common_fixed_point(cores) -> TreePoint | None:
    """A point in every core, or None if two cores are disjoint (Helly property for trees)."""
    cores = list(cores)
    if not cores:
        raise TreeError("no cores given")
    tree = cores[0].tree
    if any(c.tree is not tree for c in cores):
        raise TreeError("cores must live in the same tree")
    for c1, c2 in combinations(cores, 2):
        if not c1.vertices & c2.vertices:
            return None
    common = frozenset.intersection(*(c.vertices for c in cores))
    for v in tree.vertices:
        if v in common:
            return TreePoint(v)
    return None


def minimal_subtree(tree: MetricTree, axes) -> MetricTree:
    """The subtree spanned by the union of the given subtrees."""
    axes = list(axes)
    if not axes:
        raise TreeError("empty axis list")
    union = frozenset().union(*(a.vertices for a in axes))
    return induced_tree(tree, hull_vertices(tree, union))


def half_integer_branch_check(tree: MetricTree, marked=()):
    """Are all distances among branch vertices (degree >= 3) and marked vertices in (1/2)Z?

    Returns (ok, witness) where the witness is the pair whose doubled distance is
    farthest from an integer, or None when ok.
    """
    branch = [v for v in tree.vertices if tree.degree(v) >= 3]
    extra = [v for v in marked if v not in set(branch)]
    worst = None
    worst_gap = Fraction(0)
    pairs = list(combinations(branch, 2)) + [(m, b) for m in extra for b in branch]
    for u, v in pairs:
        twice = 2 * tree.vertex_distance(u, v)
        gap = abs(twice - round(twice))
        if gap > worst_gap:
            worst, worst_gap = (u, v, tree.vertex_distance(u, v)), gap
    return worst is None, worst


def branch_distances_integral(tree: MetricTree, marked=()) -> bool:
    branch = [v for v in tree.vertices if tree.degree(v) >= 3]
    pts = branch + [v for v in marked if v not in set(branch)]
    return all(tree.vertex_distance(u, v).denominator == 1 for u, v in combinations(pts, 2))


# --- metrics on finite point sets -------------------------------------------

class LimitMetric:
    """Symmetric nonnegative rational distances on labelled points (often a word ball)."""

    def __init__(self, labels, dist, ball=None):
        self.labels = tuple(labels)
        n = len(self.labels)
        self.dist = tuple(tuple(_q(x) for x in row) for row in dist)
        if len(self.dist) != n or any(len(r) != n for r in self.dist):
            raise TreeError("distance matrix shape does not match labels")
        for i in range(n):
            if self.dist[i][i] != 0:
                raise TreeError(f"d({self.labels[i]},{self.labels[i]}) != 0")
            for j in range(i):
                if self.dist[i][j] != self.dist[j][i] or self.dist[i][j] < 0:
                    raise TreeError(f"asymmetric or negative distance at {i},{j}")
        self.ball = ball
        self._index = {lab: k for k, lab in enumerate(self.labels)}

    def __len__(self):
        return len(self.labels)

    def d(self, u, v) -> Fraction:
        return self.dist[self._index[u]][self._index[v]]

    def triangle_violation(self):
        n = len(self.labels)
        D = self.dist
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if D[i][k] > D[i][j] + D[j][k]:
                        return (self.labels[i], self.labels[j], self.labels[k])
        return None

    @classmethod
    def from_text(cls, text: str) -> "LimitMetric":
        """Lines 'u v d' (rationals as p/q); unspecified pairs are an error."""
        labels: list = []
        pairs = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise TreeError(f"line {lineno}: expected 'u v distance'")
            u, v, d = parts
            for lab in (u, v):
                if lab not in labels:
                    labels.append(lab)
            pairs[frozenset((u, v))] = Fraction(d)
        n = len(labels)
        dist = [[Fraction(0)] * n for _ in range(n)]
        for i, j in combinations(range(n), 2):
            key = frozenset((labels[i], labels[j]))
            if key not in pairs:
                raise TreeError(f"missing distance for {labels[i]} {labels[j]}")
            dist[i][j] = dist[j][i] = pairs[key]
        return cls(labels, dist)


def _integer_matrix(m: LimitMetric):
    den = 1
    for row in m.dist:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [[int(x * den) for x in row] for row in m.dist]
    biggest = max((abs(x) for row in ints for x in row), default=0)
    dtype = np.int64 if biggest < 2 ** 60 else object
    return np.array(ints, dtype=dtype).reshape(len(m), len(m)), den


def four_point_witness(m: LimitMetric):
    """(defect, witness 4-tuple) where defect = max d(w,x)+d(y,z) - max(d(w,y)+d(x,z), d(w,z)+d(x,y)).

    The scan is chunked over w; the max-reduction keeps the first maximizer.
    """
    n = len(m)
    if n == 0:
        return Fraction(0), None
    D, den = _integer_matrix(m)
    best = None
    best_at = None
    for i in range(n):
        row = D[i]
        s1 = row[:, None, None] + D[None, :, :]
        s2 = row[None, :, None] + D[:, None, :]
        s3 = row[None, None, :] + D[:, :, None]
        diff = s1 - np.maximum(s2, s3)
        k = int(np.argmax(diff))
        val = diff.flat[k]
        if best is None or val > best:
            x, y, z = np.unravel_index(k, diff.shape)
            best, best_at = val, (i, int(x), int(y), int(z))
    defect = Fraction(int(best), den)
    witness = tuple(m.labels[k] for k in best_at)
    return defect, witness


def four_point_defect(m: LimitMetric) -> Fraction:
    return four_point_witness(m)[0]


def reconstruct_tree(m: LimitMetric):
    """Realize an additive (pseudo)metric as a metric tree.

    Points are inserted in label order. Each new point z hangs off the path
    from the first point p0 toward the earlier point y maximizing the Gromov
    product (y.z)_p0, at that distance from p0; ties go to the earliest y.
    Returns (tree, placement) with placement: label -> TreePoint (a vertex).
    """
    defect, witness = four_point_witness(m)
    if defect > 0:
        raise NonAdditiveError(defect, witness)
    n = len(m)
    if n == 0:
        raise TreeError("empty metric")
    D = m.dist
    adj: dict = {0: {}}
    next_id = 1
    placed: list = [0]  # vertex id of each inserted point

    def path_to(target):
        parent = {0: None}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            if u == target:
                break
            for v in adj[u]:
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
        out = [target]
        while out[-1] != 0:
            out.append(parent[out[-1]])
        return out[::-1]

    for k in range(1, n):
        best_y, g = 0, Fraction(0)
        for y in range(1, k):
            gp = (D[0][y] + D[0][k] - D[y][k]) / 2
            if gp > g:
                best_y, g = y, gp
        pendant = D[0][k] - g
        # Walk from vertex 0 toward the placement of best_y for distance g.
        route = path_to(placed[best_y])
        walked = Fraction(0)
        anchor = None
        for a, b in zip(route, route[1:]):
            if walked == g:
                anchor = a
                break
            length = adj[a][b]
            if walked + length > g:
                mid = next_id
                next_id += 1
                off = g - walked
                del adj[a][b], adj[b][a]
                adj[mid] = {a: off, b: length - off}
                adj[a][mid] = off
                adj[b][mid] = length - off
                anchor = mid
                break
            walked += length
        else:
            if walked == g:
                anchor = route[-1]
        if anchor is None or pendant < 0:
            # Only possible when the triangle inequality fails.
            raise NonAdditiveError(Fraction(0), (m.labels[0], m.labels[best_y], m.labels[k]))
        if pendant > 0:
            leaf = next_id
            next_id += 1
            adj[leaf] = {anchor: pendant}
            adj[anchor][leaf] = pendant
            placed.append(leaf)
        else:
            placed.append(anchor)

    edges = []
    for u in sorted(adj):
        for v, length in adj[u].items():
            if u < v:
                edges.append((u, v, length))
    tree = MetricTree(sorted(adj), edges)
    placement = {m.labels[k]: TreePoint(placed[k]) for k in range(n)}
    for i, j in combinations(range(n), 2):
        if tree.vertex_distance(placed[i], placed[j]) != D[i][j]:
            raise NonAdditiveError(Fraction(0), (m.labels[i], m.labels[j]))
    return tree, placement
