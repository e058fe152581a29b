"""Explicit trees and tree actions used for randomized checks.

* random and symmetric finite metric trees, and random automorphisms of them;
* ``DihedralPiece``: a finite piece of the tree on which two involutions with
  disjoint fixed points generate an infinite dihedral group;
* ``LoopGraph``: a graph whose universal cover carries two hyperbolic
  isometries with disjoint axes at a prescribed distance. Distances in the
  cover are lengths of reduced edge paths, so no cover is ever built.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .trees import MetricTree, Subtree, TreeIsometry, barycentric_subdivision, hull_vertices


def random_length(rng: random.Random, max_num: int = 6, max_den: int = 2) -> Fraction:
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def random_metric_tree(rng: random.Random, n: int, lengths=None) -> MetricTree:
    """Random recursive tree on vertices 0..n-1 with random rational lengths."""
    lengths = lengths or (lambda: random_length(rng))
    edges = [(rng.randrange(k), k, lengths()) for k in range(1, n)]
    return MetricTree(range(n), edges)


def symmetric_tree(rng: random.Random, branch_size: int = 4, copies: int = 3) -> tuple[MetricTree, int]:
    """A root with several identical random branches hanging off it, so Aut is large.

    Returns (tree, root). Branches may themselves get symmetric sub-branches.
    """
    branch = random_metric_tree(rng, branch_size)
    # Double a random sub-branch inside the template for extra symmetry.
    leaf_lengths = [random_length(rng) for _ in range(rng.randint(0, 2))]
    attach = rng.randrange(branch_size)
    stem = random_length(rng)
    vertices = [0]
    edges = []
    next_id = 1
    for _ in range(copies):
        ids = {v: next_id + v for v in branch.vertices}
        next_id += branch_size
        vertices += list(ids.values())
        edges += [(ids[u], ids[v], w) for u, v, w in branch.edges]
        edges.append((0, ids[0], stem))
        for _ in range(2 if leaf_lengths else 0):
            for w in leaf_lengths:
                vertices.append(next_id)
                edges.append((ids[attach], next_id, w))
                next_id += 1
    return MetricTree(vertices, edges), 0


def tree_center(tree: MetricTree):
    """(u, v): the center vertex as (u, None), or the central edge as (u, v)."""
    src = tree.vertices[0]
    far = max(tree.distances_from(src).items(), key=lambda kv: kv[1])[0]
    dist = tree.distances_from(far)
    other = max(dist.items(), key=lambda kv: kv[1])[0]
    path = tree.path(far, other)
    half = dist[other] / 2
    for u, v in zip(path, path[1:]):
        du, dv = dist[u], dist[v]
        if du == half:
            return u, None
        if du < half < dv:
            return u, v
    return path[-1], None


def _canonical_forms(tree: MetricTree, root):
    """Rooted-tree canonical form of every vertex's subtree (edge lengths included)."""
    order, parent = [], {root: None}
    stack = [root]
    while stack:
        u = stack.pop()
        order.append(u)
        for v in tree.adj[u]:
            if v not in parent:
                parent[v] = u
                stack.append(v)
    form = {}
    children = {u: [v for v in tree.adj[u] if parent.get(v) == u] for u in order}
    for u in reversed(order):
        form[u] = tuple(sorted((tree.edge_length(u, c), form[c]) for c in children[u]))
    return form, children


def random_automorphism(rng: random.Random, tree: MetricTree, root) -> TreeIsometry:
    """Uniform-ish random automorphism fixing ``root``: shuffle isomorphic children recursively."""
    form, children = _canonical_forms(tree, root)
    mapping = {root: root}
    stack = [(root, root)]
    while stack:
        u, image = stack.pop()
        classes: dict = {}
        for c in children[u]:
            classes.setdefault((tree.edge_length(u, c), form[c]), []).append(c)
        targets: dict = {}
        for c in children[image]:
            targets.setdefault((tree.edge_length(image, c), form[c]), []).append(c)
        for key, group in classes.items():
            imgs = list(targets[key])
            rng.shuffle(imgs)
            for c, d in zip(group, imgs):
                mapping[c] = d
                stack.append((c, d))
    return TreeIsometry(mapping)


def random_elliptic_family(rng: random.Random, k: int = 3):
    """(subdivided tree, automorphisms) for a random symmetric tree; no edge is inverted."""
    tree, _ = symmetric_tree(rng, rng.randint(2, 5), rng.randint(2, 4))
    sub = barycentric_subdivision(tree)
    u, v = tree_center(sub)
    root = u if v is None else None
    if root is None:  # cannot happen after subdivision, kept as a guard
        raise AssertionError("subdivided tree has a central edge")
    return sub, [random_automorphism(rng, sub, root) for _ in range(k)]


def random_subtree(rng: random.Random, tree: MetricTree, size: int = 2) -> Subtree:
    picks = rng.sample(list(tree.vertices), min(size, len(tree.vertices)))
    return Subtree(tree, hull_vertices(tree, picks))


# --- infinite dihedral action on a finite piece -------------------------------------

@dataclass
class DihedralPiece:
    """Copies S_k (|k| <= radius) of a template S; S_{2j-1}, S_{2j} share p and
    S_{2j}, S_{2j+1} share q. alpha: k -> -1-k fixes p_0, beta: k -> 1-k fixes q_0."""

    template: MetricTree
    p: object
    q: object
    radius: int
    tree: MetricTree = None

    def __post_init__(self):
        if self.p == self.q:
            raise ValueError("p and q must differ")
        ks = range(-self.radius, self.radius + 1)
        vertices = []
        seen = set()
        for k in ks:
            for v in self.template.vertices:
                x = self.vid(k, v)
                if x not in seen:
                    seen.add(x)
                    vertices.append(x)
        edges = [(self.vid(k, u), self.vid(k, v), w) for k in ks for u, v, w in self.template.edges]
        self.tree = MetricTree(vertices, edges)

    def vid(self, k: int, v):
        if v == self.p:
            return ("p", k if k % 2 else k - 1)
        if v == self.q:
            return ("q", k - 1 if k % 2 else k)
        return (k, v)

    def alpha(self, k: int, v):
        return -1 - k, v

    def beta(self, k: int, v):
        return 1 - k, v

    @property
    def gap(self) -> Fraction:
        return self.template.vertex_distance(self.p, self.q)

    def core_alpha(self) -> Subtree:
        return Subtree(self.tree, frozenset([self.vid(0, self.p)]))

    def core_beta(self) -> Subtree:
        return Subtree(self.tree, frozenset([self.vid(0, self.q)]))

    def orbit_distances(self, word: str, v):
        """d(x, gx), d(x, g^2 x) for x = copy 0 of template vertex v and g a word in 'ab'."""
        def act(k, u, w):
            for ch in reversed(w):
                k, u = (self.alpha if ch == "a" else self.beta)(k, u)
            return k, u

        k1, u1 = act(0, v, word)
        k2, u2 = act(k1, u1, word)
        if max(abs(k1), abs(k2)) > self.radius:
            raise ValueError("orbit leaves the finite piece; increase radius")
        x = self.vid(0, v)
        return (self.tree.vertex_distance(x, self.vid(k1, u1)),
                self.tree.vertex_distance(x, self.vid(k2, u2)))


# --- two hyperbolic isometries with disjoint axes -------------------------------------

@dataclass(frozen=True)
class LoopGraph:
    """Loops of lengths t_a at P and t_b at Q joined by a bridge P - M - Q of
    lengths d1, d2; the basepoint X hangs off M by an edge of length h >= 0.

    alpha = h e1 la e1^-1 h^-1 and beta = h e2 lb e2^-1 h^-1 as closed paths at X;
    their axes in the universal cover are d1 + d2 apart.
    """

    t_a: Fraction
    t_b: Fraction
    d1: Fraction
    d2: Fraction
    h: Fraction = Fraction(0)

    def _length(self, edge: str) -> Fraction:
        return {"h": self.h, "e1": self.d1, "e2": self.d2, "la": self.t_a, "lb": self.t_b}[edge]

    def _generator_path(self, ch: str) -> list:
        mid = ("e1", "la") if ch in "aA" else ("e2", "lb")
        path = [("h", 1), (mid[0], 1), (mid[1], 1), (mid[0], -1), ("h", -1)]
        if ch.isupper():
            path = [(e, -s) for e, s in reversed(path)]
        return path

    def word_path(self, word: str) -> list:
        out: list = []
        for ch in word:
            for e, s in self._generator_path(ch):
                if e == "h" and self.h == 0 or self._length(e) == 0:
                    continue
                if out and out[-1] == (e, -s):
                    out.pop()
                else:
                    out.append((e, s))
        return out

    def displacement(self, word: str) -> Fraction:
        """d(x~, g x~) in the universal cover: length of the reduced closed path."""
        return sum((self._length(e) for e, _ in self.word_path(word)), Fraction(0))

    @property
    def axis_distance(self) -> Fraction:
        return self.d1 + self.d2
