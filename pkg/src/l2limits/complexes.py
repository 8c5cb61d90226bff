"""Finite abstract simplicial complexes and rooted variants.

A complex is stored as the full downward-closed set of simplices; a simplex
is a sorted tuple of distinct integer vertices.  Instances are immutable and
hashable, so they are safe to share across threads and to use as cache keys.
"""

from __future__ import annotations

import operator

from collections import deque
from itertools import chain, combinations

from .errors import MalformedInputError, ValidationError


def _as_simplex(vertices) -> tuple:
    try:
        simplex = tuple(sorted(operator.index(v) for v in vertices))
    except TypeError:
        raise MalformedInputError(f"vertex ids must be integers: {vertices!r}")
    if len(simplex) == 0:
        raise MalformedInputError("empty simplex")
    if len(set(simplex)) != len(simplex):
        raise MalformedInputError(f"duplicate vertices inside one simplex: {vertices!r}")
    # ids become bit positions in the subset encoding, so they must be >= 0
    if simplex[0] < 0:
        raise MalformedInputError(f"vertex ids must be nonnegative: {vertices!r}")
    return simplex


class SimplicialComplex:
    """Immutable finite abstract simplicial complex on integer vertices."""

    __slots__ = ("_simplices", "_by_dim", "_star", "_neighbors", "_hash")

    def __init__(self, simplices, _validated: bool = False):
        """Build from an iterable of simplices that is already downward closed.

        Use :meth:`closure` to build from maximal simplices.  Raises
        ``ValidationError`` if some face of a listed simplex is missing.
        """
        normalized = frozenset(s if _validated else _as_simplex(s) for s in simplices)
        if not _validated:
            for s in normalized:
                if len(s) > 1:
                    for face in combinations(s, len(s) - 1):
                        if face not in normalized:
                            raise ValidationError(f"missing face {face} of simplex {s}")
        self._simplices = normalized
        by_dim: list[list[tuple]] = []
        for s in normalized:
            p = len(s) - 1
            while len(by_dim) <= p:
                by_dim.append([])
            by_dim[p].append(s)
        self._by_dim = tuple(tuple(sorted(group)) for group in by_dim)
        star: dict[int, list[tuple]] = {}
        for s in normalized:
            for v in s:
                star.setdefault(v, []).append(s)
        self._star = {v: tuple(group) for v, group in star.items()}
        neighbors: dict[int, set[int]] = {v: set() for v in self._star}
        for edge in self.faces(1):
            neighbors[edge[0]].add(edge[1])
            neighbors[edge[1]].add(edge[0])
        self._neighbors = {v: tuple(sorted(ns)) for v, ns in neighbors.items()}
        self._hash = hash(self._simplices)

    @classmethod
    def closure(cls, maximal) -> "SimplicialComplex":
        """The smallest simplicial complex containing every listed simplex."""
        closed: set[tuple] = set()
        for raw in maximal:
            simplex = _as_simplex(raw)
            if simplex in closed:
                continue
            for size in range(1, len(simplex) + 1):
                closed.update(combinations(simplex, size))
        return cls(closed, _validated=True)

    # -- basic queries ------------------------------------------------------

    @property
    def simplices(self) -> frozenset:
        return self._simplices

    @property
    def vertices(self) -> tuple:
        return tuple(s[0] for s in self.faces(0))

    @property
    def dim(self) -> int:
        """Dimension; -1 for the empty complex."""
        return len(self._by_dim) - 1

    def faces(self, p: int) -> tuple:
        """All p-simplices, as a sorted tuple."""
        if 0 <= p < len(self._by_dim):
            return self._by_dim[p]
        return ()

    def f_vector(self) -> tuple:
        return tuple(len(group) for group in self._by_dim)

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * count for p, count in enumerate(self.f_vector()))

    def maximal_simplices(self) -> tuple:
        """Simplices that are not a face of any larger simplex, sorted."""
        maximal = []
        for s in self._simplices:
            cofaces = self._star[s[0]]
            if not any(len(t) > len(s) and set(s) <= set(t) for t in cofaces):
                maximal.append(s)
        return tuple(sorted(maximal))

    def star(self, v: int) -> tuple:
        """All simplices containing the vertex v."""
        return self._star.get(v, ())

    def neighbors(self, v: int) -> tuple:
        return self._neighbors.get(v, ())

    def degree(self, v: int) -> int:
        """Number of edges containing v."""
        return len(self._neighbors.get(v, ()))

    def p_degree(self, v: int, p: int) -> int:
        """Number of p-simplices containing v."""
        return sum(1 for s in self._star.get(v, ()) if len(s) == p + 1)

    def max_degree(self) -> int:
        if not self._neighbors:
            return 0
        return max(len(ns) for ns in self._neighbors.values())

    def has_vertex(self, v: int) -> bool:
        return v in self._star

    # -- metric structure ---------------------------------------------------

    def distances(self, root: int) -> dict:
        """Graph distances from root along the 1-skeleton (BFS)."""
        dist = {root: 0}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = dist[u]
            for w in self._neighbors.get(u, ()):
                if w not in dist:
                    dist[w] = du + 1
                    queue.append(w)
        return dist

    def is_connected(self) -> bool:
        verts = self._star
        if not verts:
            return True
        first = next(iter(verts))
        return len(self.distances(first)) == len(verts)

    def components(self) -> tuple:
        """Vertex sets of the connected components, sorted by smallest vertex."""
        seen: set[int] = set()
        comps = []
        for v in sorted(self._star):
            if v in seen:
                continue
            comp = frozenset(self.distances(v))
            seen.update(comp)
            comps.append(comp)
        return tuple(comps)

    def induced(self, vertex_subset) -> "SimplicialComplex":
        """Full subcomplex on the given vertices."""
        keep = frozenset(vertex_subset)
        picked: set[tuple] = set()
        for v in keep:
            for s in self._star.get(v, ()):
                if s not in picked and all(u in keep for u in s):
                    picked.add(s)
        return SimplicialComplex(picked, _validated=True)

    # -- dunder surface -----------------------------------------------------

    def __contains__(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self._simplices

    def __len__(self) -> int:
        return len(self._simplices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._simplices == other._simplices

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"SimplicialComplex(f_vector={self.f_vector()})"


class RootedComplex:
    """A connected simplicial complex with a distinguished root vertex."""

    __slots__ = ("complex", "root", "_hash")

    def __init__(self, complex: SimplicialComplex, root: int):
        if not complex.has_vertex(root):
            raise ValidationError(f"root {root} is not a vertex")
        if not complex.is_connected():
            raise ValidationError("rooted complex must be connected")
        self.complex = complex
        self.root = root
        self._hash = hash((complex, root))

    @classmethod
    def _make(cls, complex: SimplicialComplex, root: int) -> "RootedComplex":
        # Trusted fast path: caller guarantees root membership and connectivity.
        rc = object.__new__(cls)
        rc.complex = complex
        rc.root = root
        rc._hash = hash((complex, root))
        return rc

    def ball(self, r: int) -> "RootedComplex":
        """Closed ball: the subcomplex induced by vertices at distance <= r."""
        if r < 0:
            raise ValidationError("ball radius must be nonnegative")
        cx = self.complex
        inside = {self.root}
        frontier = [self.root]
        for _ in range(r):
            nxt = []
            for u in frontier:
                for w in cx.neighbors(u):
                    if w not in inside:
                        inside.add(w)
                        nxt.append(w)
            if not nxt:
                break
            frontier = nxt
        return RootedComplex._make(cx.induced(inside), self.root)

    def p_degree(self, p: int) -> int:
        return self.complex.p_degree(self.root, p)

    def eccentricity(self) -> int:
        return max(self.complex.distances(self.root).values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootedComplex):
            return NotImplemented
        return self.root == other.root and self.complex == other.complex

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"RootedComplex(root={self.root}, f_vector={self.complex.f_vector()})"


def closure(maximal) -> SimplicialComplex:
    """Module-level alias for :meth:`SimplicialComplex.closure`."""
    return SimplicialComplex.closure(maximal)


def rooted_at(cx: SimplicialComplex, root: int) -> RootedComplex:
    """Root ``cx`` at a vertex, restricting to that vertex's component."""
    if not cx.has_vertex(root):
        raise ValidationError(f"root {root} is not a vertex")
    if cx.is_connected():
        return RootedComplex._make(cx, root)
    return RootedComplex._make(cx.induced(cx.distances(root)), root)


def ball(rc: RootedComplex, r: int) -> RootedComplex:
    return rc.ball(r)


def p_degree(rc: RootedComplex, p: int) -> int:
    return rc.p_degree(p)
