"""Complex families used throughout: tori, random models, and small fixtures.

All randomness flows through numpy's seedable PCG64 generator
(``np.random.default_rng(seed)``); generation is a pure function of its
parameters and seed.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .complexes import SimplicialComplex
from .errors import ValidationError

__all__ = [
    "torus_tower",
    "linial_meshulam",
    "random_flag",
    "fixtures",
]


def torus_tower(d: int, n: int) -> SimplicialComplex:
    """Level-n quotient of the standard Z^d lattice triangulation.

    d=1 gives the n-cycle.  d=2 gives the diagonal triangulation of the
    n x n torus: vertex (i,j) is numbered i*n+j, each unit square is split
    along its (+1,+1) diagonal, so there are n^2 vertices, 3n^2 edges and
    2n^2 triangles and every vertex has degree 6.
    """
    if n < 3:
        raise ValidationError("side length below 3 does not quotient simplicially")
    if d == 1:
        return SimplicialComplex.closure(
            [(i, (i + 1) % n) for i in range(n)])
    if d == 2:
        def vid(i: int, j: int) -> int:
            return (i % n) * n + (j % n)

        triangles = []
        for i in range(n):
            for j in range(n):
                triangles.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
                triangles.append((vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)))
        return SimplicialComplex.closure(triangles)
    raise ValidationError("only dimensions 1 and 2 are generated")


def linial_meshulam(d: int, n: int, prob: float, seed: int) -> SimplicialComplex:
    """Full (d-1)-skeleton on n vertices plus independent random d-faces."""
    if d < 1:
        raise ValidationError("face dimension must be at least 1")
    if n < d + 1:
        raise ValidationError(f"need at least {d + 1} vertices")
    if not 0 <= prob <= 1:
        raise ValidationError("probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    maximal = list(combinations(range(n), d))
    for face in combinations(range(n), d + 1):
        if rng.random() < prob:
            maximal.append(face)
    return SimplicialComplex.closure(maximal)


def random_flag(n: int, prob: float, max_dim: int, seed: int) -> SimplicialComplex:
    """Clique complex of a G(n, prob) graph, truncated at max_dim."""
    if n < 1:
        raise ValidationError("need at least one vertex")
    if not 0 <= prob <= 1:
        raise ValidationError("probability must lie in [0, 1]")
    if max_dim < 1:
        raise ValidationError("flag completion starts at dimension 1")
    rng = np.random.default_rng(seed)
    adj = {v: set() for v in range(n)}
    simplices = [(v,) for v in range(n)]
    for u, v in combinations(range(n), 2):
        if rng.random() < prob:
            adj[u].add(v)
            adj[v].add(u)
            simplices.append((u, v))
    # grow cliques one vertex at a time, always extending past the maximum
    layer = [s for s in simplices if len(s) == 2]
    dim = 1
    while layer and dim < max_dim:
        nxt = []
        for s in layer:
            common = set.intersection(*(adj[v] for v in s))
            for w in sorted(common):
                if w > s[-1]:
                    nxt.append(s + (w,))
        simplices.extend(nxt)
        layer = nxt
        dim += 1
    return SimplicialComplex(simplices, _validated=True)


def fixtures() -> dict:
    """The small named complexes used as the exact-value corpus."""
    octa_triangles = [(a, b, c) for a in (0, 3) for b in (1, 4) for c in (2, 5)]
    book_triangles = [(0, 1, 2), (0, 1, 3)]
    return {
        "single_vertex": SimplicialComplex.closure([(0,)]),
        "edge": SimplicialComplex.closure([(0, 1)]),
        "path3": SimplicialComplex.closure([(0, 1), (1, 2)]),
        "path4": SimplicialComplex.closure([(0, 1), (1, 2), (2, 3)]),
        "star5": SimplicialComplex.closure([(0, i) for i in range(1, 6)]),
        "cycle5": torus_tower(1, 5),
        "cycle6": torus_tower(1, 6),
        "hollow_triangle": SimplicialComplex.closure([(0, 1), (1, 2), (0, 2)]),
        "filled_triangle": SimplicialComplex.closure([(0, 1, 2)]),
        "two_triangles": SimplicialComplex.closure(
            [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]),
        "book": SimplicialComplex.closure(book_triangles),
        "tetrahedron_boundary": SimplicialComplex.closure(
            list(combinations(range(4), 3))),
        "solid_tetrahedron": SimplicialComplex.closure([(0, 1, 2, 3)]),
        "octahedron": SimplicialComplex.closure(octa_triangles),
        "torus4": torus_tower(2, 4),
    }
