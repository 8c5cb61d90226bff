"""Random rooted complexes: finite-support laws on rooted isomorphism classes.

A law is stored as a list of support points, each a rooted complex with a
positive rational weight; weights sum to one.  Support points are pairwise
non-isomorphic as rooted complexes, so every isomorphism class appears at
most once and expectations are plain weighted sums.
"""
from __future__ import annotations

from fractions import Fraction

from .complexes import RootedComplex, SimplicialComplex
from .encoding import CanonicalCode, _IsoContext, _search, canonical_code
from .errors import ValidationError

__all__ = [
    "SupportPoint",
    "RandomRootedComplex",
    "uniform_rooting",
    "BallDistribution",
    "ball_distribution",
    "total_variation",
    "measure_distance",
    "MassTransportResult",
    "mass_transport_check",
    "standard_battery",
    "non_unimodular_example",
    "degree_truncate",
    "expected_p_degree",
]

_ZERO = Fraction(0)


class SupportPoint:
    """One isomorphism class in a law: a rooted complex plus its weight."""

    __slots__ = ("rooted", "weight", "_code")

    def __init__(self, rooted: RootedComplex, weight):
        weight = Fraction(weight)
        if weight <= 0:
            raise ValidationError("support weights must be positive")
        self.rooted = rooted
        self.weight = weight
        self._code = None

    @property
    def code(self) -> CanonicalCode:
        # computed on demand: whole-complex canonicalization can be costly
        if self._code is None:
            self._code = canonical_code(self.rooted)
        return self._code

    def __repr__(self) -> str:
        return f"SupportPoint(root={self.rooted.root}, weight={self.weight})"


class RandomRootedComplex:
    """Finitely supported probability law on rooted isomorphism classes."""

    __slots__ = ("points",)

    def __init__(self, points):
        points = tuple(points)
        if not points:
            raise ValidationError("a law needs at least one support point")
        total = sum((pt.weight for pt in points), _ZERO)
        if total != 1:
            raise ValidationError(f"support weights sum to {total}, not 1")
        self.points = points

    @classmethod
    def point_mass(cls, rooted: RootedComplex) -> "RandomRootedComplex":
        return cls((SupportPoint(rooted, Fraction(1)),))

    def validate(self) -> None:
        """Full check: weights already verified, here codes must be distinct."""
        codes = [pt.code for pt in self.points]
        if len(set(codes)) != len(codes):
            raise ValidationError("two support points share an isomorphism class")

    def expect(self, fn):
        """Weighted sum of ``fn(point)`` over the support."""
        return sum(pt.weight * fn(pt) for pt in self.points)

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"RandomRootedComplex({len(self.points)} support points)"


def uniform_rooting(cx: SimplicialComplex) -> RandomRootedComplex:
    """Root ``cx`` at a uniform vertex and group roots by isomorphism class.

    Rooting lands in the root's connected component.  Classes are found by
    explicit isomorphism search rather than by canonicalizing every rooted
    copy: each successful search yields a whole vertex bijection, and
    merging ``z ~ map(z)`` for every ``z`` collapses entire automorphism
    orbits at once.  On vertex-transitive inputs a handful of searches
    classify all roots.
    """
    verts = sorted(cx.vertices)
    if not verts:
        raise ValidationError("cannot root an empty complex")
    comp_of = {}
    for comp_verts in cx.components():
        comp = cx.induced(comp_verts)
        for v in comp_verts:
            comp_of[v] = comp

    fingerprint = {}
    for v in verts:
        comp = comp_of[v]
        fingerprint[v] = (
            len(comp.vertices),
            comp.f_vector(),
            tuple(comp.p_degree(v, p) for p in range(1, comp.dim + 1)),
            tuple(sorted(comp.degree(u) for u in comp.neighbors(v))),
        )

    parent = {v: v for v in verts}

    def find(v):
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    contexts = {}

    def context(comp):
        key = id(comp)
        if key not in contexts:
            contexts[key] = _IsoContext(comp)
        return contexts[key]

    reps = []
    for v in verts:
        if any(find(v) == find(r) for r in reps):
            continue
        for r in reps:
            if fingerprint[r] != fingerprint[v]:
                continue
            vmap = _search(context(comp_of[r]), r, context(comp_of[v]), v)
            if vmap is not None:
                # vmap is a bijection comp_of[r] -> comp_of[v] sending r to v;
                # it identifies the class of every vertex it touches
                for z, w in vmap.items():
                    pa, pb = find(z), find(w)
                    if pa != pb:
                        parent[pb] = pa
                break
        else:
            reps.append(v)

    counts = {}
    for v in verts:
        root = find(v)
        counts[root] = counts.get(root, 0) + 1
    n = len(verts)
    points = [
        SupportPoint(RootedComplex._make(comp_of[r], r), Fraction(counts[find(r)], n))
        for r in reps
    ]
    return RandomRootedComplex(points)


class BallDistribution(dict):
    """Probability map from canonical radius-``r`` ball codes to weights."""

    __slots__ = ("radius",)

    def __init__(self, radius: int, probs):
        super().__init__(probs)
        self.radius = radius

    def validate(self) -> None:
        if sum(self.values(), _ZERO) != 1:
            raise ValidationError("ball distribution weights must sum to 1")
        for code in self:
            rc = code.decode()
            if canonical_code(rc.ball(self.radius)) != code:
                raise ValidationError(
                    f"key is not a radius-{self.radius} ball: {code}")


def ball_distribution(mu: RandomRootedComplex, r: int) -> BallDistribution:
    """Law of the radius-``r`` ball at the root, keyed by canonical code."""
    if r < 0:
        raise ValidationError("ball radius must be nonnegative")
    out = {}
    for pt in mu.points:
        code = canonical_code(pt.rooted.ball(r))
        out[code] = out.get(code, _ZERO) + pt.weight
    return BallDistribution(r, out)


def total_variation(p, q) -> Fraction:
    keys = set(p) | set(q)
    return sum((abs(p.get(k, _ZERO) - q.get(k, _ZERO)) for k in keys), _ZERO) / 2


def measure_distance(mu: RandomRootedComplex, nu: RandomRootedComplex,
                     rmax: int) -> Fraction:
    """Sum over r <= rmax of 2^-r times the TV gap between ball laws."""
    if rmax < 0:
        raise ValidationError("rmax must be nonnegative")
    total = _ZERO
    for r in range(rmax + 1):
        gap = total_variation(ball_distribution(mu, r), ball_distribution(nu, r))
        total += Fraction(1, 2 ** r) * gap
    return total


class MassTransportResult:
    """Sent/received expectations plus the verdict; unpacks as a triple."""

    __slots__ = ("lhs", "rhs", "passed")

    def __init__(self, lhs, rhs, tolerance: float):
        self.lhs = lhs
        self.rhs = rhs
        self.passed = abs(lhs - rhs) <= tolerance

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.passed))

    def __repr__(self) -> str:
        return (f"MassTransportResult(lhs={self.lhs}, "
                f"rhs={self.rhs}, passed={self.passed})")


def mass_transport_check(mu: RandomRootedComplex, fn,
                         tolerance: float = 1e-9) -> MassTransportResult:
    """Compare expected mass sent from the root against mass received by it.

    ``fn(cx, x, y)`` must depend only on the isomorphism class of
    ``(cx, x, y)``.  For laws given by uniform rooting the two sides agree
    exactly; a skewed root distribution can break the identity.
    """
    lhs = _ZERO
    rhs = _ZERO
    for pt in mu.points:
        cx = pt.rooted.complex
        root = pt.rooted.root
        lhs += pt.weight * sum(fn(cx, root, y) for y in cx.vertices)
        rhs += pt.weight * sum(fn(cx, x, root) for x in cx.vertices)
    return MassTransportResult(lhs, rhs, tolerance)


def _adjacent(cx: SimplicialComplex, x: int, y: int) -> bool:
    return x != y and tuple(sorted((x, y))) in cx


def standard_battery():
    """Named isomorphism-invariant transport functions for identity checks."""

    def same_vertex(cx, x, y):
        return 1 if x == y else 0

    def degree_at_self(cx, x, y):
        return cx.degree(x) if x == y else 0

    def adjacency(cx, x, y):
        return 1 if _adjacent(cx, x, y) else 0

    def adjacency_times_far_degree(cx, x, y):
        return cx.degree(y) if _adjacent(cx, x, y) else 0

    def adjacency_uphill(cx, x, y):
        return 1 if _adjacent(cx, x, y) and cx.degree(x) > cx.degree(y) else 0

    def adjacency_min_degree(cx, x, y):
        return min(cx.degree(x), cx.degree(y)) if _adjacent(cx, x, y) else 0

    def adjacency_to_degree_two(cx, x, y):
        return 1 if _adjacent(cx, x, y) and cx.degree(y) == 2 else 0

    def common_neighbors(cx, x, y):
        if not _adjacent(cx, x, y):
            return 0
        return len(set(cx.neighbors(x)) & set(cx.neighbors(y)))

    def shared_triangles(cx, x, y):
        if not _adjacent(cx, x, y):
            return 0
        return sum(1 for s in cx.star(x) if len(s) == 3 and y in s)

    def at_distance_two(cx, x, y):
        return 1 if cx.distances(x).get(y) == 2 else 0

    def inverse_distance(cx, x, y):
        d = cx.distances(x).get(y)
        return _ZERO if d is None else Fraction(1, 1 + d)

    def nearby_triangle_degree(cx, x, y):
        d = cx.distances(x).get(y)
        return cx.p_degree(y, 2) if d is not None and d <= 2 else 0

    return (
        ("same_vertex", same_vertex),
        ("degree_at_self", degree_at_self),
        ("adjacency", adjacency),
        ("adjacency_times_far_degree", adjacency_times_far_degree),
        ("adjacency_uphill", adjacency_uphill),
        ("adjacency_min_degree", adjacency_min_degree),
        ("adjacency_to_degree_two", adjacency_to_degree_two),
        ("common_neighbors", common_neighbors),
        ("shared_triangles", shared_triangles),
        ("at_distance_two", at_distance_two),
        ("inverse_distance", inverse_distance),
        ("nearby_triangle_degree", nearby_triangle_degree),
    )


def non_unimodular_example():
    """A law and a transport function for which the identity fails.

    A three-vertex path rooted always at an end sends mass 1 to its
    degree-two center but, having degree one itself, receives none.
    """
    path = SimplicialComplex.closure([(0, 1), (1, 2)])
    mu = RandomRootedComplex.point_mass(RootedComplex(path, 0))

    def to_degree_two(cx, x, y):
        return 1 if _adjacent(cx, x, y) and cx.degree(y) == 2 else 0

    return mu, to_degree_two


def degree_truncate(cx: SimplicialComplex, max_deg: int) -> SimplicialComplex:
    """Delete edges until every vertex degree is at most ``max_deg``.

    Deterministic greedy rule, re-evaluated after every deletion: pick the
    lowest-numbered vertex of maximum degree, detach it from its
    lowest-numbered neighbor of maximum degree, and drop every simplex
    containing that edge.  Vertices are never removed, so truncation can
    leave isolated vertices behind.
    """
    if max_deg < 0:
        raise ValidationError("degree bound must be nonnegative")
    while cx.max_degree() > max_deg:
        top = cx.max_degree()
        v = min(u for u in cx.vertices if cx.degree(u) == top)
        nbrs = cx.neighbors(v)
        nbr_top = max(cx.degree(u) for u in nbrs)
        u = min(w for w in nbrs if cx.degree(w) == nbr_top)
        a, b = (v, u) if v < u else (u, v)
        kept = [s for s in cx.simplices if not (a in s and b in s)]
        cx = SimplicialComplex(kept, _validated=True)
    return cx


def expected_p_degree(mu: RandomRootedComplex, p: int) -> Fraction:
    """Mean number of p-simplices containing the root."""
    return sum(
        (pt.weight * pt.rooted.p_degree(p) for pt in mu.points), _ZERO
    )
