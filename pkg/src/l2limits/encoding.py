"""Canonical integer encoding of rooted complexes and the local metric.

Every finite subset of the nonnegative integers gets one position in a fixed
enumeration (:func:`subset_from_index`), so a complex on vertices 0..N-1 is a
0/1 sequence.  Codes are compared by the first differing position, where the
sequence holding a 1 there is the *smaller* one; the canonical code of a
rooted complex is the minimum over all labelings that put the root at 0.

Minimal labelings have two structural properties this module relies on:
the labels used form an initial interval 0..N-1, and label order refines
breadth-first distance from the root.  Both follow from minimality (moving
any simplex to a smaller position wins immediately), which is what lets the
search below restrict itself to layer-by-layer orderings.
"""

from __future__ import annotations

from fractions import Fraction

from .complexes import RootedComplex, SimplicialComplex
from .errors import ValidationError

_CODE_CACHE: dict = {}
_CODE_CACHE_LIMIT = 1 << 15
_TIE_CAP = 6
_AUTOMORPHISM_BUDGET = 200_000
_INF = float("inf")


def subset_from_index(n: int) -> frozenset:
    """The n-th finite subset of the nonnegative integers.

    Position n holds the set of 1-bit positions in the binary expansion of
    n + 1, e.g. 0 -> {0}, 1 -> {1}, 2 -> {0, 1}, 3 -> {2}, 7 -> {3}.  Every
    subset of {0..k} occurs among the first 2**(k+1) positions.
    """
    if n < 0:
        raise ValidationError("subset index must be nonnegative")
    bits = n + 1
    out = []
    pos = 0
    while bits:
        if bits & 1:
            out.append(pos)
        bits >>= 1
        pos += 1
    return frozenset(out)


def index_of_subset(subset) -> int:
    """Inverse of :func:`subset_from_index`."""
    members = set(subset)
    if not members:
        raise ValidationError("the empty set has no index")
    total = 0
    for v in members:
        if v < 0:
            raise ValidationError("subsets must contain nonnegative integers")
        total += 1 << v
    return total - 1


class CanonicalCode:
    """Sorted positions of the 1-bits of a canonical 0/1 sequence.

    Ordering follows the first-difference rule: at the first position where
    two sequences differ, the one holding a 1 is smaller.  On a shared
    prefix the longer code (more simplices) is therefore the smaller one.
    """

    __slots__ = ("indices", "_hash")

    def __init__(self, indices):
        self.indices = tuple(indices)
        self._hash = hash(self.indices)

    def __eq__(self, other):
        if not isinstance(other, CanonicalCode):
            return NotImplemented
        return self.indices == other.indices

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if not isinstance(other, CanonicalCode):
            return NotImplemented
        for a, b in zip(self.indices, other.indices):
            if a != b:
                return a < b
        return len(self.indices) > len(other.indices)

    def __le__(self, other):
        return self == other or self < other

    def decode(self) -> RootedComplex:
        """The labeled representative: vertices 0..N-1, rooted at 0."""
        simplices = [tuple(sorted(subset_from_index(i))) for i in self.indices]
        return RootedComplex(SimplicialComplex(simplices), 0)

    def __repr__(self):
        return f"CanonicalCode({list(self.indices)!r})"


# -- exact isomorphism search ----------------------------------------------
#
# Backtracking over vertex bijections, used three ways: as an independent
# oracle against code equality, to merge root orbits in uniform rootings,
# and to prune automorphic branches inside the canonical-code search.
# Vertices are handled as bit positions so the inner loop is integer work.


class _IsoContext:
    """Precomputed bitmask view of one complex, reusable across searches."""

    __slots__ = ("cx", "verts", "idx", "n", "nbr_positions", "nbr_mask",
                 "star_items", "star_masks", "simplex_masks", "profile",
                 "fvec")

    def __init__(self, cx: SimplicialComplex):
        self.cx = cx
        self.verts = sorted(v for v, in cx.faces(0))
        self.idx = {v: i for i, v in enumerate(self.verts)}
        self.n = len(self.verts)
        idx = self.idx
        self.nbr_positions = [
            tuple(idx[w] for w in cx.neighbors(v)) for v in self.verts
        ]
        self.nbr_mask = [
            sum(1 << j for j in positions) for positions in self.nbr_positions
        ]
        self.star_items = []
        self.star_masks = []
        for v in self.verts:
            items = []
            for s in cx.star(v):
                positions = tuple(idx[u] for u in s)
                items.append((sum(1 << j for j in positions), positions))
            self.star_items.append(tuple(items))
            self.star_masks.append(tuple(mask for mask, _ in items))
        self.simplex_masks = {
            sum(1 << idx[u] for u in s) for s in cx.simplices
        }
        dim = cx.dim
        self.profile = [
            tuple(cx.p_degree(v, p) for p in range(1, dim + 1))
            for v in self.verts
        ]
        self.fvec = cx.f_vector()

    def distances_from(self, root) -> list:
        dist = [-1] * self.n
        start = self.idx[root]
        dist[start] = 0
        frontier = [start]
        while frontier:
            nxt = []
            for i in frontier:
                d = dist[i] + 1
                for j in self.nbr_positions[i]:
                    if dist[j] < 0:
                        dist[j] = d
                        nxt.append(j)
            frontier = nxt
        return dist

    def bfs_order(self, root) -> list:
        start = self.idx[root]
        seen = [False] * self.n
        seen[start] = True
        order = [start]
        head = 0
        while head < len(order):
            i = order[head]
            head += 1
            for j in self.nbr_positions[i]:
                if not seen[j]:
                    seen[j] = True
                    order.append(j)
        return order


def _search(ctxa: _IsoContext, roota, ctxb: _IsoContext, rootb,
            seed=None, budget=None):
    """Find a root-preserving isomorphism as a vertex dict, or None.

    ``seed`` pins part of the map (used for automorphism extension).  With
    ``budget`` set, the search gives up after that many feasibility checks
    and returns None; callers treat that as "not proven isomorphic".
    """
    if ctxa.n != ctxb.n or ctxa.fvec != ctxb.fvec:
        return None
    n = ctxa.n
    dista = ctxa.distances_from(roota)
    distb = ctxb.distances_from(rootb)
    if sorted(dista) != sorted(distb):
        return None
    order = ctxa.bfs_order(roota)
    if len(order) < n:
        raise ValidationError("isomorphism search requires connected complexes")

    smap = {ctxa.idx[u]: ctxb.idx[v] for u, v in (seed or {}).items()}
    smap.setdefault(ctxa.idx[roota], ctxb.idx[rootb])

    mapping = [-1] * n
    used = 0
    assigned = 0
    cand_lists: list = [None] * n
    ptrs = [0] * n
    full = (1 << n) - 1
    checks = 0
    depth = 0

    while True:
        if depth == n:
            return {ctxa.verts[i]: ctxb.verts[mapping[i]] for i in range(n)}
        u = order[depth]
        if cand_lists[depth] is None:
            if u in smap:
                cands = [smap[u]]
            else:
                cm = full & ~used
                for w in ctxa.nbr_positions[u]:
                    if mapping[w] >= 0:
                        cm &= ctxb.nbr_mask[mapping[w]]
                cands = []
                while cm:
                    low = cm & -cm
                    cands.append(low.bit_length() - 1)
                    cm ^= low
            cand_lists[depth] = cands
            ptrs[depth] = 0

        advanced = False
        cands = cand_lists[depth]
        while ptrs[depth] < len(cands):
            v = cands[ptrs[depth]]
            ptrs[depth] += 1
            if used >> v & 1:
                continue
            if dista[u] != distb[v] or ctxa.profile[u] != ctxb.profile[v]:
                continue
            checks += 1
            if budget is not None and checks > budget:
                return None
            tenta = assigned | (1 << u)
            tentb = used | (1 << v)
            cnt_a = 0
            ok = True
            for mask, positions in ctxa.star_items[u]:
                if mask & ~tenta:
                    continue
                img = 0
                for w in positions:
                    img |= 1 << (v if w == u else mapping[w])
                if img not in ctxb.simplex_masks:
                    ok = False
                    break
                cnt_a += 1
            if ok:
                cnt_b = 0
                for maskb in ctxb.star_masks[v]:
                    if not maskb & ~tentb:
                        cnt_b += 1
                ok = cnt_a == cnt_b
            if ok:
                mapping[u] = v
                used = tentb
                assigned = tenta
                depth += 1
                advanced = True
                break
        if advanced:
            continue
        cand_lists[depth] = None
        depth -= 1
        if depth < 0:
            return None
        u = order[depth]
        v = mapping[u]
        mapping[u] = -1
        used &= ~(1 << v)
        assigned &= ~(1 << u)


def find_rooted_isomorphism(a: RootedComplex, b: RootedComplex):
    """Exhaustive root-preserving isomorphism search, independent of codes."""
    return _search(_IsoContext(a.complex), a.root, _IsoContext(b.complex), b.root)


# -- canonical code search ---------------------------------------------------


def _bfs_relabel_key(cx: SimplicialComplex, root):
    """Deterministic cache key: simplex set after breadth-first relabeling."""
    label = {root: 0}
    order = [root]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for w in cx.neighbors(u):
            if w not in label:
                label[w] = len(order)
                order.append(w)
    return frozenset(
        tuple(sorted(label[u] for u in s)) for s in cx.simplices
    )


def _block(star_v, v, lmap):
    """Sorted positions contributed by giving v the next label, relative to
    the block start: one entry per simplex whose other vertices are labeled."""
    ms = []
    for s in star_v:
        m = 0
        for u in s:
            if u == v:
                continue
            lu = lmap.get(u)
            if lu is None:
                m = None
                break
            m += 1 << lu
        if m is not None:
            ms.append(m)
    ms.sort()
    return ms


def _prune_automorphic(cx, root, partials, ctx_holder):
    """Drop tied branches that a proven automorphism maps onto the first."""
    if ctx_holder[0] is None:
        ctx_holder[0] = _IsoContext(cx)
    ctx = ctx_holder[0]
    base = partials[0][0]
    kept = [partials[0]]
    for cand in partials[1:]:
        seed = {base[i]: cand[0][i] for i in range(len(base))}
        auto = _search(ctx, root, ctx, root, seed=seed,
                       budget=_AUTOMORPHISM_BUDGET)
        if auto is None:
            kept.append(cand)
    return kept


def _canonical_order(cx: SimplicialComplex, root):
    dist = cx.distances(root)
    n = len(dist)
    if n == 1:
        return (root,)
    by_layer: dict[int, list] = {}
    for v, d in dist.items():
        by_layer.setdefault(d, []).append(v)
    layer_at = []
    for d in range(len(by_layer)):
        members = sorted(by_layer[d])
        layer_at.extend([members] * len(members))

    partials = [((root,), {root: 0})]
    ctx_holder = [None]
    for k in range(1, n):
        members = layer_at[k]
        # Cheapest discriminator first: the lowest labeled neighbor decides
        # the earliest non-constant bit of the block, so only candidates
        # achieving the global minimum can win.
        best_minlab = None
        shortlist = []
        for pi, (order, lmap) in enumerate(partials):
            for v in members:
                if v in lmap:
                    continue
                minlab = min(
                    lmap[u] for u in cx.neighbors(v) if u in lmap
                )
                if best_minlab is None or minlab < best_minlab:
                    best_minlab = minlab
                    shortlist = [(pi, v)]
                elif minlab == best_minlab:
                    shortlist.append((pi, v))
        best_key = None
        chosen = []
        for pi, v in shortlist:
            ms = _block(cx.star(v), v, partials[pi][1])
            key = tuple(ms) + (_INF,)
            if best_key is None or key < best_key:
                best_key = key
                chosen = [(pi, v)]
            elif key == best_key:
                chosen.append((pi, v))
        partials = [
            (partials[pi][0] + (v,), {**partials[pi][1], v: k})
            for pi, v in chosen
        ]
        if len(partials) > _TIE_CAP and k & (k - 1) == 0 and k >= 4:
            partials = _prune_automorphic(cx, root, partials, ctx_holder)
    return partials[0][0]


def canonical_code(rc: RootedComplex) -> CanonicalCode:
    """Minimal code of the rooted isomorphism class of ``rc``.

    Branch-and-bound over label orders compatible with breadth-first layers,
    carrying every tied branch; ties are thinned only when an explicit
    automorphism proves two branches equivalent.  Results are memoized on a
    breadth-first relabeling of the input, so repeated structure (lattice
    patches, balls of transitive complexes) is canonicalized once.
    """
    cx = rc.complex
    key = _bfs_relabel_key(cx, rc.root)
    cached = _CODE_CACHE.get(key)
    if cached is not None:
        return cached
    order = _canonical_order(cx, rc.root)
    label = {v: i for i, v in enumerate(order)}
    indices = sorted(
        sum(1 << label[u] for u in s) - 1 for s in cx.simplices
    )
    code = CanonicalCode(indices)
    if len(_CODE_CACHE) >= _CODE_CACHE_LIMIT:
        _CODE_CACHE.clear()
    _CODE_CACHE[key] = code
    return code


def rooted_isomorphic(a: RootedComplex, b: RootedComplex) -> bool:
    """Equality of rooted isomorphism classes, decided by canonical codes."""
    return canonical_code(a) == canonical_code(b)


def bs_distance(a: RootedComplex, b: RootedComplex) -> Fraction:
    """Local (ball-comparison) distance between rooted isomorphism classes.

    1 / 2**R with R the largest radius at which the closed balls are rooted
    isomorphic; 0 when the classes coincide.  Radius-0 balls always agree,
    so the value is at most 1.
    """
    limit = max(a.eccentricity(), b.eccentricity())
    for r in range(1, limit + 1):
        if canonical_code(a.ball(r)) != canonical_code(b.ball(r)):
            return Fraction(1, 2 ** (r - 1))
    # balls at the largest eccentricity are the full complexes
    return Fraction(0)
