"""Boundary operators, Hodge Laplacians, Betti numbers, spectral measures.

Two independent computation routes are kept deliberately separate: Betti
numbers come from exact rational ranks of the boundary operators, while
spectra come from a dense symmetric eigensolver.  ``spectral_measure``
cross-checks the eigensolver's kernel count against the exact rank route
and refuses to return on disagreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .complexes import SimplicialComplex
from .errors import CrossCheckError, ValidationError
from .exact import rational_rank

DENSE_EIGENSOLVE_CAP = 4096
ZERO_TOL = 1e-7


@dataclass(frozen=True)
class BoundaryMatrix:
    """Signed incidence of p-simplices (columns) against their faces (rows).

    The face omitting the i-th vertex of an ascending-ordered simplex
    carries sign (-1)**i.
    """

    rows: tuple
    cols: tuple
    by_col: tuple  # per column: ((row_index, sign), ...)

    def row_dicts(self):
        """Rows as {column: sign} dicts, for the exact rank route."""
        rows = [dict() for _ in self.rows]
        for j, entries in enumerate(self.by_col):
            for i, sign in entries:
                rows[i][j] = sign
        return rows

    def dense(self) -> np.ndarray:
        out = np.zeros((len(self.rows), len(self.cols)), dtype=np.int64)
        for j, entries in enumerate(self.by_col):
            for i, sign in entries:
                out[i, j] = sign
        return out


def boundary_matrix(cx: SimplicialComplex, p: int) -> BoundaryMatrix:
    """The boundary operator from p-chains to (p-1)-chains; d_0 is zero."""
    if p < 0:
        return BoundaryMatrix((), (), ())
    if p == 0:
        cols = cx.faces(0)
        return BoundaryMatrix((), cols, tuple(() for _ in cols))
    rows = cx.faces(p - 1)
    cols = cx.faces(p)
    row_index = {s: i for i, s in enumerate(rows)}
    by_col = []
    for s in cols:
        entries = []
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            entries.append((row_index[face], -1 if i % 2 else 1))
        by_col.append(tuple(entries))
    return BoundaryMatrix(rows=rows, cols=cols, by_col=tuple(by_col))


def boundary_rank(cx: SimplicialComplex, p: int) -> int:
    """Exact rational rank of the p-th boundary operator."""
    if p < 1 or p > cx.dim:
        return 0
    return rational_rank(boundary_matrix(cx, p).row_dicts())


def betti(cx: SimplicialComplex, p: int) -> int:
    """dim ker Delta_p = |K(p)| - rank d_p - rank d_{p+1}, computed exactly."""
    if p < 0:
        raise ValidationError("betti degree must be nonnegative")
    count = len(cx.faces(p))
    if count == 0:
        return 0
    return count - boundary_rank(cx, p) - boundary_rank(cx, p + 1)


def betti_normalized(cx: SimplicialComplex, p: int) -> Fraction:
    """b_p / |V|, the finite-complex normalized Betti number."""
    n = len(cx.faces(0))
    if n == 0:
        raise ValidationError("normalized Betti number needs a nonempty complex")
    return Fraction(betti(cx, p), n)


def laplacian_matrix(cx: SimplicialComplex, p: int) -> np.ndarray:
    """Dense integer Hodge Laplacian on p-simplices."""
    count = len(cx.faces(p))
    lap = np.zeros((count, count), dtype=np.int64)
    if count == 0:
        return lap
    if p >= 1:
        down = boundary_matrix(cx, p).dense()
        lap += down.T @ down
    up = boundary_matrix(cx, p + 1)
    if up.cols:
        mat = up.dense()
        lap += mat @ mat.T
    return lap


class SpectralMeasure:
    """Spectral measure of Delta_p under uniform rooting of one complex.

    Atom at each eigenvalue with weight 1/|V|; kernel mass is pinned to the
    exact Betti number, so ``mass_at_zero`` is exact even though nonzero
    eigenvalues are floating point.
    """

    __slots__ = ("p", "n_vertices", "eigenvalues", "kernel_dim")

    def __init__(self, p, n_vertices, eigenvalues, kernel_dim):
        self.p = p
        self.n_vertices = n_vertices
        self.eigenvalues = tuple(eigenvalues)
        self.kernel_dim = kernel_dim

    @property
    def weight_unit(self) -> Fraction:
        return Fraction(1, self.n_vertices)

    def total_mass(self) -> Fraction:
        return Fraction(len(self.eigenvalues), self.n_vertices)

    def mass_at_zero(self) -> Fraction:
        return Fraction(self.kernel_dim, self.n_vertices)

    def spectral_radius(self) -> float:
        return max(self.eigenvalues, default=0.0)

    def count_in(self, lo: float, hi: float) -> int:
        """Number of eigenvalues in the open interval (lo, hi)."""
        return sum(1 for ev in self.eigenvalues if lo < ev < hi)

    def near_zero_mass(self, eps: float) -> Fraction:
        """Mass of (-eps, eps) minus the exact atom at zero."""
        count = sum(1 for ev in self.eigenvalues if ev != 0.0 and abs(ev) < eps)
        return Fraction(count, self.n_vertices)

    def moment(self, r: int) -> float:
        return sum(ev ** r for ev in self.eigenvalues) / self.n_vertices

    def atoms(self, tol: float = ZERO_TOL):
        """Eigenvalues merged within ``tol``: list of (value, weight) pairs."""
        out = []
        for ev in self.eigenvalues:
            if out and abs(ev - out[-1][0]) <= tol:
                value, count = out[-1]
                out[-1] = (value, count + 1)
            else:
                out.append((ev, 1))
        unit = self.weight_unit
        return [(value, unit * count) for value, count in out]


def spectral_measure(cx: SimplicialComplex, p: int,
                     zero_tol: float = ZERO_TOL,
                     cap: int = DENSE_EIGENSOLVE_CAP) -> SpectralMeasure:
    """Spectral measure of Delta_p with uniform weight 1/|V| per eigenvalue.

    The eigensolver's zero cluster must match the exact kernel dimension
    from the rational rank route; any disagreement raises CrossCheckError.
    """
    n = len(cx.faces(0))
    if n == 0:
        raise ValidationError("spectral measure needs a nonempty complex")
    count = len(cx.faces(p))
    if count > cap:
        raise ValidationError(
            f"{count} p-simplices exceeds the dense eigensolver cap ({cap}); "
            "use moment estimators at this scale")
    if count == 0:
        return SpectralMeasure(p, n, (), 0)
    lap = laplacian_matrix(cx, p)
    eigenvalues = np.linalg.eigvalsh(lap.astype(np.float64))
    kernel_exact = betti(cx, p)
    kernel_float = int(np.sum(np.abs(eigenvalues) < zero_tol))
    if kernel_float != kernel_exact:
        raise CrossCheckError(
            f"eigensolver kernel count {kernel_float} != exact nullity "
            f"{kernel_exact} for p={p} (tol {zero_tol})")
    fixed = [0.0] * kernel_exact + [float(ev) for ev in eigenvalues[kernel_exact:]]
    return SpectralMeasure(p, n, fixed, kernel_exact)


@dataclass(frozen=True)
class NormBounds:
    boundary_norm_bound: float    # sqrt(p+1), per-column mass of d_p
    coboundary_norm_bound: float  # sqrt(D-p+1), per-row mass of d_p
    laplacian_bound: float        # 2*sqrt((p+2)*D)
    spectral_radius: float


def operator_norm_bounds(cx: SimplicialComplex, p: int, degree_bound: int,
                         assert_radius: bool = True) -> NormBounds:
    """Degree-based a priori norm bounds for d_p and Delta_p.

    Checks exactly that every column of d_p has p+1 entries and every row at
    most degree_bound-p+1, then compares the computed spectral radius of
    Delta_p against 2*sqrt((p+2)*degree_bound).  The radius assertion is a
    genuine restriction: dense enough complexes exceed the bound, and in
    that case CrossCheckError is raised rather than returning quietly.
    """
    if p < 1:
        raise ValidationError("norm bounds are stated for p >= 1")
    if cx.max_degree() > degree_bound:
        raise ValidationError(
            f"max degree {cx.max_degree()} exceeds declared bound {degree_bound}")
    bm = boundary_matrix(cx, p)
    for entries in bm.by_col:
        if len(entries) != p + 1:
            raise CrossCheckError("boundary column with wrong face count")
    row_counts = [0] * len(bm.rows)
    for entries in bm.by_col:
        for i, _ in entries:
            row_counts[i] += 1
    if row_counts and max(row_counts) > degree_bound - p + 1:
        raise CrossCheckError(
            f"a (p-1)-simplex has {max(row_counts)} cofaces, above D-p+1")
    radius = _spectral_radius(cx, p)
    lap_bound = 2.0 * math.sqrt((p + 2) * degree_bound)
    if assert_radius and radius > lap_bound + 1e-9:
        raise CrossCheckError(
            f"spectral radius {radius:.6f} exceeds 2*sqrt((p+2)*D) = {lap_bound:.6f}")
    return NormBounds(
        boundary_norm_bound=math.sqrt(p + 1),
        coboundary_norm_bound=math.sqrt(degree_bound - p + 1),
        laplacian_bound=lap_bound,
        spectral_radius=radius,
    )


def _spectral_radius(cx: SimplicialComplex, p: int) -> float:
    count = len(cx.faces(p))
    if count == 0:
        return 0.0
    if count <= DENSE_EIGENSOLVE_CAP:
        lap = laplacian_matrix(cx, p).astype(np.float64)
        return float(np.linalg.eigvalsh(lap)[-1])
    # Beyond the dense cap: power iteration on the sparse operator gives a
    # lower estimate of the radius that converges to it.
    down = _coo(boundary_matrix(cx, p))
    up = _coo(boundary_matrix(cx, p + 1))
    rng = np.random.default_rng(0)
    vec = rng.standard_normal(count)
    vec /= np.linalg.norm(vec)
    value = 0.0
    for _ in range(400):
        out = np.zeros(count)
        if down is not None:
            ri, ci, sv, n_rows, _ = down
            mid = np.bincount(ri, weights=sv * vec[ci], minlength=n_rows)
            out += np.bincount(ci, weights=sv * mid[ri], minlength=count)
        if up is not None:
            ri, ci, sv, _, n_cols = up
            mid = np.bincount(ci, weights=sv * vec[ri], minlength=n_cols)
            out += np.bincount(ri, weights=sv * mid[ci], minlength=count)
        norm = np.linalg.norm(out)
        if norm == 0.0:
            return 0.0
        value = norm
        vec = out / norm
    return float(value)


def _coo(bm: BoundaryMatrix):
    """Row/column/sign arrays of a boundary matrix, or None when empty."""
    if not bm.cols or not bm.rows:
        return None
    ri, ci, sv = [], [], []
    for j, entries in enumerate(bm.by_col):
        for i, sign in entries:
            ri.append(i)
            ci.append(j)
            sv.append(float(sign))
    return (np.array(ri), np.array(ci), np.array(sv),
            len(bm.rows), len(bm.cols))


def euler_poincare(cx: SimplicialComplex):
    """Both sides of the normalized Euler-Poincare identity, exactly.

    Returns (sum (-1)^p b_p / |V|, sum (-1)^p |K(p)| / |V|); the two are
    equal for every finite complex by rank-nullity telescoping.
    """
    n = len(cx.faces(0))
    if n == 0:
        raise ValidationError("Euler-Poincare needs a nonempty complex")
    lhs = Fraction(0)
    rhs = Fraction(0)
    for p in range(cx.dim + 1):
        lhs += Fraction((-1) ** p * betti(cx, p), n)
        rhs += Fraction((-1) ** p * len(cx.faces(p)), n)
    return lhs, rhs


def write_spectrum_csv(measure: SpectralMeasure, stream) -> None:
    """Two columns: eigenvalue (shortest round-trip float), weight (exact)."""
    stream.write("eigenvalue,weight\n")
    for value, weight in measure.atoms():
        stream.write(f"{value!r},{weight}\n")


def write_betti_csv(cx: SimplicialComplex, stream) -> None:
    stream.write("p,b_p,normalized\n")
    n = len(cx.faces(0))
    for p in range(cx.dim + 1):
        b = betti(cx, p)
        stream.write(f"{p},{b},{Fraction(b, n)}\n")
