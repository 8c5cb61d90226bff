"""Spectral-moment estimation from local neighbourhoods.

The r-th diagonal entry of the p-Laplacian power depends only on the
(r+1)-ball around the simplex, so moments of the spectral measure can be
averaged from rooted balls without ever assembling a global matrix.  This
drives exact moment computation for finite-support laws, Monte Carlo
estimation on large complexes, and a small convergence-experiment harness.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from .complexes import RootedComplex, SimplicialComplex, rooted_at
from .encoding import _bfs_relabel_key
from .errors import CrossCheckError, HypothesisViolationError, ValidationError
from .measures import (RandomRootedComplex, ball_distribution, total_variation,
                       uniform_rooting)
from .spectral import (SpectralMeasure, betti, betti_normalized,
                       boundary_matrix, spectral_measure)

__all__ = [
    "MomentVector",
    "RootSample",
    "local_moment",
    "moments_of_measure",
    "exhaustive_moments",
    "vertex_sampler",
    "monte_carlo_moments",
    "kernel_mass_bound",
    "ConvergenceReport",
    "convergence_experiment",
]

_ZERO = Fraction(0)


class MomentVector:
    """Moments m_0..m_R of one spectral measure, with optional Monte Carlo errors."""

    __slots__ = ("p", "moments", "stderrs")

    def __init__(self, p: int, moments, stderrs=None):
        self.p = p
        self.moments = tuple(moments)
        self.stderrs = None if stderrs is None else tuple(stderrs)
        if not self.moments:
            raise ValidationError("a moment vector needs at least m_0")
        if self.stderrs is not None and len(self.stderrs) != len(self.moments):
            raise ValidationError("one standard error per moment order")

    @property
    def order(self) -> int:
        return len(self.moments) - 1

    def validate(self, tol: float = 1e-7) -> None:
        """Positivity checks every genuine moment sequence satisfies."""
        if self.moments[0] < 0:
            raise ValidationError("m_0 is a mass and cannot be negative")
        if self.order >= 2:
            m0, m1, m2 = (float(m) for m in self.moments[:3])
            if m0 * m2 - m1 * m1 < -tol:
                raise ValidationError("2x2 Hankel determinant is negative")

    def __iter__(self):
        return iter(self.moments)

    def __repr__(self) -> str:
        return f"MomentVector(p={self.p}, moments={self.moments})"


class RootSample:
    """A sampled rooted ball together with how far it is guaranteed to reach."""

    __slots__ = ("rooted", "declared_radius", "weight")

    def __init__(self, rooted: RootedComplex, declared_radius=None, weight=1):
        self.rooted = rooted
        self.declared_radius = declared_radius
        self.weight = weight

    def covers(self, r: int) -> bool:
        """True when moments of order r are computable from this sample."""
        return self.declared_radius is None or self.declared_radius >= r + 1


_MOMENT_CACHE: dict = {}
_MOMENT_CACHE_LIMIT = 1 << 14


def _laplacian_rows(cx: SimplicialComplex, p: int):
    """Sparse integer Δ_p as a list of per-row dicts over p-simplex indices."""
    cols = cx.faces(p)
    idx = {s: i for i, s in enumerate(cols)}
    rows = [dict() for _ in cols]
    for row in boundary_matrix(cx, p).row_dicts():
        items = list(row.items())
        for a in range(len(items)):
            j, sj = items[a]
            for b in range(a, len(items)):
                k, sk = items[b]
                rows[j][k] = rows[j].get(k, 0) + sj * sk
                if j != k:
                    rows[k][j] = rows[k].get(j, 0) + sj * sk
    up = boundary_matrix(cx, p + 1)
    for col in up.by_col:
        items = list(col)
        for a in range(len(items)):
            j, sj = items[a]
            for b in range(a, len(items)):
                k, sk = items[b]
                rows[j][k] = rows[j].get(k, 0) + sj * sk
                if j != k:
                    rows[k][j] = rows[k].get(j, 0) + sj * sk
    return cols, idx, rows


def _ball_moment(ball: RootedComplex, p: int, r: int) -> Fraction:
    cx = ball.complex
    root = ball.root
    carriers = [s for s in cx.faces(p) if root in s]
    if not carriers:
        return _ZERO
    cols, idx, rows = _laplacian_rows(cx, p)
    total = 0
    for s in carriers:
        j = idx[s]
        vec = {j: 1}
        for _ in range(r):
            nxt: dict = {}
            for k, coeff in vec.items():
                for t, val in rows[k].items():
                    nxt[t] = nxt.get(t, 0) + coeff * val
            vec = nxt
        total += vec.get(j, 0)
    return Fraction(total, p + 1)


def local_moment(rc: RootedComplex, p: int, r: int) -> Fraction:
    """Σ over p-simplices at the root of ⟨Δ_p^r σ, σ⟩/(p+1), exactly.

    Only the (r+1)-ball around the root enters the answer, so the input may
    be the whole complex or any subcomplex containing that ball.
    """
    if p < 0:
        raise ValidationError("dimension must be nonnegative")
    if r < 0:
        raise ValidationError("moment order must be nonnegative")
    ball = rc.ball(r + 1)
    key = (_bfs_relabel_key(ball.complex, ball.root), p, r)
    hit = _MOMENT_CACHE.get(key)
    if hit is not None:
        return hit
    value = _ball_moment(ball, p, r)
    if len(_MOMENT_CACHE) < _MOMENT_CACHE_LIMIT:
        _MOMENT_CACHE[key] = value
    return value


def moments_of_measure(mu: RandomRootedComplex, p: int, order: int) -> MomentVector:
    """Exact moments m_0..m_order of the spectral measure of a finite law."""
    moments = [
        sum((pt.weight * local_moment(pt.rooted, p, r) for pt in mu.points), _ZERO)
        for r in range(order + 1)
    ]
    mv = MomentVector(p, moments)
    mv.validate()
    return mv


def exhaustive_moments(cx: SimplicialComplex, p: int, order: int) -> MomentVector:
    """Average local moments over every vertex; equals the uniform-rooting moments."""
    verts = cx.vertices
    if not verts:
        raise ValidationError("cannot average over an empty complex")
    moments = []
    for r in range(order + 1):
        acc = sum(local_moment(rooted_at(cx, v), p, r) for v in verts)
        moments.append(Fraction(acc, len(verts)))
    mv = MomentVector(p, moments)
    mv.validate()
    return mv


def vertex_sampler(cx: SimplicialComplex, radius: int):
    """Sampler of uniform-vertex rooted balls, for Monte Carlo estimation."""
    verts = cx.vertices
    if not verts:
        raise ValidationError("cannot sample from an empty complex")

    def sample(rng) -> RootSample:
        v = verts[int(rng.integers(len(verts)))]
        return RootSample(rooted_at(cx, v).ball(radius), radius)

    return sample


def monte_carlo_moments(sampler, p: int, order: int, n_samples: int,
                        seed: int) -> MomentVector:
    """Empirical moments from i.i.d. root samples, with standard errors.

    Each sample draws its own generator from (seed, index), so the result
    does not depend on evaluation order and any prefix of the stream can be
    recomputed independently.
    """
    if n_samples < 1:
        raise ValidationError("need at least one sample")
    values = [[] for _ in range(order + 1)]
    for i in range(n_samples):
        rng = np.random.default_rng([seed, i])
        sample = sampler(rng)
        if isinstance(sample, RootedComplex):
            sample = RootSample(sample)
        if not sample.covers(order):
            raise ValidationError(
                f"sample ball radius {sample.declared_radius} cannot support "
                f"order-{order} moments")
        for r in range(order + 1):
            values[r].append(float(local_moment(sample.rooted, p, r)))
    means = [math.fsum(col) / n_samples for col in values]
    if n_samples == 1:
        errs = [0.0] * (order + 1)
    else:
        errs = [
            math.sqrt(math.fsum((x - m) ** 2 for x in col)
                      / (n_samples - 1) / n_samples)
            for col, m in zip(values, means)
        ]
    mv = MomentVector(p, means, errs)
    mv.validate()
    return mv


def kernel_mass_bound(source, degree_bound: int, p: int, eps: float,
                      radius: float | None = None) -> float:
    """Upper bound on spectral mass in (-eps, eps) excluding the atom at 0.

    The nonzero eigenvalues of an integer positive semidefinite matrix have
    product at least 1, so few of them fit below eps once the spectral
    radius is known.  ``radius`` defaults to the a priori value
    2*sqrt((p+2)*D); pass the true radius when available for a sharper
    bound.  A radius at most 1 forces the nonzero spectrum to be empty and
    the bound collapses to 0.  When ``source`` is a full spectral measure
    the bound is asserted against it.
    """
    if not 0 < eps < 1:
        raise ValidationError("eps must lie strictly between 0 and 1")
    if degree_bound < 0:
        raise ValidationError("degree bound must be nonnegative")
    if radius is None:
        radius = 2.0 * math.sqrt((p + 2) * degree_bound)
    if radius <= 1:
        bound = 0.0
    else:
        bound = (math.log(radius) * math.comb(degree_bound, p)
                 / ((p + 1) * math.log(1.0 / eps)))
    if isinstance(source, SpectralMeasure):
        mass = float(source.near_zero_mass(eps))
        if mass > bound + 1e-12:
            raise CrossCheckError(
                f"near-zero mass {mass} exceeds counting bound {bound}")
    return bound


def _resolve_threads(threads) -> int:
    if threads is None:
        raw = os.environ.get("L2LIMITS_THREADS", "1")
        try:
            threads = int(raw)
        except ValueError:
            raise ValidationError(f"L2LIMITS_THREADS must be an integer, got {raw!r}")
    return max(1, min(int(threads), 32))


def _level_stats(args):
    cx, p, order, eps_list, rmax = args
    mu = uniform_rooting(cx)
    mv = moments_of_measure(mu, p, order)
    measure = spectral_measure(cx, p)
    nu = {eps: measure.mass_at_zero() + measure.near_zero_mass(eps)
          for eps in eps_list}
    balls = {r: dict(ball_distribution(mu, r)) for r in range(rmax + 1)}
    return {
        "n_vertices": len(cx.vertices),
        "max_degree": cx.max_degree(),
        "b_p": betti(cx, p),
        "b_p_normalized": betti_normalized(cx, p),
        "moments": mv.moments,
        "nu": nu,
        "spectral_radius": measure.spectral_radius(),
        "balls": balls,
    }


class ConvergenceReport:
    """Per-level statistics of a complex sequence plus trend summaries."""

    __slots__ = ("p", "order", "eps_list", "rmax", "labels", "rows",
                 "distances_to_last", "trends", "degree_bound", "bounds")

    def __init__(self, p, order, eps_list, rmax, labels, rows,
                 distances_to_last, trends, degree_bound, bounds):
        self.p = p
        self.order = order
        self.eps_list = eps_list
        self.rmax = rmax
        self.labels = labels
        self.rows = rows
        self.distances_to_last = distances_to_last
        self.trends = trends
        self.degree_bound = degree_bound
        self.bounds = bounds

    def header(self):
        cols = ["n", "|V|", "p", "b_p", "b_p_normalized"]
        cols += [f"m{r}" for r in range(self.order + 1)]
        cols += [f"nu_eps_{eps:g}" for eps in self.eps_list]
        return cols

    def _cell(self, value) -> str:
        if isinstance(value, float):
            return repr(value)
        return str(value)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.header())
            for label, row in zip(self.labels, self.rows):
                cells = [label, row["n_vertices"], self.p, row["b_p"],
                         row["b_p_normalized"]]
                cells += list(row["moments"])
                cells += [row["nu"][eps] for eps in self.eps_list]
                writer.writerow([self._cell(c) for c in cells])
            for eps, bound in self.bounds.items():
                fh.write(f"# kernel_mass_bound eps={eps:g} D={self.degree_bound} "
                         f"p={self.p}: {bound!r}\n")

    def summary_lines(self):
        lines = []
        for label, row, dist in zip(self.labels, self.rows,
                                    self.distances_to_last):
            lines.append(
                f"n={label} |V|={row['n_vertices']} b_{self.p}={row['b_p']} "
                f"normalized={row['b_p_normalized']} "
                f"dist_to_last(rmax={self.rmax})={dist}")
        for column, flag in self.trends.items():
            lines.append(f"trend {column}: {flag}")
        for eps, bound in self.bounds.items():
            lines.append(
                f"kernel_mass_bound eps={eps:g}: {bound:.6g}")
        return lines


def _trend(values) -> str:
    if len(values) < 2:
        return "constant"
    diffs = [b - a for a, b in zip(values, values[1:])]
    if all(d == 0 for d in diffs):
        return "constant"
    if all(d <= 0 for d in diffs):
        return "decreasing"
    if all(d >= 0 for d in diffs):
        return "increasing"
    return "mixed"


def convergence_experiment(sequence, p: int, order: int, eps_list,
                           rmax: int = 2, labels=None, degree_bound=None,
                           threads=None, csv_path=None) -> ConvergenceReport:
    """Tabulate Betti numbers, moments, and ball statistics along a sequence.

    The approximation statement this probes requires degrees bounded along
    the whole sequence; a strictly growing degree column (or an explicit
    ``degree_bound`` that some level violates) aborts the experiment.
    Levels are independent and are processed in parallel when more than one
    worker is allowed (``threads`` argument or L2LIMITS_THREADS).
    """
    sequence = list(sequence)
    if not sequence:
        raise ValidationError("need at least one complex")
    eps_list = list(eps_list)
    if labels is None:
        labels = list(range(len(sequence)))
    if len(labels) != len(sequence):
        raise ValidationError("one label per level")

    degrees = [cx.max_degree() for cx in sequence]
    if degree_bound is not None:
        for label, d in zip(labels, degrees):
            if d > degree_bound:
                raise HypothesisViolationError(
                    f"level {label} has max degree {d} > bound {degree_bound}; "
                    "the approximation statement needs uniformly bounded degree")
    elif len(degrees) >= 3 and all(a < b for a, b in zip(degrees, degrees[1:])):
        raise HypothesisViolationError(
            f"max degree grows at every level ({degrees}); "
            "the approximation statement needs uniformly bounded degree")
    observed_bound = degree_bound if degree_bound is not None else max(degrees)

    jobs = [(cx, p, order, eps_list, rmax) for cx in sequence]
    workers = _resolve_threads(threads)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            rows = list(pool.map(_level_stats, jobs))
    else:
        rows = [_level_stats(job) for job in jobs]

    last_balls = rows[-1]["balls"]
    distances = []
    for row in rows:
        dist = _ZERO
        for r in range(rmax + 1):
            dist += Fraction(1, 2 ** r) * total_variation(row["balls"][r],
                                                          last_balls[r])
        distances.append(dist)

    trends = {"b_p_normalized": _trend([row["b_p_normalized"] for row in rows])}
    for eps in eps_list:
        trends[f"nu_eps_{eps:g}"] = _trend([row["nu"][eps] for row in rows])
    trends["dist_to_last"] = _trend(distances)

    bounds = {eps: kernel_mass_bound(None, observed_bound, p, eps)
              for eps in eps_list}
    report = ConvergenceReport(p, order, eps_list, rmax, labels, rows,
                               distances, trends, observed_bound, bounds)
    if csv_path is not None:
        report.write_csv(csv_path)
    return report
