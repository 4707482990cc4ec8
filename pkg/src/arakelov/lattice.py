"""Divisor lattices: realization, enumeration, theta sums, duals.

The embedded lattice of a divisor lives in R^n with one coordinate per real
place and a (Re, Im) pair per complex place, scaled so the squared Euclidean
length of an embedded element equals its divisor metric norm. All theta
accumulation happens in log space: Example-1-style divisors produce masses
near exp(-4000), far below double underflow.

Numerical policy: the working basis is always unimodularly size-reduced
before any enumeration, and basis rows realized from a divisor are recomputed
from exact ideal coordinates, switching to 50-digit arithmetic whenever the
embedded value is a near-cancellation of large coordinates (skew metrics,
long unit translations). Enumeration and summation stay in binary64.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .divisors import ArakelovDivisor
from .errors import BudgetError, NumericError, ValidationError
from .special import log1p_exp, log_log1p_exp, logsumexp_pairwise

DEFAULT_BUDGET = 10 ** 8
_CANCEL_LIMIT = 1e4          # |sum of magnitudes| / |value| above which mp is used
_COND_LIMIT = 1e14


@dataclass
class ThetaResult:
    """Log-space theta data for one lattice.

    log_k0_minus_1 is the natural log of the sum over nonzero vectors and is
    meaningful even when the sum underflows doubles; k0 and h0 are derived
    from it stably (k0 saturates at inf). tail_bound is a certified upper
    bound on the omitted mass, also kept in log form.
    """
    log_k0_minus_1: float
    k0: float
    h0: float
    log_h0: float
    radius_sq: float
    tail_bound: float
    log_tail_bound: float
    vectors_counted: int


def _lll_transform(basis: np.ndarray, delta: float = 0.99):
    """LLL reduction; returns (U, U @ basis) with U integer unimodular.

    Plain textbook float implementation: Gram-Schmidt is recomputed after
    swaps, which is fine at dimension <= 12. U is kept in exact Python ints.
    """
    b = [list(map(float, row)) for row in basis]
    n = len(b)
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 1:
        return u, np.asarray(b, dtype=float)

    def gram_schmidt():
        star = []
        mu = [[0.0] * n for _ in range(n)]
        for i in range(n):
            v = b[i][:]
            for j in range(i):
                denom = sum(x * x for x in star[j])
                mu[i][j] = (sum(x * y for x, y in zip(b[i], star[j])) / denom
                            if denom > 0 else 0.0)
                v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
            star.append(v)
        norms = [sum(x * x for x in v) for v in star]
        return mu, norms

    mu, norms = gram_schmidt()
    k = 1
    steps = 0
    max_steps = 4000 * n * n
    while k < n and steps < max_steps:
        steps += 1
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                u[k] = [x - q * y for x, y in zip(u[k], u[j])]
                mu, norms = gram_schmidt()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            u[k], u[k - 1] = u[k - 1], u[k]
            mu, norms = gram_schmidt()
            k = max(k - 1, 1)
    return u, np.asarray(b, dtype=float)


def _place_scales(div: ArakelovDivisor):
    """Per-coordinate scale factors implementing the divisor metric."""
    field = div.field
    scales = []
    for i, x in enumerate(div.infinite):
        if i < field.r1:
            scales.append(math.exp(-x))
        else:
            s = math.sqrt(2.0) * math.exp(-x / 2.0)
            scales.extend((s, s))
    return scales


def _embed_rows_float(field, coord_rows):
    """Embed exact coordinate rows into R^n (unscaled), plus a cancellation
    gauge: the ratio of summed magnitudes to the value, per entry."""
    n = field.degree
    rows = []
    gauges = []
    for coords in coord_rows:
        cf = [float(c) for c in coords]
        row = []
        gauge = []
        for p, place in enumerate(field.emb_by_place):
            val = 0.0
            mag_re = 0.0
            mag_im = 0.0
            re = 0.0
            im = 0.0
            for c, e in zip(cf, place):
                re += c * e.real
                im += c * e.imag
                mag_re += abs(c * e.real)
                mag_im += abs(c * e.imag)
            if p < field.r1:
                row.append(re)
                gauge.append(mag_re / abs(re) if re else math.inf if mag_re else 1.0)
            else:
                row.extend((re, im))
                gauge.append(mag_re / abs(re) if re else math.inf if mag_re else 1.0)
                gauge.append(mag_im / abs(im) if im else math.inf if mag_im else 1.0)
        rows.append(row)
        gauges.append(gauge)
    return rows, gauges


def _embed_row_mp(field, coords):
    """One coordinate row embedded at ~50 digits; returns unscaled floats."""
    with mpmath.workdps(50):
        out = []
        mp_places = field.emb_by_place_mp()
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in coords]
        for p, place in enumerate(mp_places):
            acc = mpmath.mpc(0)
            for c, e in zip(cs, place):
                acc += c * e
            if p < field.r1:
                out.append(float(acc.real))
            else:
                out.extend((float(acc.real), float(acc.imag)))
    return out


class DivisorLattice:
    """A realized lattice: working basis, Gram data, covolume, provenance."""

    def __init__(self, basis: np.ndarray, *, divisor: ArakelovDivisor | None = None,
                 source_coords=None, reduction=None):
        basis = np.asarray(basis, dtype=float)
        if basis.ndim != 2 or basis.shape[0] != basis.shape[1]:
            raise ValidationError("lattice basis must be square")
        self.dimension = basis.shape[0]
        self.basis = basis
        self.divisor = divisor
        self.source_coords = source_coords
        self.reduction = reduction
        self.gram = basis @ basis.T
        try:
            self.cholesky = np.linalg.cholesky(self.gram)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"Gram matrix is not positive definite: {exc}") from exc
        diag = np.diag(self.cholesky)
        cond = float((np.max(diag) / np.min(diag)) ** 2) * self.dimension
        if not math.isfinite(cond) or cond > _COND_LIMIT:
            raise NumericError(
                f"lattice Gram matrix is numerically singular "
                f"(condition estimate {cond:.3e} exceeds {_COND_LIMIT:.0e})")
        sign, logdet = np.linalg.slogdet(self.basis)
        if sign == 0:
            raise NumericError("lattice basis is singular")
        self.log_covolume = float(logdet)
        self.covolume = math.exp(self.log_covolume)
        self._shortest: tuple[tuple[int, ...], float] | None = None

    @classmethod
    def from_basis(cls, rows) -> "DivisorLattice":
        """Build a lattice from raw basis rows; the stored basis is the
        size-reduced image (the lattice itself is unchanged)."""
        raw = np.asarray(rows, dtype=float)
        if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
            raise ValidationError("lattice basis must be square")
        u, reduced = _lll_transform(raw)
        return cls(reduced, reduction=u)

    # -- enumeration ----------------------------------------------------------

    def _runs(self, r_sq: float, budget: int):
        """Backtracking level runs: the last coordinate of each partial
        assignment is returned as a contiguous integer interval.

        Yields tuples (prefix, partial_norm, center, lo, hi) where prefix is
        the tuple (x_1 .. x_{n-1}) already fixed (highest index last) and the
        level-0 coordinate a ranges over [lo, hi] with squared norm
        partial_norm + (a*w00 + center)^2. Exactly one representative per
        +/- pair is produced (highest nonzero coordinate positive).
        """
        w = [[float(v) for v in row] for row in self.cholesky]
        n = self.dimension
        r_slack = r_sq * (1.0 + 1e-12) + 1e-300
        count = 0
        out = []

        def descend(level, partial, centers, prefix, prefix_zero):
            nonlocal count
            wll = w[level][level]
            c = centers[level]
            rad = math.sqrt(max(r_slack - partial, 0.0))
            lo = math.ceil((-rad - c) / wll - 1e-12)
            hi = math.floor((rad - c) / wll + 1e-12)
            if level == 0:
                if prefix_zero:
                    lo = max(lo, 1)
                if lo > hi:
                    return
                count += hi - lo + 1
                if 2 * count > budget:
                    raise BudgetError(
                        f"enumeration exceeded the budget of {budget} vectors")
                out.append((prefix, partial, c, lo, hi))
                return
            start = 0 if prefix_zero else lo
            for x in range(start, hi + 1):
                y = x * wll + c
                p2 = partial + y * y
                if p2 > r_slack:
                    if x > max(start, round(-c / wll)):
                        break
                    continue
                new_centers = centers.copy()
                for k in range(level):
                    new_centers[k] += x * w[level][k]
                descend(level - 1, p2, new_centers, (x,) + prefix,
                        prefix_zero and x == 0)

        expected = self._gaussian_heuristic(r_sq)
        if expected > budget:
            raise BudgetError(
                f"projected enumeration count {expected:.3e} exceeds the "
                f"budget of {budget}")
        descend(n - 1, 0.0, [0.0] * n, (), True)
        return out, count

    def _gaussian_heuristic(self, r_sq: float) -> float:
        n = self.dimension
        log_ball = (0.5 * n * math.log(math.pi) + 0.5 * n * math.log(max(r_sq, 1e-300))
                    - math.lgamma(0.5 * n + 1.0))
        return math.exp(min(log_ball - self.log_covolume, 700.0))

    def enumerate_below(self, r_sq: float, budget: int = DEFAULT_BUDGET):
        """All nonzero vectors with |v|^2 <= r_sq, one per +/- pair, as
        (coords, norm_sq) sorted lexicographically by coordinate vector.

        Coordinates refer to rows of self.basis; each entry stands for the
        pair +/- v.
        """
        if r_sq <= 0:
            raise ValidationError("r_sq must be positive")
        runs, _ = self._runs(r_sq, budget)
        w00 = float(self.cholesky[0][0])
        results = []
        for prefix, partial, c, lo, hi in runs:
            for a in range(lo, hi + 1):
                y = a * w00 + c
                q = partial + y * y
                if q <= r_sq * (1.0 + 1e-12):
                    results.append(((a,) + prefix, q))
        results.sort(key=lambda t: t[0])
        return results

    def shortest_vector(self, budget: int = DEFAULT_BUDGET):
        """A vector of minimal nonzero norm and its squared length."""
        if self._shortest is None:
            r0 = float(np.min(np.diag(self.gram))) * (1.0 + 1e-9)
            vecs = self.enumerate_below(r0, budget)
            if not vecs:
                raise NumericError("no vectors found below the basis diagonal")
            coords, lam = min(vecs, key=lambda t: (t[1], t[0]))
            self._shortest = (coords, lam)
        return self._shortest

    def shortest_norm_sq(self, budget: int = DEFAULT_BUDGET) -> float:
        return self.shortest_vector(budget)[1]

    def hermite_constant(self, budget: int = DEFAULT_BUDGET) -> float:
        """lambda_1^2 / covolume^(2/n)."""
        lam = self.shortest_norm_sq(budget)
        return lam * math.exp(-2.0 * self.log_covolume / self.dimension)

    # -- theta sums -------------------------------------------------------------

    def _log_mass(self, r_sq: float, budget: int):
        """Log of sum exp(-pi |v|^2) over nonzero vectors within r_sq, and the
        number of vectors counted (including +/- weight)."""
        runs, half_count = self._runs(r_sq, budget)
        if not runs:
            return -math.inf, 0
        w00 = float(self.cholesky[0][0])
        lows = np.array([r[3] for r in runs], dtype=float)
        lens = np.array([r[4] - r[3] + 1 for r in runs], dtype=np.int64)
        partials = np.array([r[1] for r in runs], dtype=float)
        centers = np.array([r[2] for r in runs], dtype=float)
        total = int(lens.sum())
        seg = np.repeat(np.arange(len(runs)), lens)
        offsets = np.concatenate(([0], np.cumsum(lens)[:-1]))
        a = np.arange(total) - np.repeat(offsets, lens) + np.repeat(lows, lens)
        y = a * w00 + centers[seg]
        t = -math.pi * (partials[seg] + y * y)
        m = float(t.max())
        log_sum = m + math.log(float(np.sum(np.exp(t - m))))
        return log_sum + math.log(2.0), 2 * half_count

    def _tail_bound_log(self, radius: float, lam1: float) -> float:
        """Certified log upper bound on sum exp(-pi |v|^2) over |v| > radius.

        Shells of width delta; the number of points with |v| <= t is at most
        (1 + 2t/lam1)^n by a packing argument, each shell term bounded by its
        inner radius.
        """
        n = self.dimension
        delta = max(1.0, 0.5 * lam1)
        terms = []
        best = -math.inf
        for k in range(10000):
            inner = radius + k * delta
            outer = inner + delta
            log_count = n * math.log1p(2.0 * outer / lam1)
            t = log_count - math.pi * inner * inner
            terms.append(t)
            best = max(best, t)
            if k > 4 and t < best - 80.0:
                break
        return logsumexp_pairwise(terms)

    def theta_sum(self, tol: float, budget: int = DEFAULT_BUDGET,
                  precision: str = "std") -> ThetaResult:
        """Sum exp(-pi |v|^2) over nonzero lattice vectors, truncated at an
        adaptive radius with a certified relative tail bound <= tol."""
        if not (0.0 < tol <= 1e-6):
            raise ValidationError("tol must lie in (0, 1e-6]")
        if precision not in ("std", "ext"):
            raise ValidationError("precision must be 'std' or 'ext'")
        lam_sq = self.shortest_norm_sq(budget)
        lam1 = math.sqrt(lam_sq)
        log_tol = math.log(tol)
        r_sq = lam_sq + (-log_tol + 8.0) / math.pi
        for _ in range(40):
            ell, counted = self._log_mass(r_sq, budget)
            tail_log = self._tail_bound_log(math.sqrt(r_sq), lam1)
            if tail_log <= log_tol + ell:
                break
            r_sq = (math.sqrt(r_sq) + max(1.0, 0.5 * lam1)) ** 2
        else:
            raise NumericError(
                "theta tail tolerance unreachable within the radius budget")
        if precision == "ext":
            ell = self._log_mass_ext(r_sq, budget)
        try:
            k0 = 1.0 + math.exp(ell)
        except OverflowError:
            k0 = math.inf
        return ThetaResult(
            log_k0_minus_1=ell,
            k0=k0,
            h0=log1p_exp(ell),
            log_h0=log_log1p_exp(ell),
            radius_sq=r_sq,
            tail_bound=math.exp(tail_log) if tail_log > -745.0 else 0.0,
            log_tail_bound=tail_log,
            vectors_counted=counted,
        )

    def _log_mass_ext(self, r_sq: float, budget: int) -> float:
        """Extended-precision log-mass: norms recomputed at 50 digits from the
        exact ideal coordinates of the divisor. Needs realize() provenance."""
        if self.divisor is None or self.source_coords is None:
            raise ValidationError(
                "extended precision requires a lattice realized from a divisor")
        field = self.divisor.field
        pad = (math.sqrt(r_sq) + 0.25) ** 2
        vectors = self.enumerate_below(pad, budget)
        div = self.divisor
        with mpmath.workdps(50):
            mp_places = field.emb_by_place_mp()
            weights = []
            for i, x in enumerate(div.infinite):
                if i < field.r1:
                    weights.append(mpmath.exp(-2 * mpmath.mpf(x)))
                else:
                    weights.append(2 * mpmath.exp(-mpmath.mpf(x)))
            acc = mpmath.mpf(0)
            pi_mp = mpmath.pi
            for coords, _ in vectors:
                elt = [mpmath.mpf(0)] * (field.r1 + field.r2)
                exact = [Fraction(0)] * field.degree
                for c, row in zip(coords, self.source_coords):
                    if c:
                        for j in range(field.degree):
                            exact[j] += c * row[j]
                q = mpmath.mpf(0)
                for p in range(field.r1 + field.r2):
                    val = mpmath.mpc(0)
                    for j in range(field.degree):
                        if exact[j]:
                            val += (mpmath.mpf(exact[j].numerator)
                                    / exact[j].denominator) * mp_places[p][j]
                    q += weights[p] * (val.real ** 2 + val.imag ** 2)
                acc += mpmath.exp(-pi_mp * q)
            result = mpmath.log(2 * acc)
            return float(result)

    # -- duality ------------------------------------------------------------------

    def dual_lattice(self) -> "DivisorLattice":
        """The Z-dual lattice: inverse-transpose basis, reciprocal covolume."""
        inv = np.linalg.inv(self.basis).T
        return DivisorLattice.from_basis(inv)


def realize(div: ArakelovDivisor, budget: int = DEFAULT_BUDGET) -> DivisorLattice:
    """The embedded, metric-scaled lattice of a divisor.

    Covolume equals sqrt|disc| / N(D). The working basis is a size-reduced
    Z-basis of the ideal, re-embedded from exact coordinates (switching to
    high precision entry-wise when float embedding would cancel).
    """
    field = div.field
    n = field.degree
    scales = _place_scales(div)
    coords = [tuple(row) for row in div.ideal.basis_matrix]
    for _ in range(3):
        rows, gauges = _embed_rows_float(field, coords)
        basis = np.asarray(rows, dtype=float) * np.asarray(scales)
        if n == 1:
            u = [[1]]
        else:
            u, _ = _lll_transform(basis)
        if all(u[i][j] == int(i == j) for i in range(n) for j in range(n)):
            break
        new_coords = []
        for i in range(n):
            row = [Fraction(0)] * n
            for j in range(n):
                if u[i][j]:
                    for k in range(n):
                        row[k] += u[i][j] * coords[j][k]
            new_coords.append(tuple(row))
        coords = new_coords
    rows, gauges = _embed_rows_float(field, coords)
    for i in range(n):
        if max(gauges[i]) > _CANCEL_LIMIT:
            rows[i] = _embed_row_mp(field, coords[i])
    basis = np.asarray(rows, dtype=float) * np.asarray(scales)
    return DivisorLattice(basis, divisor=div, source_coords=tuple(coords))


# -- module-level wrappers matching the operation names ------------------------

def enumerate_below(lattice: DivisorLattice, r_sq: float,
                    budget: int = DEFAULT_BUDGET):
    return lattice.enumerate_below(r_sq, budget)


def shortest_vector(lattice: DivisorLattice, budget: int = DEFAULT_BUDGET):
    return lattice.shortest_vector(budget)


def theta_sum(lattice: DivisorLattice, tol: float,
              budget: int = DEFAULT_BUDGET, precision: str = "std") -> ThetaResult:
    return lattice.theta_sum(tol, budget, precision)


def dual_lattice(lattice: DivisorLattice) -> DivisorLattice:
    return lattice.dual_lattice()


def hermite_constant(lattice: DivisorLattice, budget: int = DEFAULT_BUDGET) -> float:
    return lattice.hermite_constant(budget)
