"""Rank-r metrized bundles: theta sizes, duals, higher-rank Riemann-Roch.

A bundle is a projective module presented as a direct sum of fractional
ideals (Steinitz form O_F^(r-1) + I is the common entry point) carrying one
positive matrix per infinite place: real symmetric at real places, Hermitian
at complex ones, with the rank-one conventions of the divisor metric (the
complex-place form is 2 z* H z). The realized lattice has rank r times the
field degree, so theta machinery is shared with the divisor path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divisors import ArakelovDivisor
from .errors import BudgetError, ValidationError
from .field import FractionalIdeal, NumberField, trace_dual
from .lattice import DEFAULT_BUDGET, DivisorLattice, ThetaResult

_MAX_LATTICE_DIM = 12


@dataclass
class ArakelovBundle:
    field: NumberField
    rank: int
    ideals: tuple[FractionalIdeal, ...]
    place_metrics: tuple[np.ndarray, ...]
    admissible: bool = False

    def __post_init__(self):
        r = self.rank
        fld = self.field
        if r < 1:
            raise ValidationError("rank must be positive")
        if len(self.ideals) != r:
            raise ValidationError("need one ideal per rank component")
        for ideal in self.ideals:
            if not fld.same_field(ideal.field):
                raise ValidationError("bundle ideals live in a different field")
        if len(self.place_metrics) != fld.r1 + fld.r2:
            raise ValidationError("need one metric matrix per infinite place")
        metrics = []
        for p, h in enumerate(self.place_metrics):
            h = np.asarray(h, dtype=complex if p >= fld.r1 else float)
            if h.shape != (r, r):
                raise ValidationError(f"metric at place {p} is not {r} x {r}")
            herm_defect = float(np.max(np.abs(h - h.conj().T)))
            if herm_defect > 1e-10 * (1.0 + float(np.max(np.abs(h)))):
                raise ValidationError(f"metric at place {p} is not Hermitian symmetric")
            if self.admissible:
                det = np.linalg.det(h)
                if abs(det - 1.0) > 1e-12 * max(1.0, abs(det)):
                    raise ValidationError(
                        f"admissible flag set but det(metric[{p}]) = {det}")
            metrics.append(h)
        object.__setattr__(self, "place_metrics", tuple(metrics))


def steinitz_bundle(field: NumberField, rank: int,
                    steinitz_ideal: FractionalIdeal | None = None,
                    place_metrics=None, admissible: bool = False) -> ArakelovBundle:
    """O_F^(rank-1) + I with the given (default identity) place metrics."""
    ring = field.ring_of_integers()
    ideals = (ring,) * (rank - 1) + ((steinitz_ideal or ring),)
    if place_metrics is None:
        place_metrics = tuple(np.eye(rank) for _ in range(field.r1 + field.r2))
        admissible = True
    return ArakelovBundle(field=field, rank=rank, ideals=ideals,
                          place_metrics=tuple(place_metrics),
                          admissible=admissible)


def divisor_bundle(div: ArakelovDivisor) -> ArakelovBundle:
    """The rank-one bundle of a divisor (for cross-checking the two paths)."""
    fld = div.field
    metrics = []
    for p, x in enumerate(div.infinite):
        if p < fld.r1:
            metrics.append(np.array([[math.exp(-2.0 * x)]]))
        else:
            metrics.append(np.array([[math.exp(-x)]], dtype=complex))
    return ArakelovBundle(field=fld, rank=1, ideals=(div.ideal,),
                          place_metrics=tuple(metrics))


def twist_bundle(bundle: ArakelovBundle, div: ArakelovDivisor) -> ArakelovBundle:
    """Tensor with the line bundle of a divisor: ideals multiply, metrics
    scale by the divisor weight at each place."""
    from .field import ideal_mul
    fld = bundle.field
    if not fld.same_field(div.field):
        raise ValidationError("twist divisor lives in a different field")
    ideals = tuple(ideal_mul(j, div.ideal) for j in bundle.ideals)
    metrics = []
    for p, h in enumerate(bundle.place_metrics):
        x = div.infinite[p]
        scale = math.exp(-2.0 * x) if p < fld.r1 else math.exp(-x)
        metrics.append(h * scale)
    return ArakelovBundle(field=fld, rank=bundle.rank, ideals=ideals,
                          place_metrics=tuple(metrics))


def bundle_degree(bundle: ArakelovBundle) -> float:
    """deg det(M): ideal norms plus the log-determinants of the metrics."""
    fld = bundle.field
    acc = 0.0
    for ideal in bundle.ideals:
        acc -= math.log(ideal.norm.numerator) - math.log(ideal.norm.denominator)
    for p, h in enumerate(bundle.place_metrics):
        logdet = float(np.linalg.slogdet(h)[1])
        acc += -0.5 * logdet if p < fld.r1 else -logdet
    return acc


def bundle_chi(bundle: ArakelovBundle) -> float:
    """chi(M) = deg(M) + r chi(O_F) = -log covol of the realized lattice."""
    fld = bundle.field
    return bundle_degree(bundle) - 0.5 * bundle.rank * math.log(abs(fld.discriminant))


def realize_bundle(bundle: ArakelovBundle,
                   budget: int = DEFAULT_BUDGET) -> DivisorLattice:
    """Embed the module into R^(r n) with metric-adapted coordinates."""
    fld = bundle.field
    r = bundle.rank
    n = fld.degree
    dim = r * n
    if dim > _MAX_LATTICE_DIM:
        raise BudgetError(
            f"bundle lattice dimension {dim} exceeds the design envelope "
            f"({_MAX_LATTICE_DIM})")
    # per-place coordinate maps: z in K_sigma^r -> real coordinates
    transforms = []
    for p, h in enumerate(bundle.place_metrics):
        low = np.linalg.cholesky(h)
        transforms.append(low.conj().T)   # y = L^H z gives |y|^2 = z^* H z
    rows = []
    for j, ideal in enumerate(bundle.ideals):
        for coords in ideal.basis_matrix:
            cf = [float(c) for c in coords]
            row = []
            for p in range(fld.r1 + fld.r2):
                sigma = sum(c * e for c, e in zip(cf, fld.emb_by_place[p]))
                y = sigma * transforms[p][:, j]
                if p < fld.r1:
                    row.extend(float(v.real) for v in y)
                else:
                    s = math.sqrt(2.0)
                    for v in y:
                        row.extend((s * v.real, s * v.imag))
            rows.append(row)
    return DivisorLattice.from_basis(rows)


def bundle_h0(bundle: ArakelovBundle, tol: float = 1e-10,
              budget: int = DEFAULT_BUDGET) -> ThetaResult:
    """Theta size of the module: log sum exp(-pi |x|_M^2)."""
    return realize_bundle(bundle, budget).theta_sum(tol, budget)


def bundle_dual(bundle: ArakelovBundle) -> ArakelovBundle:
    """kappa tensor M-dual: trace-dual ideals (the codifferent twist is built
    into trace duality), inverse-transpose metrics."""
    fld = bundle.field
    ideals = tuple(trace_dual(j) for j in bundle.ideals)
    metrics = []
    for p, h in enumerate(bundle.place_metrics):
        metrics.append(np.linalg.inv(h).T)
    return ArakelovBundle(field=fld, rank=bundle.rank, ideals=ideals,
                          place_metrics=tuple(metrics),
                          admissible=bundle.admissible)


def bundle_rr_defect(bundle: ArakelovBundle, tol: float = 1e-10,
                     budget: int = DEFAULT_BUDGET) -> float:
    """h0(M) - h0(kappa x M-dual) - chi(M); zero by Poisson summation."""
    left = bundle_h0(bundle, tol, budget).h0
    right = bundle_h0(bundle_dual(bundle), tol, budget).h0
    return left - right - bundle_chi(bundle)


def random_admissible_metrics(field: NumberField, rank: int, rng) -> tuple:
    """Determinant-one positive matrices, one per place, for randomized suites."""
    out = []
    for p in range(field.r1 + field.r2):
        if p < field.r1:
            while True:
                a = np.eye(rank) + 0.4 * rng.standard_normal((rank, rank))
                det = np.linalg.det(a)
                if abs(det) > 0.2:
                    break
            a /= abs(det) ** (1.0 / rank)
            h = a.T @ a
            h /= np.linalg.det(h) ** (1.0 / rank)
        else:
            while True:
                a = (np.eye(rank)
                     + 0.3 * rng.standard_normal((rank, rank))
                     + 0.3j * rng.standard_normal((rank, rank)))
                det = np.linalg.det(a)
                if abs(det) > 0.2:
                    break
            a /= abs(det) ** (1.0 / rank)
            h = a.conj().T @ a
            h /= np.linalg.det(h).real ** (1.0 / rank)
        out.append(h)
    return tuple(out)


def bundle_from_descriptor(descriptor, field: NumberField | None = None) -> ArakelovBundle:
    """Build a bundle from a JSON document (or dict): keys `rank`,
    `ideal` (rational matrix rows, optional), `place_metrics` (row-major,
    numbers or [re, im] pairs), `twist` (divisor document), `admissible`.

    The field comes from a `field` sub-descriptor or the explicit argument.
    """
    if isinstance(descriptor, (str, bytes)):
        import json
        try:
            with open(descriptor, "r", encoding="utf-8") as fh:
                descriptor = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read bundle descriptor: {exc}") from exc
    if field is None:
        from .field import field_from_descriptor, quadratic_field, rational_field
        fd = descriptor.get("field")
        if fd == "Q":
            field = rational_field()
        elif isinstance(fd, dict) and "quadratic" in fd:
            field = quadratic_field(int(fd["quadratic"]))
        elif isinstance(fd, dict):
            field = field_from_descriptor(fd)
        else:
            raise ValidationError("bundle descriptor needs a field")
    rank = int(descriptor.get("rank", 1))
    ideal = None
    if "ideal" in descriptor:
        from fractions import Fraction
        rows = [[Fraction(str(x)) for x in row] for row in descriptor["ideal"]]
        ideal = FractionalIdeal(field, rows)
    metrics = None
    if "place_metrics" in descriptor:
        metrics = []
        for p, mat in enumerate(descriptor["place_metrics"]):
            def entry(v):
                if isinstance(v, (list, tuple)):
                    return complex(float(v[0]), float(v[1]))
                return float(v)
            metrics.append(np.array([[entry(v) for v in row] for row in mat],
                                    dtype=complex if p >= field.r1 else float))
        metrics = tuple(metrics)
    bundle = steinitz_bundle(field, rank, ideal, metrics,
                             admissible=bool(descriptor.get("admissible", False)))
    if "twist" in descriptor:
        from fractions import Fraction
        tw = descriptor["twist"]
        rows = [[Fraction(str(x)) for x in row] for row in tw["ideal"]]
        div = ArakelovDivisor(FractionalIdeal(field, rows),
                              tuple(float(x) for x in tw["infinite"]))
        bundle = twist_bundle(bundle, div)
    return bundle
