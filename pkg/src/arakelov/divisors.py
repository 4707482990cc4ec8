"""Arakelov divisors: degree, characteristic, effectivity, duality, families.

A divisor is a fractional ideal together with one real coefficient per
infinite place. The finite part is carried multiplicatively by the ideal
(I = prod P^(-x_P)), which is all the metric formulas ever consume.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .field import (FieldElement, FractionalIdeal, NumberField, ideal_mul,
                    trace_dual)


@dataclass(frozen=True)
class ArakelovDivisor:
    ideal: FractionalIdeal
    infinite: tuple[float, ...]

    def __post_init__(self):
        field = self.ideal.field
        if len(self.infinite) != field.r1 + field.r2:
            raise ValidationError(
                f"need {field.r1 + field.r2} infinite coefficients, "
                f"got {len(self.infinite)}")
        object.__setattr__(self, "infinite", tuple(float(x) for x in self.infinite))

    @property
    def field(self) -> NumberField:
        return self.ideal.field


def trivial_divisor(field: NumberField) -> ArakelovDivisor:
    return ArakelovDivisor(field.ring_of_integers(), (0.0,) * (field.r1 + field.r2))


def _log_fraction(q) -> float:
    # log of a positive rational with big numerator/denominator support
    return math.log(q.numerator) - math.log(q.denominator)


def degree(div: ArakelovDivisor) -> float:
    """deg(D) = -log N(I) + sum of the infinite coefficients."""
    return -_log_fraction(div.ideal.norm) + math.fsum(div.infinite)


def divisor_norm(div: ArakelovDivisor) -> float:
    return math.exp(degree(div))


def chi(div: ArakelovDivisor) -> float:
    """Euler-Poincare characteristic: deg(D) - (1/2) log |disc|."""
    return degree(div) - 0.5 * math.log(abs(div.field.discriminant))


def one_norm_sq(div: ArakelovDivisor) -> float:
    """The metric norm of the element 1: sum e^(-2x) over real places plus
    2 e^(-x) over complex places."""
    field = div.field
    acc = 0.0
    for i, x in enumerate(div.infinite):
        if i < field.r1:
            acc += math.exp(-2.0 * x)
        else:
            acc += 2.0 * math.exp(-x)
    return acc


def effectivity(div: ArakelovDivisor) -> float:
    """e(D) in [0, 1): zero unless the ideal contains 1, else exp(-pi |1|^2)."""
    if not div.ideal.contains_one():
        return 0.0
    return math.exp(-math.pi * one_norm_sq(div))


def metric_norm(div: ArakelovDivisor, f: FieldElement) -> float:
    """|f|_D^2 under the divisor metric."""
    field = div.field
    f = field.coerce(f)
    values = f.embeddings()
    acc = 0.0
    for i, (x, z) in enumerate(zip(div.infinite, values)):
        a = abs(z)
        if i < field.r1:
            acc += math.exp(-2.0 * x) * a * a
        else:
            acc += 2.0 * math.exp(-x) * a * a
    return acc


def canonical_divisor(field: NumberField) -> ArakelovDivisor:
    """Ideal part the codifferent, zero at infinity; degree log |disc|."""
    return ArakelovDivisor(field.codifferent(), (0.0,) * (field.r1 + field.r2))


def dual_divisor(div: ArakelovDivisor) -> ArakelovDivisor:
    """kappa - D: trace-dual ideal, negated infinite part. An exact involution."""
    return ArakelovDivisor(trace_dual(div.ideal),
                           tuple(-x for x in div.infinite))


def principal_divisor(f: FieldElement) -> ArakelovDivisor:
    """(f): ideal f^(-1) O_F, coefficients -log|sigma(f)| (doubled when complex)."""
    field = f.field
    if f.is_zero():
        raise ValidationError("the zero element has no divisor")
    ideal = field.principal_ideal(f.inverse())
    coeffs = []
    for i, z in enumerate(f.embeddings()):
        mult = 1.0 if i < field.r1 else 2.0
        coeffs.append(-mult * math.log(abs(z)))
    return ArakelovDivisor(ideal, tuple(coeffs))


def add_divisors(a: ArakelovDivisor, b: ArakelovDivisor) -> ArakelovDivisor:
    """Divisor addition: ideals multiply, infinite parts add."""
    if not a.field.same_field(b.field):
        raise ValidationError("divisors live in different fields")
    return ArakelovDivisor(ideal_mul(a.ideal, b.ideal),
                           tuple(x + y for x, y in zip(a.infinite, b.infinite)))


def supports_pic_points(field: NumberField) -> bool:
    if field.degree == 1:
        return True
    return (field.degree == 2 and field.r1 == 2 and field.class_number == 1)


def pic_point(field: NumberField, d: float, x: float = 0.0) -> ArakelovDivisor:
    """The degree-d family representative: (Z, d) over Q, or the divisor with
    trivial ideal and infinite coefficients (d/2 - x, d/2 + x) over a real
    quadratic field of class number one."""
    if field.degree == 1:
        return ArakelovDivisor(field.ring_of_integers(), (float(d),))
    if supports_pic_points(field):
        return ArakelovDivisor(field.ring_of_integers(),
                               (d / 2.0 - x, d / 2.0 + x))
    raise ValidationError(
        f"{field.label} has no built-in Picard parametrization; construct "
        "divisors explicitly from an ideal and infinite coefficients")


@dataclass(frozen=True)
class DivisorClassPoint:
    """A point of Pic^(d) in the scan parametrization."""
    field: NumberField
    d: float
    x: float
    representative: ArakelovDivisor


def divisor_class_point(field: NumberField, d: float, x: float) -> DivisorClassPoint:
    return DivisorClassPoint(field, float(d), float(x), pic_point(field, d, x))
