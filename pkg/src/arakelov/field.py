"""Number fields, elements and fractional ideals.

Built-in exact support covers Q and quadratic fields; other small-degree
fields are ingested from descriptor documents (see `field_from_descriptor`).
Ideals are stored as canonical upper-triangular rational Hermite bases, so
equality, membership and norms are exact. Embeddings are computed by
simultaneous root iteration and refined with mpmath, giving every field both
double-precision and ~50-digit images of its integral basis.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import mpmath

from . import exact
from .errors import NumericError, ValidationError

_MP_DPS = 50


# -- elementary number theory -------------------------------------------------

def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a/n), defined for all integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result *= (-1) ** twos
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _is_squarefree(m: int) -> bool:
    m = abs(m)
    if m == 0:
        return False
    p = 2
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        if m % p == 0:
            m //= p
        p += 1 if p == 2 else 2
    return True


def _signed_divisors(c: int):
    c = abs(c)
    out = []
    for d in range(1, isqrt(c) + 1):
        if c % d == 0:
            out.extend((d, -d, c // d, -(c // d)))
    return sorted(set(out), key=abs)


def _reducible_screen(poly: tuple[int, ...]) -> bool:
    """Cheap reducibility screen: rational roots plus monic quadratic factors.

    Catching every reducible polynomial is a non-goal; this covers the
    descriptor mistakes that actually happen at small degree.
    """
    n = len(poly) - 1
    if n <= 1:
        return False
    if poly[0] == 0:
        return True
    for r in _signed_divisors(poly[0]):
        if sum(c * r ** k for k, c in enumerate(poly)) == 0:
            return True
    if n >= 4:
        bound = 2 * (1 + max(abs(c) for c in poly))
        for c0 in _signed_divisors(poly[0]):
            for b in range(-bound, bound + 1):
                divisor = [Fraction(c0), Fraction(b), Fraction(1)]
                rem = exact.poly_mod([Fraction(c) for c in poly], divisor)
                if all(x == 0 for x in rem):
                    return True
    return False


# -- root finding -------------------------------------------------------------

def _durand_kerner(poly: tuple[int, ...]) -> list[complex]:
    """All roots of a monic integer polynomial by simultaneous iteration.

    Deterministic start on the circle of radius 1 + max|coeff|; converges
    comfortably for the tame, small-degree polynomials this library accepts.
    """
    n = len(poly) - 1
    if n == 1:
        return [complex(-poly[0])]
    coeffs = [float(c) for c in poly]

    def val(z: complex) -> complex:
        acc = 0j
        for c in reversed(coeffs):
            acc = acc * z + c
        return acc

    radius = 1.0 + max(abs(c) for c in coeffs[:-1])
    roots = [radius * cmath.exp(2j * math.pi * (k + 0.35) / n) for k in range(n)]
    for _ in range(500):
        shift = 0.0
        new = []
        for k, z in enumerate(roots):
            denom = 1.0 + 0j
            for j, w in enumerate(roots):
                if j != k:
                    denom *= (z - w)
            step = val(z) / denom
            new.append(z - step)
            shift = max(shift, abs(step) / (1.0 + abs(z)))
        roots = new
        if shift < 1e-14:
            break
    else:
        raise NumericError(f"root iteration did not converge for {poly}")
    return roots


def _refine_roots_mp(poly: tuple[int, ...], roots: list[complex]):
    """Newton-polish each root to ~50 digits; classify real vs complex."""
    with mpmath.workdps(_MP_DPS + 10):
        p = [mpmath.mpf(c) for c in poly]
        dp = [k * p[k] for k in range(1, len(p))]

        def ev(cs, z):
            acc = mpmath.mpc(0)
            for c in reversed(cs):
                acc = acc * z + c
            return acc

        refined = []
        for z0 in roots:
            z = mpmath.mpc(z0)
            for _ in range(60):
                fz = ev(p, z)
                step = fz / ev(dp, z)
                z = z - step
                if abs(step) < mpmath.mpf(10) ** (-_MP_DPS - 5) * (1 + abs(z)):
                    break
            if abs(z.imag) < mpmath.mpf(10) ** (-30) * (1 + abs(z)):
                z = mpmath.mpc(z.real, 0)
            refined.append(z)
    return refined


# -- core classes -------------------------------------------------------------

class FieldElement:
    """Element of a number field in integral-basis coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field: "NumberField", coords):
        self.field = field
        self.coords = tuple(Fraction(c) for c in coords)
        if len(self.coords) != field.degree:
            raise ValidationError("coordinate length must equal the degree")

    def __repr__(self):
        return f"FieldElement({self.field.label}, {list(self.coords)})"

    def __eq__(self, other):
        return (isinstance(other, FieldElement)
                and self.field.same_field(other.field)
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.field.label, self.coords))

    def __add__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field,
                            tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field,
                            tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field, self.field.mul_coords(self.coords, other.coords))

    __radd__ = __add__
    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ValidationError("zero has no inverse")
        rows = self.field.mul_matrix(self.coords)
        inv_coords = exact.solve(rows, self.field.one_coords)
        return FieldElement(self.field, inv_coords)

    def norm(self) -> Fraction:
        return exact.det(self.field.mul_matrix(self.coords))

    def trace(self) -> Fraction:
        return sum(c * t for c, t in zip(self.coords, self.field.trace_vector))

    def embeddings(self) -> tuple[complex, ...]:
        """Images under the r1 + r2 chosen infinite places."""
        return tuple(
            sum(float(c) * e for c, e in zip(self.coords, row))
            for row in self.field.emb_by_place
        )


class FractionalIdeal:
    """Full-rank Z-lattice in the field, canonical upper-triangular basis."""

    __slots__ = ("field", "basis_matrix", "norm")

    def __init__(self, field: "NumberField", rows, _canonical=False):
        self.field = field
        n = field.degree
        self.basis_matrix = rows if _canonical else exact.hnf(rows, n)
        d = Fraction(1)
        for i in range(n):
            d *= self.basis_matrix[i][i]
        self.norm = abs(d)

    def __repr__(self):
        return f"FractionalIdeal({self.field.label}, {self.basis_matrix})"

    def __eq__(self, other):
        return (isinstance(other, FractionalIdeal)
                and self.field.same_field(other.field)
                and self.basis_matrix == other.basis_matrix)

    def __hash__(self):
        return hash((self.field.label, self.basis_matrix))

    def basis_elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, row) for row in self.basis_matrix)

    def contains(self, element: FieldElement) -> bool:
        return exact.in_lattice(self.basis_matrix, element.coords)

    def contains_one(self) -> bool:
        return exact.in_lattice(self.basis_matrix, self.field.one_coords)


@dataclass(frozen=True)
class UnitData:
    """A fundamental unit (for unit rank 1) and the regulator."""
    unit: FieldElement
    regulator: float


class NumberField:
    """Immutable number field data: basis, embeddings, trace form, invariants."""

    def __init__(self, poly, integral_basis_rows, w: int, label: str,
                 unit_data: UnitData | None = None,
                 class_number: int | None = None,
                 class_representatives=None,
                 dedekind_coeffs=None):
        poly = tuple(int(c) for c in poly)
        if poly[-1] != 1:
            raise ValidationError("defining polynomial must be monic")
        n = len(poly) - 1
        if n < 1:
            raise ValidationError("defining polynomial must have positive degree")
        if n > 1 and _reducible_screen(poly):
            raise ValidationError(f"polynomial {poly} is reducible")
        self.defining_polynomial = poly
        self.degree = n
        self.label = label
        self.roots_of_unity = int(w)

        # integral basis: rows of power-basis coefficients
        self.basis_power = exact.mat(integral_basis_rows)
        if len(self.basis_power) != n or any(len(r) != n for r in self.basis_power):
            raise ValidationError("integral basis must be a square matrix of size degree")
        if exact.det(self.basis_power) == 0:
            raise ValidationError("integral basis rows are linearly dependent")
        self.power_to_basis = exact.inverse(self.basis_power)
        self.one_coords = exact.vecmat(
            tuple([Fraction(1)] + [Fraction(0)] * (n - 1)), self.power_to_basis)

        # multiplication table and traces, all exact
        pf = [Fraction(c) for c in poly]
        self._mult_table = []
        for i in range(n):
            row = []
            for j in range(n):
                prod = exact.poly_mod(
                    exact.poly_mul(self.basis_power[i], self.basis_power[j]), pf)
                row.append(exact.vecmat(tuple(prod), self.power_to_basis))
            self._mult_table.append(tuple(row))
        self._mult_table = tuple(self._mult_table)

        sums = exact.newton_power_sums(pf, 2 * n - 1)
        smat = tuple(tuple(sums[i + j] for j in range(n)) for i in range(n))
        self.trace_matrix = exact.matmul(
            exact.matmul(self.basis_power, smat), exact.transpose(self.basis_power))
        self.trace_vector = tuple(
            sum(self.basis_power[i][k] * sums[k] for k in range(n)) for i in range(n))
        disc = exact.det(self.trace_matrix)
        if disc.denominator != 1:
            raise ValidationError(
                f"trace form determinant {disc} is not an integer; "
                "the supplied basis is not an order")
        self.discriminant = int(disc)
        if self.discriminant == 0:
            raise ValidationError("discriminant is zero")

        # embeddings: real roots ascending first, then one root per conjugate
        # pair with positive imaginary part, ordered by (Re, Im). mpmath
        # rounds every operation (even mpc construction) to the *ambient*
        # precision, so all of this stays inside one high-precision context.
        raw = _durand_kerner(poly)
        refined = _refine_roots_mp(poly, raw)
        with mpmath.workdps(_MP_DPS + 10):
            reals = sorted([z for z in refined if z.imag == 0], key=lambda z: z.real)
            complexes = [z if z.imag > 0 else mpmath.mpc(z.real, -z.imag)
                         for z in refined if z.imag != 0]
            complexes = sorted(complexes, key=lambda z: (z.real, z.imag))
            pairs = []
            for z in complexes:
                if not any(abs(z - p) < mpmath.mpf(10) ** (-30) * (1 + abs(z))
                           for p in pairs):
                    pairs.append(z)
        self.r1 = len(reals)
        self.r2 = len(pairs)
        if self.r1 + 2 * self.r2 != n:
            raise NumericError("embedding classification failed: r1 + 2 r2 != degree")
        self._roots_mp = tuple(reals + pairs)
        self.embeddings = tuple(complex(z) for z in self._roots_mp)
        for z in self.embeddings:
            if abs(exact.poly_eval(poly, complex(z))) > 1e-12 * (1 + abs(z)) ** n:
                raise NumericError(f"root {z} fails the residual bound")

        # per-place embedding values of the integral basis (complex, double)
        self.emb_by_place = tuple(
            tuple(exact.poly_eval(row, complex(z)) for row in self.basis_power)
            for z in self.embeddings
        )
        self._emb_mp_cache = None

        self.unit_data = unit_data
        self.class_number = class_number
        self.class_representatives = class_representatives or ()
        self.dedekind_coeffs = tuple(dedekind_coeffs) if dedekind_coeffs else None
        self._ring = FractionalIdeal(self, exact.identity(n))
        self._codifferent = None
        self._spf_cache: dict[int, list[int]] = {}

    # -- identity ------------------------------------------------------------

    def same_field(self, other: "NumberField") -> bool:
        return self is other or (
            self.defining_polynomial == other.defining_polynomial
            and self.basis_power == other.basis_power)

    def __repr__(self):
        return f"NumberField({self.label})"

    # -- element helpers -------------------------------------------------------

    def element(self, coords) -> FieldElement:
        return FieldElement(self, coords)

    def one(self) -> FieldElement:
        return FieldElement(self, self.one_coords)

    def zero(self) -> FieldElement:
        return FieldElement(self, [0] * self.degree)

    def coerce(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if not self.same_field(value.field):
                raise ValidationError("element belongs to a different field")
            return value
        if isinstance(value, (int, Fraction)):
            return FieldElement(self, tuple(Fraction(value) * c for c in self.one_coords))
        raise ValidationError(f"cannot coerce {value!r} into {self.label}")

    def mul_coords(self, a, b):
        n = self.degree
        out = [Fraction(0)] * n
        for i in range(n):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(n):
                bj = b[j]
                if bj == 0:
                    continue
                t = self._mult_table[i][j]
                c = ai * bj
                for k in range(n):
                    out[k] += c * t[k]
        return tuple(out)

    def mul_matrix(self, coords) -> exact.Mat:
        """Rows: coordinates of (element * b_i) for each basis element b_i."""
        n = self.degree
        rows = []
        for i in range(n):
            row = [Fraction(0)] * n
            for j in range(n):
                cj = coords[j]
                if cj == 0:
                    continue
                t = self._mult_table[i][j]
                for k in range(n):
                    row[k] += cj * t[k]
            rows.append(tuple(row))
        return tuple(rows)

    # -- high-precision embeddings --------------------------------------------

    def emb_by_place_mp(self):
        """Per-place mpmath images of the integral basis (~50 digits).

        Used when a lattice basis must be rebuilt from exact coordinates whose
        embedded values nearly cancel (skew metrics, long unit translations).
        """
        if self._emb_mp_cache is None:
            with mpmath.workdps(_MP_DPS):
                rows = []
                for z in self._roots_mp:
                    vals = []
                    for row in self.basis_power:
                        acc = mpmath.mpc(0)
                        for c in reversed(row):
                            acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
                        vals.append(acc)
                    rows.append(tuple(vals))
            self._emb_mp_cache = tuple(rows)
        return self._emb_mp_cache

    # -- ideals ----------------------------------------------------------------

    def ring_of_integers(self) -> FractionalIdeal:
        return self._ring

    def principal_ideal(self, f: FieldElement) -> FractionalIdeal:
        f = self.coerce(f)
        if f.is_zero():
            raise ValidationError("zero generates no fractional ideal")
        return FractionalIdeal(self, self.mul_matrix(f.coords))

    def codifferent(self) -> FractionalIdeal:
        """Trace dual of the ring of integers; its norm is 1/|discriminant|."""
        if self._codifferent is None:
            self._codifferent = FractionalIdeal(self, exact.inverse(self.trace_matrix))
        return self._codifferent

    def regulator(self) -> float | None:
        return self.unit_data.regulator if self.unit_data else None


# -- ideal arithmetic ----------------------------------------------------------

def ideal_mul(a: FractionalIdeal, b: FractionalIdeal) -> FractionalIdeal:
    if not a.field.same_field(b.field):
        raise ValidationError("ideals live in different fields")
    field = a.field
    rows = []
    for ra in a.basis_matrix:
        for rb in b.basis_matrix:
            rows.append(field.mul_coords(ra, rb))
    return FractionalIdeal(field, rows)


def trace_dual(a: FractionalIdeal) -> FractionalIdeal:
    """The lattice {y : Tr(x y) in Z for all x in a}; equals codifferent * a^-1."""
    field = a.field
    m = exact.matmul(field.trace_matrix, exact.transpose(a.basis_matrix))
    return FractionalIdeal(field, exact.inverse(m))


def ideal_inverse(a: FractionalIdeal) -> FractionalIdeal:
    """Inverse ideal, computed as the trace dual of (codifferent * a)."""
    return trace_dual(ideal_mul(a.field.codifferent(), a))


def ideal_contains_one(a: FractionalIdeal) -> bool:
    return a.contains_one()


# -- constructors ---------------------------------------------------------------

@lru_cache(maxsize=None)
def rational_field() -> NumberField:
    """The field Q, as the degree-1 field with defining polynomial x."""
    return NumberField((0, 1), ((Fraction(1),),), w=2, label="Q",
                       class_number=1)


def _continued_fraction_unit(m: int):
    """Fundamental unit of the real quadratic order Z[omega] via the continued
    fraction of -conj(omega); returns ((x, y), regulator) with unit = x + y*omega.

    Every unit u = x + y*omega > 1 with |N(u)| = 1 has x/y among the
    convergents of -conj(omega), and the first hit is the fundamental unit.
    All convergent arithmetic is exact.
    """
    if m % 4 == 1:
        p_surd, q_surd, d_surd = -1, 2, m          # (sqrt(m) - 1) / 2
        def unit_norm(x, y):
            return x * x + x * y - y * y * (m - 1) // 4
    else:
        p_surd, q_surd, d_surd = 0, 2, 4 * m       # sqrt(m) = (0 + sqrt(4m)) / 2
        def unit_norm(x, y):
            return x * x - m * y * y
    r_isqrt = isqrt(d_surd)

    def floor_surd(p, q):
        return (p + r_isqrt) // q if q > 0 else (p + r_isqrt + 1) // q

    p_prev, p_cur = 1, None
    q_prev, q_cur = 0, None
    pk, qk = p_surd, q_surd
    for _ in range(100000):
        a = floor_surd(pk, qk)
        if p_cur is None:
            p_cur, q_cur = a, 1
        else:
            p_cur, p_prev = a * p_cur + p_prev, p_cur
            q_cur, q_prev = a * q_cur + q_prev, q_cur
        if q_cur >= 1:
            norm = unit_norm(p_cur, q_cur)
            if norm in (1, -1) and (p_cur, q_cur) != (1, 0):
                x, y = p_cur, q_cur
                sigma_omega = (1 + math.sqrt(m)) / 2 if m % 4 == 1 else math.sqrt(m)
                value = x + y * sigma_omega
                reg = math.log(abs(value))
                if reg < 0:  # the other embedding carries the growth
                    reg = -reg
                return (x, y), reg
        pk = a * qk - pk
        qk = (d_surd - pk * pk) // qk
        if qk == 0:
            raise NumericError(f"continued fraction of sqrt({m}) degenerated")
    raise NumericError(f"no fundamental unit found for m={m} within budget")


def _class_number_imaginary(disc: int) -> int:
    """Class number of an imaginary quadratic field by counting reduced forms.

    Reduced positive forms (a, b, c) of discriminant disc < 0 satisfy
    |b| <= a <= c with b >= 0 whenever |b| = a or a = c; each class has
    exactly one such representative.
    """
    count = 0
    for a in range(1, isqrt(-disc // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            count += 1
    return count


def _class_number_real(disc: int, regulator: float) -> int:
    """Analytic class number of a real quadratic field, rounded to an integer."""
    acc = 0.0
    for a in range(1, disc):
        chi = kronecker_symbol(disc, a)
        if chi:
            acc -= chi * math.log(math.sin(math.pi * a / disc))
    l_value = acc / math.sqrt(disc)
    h = l_value * math.sqrt(disc) / (2.0 * regulator)
    rounded = round(h)
    if abs(h - rounded) > 1e-4 or rounded < 1:
        raise NumericError(f"class number estimate {h} for disc {disc} is not near an integer")
    return rounded


@lru_cache(maxsize=None)
def quadratic_field(m: int) -> NumberField:
    """The quadratic field Q(sqrt(m)) for squarefree m != 0, 1."""
    if m in (0, 1):
        raise ValidationError("m must differ from 0 and 1")
    if not _is_squarefree(m):
        raise ValidationError(f"m={m} is not squarefree")
    if m % 4 == 1:
        poly = (-(m - 1) // 4, -1, 1)             # x^2 - x - (m-1)/4, root (1+sqrt m)/2
        basis = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    else:
        poly = (-m, 0, 1)
        basis = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    if m > 0:
        w = 2
    elif m == -1:
        w = 4
    elif m == -3:
        w = 6
    else:
        w = 2
    label = f"Q(sqrt({m}))"
    fld = NumberField(poly, basis, w=w, label=label)
    if m > 0:
        (x, y), reg = _continued_fraction_unit(m)
        unit = FieldElement(fld, (Fraction(x), Fraction(y)))
        fld.unit_data = UnitData(unit=unit, regulator=reg)
        fld.class_number = _class_number_real(fld.discriminant, reg)
    else:
        fld.class_number = _class_number_imaginary(fld.discriminant)
    expected_disc = m if m % 4 == 1 else 4 * m
    if fld.discriminant != expected_disc:
        raise NumericError(
            f"discriminant sanity check failed: {fld.discriminant} != {expected_disc}")
    return fld


def _parse_rational(token: str) -> Fraction:
    token = token.strip()
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad rational literal {token!r}") from exc


def _parse_poly_string(text: str, n: int) -> tuple[Fraction, ...]:
    """Parse '1/2*x^2 - x + 3' style strings into ascending coefficients."""
    s = text.replace("-", "+-").replace(" ", "")
    coeffs = [Fraction(0)] * n
    for term in s.split("+"):
        if not term:
            continue
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        if "x" in term:
            head, _, tail = term.partition("x")
            coeff = _parse_rational(head.rstrip("*")) if head.rstrip("*") else Fraction(1)
            power = int(tail[1:]) if tail.startswith("^") else 1 if not tail else None
            if power is None or power >= n:
                raise ValidationError(f"bad term {term!r} in basis polynomial")
        else:
            coeff = _parse_rational(term)
            power = 0
        coeffs[power] += -coeff if neg else coeff
    return tuple(coeffs)


def field_from_descriptor(descriptor) -> NumberField:
    """Build a field from a descriptor document (dict or JSON file path).

    Keys: `polynomial` (monic, integer, ascending), optional `integral_basis`
    (polynomial strings in x), `w` (required beyond degree 2), optional
    `units` (coordinate arrays), `class_representatives` (rational matrices),
    `dedekind_coefficients` (integers), `name`.
    """
    if isinstance(descriptor, (str, bytes)):
        import json
        try:
            with open(descriptor, "r", encoding="utf-8") as fh:
                descriptor = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read descriptor: {exc}") from exc
    if not isinstance(descriptor, dict):
        raise ValidationError("descriptor must be a mapping or a path to one")
    try:
        poly = tuple(int(c) for c in descriptor["polynomial"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("descriptor needs an integer `polynomial` array") from exc
    n = len(poly) - 1
    if n < 1 or poly[-1] != 1:
        raise ValidationError("descriptor polynomial must be monic of positive degree")
    if "integral_basis" in descriptor:
        rows = [_parse_poly_string(s, n) for s in descriptor["integral_basis"]]
    else:
        rows = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    if n > 2:
        if "w" not in descriptor:
            raise ValidationError("descriptor must give the roots-of-unity count `w`")
        w = int(descriptor["w"])
    else:
        w = int(descriptor.get("w", 2))
    label = descriptor.get("name") or "Q[x]/(" + ",".join(map(str, poly)) + ")"
    fld = NumberField(poly, rows, w=w, label=label,
                      dedekind_coeffs=descriptor.get("dedekind_coefficients"))
    if n == 2 and "w" not in descriptor:
        fld.roots_of_unity = {-4: 4, -3: 6}.get(fld.discriminant, 2)
    if descriptor.get("units"):
        units = [FieldElement(fld, [_parse_rational(str(c)) for c in u])
                 for u in descriptor["units"]]
        rank = fld.r1 + fld.r2 - 1
        if rank == 1 and len(units) == 1:
            vals = units[0].embeddings()
            mults = [1] * fld.r1 + [2] * fld.r2
            logs = [m * math.log(abs(v)) for m, v in zip(mults, vals)]
            reg = abs(logs[0])
            fld.unit_data = UnitData(unit=units[0], regulator=reg)
        elif rank > 1 and len(units) == rank:
            vals = [[m * math.log(abs(v)) for m, v in
                     zip([1] * fld.r1 + [2] * fld.r2, u.embeddings())][:rank]
                    for u in units]
            import numpy as np
            reg = abs(float(np.linalg.det(np.array(vals))))
            fld.unit_data = UnitData(unit=units[0], regulator=reg)
    if descriptor.get("class_representatives"):
        mats = []
        for rows_txt in descriptor["class_representatives"]:
            rows_rat = [[_parse_rational(str(x)) for x in r] for r in rows_txt]
            mats.append(FractionalIdeal(fld, rows_rat))
        fld.class_representatives = tuple(mats)
    if "class_number" in descriptor:
        fld.class_number = int(descriptor["class_number"])
    return fld


# -- Dedekind zeta coefficients -------------------------------------------------

def _smallest_prime_factors(limit: int) -> list[int]:
    spf = list(range(limit + 1))
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == p:
            for q in range(p * p, limit + 1, p):
                if spf[q] == q:
                    spf[q] = p
    return spf


def dedekind_coefficients(field: NumberField, n_terms: int) -> list[int]:
    """a_k = number of integral ideals of norm k, for k = 1..n_terms.

    Built multiplicatively from the splitting of primes, read off the
    Kronecker symbol of the discriminant. Degree <= 2 only; other fields must
    carry descriptor-supplied coefficients.
    """
    if field.degree == 1:
        return [1] * n_terms
    if field.degree != 2:
        if field.dedekind_coeffs is not None:
            if len(field.dedekind_coeffs) < n_terms:
                raise ValidationError(
                    f"descriptor provides {len(field.dedekind_coeffs)} Dedekind "
                    f"coefficients, {n_terms} requested")
            return list(field.dedekind_coeffs[:n_terms])
        raise ValidationError(
            "Dedekind coefficients are computed only for degree <= 2; supply "
            "them in the field descriptor for higher degree")
    disc = field.discriminant
    spf = field._spf_cache.get("spf")
    if spf is None or len(spf) <= n_terms:
        spf = _smallest_prime_factors(n_terms)
        field._spf_cache["spf"] = spf
    coeffs = [0] * (n_terms + 1)
    coeffs[1] = 1
    chi_cache: dict[int, int] = {}
    for k in range(2, n_terms + 1):
        p = spf[k]
        e = 1
        rest = k // p
        while rest % p == 0:
            rest //= p
            e += 1
        chi = chi_cache.get(p)
        if chi is None:
            chi = kronecker_symbol(disc, p)
            chi_cache[p] = chi
        if chi == 1:
            local = e + 1
        elif chi == 0:
            local = 1
        else:
            local = 1 if e % 2 == 0 else 0
        coeffs[k] = coeffs[rest] * local
    return coeffs[1:]
