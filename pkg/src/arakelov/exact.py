"""Exact rational matrix algebra, integer Hermite normal form, polynomial tools.

Everything here works on tuples of fractions.Fraction and Python big ints.
Matrices are tiny (degree <= 8 fields, rank*degree <= 12 lattices), so plain
Gaussian elimination over Q is both exact and fast enough.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import ValidationError

Row = tuple[Fraction, ...]
Mat = tuple[Row, ...]


def mat(rows) -> Mat:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def matmul(a: Mat, b: Mat) -> Mat:
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(ra, cb)) for cb in bt) for ra in a
    )


def vecmat(v: Row, m: Mat) -> Row:
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


def det(m: Mat) -> Fraction:
    n = len(m)
    a = [list(row) for row in m]
    sign = 1
    d = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        d *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                factor = a[r][col] * inv
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return sign * d


def inverse(m: Mat) -> Mat:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValidationError("singular matrix has no inverse")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def solve(m: Mat, v: Row) -> Row:
    """Solve x @ m = v exactly (row-vector convention)."""
    return vecmat(v, inverse(m))


def hnf(rows, n: int) -> Mat:
    """Canonical row Hermite normal form of a rank-n lattice in Q^n.

    Input rows (any number >= n) generate the lattice over Z. The result is
    upper triangular with positive diagonal and off-diagonal entries reduced
    into [0, pivot), which makes it a unique canonical form: two generating
    sets of the same lattice produce identical matrices.
    """
    rows = [list(r) for r in rows]
    if not rows or any(len(r) != n for r in rows):
        raise ValidationError("hnf needs rows of a fixed width")
    denom = lcm(*(x.denominator for r in rows for x in r)) if rows else 1
    a = [[int(x * denom) for x in r] for r in rows]
    m = len(a)
    r = 0
    for col in range(n):
        # Chain gcd steps until at most one row at or below r has a nonzero
        # entry in this column.
        while True:
            live = [i for i in range(r, m) if a[i][col] != 0]
            if len(live) <= 1:
                break
            live.sort(key=lambda i: abs(a[i][col]))
            i0 = live[0]
            for i in live[1:]:
                q = a[i][col] // a[i0][col]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[i0])]
        live = [i for i in range(r, m) if a[i][col] != 0]
        if not live:
            continue
        i0 = live[0]
        a[r], a[i0] = a[i0], a[r]
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][col] // a[r][col]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    if r != n:
        raise ValidationError("generators do not span a full-rank lattice")
    return tuple(
        tuple(Fraction(x, denom) for x in row) for row in a[:n]
    )


def in_lattice(h: Mat, v: Row) -> bool:
    """Is v an integer combination of the rows of the upper-triangular HNF h?"""
    n = len(h)
    x = [Fraction(0)] * n
    for j in range(n):
        acc = v[j] - sum(x[i] * h[i][j] for i in range(j))
        q = acc / h[j][j]
        if q.denominator != 1:
            return False
        x[j] = q
    return True


def lattice_coordinates(h: Mat, v: Row) -> Row | None:
    """Integer coordinates of v in the HNF basis h, or None if not a member."""
    n = len(h)
    x = [Fraction(0)] * n
    for j in range(n):
        acc = v[j] - sum(x[i] * h[i][j] for i in range(j))
        q = acc / h[j][j]
        if q.denominator != 1:
            return None
        x[j] = q
    return tuple(x)


# -- polynomial helpers (coefficients ascending, exact) ----------------------

def poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def poly_mod(a, p):
    """a mod p for monic p; returns coefficients of length deg(p)."""
    n = len(p) - 1
    a = list(a)
    for i in range(len(a) - 1, n - 1, -1):
        c = a[i]
        if c:
            a[i] = Fraction(0)
            for j in range(n):
                a[i - n + j] -= c * p[j]
    out = a[:n]
    out += [Fraction(0)] * (n - len(out))
    return out


def poly_eval(coeffs, z, convert=None):
    """Horner evaluation; `convert` maps exact coefficients into z's arithmetic
    (e.g. float, or an mpf constructor). Defaults to float conversion."""
    if convert is None:
        convert = float
    acc = 0 * z
    for c in reversed(coeffs):
        acc = acc * z + convert(c)
    return acc


def newton_power_sums(poly, count: int):
    """Traces s_k = sum over roots of alpha^k, k = 0..count-1, for monic poly.

    Newton's identities on the elementary symmetric functions, all exact.
    """
    n = len(poly) - 1
    if poly[n] != 1:
        raise ValidationError("newton_power_sums expects a monic polynomial")
    # e[i] = (-1)^i * coefficient of x^(n-i)
    e = [Fraction(0)] * (n + 1)
    for i in range(n + 1):
        e[i] = (-1) ** i * Fraction(poly[n - i])
    s = [Fraction(0)] * count
    if count > 0:
        s[0] = Fraction(n)
    for k in range(1, count):
        acc = Fraction(0)
        for i in range(1, min(k, n) + 1):
            sign = -1 if i % 2 == 0 else 1
            acc += sign * e[i] * (s[k - i] if k - i > 0 else 0)
        if k <= n:
            sign = -1 if k % 2 == 0 else 1
            acc += sign * e[k] * k
        s[k] = acc
    return s
