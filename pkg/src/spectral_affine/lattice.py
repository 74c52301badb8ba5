"""Exact 2x2 integer / rational linear algebra and number-theoretic helpers.

Vectors are 2-tuples and matrices are row-major 2-tuples of rows, holding
either ``int`` or :class:`fractions.Fraction` entries.  Everything here is
pure and exact; the only floating point lives in the test oracles.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Tuple, Union

from .errors import InvalidDigitSet, InvalidInput, SingularMatrix

Rat = Union[int, Fraction]
Vec = Tuple[Rat, Rat]
Mat = Tuple[Tuple[Rat, Rat], Tuple[Rat, Rat]]

IDENTITY: Mat = ((1, 0), (0, 1))


def gcd4(a1: int, a2: int, b1: int, b2: int) -> int:
    if a1 == a2 == b1 == b2 == 0:
        raise InvalidDigitSet("all four digit generators are zero")
    return gcd(gcd(a1, a2), gcd(b1, b2))


def bezout(t1: int, t2: int) -> tuple[int, int, int]:
    """Return ``(g, p, q)`` with ``p*t1 + q*t2 == g == gcd(t1, t2) > 0``.

    The solution is canonical: ``q`` is reduced into ``(-m/2, m/2]`` where
    ``m = |t1|/g`` (smallest ``|q|``, ties going to ``q >= 0``).  When
    ``t1 == 0`` the value of ``q`` is forced and ``p`` is reduced the same way.
    """
    if t1 == 0 and t2 == 0:
        raise InvalidInput("bezout of (0, 0) is undefined")
    # iterative extended Euclid on absolute values
    old_r, r = abs(t1), abs(t2)
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    g = old_r
    p = old_s * (1 if t1 >= 0 else -1)
    q = old_t * (1 if t2 >= 0 else -1)
    if t1 != 0:
        m = abs(t1) // g
        q = _centered(q, m)
        p = (g - q * t2) // t1
    else:
        m = abs(t2) // g
        p = _centered(p, m)
        q = (g - p * t1) // t2
    return g, p, q


def _centered(x: int, m: int) -> int:
    """Representative of ``x mod m`` in ``(-m/2, m/2]``."""
    if m == 1:
        return 0
    x %= m
    if 2 * x > m:
        x -= m
    return x


def two_adic(n: int) -> tuple[int, int]:
    """Split a nonzero ``n`` as ``2**e * odd``; returns ``(e, odd)``."""
    if n == 0:
        raise InvalidInput("2-adic valuation of 0")
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    return e, n


# -- matrices ---------------------------------------------------------------

def mat(a: Rat, b: Rat, c: Rat, d: Rat) -> Mat:
    return ((a, b), (c, d))


def det(m: Mat) -> Rat:
    (a, b), (c, d) = m
    return a * d - b * c


def trace(m: Mat) -> Rat:
    return m[0][0] + m[1][1]


def transpose(m: Mat) -> Mat:
    (a, b), (c, d) = m
    return ((a, c), (b, d))


def matmul(x: Mat, y: Mat) -> Mat:
    (a, b), (c, d) = x
    (e, f), (g, h) = y
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def apply(m: Mat, v: Vec) -> Vec:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def adjugate(m: Mat) -> Mat:
    (a, b), (c, d) = m
    return ((d, -b), (-c, a))


def scale(m: Mat, k: Rat) -> Mat:
    return tuple(tuple(k * x for x in row) for row in m)  # type: ignore[return-value]


def inverse(m: Mat) -> Mat:
    """Exact inverse; entries become Fractions (ints when integral)."""
    dt = det(m)
    if dt == 0:
        raise SingularMatrix(f"matrix {m} is singular")
    return tuple(tuple(_simplify(Fraction(x) / dt) for x in row) for row in adjugate(m))  # type: ignore[return-value]


def matpow(m: Mat, k: int) -> Mat:
    if k < 0:
        return matpow(inverse(m), -k)
    result: Mat = IDENTITY
    base = m
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def is_integer_matrix(m: Mat) -> bool:
    return all(_is_int(x) for row in m for x in row)


def as_int_matrix(m: Mat) -> Mat:
    if not is_integer_matrix(m):
        raise InvalidInput(f"matrix {m} has non-integer entries")
    return tuple(tuple(int(x) for x in row) for row in m)  # type: ignore[return-value]


def inf_norm(m: Mat) -> Rat:
    """Operator norm induced by the max-norm: largest absolute row sum."""
    return max(abs(row[0]) + abs(row[1]) for row in m)


# -- vectors ----------------------------------------------------------------

def vadd(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def vsub(u: Vec, v: Vec) -> Vec:
    return (u[0] - v[0], u[1] - v[1])


def vscale(v: Vec, k: Rat) -> Vec:
    return (k * v[0], k * v[1])


def dot(u: Vec, v: Vec) -> Rat:
    return u[0] * v[0] + u[1] * v[1]


def vec_inf_norm(v: Vec) -> Rat:
    return max(abs(v[0]), abs(v[1]))


def is_integer_vector(v: Vec) -> bool:
    return _is_int(v[0]) and _is_int(v[1])


def normalize_vec(v: Vec) -> Vec:
    """Collapse integral Fractions to ints so that equal vectors hash equally."""
    return (_simplify(v[0]), _simplify(v[1]))


def common_denominator(vs) -> int:
    den = 1
    for v in vs:
        for x in v:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
    return den


# -- expansiveness ------------------------------------------------------------

def is_expansive(m: Mat) -> bool:
    """Both eigenvalues strictly outside the unit circle.

    Schur-Cohn (Jury) test on the reciprocal characteristic polynomial
    ``det*z**2 - tr*z + 1``: its roots are the inverse eigenvalues, so they
    must lie strictly inside the unit disc.  Pure integer comparisons.
    """
    t, dt = trace(m), det(m)
    if dt == 0:
        return False
    if dt > 0:
        return dt > 1 and abs(t) < dt + 1
    return -dt > 1 and abs(t) < -dt - 1


def _is_int(x: Rat) -> bool:
    return isinstance(x, int) or x.denominator == 1


def _simplify(x: Rat) -> Rat:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def fmt_rat(x: Rat) -> str:
    """Serialize as ``num/den`` (lowest terms, den > 0); integers as ``n/1``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, bool):
        raise InvalidInput(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational: {s!r}") from exc
    raise InvalidInput(f"not a rational: {s!r}")
