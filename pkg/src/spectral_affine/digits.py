"""Four-element planar digit sets and their unimodular canonical form.

A :class:`DigitSet4` is ``{0, a, b, -a-b}`` for non-collinear integer
generators ``a = (alpha1, alpha2)`` and ``b = (beta1, beta2)``.  After
dividing out the common gcd, an integer unimodular ``Q`` moves the set to

    {(0, 0), (alpha, 0), (omega, 2**eta * beta), (-alpha - omega, -2**eta * beta)}

with ``alpha``, ``beta`` odd and positive; :func:`canonicalize` returns that
``Q`` together with the conjugated matrix ``Q M Q^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import gcd

from . import lattice as la
from .errors import CollinearDigits, DigitsNotPrimitive, InvalidDigitSet, NotExpansive


@dataclass(frozen=True)
class DigitSet4:
    alpha1: int
    alpha2: int
    beta1: int
    beta2: int

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise InvalidDigitSet(f"{name} must be an integer, got {v!r}")
        if self.cross == 0:
            raise CollinearDigits(
                f"digits {self.a} and {self.b} are collinear (alpha1*beta2 - alpha2*beta1 = 0)"
            )

    @classmethod
    def from_vectors(cls, a, b) -> "DigitSet4":
        return cls(int(a[0]), int(a[1]), int(b[0]), int(b[1]))

    @property
    def a(self) -> tuple[int, int]:
        return (self.alpha1, self.alpha2)

    @property
    def b(self) -> tuple[int, int]:
        return (self.beta1, self.beta2)

    @property
    def cross(self) -> int:
        return self.alpha1 * self.beta2 - self.alpha2 * self.beta1

    def digits(self) -> list[tuple[int, int]]:
        return digits_of(self)

    def transformed(self, m) -> "DigitSet4":
        """Image under an integer matrix (must keep entries integral)."""
        a = la.apply(m, self.a)
        b = la.apply(m, self.b)
        if not (la.is_integer_vector(a) and la.is_integer_vector(b)):
            raise InvalidDigitSet(f"image of {self} under {m} is not integral")
        return DigitSet4.from_vectors(a, b)

    def relabelings(self) -> list["DigitSet4"]:
        """The six ordered choices of two generators among the nonzero digits."""
        vs = digits_of(self)[1:]
        return [DigitSet4.from_vectors(vs[i], vs[j]) for i in range(3) for j in range(3) if i != j]


def digits_of(d: DigitSet4) -> list[tuple[int, int]]:
    """Zero, the alpha vector, the beta vector and their negated sum, in that order."""
    return [(0, 0), d.a, d.b, (-d.alpha1 - d.beta1, -d.alpha2 - d.beta2)]


def normalize(d: DigitSet4) -> tuple[DigitSet4, int]:
    g = la.gcd4(d.alpha1, d.alpha2, d.beta1, d.beta2)
    return DigitSet4(d.alpha1 // g, d.alpha2 // g, d.beta1 // g, d.beta2 // g), g


def eta_of(d: DigitSet4) -> tuple[int, int]:
    """``(eta, gamma)`` with ``alpha1*beta2 - alpha2*beta1 == 2**eta * gamma``, gamma odd."""
    return la.two_adic(d.cross)


@dataclass(frozen=True)
class DigitFrame:
    """The M-independent part of the canonical form.

    ``Q`` maps the digit set onto ``{0, (alpha, 0), (omega, 2**eta*beta), ...}``.
    ``gen_a``/``gen_b`` are the generators that ``Q`` sends to ``(alpha, 0)`` and
    ``(omega, 2**eta*beta)``; they may be a swap of ``D.a``/``D.b``.
    """

    Q: la.Mat
    alpha: int
    beta: int
    omega: int
    eta: int
    gamma: int
    p: int
    q: int
    t1: int
    t2: int
    swapped: bool
    gen_a: tuple[int, int]
    gen_b: tuple[int, int]

    @property
    def Qinv(self) -> la.Mat:
        return la.as_int_matrix(la.inverse(self.Q))

    @property
    def tilde_digits(self) -> DigitSet4:
        return DigitSet4(self.alpha, 0, self.omega, 2**self.eta * self.beta)


def digit_frame(d: DigitSet4, bezout_shift: int = 0) -> DigitFrame:
    """Canonical unimodular frame of a primitive digit set.

    ``bezout_shift = k`` replaces the canonical Bezout pair ``(p, q)`` by
    ``(p + k*t2, q - k*t1)``; verdicts must not depend on it.
    """
    if la.gcd4(d.alpha1, d.alpha2, d.beta1, d.beta2) != 1:
        raise DigitsNotPrimitive(f"gcd of the generators of {d} is not 1; normalize first")
    ga = gcd(d.alpha1, d.alpha2)
    if ga % 2 == 1:
        a, b, swapped = d.a, d.b, False
    else:
        # overall gcd is 1, so the other pair has odd gcd
        a, b, swapped = d.b, d.a, True
    alpha = gcd(a[0], a[1])
    t1, t2 = a[0] // alpha, a[1] // alpha
    _, p, q = la.bezout(t1, t2)
    p, q = p + bezout_shift * t2, q - bezout_shift * t1
    omega = p * b[0] + q * b[1]
    cross = a[0] * b[1] - a[1] * b[0]
    eta, gamma = la.two_adic(cross)
    beta = gamma // alpha
    Q = ((p, q), (-t2, t1))
    if beta < 0:
        # flip the second row so that beta > 0; alpha is a gcd and already positive
        Q = la.matmul(((1, 0), (0, -1)), Q)
        beta = -beta
    return DigitFrame(
        Q=Q, alpha=alpha, beta=beta, omega=omega, eta=eta, gamma=gamma,
        p=p, q=q, t1=t1, t2=t2, swapped=swapped, gen_a=a, gen_b=b,
    )


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical conjugation ``(Mtil, Dtil) = (Q M Q^-1, Q D)``.

    ``g`` records the gcd divided out of the original generators; all other
    fields describe the primitive digit set ``D / g``.
    """

    g: int
    Q: la.Mat
    Mtil: la.Mat
    alpha: int
    beta: int
    omega: int
    eta: int
    gamma: int
    frame: DigitFrame

    @property
    def Dtil(self) -> DigitSet4:
        return self.frame.tilde_digits

    @property
    def scale(self) -> int:
        return 2 ** (self.eta + 1) * self.alpha * self.beta


def canonicalize(m: la.Mat, d: DigitSet4, bezout_shift: int = 0) -> CanonicalForm:
    if not la.is_expansive(m):
        raise NotExpansive(f"matrix {m} is not expansive")
    fr = digit_frame(d, bezout_shift)
    mtil = la.as_int_matrix(la.matmul(la.matmul(fr.Q, m), fr.Qinv))
    return CanonicalForm(
        g=1, Q=fr.Q, Mtil=mtil, alpha=fr.alpha, beta=fr.beta, omega=fr.omega,
        eta=fr.eta, gamma=fr.gamma, frame=fr,
    )


def canonicalize_any(m: la.Mat, d: DigitSet4, bezout_shift: int = 0) -> CanonicalForm:
    """:func:`canonicalize` after dividing out the generator gcd (recorded in ``g``)."""
    dn, g = normalize(d)
    return replace(canonicalize(m, dn, bezout_shift), g=g)


@dataclass(frozen=True)
class ThetaParams:
    """Bare ``(alpha, beta, omega, eta)`` for the zero-set and residue machinery.

    Anything carrying these four attributes (e.g. :class:`CanonicalForm`) can be
    used where the library asks for parameters.
    """

    alpha: int
    beta: int
    omega: int
    eta: int

    def __post_init__(self):
        if self.alpha < 1 or self.beta < 1 or self.alpha % 2 == 0 or self.beta % 2 == 0:
            raise InvalidDigitSet("alpha and beta must be odd and positive")
        if self.eta < 0:
            raise InvalidDigitSet("eta must be nonnegative")

    @property
    def scale(self) -> int:
        return 2 ** (self.eta + 1) * self.alpha * self.beta

    @property
    def Dtil(self) -> DigitSet4:
        return DigitSet4(self.alpha, 0, self.omega, 2**self.eta * self.beta)
