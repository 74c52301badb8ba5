"""Zero sets of the mask polynomial and of the measure's Fourier transform.

For the canonical digit set ``{0, (alpha,0), (omega, 2**eta*beta), ...}`` put

    u1 = alpha*x1,    u2 = omega*x1 + 2**eta*beta*x2.

The mask vanishes exactly when ``(u1, u2)`` is congruent mod ``Z^2`` to one of
``(1/2, 0)``, ``(0, 1/2)``, ``(1/2, 1/2)`` (classes Theta1..Theta3); the class
``(0, 0)`` is the lattice Theta0, where the mask equals one.  Every test in
this module is decided with exact rationals; :func:`mask_eval` is the single
floating-point routine and exists for cross-checks and plot data.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor

import numpy as np

from . import lattice as la
from .digits import DigitSet4, digit_frame, digits_of, normalize
from .errors import NotExpansive, ZeroFrequency


class Theta(enum.Enum):
    THETA0 = "Theta0"
    THETA1 = "Theta1"
    THETA2 = "Theta2"
    THETA3 = "Theta3"
    NOT_ZERO = "NotZero"

    @property
    def code(self) -> int:
        return _CODES[self]


_CODES = {Theta.NOT_ZERO: -1, Theta.THETA0: 0, Theta.THETA1: 1, Theta.THETA2: 2, Theta.THETA3: 3}
THETA_BY_CODE = {v: k for k, v in _CODES.items()}


@dataclass(frozen=True)
class ThetaClass:
    """Classification of a point with its witnessing integers.

    For Theta1..Theta3 (and Theta0) ``k``/``kp`` are the integers in the
    congruence system: ``u1 = k`` or ``k + 1/2`` and likewise ``u2`` with ``kp``.
    """

    theta: Theta
    k: int | None = None
    kp: int | None = None

    @property
    def is_zero(self) -> bool:
        return self.theta in (Theta.THETA1, Theta.THETA2, Theta.THETA3)


def mask_eval(digits, xi) -> complex | np.ndarray:
    """``(1/4) sum_d exp(2 pi i <d, xi>)``; ``xi`` may be a ``(..., 2)`` array."""
    if isinstance(digits, DigitSet4):
        digits = digits_of(digits)
    dg = np.asarray([[float(c) for c in d] for d in digits])
    xi = np.asarray(xi, dtype=float)
    phase = np.tensordot(xi, dg, axes=([-1], [1]))
    val = np.exp(2j * np.pi * phase).mean(axis=-1)
    return complex(val) if np.ndim(val) == 0 else val


def _half_split(u: Fraction) -> tuple[int, int] | None:
    """Return ``(kind, k)`` with ``u = k`` (kind 0) or ``u = k + 1/2`` (kind 1)."""
    twice = 2 * u
    if twice.denominator != 1:
        return None
    t = twice.numerator
    return t % 2, (t - t % 2) // 2


def theta_classify(params, x) -> ThetaClass:
    """Exact class of ``x`` in the canonical frame given by ``params``."""
    x1, x2 = Fraction(x[0]), Fraction(x[1])
    u1 = params.alpha * x1
    u2 = params.omega * x1 + 2**params.eta * params.beta * x2
    s1, s2 = _half_split(u1), _half_split(u2)
    if s1 is None or s2 is None:
        return ThetaClass(Theta.NOT_ZERO)
    (h1, k), (h2, kp) = s1, s2
    theta = {(0, 0): Theta.THETA0, (1, 0): Theta.THETA1, (0, 1): Theta.THETA2, (1, 1): Theta.THETA3}[(h1, h2)]
    return ThetaClass(theta, k, kp)


def theta_point(params, theta: Theta, k: int, kp: int) -> tuple[Fraction, Fraction]:
    """Inverse of :func:`theta_classify`: the point with the given witnesses."""
    h1 = 1 if theta in (Theta.THETA1, Theta.THETA3) else 0
    h2 = 1 if theta in (Theta.THETA2, Theta.THETA3) else 0
    u1 = k + Fraction(h1, 2)
    u2 = kp + Fraction(h2, 2)
    x1 = u1 / params.alpha
    x2 = (u2 - params.omega * x1) / (2**params.eta * params.beta)
    return x1, x2


@lru_cache(maxsize=4096)
def _frame_of(d: DigitSet4):
    dn, g = normalize(d)
    return digit_frame(dn), g


def canonical_coordinates(d: DigitSet4, x) -> tuple[Fraction, Fraction]:
    """``(Q^T)^-1 (g x)``: the point at which the canonical mask is evaluated."""
    fr, g = _frame_of(d)
    y = (g * Fraction(x[0]), g * Fraction(x[1]))
    return la.apply(la.transpose(fr.Qinv), y)


def mask_classify(d: DigitSet4, x) -> ThetaClass:
    fr, _ = _frame_of(d)
    return theta_classify(fr, canonical_coordinates(d, x))


def mask_zero(d: DigitSet4, x) -> bool:
    """``m_D(x) == 0``, decided exactly for any (not necessarily primitive) ``D``.

    ``D = Q^-1 Dtil`` gives ``m_D(x) = m_Dtil(Q^-T x)``, and a common factor
    ``g`` of the generators rescales the argument.
    """
    return mask_classify(d, x).is_zero


def mask_zero_pairing(digits, x) -> bool:
    """Exact zero test for an arbitrary 4-point digit set.

    Four unit vectors sum to zero only as two antipodal pairs, so the mask
    vanishes iff the phases ``<d, x>`` split into two pairs differing by 1/2 mod 1.
    """
    ph = [la.dot(d, (Fraction(x[0]), Fraction(x[1]))) for d in digits]
    half = Fraction(1, 2)

    def anti(i, j):
        return (ph[i] - ph[j] - half).denominator == 1

    return (anti(0, 1) and anti(2, 3)) or (anti(0, 2) and anti(1, 3)) or (anti(0, 3) and anti(1, 2))


def min_zero_norm(params) -> Fraction:
    """Certified lower bound on the max-norm of any canonical mask zero."""
    return min(Fraction(1, 2 * params.alpha), Fraction(1, 2 ** (params.eta + 1) * params.beta))


class ZeroScanner:
    """Decides membership in the zero set of the measure's Fourier transform.

    ``x`` is a zero iff ``M^{*-j} x`` is a mask zero for some ``j >= 1``.  In
    canonical coordinates the iterates are ``z_j = B z_{j-1}`` with
    ``B = (Mtil^T)^-1``.  With ``m`` chosen so that ``||B^m|| < 1/2``, once ``m``
    consecutive iterates sit below the minimal zero norm every later one does
    too, which ends the scan.
    """

    def __init__(self, m: la.Mat, d: DigitSet4):
        if not la.is_expansive(m):
            raise NotExpansive(f"matrix {m} is not expansive")
        self.M = m
        self.D = d
        fr, g = _frame_of(d)
        self.frame = fr
        self.g = g
        self.to_canonical = la.scale(la.transpose(fr.Qinv), g)
        mtil = la.matmul(la.matmul(fr.Q, m), fr.Qinv)
        self.B = la.inverse(la.transpose(mtil))
        self.r_min = min_zero_norm(fr)
        self.m = self._contraction_steps()
        self._cache: dict = {}

    def _contraction_steps(self) -> int:
        power = self.B
        steps = 1
        while la.inf_norm(power) >= Fraction(1, 2):
            power = la.matmul(power, self.B)
            steps += 1
        return steps

    def witness(self, x) -> int | None:
        """Smallest ``j`` with ``M^{*-j} x`` a mask zero, or ``None``."""
        x = (Fraction(x[0]), Fraction(x[1]))
        if x == (0, 0):
            raise ZeroFrequency("the Fourier transform equals 1 at the origin")
        if x in self._cache:
            return self._cache[x]
        z = la.apply(self.to_canonical, x)
        j, small_run, found = 0, 0, None
        while True:
            j += 1
            z = la.apply(self.B, z)
            if theta_classify(self.frame, z).is_zero:
                found = j
                break
            small_run = small_run + 1 if la.vec_inf_norm(z) < self.r_min else 0
            if small_run >= self.m:
                break
        self._cache[x] = found
        return found

    def __contains__(self, x) -> bool:
        return self.witness(x) is not None


@lru_cache(maxsize=256)
def _scanner(m: la.Mat, d: DigitSet4) -> ZeroScanner:
    return ZeroScanner(m, d)


def muhat_zero(m: la.Mat, d: DigitSet4, x) -> bool:
    return x in _scanner(m, d)


def zero_enumerate(params, box_radius) -> list[tuple[tuple[Fraction, Fraction], ThetaClass]]:
    """All canonical mask zeros in ``[-R, R]^2``, sorted lexicographically.

    Zeros all lie on ``Z^2 / (2**(eta+1) alpha beta)``, so the enumeration is
    over the Theta1..Theta3 witness integers directly.
    """
    r = Fraction(box_radius)
    if r < 0:
        raise ValueError("box radius must be nonnegative")
    a, w, c = params.alpha, params.omega, 2**params.eta * params.beta
    out = []
    for theta in (Theta.THETA1, Theta.THETA2, Theta.THETA3):
        h1 = Fraction(1, 2) if theta in (Theta.THETA1, Theta.THETA3) else Fraction(0)
        h2 = Fraction(1, 2) if theta in (Theta.THETA2, Theta.THETA3) else Fraction(0)
        # |x1| = |k + h1| / alpha <= r
        for k in range(floor(-r * a - h1), floor(r * a - h1) + 1):
            x1 = (k + h1) / a
            if abs(x1) > r:
                continue
            # x2 = (kp + h2 - w*x1) / c within [-r, r]
            lo = -r * c + w * x1 - h2
            hi = r * c + w * x1 - h2
            for kp in range(_ceil(lo), floor(hi) + 1):
                x2 = (kp + h2 - w * x1) / c
                out.append((la.normalize_vec((x1, x2)), ThetaClass(theta, k, kp)))
    out.sort(key=lambda t: t[0])
    return out


def _ceil(x: Fraction) -> int:
    return -floor(-x)


# -- vectorized exact kernel ---------------------------------------------------

def _int_phases(vec, freqs_int, mod: int) -> list[int]:
    return [(vec[0] * f[0] + vec[1] * f[1]) % mod for f in freqs_int]


def pairwise_theta_codes(gen_a, gen_b, factor_map: la.Mat, freqs, rows=None) -> np.ndarray:
    """Theta codes of ``F (lambda_i - lambda_j)`` for all pairs, exactly.

    ``gen_a``/``gen_b`` are the generators that the canonical frame sends to
    ``(alpha, 0)`` and ``(omega, 2**eta*beta)`` (so ``u1 = <gen_a, y>`` and
    ``u2 = <gen_b, y>``); ``F`` is a rational 2x2 map.  Phases are reduced to
    integers modulo a common denominator, so the pairwise step is integer
    arithmetic.  Codes: -1 not on the half lattice, 0..3 for Theta0..Theta3.
    ``rows`` restricts the first index to a slice.
    """
    ft = la.transpose(factor_map)
    va = la.apply(ft, gen_a)
    vb = la.apply(ft, gen_b)
    lf = la.common_denominator(freqs)
    lv = la.common_denominator([va, vb])
    mod = lf * lv
    fi = [(int(f[0] * lf), int(f[1] * lf)) for f in freqs]
    ia = (int(va[0] * lv), int(va[1] * lv))
    ib = (int(vb[0] * lv), int(vb[1] * lv))
    dtype = np.int64 if mod < 2**61 else object
    pa = np.array(_int_phases(ia, fi, mod), dtype=dtype)
    pb = np.array(_int_phases(ib, fi, mod), dtype=dtype)
    sel = slice(None) if rows is None else rows
    da = (pa[sel, None] - pa[None, :]) % mod
    db = (pb[sel, None] - pb[None, :]) % mod
    on_a = (2 * da) % mod == 0
    on_b = (2 * db) % mod == 0
    half_a = on_a & (da != 0)
    half_b = on_b & (db != 0)
    codes = np.full(da.shape, -1, dtype=np.int8)
    both = on_a & on_b
    codes[both] = (half_a.astype(np.int8) + 2 * half_b.astype(np.int8))[both]
    return codes
