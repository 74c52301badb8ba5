"""Spectrality decision for the four-digit planar family, with certificates.

With ``eta`` the 2-adic valuation of ``alpha1*beta2 - alpha2*beta1``:

* ``eta == 0``: spectral iff every entry of ``M`` is even;
* ``eta > 0``: spectral iff the canonical ``Mtil`` has even diagonal and
  ``2**(eta+1)`` divides its lower-left entry.

A spectral verdict carries an explicit Hadamard triple ``(Mbar, Dbar, Cbar)``
reached by a rational conjugation ``Q_chain``; a non-spectral verdict lists
the failed parity / divisibility conditions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import lattice as la
from .digits import CanonicalForm, DigitSet4, canonicalize_any, digits_of
from .errors import DimensionMismatch, InvalidInput, NotSpectral
from .zeros import mask_zero, mask_zero_pairing

F2 = [(Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(0)), (Fraction(0), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2))]


class Verdict(enum.Enum):
    SPECTRAL = "spectral"
    NON_SPECTRAL = "non-spectral"


@dataclass(frozen=True)
class Violation:
    kind: str  # "EntryNotEven" | "PowerOfTwoDivisibility"
    entry: str  # a, b, c or d
    required: int
    actual: int

    def __str__(self) -> str:
        if self.kind == "EntryNotEven":
            return f"{self.entry} parity: need 2 | {self.actual}"
        return f"{self.entry} divisibility: need {self.required} | {self.actual}"


@dataclass(frozen=True)
class Certificate:
    Q_chain: la.Mat
    Mbar: la.Mat
    Dbar: DigitSet4
    Cbar: tuple

    def pullback(self, freqs):
        return spectrum_pullback(freqs, self)


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    eta: int
    canonical: CanonicalForm
    certificate: Certificate | None = None
    violations: tuple = field(default_factory=tuple)

    @property
    def spectral(self) -> bool:
        return self.verdict is Verdict.SPECTRAL


def _violations(cf: CanonicalForm, m: la.Mat) -> list[Violation]:
    if cf.eta == 0:
        (a, b), (c, d) = m
        return [Violation("EntryNotEven", name, 2, v) for name, v in zip("abcd", (a, b, c, d)) if v % 2]
    (a, _), (c, d) = cf.Mtil
    out = []
    if a % 2:
        out.append(Violation("EntryNotEven", "a", 2, a))
    if d % 2:
        out.append(Violation("EntryNotEven", "d", 2, d))
    req = 2 ** (cf.eta + 1)
    if c % req:
        out.append(Violation("PowerOfTwoDivisibility", "c", req, c))
    return out


def decide(m: la.Mat, d: DigitSet4, certificate: bool = True, bezout_shift: int = 0) -> Decision:
    """Spectral / non-spectral verdict for ``mu_{M,D}``.

    For ``eta == 0`` the parity test runs on ``M`` itself (conjugation by an
    integer unimodular matrix preserves membership in ``M_2(2Z)``); for
    ``eta > 0`` it runs on the canonical ``Mtil``.
    """
    cf = canonicalize_any(m, d, bezout_shift)
    viol = _violations(cf, m)
    if viol:
        return Decision(Verdict.NON_SPECTRAL, cf.eta, cf, None, tuple(viol))
    cert = _build_certificate(cf) if certificate else None
    return Decision(Verdict.SPECTRAL, cf.eta, cf, cert, ())


def _build_certificate(cf: CanonicalForm) -> Certificate:
    qt = ((1, 0), (0, Fraction(1, 2**cf.eta)))
    q_chain = la.scale(la.matmul(qt, cf.Q), Fraction(1, cf.g))
    q_chain = tuple(la.normalize_vec(row) for row in q_chain)
    mbar = la.as_int_matrix(la.matmul(la.matmul(qt, cf.Mtil), la.inverse(qt)))
    dbar = DigitSet4(cf.alpha, 0, cf.omega, cf.beta)
    cbar = tuple(la.normalize_vec(la.apply(la.transpose(mbar), f)) for f in F2)
    cert = Certificate(q_chain, mbar, dbar, cbar)
    if not is_admissible(mbar, dbar, cbar):
        raise AssertionError(f"certificate {cert} failed the Hadamard test")
    return cert


def construct_admissible(m: la.Mat, d: DigitSet4) -> Certificate:
    dec = decide(m, d, certificate=True)
    if not dec.spectral:
        raise NotSpectral("; ".join(map(str, dec.violations)))
    return dec.certificate


def hadamard_matrix(m: la.Mat, digits, s) -> np.ndarray:
    """``(1/sqrt N) exp(2 pi i <M^-1 d, s>)`` in double precision."""
    minv = la.inverse(m)
    pts = np.array([[float(c) for c in la.apply(minv, dd)] for dd in digits])
    ss = np.array([[float(c) for c in v] for v in s])
    return np.exp(2j * np.pi * pts @ ss.T) / np.sqrt(len(digits))


def unitarity_defect(m: la.Mat, digits, s) -> float:
    h = hadamard_matrix(m, digits, s)
    return float(np.abs(h.conj().T @ h - np.eye(len(digits))).max())


def is_admissible(m: la.Mat, d, s, tol: float = 1e-9) -> bool:
    """Is ``(M, D, S)`` a Hadamard triple?

    Decided exactly through the pairwise zero condition
    ``m_D(M^{*-1}(s_i - s_j)) == 0`` and cross-checked against the 4x4 matrix.
    """
    digits = digits_of(d) if isinstance(d, DigitSet4) else [tuple(v) for v in d]
    s = [tuple(v) for v in s]
    if len(digits) != 4 or len(s) != 4:
        raise DimensionMismatch(f"need 4 digits and 4 frequencies, got {len(digits)} and {len(s)}")
    if not all(la.is_integer_vector(v) for v in s):
        raise InvalidInput("Hadamard frequencies must be integer vectors")
    mt_inv = la.inverse(la.transpose(m))
    exact = True
    for s1, s2 in combinations(s, 2):
        y = la.apply(mt_inv, la.vsub(s1, s2))
        z = mask_zero(d, y) if isinstance(d, DigitSet4) else mask_zero_pairing(digits, y)
        if not z:
            exact = False
            break
    numeric = unitarity_defect(m, digits, s) < tol
    if exact != numeric:
        raise AssertionError(f"exact ({exact}) and numeric ({numeric}) Hadamard tests disagree for {m}, {digits}, {s}")
    return exact


def spectrum_pullback(freqs, cert: Certificate) -> list:
    """Map frequencies from ``(Mbar, Dbar)`` coordinates back to ``(M, D)``."""
    qt = la.transpose(cert.Q_chain)
    return [la.normalize_vec(la.apply(qt, (Fraction(v[0]), Fraction(v[1])))) for v in freqs]


# -- equivalence-chain helpers (eta = 0) -----------------------------------------

def in_even_matrices(m: la.Mat) -> bool:
    return all(x % 2 == 0 for row in m for x in row)


def maps_f2_into_integers(m: la.Mat) -> bool:
    return all(la.is_integer_vector(la.apply(m, f)) for f in F2[1:])


def f2_hadamard_set(m: la.Mat) -> list:
    return [la.normalize_vec(la.apply(la.transpose(m), f)) for f in F2]


def find_hadamard_set(m: la.Mat, d) -> list | None:
    """Search ``Z^2 / M^* Z^2`` for some ``S`` making ``(M, D, S)`` a Hadamard triple.

    Only residues matter since ``m_D`` is ``Z^2``-periodic, so the search is
    finite: collect the classes ``f in M^{*-1}Z^2 / Z^2`` with ``m_D(f) == 0``
    and look for three that are pairwise compatible.  Returns ``S`` containing
    0, or ``None`` when no Hadamard set exists.
    """
    digits = digits_of(d) if isinstance(d, DigitSet4) else [tuple(v) for v in d]
    nt = la.transpose(m)
    dt = abs(la.det(nt))
    ninv = la.inverse(nt)

    def frac(v):
        return tuple(x - (x.numerator // x.denominator) for x in (Fraction(v[0]), Fraction(v[1])))

    group = {frac(la.apply(ninv, (i, j))) for i in range(dt) for j in range(dt)}
    zero = (Fraction(0), Fraction(0))
    cands = sorted(f for f in group if f != zero and mask_zero_pairing(digits, f))
    for i, f1 in enumerate(cands):
        for j in range(i + 1, len(cands)):
            f2 = cands[j]
            if not mask_zero_pairing(digits, la.vsub(f1, f2)):
                continue
            for f3 in cands[j + 1:]:
                if mask_zero_pairing(digits, la.vsub(f1, f3)) and mask_zero_pairing(digits, la.vsub(f2, f3)):
                    return [(0, 0)] + [tuple(int(x) for x in la.apply(nt, f)) for f in (f1, f2, f3)]
    return None
