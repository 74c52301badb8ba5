"""Finite-level measures, tower spectra and the residue-system machinery.

The level-``n`` measure is the convolution of the first ``n`` factors
``delta_{M^-k D}``: ``4**n`` equally weighted rational atoms.  A Hadamard triple
``(Mbar, Dbar, Cbar)`` yields the tower ``sum_k Mbar^{*k} c_k``, whose ``4**n``
frequencies are mutually orthogonal for that measure, hence a basis of its
``4**n``-dimensional L2 space.  Orthogonality is always certified by an
exactly vanishing mask factor; floats only appear in the Q-function and the
Parseval sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import lattice as la
from .decision import F2, is_admissible
from .digits import CanonicalForm, DigitSet4, digits_of
from .errors import ChoiceOutOfRange, InvalidPick, LevelTooLarge, NonIntegerFrequency, NotAdmissible
from .zeros import THETA_BY_CODE, _frame_of, mask_eval, pairwise_theta_codes

MEASURE_LEVEL_CAP = 8
PAIRWISE_LEVEL_CAP = 5


def _check_level(n: int, cap: int, unsafe: bool) -> None:
    if n < 0:
        raise ValueError("level must be nonnegative")
    if n > cap and not unsafe:
        raise LevelTooLarge(f"level {n} exceeds the cap {cap}; pass unsafe=True to override")


def _digit_list(d) -> list:
    return digits_of(d) if isinstance(d, DigitSet4) else [tuple(v) for v in d]


@dataclass(frozen=True)
class FiniteMeasure:
    level: int
    atoms: tuple
    weight: Fraction

    def transform(self, xi) -> complex | np.ndarray:
        """Exact Fourier transform, evaluated in double precision."""
        pts = np.array([[float(a[0]), float(a[1])] for a in self.atoms])
        xi = np.asarray(xi, dtype=float)
        phase = np.tensordot(xi, pts, axes=([-1], [1]))
        val = np.exp(2j * np.pi * phase).mean(axis=-1)
        return complex(val) if np.ndim(val) == 0 else val


@dataclass(frozen=True)
class FrequencySet:
    elements: tuple
    level: int

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def _atom_sums(m: la.Mat, digits, n: int) -> list:
    """``sum_{k=1}^n M^-k d_k`` over all words, with integer bookkeeping."""
    adj = la.adjugate(m)
    dt = la.det(m)
    # atom = w / dt**k
    words = [(0, 0)]
    power = 1
    for _ in range(n):
        nxt = []
        for d in digits:
            base = la.vscale(d, power)
            for w in words:
                nxt.append(la.apply(adj, la.vadd(base, w)))
        words = nxt
        power *= dt
    return [la.normalize_vec((Fraction(w[0], power), Fraction(w[1], power))) for w in words]


def finite_measure(m: la.Mat, d, n: int, unsafe: bool = False) -> FiniteMeasure:
    _check_level(n, MEASURE_LEVEL_CAP, unsafe)
    digits = _digit_list(d)
    atoms = _atom_sums(m, digits, n)
    return FiniteMeasure(n, tuple(atoms), Fraction(1, len(digits) ** n))


def moran_finite(a: la.Mat, m: la.Mat, d, n: int, unsafe: bool = False) -> FiniteMeasure:
    """Atoms ``A^-1 sum_{k=0}^{n-1} M^-k d_k``."""
    _check_level(n, MEASURE_LEVEL_CAP, unsafe)
    ainv = la.inverse(a)
    fm = finite_measure(m, d, n, unsafe=True)
    lift = la.matmul(ainv, m)
    atoms = tuple(la.normalize_vec(la.apply(lift, x)) for x in fm.atoms)
    return FiniteMeasure(n, atoms, fm.weight)


def _float_mat(m: la.Mat) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in m])


def muhat_truncated(m: la.Mat, d, xi, n: int):
    """``prod_{j=1}^n m_D(M^{*-j} xi)``; ``xi`` may be a ``(..., 2)`` array."""
    step = _float_mat(la.inverse(la.transpose(m)))
    y = np.asarray(xi, dtype=float)
    out = np.ones(y.shape[:-1], dtype=complex)
    digits = _digit_list(d)
    for _ in range(n):
        y = y @ step.T
        out = out * mask_eval(digits, y)
    return complex(out) if out.ndim == 0 else out


def tower_spectrum(mbar: la.Mat, dbar, cbar, n: int, unsafe: bool = False) -> FrequencySet:
    """``{sum_{k<n} Mbar^{*k} c_k : c_k in Cbar}`` for an admissible triple."""
    _check_level(n, MEASURE_LEVEL_CAP, unsafe)
    if not is_admissible(mbar, dbar, cbar):
        raise NotAdmissible(f"({mbar}, {dbar}, {cbar}) is not a Hadamard triple")
    nt = la.transpose(mbar)
    cs = [tuple(int(x) for x in c) for c in cbar]
    lam = [(0, 0)]
    for _ in range(n):
        lam = [la.vadd(c, la.apply(nt, x)) for c in cs for x in lam]
    if len(set(lam)) != len(lam):
        raise AssertionError("tower frequencies are not distinct")
    return FrequencySet(tuple(lam), n)


# -- exact orthogonality certification -------------------------------------------

@dataclass
class OrthogonalityReport:
    """Outcome of an all-pairs exact scan.

    ``witness_counts[j]`` counts pairs whose first vanishing factor is ``j``
    (1-based); ``theta_counts`` tallies the class of that factor.
    """

    n_points: int
    n_pairs: int
    n_certified: int
    failures: list = field(default_factory=list)
    witness_counts: dict = field(default_factory=dict)
    theta_counts: dict = field(default_factory=dict)

    @property
    def orthogonal(self) -> bool:
        return self.n_certified == self.n_pairs


def level_factor_maps(m: la.Mat, n: int) -> list:
    """``M^{*-j}`` for ``j = 1..n``: the factors of the level-``n`` transform."""
    step = la.inverse(la.transpose(m))
    maps, cur = [], la.IDENTITY
    for _ in range(n):
        cur = la.matmul(step, cur)
        maps.append(cur)
    return maps


def moran_factor_maps(a: la.Mat, m: la.Mat, n: int) -> list:
    """``M^{*-k} A^{*-1}`` for ``k = 0..n-1``."""
    first = la.inverse(la.transpose(a))
    return [la.matmul(f, first) for f in [la.IDENTITY] + level_factor_maps(m, n - 1)] if n else []


def canonical_generators(d: DigitSet4):
    """Generators ``(g_a, g_b)`` with ``u1 = <g_a, y>`` and ``u2 = <g_b, y>``."""
    fr, g = _frame_of(d)
    qinv = fr.Qinv
    ga = la.apply(qinv, (fr.alpha, 0))
    gb = la.apply(qinv, (fr.omega, 2**fr.eta * fr.beta))
    return la.vscale(ga, g), la.vscale(gb, g)


def certify_orthogonal(d: DigitSet4, factor_maps, freqs, max_failures: int = 10, block: int = 512) -> OrthogonalityReport:
    """Find, for every pair of frequencies, a factor map sending the difference to a mask zero."""
    freqs = [(Fraction(f[0]), Fraction(f[1])) for f in freqs]
    k = len(freqs)
    ga, gb = canonical_generators(d)
    report = OrthogonalityReport(k, k * (k - 1) // 2, 0)
    for start in range(0, k, block):
        rows = slice(start, min(k, start + block))
        nrows = rows.stop - rows.start
        upper = np.arange(k)[None, :] > np.arange(rows.start, rows.stop)[:, None]
        first = np.zeros((nrows, k), dtype=np.int16)
        theta = np.full((nrows, k), -1, dtype=np.int8)
        for j, fmap in enumerate(factor_maps, start=1):
            codes = pairwise_theta_codes(ga, gb, fmap, freqs, rows=rows)
            hit = (codes >= 1) & (first == 0) & upper
            first[hit] = j
            theta[hit] = codes[hit]
        done = (first > 0) & upper
        report.n_certified += int(done.sum())
        for j in np.unique(first[done]):
            report.witness_counts[int(j)] = report.witness_counts.get(int(j), 0) + int((first[done] == j).sum())
        for c in np.unique(theta[done]):
            name = THETA_BY_CODE[int(c)].value
            report.theta_counts[name] = report.theta_counts.get(name, 0) + int((theta[done] == c).sum())
        if len(report.failures) < max_failures:
            bad = np.argwhere(upper & ~done)
            for i, jj in bad[: max_failures - len(report.failures)]:
                report.failures.append((freqs[rows.start + int(i)], freqs[int(jj)]))
    return report


def certify_level_orthogonality(m: la.Mat, d: DigitSet4, freqs, n: int) -> OrthogonalityReport:
    return certify_orthogonal(d, level_factor_maps(m, n), freqs)


def q_function(m: la.Mat, d, freqs, xi, n: int):
    """``sum_lambda |muhat_n(xi + lambda)|**2``; ``xi`` may be a ``(..., 2)`` array."""
    lam = np.array([[float(f[0]), float(f[1])] for f in freqs])
    xi = np.asarray(xi, dtype=float)
    pts = xi[..., None, :] + lam
    return (np.abs(muhat_truncated(m, d, pts, n)) ** 2).sum(axis=-1)


# -- canonical spectra -------------------------------------------------------------

def _bar_data(cf: CanonicalForm):
    qt = ((1, 0), (0, Fraction(1, 2**cf.eta)))
    mbar = la.as_int_matrix(la.matmul(la.matmul(qt, cf.Mtil), la.inverse(qt)))
    dbar = DigitSet4(cf.alpha, 0, cf.omega, cf.beta)
    cbar = [la.normalize_vec(la.apply(la.transpose(mbar), f)) for f in F2]
    return qt, mbar, dbar, cbar


def canonical_spectrum(cf: CanonicalForm, n: int) -> FrequencySet:
    """Level-``n`` spectrum of ``(Mtil, Dtil)`` for a spectral canonical form."""
    qt, mbar, dbar, cbar = _bar_data(cf)
    tower = tower_spectrum(mbar, dbar, cbar, n)
    back = la.transpose(qt)
    return FrequencySet(tuple(la.normalize_vec(la.apply(back, x)) for x in tower), n)


def moran_spectrum(cf: CanonicalForm, n: int) -> FrequencySet:
    """Level-``n`` spectrum of the Moran measure with ``A = scale * I``.

    Obtained as ``A^* Mtil^{*-1} Gamma`` from the canonical spectrum; the
    result is integral.
    """
    lift = la.scale(la.inverse(la.transpose(cf.Mtil)), cf.scale)
    out = [la.normalize_vec(la.apply(lift, x)) for x in canonical_spectrum(cf, n)]
    if not all(la.is_integer_vector(v) for v in out):
        raise AssertionError("Moran spectrum is not integral")
    return FrequencySet(tuple(out), n)


# -- residue systems -----------------------------------------------------------------

@dataclass(frozen=True)
class ResidueSystem:
    S: tuple
    T: tuple  # four tuples T_0..T_3
    scale: int
    q: int
    params: object

    def T_all(self) -> list:
        return [l for ti in self.T for l in ti]


def residue_systems(params, q: int) -> ResidueSystem:
    if q < 0:
        raise ValueError("q must be nonnegative")
    a, b, w = params.alpha, params.beta, params.omega
    two_q = 2**q
    sc = 2 * two_q * a * b
    S = tuple((s1, s2) for s1 in range(two_q * b) for s2 in range(a))

    def t(i, k, kp):
        if i == 0:
            num = (2 * two_q * k * b, 2 * kp * a - 2 * k * w)
        elif i == 1:
            num = (two_q * (2 * k * b + b), 2 * kp * a - 2 * k * w - w)
        elif i == 2:
            num = (2 * two_q * k * b, 2 * kp * a - 2 * k * w + a)
        else:
            num = (two_q * (2 * k * b + b), 2 * kp * a - 2 * k * w + a - w)
        return la.normalize_vec((Fraction(num[0], sc), Fraction(num[1], sc)))

    T = tuple(tuple(t(i, k, kp) for k in range(a) for kp in range(two_q * b)) for i in range(4))
    return ResidueSystem(S, T, sc, q, params)


def verify_complete_residues(rs: ResidueSystem) -> bool:
    """``S + scale*T`` has ``scale**2`` elements, pairwise distinct mod ``scale``."""
    sc = rs.scale
    pts = []
    for s in rs.S:
        for ell in rs.T_all():
            v = la.vadd(s, la.vscale(ell, sc))
            if not la.is_integer_vector(v):
                return False
            pts.append((int(v[0]) % sc, int(v[1]) % sc))
    return len(pts) == sc * sc and len(set(pts)) == sc * sc


def base_hadamard(params, picks) -> list:
    """``C = scale * {l_0, .., l_3}`` with ``l_i`` drawn from ``T_{eta,i}``."""
    rs = residue_systems(params, params.eta)
    if len(picks) != 4:
        raise InvalidPick("need exactly one pick from each of the four T classes")
    picks = [la.normalize_vec((Fraction(p[0]), Fraction(p[1]))) for p in picks]
    for i, p in enumerate(picks):
        if p not in rs.T[i]:
            raise InvalidPick(f"pick {i} = {p} is not in T_{i}")
    c = [tuple(int(x) for x in la.vscale(p, rs.scale)) for p in picks]
    a = ((rs.scale, 0), (0, rs.scale))
    if not is_admissible(a, params.Dtil, c):
        raise AssertionError(f"base Hadamard set {c} failed")
    return c


def parseval_check(params, s, picks, xi) -> float:
    """``sum_i |m_Dtil((s + scale*l_i + xi)/scale)|**2``, which should be 1."""
    sc = params.scale
    xi = np.asarray(xi, dtype=float)
    total = 0.0
    for ell in picks:
        pt = (np.array([float(s[0] + sc * ell[0]), float(s[1] + sc * ell[1])]) + xi) / sc
        total += abs(mask_eval(params.Dtil, pt)) ** 2
    return float(total)


# -- spectrum decomposition ------------------------------------------------------------

@dataclass(frozen=True)
class LambdaSplit:
    classes: dict  # (s, ell) -> tuple of integer vectors gamma
    scale: int

    def reassemble(self) -> list:
        sc = self.scale
        out = []
        for (s, ell), gammas in self.classes.items():
            for g in gammas:
                v = la.vadd(la.vadd(s, la.vscale(ell, sc)), la.vscale(g, sc))
                out.append(tuple(int(x) for x in v))
        return out

    def nonempty(self) -> dict:
        return {k: v for k, v in self.classes.items() if v}


def _residue_table(rs: ResidueSystem) -> dict:
    sc = rs.scale
    table = {}
    for s in rs.S:
        for ell in rs.T_all():
            v = la.vadd(s, la.vscale(ell, sc))
            table[(int(v[0]) % sc, int(v[1]) % sc)] = (s, ell)
    return table


def lambda_split(freqs, rs: ResidueSystem) -> LambdaSplit:
    """Assign each integer frequency to its ``(s, l)`` class and quotient ``gamma``."""
    sc = rs.scale
    table = _residue_table(rs)
    classes: dict = {(s, ell): [] for s in rs.S for ell in rs.T_all()}
    for lam in freqs:
        if not la.is_integer_vector(lam):
            raise NonIntegerFrequency(f"{lam} is not an integer vector")
        lam = (int(lam[0]), int(lam[1]))
        s, ell = table[(lam[0] % sc, lam[1] % sc)]
        base = la.vadd(s, la.vscale(ell, sc))
        g = la.vsub(lam, base)
        classes[(s, ell)].append((int(g[0] // sc), int(g[1] // sc)))
    return LambdaSplit({k: tuple(v) for k, v in classes.items()}, sc)


@dataclass(frozen=True)
class GammaResult:
    frequencies: FrequencySet
    report: OrthogonalityReport
    dimension: int

    @property
    def orthogonal(self) -> bool:
        return self.report.orthogonal

    @property
    def complete(self) -> bool:
        return self.orthogonal and len(self.frequencies) == self.dimension


def gamma_build(split: LambdaSplit, rs: ResidueSystem, choice, m: la.Mat, d: DigitSet4, moran_level: int) -> GammaResult:
    """Select one T class per ``s`` and reassemble a frequency set for ``(m, d)``.

    ``choice`` maps ``s`` to ``i_s`` (a dict, a callable, or one int for all ``s``).
    The split comes from a level-``moran_level`` Moran spectrum, so the result is
    tested against the level ``moran_level - 1`` measure of ``(m, d)``.
    Completeness is reported by comparing the size with ``4**level``.
    """
    if isinstance(choice, int):
        pick = lambda s: choice  # noqa: E731
    elif callable(choice):
        pick = choice
    else:
        pick = choice.__getitem__
    sc = rs.scale
    out = []
    for s in rs.S:
        i = pick(s)
        if i not in (0, 1, 2, 3):
            raise ChoiceOutOfRange(f"choice for s={s} is {i!r}, expected 0..3")
        for ell in rs.T[i]:
            shift = la.vadd((Fraction(s[0], sc), Fraction(s[1], sc)), ell)
            for g in split.classes.get((s, ell), ()):
                out.append(la.normalize_vec(la.vadd(shift, g)))
    level = moran_level - 1
    fs = FrequencySet(tuple(out), level)
    report = certify_orthogonal(d, level_factor_maps(m, level), out)
    return GammaResult(fs, report, 4**level)
