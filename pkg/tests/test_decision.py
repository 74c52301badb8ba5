from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import D1, D2, D43, atoms_bruteforce, gram_defect
from spectral_affine import (
    DigitSet4,
    Verdict,
    construct_admissible,
    decide,
    is_admissible,
    spectrum_pullback,
)
from spectral_affine import lattice as la
from spectral_affine.decision import Certificate, find_hadamard_set, unitarity_defect
from spectral_affine.errors import DimensionMismatch, InvalidInput, NotExpansive, NotSpectral

F = Fraction


def unitary_oracle(m, digits, s) -> bool:
    minv = np.linalg.inv(np.array(m, dtype=float))
    h = np.exp(2j * np.pi * (np.array(digits, float) @ minv.T) @ np.array(s, float).T) / 2
    return bool(np.allclose(h.conj().T @ h, np.eye(4), atol=1e-9))


@pytest.mark.parametrize(
    "m, d, verdict",
    [
        (((2, 0), (2, 2)), D1, Verdict.SPECTRAL),
        (((2, -1), (2, 2)), D1, Verdict.NON_SPECTRAL),
        (((2, 0), (2, 2)), D2, Verdict.NON_SPECTRAL),
        (((2, 0), (4, 2)), D2, Verdict.SPECTRAL),
        (((2, 0), (4, 2)), D43, Verdict.SPECTRAL),
    ],
)
def test_decide_examples(m, d, verdict):
    dec = decide(m, d)
    assert dec.verdict is verdict
    assert (dec.certificate is not None) == dec.spectral


def test_violation_messages():
    dec = decide(((2, 0), (2, 2)), D2)
    assert [str(v) for v in dec.violations] == ["c divisibility: need 4 | 2"]
    dec = decide(((3, 1), (1, 3)), D1)
    assert [str(v) for v in dec.violations] == ["a parity: need 2 | 3", "b parity: need 2 | 1", "c parity: need 2 | 1", "d parity: need 2 | 3"]
    # fixed order: a-parity, d-parity, c-divisibility
    dec = decide(((3, 0), (2, 3)), D2)
    assert [v.entry for v in dec.violations] == ["a", "d", "c"]


def test_not_expansive():
    with pytest.raises(NotExpansive):
        decide(((1, 0), (0, 1)), D1)


@given(*[st.integers(-6, 6)] * 4)
def test_fixed_digit_family_rule(a, b, c, d):
    m = ((a, b), (c, d))
    if la.is_expansive(m):
        assert decide(m, D43).spectral == (a % 2 == 0 and d % 2 == 0 and c % 4 == 0)


def test_is_admissible_examples():
    m = ((2, 0), (0, 2))
    assert is_admissible(m, D1, [(0, 0), (1, 0), (0, 1), (1, 1)])
    assert not is_admissible(m, D1, [(0, 0), (2, 0), (0, 2), (2, 2)])
    with pytest.raises(DimensionMismatch):
        is_admissible(m, D1, [(0, 0), (1, 0)])
    with pytest.raises(InvalidInput):
        is_admissible(m, D1, [(0, 0), (F(1, 2), 0), (0, 1), (1, 1)])


def test_is_admissible_box_enumeration():
    m = ((2, 0), (2, 2))
    digits = D2.digits()
    box = [v for v in product(range(-2, 3), repeat=2) if v != (0, 0)]
    hits = 0
    for rest in combinations(box, 3):
        s = [(0, 0), *rest]
        got = is_admissible(m, D2, s)
        assert got == unitary_oracle(m, digits, s)
        hits += got
    # (M1, D2) is not admissible at all, so no candidate may pass
    assert hits == 0
    assert find_hadamard_set(m, D2) is None


@given(st.tuples(*[st.integers(-3, 3)] * 8))
def test_is_admissible_generic_digit_list(t):
    m = ((4, 1), (0, 4))
    digits = [(0, 0), (1, 0), (0, 1), (1, 1)]
    s = [(0, 0), t[0:2], t[2:4], t[4:6]]
    if len(set(s)) < 4:
        return
    assert is_admissible(m, digits, s) == unitary_oracle(m, digits, s)


def test_certificate_examples():
    c = construct_admissible(((2, 0), (0, 2)), D1)
    assert c.Q_chain == la.IDENTITY
    assert c.Cbar == ((0, 0), (1, 0), (0, 1), (1, 1))
    c = construct_admissible(((2, 0), (4, 2)), D2)
    assert c.Mbar == ((2, 0), (2, 2))
    assert c.Dbar == DigitSet4(1, 0, 0, 1)
    assert c.Q_chain == ((1, 0), (0, F(1, 2)))
    c = construct_admissible(((2, 0), (2, 2)), D1)
    assert c.Q_chain == la.IDENTITY and c.Mbar == ((2, 0), (2, 2))
    # Mbar^T applied to the four half-lattice points
    assert set(c.Cbar) == {(0, 0), (1, 0), (1, 1), (2, 1)}
    assert unitarity_defect(c.Mbar, c.Dbar.digits(), c.Cbar) < 1e-12
    # the non-transposed image is also a Hadamard set for this pair
    assert is_admissible(c.Mbar, c.Dbar, [(0, 0), (1, 1), (0, 1), (1, 2)])


def test_construct_admissible_rejects():
    with pytest.raises(NotSpectral, match="c divisibility"):
        construct_admissible(((2, 0), (2, 2)), D2)


def test_pullback_examples():
    ident = Certificate(la.IDENTITY, ((2, 0), (0, 2)), D1, ())
    assert spectrum_pullback([(3, -1)], ident) == [(3, -1)]
    half = Certificate(((1, 0), (0, F(1, 2))), ((2, 0), (2, 2)), D1, ())
    assert spectrum_pullback([(0, 1)], half) == [(0, F(1, 2))]


def test_pullback_level_one_orthogonal():
    m = ((2, 0), (4, 2))
    c = construct_admissible(m, D43)
    lam = c.pullback(c.Cbar)
    assert gram_defect(atoms_bruteforce(m, D43.digits(), 1), lam) < 1e-9
    from spectral_affine.spectra import certify_level_orthogonality

    assert certify_level_orthogonality(m, D43, lam, 1).orthogonal


@given(st.tuples(*[st.integers(-5, 5)] * 4), st.tuples(*[st.integers(-4, 4)] * 4))
def test_certificates_are_consistent(mt, dt):
    m = ((mt[0], mt[1]), (mt[2], mt[3]))
    if not la.is_expansive(m) or dt[0] * dt[3] - dt[1] * dt[2] == 0:
        return
    d = DigitSet4(*dt)
    dec = decide(m, d)
    if not dec.spectral:
        assert dec.violations
        return
    c = dec.certificate
    q = c.Q_chain
    assert la.matmul(la.matmul(q, m), la.inverse(q)) == c.Mbar
    assert sorted(la.normalize_vec(la.apply(q, v)) for v in d.digits()) == sorted(c.Dbar.digits())
    assert all(x % 2 == 0 for row in c.Mbar for x in row)
    assert is_admissible(c.Mbar, c.Dbar, c.Cbar)


def test_find_hadamard_set():
    s = find_hadamard_set(((2, 0), (0, 2)), D1)
    assert s is not None and is_admissible(((2, 0), (0, 2)), D1, s)
    assert find_hadamard_set(((3, 0), (0, 3)), D1) is None
    assert find_hadamard_set(((2, 1), (0, 2)), D1) is None
