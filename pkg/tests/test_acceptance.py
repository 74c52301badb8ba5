"""The ten acceptance criteria, each printing one PASS/FAIL line."""

import random
import time
from itertools import combinations, product

import numpy as np

from acceptance_log import record
from oracles import (
    D1,
    D2,
    D43,
    max_clique_oracle,
    mixed_instances,
    random_digits,
    random_expansive,
    random_sl2,
    spectral_instances,
)
from spectral_affine import (
    DigitSet4,
    ThetaParams,
    base_hadamard,
    construct_admissible,
    decide,
    finite_measure,
    is_expansive,
    moran_finite,
    muhat_truncated,
    orthogonal_clique_search,
    parseval_check,
    q_function,
    residue_systems,
    tower_spectrum,
    verify_complete_residues,
)
from spectral_affine import lattice as la
from spectral_affine.decision import find_hadamard_set, in_even_matrices, maps_f2_into_integers
from spectral_affine.spectra import certify_level_orthogonality
from spectral_affine.zeros import Theta, mask_zero_pairing, theta_classify, theta_point

SEED = 0xC0FFEE
SPECTRAL_50 = spectral_instances(50)


def test_criterion_1_parametric_families():
    t0 = time.perf_counter()
    mismatches = []
    checked = 0
    for b in range(-6, 7):
        m1 = ((2, b), (2, 2))
        m2 = ((2, b), (4, 2))
        for m in (m1, m2):
            if is_expansive(m):
                checked += 1
                if decide(m, D1).spectral != (b % 2 == 0):
                    mismatches.append(("D1", m))
        if is_expansive(m1):
            checked += 1
            if decide(m1, D2).spectral:
                mismatches.append(("D2", m1))
        if is_expansive(m2):
            checked += 1
            if not decide(m2, D2).spectral:
                mismatches.append(("D2", m2))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 1.0
    record(1, ok, f"{checked} cases, {len(mismatches)} mismatches, {elapsed:.3f}s")
    assert not mismatches
    assert elapsed < 1.0


def test_criterion_2_fixed_digit_sweep():
    t0 = time.perf_counter()
    count, bad = 0, []
    rng = range(-6, 7)
    for a, b, c, d in product(rng, rng, rng, rng):
        m = ((a, b), (c, d))
        if not is_expansive(m):
            continue
        count += 1
        expected = a % 2 == 0 and d % 2 == 0 and c % 4 == 0
        if decide(m, D43, certificate=False).spectral != expected:
            bad.append(m)
    elapsed = time.perf_counter() - t0
    ok = not bad and count <= 28561 and elapsed < 30
    record(2, ok, f"{count} expansive matrices, {len(bad)} mismatches, {elapsed:.2f}s")
    assert not bad
    assert elapsed < 30


def test_criterion_3_odd_cross_equivalence_chain():
    rng = random.Random(SEED)
    discrepancies, n_spec = [], 0
    for i in range(500):
        d = random_digits(rng, odd_cross=True)
        if i % 2:
            # bias half the draws toward even matrices so both verdicts are well represented
            while True:
                m = tuple(tuple(2 * rng.randint(-3, 3) for _ in range(2)) for _ in range(2))
                if is_expansive(m):
                    break
        else:
            m = random_expansive(rng, -5, 5)
        ii = in_even_matrices(m)
        iii = maps_f2_into_integers(m)
        iv = find_hadamard_set(m, d) is not None
        verdict = decide(m, d, certificate=False).spectral
        n_spec += verdict
        if not (ii == iii == iv == verdict):
            discrepancies.append((m, d, ii, iii, iv, verdict))
    record(3, not discrepancies, f"500 instances ({n_spec} spectral), {len(discrepancies)} discrepancies")
    assert not discrepancies


def test_criterion_4_finite_level_spectral_pairs():
    t0 = time.perf_counter()
    failures = []
    for m, d in SPECTRAL_50:
        cert = construct_admissible(m, d)
        for n in range(1, 6):
            lam = cert.pullback(tower_spectrum(cert.Mbar, cert.Dbar, cert.Cbar, n))
            rep = certify_level_orthogonality(m, d, lam, n)
            atoms = set(finite_measure(m, d, n).atoms)
            if not (rep.orthogonal and len(set(lam)) == 4**n == len(atoms)):
                failures.append((m, d, n))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 120
    record(4, ok, f"50 instances x levels 1..5, {len(failures)} failures, {elapsed:.1f}s")
    assert not failures
    assert elapsed < 120


def test_criterion_5_q_function_dichotomy():
    xi = np.random.default_rng(SEED).uniform(-5, 5, size=(100, 2))
    worst_dev, worst_drop, bad = 0.0, 0.0, []
    for m, d in SPECTRAL_50:
        cert = construct_admissible(m, d)
        lam = cert.pullback(tower_spectrum(cert.Mbar, cert.Dbar, cert.Cbar, 3))
        dev = float(np.abs(q_function(m, d, lam, xi, 3) - 1).max())
        # delete the origin; the deficiency is |muhat(xi)|^2
        rest = [v for v in lam if v != (0, 0)]
        drop = float(q_function(m, d, rest, xi, 3).min())
        worst_dev = max(worst_dev, dev)
        worst_drop = max(worst_drop, drop)
        if not (dev < 1e-9 and drop < 1 - 1e-3):
            bad.append((m, d, dev, drop))
    record(5, not bad, f"max |Q-1| = {worst_dev:.2e}, largest min Q after deletion = {worst_drop:.4f}")
    assert not bad


def _cross_class_pairs_zero(params) -> bool:
    rs = residue_systems(params, params.eta)
    dt = params.Dtil
    return all(
        mask_zero_pairing(dt.digits(), la.vsub(u, v))
        for i, j in combinations(range(4), 2)
        for u in rs.T[i]
        for v in rs.T[j]
    )


def test_criterion_6_residue_systems_and_base_hadamard():
    incomplete, nonunitary, combos = [], [], 0
    for alpha, beta, eta in product((1, 3, 5), (1, 3, 5), (0, 1, 2)):
        for omega in (0, 1, 2):
            p = ThetaParams(alpha, beta, omega, eta)
            for q in sorted({0, eta}):
                if not verify_complete_residues(residue_systems(p, q)):
                    incomplete.append((p, q))
            if alpha * 2**eta * beta > 15:
                continue
            # every combination is a Hadamard set iff every cross-class difference is a mask zero
            if not _cross_class_pairs_zero(p):
                nonunitary.append(p)
            rs = residue_systems(p, eta)
            all_picks = list(product(*rs.T))
            combos += len(all_picks)
            sample = all_picks if len(all_picks) <= 625 else random.Random(SEED).sample(all_picks, 625)
            for picks in sample:
                try:
                    base_hadamard(p, picks)
                except AssertionError:
                    nonunitary.append((p, picks))
    ok = not incomplete and not nonunitary
    record(6, ok, f"{len(incomplete)} incomplete residue systems, {len(nonunitary)} non-unitary out of {combos} pick combinations")
    assert not incomplete
    assert not nonunitary


def test_criterion_7_theta_differences_and_parseval():
    rng = random.Random(SEED)
    params = [ThetaParams(a, b, w, e) for a, b, w, e in [(1, 1, 0, 0), (1, 1, 1, 0), (3, 1, 2, 1), (1, 3, 5, 2), (5, 3, -4, 1), (3, 5, 7, 0)]]
    thetas = [Theta.THETA0, Theta.THETA1, Theta.THETA2, Theta.THETA3]
    failures = 0
    for p in params:
        for i, j in product(range(4), range(4)):
            for _ in range(1000):
                x = theta_point(p, thetas[i], rng.randint(-50, 50), rng.randint(-50, 50))
                y = theta_point(p, thetas[j], rng.randint(-50, 50), rng.randint(-50, 50))
                cls = theta_classify(p, la.vsub(x, y))
                # same class lands in Theta0; distinct classes land in Theta_{i xor j}
                if cls.theta is not thetas[i ^ j]:
                    failures += 1
    parseval_worst = 0.0
    for k in range(20):
        p = params[k % len(params)]
        rs = residue_systems(p, p.eta)
        s = rs.S[rng.randrange(len(rs.S))]
        picks = [t[rng.randrange(len(t))] for t in rs.T]
        xi = np.random.default_rng(SEED + k).uniform(-5, 5, size=(100, 2))
        for x in xi:
            parseval_worst = max(parseval_worst, abs(parseval_check(p, s, picks, x) - 1))
    ok = failures == 0 and parseval_worst < 1e-9
    record(7, ok, f"{failures} class failures over 96000 pairs, Parseval max deviation {parseval_worst:.2e}")
    assert failures == 0
    assert parseval_worst < 1e-9


def test_criterion_8_invariance():
    rng = random.Random(SEED)
    instances = mixed_instances(30, seed=SEED) + SPECTRAL_50[:20]
    discrepancies = 0
    checks = 0
    for m, d in instances:
        ref = decide(m, d, certificate=False).spectral
        variants = [(m, dd) for dd in d.relabelings()]
        variants += [(m, DigitSet4(k * d.alpha1, k * d.alpha2, k * d.beta1, k * d.beta2)) for k in (-3, -2, -1, 1, 2, 3)]
        for _ in range(50):
            p = random_sl2(rng)
            variants.append((la.as_int_matrix(la.matmul(la.matmul(p, m), la.inverse(p))), d.transformed(p)))
        for mm, dd in variants:
            checks += 1
            discrepancies += decide(mm, dd, certificate=False).spectral != ref
        for k in range(-3, 4):
            checks += 1
            discrepancies += decide(m, d, certificate=False, bezout_shift=k).spectral != ref
    record(8, discrepancies == 0, f"{checks} transformed decisions, {discrepancies} discrepancies")
    assert discrepancies == 0


def test_criterion_9_moran_transfer():
    rng = random.Random(SEED)
    worst = 0.0
    instances = SPECTRAL_50[:5] + mixed_instances(5, seed=SEED)
    for idx, (m, d) in enumerate(instances):
        cf = decide(m, d, certificate=False).canonical
        a = [((cf.scale, 0), (0, cf.scale)), m, ((2, 1), (-1, 3))][idx % 3]
        mor = moran_finite(a, m, d, 4)
        lift = np.array([[float(x) for x in row] for row in la.matmul(la.transpose(a), la.inverse(la.transpose(m)))])
        xi = np.random.default_rng(rng.randrange(2**32)).uniform(-5, 5, size=(100, 2))
        lhs = mor.transform(xi @ lift.T)
        rhs = muhat_truncated(m, d, xi, 4)
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    record(9, worst < 1e-9, f"10 instances x 100 samples at level 4, max deviation {worst:.2e}")
    assert worst < 1e-9


def test_criterion_10_clique_oracle():
    cases = [
        (((2, 0), (0, 2)), D1, 3),
        (((2, 0), (2, 2)), D2, 4),
        (((2, 0), (4, 2)), D2, 3),
        (((2, 1), (0, 2)), D1, 4),
        (((3, 0), (0, 3)), D1, 4),
    ]
    rng = random.Random(SEED)
    cases += [(m, d, 3) for m, d in SPECTRAL_50[:2]]
    while len(cases) < 10:
        m, d = random_expansive(rng, -4, 4), random_digits(rng, -3, 3)
        if not decide(m, d, certificate=False).spectral:
            cases.append((m, d, 4))
    mismatches = []
    sizes = []
    for m, d, r in cases:
        got = orthogonal_clique_search(m, d, r)
        want = max_clique_oracle(m, d, r)
        sizes.append(len(got))
        if len(got) != want:
            mismatches.append((m, d, r, len(got), want))
    record(10, not mismatches, f"10 instances, sizes {sizes}, {len(mismatches)} mismatches")
    assert not mismatches
