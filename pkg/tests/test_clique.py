import pytest

from oracles import D1, D2, max_clique_oracle, zero_by_iteration
from spectral_affine import construct_admissible, orthogonal_clique_search, tower_spectrum
from spectral_affine.errors import ResourceCap

I2 = ((2, 0), (0, 2))


def _pairwise_ok(m, d, lam):
    return all(zero_by_iteration(m, d.digits(), (u[0] - v[0], u[1] - v[1])) for i, u in enumerate(lam) for v in lam[i + 1:])


def test_spectral_instance_box():
    lam = orthogonal_clique_search(I2, D1, 3)
    assert len(lam) >= 16 and (0, 0) in lam
    c = construct_admissible(I2, D1)
    tower = set(tower_spectrum(c.Mbar, c.Dbar, c.Cbar, 2))
    assert all(max(abs(x) for x in v) <= 3 for v in tower)
    # the tower fits in the box, so the maximum cannot be smaller
    assert len(lam) >= len(tower)
    assert _pairwise_ok(I2, D1, lam)


def test_non_spectral_instance_matches_oracle():
    m = ((2, 0), (2, 2))
    lam = orthogonal_clique_search(m, D2, 4)
    assert (0, 0) in lam and _pairwise_ok(m, D2, lam)
    assert len(lam) == max_clique_oracle(m, D2, 4)


def test_kmax_caps_and_determinism():
    lam = orthogonal_clique_search(I2, D1, 3, kmax=5)
    assert len(lam) == 5 and (0, 0) in lam
    assert orthogonal_clique_search(I2, D1, 3, kmax=5) == lam
    assert orthogonal_clique_search(I2, D1, 0) == [(0, 0)]


@pytest.mark.parametrize("radius, kmax", [(31, 10), (3, 65)])
def test_resource_caps(radius, kmax):
    with pytest.raises(ResourceCap):
        orthogonal_clique_search(I2, D1, radius, kmax)
