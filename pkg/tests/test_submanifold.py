import numpy as np
import pytest

from kmu_verify.algebra import PlaneSection
from kmu_verify.curvature import ambient_curvature_direct
from kmu_verify.errors import HypothesisError, InvalidPlaneError, InvalidSubmanifoldError, ShapeError
from kmu_verify.generators import invariant_submanifold, random_plane, random_submanifold
from kmu_verify.submanifold import (
    SubmanifoldPoint,
    induced_curvature,
    induced_curvature_tensor,
    mean_curvature,
    plane_invariants,
    tangential_operators,
    validate_submanifold,
)


def gauss_by_hand(sub, i, j, k, l):
    """R(e_i,e_j,e_k,e_l) from the vector-form ambient tensor and sigma vectors."""
    E, sv = sub.tangent, sub.sigma_vectors
    amb = ambient_curvature_direct(sub.structure, E[i], E[j], E[k]) @ E[l]
    return amb + sv[i, l] @ sv[j, k] - sv[i, k] @ sv[j, l]


@pytest.mark.parametrize("mode", ["contact", "raw"])
def test_gauss_equation_two_transcriptions(structure, mode):
    sub = random_submanifold(structure, 4, seed=5, mode=mode)
    R = induced_curvature_tensor(sub)
    for idx in np.random.default_rng(0).integers(0, 4, size=(40, 4)):
        assert abs(R[tuple(idx)] - gauss_by_hand(sub, *idx)) < 1e-12


def test_induced_tensor_symmetries(structure):
    R = induced_curvature_tensor(random_submanifold(structure, 5, seed=1))
    assert np.max(np.abs(R + R.transpose(1, 0, 2, 3))) < 1e-12
    assert np.max(np.abs(R - R.transpose(2, 3, 0, 1))) < 1e-12


def test_index_range(structure):
    sub = random_submanifold(structure, 3, seed=0)
    with pytest.raises(IndexError):
        induced_curvature(sub, 0, 1, 2, 3)


def test_contact_mode_validation(structure):
    sub = random_submanifold(structure, 4, seed=2)
    assert validate_submanifold(sub, 1e-10).passed
    raw = random_submanifold(structure, 4, seed=2, mode="raw")
    rep = validate_submanifold(raw, 1e-10, mode="contact")
    assert not rep.passed and "sigma_xi_slice" in rep.failures()
    with pytest.raises(InvalidSubmanifoldError):
        raw.with_sigma(raw.sigma, "contact").require_valid()


def test_shapes(structure):
    sub = random_submanifold(structure, 3, seed=0)
    with pytest.raises(ShapeError):
        SubmanifoldPoint(structure, sub.tangent, sub.normal, sub.sigma[:, :2, :2])


def test_xi_must_be_tangent(structure):
    sub = random_submanifold(structure, 3, seed=0)
    t = sub.tangent.copy()
    t[-1] = sub.normal[0]
    bad = SubmanifoldPoint(structure, t, np.vstack([sub.normal[1:], sub.tangent[-1]]), sub.sigma, "raw")
    with pytest.raises(HypothesisError):
        bad.require_xi_tangent()


def test_plane_invariants_are_basis_independent(structure, rng):
    sub = random_submanifold(structure, 5, seed=3)
    for _ in range(10):
        pl = random_plane(sub, rng)
        base = plane_invariants(sub, pl)
        for th in (0.3, 1.1, -2.0):
            np.testing.assert_allclose(plane_invariants(sub, pl.rotated(th)), base, atol=1e-13)
        np.testing.assert_allclose(plane_invariants(sub, pl.swapped()), base, atol=1e-13)


def test_plane_invariant_ranges(structure, rng):
    sub = random_submanifold(structure, 4, seed=7)
    for _ in range(20):
        a, b, _ = plane_invariants(sub, random_plane(sub, rng))
        assert -1e-14 <= a <= 1 + 1e-14 and -1e-14 <= b <= 1 + 1e-14
    d = plane_invariants(sub, random_plane(sub, rng, "D"))
    assert abs(d[1]) < 1e-14 and abs(d[2]) < 1e-14


def test_non_tangent_plane(structure):
    sub = random_submanifold(structure, 3, seed=0)
    with pytest.raises(InvalidPlaneError):
        plane_invariants(sub, PlaneSection(sub.tangent[0], sub.normal[0]))


def test_invariant_operators(structure):
    ops = tangential_operators(invariant_submanifold(structure, 5, seed=2))
    assert abs(ops.P_norm_sq - 4) < 1e-12
    assert abs(ops.trace_hT) < 1e-12


def test_mean_curvature(structure):
    sub = random_submanifold(structure, 4, seed=1)
    mc = mean_curvature(sub)
    np.testing.assert_allclose(mc.vector, np.einsum("iid->d", sub.sigma_vectors) / 4, atol=1e-14)
    assert abs(mc.sigma_norm_sq - np.sum(sub.sigma_vectors**2)) < 1e-12
