import numpy as np
import pytest

from kmu_verify.contact import canonical_structure, random_structure, validate_structure
from kmu_verify.errors import DomainError, InvalidStructureError, MissingParameterError


@pytest.mark.parametrize("kappa", [1.0, 0.5, 0.0, -2.0])
def test_canonical_and_rotated_structures_validate(kappa):
    c = 0.7 if kappa == 1.0 else None
    for S in (canonical_structure(2, kappa, c), random_structure(3, kappa, c, seed=4)):
        rep = validate_structure(S, tol=1e-12)
        assert rep.passed, rep.failures()


def test_non_sasakian_constants():
    S = canonical_structure(2, 0.5)
    assert S.c == -2.0 and S.mu == 1.5
    assert np.allclose(np.linalg.eigvalsh(S.h), [-np.sqrt(0.5)] * 2 + [0.0] + [np.sqrt(0.5)] * 2)


def test_sasakian_needs_c():
    with pytest.raises(MissingParameterError):
        canonical_structure(2, 1.0)
    S = canonical_structure(2, 1.0, -3.0)
    assert S.is_sasakian and S.mu == 0.0 and not S.h.any()


def test_domain_errors():
    with pytest.raises(DomainError):
        canonical_structure(2, 1.5)
    with pytest.raises(DomainError):
        canonical_structure(2, 0.5, c_sasakian=1.0)


def test_corrupted_h_is_rejected():
    S = canonical_structure(2, 0.5)
    h = S.h.copy()
    h[0, 0] += 0.01
    bad = S.replace(h=h)
    rep = validate_structure(bad)
    assert "h_squared" in rep.failures()
    with pytest.raises(InvalidStructureError, match="h_squared"):
        bad.require_valid()


def test_wrong_constants_are_rejected():
    S = canonical_structure(2, 0.5)
    assert set(validate_structure(S.replace(mu=3.0)).failures()) == {"mu_constraint"}
    assert set(validate_structure(S.replace(c=1.0)).failures()) == {"c_constraint"}


def test_random_structure_is_seeded():
    a, b = random_structure(2, 0.3, seed=9), random_structure(2, 0.3, seed=9)
    assert np.array_equal(a.phi, b.phi) and np.array_equal(a.h, b.h)
