import math

import numpy as np
import pytest

from catbundle.groups import (
    SO2_GEN,
    CyclicGroup,
    SpecialOrthogonalGroup,
    StructuralError,
    SymmetricGroup,
    is_skew,
    perm_cycles,
    perm_from_cycles,
    perm_inv,
    perm_mul,
    rotation2,
    skew3,
    skew_exp,
)


def test_cyclic_laws():
    z5 = CyclicGroup(5)
    for a in z5.elements:
        assert z5.mul(a, z5.inv(a)) == z5.identity
        for b in z5.elements:
            assert z5.mul(a, b) == (a + b) % 5


def test_perm_mul_applies_right_factor_first():
    # p∘q means apply q first: (p∘q)(i) = p(q(i))
    p = (1, 0, 2)  # (0 1)
    q = (0, 2, 1)  # (1 2)
    assert perm_mul(p, q) == (1, 2, 0)
    assert perm_mul(q, p) == (2, 0, 1)
    assert perm_mul(p, perm_inv(p)) == (0, 1, 2)


def test_perm_cycle_notation_roundtrip():
    s4 = SymmetricGroup(4)
    for p in s4.elements:
        assert perm_from_cycles(perm_cycles(p), 4) == p
    assert perm_cycles((0, 1, 2)) == "e"
    assert perm_from_cycles("(0 1)(2 3)", 4) == (1, 0, 3, 2)


def test_symmetric_group_structure():
    s3 = SymmetricGroup(3)
    assert len(s3.elements) == 6
    assert s3.identity == (0, 1, 2)
    for p in s3.elements:
        assert s3.mul(p, s3.inv(p)) == s3.identity
        assert s3.contains(p)
    assert not s3.contains((0, 0, 1))


def test_skew_exp_so2_matches_rotation():
    for theta in (-2.0, -0.3, 0.0, 0.7, 3.1):
        assert np.allclose(skew_exp(theta * SO2_GEN), rotation2(theta), atol=1e-15)


def test_skew_exp_so3_rotation_about_z():
    theta = 0.8
    got = skew_exp(skew3([0, 0, theta]))
    c, s = math.cos(theta), math.sin(theta)
    want = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    assert np.allclose(got, want, atol=1e-14)


def test_skew_exp_small_angle_series():
    a = skew3([1e-10, -2e-10, 1e-10])
    got = skew_exp(a)
    assert np.allclose(got, np.eye(3) + a, atol=1e-18)
    assert np.allclose(got @ got.T, np.eye(3), atol=1e-15)


def test_skew_exp_rejects_other_shapes():
    with pytest.raises(StructuralError):
        skew_exp(np.zeros((4, 4)))


def test_so_groups_laws_and_membership():
    rng = np.random.default_rng(0)
    for n in (2, 3):
        so = SpecialOrthogonalGroup(n)
        for _ in range(20):
            a, b = so.sample(rng), so.sample(rng)
            assert so.contains(a)
            assert so.contains(so.mul(a, b))
            assert so.eq(so.mul(a, so.inv(a)), so.identity)
        assert not so.contains(np.eye(n) * 2)


def test_so_sampling_is_seed_deterministic():
    so3 = SpecialOrthogonalGroup(3)
    a = so3.sample(np.random.default_rng(42))
    b = so3.sample(np.random.default_rng(42))
    assert np.array_equal(a, b)


def test_is_skew():
    assert is_skew(skew3([1.0, 2.0, 3.0]))
    assert not is_skew(np.eye(3))
