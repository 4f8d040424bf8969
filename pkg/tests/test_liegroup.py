import math

import numpy as np
import pytest
from scipy.linalg import expm

from weilfunctor import AlgebraError, AlgebraElement, NotInvertibleError, dual, jet, tensor_product
from weilfunctor.algebra import exchange_iso
from weilfunctor.liegroup import (
    LiftedLieAlgebraElement,
    LiftedMatrix,
    exp_terms,
    fiber_action,
    group_identity,
    group_inv,
    group_mul,
    lifted_bracket,
    lifted_exp,
    project,
    pure_tensor,
    push_hom_matrix,
    random_group,
    random_lie,
    semidirect_check,
    zero_section,
)


def dmat(real, slot):
    """2x2-style lifted matrix over D from its real and eps parts."""
    return np.stack([np.asarray(real, float), np.asarray(slot, float)], axis=-1)


def rot(t):
    return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])


def test_identity_is_neutral():
    rng = np.random.default_rng(0)
    m = random_group(jet(2), 3, "GL", rng)
    e = group_identity(jet(2), 3)
    assert np.array_equal(group_mul(e, m).entries, m.entries)
    assert np.array_equal((m @ e).entries, m.entries)


def test_one_by_one_inverse():
    m = LiftedMatrix(dual(), [[[2.0, 3.0]]])
    inv = group_inv(m)
    assert np.allclose(inv.entries[0, 0], [0.5, -0.75])


def test_so2_inverse_is_transpose():
    t, dt = 0.7, 1.3
    drot = np.array([[-math.sin(t), -math.cos(t)], [math.cos(t), -math.sin(t)]])
    m = LiftedMatrix(dual(), dmat(rot(t), dt * drot), "SO")
    inv = group_inv(m)
    assert np.allclose(inv.entries, m.entries.transpose(1, 0, 2))
    assert np.allclose(group_mul(m, inv).entries, group_identity(dual(), 2, "SO").entries)


def test_group_membership_checks():
    with pytest.raises(NotInvertibleError, match=r"not in T_A GL\(2\)"):
        LiftedMatrix(dual(), dmat([[1, 2], [2, 4]], np.eye(2)))
    with pytest.raises(AlgebraError, match="SO"):
        LiftedMatrix(dual(), dmat(rot(0.2), np.eye(2)), "SO")  # eps part not tangent
    with pytest.raises(AlgebraError, match="unipotent"):
        LiftedMatrix(dual(), dmat([[1, 5], [0, 1]], [[1, 0], [0, 0]]), "unipotent")
    with pytest.raises(AlgebraError, match="shape"):
        LiftedMatrix(dual(), np.zeros((2, 3, 2)))


def test_exp_of_zero():
    z = LiftedLieAlgebraElement(jet(3), np.zeros((3, 3, 4)), "antisymmetric")
    assert np.allclose(lifted_exp(z).entries, group_identity(jet(3), 3, "SO").entries)


def test_unipotent_exp_terminates():
    x = np.zeros((3, 3, 2))
    x[0, 1] = [1.0, 0.5]
    x[1, 2] = [2.0, 0.0]
    got = lifted_exp(LiftedLieAlgebraElement(dual(), x, "strictly_upper"))
    assert got.group == "unipotent"
    want = np.eye(3) + x[..., 0] + x[..., 0] @ x[..., 0] / 2
    assert np.allclose(got.shadow(), want)
    eps = x[..., 1] + (x[..., 0] @ x[..., 1] + x[..., 1] @ x[..., 0]) / 2
    assert np.allclose(got.entries[..., 1], eps)


def test_so2_exp_slot_is_rotation_derivative():
    theta, delta = 0.9, -0.4
    gen = np.array([[0.0, -1.0], [1.0, 0.0]])
    x = LiftedLieAlgebraElement(dual(), dmat(theta * gen, delta * gen), "antisymmetric")
    m = lifted_exp(x)
    assert np.allclose(m.shadow(), rot(theta))
    drot = np.array([[-math.sin(theta), -math.cos(theta)], [math.cos(theta), -math.sin(theta)]])
    assert np.allclose(m.entries[..., 1], delta * drot)


@pytest.mark.parametrize("alg_name", ["dual", "jet3", "dd"])
def test_exp_shadow_is_matrix_exp(alg_name):
    alg = {"dual": dual(), "jet3": jet(3), "dd": tensor_product(dual(), dual())}[alg_name]
    rng = np.random.default_rng(3)
    x = random_lie(alg, 3, "none", rng)
    assert np.allclose(lifted_exp(x).shadow(), expm(x.shadow()), rtol=1e-12)


def test_exp_first_order_matches_fd():
    rng = np.random.default_rng(4)
    x = random_lie(dual(), 3, "none", rng)
    x0, x1 = x.shadow(), x.entries[..., 1]
    h = 1e-6
    fd = (expm(x0 + h * x1) - expm(x0 - h * x1)) / (2 * h)
    assert np.allclose(lifted_exp(x).entries[..., 1], fd, atol=1e-7)


def test_exp_terms_grow_with_height():
    assert exp_terms(0.0, 1) >= 1
    assert exp_terms(2.0, 3) > exp_terms(2.0, 1)


def test_bracket_of_self_vanishes():
    rng = np.random.default_rng(5)
    x = random_lie(jet(2), 3, "none", rng)
    assert np.allclose(lifted_bracket(x, x).entries, 0)


def test_gl2_pure_tensor_same_coefficient():
    x = tensor_product(dual(), dual())
    a = AlgebraElement(x, [0.0, 1.0, 0.0, 0.0])
    rng = np.random.default_rng(6)
    X, Y = rng.standard_normal((2, 2, 2))
    br = lifted_bracket(pure_tensor(X, a), pure_tensor(Y, a))
    # a^2 = 0, so [X (x) a, Y (x) a] = [X, Y] (x) a^2 = 0
    assert np.allclose(br.entries, 0)


def test_so3_basis_brackets():
    e = np.zeros((3, 3, 3))
    e[0][2, 1], e[0][1, 2] = 1, -1
    e[1][0, 2], e[1][2, 0] = 1, -1
    e[2][1, 0], e[2][0, 1] = 1, -1
    one = AlgebraElement(dual(), [1.0, 0.0])
    eps = AlgebraElement(dual(), [0.0, 1.0])
    br = lifted_bracket(pure_tensor(e[0], one, "antisymmetric"), pure_tensor(e[1], eps, "antisymmetric"))
    assert np.allclose(br.entries, pure_tensor(e[2], eps).entries)


def test_bracket_tag_mismatch():
    a = LiftedLieAlgebraElement(dual(), np.zeros((2, 2, 2)), "antisymmetric")
    b = LiftedLieAlgebraElement(dual(), np.zeros((2, 2, 2)), "none")
    with pytest.raises(AlgebraError, match="tags differ"):
        lifted_bracket(a, b)


def test_lie_tag_checks():
    with pytest.raises(AlgebraError, match="antisymmetric"):
        LiftedLieAlgebraElement(dual(), np.ones((2, 2, 2)), "antisymmetric")
    with pytest.raises(AlgebraError, match="strictly upper"):
        LiftedLieAlgebraElement(dual(), np.ones((2, 2, 2)), "strictly_upper")


def test_zero_section():
    assert np.array_equal(zero_section(np.eye(3), "GL", jet(2)).entries, group_identity(jet(2), 3).entries)
    g = rot(1.1)
    assert np.allclose(project(zero_section(g, "SO", dual())), g)
    with pytest.raises(AlgebraError):
        zero_section(np.diag([1.0, -1.0]), "SO", dual())


@pytest.mark.parametrize("group", ["GL", "SO", "unipotent"])
def test_semidirect_reassembly(group):
    rng = np.random.default_rng(7)
    for alg in (dual(), jet(2), tensor_product(dual(), dual())):
        m = random_group(alg, 3, group, rng)
        rep = semidirect_check(m)
        assert rep.ok and rep.residual < 1e-10
        assert np.allclose(project(rep.fiber), np.eye(3))


def test_fiber_action_fixes_fiber():
    rng = np.random.default_rng(8)
    u = semidirect_check(random_group(jet(2), 2, "GL", rng)).fiber
    moved = fiber_action(np.array([[2.0, 1.0], [0.0, 1.0]]), u)
    assert np.allclose(project(moved), np.eye(2))


def test_push_hom_commutes_with_exp():
    alg = tensor_product(dual(), jet(2))
    phi = exchange_iso(dual(), jet(2))
    x = random_lie(alg, 2, "antisymmetric", np.random.default_rng(9))
    a = push_hom_matrix(phi, lifted_exp(x))
    b = lifted_exp(push_hom_matrix(phi, x))
    assert np.allclose(a.entries, b.entries, atol=1e-12)
