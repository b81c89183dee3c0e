import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from wickrot.curvature import constant_curvature_block
from wickrot.holomorphic import DimensionError, Signature
from wickrot.lie import cartan_decompose, basis_opq
from wickrot.tensors import (
    Tensor,
    TensorShape,
    act_algebra,
    act_group,
    cartan_split,
    compact_conjugation,
    extend_involution,
    hermitian_form,
    moment_matrix,
    outer,
    tensor_inner_product,
)

from support import random_complex_orthogonal, random_opq

y1, y2 = np.eye(2)


def contra(array):
    return Tensor.from_array(array, contravariant=np.ndim(array))


def random_tensor(rng, n, k, m):
    shape = (n,) * (k + m)
    return Tensor.from_array(rng.normal(size=shape) + 1j * rng.normal(size=shape), contravariant=k)


shapes = st.tuples(st.integers(2, 4), st.integers(0, 2), st.integers(0, 2)).filter(lambda t: t[1] + t[2] > 0)


def test_group_action_examples():
    v = contra(y1)
    assert act_group(np.eye(2), v).components.tolist() == v.components.tolist()
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert np.allclose(act_group(rot, v).components, y2)
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(act_group(swap, contra(outer(y1, y1))).components, outer(y2, y2))


def test_algebra_action_examples():
    v = contra(outer(y1, y1))
    assert act_algebra(np.zeros((2, 2)), v).max_abs() == 0
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert np.allclose(act_algebra(rot, contra(y1)).components, y2)
    x = np.array([[0.0, 0.0], [1.0, 0.0]])  # x(y1) = y2
    assert np.allclose(act_algebra(x, v).components, outer(y2, y1) + outer(y1, y2))


def test_inner_product_examples():
    u = contra(outer(y1, y2))
    assert tensor_inner_product(u, u) == 1
    w = contra(np.array([0.6, 0.8]))
    assert np.isclose(tensor_inner_product(1j * w, 1j * w), -1)
    s2 = constant_curvature_block(2, 1.0, (2, 0)).riemann_tensor()
    assert tensor_inner_product(s2, s2) == 4


def test_hermitian_form_examples():
    assert hermitian_form(contra(outer(y1, y2)), contra(outer(y1, y2))) == 1
    assert hermitian_form(contra(1j * y1), contra(1j * y1)) == 1
    assert hermitian_form(contra(y1 + 1j * y2), contra(y1 + 1j * y2)) == 2


def test_extended_involution_examples():
    base = np.diag([1.0, -1.0])
    shape = TensorShape.single(2, 2, 0)
    t = extend_involution(base, shape)
    assert np.allclose(t(contra(outer(y1, y2))).components, -outer(y1, y2))
    assert np.allclose(t(contra(outer(y2, y2))).components, outer(y2, y2))
    v = contra(outer(y1, y1) + 2 * outer(y1, y2))
    assert np.allclose(extend_involution(np.eye(2), shape)(v).components, v.components)


def test_extend_involution_rejects_non_involution():
    with pytest.raises(ValueError):
        extend_involution(np.diag([1.0, 2.0]), TensorShape.single(2, 1, 0))


def test_cartan_split_examples():
    t = extend_involution(np.diag([1.0, -1.0]), TensorShape.single(2, 2, 0))
    v = contra(outer(y1, y1) + outer(y1, y2))
    plus, minus = cartan_split(v, t)
    assert np.allclose(plus.components, outer(y1, y1))
    assert np.allclose(minus.components, outer(y1, y2))
    fixed = contra(outer(y2, y2))
    p, m = cartan_split(fixed, t)
    assert np.allclose(p.components, fixed.components) and m.max_abs() == 0
    anti = contra(outer(y2, y1))
    p, m = cartan_split(anti, t)
    assert p.max_abs() == 0 and np.allclose(m.components, anti.components)


def test_shape_mismatch_errors():
    a = contra(y1)
    b = contra(outer(y1, y1))
    with pytest.raises(DimensionError):
        tensor_inner_product(a, b)
    with pytest.raises(DimensionError):
        act_group(np.eye(3), a)
    with pytest.raises(DimensionError):
        act_algebra(np.eye(3), a)


def test_non_finite_components_are_rejected():
    with pytest.raises(FloatingPointError):
        Tensor.from_array([1.0, np.inf])


@given(shapes, st.integers(0, 2**32 - 1))
def test_equivariance(shape, seed):
    rng = np.random.default_rng(seed)
    n, k, m = shape
    v = random_tensor(rng, n, k, m)
    g, h = random_complex_orthogonal(n, rng), random_complex_orthogonal(n, rng)
    lhs = act_group(g, act_group(h, v))
    rhs = act_group(g @ h, v)
    assert (lhs - rhs).max_abs() < 1e-9 * max(1.0, v.max_abs())


@given(shapes, st.integers(0, 2**32 - 1))
def test_bilinear_form_is_invariant(shape, seed):
    rng = np.random.default_rng(seed)
    n, k, m = shape
    u, v = random_tensor(rng, n, k, m), random_tensor(rng, n, k, m)
    g = random_complex_orthogonal(n, rng, 0.3)
    before = tensor_inner_product(u, v)
    after = tensor_inner_product(act_group(g, u), act_group(g, v))
    assert abs(after - before) < 1e-8 * max(1.0, abs(before))


@given(shapes, st.integers(0, 2**32 - 1))
def test_algebra_action_is_the_derivative(shape, seed):
    rng = np.random.default_rng(seed)
    n, k, m = shape
    v = random_tensor(rng, n, k, m)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    x = a - a.T
    eps = 1e-6
    central = (act_group(expm(eps * x), v) - act_group(expm(-eps * x), v)) / (2 * eps)
    assert (central - act_algebra(x, v)).max_abs() < 1e-6 * max(1.0, v.max_abs())


@given(shapes, st.integers(0, 2**32 - 1))
def test_hermitian_form_positive(shape, seed):
    rng = np.random.default_rng(seed)
    n, k, m = shape
    v = random_tensor(rng, n, k, m)
    h = hermitian_form(v, v)
    assert h.real > 0 and abs(h.imag) < 1e-12 * h.real
    assert hermitian_form(Tensor.zeros(v.shape), Tensor.zeros(v.shape)) == 0


@given(shapes, st.integers(0, 2**32 - 1))
def test_moment_matrix_matches_algebra_action(shape, seed):
    rng = np.random.default_rng(seed)
    n, k, m = shape
    w = random_tensor(rng, n, k, m)
    mu = moment_matrix(w)
    for _ in range(3):
        x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        direct = hermitian_form(act_algebra(x, w), w)
        assert abs(np.sum(x * mu) - direct) < 1e-10 * max(1.0, abs(direct))


@pytest.mark.parametrize("sig", [Signature(2, 1), Signature(2, 2)], ids=str)
def test_involution_commutes_with_compact_subgroup(sig):
    rng = np.random.default_rng(3)
    theta = np.diag(sig.diag).astype(complex)
    shape = TensorShape.single(sig.n, 1, 2)
    t = extend_involution(theta, shape)
    k_dirs = cartan_decompose(basis_opq(sig)).k_complex_frame()
    k = expm(sum(rng.normal() * x for x in k_dirs))
    v = random_tensor(rng, sig.n, 1, 2)
    assert (t(act_group(k, v)) - act_group(k, t(v))).max_abs() < 1e-12


def test_pseudo_frame_round_trip_and_real_group_action():
    rng = np.random.default_rng(5)
    sig = Signature(2, 2)
    a = rng.normal(size=(4, 4, 4))
    v = Tensor.from_pseudo_frame(a, sig, contravariant=1)
    assert np.allclose(v.to_pseudo_frame(sig), a)
    lam = random_opq(sig, rng)
    from wickrot.lie import GroupElement

    moved = act_group(GroupElement(lam, "real", sig), v).to_pseudo_frame(sig)
    direct = np.einsum("ai,jb,kc,ijk->abc", lam, np.linalg.inv(lam), np.linalg.inv(lam), a)
    assert np.allclose(moved, direct)
    assert np.abs(moved.imag).max() < 1e-12


def test_direct_sum_keeps_blocks_independent():
    a = contra(y1)
    b = Tensor.from_array(outer(y1, y2))
    s = Tensor.direct_sum(a, b)
    assert s.shape.slots == ((1, 0), (0, 2))
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    moved = act_group(rot, s)
    assert np.allclose(moved.blocks[0], act_group(rot, a).components)
    assert np.allclose(moved.blocks[1], act_group(rot, b).components)
    assert compact_conjugation(s.shape)(s * 1j).blocks[1][0, 1] == -1j
