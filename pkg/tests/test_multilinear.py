import itertools

import numpy as np
import pytest

from clifbundle.multilinear import (
    DimensionMismatchError,
    LinearMap,
    Tensor,
    alternate,
    contract,
    is_alternating,
    permutation_parity,
    pullback,
    tensor_product,
)


def outer_oracle(s: Tensor, t: Tensor) -> np.ndarray:
    """Direct loop construction of the product components."""
    out = np.zeros((s.n,) * (s.p + s.q + t.p + t.q))
    for idx_s in np.ndindex(s.components.shape):
        for idx_t in np.ndindex(t.components.shape):
            up = idx_s[: s.p] + idx_t[: t.p]
            dn = idx_s[s.p :] + idx_t[t.p :]
            out[up + dn] = s.components[idx_s] * t.components[idx_t]
    return out


def alternate_oracle(t: Tensor) -> np.ndarray:
    """Permutation-sum antisymmetrization computed by explicit index loops."""
    q = t.q
    out = np.zeros_like(t.components)
    fact = 1
    for k in range(2, q + 1):
        fact *= k
    for idx in np.ndindex(t.components.shape):
        acc = 0.0
        for perm in itertools.permutations(range(q)):
            permuted = tuple(idx[perm[a]] for a in range(q))
            acc += permutation_parity(perm) * t.components[permuted]
        out[idx] = acc / fact
    return out


def test_scalar_tensor_product_is_multiplication():
    a = Tensor.scalar(2.0, 3)
    b = Tensor.scalar(3.0, 3)
    assert tensor_product(a, b).components == pytest.approx(6.0)


def test_basis_vector_times_basis_covector():
    v = Tensor.basis_vector(1, 2)
    w = Tensor.basis_covector(1, 2)
    prod = tensor_product(v, w)
    assert prod.rank == (1, 1)
    expected = np.zeros((2, 2))
    expected[0, 0] = 1.0
    assert np.array_equal(prod.components, expected)


def test_tensor_product_matches_loop_oracle():
    rng = np.random.default_rng(7)
    v = Tensor(1, 0, 3, rng.normal(size=3))
    w = Tensor(1, 0, 3, rng.normal(size=3))
    prod = tensor_product(v, w)
    for i in range(3):
        for j in range(3):
            assert prod.components[i, j] == pytest.approx(
                v.components[i] * w.components[j]
            )
    s = Tensor(1, 1, 3, rng.normal(size=(3, 3)))
    t = Tensor(0, 2, 3, rng.normal(size=(3, 3)))
    assert np.allclose(tensor_product(s, t).components, outer_oracle(s, t))


def test_tensor_product_associative():
    rng = np.random.default_rng(11)
    a = Tensor(1, 0, 4, rng.normal(size=4))
    b = Tensor(0, 1, 4, rng.normal(size=4))
    c = Tensor(1, 1, 4, rng.normal(size=(4, 4)))
    left = tensor_product(tensor_product(a, b), c)
    right = tensor_product(a, tensor_product(b, c))
    assert np.max(np.abs(left.components - right.components)) < 1e-12


def test_tensor_product_bilinear():
    rng = np.random.default_rng(13)
    a = Tensor(1, 0, 3, rng.normal(size=3))
    b = Tensor(1, 0, 3, rng.normal(size=3))
    w = Tensor(0, 1, 3, rng.normal(size=3))
    lhs = tensor_product(a + 2.0 * b, w)
    rhs = tensor_product(a, w) + 2.0 * tensor_product(b, w)
    assert lhs.allclose(rhs)


def test_tensor_product_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        tensor_product(Tensor.scalar(1.0, 2), Tensor.scalar(1.0, 3))


def test_component_count_enforced():
    with pytest.raises(ValueError):
        Tensor(1, 1, 3, np.zeros(8))


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (1, 1), (2, 1), (0, 4)])
def test_dimension_formula(n, p, q):
    if p + q > 4:
        pytest.skip("rank cap")
    t = Tensor.zeros(p, q, n)
    assert t.components.size == n ** (p + q)


def test_contract_pairs_form_with_vector():
    rng = np.random.default_rng(17)
    v = Tensor(1, 0, 3, rng.normal(size=3))
    w = Tensor(0, 1, 3, rng.normal(size=3))
    c = contract(tensor_product(v, w), 1, 1)
    assert c.rank == (0, 0)
    assert c.components == pytest.approx(float(v.components @ w.components))


def test_contract_identity_gives_trace():
    ident = Tensor(1, 1, 4, np.eye(4))
    assert contract(ident, 1, 1).components == pytest.approx(4.0)


def test_contract_matches_triple_loop_oracle():
    rng = np.random.default_rng(19)
    t = Tensor(2, 1, 3, rng.normal(size=(3, 3, 3)))
    got = contract(t, 2, 1)
    expected = np.zeros(3)
    for i in range(3):
        for k in range(3):
            expected[i] += t.components[i, k, k]
    assert np.allclose(got.components, expected)


def test_contract_linearity():
    rng = np.random.default_rng(23)
    a = Tensor(1, 1, 3, rng.normal(size=(3, 3)))
    b = Tensor(1, 1, 3, rng.normal(size=(3, 3)))
    lhs = contract(a + 2.5 * b, 1, 1)
    rhs = contract(a, 1, 1) + 2.5 * contract(b, 1, 1)
    assert lhs.allclose(rhs)


def test_contract_errors():
    scalar = Tensor.scalar(1.0, 2)
    with pytest.raises(ValueError):
        contract(scalar, 1, 1)
    t = Tensor.zeros(1, 1, 2)
    with pytest.raises(ValueError):
        contract(t, 2, 1)
    with pytest.raises(ValueError):
        contract(t, 1, 0)


def test_alternate_kills_symmetric_part():
    rng = np.random.default_rng(29)
    m = rng.normal(size=(3, 3))
    sym = Tensor(0, 2, 3, m + m.T)
    assert np.max(np.abs(alternate(sym).components)) < 1e-14


def test_alternate_two_form_expansion():
    e1 = Tensor.basis_covector(1, 2)
    e2 = Tensor.basis_covector(2, 2)
    got = alternate(tensor_product(e1, e2))
    expected = 0.5 * (
        tensor_product(e1, e2).components - tensor_product(e2, e1).components
    )
    assert np.allclose(got.components, expected)


def test_alternate_idempotent_and_matches_oracle():
    rng = np.random.default_rng(31)
    t = Tensor(0, 3, 4, rng.normal(size=(4, 4, 4)))
    once = alternate(t)
    assert np.allclose(once.components, alternate_oracle(t))
    assert alternate(once).allclose(once)


@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_alternate_output_is_alternating(q):
    rng = np.random.default_rng(q)
    t = Tensor(0, q, 3, rng.normal(size=(3,) * q))
    assert is_alternating(alternate(t))


def test_alternate_rejects_contravariant():
    with pytest.raises(ValueError):
        alternate(Tensor.zeros(1, 1, 2))


def test_pullback_identity():
    rng = np.random.default_rng(37)
    alpha = Tensor(0, 2, 3, rng.normal(size=(3, 3)))
    assert pullback(LinearMap.identity(3), alpha).allclose(alpha)


def test_pullback_top_form_gives_determinant():
    rng = np.random.default_rng(41)
    f = LinearMap(2, 2, rng.normal(size=(2, 2)))
    e1 = Tensor.basis_covector(1, 2)
    e2 = Tensor.basis_covector(2, 2)
    top = alternate(tensor_product(e1, e2)) * 2.0  # e1 wedge e2 with unit coefficient
    pulled = pullback(f, top)
    det = np.linalg.det(f.matrix)
    assert pulled.allclose(det * top, tol=1e-12)


def test_pullback_contravariant_functoriality():
    rng = np.random.default_rng(43)
    f = LinearMap(3, 3, rng.normal(size=(3, 3)))
    g = LinearMap(3, 3, rng.normal(size=(3, 3)))
    alpha = Tensor(0, 2, 3, rng.normal(size=(3, 3)))
    composed = pullback(f.compose(g), alpha)
    chained = pullback(g, pullback(f, alpha))
    assert composed.allclose(chained, tol=1e-12)
    # loop oracle for the double sum
    expected = np.zeros((3, 3))
    fg = f.matrix @ g.matrix
    for j1 in range(3):
        for j2 in range(3):
            for i1 in range(3):
                for i2 in range(3):
                    expected[j1, j2] += alpha.components[i1, i2] * fg[i1, j1] * fg[i2, j2]
    assert np.allclose(composed.components, expected)


def test_pullback_dimension_mismatch():
    f = LinearMap(2, 3, np.ones((2, 3)))
    alpha = Tensor(0, 1, 3, np.ones(3))
    with pytest.raises(DimensionMismatchError):
        pullback(f, alpha)
    # and the compatible direction works, landing in the domain dimension
    beta = Tensor(0, 1, 2, np.ones(2))
    assert pullback(f, beta).n == 3


# ---------------------------------------------------------------------------
# property-based checks


from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

finite_floats = st.floats(-50.0, 50.0, allow_nan=False, allow_infinity=False)


@st.composite
def covariant_tensors(draw, n=3, max_q=3):
    q = draw(st.integers(1, max_q))
    comp = draw(arrays(float, (n,) * q, elements=finite_floats))
    return Tensor(0, q, n, comp)


@settings(max_examples=40, deadline=None)
@given(covariant_tensors())
def test_alternate_is_projection(t):
    once = alternate(t)
    assert is_alternating(once, tol=1e-9)
    assert alternate(once).allclose(once, tol=1e-9)


@settings(max_examples=40, deadline=None)
@given(covariant_tensors(), st.floats(-3.0, 3.0, allow_nan=False))
def test_alternate_linear(t, c):
    assert alternate(t * c).allclose(alternate(t) * c, tol=1e-8)


@settings(max_examples=40, deadline=None)
@given(
    arrays(float, (3, 3), elements=finite_floats),
    covariant_tensors(max_q=2),
)
def test_pullback_linear_in_form(mat, t):
    f = LinearMap(3, 3, mat)
    lhs = pullback(f, t + t)
    rhs = pullback(f, t) + pullback(f, t)
    assert lhs.allclose(rhs, tol=1e-6)


@settings(max_examples=40, deadline=None)
@given(
    arrays(float, 3, elements=finite_floats),
    arrays(float, 3, elements=finite_floats),
)
def test_contract_recovers_pairing(v_comp, w_comp):
    v = Tensor(1, 0, 3, v_comp)
    w = Tensor(0, 1, 3, w_comp)
    c = contract(tensor_product(v, w), 1, 1)
    assert c.components == pytest.approx(float(v_comp @ w_comp), abs=1e-9)
