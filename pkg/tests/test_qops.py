import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import qops
import states
from core.exceptions import LayoutConflictError, LayoutError, ValidationError
from core.rng import haar_unitary, stream
from models import QuantumOperator, QuantumVector
from witness import swap_matrix


def random_hermitian(rng, side):
    g = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
    return g + g.conj().T


def random_effect(rng, side):
    u = haar_unitary(rng, side)
    return u @ np.diag(rng.random(side)) @ u.conj().T


def test_tensor_of_identities_is_identity():
    op = qops.tensor([qops.identity(["A"], [2]), qops.identity(["B"], [2])])
    assert op.labels == ("A", "B")
    assert np.allclose(op.data, np.eye(4))


def test_tensor_dimension_arithmetic():
    op = qops.tensor([qops.identity(["A"], [2]), qops.identity(["B"], [3])])
    assert op.side == 6


def test_tensor_builds_canonical_layout(phi_plus):
    tau = qops.identity(["A0"], [2])
    omega = qops.identity(["B0"], [2])
    assert qops.tensor([tau, phi_plus, omega]).labels == qops.CANONICAL_ORDER


def test_tensor_rejects_duplicate_labels():
    with pytest.raises(LayoutConflictError):
        qops.tensor([qops.identity(["A"], [2]), qops.identity(["A"], [2])])


def test_permute_swaps_basis_states():
    ket = QuantumVector.build(["A", "B"], [2, 2], [0, 1, 0, 0])
    swapped = qops.permute_subsystems(qops.projector(ket), ["B", "A"])
    expected = np.zeros((4, 4))
    expected[2, 2] = 1
    assert swapped.labels == ("B", "A")
    assert np.array_equal(swapped.data, expected)


def test_permute_round_trip_is_exact():
    rng = stream(1)
    op = QuantumOperator.build(["A0", "A", "B"], [2, 3, 2], random_hermitian(rng, 12))
    back = qops.permute_subsystems(qops.permute_subsystems(op, ["B", "A0", "A"]), ["A0", "A", "B"])
    assert np.array_equal(back.data, op.data)


def test_permute_rejects_unknown_label():
    with pytest.raises(LayoutError):
        qops.permute_subsystems(qops.identity(["A", "B"], [2, 2]), ["A", "C"])


def test_permuted_effect_matches_index_contraction():
    rng = stream(2)
    P = random_effect(rng, 4)
    Q = random_effect(rng, 4)
    tau = np.array([[0.5, -0.5j], [0.5j, 0.5]])
    omega = np.array([[0.7, 0.1], [0.1, 0.3]])
    rho = random_effect(rng, 4)
    rho = rho / np.trace(rho)

    effect = qops.tensor([
        QuantumOperator.build(["A", "A0"], [2, 2], P),
        QuantumOperator.build(["B0", "B"], [2, 2], Q),
    ])
    Z = qops.to_canonical(effect).data
    question = np.kron(np.kron(tau, rho), omega)
    via_layout = np.trace(Z @ question)

    # P[a a0, a' a0'] Q[b0 b, b0' b'] tau[a0', a0] rho[a' b', a b] omega[b0', b0]
    p4 = P.reshape(2, 2, 2, 2)
    q4 = Q.reshape(2, 2, 2, 2)
    r4 = rho.reshape(2, 2, 2, 2)
    direct = np.einsum("xiXI,jyJY,Ii,XYxy,Jj->", p4, q4, tau, r4, omega)
    assert via_layout == pytest.approx(direct, abs=1e-12)


def test_partial_trace_of_bell_state(phi_plus):
    reduced = qops.partial_trace(phi_plus, ["A"])
    assert reduced.labels == ("A",)
    assert np.allclose(reduced.data, np.eye(2) / 2)


def test_partial_trace_of_product():
    rho_a = np.array([[0.6, 0.2], [0.2, 0.4]])
    rho_b = np.eye(3) / 3
    op = QuantumOperator.build(["A", "B"], [2, 3], np.kron(rho_a, rho_b))
    assert np.allclose(qops.partial_trace(op, ["A"]).data, rho_a)


def test_partial_trace_to_scalar(phi_plus):
    scalar = qops.partial_trace(phi_plus, [])
    assert scalar.data.shape == (1, 1)
    assert scalar.data[0, 0] == pytest.approx(1.0)


def test_partial_transpose_of_bell_state_is_half_swap(phi_plus):
    assert np.allclose(qops.partial_transpose(phi_plus, ["B"]).data, swap_matrix(2) / 2)


def test_partial_transpose_is_an_involution():
    rng = stream(3)
    op = QuantumOperator.build(["A", "B"], [2, 3], random_hermitian(rng, 6))
    twice = qops.partial_transpose(qops.partial_transpose(op, ["B"]), ["B"])
    assert np.array_equal(twice.data, op.data)


def test_eig_hermitian_descending(w_de):
    vals, vecs = qops.eig_hermitian(w_de.op)
    assert np.allclose(vals, [1, -1, -1, -1])
    assert np.max(np.abs(vecs @ np.diag(vals) @ vecs.conj().T - w_de.op.data)) < 1e-10


def test_eig_hermitian_of_bell_partial_transpose(phi_plus):
    vals, _ = qops.eig_hermitian(qops.partial_transpose(phi_plus, ["B"]))
    assert np.allclose(vals, [0.5, 0.5, 0.5, -0.5])


def test_eig_hermitian_rejects_non_hermitian():
    op = QuantumOperator.build(["A"], [2], [[0, 1], [0, 0]])
    with pytest.raises(ValidationError):
        qops.eig_hermitian(op)


def test_positive_part_examples(w_de, phi_plus):
    proj, weight = qops.positive_part(w_de.op)
    assert weight == pytest.approx(1.0)
    assert np.allclose(proj.data, phi_plus.data)

    proj, weight = qops.positive_part(qops.identity(["A"], [2]))
    assert weight == pytest.approx(2.0)
    assert np.allclose(proj.data, np.eye(2))

    proj, weight = qops.positive_part(QuantumOperator.build(["A"], [2], -np.eye(2)))
    assert weight == 0.0
    assert np.allclose(proj.data, 0)


def test_schmidt_examples():
    bell = qops.schmidt_decompose(states.bell("phi+"), (["A"], ["B"]))
    assert np.allclose(bell.coefficients, [1 / np.sqrt(2)] * 2)
    assert bell.rank == 2

    product = qops.schmidt_decompose(states.product_vector([1, 0], [1, 0]), (["A"], ["B"]))
    assert np.allclose(product.coefficients, [1, 0])
    assert product.rank == 1

    vec = QuantumVector.build(["A", "B"], [2, 2], [np.sqrt(0.8), 0, 0, np.sqrt(0.2)])
    form = qops.schmidt_decompose(vec, (["A"], ["B"]))
    assert np.allclose(form.coefficients, [np.sqrt(0.8), np.sqrt(0.2)])
    assert np.max(np.abs(form.reconstruct() - vec.vec)) < 1e-12


def test_schmidt_rejects_unnormalized_vector():
    vec = QuantumVector.build(["A", "B"], [2, 2], [1, 0, 0, 1])
    with pytest.raises(ValidationError):
        qops.schmidt_decompose(vec, (["A"], ["B"]))


@settings(deadline=None, max_examples=30)
@given(seed=st.integers(0, 2**32 - 1), d_a=st.integers(1, 3), d_b=st.integers(1, 3))
def test_trace_and_norm_properties(seed, d_a, d_b):
    rng = stream(seed)
    X = QuantumOperator.build(["A"], [d_a], random_hermitian(rng, d_a))
    Y = QuantumOperator.build(["B"], [d_b], random_hermitian(rng, d_b))
    XY = qops.tensor([X, Y])
    assert np.trace(XY.data) == pytest.approx(np.trace(X.data) * np.trace(Y.data), rel=1e-10, abs=1e-10)

    pt = qops.partial_transpose(XY, ["B"])
    assert np.trace(pt.data) == pytest.approx(np.trace(XY.data), abs=1e-10)
    assert np.linalg.norm(pt.data) == pytest.approx(np.linalg.norm(XY.data), rel=1e-12)

    permuted = qops.permute_subsystems(XY, ["B", "A"])
    assert np.allclose(np.linalg.eigvalsh(permuted.data), np.linalg.eigvalsh(XY.data), atol=1e-10)


@settings(deadline=None, max_examples=20)
@given(seed=st.integers(0, 2**32 - 1))
def test_positive_part_dominates_every_effect(seed):
    rng = stream(seed)
    op = QuantumOperator.build(["A"], [4], random_hermitian(rng, 4))
    _, weight = qops.positive_part(op)
    for _ in range(20):
        E = random_effect(rng, 4)
        assert np.trace(E @ op.data).real <= weight + 1e-9


@settings(deadline=None, max_examples=20)
@given(seed=st.integers(0, 2**32 - 1))
def test_schmidt_of_random_product_has_rank_one(seed):
    rng = stream(seed)
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    vec = states.product_vector(a / np.linalg.norm(a), b / np.linalg.norm(b))
    form = qops.schmidt_decompose(vec, (["A"], ["B"]))
    assert form.rank == 1
    assert np.sum(form.coefficients ** 2) == pytest.approx(1.0, abs=1e-12)
