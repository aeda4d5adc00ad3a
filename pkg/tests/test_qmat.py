import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_state
from nssim.qmat import (
    I2,
    X,
    Y,
    Z,
    check_density_matrix,
    dagger,
    dumps_operator,
    embed,
    frobenius_inner,
    ket,
    kron,
    loads_operator,
    partial_trace,
    projector,
    single_qubit_rotation,
    swap,
)

seeds = st.integers(0, 2**32 - 1)


def test_kron_identity():
    assert np.array_equal(kron(I2, I2), np.eye(4))


def test_kron_first_factor_is_most_significant():
    assert np.allclose(kron(Z, I2) @ ket("10"), -ket("10"), atol=0)
    assert np.allclose(kron(Z, I2) @ ket("01"), ket("01"), atol=0)


def test_kron_xx_is_antidiagonal_ones():
    assert np.array_equal(kron(X, X), np.fliplr(np.eye(4)))


def test_partial_trace_product_state():
    rho = projector(ket("000"))
    assert np.allclose(partial_trace(rho, keep={2}), projector(ket("0")), atol=1e-12)


def test_partial_trace_bell_marginal():
    bell = (ket("00") + ket("11")) / np.sqrt(2)
    assert np.allclose(partial_trace(projector(bell), keep={1}), I2 / 2, atol=1e-12)


def test_partial_trace_keeps_ascending_order():
    rho = kron(projector(ket("0")), projector(ket("1")), projector(ket("0")))
    assert np.allclose(partial_trace(rho, keep=[3, 2]), projector(ket("10")), atol=0)


@pytest.mark.parametrize("keep", [set(), {0}, {4}])
def test_partial_trace_bad_keep(keep):
    with pytest.raises(ValueError):
        partial_trace(np.eye(8) / 8, keep=keep)


def test_basic_linear_algebra():
    assert np.array_equal(dagger(Y), Y)
    assert frobenius_inner(X, X) == 2
    assert np.trace(kron(Z, Z)) == 0
    with pytest.raises(ValueError):
        frobenius_inner(X, np.eye(4))


def test_rotation_examples():
    assert np.allclose(single_qubit_rotation((0, 0, 1), 0.0), I2, atol=1e-15)
    assert np.allclose(single_qubit_rotation((1, 0, 0), np.pi), -1j * X, atol=1e-15)
    out = single_qubit_rotation((0, 1, 0), np.pi / 2) @ ket("0")
    assert abs(abs(out[1]) ** 2 - 0.5) < 1e-15


def test_rotation_rejects_non_unit_axis():
    with pytest.raises(ValueError):
        single_qubit_rotation((1, 1, 0), 1.0)


def test_swap_exchanges_qubits():
    assert np.array_equal(swap(1, 3, 3) @ ket("011"), ket("110"))
    assert np.array_equal(swap(2, 3, 3) @ swap(2, 3, 3), np.eye(8))


def test_density_matrix_validation():
    check_density_matrix(np.eye(2) / 2)
    with pytest.raises(ValueError):
        check_density_matrix(np.eye(2))
    with pytest.raises(ValueError):
        check_density_matrix(np.array([[0.5, 1], [0, 0.5]]))
    with pytest.raises(ValueError):
        check_density_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        check_density_matrix(np.eye(3) / 3)


@given(seeds)
def test_kron_associative(seed):
    rng = np.random.default_rng(seed)
    # small Gaussian-integer entries keep every product exact in floating point
    a, b, c = (rng.integers(-9, 9, (2, 2)) + 1j * rng.integers(-9, 9, (2, 2)) for _ in range(3))
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))
    assert np.array_equal(kron(a, b, c), kron(a, kron(b, c)))


@given(seeds)
def test_partial_trace_factorizes(seed):
    rng = np.random.default_rng(seed)
    ra, rb = random_state(rng, 2), random_state(rng, 4)
    assert np.max(np.abs(partial_trace(kron(ra, rb), keep={1}) - ra)) < 1e-12
    assert np.max(np.abs(partial_trace(kron(ra, rb), keep={2, 3}) - rb)) < 1e-12


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-10, 10))
def test_rotation_unitary(a, b, c, angle):
    v = np.array([a, b, c])
    if np.linalg.norm(v) < 1e-3:
        return
    u = single_qubit_rotation(v / np.linalg.norm(v), angle)
    assert np.max(np.abs(dagger(u) @ u - I2)) < 1e-12


@given(seeds, st.integers(1, 3))
def test_embed_round_trip(seed, k):
    rng = np.random.default_rng(seed)
    u = single_qubit_rotation((0, 0, 1), rng.uniform(0, 2 * np.pi)) @ single_qubit_rotation((1, 0, 0), rng.uniform(0, 2 * np.pi))
    states = [random_state(rng, 2) for _ in range(3)]
    full = kron(*states)
    op = embed(u, k, 3)
    out = partial_trace(op @ full @ dagger(op), keep={k})
    assert np.max(np.abs(out - u @ states[k - 1] @ dagger(u))) < 1e-12


@settings(max_examples=50)
@given(seeds)
def test_json_round_trip_bit_exact(seed):
    rng = np.random.default_rng(seed)
    op = rng.normal(size=(4, 4)) * 10.0 ** rng.integers(-20, 20) + 1j * rng.normal(size=(4, 4))
    assert np.array_equal(loads_operator(dumps_operator(op)), op)
