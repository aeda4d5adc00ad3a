import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nssim.algebra import (
    ErrorModel,
    build_axial_algebra,
    build_collective_algebra,
    collective_axis_change,
    collective_generator,
    commutant,
    error_model_dimension,
    full_algebra,
    heisenberg_coupling,
    max_commutator_norm,
    membership_residual,
    named_span,
    product_span,
    span_of,
    symmetrize,
)
from nssim.nmr import InternalHamiltonian, hamiltonian_matrix
from nssim.qmat import Z, embed, ket, pauli_string


@pytest.fixture(scope="module")
def ac():
    return build_collective_algebra()


def test_symmetrize_zz():
    expected = pauli_string("ZZI") + pauli_string("IZZ") + pauli_string("ZIZ")
    assert np.array_equal(symmetrize("ZZI"), expected)


def test_symmetrize_single_arrangements():
    assert np.array_equal(symmetrize("ZZZ"), pauli_string("ZZZ"))
    assert np.array_equal(symmetrize("III"), np.eye(8))


@pytest.mark.parametrize("word,terms", [("ZZI", 3), ("ZXI", 6), ("XYZ", 6), ("ZZZ", 1), ("XII", 3)])
def test_symmetrize_term_counts(word, terms):
    # distinct Pauli strings are Frobenius orthogonal with norm^2 = 8 each
    assert np.isclose(np.linalg.norm(symmetrize(word)) ** 2, 8 * terms)


def test_collective_generator_eigenvalues():
    jz = collective_generator("z")
    assert np.allclose(jz @ ket("000"), 1.5 * ket("000"))
    assert np.allclose(jz @ ket("011"), -0.5 * ket("011"))


def test_angular_momentum_commutator():
    jx, jy, jz = (collective_generator(u) for u in "xyz")
    assert np.max(np.abs(jx @ jy - jy @ jx - 1j * jz)) < 1e-14


def test_collective_dimension(ac):
    assert ac.dim == 20
    assert np.max(np.abs(ac.gram() - np.eye(20))) < 1e-10


@pytest.mark.parametrize("n,dim", [(1, 4), (2, 10), (3, 20), (4, 35)])
def test_collective_dimension_formula(n, dim):
    assert build_collective_algebra(n).dim == dim == (n + 1) * (n + 2) * (n + 3) // 6


def test_collective_contains_generators(ac):
    for op in [np.eye(8), *(collective_generator(u) for u in "xyz")]:
        assert membership_residual(op, ac) < 1e-10


@pytest.mark.parametrize("axis", "xyz")
def test_axial_algebra(ac, axis):
    az = build_axial_algebra(axis)
    assert az.dim == 4
    assert all(membership_residual(b, ac) < 1e-10 for b in az.basis)


def test_axial_x_is_hadamard_conjugate():
    az, ax = build_axial_algebra("z"), build_axial_algebra("x")
    h3 = collective_axis_change("x")
    for b in az.basis:
        assert membership_residual(h3 @ b @ h3.conj().T, ax) < 1e-10
    assert membership_residual(collective_generator("x"), ax) < 1e-10
    assert membership_residual(collective_generator("y"), build_axial_algebra("y")) < 1e-10


def test_commutant_dimensions(ac):
    assert commutant(ac).dim == 5
    assert commutant(build_axial_algebra("z")).dim == 20
    assert commutant(full_algebra()).dim == 1


def test_commutant_wedderburn_cross_check(ac):
    # multiplicities 1 (j=3/2) and 2 (j=1/2): 1^2 + 2^2
    assert commutant(ac).dim == 1**2 + 2**2
    # A_c itself: block sizes 4 and 2 -> 4^2 + 2^2
    assert ac.dim == 4**2 + 2**2


def test_membership_residual_examples(ac):
    assert membership_residual(collective_generator("z"), ac) < 1e-12
    assert membership_residual(embed(Z, 1, 3), ac) > 0.1
    assert membership_residual(np.zeros((8, 8)), ac) == 0.0
    with pytest.raises(ValueError):
        membership_residual(np.eye(4), ac)


def test_hamiltonian_not_in_ac_or_commutant(ac):
    hs = hamiltonian_matrix(InternalHamiltonian())
    assert membership_residual(hs, ac) > 0.1
    assert membership_residual(hs, commutant(ac)) > 0.1


def test_product_spans(ac):
    az, ax = build_axial_algebra("z"), build_axial_algebra("x")
    assert product_span(az, ax, both_orders=True).dim == 20
    assert product_span(az, az).dim == 4
    assert product_span(ac, ac).dim == 20


def test_product_span_one_order_is_smaller():
    # A_z A_x alone misses part of A_c; the reverse products are needed
    az, ax = build_axial_algebra("z"), build_axial_algebra("x")
    assert product_span(az, ax).dim < 20


@pytest.mark.parametrize(
    "model,dim",
    [
        ("general-independent-arbitrary", 64),
        ("general-independent-weak", 10),
        ("axial-independent-arbitrary", 8),
        ("axial-independent-weak", 4),
        ("general-collective-arbitrary", 20),
        ("general-collective-weak", 4),
        ("axial-collective-arbitrary", 4),
        ("axial-collective-weak", 2),
    ],
)
def test_error_model_dimensions(model, dim):
    assert error_model_dimension(model) == dim
    assert error_model_dimension(ErrorModel(model)) == dim


@pytest.mark.parametrize("name", ["ac", "az", "ax"])
def test_commutant_commutes(name):
    span = named_span(name)
    assert max_commutator_norm(span, commutant(span)) < 1e-9


def test_double_commutant_contains_ac(ac):
    cc = commutant(commutant(ac))
    assert all(membership_residual(b, cc) < 1e-9 for b in ac.basis)


def test_heisenberg_couplings_in_commutant(ac):
    comm = commutant(ac)
    for j, k in ((1, 2), (2, 3), (3, 1)):
        assert membership_residual(heisenberg_coupling(j, k), comm) < 1e-10


def test_named_span_unknown():
    with pytest.raises(KeyError):
        named_span("nope")


def test_span_rejects_empty_and_mixed():
    with pytest.raises(ValueError):
        span_of([])
    with pytest.raises(ValueError):
        span_of([np.eye(2), np.eye(4)])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from("IXYZ"), min_size=3, max_size=3))
def test_symmetrized_words_are_permutation_invariant(letters):
    from nssim.qmat import swap

    op = symmetrize("".join(letters))
    for i, j in ((1, 2), (2, 3), (1, 3)):
        p = swap(i, j, 3)
        assert np.array_equal(p @ op @ p, op)
