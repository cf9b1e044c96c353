import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.core_ast import (
    KET0, KET1, KET_MINUS, KET_PLUS, Angle, Identity, IfLet, PCompose, PTensor, Phase, Seq,
    Tensor, Unitary,
)
from services.errors import ShapeError, SimulationCapError, TypeCheckError
from services.semantics import (
    basis_state, bit_reversal_permutation, dagger, dft_matrix, format_matrix, is_isometry,
    is_unitary, kron_all, max_abs_diff, ortho_complement, sem_pattern, sem_term,
)
from tests.strategies import patterns, sized_patterns, sized_terms, terms

PI = Angle(math.pi)
ROOT_HALF = 1 / math.sqrt(2)


def test_phase_is_a_scalar():
    np.testing.assert_allclose(sem_term(Phase(Angle(math.pi / 2))), [[1j]], atol=1e-15)


def test_identity():
    np.testing.assert_array_equal(sem_term(Identity(2)), np.eye(4))
    assert sem_term(Identity(0)).shape == (1, 1)


def test_x_from_minus_pattern():
    np.testing.assert_allclose(sem_term(IfLet(KET_MINUS, Phase(PI))), [[0, 1], [1, 0]], atol=1e-15)


def test_z_from_one_pattern():
    np.testing.assert_allclose(sem_term(IfLet(KET1, Phase(PI))), np.diag([1, -1]), atol=1e-15)


def test_sequence_applies_first_term_first():
    x = IfLet(KET_MINUS, Phase(PI))
    s = IfLet(KET1, Phase(Angle(math.pi / 2)))
    expected = np.array([[0, 1], [1, 0]]) @ np.diag([1, 1j])
    np.testing.assert_allclose(sem_term(Seq(s, x)), expected, atol=1e-15)


def test_tensor_puts_qubit_zero_first():
    z_on_first = Tensor(IfLet(KET1, Phase(PI)), Identity(1))
    np.testing.assert_allclose(sem_term(z_on_first), np.diag([1, 1, -1, -1]), atol=1e-15)


@given(sized_terms(max_qubits=2, max_depth=3), sized_terms(max_qubits=2, max_depth=3))
@settings(max_examples=200)
def test_tensor_is_kron_with_left_factor_first(left_case, right_case):
    left, _ = left_case
    right, _ = right_case
    expected = np.kron(sem_term(left), sem_term(right))
    assert max_abs_diff(sem_term(Tensor(left, right)), expected) < 1e-12


def test_kets():
    np.testing.assert_allclose(sem_pattern(KET_PLUS), [[ROOT_HALF], [ROOT_HALF]])
    np.testing.assert_allclose(sem_pattern(KET_MINUS), [[ROOT_HALF], [-ROOT_HALF]])
    np.testing.assert_array_equal(sem_pattern(PTensor(KET0, KET1)), basis_state("01"))


def test_pattern_with_free_qubit_is_an_isometry():
    iota = sem_pattern(PTensor(KET1, Unitary(Identity(1))))
    assert iota.shape == (4, 2)
    assert is_isometry(iota)
    np.testing.assert_array_equal(iota, np.array([[0, 0], [0, 0], [1, 0], [0, 1]]))


def test_pattern_composition():
    s = IfLet(KET1, Phase(Angle(math.pi / 2)))
    iota = sem_pattern(PCompose(Unitary(s), KET_PLUS))
    np.testing.assert_allclose(iota, [[ROOT_HALF], [1j * ROOT_HALF]], atol=1e-15)


def test_ortho_complement_of_ket():
    np.testing.assert_allclose(ortho_complement(KET_PLUS), sem_pattern(KET_MINUS))


def test_ortho_complement_of_unitary_is_empty():
    assert ortho_complement(Unitary(Identity(2))).shape == (4, 0)


def test_ortho_complement_of_tensor():
    perp = ortho_complement(PTensor(KET1, KET1))
    assert perp.shape == (4, 3)
    assert is_isometry(perp)
    np.testing.assert_allclose(dagger(sem_pattern(PTensor(KET1, KET1))) @ perp, np.zeros((1, 3)))


def test_ill_typed_term_is_rejected():
    with pytest.raises(TypeCheckError):
        sem_term(Seq(Identity(1), Identity(2)))


def test_cap_is_enforced():
    with pytest.raises(SimulationCapError):
        sem_term(Identity(3), cap=2)


def test_max_abs_diff():
    assert max_abs_diff(np.eye(2), np.eye(2)) == 0.0
    assert max_abs_diff(np.eye(2), np.diag([1, -1])) == 2.0
    assert max_abs_diff(np.zeros((4, 0)), np.zeros((4, 0))) == 0.0
    with pytest.raises(ShapeError):
        max_abs_diff(np.eye(2), np.eye(4))


def test_is_unitary():
    assert is_unitary(np.array([[0, 1], [1, 0]], dtype=complex))
    assert not is_unitary(np.array([[1, 1], [0, 1]], dtype=complex))
    assert not is_unitary(np.zeros((2, 1)))


def test_kron_all_matches_tensor_order():
    z = np.diag([1, -1])
    np.testing.assert_array_equal(kron_all([z, np.eye(2)]), np.kron(z, np.eye(2)))
    np.testing.assert_array_equal(kron_all([]), np.eye(1))


def test_basis_state_uses_msb_first():
    assert basis_state("10")[2, 0] == 1


def test_bit_reversal():
    perm = bit_reversal_permutation(3)
    np.testing.assert_array_equal(perm @ basis_state("110"), basis_state("011"))
    assert is_unitary(perm)


def test_dft_matrix():
    f = dft_matrix(2)
    assert is_unitary(f)
    assert f[1, 1] == pytest.approx(0.5j)


def test_format_x():
    assert format_matrix(sem_term(IfLet(KET_MINUS, Phase(PI)))) == (
        "dim 2 2\n"
        "0.00000000+0.00000000j 1.00000000+0.00000000j\n"
        "1.00000000+0.00000000j 0.00000000+0.00000000j\n"
    )


def test_format_hides_negative_zero():
    assert format_matrix(np.array([[-1e-17 - 1e-17j]])) == "dim 1 1\n0.00000000+0.00000000j\n"


@given(sized_terms(max_qubits=4, max_depth=4))
@settings(max_examples=200)
def test_every_term_denotes_a_unitary(case):
    term, n = case
    matrix = sem_term(term)
    assert matrix.shape == (2 ** n, 2 ** n)
    assert is_unitary(matrix)


@given(sized_patterns())
@settings(max_examples=200)
def test_pattern_and_complement_split_the_space(case):
    pattern, j, m = case
    iota = sem_pattern(pattern)
    perp = ortho_complement(pattern)
    assert iota.shape == (2 ** m, 2 ** j)
    assert perp.shape == (2 ** m, 2 ** m - 2 ** j)
    assert is_isometry(iota)
    assert is_unitary(np.hstack([iota, perp]))


@st.composite
def nested_if(draw):
    m = draw(st.integers(min_value=1, max_value=3))
    outer, j = draw(patterns(m))
    inner, k = draw(patterns(j))
    return outer, inner, draw(terms(k, depth=2))


@st.composite
def guarded_pair(draw):
    m = draw(st.integers(min_value=1, max_value=3))
    pattern, j = draw(patterns(m))
    return pattern, draw(terms(j, depth=2)), draw(terms(j, depth=2))


@st.composite
def conjugation(draw):
    n = draw(st.integers(min_value=0, max_value=3))
    return draw(terms(n, depth=2)), draw(terms(n, depth=2))


@given(nested_if())
@settings(max_examples=200)
def test_nested_if_is_if_of_composed_pattern(case):
    outer, inner, body = case
    nested = IfLet(outer, IfLet(inner, body))
    assert max_abs_diff(sem_term(nested), sem_term(IfLet(PCompose(outer, inner), body))) < 1e-9


@given(guarded_pair())
@settings(max_examples=200)
def test_if_distributes_over_sequence(case):
    pattern, first, second = case
    split = Seq(IfLet(pattern, first), IfLet(pattern, second))
    assert max_abs_diff(sem_term(IfLet(pattern, Seq(first, second))), sem_term(split)) < 1e-9


@given(conjugation())
@settings(max_examples=200)
def test_unitary_pattern_conjugates(case):
    outer, body = case
    t = sem_term(outer)
    assert max_abs_diff(sem_term(IfLet(Unitary(outer), body)), t @ sem_term(body) @ dagger(t)) < 1e-9
