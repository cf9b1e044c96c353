import math

import numpy as np
import pytest
from hypothesis import given, settings

from config import PROGRAMS_DIR
from services.circuit import (
    Circuit, Control, GlobalPhase, Hadamard, MCPhase, Polarity, circuit_matrix, circuit_stats,
    clauses_to_circuit, mc_phase, read_circuit, write_circuit,
)
from services.core_ast import Angle
from services.errors import CircuitFormatError, QphDomainError, SimulationCapError
from services.evaluator import NormalClause, SimplePattern, SimpleSlot, normalize
from services.parser import elaborate, parse_file
from services.prelude import get_prelude
from services.semantics import matrix_of_clauses, max_abs_diff, sem_term
from services.typecheck import type_of_term
from tests.strategies import sized_terms

PI = Angle(math.pi)
ONE, ZERO = Polarity.ONE, Polarity.ZERO


def clause(theta, *slots):
    return NormalClause(SimplePattern(tuple(slots)), theta)


def test_minus_slot_is_hadamard_conjugated():
    circuit = clauses_to_circuit([clause(PI, SimpleSlot.MINUS)], 1)
    assert circuit.gates == (Hadamard(0), MCPhase(PI, (Control(0, ONE),)), Hadamard(0))


def test_controlled_z():
    circuit = clauses_to_circuit([clause(PI, SimpleSlot.ONE, SimpleSlot.ONE)], 2)
    assert circuit.gates == (MCPhase(PI, (Control(0, ONE), Control(1, ONE))),)


def test_uncontrolled_clause_is_global_phase():
    theta = Angle(0.7)
    circuit = clauses_to_circuit([clause(theta, SimpleSlot.ID, SimpleSlot.ID)], 2)
    assert circuit.gates == (GlobalPhase(theta),)


def test_hadamard_order():
    slots = (SimpleSlot.PLUS, SimpleSlot.ZERO, SimpleSlot.MINUS)
    circuit = clauses_to_circuit([clause(PI, *slots)], 3)
    assert circuit.gates == (
        Hadamard(0), Hadamard(2),
        MCPhase(PI, (Control(0, ZERO), Control(1, ZERO), Control(2, ONE))),
        Hadamard(2), Hadamard(0),
    )


def test_selector_length_must_match():
    with pytest.raises(QphDomainError):
        clauses_to_circuit([clause(PI, SimpleSlot.ONE)], 2)


def test_gate_validation():
    assert mc_phase(PI, []) == GlobalPhase(PI)
    with pytest.raises(QphDomainError):
        MCPhase(PI, (Control(0, ONE), Control(0, ZERO)))
    with pytest.raises(QphDomainError):
        Circuit(1, (Hadamard(1),))


def test_hadamard_matrix():
    expected = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    np.testing.assert_allclose(circuit_matrix(Circuit(1, (Hadamard(0),))), expected, atol=1e-15)


def test_one_controlled_phase_is_z():
    matrix = circuit_matrix(Circuit(1, (MCPhase(PI, (Control(0, ONE),)),)))
    np.testing.assert_allclose(matrix, np.diag([1, -1]), atol=1e-15)


def test_zero_control_polarity():
    matrix = circuit_matrix(Circuit(2, (MCPhase(PI, (Control(0, ZERO), Control(1, ONE))),)))
    np.testing.assert_allclose(matrix, np.diag([1, -1, 1, 1]), atol=1e-15)


def test_hadamard_on_second_qubit():
    matrix = circuit_matrix(Circuit(2, (Hadamard(1),)))
    expected = np.kron(np.eye(2), np.array([[1, 1], [1, -1]]) / math.sqrt(2))
    np.testing.assert_allclose(matrix, expected, atol=1e-15)


def test_global_phase_matrix():
    theta = 0.3
    matrix = circuit_matrix(Circuit(2, (GlobalPhase(Angle(theta)),)))
    np.testing.assert_allclose(matrix, np.exp(1j * theta) * np.eye(4), atol=1e-15)


def test_plus_clause_is_conjugated_zero_control():
    clauses = [clause(PI, SimpleSlot.PLUS, SimpleSlot.PLUS)]
    hh = np.kron(*[np.array([[1, 1], [1, -1]]) / math.sqrt(2)] * 2)
    expected = hh @ np.diag([-1, 1, 1, 1]) @ hh
    np.testing.assert_allclose(circuit_matrix(clauses_to_circuit(clauses, 2)), expected, atol=1e-12)


def test_cap():
    with pytest.raises(SimulationCapError):
        circuit_matrix(Circuit(3, ()), cap=2)


def test_write_cz():
    circuit = clauses_to_circuit([clause(PI, SimpleSlot.ONE, SimpleSlot.ONE)], 2)
    assert write_circuit(circuit) == "qubits 2\nmcp 3.1415926535897931 +0 +1\n"


def test_write_x():
    circuit = clauses_to_circuit([clause(PI, SimpleSlot.MINUS)], 1)
    assert write_circuit(circuit) == "qubits 1\nh 0\nmcp 3.1415926535897931 +0\nh 0\n"


def test_write_global_phase():
    circuit = Circuit(0, (GlobalPhase(Angle(math.pi / 2)),))
    assert write_circuit(circuit) == "qubits 0\ngp 1.5707963267948966\n"


def test_read_zero_control():
    circuit = read_circuit("qubits 3\nmcp -0.5 -2 +0\n")
    assert circuit == Circuit(3, (MCPhase(Angle(-0.5), (Control(2, ZERO), Control(0, ONE))),))


@pytest.mark.parametrize("text, line", [
    ("qubits 1\nh 0", 2),
    ("h 0\n", 1),
    ("qubits 1\nx 0\n", 2),
    ("qubits 1\n\n", 2),
    ("qubits 1\nmcp 1.0\n", 2),
    ("qubits 1\nmcp nan +0\n", 2),
    ("qubits 1\nh 0\nh 1\n", 3),
    ("qubits 2\nmcp 1.0 +0 -0\n", 2),
    ("qubits 2\nmcp 1.0 *0\n", 2),
    ("qubits 1\nh \u00b2\n", 2),
    ("qubits \u00b2\n", 1),
    ("qubits 2\nmcp 1.0 +\u00b9\n", 2),
])
def test_read_errors_carry_line_numbers(text, line):
    with pytest.raises(CircuitFormatError) as info:
        read_circuit(text)
    assert info.value.line_number == line


def test_stats():
    circuit = clauses_to_circuit([clause(PI, SimpleSlot.PLUS, SimpleSlot.ONE)], 2)
    assert circuit_stats(circuit) == {
        "qubits": 2, "gates": 3, "hadamard": 2, "mcphase": 1, "global_phase": 0, "max_controls": 2,
    }


@pytest.mark.parametrize("path", sorted(PROGRAMS_DIR.glob("*.qph")), ids=lambda p: p.name)
def test_corpus_compiles_and_round_trips(path):
    term = elaborate(parse_file(path.read_text(encoding="utf-8")), get_prelude())
    n = type_of_term(term).n
    circuit = clauses_to_circuit(normalize(term), n)
    assert read_circuit(write_circuit(circuit)) == circuit
    assert max_abs_diff(circuit_matrix(circuit), sem_term(term)) < 1e-9


@given(sized_terms(max_qubits=4, max_depth=4))
@settings(max_examples=200)
def test_circuit_agrees_with_clauses(case):
    term, n = case
    clauses = normalize(term)
    circuit = clauses_to_circuit(clauses, n)
    assert max_abs_diff(circuit_matrix(circuit), matrix_of_clauses(clauses, n)) < 1e-10
    assert max_abs_diff(circuit_matrix(circuit), sem_term(term)) < 1e-9
    assert read_circuit(write_circuit(circuit)) == circuit
