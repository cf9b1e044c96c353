import json

import numpy as np
import pytest

from config import PROGRAMS_DIR
from services.algorithms import dipole_spec, hamiltonian_matrix
from services.errors import HamiltonianSpecError
from services.hamiltonian import load_hamiltonian
from services.semantics import max_abs_diff


def _document(**overrides):
    document = {"n": 1, "t": 0.5, "steps": 2, "terms": [{"lambda": 1.0, "pattern": "|1>"}]}
    document.update(overrides)
    return json.dumps(document)


def test_dipole_file_matches_builder():
    spec, document = load_hamiltonian((PROGRAMS_DIR / "dipole.json").read_text(encoding="utf-8"))
    assert len(spec.components) == 20
    assert (document.t, document.steps) == (1.0, 8)
    expected = hamiltonian_matrix(dipole_spec(1.0, 0.7, 0.3))
    assert max_abs_diff(hamiltonian_matrix(spec), expected) < 1e-12


def test_minimal_document():
    spec, document = load_hamiltonian(_document())
    assert spec.n == 1
    assert spec.components[0].lam == 1.0
    np.testing.assert_allclose(hamiltonian_matrix(spec), np.diag([0, 1]))


def test_steps_default_to_one():
    _, document = load_hamiltonian('{"n": 0, "t": 1.0}')
    assert document.steps == 1
    assert document.terms == []


def test_prelude_gates_are_visible_in_patterns():
    spec, _ = load_hamiltonian(_document(n=2, terms=[{"lambda": 0.5, "pattern": "CX . (|1> x |0>)"}]))
    assert max_abs_diff(hamiltonian_matrix(spec), np.diag([0, 0, 0, 0.5])) < 1e-12


def test_invalid_json():
    with pytest.raises(HamiltonianSpecError, match="invalid JSON"):
        load_hamiltonian("{n: 1")


@pytest.mark.parametrize("overrides, field", [
    ({"n": -1}, "n"),
    ({"steps": 0}, "steps"),
    ({"t": "soon"}, "t"),
    ({"terms": [{"lambda": "big", "pattern": "|1>"}]}, "terms.0.lambda"),
    ({"terms": [{"lambda": 1.0}]}, "terms.0.pattern"),
    ({"terms": [{"lambda": 1.0, "pattern": "|1>", "weight": 2}]}, "terms.0.weight"),
    ({"extra": True}, "extra"),
])
def test_schema_errors_name_the_field(overrides, field):
    with pytest.raises(HamiltonianSpecError) as info:
        load_hamiltonian(_document(**overrides))
    assert field in info.value.fields


def test_non_finite_lambda():
    with pytest.raises(HamiltonianSpecError) as info:
        load_hamiltonian('{"n": 1, "t": 1.0, "terms": [{"lambda": Infinity, "pattern": "|1>"}]}')
    assert info.value.fields == ("terms.0.lambda",)


@pytest.mark.parametrize("pattern", ["|1> x", "Q . |1>", "|1> x |0>", "ph(pi)"])
def test_bad_patterns_name_the_term(pattern):
    with pytest.raises(HamiltonianSpecError) as info:
        load_hamiltonian(_document(terms=[{"lambda": 1.0, "pattern": "|0>"}, {"lambda": 1.0, "pattern": pattern}]))
    assert info.value.fields == ("terms.1.pattern",)
