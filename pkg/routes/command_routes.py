"""
Command handlers behind the CLI.

Each ``handle_<command>`` does the work of one subcommand, writes its output
and returns the process exit status.
"""
import logging
from pathlib import Path
from typing import Optional, Sequence, Tuple

import click

from config import COMPILED_TOLERANCE
from services.algorithms import (
    dipole_spec, ghz_program, grover_program, qet_program, qft, qft_with_reversal,
    qsp_program, trotter_error, trotterize,
)
from services.circuit import circuit_matrix, circuit_stats, clauses_to_circuit, write_circuit
from services.core_ast import TermExpr
from services.errors import QphError
from services.evaluator import fuse_clauses, normalize
from services.hamiltonian import load_hamiltonian
from services.parser import elaborate, elaborate_pattern, parse_file, parse_pattern, pretty
from services.prelude import get_prelude, prelude_arities, prelude_environment, prelude_term
from services.semantics import format_matrix, matrix_of_clauses, max_abs_diff, sem_term
from services.typecheck import type_of_term

logger = logging.getLogger(__name__)


def _fail(exc: Exception) -> int:
    click.echo(f"❌ {type(exc).__name__}: {exc}", err=True)
    return 1


def _load_term(path: str) -> Tuple[TermExpr, int]:
    source = parse_file(Path(path).read_text(encoding="utf-8"))
    term = elaborate(source, get_prelude())
    n = type_of_term(term).n
    logger.debug("loaded %s: %d qubit(s)", path, n)
    return term, n


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
        click.echo(f"✅ wrote {output}", err=True)
    else:
        click.echo(text, nl=False)


def handle_parse(path: str) -> int:
    try:
        term, _ = _load_term(path)
    except QphError as exc:
        return _fail(exc)
    click.echo(pretty(term))
    return 0


def handle_check(path: str) -> int:
    try:
        _, n = _load_term(path)
    except QphError as exc:
        return _fail(exc)
    click.echo(f"unitary {n}")
    return 0


def handle_compile(path: str, output: Optional[str], fuse: bool, stats: bool) -> int:
    """Normalize, optionally fuse, and write the circuit text format."""
    try:
        term, n = _load_term(path)
        clauses = normalize(term)
        if fuse:
            clauses = fuse_clauses(clauses)
        circuit = clauses_to_circuit(clauses, n)
        _emit(write_circuit(circuit), output)
    except QphError as exc:
        return _fail(exc)
    if stats:
        summary = circuit_stats(circuit)
        click.echo(" ".join(f"{key}={value}" for key, value in summary.items()), err=True)
    return 0


def handle_matrix(path: str, compiled: bool) -> int:
    try:
        term, n = _load_term(path)
        if compiled:
            matrix = circuit_matrix(clauses_to_circuit(normalize(term), n))
        else:
            matrix = sem_term(term)
    except QphError as exc:
        return _fail(exc)
    click.echo(format_matrix(matrix), nl=False)
    return 0


def handle_verify(path: str) -> int:
    """
    Compare the source semantics with the clause list and with the compiled circuit.

    Prints the larger of the two differences; exit 0 iff it is below the
    compiled tolerance.
    """
    try:
        term, n = _load_term(path)
        clauses = normalize(term)
        source = sem_term(term)
        clause_diff = max_abs_diff(source, matrix_of_clauses(clauses, n))
        circuit_diff = max_abs_diff(source, circuit_matrix(clauses_to_circuit(clauses, n)))
    except QphError as exc:
        return _fail(exc)
    worst = max(clause_diff, circuit_diff)
    click.echo(f"{worst:.3e}")
    details = f"{len(clauses)} clause(s), clauses {clause_diff:.3e}, circuit {circuit_diff:.3e}"
    if worst < COMPILED_TOLERANCE:
        click.echo(f"✅ verified: {details}", err=True)
        return 0
    click.echo(f"❌ mismatch: {details}", err=True)
    return 1


def handle_normal(path: str, fuse: bool) -> int:
    try:
        term, n = _load_term(path)
        clauses = normalize(term)
    except QphError as exc:
        return _fail(exc)
    if fuse:
        clauses = fuse_clauses(clauses)
    if not clauses:
        click.echo(f"id({n})")
    for clause in clauses:
        click.echo(clause.pretty())
    return 0


def handle_prelude() -> int:
    try:
        arities = prelude_arities()
    except QphError as exc:
        return _fail(exc)
    for name, n in arities.items():
        click.echo(f"{name} : unitary {n}")
    return 0


def handle_example(family: str, qubits: int, omega: int, iterations: Optional[int], bitrev: bool,
                   time: float, steps: int, omegas: Tuple[float, float], coupling: float,
                   signal: float, phis: Sequence[float], unitary: str, projector: str,
                   output: Optional[str]) -> int:
    """Emit a .qph program built by one of the algorithm builders."""
    try:
        if family == "grover":
            term = grover_program(qubits, omega, iterations)
        elif family == "qft":
            term = qft_with_reversal(qubits) if bitrev else qft(qubits)
        elif family == "trotter":
            term = trotterize(dipole_spec(omegas[0], omegas[1], coupling), time, steps)
        elif family == "qsp":
            term = qsp_program(signal, list(phis) or [0.0])
        elif family == "qet":
            pattern = elaborate_pattern(parse_pattern(projector), prelude_environment())
            term = qet_program(prelude_term(unitary), pattern, list(phis))
        else:
            term = ghz_program(qubits)
        type_of_term(term)
        _emit(pretty(term) + "\n", output)
    except QphError as exc:
        return _fail(exc)
    return 0


def handle_simulate(output: Optional[str], hamiltonian: str) -> int:
    """Trotterize a Hamiltonian spec file and report the error against exp(-iHt)."""
    try:
        spec, document = load_hamiltonian(Path(hamiltonian).read_text(encoding="utf-8"))
        term = trotterize(spec, document.t, document.steps)
        if output:
            _emit(pretty(term) + "\n", output)
        error = trotter_error(spec, document.t, document.steps)
    except QphError as exc:
        return _fail(exc)
    click.echo(f"steps {document.steps} error {error:.3e}")
    return 0
