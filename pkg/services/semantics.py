"""
Dense-matrix semantics: the reference every compilation result is checked against.

Convention: qubit 0 is the leftmost tensor factor and the most significant
bit of a basis-state index, so ``Tensor(a, b)`` denotes ``kron(A, B)``.
"""
import logging
from functools import reduce
from typing import Iterable, Sequence, Tuple

import numpy as np

from config import SIMULATION_QUBIT_CAP, STRUCTURAL_TOLERANCE
from services.core_ast import (
    Identity, IfLet, Ket, KetLabel, PCompose, PTensor, PatternExpr, Phase, Seq, Tensor,
    TermExpr, Unitary,
)
from services.errors import QphDomainError, ShapeError, SimulationCapError
from services.evaluator import NormalClause, clause_term
from services.typecheck import type_of_pattern, type_of_term

logger = logging.getLogger(__name__)

ComplexMatrix = np.ndarray

_ROOT_HALF = 1.0 / np.sqrt(2.0)
_KET_VECTORS = {
    KetLabel.ZERO: np.array([[1.0], [0.0]], dtype=complex),
    KetLabel.ONE: np.array([[0.0], [1.0]], dtype=complex),
    KetLabel.PLUS: np.array([[_ROOT_HALF], [_ROOT_HALF]], dtype=complex),
    KetLabel.MINUS: np.array([[_ROOT_HALF], [-_ROOT_HALF]], dtype=complex),
}
_ORTHOGONAL_KET = {
    KetLabel.ZERO: KetLabel.ONE,
    KetLabel.ONE: KetLabel.ZERO,
    KetLabel.PLUS: KetLabel.MINUS,
    KetLabel.MINUS: KetLabel.PLUS,
}


def _check_cap(qubits: int, cap: int) -> None:
    if qubits > cap:
        raise SimulationCapError(qubits, cap)


def sem_term(t: TermExpr, cap: int = SIMULATION_QUBIT_CAP) -> ComplexMatrix:
    """
    Unitary matrix of a well-typed term.

    Args:
        t: elaborated term of type ``unitary n``
        cap: largest ``n`` (and largest pattern output) allowed

    Returns:
        ``2^n x 2^n`` complex matrix

    Raises:
        TypeCheckError: ``t`` is ill-typed
        SimulationCapError: ``n`` exceeds ``cap``
    """
    n = type_of_term(t).n
    _check_cap(n, cap)
    logger.debug("dense semantics of a %d-qubit term", n)
    return _term_matrix(t, cap)


def sem_pattern(p: PatternExpr, cap: int = SIMULATION_QUBIT_CAP) -> ComplexMatrix:
    """Isometry ``2^m x 2^j`` of a pattern of type ``pattern j m``."""
    _check_cap(type_of_pattern(p).m, cap)
    return _pattern_matrix(p, cap)


def ortho_complement(p: PatternExpr, cap: int = SIMULATION_QUBIT_CAP) -> ComplexMatrix:
    """
    Isometry onto the orthogonal complement of the image of ``p``.

    Returns:
        ``2^m x (2^m - 2^j)`` matrix ``P⊥`` with ``P† P⊥ = 0`` and ``[P | P⊥]`` unitary
    """
    _check_cap(type_of_pattern(p).m, cap)
    return _pattern_pair(p, cap)[1]


def _term_matrix(t: TermExpr, cap: int) -> ComplexMatrix:
    if isinstance(t, Phase):
        return np.array([[np.exp(1j * t.theta.radians)]], dtype=complex)
    if isinstance(t, Identity):
        _check_cap(t.n, cap)
        return np.eye(2 ** t.n, dtype=complex)
    if isinstance(t, Seq):
        return _term_matrix(t.second, cap) @ _term_matrix(t.first, cap)
    if isinstance(t, Tensor):
        return np.kron(_term_matrix(t.left, cap), _term_matrix(t.right, cap))
    if isinstance(t, IfLet):
        iota = _pattern_matrix(t.pattern, cap)
        body = _term_matrix(t.body, cap)
        projector = iota @ iota.conj().T
        return iota @ body @ iota.conj().T + np.eye(projector.shape[0], dtype=complex) - projector
    raise QphDomainError(f"no semantics for {t!r}")


def _pattern_matrix(p: PatternExpr, cap: int) -> ComplexMatrix:
    if isinstance(p, Ket):
        return _KET_VECTORS[p.label].copy()
    if isinstance(p, Unitary):
        return _term_matrix(p.term, cap)
    if isinstance(p, PCompose):
        return _pattern_matrix(p.outer, cap) @ _pattern_matrix(p.inner, cap)
    if isinstance(p, PTensor):
        return np.kron(_pattern_matrix(p.left, cap), _pattern_matrix(p.right, cap))
    raise QphDomainError(f"no semantics for pattern {p!r}")


def _pattern_pair(p: PatternExpr, cap: int) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """(P, P⊥) built together so each subpattern is simulated once."""
    if isinstance(p, Ket):
        return _KET_VECTORS[p.label].copy(), _KET_VECTORS[_ORTHOGONAL_KET[p.label]].copy()
    if isinstance(p, Unitary):
        matrix = _term_matrix(p.term, cap)
        return matrix, np.zeros((matrix.shape[0], 0), dtype=complex)
    if isinstance(p, PCompose):
        outer, outer_perp = _pattern_pair(p.outer, cap)
        inner, inner_perp = _pattern_pair(p.inner, cap)
        return outer @ inner, np.hstack([outer @ inner_perp, outer_perp])
    if isinstance(p, PTensor):
        left, left_perp = _pattern_pair(p.left, cap)
        right, right_perp = _pattern_pair(p.right, cap)
        complement = np.hstack([
            np.kron(left_perp, right),
            np.kron(left, right_perp),
            np.kron(left_perp, right_perp),
        ])
        return np.kron(left, right), complement
    raise QphDomainError(f"no semantics for pattern {p!r}")


def matrix_of_clauses(cs: Sequence[NormalClause], n: int, cap: int = SIMULATION_QUBIT_CAP) -> ComplexMatrix:
    """Product ``sem(c_N) ... sem(c_1)`` of a clause list over ``n`` qubits."""
    _check_cap(n, cap)
    matrix = np.eye(2 ** n, dtype=complex)
    for clause in cs:
        if clause.selector.n != n:
            raise ShapeError(f"clause over {clause.selector.n} qubit(s) in a {n}-qubit list")
        matrix = _term_matrix(clause_term(clause), cap) @ matrix
    return matrix


# ---------------------------------------------------------------------------
# Matrix helpers
# ---------------------------------------------------------------------------

def max_abs_diff(a: ComplexMatrix, b: ComplexMatrix) -> float:
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    return m.conj().T


def is_isometry(m: ComplexMatrix, tol: float = STRUCTURAL_TOLERANCE) -> bool:
    """``M† M = I`` within ``tol`` (entrywise)."""
    return max_abs_diff(dagger(m) @ m, np.eye(m.shape[1], dtype=complex)) < tol


def is_unitary(m: ComplexMatrix, tol: float = STRUCTURAL_TOLERANCE) -> bool:
    return m.shape[0] == m.shape[1] and is_isometry(m, tol) and is_isometry(dagger(m), tol)


def kron_all(matrices: Iterable[ComplexMatrix]) -> ComplexMatrix:
    return reduce(np.kron, matrices, np.eye(1, dtype=complex))


def basis_state(bits: str) -> ComplexMatrix:
    """Column vector for a bit string such as ``"0110"`` (qubit 0 first)."""
    if any(b not in "01" for b in bits):
        raise QphDomainError(f"basis state must be a bit string, got {bits!r}")
    state = np.zeros((2 ** len(bits), 1), dtype=complex)
    state[int(bits, 2) if bits else 0, 0] = 1.0
    return state


def bit_reversal_permutation(n: int) -> ComplexMatrix:
    """Permutation sending ``|x_0 ... x_{n-1}>`` to ``|x_{n-1} ... x_0>``."""
    size = 2 ** n
    perm = np.zeros((size, size), dtype=complex)
    for index in range(size):
        reversed_index = int(format(index, f"0{n}b")[::-1], 2) if n else 0
        perm[reversed_index, index] = 1.0
    return perm


def dft_matrix(n: int) -> ComplexMatrix:
    """``F[y][x] = 2^{-n/2} e^{2πi xy / 2^n}``."""
    size = 2 ** n
    grid = np.outer(np.arange(size), np.arange(size))
    return np.exp(2j * np.pi * grid / size) / np.sqrt(size)


def format_matrix(m: ComplexMatrix) -> str:
    """CLI print format: ``dim r c`` then rows of ``<re><+/-><im>j`` entries."""
    rows, cols = m.shape
    lines = [f"dim {rows} {cols}"]
    for row in m:
        entries = []
        for value in row:
            re = round(float(value.real), 8) + 0.0
            im = round(float(value.imag), 8) + 0.0
            entries.append(f"{re:.8f}{im:+.8f}j")
        lines.append(" ".join(entries))
    return "\n".join(lines) + "\n"
