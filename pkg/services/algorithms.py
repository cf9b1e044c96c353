"""
Builders that emit core-language terms for standard quantum algorithms:
Grover search, the quantum Fourier transform, Trotterized Hamiltonian
simulation, quantum signal processing and the quantum eigenvalue transform.

Every builder returns an elaborated term; nothing here simulates unless the
function name says so (``*_matrix``, ``*_probability``, ``*_error``).
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from services.core_ast import (
    KET0, KET1, KET_MINUS, KET_PLUS, Angle, Identity, IfLet, PCompose, PTensor, PatternExpr,
    Phase, Seq, Tensor, TermExpr, Unitary, ptensor_all, seq_all, tensor_all,
)
from services.errors import QphDomainError
from services.metaops import controlled, invert
from services.prelude import prelude_term
from services.semantics import (
    ComplexMatrix, basis_state, max_abs_diff, sem_pattern, sem_term,
)
from services.typecheck import type_of_pattern, type_of_term

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Grover search
# ---------------------------------------------------------------------------

def grover_oracle(n: int, omega: int) -> TermExpr:
    """
    ``if |w_0> x ... x |w_{n-1}> { ph(pi) }``, i.e. ``I - 2|w><w|``.

    Args:
        n: qubit count (at least 1)
        omega: marked element, ``0 <= omega < 2^n``; qubit 0 carries its
            most significant bit
    """
    if n < 1:
        raise QphDomainError(f"grover needs at least one qubit, got {n}")
    if not 0 <= omega < 2 ** n:
        raise QphDomainError(f"marked element {omega} out of range for {n} qubit(s)")
    bits = format(omega, f"0{n}b")
    return IfLet(ptensor_all(KET1 if bit == "1" else KET0 for bit in bits), Phase(Angle(math.pi)))


def grover_diffusion(n: int) -> TermExpr:
    """``ph(pi) x id(n); if |+> x ... x |+> { ph(pi) }``, i.e. ``2|s><s| - I``."""
    if n < 1:
        raise QphDomainError(f"grover needs at least one qubit, got {n}")
    return Seq(
        Tensor(Phase(Angle(math.pi)), Identity(n)),
        IfLet(ptensor_all([KET_PLUS] * n), Phase(Angle(math.pi))),
    )


def grover_default_iterations(n: int) -> int:
    return math.ceil(math.pi * math.sqrt(2 ** n) / 4)


def grover_program(n: int, omega: int, iterations: Optional[int] = None) -> TermExpr:
    """
    Uniform superposition followed by ``iterations`` oracle/diffusion rounds.

    ``iterations`` defaults to ``ceil(pi * sqrt(2^n) / 4)``.
    """
    if iterations is None:
        iterations = grover_default_iterations(n)
    if iterations < 0:
        raise QphDomainError(f"iteration count must be non-negative, got {iterations}")
    oracle = grover_oracle(n, omega)
    diffusion = grover_diffusion(n)
    prepare = tensor_all([prelude_term("H")] * n)
    logger.debug("grover n=%d omega=%d iterations=%d", n, omega, iterations)
    return seq_all([prepare] + [Seq(oracle, diffusion)] * iterations, n)


def grover_success_probability(n: int, omega: int, iterations: Optional[int] = None) -> float:
    """Probability of measuring ``omega`` after running the program on ``|0...0>``."""
    state = sem_term(grover_program(n, omega, iterations)) @ basis_state("0" * n)
    return float(abs(state[omega, 0]) ** 2)


def grover_theoretical_probability(n: int, iterations: int) -> float:
    """``sin^2((2k + 1) arcsin(1 / sqrt(N)))``."""
    return math.sin((2 * iterations + 1) * math.asin(1 / math.sqrt(2 ** n))) ** 2


# ---------------------------------------------------------------------------
# Quantum Fourier transform
# ---------------------------------------------------------------------------

def dyadic_phase(k: int) -> TermExpr:
    """``R_k = if |1> { ph(pi / 2^(k-1)) }``."""
    if k < 1:
        raise QphDomainError(f"dyadic phase index must be at least 1, got {k}")
    return IfLet(KET1, Phase(Angle(math.pi / 2 ** (k - 1))))


def qft(n: int) -> TermExpr:
    """
    Fourier transform with bit-reversed output order.

    ``QFT(m+1) = H x id(m); if |1> x id(m) { R_2 x ... x R_(m+1) }; id x QFT(m)``
    """
    if n < 0:
        raise QphDomainError(f"qubit count must be non-negative, got {n}")
    if n == 0:
        return Identity(0)
    m = n - 1
    return seq_all([
        Tensor(prelude_term("H"), Identity(m)),
        IfLet(PTensor(KET1, Unitary(Identity(m))), tensor_all(dyadic_phase(k) for k in range(2, m + 2))),
        Tensor(Identity(1), qft(m)),
    ], n)


def _adjacent_swap(i: int, n: int) -> TermExpr:
    parts = [prelude_term("SWAP")]
    if i:
        parts.insert(0, Identity(i))
    if n - i - 2:
        parts.append(Identity(n - i - 2))
    return tensor_all(parts)


def qubit_reversal(n: int) -> TermExpr:
    """Reverse the qubit order with a bubble network of adjacent swaps."""
    swaps = [_adjacent_swap(i, n) for sweep in range(n - 1) for i in range(n - 1 - sweep)]
    return seq_all(swaps, n)


def qft_with_reversal(n: int) -> TermExpr:
    """The plain discrete Fourier transform: ``qft(n)`` followed by a qubit reversal."""
    if n < 2:
        return qft(n)
    return Seq(qft(n), qubit_reversal(n))


# ---------------------------------------------------------------------------
# Hamiltonian simulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralComponent:
    """Term ``lam * P`` of a Hamiltonian, ``P`` the projector onto the pattern's image."""

    lam: float
    pattern: PatternExpr


@dataclass(frozen=True)
class HamiltonianSpec:
    n: int
    components: Tuple[SpectralComponent, ...]


def _component_arity(spec: HamiltonianSpec, index: int) -> int:
    pattern_type = type_of_pattern(spec.components[index].pattern)
    if pattern_type.m != spec.n:
        raise QphDomainError(
            f"component {index} acts on {pattern_type.m} qubit(s), Hamiltonian has {spec.n}"
        )
    return pattern_type.j


def trotter_step(spec: HamiltonianSpec, t: float) -> TermExpr:
    """
    One product-formula step: a phase ``-lam * t`` on each component's subspace.

    The last component is applied first and the term ends in ``id(n)``; for
    commuting projectors the result is exactly ``exp(-iHt)``.
    """
    term: TermExpr = Identity(spec.n)
    for index, component in enumerate(spec.components):
        m = _component_arity(spec, index)
        rotation = IfLet(component.pattern, Tensor(Phase(Angle(-component.lam * t)), Identity(m)))
        term = Seq(rotation, term)
    return term


def trotterize(spec: HamiltonianSpec, t: float, steps: int) -> TermExpr:
    """``steps`` repetitions of ``trotter_step(spec, t / steps)``."""
    if steps < 1:
        raise QphDomainError(f"trotter step count must be at least 1, got {steps}")
    step = trotter_step(spec, t / steps)
    return seq_all([step] * steps, spec.n)


def _y_pattern(sign: int) -> PatternExpr:
    return PCompose(Unitary(prelude_term("S")), KET_PLUS if sign > 0 else KET_MINUS)


def _pauli_projectors(axis: str):
    """(sign, pattern) pairs with ``sigma_axis = sum(sign * projector)``; ``i`` is the identity."""
    if axis == "z":
        return [(1, KET0), (-1, KET1)]
    if axis == "x":
        return [(1, KET_PLUS), (-1, KET_MINUS)]
    if axis == "y":
        return [(1, _y_pattern(1)), (-1, _y_pattern(-1))]
    return [(1, KET0), (1, KET1)]


def dipole_spec(omega1: float, omega2: float, coupling: float) -> HamiltonianSpec:
    """
    Two coupled spins: ``w1 Z x I + w2 I x Z + J (X x X + Y x Y - 2 Z x Z)``.

    Each two-qubit Pauli product is expanded into four rank-one projectors,
    giving twenty components.
    """
    products = [
        (omega1, "z", "i"),
        (omega2, "i", "z"),
        (coupling, "x", "x"),
        (coupling, "y", "y"),
        (-2 * coupling, "z", "z"),
    ]
    components = []
    for weight, first, second in products:
        for sign_a, pattern_a in _pauli_projectors(first):
            for sign_b, pattern_b in _pauli_projectors(second):
                components.append(SpectralComponent(weight * sign_a * sign_b, PTensor(pattern_a, pattern_b)))
    return HamiltonianSpec(2, tuple(components))


def hamiltonian_matrix(spec: HamiltonianSpec) -> ComplexMatrix:
    """``sum(lam * iota iota^dagger)`` over the components."""
    matrix = np.zeros((2 ** spec.n, 2 ** spec.n), dtype=complex)
    for index, component in enumerate(spec.components):
        _component_arity(spec, index)
        iota = sem_pattern(component.pattern)
        matrix += component.lam * (iota @ iota.conj().T)
    return matrix


def exact_evolution(spec: HamiltonianSpec, t: float) -> ComplexMatrix:
    return expm(-1j * t * hamiltonian_matrix(spec))


def trotter_error(spec: HamiltonianSpec, t: float, steps: int) -> float:
    """Max entrywise distance between the Trotterized program and ``exp(-iHt)``."""
    error = max_abs_diff(sem_term(trotterize(spec, t, steps)), exact_evolution(spec, t))
    logger.debug("trotter error at %d step(s): %.3e", steps, error)
    return error


# ---------------------------------------------------------------------------
# Quantum signal processing
# ---------------------------------------------------------------------------

def rz(alpha: float) -> TermExpr:
    """``ph(-alpha/2) x id; if |0> { ph(alpha) }`` = ``diag(e^{i alpha/2}, e^{-i alpha/2})``."""
    return Seq(Tensor(Phase(Angle(-alpha / 2)), Identity(1)), IfLet(KET0, Phase(Angle(alpha))))


def rx(alpha: float) -> TermExpr:
    return Seq(Tensor(Phase(Angle(-alpha / 2)), Identity(1)), IfLet(KET_PLUS, Phase(Angle(alpha))))


def _check_signal(a: float) -> None:
    if not math.isfinite(a) or abs(a) > 1:
        raise QphDomainError(f"signal amplitude must lie in [-1, 1], got {a!r}")


def qsp_program(a: float, phis: Sequence[float]) -> TermExpr:
    """
    Single-qubit signal processing sequence denoting
    ``S(phi_0) W(a) S(phi_1) ... W(a) S(phi_d)``.

    ``S(phi) = rz(2 phi)`` and the signal ``W(a) = rx(2 arccos a)``. Each new
    angle contributes its rotation and one signal call ahead of the program
    built so far.
    """
    _check_signal(a)
    if not phis:
        raise QphDomainError("signal processing needs at least one phase angle")
    signal = rx(2 * math.acos(a))
    program = rz(2 * phis[0])
    for phi in phis[1:]:
        program = seq_all([rz(2 * phi), signal, program], 1)
    return program


def qsp_reference_matrix(a: float, phis: Sequence[float]) -> ComplexMatrix:
    """Direct product of the signal and processing matrices."""
    _check_signal(a)
    off = 1j * math.sqrt(1 - a * a)
    signal = np.array([[a, off], [off, a]], dtype=complex)
    matrix = np.diag([np.exp(1j * phis[0]), np.exp(-1j * phis[0])])
    for phi in phis[1:]:
        matrix = matrix @ signal @ np.diag([np.exp(1j * phi), np.exp(-1j * phi)])
    return matrix


# ---------------------------------------------------------------------------
# Quantum eigenvalue transform
# ---------------------------------------------------------------------------

def projector_phase(p_pi: PatternExpr, phi: float) -> TermExpr:
    """``ph(-phi) x id(n); if p { ph(2 phi) x id(m) }``, i.e. ``exp(i phi (2P - I))``."""
    pattern_type = type_of_pattern(p_pi)
    return Seq(
        Tensor(Phase(Angle(-phi)), Identity(pattern_type.m)),
        IfLet(p_pi, Tensor(Phase(Angle(2 * phi)), Identity(pattern_type.j))),
    )


def qet_program(s_u: TermExpr, p_pi: PatternExpr, phis: Sequence[float]) -> TermExpr:
    """
    Eigenvalue transform of the block encoding ``s_u`` with projector pattern ``p_pi``.

    The last two angles are consumed per step:
    ``QET(..., phi_k-1, phi_k) = QET(...); s_u; R(phi_k); inv(s_u); R(phi_k-1)``.
    """
    n = type_of_term(s_u).n
    if type_of_pattern(p_pi).m != n:
        raise QphDomainError(f"projector pattern must act on {n} qubit(s)")
    if not phis:
        return Identity(n)
    if len(phis) == 1:
        return Seq(s_u, projector_phase(p_pi, phis[0]))
    prefix = qet_program(s_u, p_pi, phis[:-2])
    return seq_all([
        prefix,
        s_u,
        projector_phase(p_pi, phis[-1]),
        invert(s_u),
        projector_phase(p_pi, phis[-2]),
    ], n)


def projector_phase_matrix(projector: ComplexMatrix, phi: float) -> ComplexMatrix:
    """``e^{i phi} P + e^{-i phi} (I - P)`` from the two eigenspaces."""
    identity = np.eye(projector.shape[0], dtype=complex)
    return np.exp(1j * phi) * projector + np.exp(-1j * phi) * (identity - projector)


def qet_reference_matrix(s_u: TermExpr, p_pi: PatternExpr, phis: Sequence[float]) -> ComplexMatrix:
    unitary = sem_term(s_u)
    iota = sem_pattern(p_pi)
    projector = iota @ iota.conj().T
    if not phis:
        return np.eye(unitary.shape[0], dtype=complex)
    if len(phis) == 1:
        return projector_phase_matrix(projector, phis[0]) @ unitary
    prefix = qet_reference_matrix(s_u, p_pi, phis[:-2])
    return (projector_phase_matrix(projector, phis[-2]) @ unitary.conj().T
            @ projector_phase_matrix(projector, phis[-1]) @ unitary @ prefix)


# ---------------------------------------------------------------------------
# Small fixed programs
# ---------------------------------------------------------------------------

def ghz_program(n: int) -> TermExpr:
    """``H x id(n-1); if |1> x id(n-1) { X x ... x X }``."""
    if n < 2:
        raise QphDomainError(f"GHZ state needs at least two qubits, got {n}")
    return Seq(
        Tensor(prelude_term("H"), Identity(n - 1)),
        controlled(tensor_all([prelude_term("X")] * (n - 1)), KET1),
    )


def swap_via_pattern() -> TermExpr:
    """Swap as a phase on the singlet: ``if CX . (|-> x |1>) { ph(pi) }``."""
    return IfLet(PCompose(Unitary(prelude_term("CX")), PTensor(KET_MINUS, KET1)), Phase(Angle(math.pi)))
