"""
Circuits over Hadamard and multi-controlled phase gates.

Each normal clause becomes one multi-controlled phase, conjugated by
Hadamards on its ``|+>``/``|->`` slots. Circuits have a line-oriented text
format::

    qubits 2
    h 0
    mcp 3.1415926535897931 +0 -1
    h 0
    gp 1.5707963267948966
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from config import SIMULATION_QUBIT_CAP
from services.core_ast import Angle
from services.errors import CircuitFormatError, QphDomainError, SimulationCapError
from services.evaluator import NormalClause, SimpleSlot

logger = logging.getLogger(__name__)


class Polarity(Enum):
    ONE = "+"
    ZERO = "-"


@dataclass(frozen=True)
class Control:
    qubit: int
    polarity: Polarity


@dataclass(frozen=True)
class Hadamard:
    qubit: int


@dataclass(frozen=True)
class MCPhase:
    """Multiplies by e^{iθ} exactly on basis states meeting every control."""

    theta: Angle
    controls: Tuple[Control, ...]

    def __post_init__(self):
        if not self.controls:
            raise QphDomainError("multi-controlled phase needs at least one control")
        qubits = [c.qubit for c in self.controls]
        if len(set(qubits)) != len(qubits):
            raise QphDomainError(f"repeated control qubit in {qubits}")


@dataclass(frozen=True)
class GlobalPhase:
    theta: Angle


Gate = Union[Hadamard, MCPhase, GlobalPhase]


def _gate_qubits(gate: Gate) -> List[int]:
    if isinstance(gate, Hadamard):
        return [gate.qubit]
    if isinstance(gate, MCPhase):
        return [c.qubit for c in gate.controls]
    return []


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: Tuple[Gate, ...]

    def __post_init__(self):
        if self.n < 0:
            raise QphDomainError(f"qubit count must be non-negative, got {self.n}")
        for gate in self.gates:
            for qubit in _gate_qubits(gate):
                if not 0 <= qubit < self.n:
                    raise QphDomainError(f"gate {gate} touches qubit {qubit} outside 0..{self.n - 1}")


def mc_phase(theta: Angle, controls: Sequence[Control]) -> Gate:
    """MCPhase, or GlobalPhase when there are no controls."""
    if not controls:
        return GlobalPhase(theta)
    return MCPhase(theta, tuple(controls))


_SLOT_CONTROL = {
    SimpleSlot.ZERO: (Polarity.ZERO, False),
    SimpleSlot.ONE: (Polarity.ONE, False),
    SimpleSlot.PLUS: (Polarity.ZERO, True),
    SimpleSlot.MINUS: (Polarity.ONE, True),
}


def clauses_to_circuit(cs: Sequence[NormalClause], n: int) -> Circuit:
    """
    Compile normal clauses to a circuit.

    Args:
        cs: clauses in application order
        n: qubit count; every selector must have length ``n``

    Returns:
        Circuit applying, per clause, prefix Hadamards (ascending qubit),
        the phase gate and suffix Hadamards (descending qubit)
    """
    gates: List[Gate] = []
    for index, clause in enumerate(cs):
        if clause.selector.n != n:
            raise QphDomainError(f"clause {index} has a {clause.selector.n}-qubit selector, expected {n}")
        controls = []
        conjugated = []
        for qubit, slot in enumerate(clause.selector.slots):
            if slot is SimpleSlot.ID:
                continue
            polarity, needs_hadamard = _SLOT_CONTROL[slot]
            controls.append(Control(qubit, polarity))
            if needs_hadamard:
                conjugated.append(qubit)
        gates.extend(Hadamard(q) for q in conjugated)
        gates.append(mc_phase(clause.theta, controls))
        gates.extend(Hadamard(q) for q in reversed(conjugated))
    logger.debug("compiled %d clause(s) into %d gate(s)", len(cs), len(gates))
    return Circuit(n, tuple(gates))


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def _apply_hadamard(state: np.ndarray, qubit: int, n: int) -> np.ndarray:
    # Rows of ``state`` are basis amplitudes; qubit 0 is the most significant bit.
    columns = state.shape[1]
    tensor = state.reshape((2 ** qubit, 2, 2 ** (n - qubit - 1), columns))
    tensor = np.einsum("ab,ibjc->iajc", _HADAMARD, tensor)
    return tensor.reshape((2 ** n, columns))


def _control_mask(controls: Sequence[Control], n: int) -> np.ndarray:
    indices = np.arange(2 ** n)
    mask = np.ones(2 ** n, dtype=bool)
    for control in controls:
        bit = (indices >> (n - 1 - control.qubit)) & 1
        mask &= bit == (1 if control.polarity is Polarity.ONE else 0)
    return mask


def circuit_matrix(c: Circuit, cap: int = SIMULATION_QUBIT_CAP) -> np.ndarray:
    """
    Dense unitary of a circuit (gates applied first to last).

    Raises:
        SimulationCapError: ``c.n`` exceeds ``cap``
    """
    if c.n > cap:
        raise SimulationCapError(c.n, cap)
    logger.debug("simulating %d-qubit circuit with %d gate(s)", c.n, len(c.gates))
    matrix = np.eye(2 ** c.n, dtype=complex)
    for gate in c.gates:
        if isinstance(gate, Hadamard):
            matrix = _apply_hadamard(matrix, gate.qubit, c.n)
        elif isinstance(gate, MCPhase):
            mask = _control_mask(gate.controls, c.n)
            matrix[mask, :] *= np.exp(1j * gate.theta.radians)
        else:
            matrix = matrix * np.exp(1j * gate.theta.radians)
    return matrix


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

def _format_theta(theta: Angle) -> str:
    return "%.17g" % theta.radians


def write_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n}"]
    for gate in c.gates:
        if isinstance(gate, Hadamard):
            lines.append(f"h {gate.qubit}")
        elif isinstance(gate, MCPhase):
            controls = " ".join(f"{ctl.polarity.value}{ctl.qubit}" for ctl in gate.controls)
            lines.append(f"mcp {_format_theta(gate.theta)} {controls}")
        else:
            lines.append(f"gp {_format_theta(gate.theta)}")
    return "\n".join(lines) + "\n"


def _parse_int(text: str, line_number: int) -> int:
    if not (text.isascii() and text.isdigit()):
        raise CircuitFormatError(f"expected a qubit index, got {text!r}", line_number)
    return int(text)


def _parse_theta(text: str, line_number: int) -> Angle:
    try:
        value = float(text)
    except ValueError:
        raise CircuitFormatError(f"expected an angle, got {text!r}", line_number) from None
    if not math.isfinite(value):
        raise CircuitFormatError(f"angle must be finite, got {text!r}", line_number)
    return Angle(value)


def _parse_control(text: str, line_number: int) -> Control:
    if len(text) < 2 or text[0] not in "+-":
        raise CircuitFormatError(f"expected a control like +0 or -1, got {text!r}", line_number)
    return Control(_parse_int(text[1:], line_number), Polarity(text[0]))


def read_circuit(text: str) -> Circuit:
    """
    Parse the circuit text format.

    Raises:
        CircuitFormatError: missing header, unknown or malformed line, gate
            outside the register, or missing trailing newline
    """
    if not text.endswith("\n"):
        raise CircuitFormatError("missing trailing newline", text.count("\n") + 1)
    lines = text[:-1].split("\n")
    header = lines[0].split(" ")
    if len(header) != 2 or header[0] != "qubits":
        raise CircuitFormatError("first line must be 'qubits <n>'", 1)
    n = _parse_int(header[1], 1)
    gates: List[Gate] = []
    for line_number, line in enumerate(lines[1:], start=2):
        words = line.split(" ")
        op, args = words[0], words[1:]
        if op == "h" and len(args) == 1:
            gate: Gate = Hadamard(_parse_int(args[0], line_number))
        elif op == "mcp" and len(args) >= 2:
            controls = tuple(_parse_control(arg, line_number) for arg in args[1:])
            try:
                gate = MCPhase(_parse_theta(args[0], line_number), controls)
            except QphDomainError as exc:
                raise CircuitFormatError(str(exc), line_number) from None
        elif op == "gp" and len(args) == 1:
            gate = GlobalPhase(_parse_theta(args[0], line_number))
        else:
            raise CircuitFormatError(f"unrecognised line {line!r}", line_number)
        if any(q >= n for q in _gate_qubits(gate)):
            raise CircuitFormatError(f"qubit index out of range for {n} qubit(s)", line_number)
        gates.append(gate)
    return Circuit(n, tuple(gates))


def circuit_stats(c: Circuit) -> Dict[str, int]:
    """Gate counts per kind plus the largest control count."""
    counts = Counter(type(gate).__name__ for gate in c.gates)
    return {
        "qubits": c.n,
        "gates": len(c.gates),
        "hadamard": counts.get("Hadamard", 0),
        "mcphase": counts.get("MCPhase", 0),
        "global_phase": counts.get("GlobalPhase", 0),
        "max_controls": max((len(g.controls) for g in c.gates if isinstance(g, MCPhase)), default=0),
    }
