"""
Exception hierarchy shared by every service module.

Everything the CLI reports as a domain failure derives from ``QphError``.
"""
from typing import Optional, Sequence, Tuple

TreePath = Tuple[int, ...]


def format_path(path: TreePath) -> str:
    """Render a child-index path as ``root.1.0``."""
    return ".".join(["root", *(str(i) for i in path)])


class QphError(Exception):
    """Base class for all toolkit errors."""


class QphDomainError(QphError, ValueError):
    """A numeric argument is outside the operation's domain."""


class ParseError(QphError):
    """Lexical or syntax error in a ``.qph`` source file."""

    def __init__(self, message: str, line: int = 0, column: int = 0,
                 text: str = "", expected: Sequence[str] = ()):
        self.line = line
        self.column = column
        self.text = text
        self.expected = tuple(sorted(expected))
        detail = f"{line}:{column}: {message}"
        if text:
            detail += f" at {text!r}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class ElaborationError(QphError):
    """Unresolved or duplicate definition names, misplaced exponents."""

    def __init__(self, message: str, path: TreePath = ()):
        self.path = path
        super().__init__(f"{format_path(path)}: {message}" if path else message)


class TypeCheckError(QphError):
    """
    Typing rule violation.

    Args:
        kind: one of ``seq-arity-mismatch``, ``iflet-body-mismatch``,
            ``compose-arity-mismatch``, ``nonnegative-violation``
        path: child indices from the root to the offending node
        expected: qubit count required by the rule
        found: qubit count actually present
    """

    def __init__(self, kind: str, path: TreePath, expected: int, found: int):
        self.kind = kind
        self.path = path
        self.expected = expected
        self.found = found
        super().__init__(
            f"{format_path(path)}: {kind}: expected {expected} qubit(s), found {found}"
        )


class CompositionError(ElaborationError):
    """Exponentiation reached a ``;`` on the unitary spine."""


class SimulationCapError(QphError):
    """Dense simulation requested beyond the configured qubit cap."""

    def __init__(self, qubits: int, cap: int):
        self.qubits = qubits
        self.cap = cap
        super().__init__(f"{qubits} qubits exceeds the simulation cap of {cap}")


class ShapeError(QphError):
    """Matrix shapes do not agree."""


class CircuitFormatError(QphError):
    """Malformed line in the circuit text format."""

    def __init__(self, message: str, line_number: int):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class HamiltonianSpecError(QphError):
    """Invalid Hamiltonian spec file; ``fields`` lists the offending paths."""

    def __init__(self, message: str, fields: Optional[Sequence[str]] = None):
        self.fields = tuple(fields or ())
        super().__init__(message)
