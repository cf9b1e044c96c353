"""
Abstract syntax shared by every service: angles, unitary terms, patterns and their types.

All nodes are frozen dataclasses, so trees can be shared freely between
threads and between the definitions that reference them.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

from services.errors import QphDomainError, ElaborationError, TreePath


@dataclass(frozen=True)
class Angle:
    """Phase angle in radians (double precision, always finite)."""

    radians: float

    def __post_init__(self):
        if not isinstance(self.radians, (int, float)) or not math.isfinite(self.radians):
            raise QphDomainError(f"angle must be a finite real, got {self.radians!r}")
        object.__setattr__(self, "radians", float(self.radians))

    def __neg__(self) -> "Angle":
        return Angle(-self.radians)

    def scaled(self, alpha: float) -> "Angle":
        return Angle(alpha * self.radians)

    def bits(self) -> str:
        """Bit-exact identity of the angle (distinguishes 0.0 from -0.0)."""
        return self.radians.hex()


def angle_from_pi_fraction(num: float, den: int) -> Angle:
    """
    Build the angle pi * num / den.

    Args:
        num: numerator (the coefficient of pi)
        den: positive integer denominator

    Returns:
        Angle whose radians equal ``math.pi * num / den``
    """
    if den <= 0:
        raise QphDomainError(f"denominator must be positive, got {den}")
    return Angle(math.pi * num / den)


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Phase:
    theta: Angle


@dataclass(frozen=True)
class Identity:
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise QphDomainError(f"identity width must be a non-negative integer, got {self.n!r}")


@dataclass(frozen=True)
class Seq:
    first: "TermExpr"
    second: "TermExpr"


@dataclass(frozen=True)
class Tensor:
    left: "TermExpr"
    right: "TermExpr"


@dataclass(frozen=True)
class IfLet:
    pattern: "PatternExpr"
    body: "TermExpr"


@dataclass(frozen=True)
class Ref:
    """Named definition, replaced during elaboration."""

    name: str


# ---------------------------------------------------------------------------
# Patterns
# ---------------------------------------------------------------------------

class KetLabel(Enum):
    ZERO = "0"
    ONE = "1"
    PLUS = "+"
    MINUS = "-"


@dataclass(frozen=True)
class Ket:
    label: KetLabel

    def __str__(self) -> str:
        return f"|{self.label.value}>"


KET0 = Ket(KetLabel.ZERO)
KET1 = Ket(KetLabel.ONE)
KET_PLUS = Ket(KetLabel.PLUS)
KET_MINUS = Ket(KetLabel.MINUS)


@dataclass(frozen=True)
class Unitary:
    """A unitary term used as a pattern (pattern n n)."""

    term: "TermExpr"


@dataclass(frozen=True)
class PCompose:
    """Pattern composition in function order: ``outer . inner``."""

    outer: "PatternExpr"
    inner: "PatternExpr"


@dataclass(frozen=True)
class PTensor:
    left: "PatternExpr"
    right: "PatternExpr"


TermExpr = Union[Phase, Identity, Seq, Tensor, IfLet, Ref]
PatternExpr = Union[Ket, Unitary, PCompose, PTensor]


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitaryType:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise QphDomainError(f"unitary arity must be non-negative, got {self.n}")

    def __str__(self) -> str:
        return f"unitary {self.n}"


@dataclass(frozen=True)
class PatternType:
    j: int
    m: int

    def __post_init__(self):
        if not 0 <= self.j <= self.m:
            raise QphDomainError(f"pattern type needs 0 <= j <= m, got j={self.j}, m={self.m}")

    def __str__(self) -> str:
        return f"pattern {self.j} {self.m}"


# ---------------------------------------------------------------------------
# Structural equality and validation
# ---------------------------------------------------------------------------

def structural_equal(a, b) -> bool:
    """
    Compare two terms (or two patterns) node by node.

    Angles are compared bit-exactly, so ``ph(0)`` and ``ph(-0)`` differ.
    """
    if type(a) is not type(b):
        return False
    if isinstance(a, Phase):
        return a.theta.bits() == b.theta.bits()
    if isinstance(a, Identity):
        return a.n == b.n
    if isinstance(a, Ref):
        return a.name == b.name
    if isinstance(a, Ket):
        return a.label is b.label
    if isinstance(a, Seq):
        return structural_equal(a.first, b.first) and structural_equal(a.second, b.second)
    if isinstance(a, (Tensor, PTensor)):
        return structural_equal(a.left, b.left) and structural_equal(a.right, b.right)
    if isinstance(a, IfLet):
        return structural_equal(a.pattern, b.pattern) and structural_equal(a.body, b.body)
    if isinstance(a, Unitary):
        return structural_equal(a.term, b.term)
    if isinstance(a, PCompose):
        return structural_equal(a.outer, b.outer) and structural_equal(a.inner, b.inner)
    return False


def children(node) -> tuple:
    """Child nodes in path-index order."""
    if isinstance(node, Seq):
        return (node.first, node.second)
    if isinstance(node, (Tensor, PTensor)):
        return (node.left, node.right)
    if isinstance(node, IfLet):
        return (node.pattern, node.body)
    if isinstance(node, Unitary):
        return (node.term,)
    if isinstance(node, PCompose):
        return (node.outer, node.inner)
    return ()


_NODE_TYPES = (Phase, Identity, Seq, Tensor, IfLet, Ref, Ket, Unitary, PCompose, PTensor)


def validate_term(node, elaborated: bool = True, path: TreePath = ()) -> None:
    """
    Walk a term or pattern and check every node invariant.

    Raises:
        QphDomainError: unknown node, non-finite angle or negative identity
        ElaborationError: a Ref remains in a tree that should be elaborated
    """
    if not isinstance(node, _NODE_TYPES):
        raise QphDomainError(f"not a syntax node at {path}: {node!r}")
    if isinstance(node, Phase) and not math.isfinite(node.theta.radians):
        raise QphDomainError(f"non-finite angle at {path}")
    if isinstance(node, Identity) and node.n < 0:
        raise QphDomainError(f"negative identity at {path}")
    if isinstance(node, Ref) and elaborated:
        raise ElaborationError(f"unresolved reference {node.name!r}", path)
    for index, child in enumerate(children(node)):
        validate_term(child, elaborated, path + (index,))


# ---------------------------------------------------------------------------
# Metrics and fold helpers
# ---------------------------------------------------------------------------

def term_size(node) -> int:
    return 1 + sum(term_size(child) for child in children(node))


def phase_count(node) -> int:
    """Number of Phase nodes, including those inside patterns."""
    own = 1 if isinstance(node, Phase) else 0
    return own + sum(phase_count(child) for child in children(node))


def iflet_depth(node) -> int:
    """Nesting depth of if-let, counting if-lets reached through patterns."""
    inner = max((iflet_depth(child) for child in children(node)), default=0)
    return inner + 1 if isinstance(node, IfLet) else inner


def tensor_all(terms: Iterable[TermExpr]) -> TermExpr:
    """Left-nested tensor of the given terms; ``id(0)`` when empty."""
    result = None
    for term in terms:
        result = term if result is None else Tensor(result, term)
    return Identity(0) if result is None else result


def seq_all(terms: Iterable[TermExpr], n: int) -> TermExpr:
    """Left-nested sequence of the given terms; ``id(n)`` when empty."""
    result = None
    for term in terms:
        result = term if result is None else Seq(result, term)
    return Identity(n) if result is None else result


def ptensor_all(patterns: Iterable[PatternExpr]) -> PatternExpr:
    """Left-nested pattern tensor; the 0-qubit pattern ``id(0)`` when empty."""
    result = None
    for pattern in patterns:
        result = pattern if result is None else PTensor(result, pattern)
    return Unitary(Identity(0)) if result is None else result
