"""
Typing rules for unitary terms and patterns.

Types are fully determined by structure: a term has type ``unitary n`` and a
pattern has type ``pattern j m`` (an isometry from j to m qubits).
"""
from services.core_ast import (
    Identity, IfLet, Ket, PCompose, PTensor, PatternType, Phase, Ref, Seq, Tensor,
    Unitary, UnitaryType,
)
from services.errors import ElaborationError, QphDomainError, TreePath, TypeCheckError


def type_of_term(t, path: TreePath = ()) -> UnitaryType:
    """
    Compute the type of an elaborated term.

    Args:
        t: the term
        path: child-index path of ``t`` inside the tree being checked

    Returns:
        UnitaryType with the term's qubit count

    Raises:
        TypeCheckError: a ``;`` joins terms of different widths, or an
            if-let body does not fit its pattern's input
    """
    return UnitaryType(_term_arity(t, path))


def type_of_pattern(p, path: TreePath = ()) -> PatternType:
    """Compute ``pattern j m`` for an elaborated pattern."""
    j, m = _pattern_arity(p, path)
    return PatternType(j, m)


def _term_arity(t, path: TreePath) -> int:
    if isinstance(t, Phase):
        return 0
    if isinstance(t, Identity):
        if t.n < 0:
            raise TypeCheckError("nonnegative-violation", path, expected=0, found=t.n)
        return t.n
    if isinstance(t, Seq):
        first = _term_arity(t.first, path + (0,))
        second = _term_arity(t.second, path + (1,))
        if first != second:
            raise TypeCheckError("seq-arity-mismatch", path + (1,), expected=first, found=second)
        return first
    if isinstance(t, Tensor):
        return _term_arity(t.left, path + (0,)) + _term_arity(t.right, path + (1,))
    if isinstance(t, IfLet):
        j, m = _pattern_arity(t.pattern, path + (0,))
        body = _term_arity(t.body, path + (1,))
        if body != j:
            raise TypeCheckError("iflet-body-mismatch", path + (1,), expected=j, found=body)
        return m
    if isinstance(t, Ref):
        raise ElaborationError(f"unresolved reference {t.name!r}", path)
    raise QphDomainError(f"not a term: {t!r}")


def _pattern_arity(p, path: TreePath):
    if isinstance(p, Ket):
        return 0, 1
    if isinstance(p, Unitary):
        n = _term_arity(p.term, path + (0,))
        return n, n
    if isinstance(p, PCompose):
        outer_in, outer_out = _pattern_arity(p.outer, path + (0,))
        inner_in, inner_out = _pattern_arity(p.inner, path + (1,))
        if inner_out != outer_in:
            raise TypeCheckError("compose-arity-mismatch", path + (1,), expected=outer_in, found=inner_out)
        return inner_in, outer_out
    if isinstance(p, PTensor):
        left_in, left_out = _pattern_arity(p.left, path + (0,))
        right_in, right_out = _pattern_arity(p.right, path + (1,))
        return left_in + right_in, left_out + right_out
    raise QphDomainError(f"not a pattern: {p!r}")
