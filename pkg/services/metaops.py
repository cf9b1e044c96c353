"""
Meta-operations on terms: structural inversion and exponentiation.
"""
import logging
import math

from services.core_ast import (
    Identity, IfLet, PTensor, PatternExpr, Phase, Seq, Tensor, TermExpr, Unitary,
)
from services.errors import CompositionError, QphDomainError, TreePath
from services.typecheck import type_of_term

logger = logging.getLogger(__name__)


def invert(t: TermExpr) -> TermExpr:
    """
    Structural dagger of a well-typed term.

    ``ph(θ)`` becomes ``ph(-θ)``, sequences are reversed, tensors and if-let
    bodies are inverted in place and patterns are left untouched.
    """
    type_of_term(t)
    return _invert(t)


def _invert(t: TermExpr) -> TermExpr:
    if isinstance(t, Phase):
        return Phase(-t.theta)
    if isinstance(t, Identity):
        return t
    if isinstance(t, Seq):
        return Seq(_invert(t.second), _invert(t.first))
    if isinstance(t, Tensor):
        return Tensor(_invert(t.left), _invert(t.right))
    if isinstance(t, IfLet):
        return IfLet(t.pattern, _invert(t.body))
    raise QphDomainError(f"cannot invert {t!r}")


def exponentiate(t: TermExpr, alpha: float) -> TermExpr:
    """
    Raise a composition-free term to a real power.

    Args:
        t: well-typed term with no ``;`` on its unitary spine (a ``;`` inside
            a pattern's embedded unitary is allowed)
        alpha: any finite real exponent

    Returns:
        The term with every spine phase angle multiplied by ``alpha``

    Raises:
        CompositionError: the spine contains a ``;`` (path identifies it)
    """
    if not math.isfinite(alpha):
        raise QphDomainError(f"exponent must be finite, got {alpha!r}")
    type_of_term(t)
    logger.debug("exponentiating %s by %r", type(t).__name__, alpha)
    return _exponentiate(t, float(alpha), ())


def _exponentiate(t: TermExpr, alpha: float, path: TreePath) -> TermExpr:
    if isinstance(t, Phase):
        return Phase(t.theta.scaled(alpha))
    if isinstance(t, Identity):
        return t
    if isinstance(t, Tensor):
        return Tensor(_exponentiate(t.left, alpha, path + (0,)),
                      _exponentiate(t.right, alpha, path + (1,)))
    if isinstance(t, IfLet):
        return IfLet(t.pattern, _exponentiate(t.body, alpha, path + (1,)))
    if isinstance(t, Seq):
        raise CompositionError("exponent applied to a term containing ';'", path)
    raise QphDomainError(f"cannot exponentiate {t!r}")


def is_composition_free(t: TermExpr) -> bool:
    """True when no ``;`` appears on the unitary spine."""
    if isinstance(t, Seq):
        return False
    if isinstance(t, Tensor):
        return is_composition_free(t.left) and is_composition_free(t.right)
    if isinstance(t, IfLet):
        return is_composition_free(t.body)
    return True


def controlled(t: TermExpr, control: PatternExpr) -> TermExpr:
    """``if control x id(n) { t }``: run ``t`` on the subspace picked by ``control``."""
    n = type_of_term(t).n
    return IfLet(PTensor(control, Unitary(Identity(n))), t)
