"""
Normalization of well-typed terms into lists of normal clauses.

A normal clause ``if q { ph(θ) x id(k) }`` has a simple selector ``q``: a
tensor of slots drawn from id, |0>, |1>, |+> and |->. Clause lists are read
in application order, so ``[c1, c2]`` applies ``c1`` first.

The evaluation functions thread a context ``(q, l, r)`` for a subject of
arity ``k``: ``q`` is the enclosing selector and ``l``/``r`` count the id
slots of ``q`` to the left and right of the subject, so ``l + k + r`` is the
number of id slots of ``q``.
"""
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Sequence, Tuple

from config import ZERO_ANGLE_TOLERANCE
from services.core_ast import (
    Angle, Identity, IfLet, Ket, KetLabel, PCompose, PTensor, PatternExpr, Phase, Seq,
    Tensor, TermExpr, Unitary, ptensor_all, seq_all,
)
from services.errors import QphDomainError
from services.parser import pretty
from services.typecheck import type_of_pattern, type_of_term

logger = logging.getLogger(__name__)


class SimpleSlot(Enum):
    ID = "id"
    ZERO = "|0>"
    ONE = "|1>"
    PLUS = "|+>"
    MINUS = "|->"


_SLOT_OF_KET = {
    KetLabel.ZERO: SimpleSlot.ZERO,
    KetLabel.ONE: SimpleSlot.ONE,
    KetLabel.PLUS: SimpleSlot.PLUS,
    KetLabel.MINUS: SimpleSlot.MINUS,
}
_KET_OF_SLOT = {slot: Ket(label) for label, slot in _SLOT_OF_KET.items()}


@dataclass(frozen=True)
class SimplePattern:
    """Selector over ``n`` qubits; its input arity is the number of id slots."""

    slots: Tuple[SimpleSlot, ...]

    @classmethod
    def identity(cls, n: int) -> "SimplePattern":
        return cls((SimpleSlot.ID,) * n)

    @property
    def n(self) -> int:
        return len(self.slots)

    @property
    def arity(self) -> int:
        return sum(1 for slot in self.slots if slot is SimpleSlot.ID)

    def __str__(self) -> str:
        return " x ".join(slot.value for slot in self.slots) or "id(0)"


@dataclass(frozen=True)
class NormalClause:
    selector: SimplePattern
    theta: Angle

    @property
    def k(self) -> int:
        return self.selector.arity

    def dagger(self) -> "NormalClause":
        return replace(self, theta=-self.theta)

    def pretty(self) -> str:
        """Surface form, e.g. ``if |0> x id { ph(pi/2) x id }``."""
        return pretty(clause_term(self))


@dataclass(frozen=True)
class EvalContext:
    q: SimplePattern
    l: int
    r: int
    k: int

    def __post_init__(self):
        _require(min(self.l, self.r, self.k) >= 0, f"negative context component in {self}")
        _require(self.l + self.k + self.r == self.q.arity,
                 f"context l={self.l} k={self.k} r={self.r} does not fit selector {self.q}")


def _require(condition: bool, message: str) -> None:
    # Explicit raise so the check survives python -O.
    if not condition:
        raise AssertionError(message)


def substitute(q: SimplePattern, x: SimpleSlot, i: int) -> SimplePattern:
    """
    Replace the ``i``-th id slot of ``q`` (counting id slots only) by ``x``.

    Raises:
        QphDomainError: ``x`` is the id slot or ``i`` is out of range
    """
    if x is SimpleSlot.ID:
        raise QphDomainError("substitution needs a ket slot")
    if not 0 <= i < q.arity:
        raise QphDomainError(f"id index {i} out of range for {q.arity} id slot(s)")
    seen = 0
    slots = list(q.slots)
    for position, slot in enumerate(slots):
        if slot is SimpleSlot.ID:
            if seen == i:
                slots[position] = x
                break
            seen += 1
    return SimplePattern(tuple(slots))


def invert_clauses(cs: Sequence[NormalClause]) -> List[NormalClause]:
    """List dagger: reverse the order and negate every angle."""
    return [c.dagger() for c in reversed(cs)]


class _Evaluator:
    """One normalization run; memoizes subtree arities so the walk stays linear."""

    def __init__(self):
        self._term_arity: Dict[int, int] = {}
        self._pattern_arity: Dict[int, Tuple[int, int]] = {}

    def term_arity(self, t: TermExpr) -> int:
        key = id(t)
        if key not in self._term_arity:
            if isinstance(t, Phase):
                self._term_arity[key] = 0
            elif isinstance(t, Identity):
                self._term_arity[key] = t.n
            elif isinstance(t, Seq):
                self._term_arity[key] = self.term_arity(t.first)
            elif isinstance(t, Tensor):
                self._term_arity[key] = self.term_arity(t.left) + self.term_arity(t.right)
            elif isinstance(t, IfLet):
                self._term_arity[key] = self.pattern_arity(t.pattern)[1]
            else:
                self._term_arity[key] = type_of_term(t).n
        return self._term_arity[key]

    def pattern_arity(self, p: PatternExpr) -> Tuple[int, int]:
        key = id(p)
        if key not in self._pattern_arity:
            if isinstance(p, Ket):
                value = (0, 1)
            elif isinstance(p, Unitary):
                n = self.term_arity(p.term)
                value = (n, n)
            elif isinstance(p, PCompose):
                value = (self.pattern_arity(p.inner)[0], self.pattern_arity(p.outer)[1])
            elif isinstance(p, PTensor):
                j1, m1 = self.pattern_arity(p.left)
                j2, m2 = self.pattern_arity(p.right)
                value = (j1 + j2, m1 + m2)
            else:
                pattern_type = type_of_pattern(p)
                value = (pattern_type.j, pattern_type.m)
            self._pattern_arity[key] = value
        return self._pattern_arity[key]

    def term(self, ctx: EvalContext, s: TermExpr) -> List[NormalClause]:
        _require(self.term_arity(s) == ctx.k, f"term of arity {self.term_arity(s)} in context of arity {ctx.k}")
        if isinstance(s, Phase):
            return [NormalClause(ctx.q, s.theta)]
        if isinstance(s, Identity):
            return []
        if isinstance(s, Seq):
            return self.term(ctx, s.first) + self.term(ctx, s.second)
        if isinstance(s, Tensor):
            k1 = self.term_arity(s.left)
            k2 = self.term_arity(s.right)
            left = self.term(EvalContext(ctx.q, ctx.l, ctx.r + k2, k1), s.left)
            right = self.term(EvalContext(ctx.q, ctx.l + k1, ctx.r, k2), s.right)
            return left + right
        if isinstance(s, IfLet):
            j, _ = self.pattern_arity(s.pattern)
            c, q_inner = self.pattern(ctx, s.pattern)
            body = self.term(EvalContext(q_inner, ctx.l, ctx.r, j), s.body)
            return invert_clauses(c) + body + c
        raise QphDomainError(f"cannot normalize {s!r}")

    def pattern(self, ctx: EvalContext, p: PatternExpr) -> Tuple[List[NormalClause], SimplePattern]:
        j, m = self.pattern_arity(p)
        _require(m == ctx.k, f"pattern of output {m} in context of arity {ctx.k}")
        if isinstance(p, Ket):
            return [], substitute(ctx.q, _SLOT_OF_KET[p.label], ctx.l)
        if isinstance(p, Unitary):
            return self.term(ctx, p.term), ctx.q
        if isinstance(p, PCompose):
            middle = self.pattern_arity(p.outer)[0]
            c, q1 = self.pattern(ctx, p.outer)
            c2, q2 = self.pattern(EvalContext(q1, ctx.l, ctx.r, middle), p.inner)
            result = (c2 + c, q2)
        elif isinstance(p, PTensor):
            j1, k1 = self.pattern_arity(p.left)
            _, k2 = self.pattern_arity(p.right)
            c, q1 = self.pattern(EvalContext(ctx.q, ctx.l, ctx.r + k2, k1), p.left)
            c2, q2 = self.pattern(EvalContext(q1, ctx.l + j1, ctx.r, k2), p.right)
            result = (c2 + c, q2)
        else:
            raise QphDomainError(f"cannot normalize pattern {p!r}")
        _require(result[1].arity == ctx.l + j + ctx.r, f"selector {result[1]} lost track of id slots")
        return result


def eval_term(ctx: EvalContext, s: TermExpr) -> List[NormalClause]:
    """
    Clauses of ``s`` whiskered into context ``ctx``.

    Args:
        ctx: evaluation context whose ``k`` is the arity of ``s``
        s: well-typed term

    Returns:
        Clause list in application order
    """
    return _Evaluator().term(ctx, s)


def eval_pattern(ctx: EvalContext, p: PatternExpr) -> Tuple[List[NormalClause], SimplePattern]:
    """Clauses realizing the unitary part of ``p`` and the selector it leaves behind."""
    return _Evaluator().pattern(ctx, p)


def normalize(t: TermExpr) -> List[NormalClause]:
    """
    Normal clauses of a well-typed term; the empty list stands for ``id(n)``.

    Raises:
        TypeCheckError: ``t`` is ill-typed
    """
    n = type_of_term(t).n
    clauses = _Evaluator().term(EvalContext(SimplePattern.identity(n), 0, 0, n), t)
    logger.debug("normalized %d-qubit term into %d clause(s)", n, len(clauses))
    return clauses


def _is_zero_angle(theta: Angle, tol: float) -> bool:
    return abs(math.remainder(theta.radians, 2 * math.pi)) < tol


def fuse_clauses(cs: Sequence[NormalClause], tol: float = ZERO_ANGLE_TOLERANCE) -> List[NormalClause]:
    """
    Merge adjacent clauses with equal selectors and drop trivial ones.

    Angles that vanish modulo 2π (within ``tol``) are removed, which can make
    the clauses around them adjacent and mergeable in turn.
    """
    fused: List[NormalClause] = []
    for clause in cs:
        if fused and fused[-1].selector == clause.selector:
            merged = NormalClause(clause.selector, Angle(fused[-1].theta.radians + clause.theta.radians))
            fused.pop()
            if not _is_zero_angle(merged.theta, tol):
                fused.append(merged)
        elif not _is_zero_angle(clause.theta, tol):
            fused.append(clause)
    logger.debug("fused %d clause(s) into %d", len(cs), len(fused))
    return fused


def selector_pattern(q: SimplePattern) -> PatternExpr:
    """The pattern ``q1 x ... x qn`` with id slots as ``id``."""
    return ptensor_all(
        Unitary(Identity(1)) if slot is SimpleSlot.ID else _KET_OF_SLOT[slot]
        for slot in q.slots
    )


def clause_term(c: NormalClause) -> TermExpr:
    body = Phase(c.theta) if c.k == 0 else Tensor(Phase(c.theta), Identity(c.k))
    return IfLet(selector_pattern(c.selector), body)


def composed_term(cs: Sequence[NormalClause], n: int) -> TermExpr:
    """The normal term ``c1; ...; cN``, or ``id(n)`` for no clauses."""
    return seq_all((clause_term(c) for c in cs), n)
