"""
Concrete syntax for .qph files: parsing, elaboration and pretty-printing.

The grammar lives in ``grammar.lark`` next to this module. Patterns and terms
share one expression grammar; whether a subtree is read as a term or as a
pattern is decided by its position (an ``if`` head is a pattern, everything
else is a term).
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedToken

from config import GRAMMAR_PATH
from services.core_ast import (
    Angle, Identity, IfLet, Ket, KetLabel, PCompose, PTensor, PatternExpr, Phase, Ref,
    Seq, Tensor, TermExpr, Unitary, angle_from_pi_fraction, validate_term,
)
from services.errors import CompositionError, ElaborationError, ParseError, TreePath
from services.metaops import exponentiate, invert

logger = logging.getLogger(__name__)

# Shared parser instance (building the LALR tables is the expensive part)
_parser: Optional[Lark] = None


def get_parser() -> Lark:
    """Get or create the shared LALR parser."""
    global _parser
    if _parser is None:
        _parser = Lark(
            GRAMMAR_PATH.read_text(encoding="utf-8"),
            parser="lalr",
            start=["start", "pattern_only"],
            propagate_positions=True,
            maybe_placeholders=False,
        )
    return _parser


# ---------------------------------------------------------------------------
# Surface-only nodes (removed by elaboration)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Power:
    """``term ^ alpha``."""

    term: "SurfaceTerm"
    alpha: float


@dataclass(frozen=True)
class Inverse:
    """``inv(term)``."""

    term: "SurfaceTerm"


SurfaceTerm = Union[TermExpr, Power, Inverse]


@dataclass(frozen=True)
class SourceFile:
    """Ordered definitions followed by the main expression."""

    defs: Tuple[Tuple[str, SurfaceTerm], ...]
    main: SurfaceTerm

    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.defs)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _describe_terminal(name: str) -> str:
    try:
        terminal = get_parser().get_terminal(name)
    except KeyError:
        return name
    if terminal.pattern.type == "str":
        return repr(terminal.pattern.value)
    return name


def _parse_tree(text: str, start: str) -> Tree:
    try:
        return get_parser().parse(text, start=start)
    except UnexpectedCharacters as exc:
        raise ParseError("lexical error", exc.line, exc.column, text=exc.char,
                         expected=[_describe_terminal(n) for n in (exc.allowed or ())]) from None
    except UnexpectedToken as exc:
        found = "end of input" if exc.token.type == "$END" else str(exc.token)
        raise ParseError("syntax error", exc.line, exc.column, text=found,
                         expected=[_describe_terminal(n) for n in exc.expected]) from None
    except UnexpectedEOF as exc:
        raise ParseError("unexpected end of input", max(exc.line, 0), max(exc.column, 0),
                         expected=[_describe_terminal(n) for n in exc.expected]) from None


def parse_file(text: str) -> SourceFile:
    """
    Parse a .qph source file.

    Args:
        text: UTF-8 decoded file contents

    Returns:
        SourceFile with Ref nodes still unresolved

    Raises:
        ParseError: lexical or syntax errors, duplicate definitions, or a
            definition that refers to itself or to a later definition
    """
    tree = _parse_tree(text, "start")
    builder = _Builder()
    *def_trees, main_tree = tree.children
    defs = []
    defined = set()
    later = {str(d.children[0]) for d in def_trees}
    for def_tree in def_trees:
        name_token, body_tree = def_tree.children
        name = str(name_token)
        if name in defined:
            raise ParseError(f"duplicate definition {name!r}", name_token.line, name_token.column)
        body = builder.term(body_tree)
        for ref_name, token in builder.take_refs():
            if ref_name == name or (ref_name in later and ref_name not in defined):
                raise ParseError(f"definition {name!r} refers to {ref_name!r} before it is defined",
                                 token.line, token.column)
        defined.add(name)
        defs.append((name, body))
    main = builder.term(main_tree)
    builder.take_refs()
    logger.debug("parsed %d definitions", len(defs))
    return SourceFile(tuple(defs), main)


def parse_pattern(text: str) -> PatternExpr:
    """Parse the text that may follow ``if`` (Ref nodes unresolved)."""
    tree = _parse_tree(text, "pattern_only")
    return _Builder().pattern(tree.children[0])


class _Builder:
    """Turns lark trees into terms or patterns depending on position."""

    _KETS = {"|0>": KetLabel.ZERO, "|1>": KetLabel.ONE, "|+>": KetLabel.PLUS, "|->": KetLabel.MINUS}

    def __init__(self):
        self._refs = []

    def take_refs(self):
        refs, self._refs = self._refs, []
        return refs

    def term(self, node) -> SurfaceTerm:
        kind = node.data
        kids = node.children
        if kind == "seq":
            return Seq(self.term(kids[0]), self.term(kids[1]))
        if kind == "tensor":
            return Tensor(self.term(kids[0]), self.term(kids[1]))
        if kind in ("group", "quote"):
            return self.term(kids[0])
        if kind == "phase":
            return Phase(self.angle(kids[0]))
        if kind == "identity":
            return Identity(int(kids[0]))
        if kind == "identity_one":
            return Identity(1)
        if kind == "if_let":
            return IfLet(self.pattern(kids[0]), self.term(kids[1]))
        if kind == "inverse":
            return Inverse(self.term(kids[0]))
        if kind == "power":
            return Power(self.term(kids[0]), self.exponent(kids[1]))
        if kind == "ref":
            token = kids[0]
            self._refs.append((str(token), token))
            return Ref(str(token))
        line, column = self._position(node)
        raise ParseError("pattern used where a term is expected", line, column)

    def pattern(self, node) -> PatternExpr:
        kind = node.data
        kids = node.children
        if kind == "ket":
            return Ket(self._KETS[str(kids[0])])
        if kind == "compose":
            return PCompose(self.pattern(kids[0]), self.pattern(kids[1]))
        if kind == "tensor":
            return PTensor(self.pattern(kids[0]), self.pattern(kids[1]))
        if kind == "group":
            inner = kids[0]
            if isinstance(inner, Tree) and inner.data == "seq":
                return Unitary(self.term(inner))
            return self.pattern(inner)
        if kind == "quote":
            return Unitary(self.term(kids[0]))
        return Unitary(self.term(node))

    @staticmethod
    def _position(node) -> Tuple[int, int]:
        meta = getattr(node, "meta", None)
        if meta is None or getattr(meta, "empty", True):
            return 0, 0
        return meta.line, meta.column

    @staticmethod
    def _signed(kids) -> Tuple[float, list]:
        if kids and isinstance(kids[0], Token) and kids[0].type == "MINUS":
            return -1.0, list(kids[1:])
        return 1.0, list(kids)

    def angle(self, node) -> Angle:
        sign, kids = self._signed(node.children)
        if node.data == "real_angle":
            value = float(kids[0])
            return Angle(-value if sign < 0 else value)
        coefficient = 1.0
        den = None
        for kid in kids:
            if kid.data == "coefficient":
                coefficient = float(kid.children[0])
            elif kid.data == "divisor":
                den = int(kid.children[0])
        if sign < 0:
            coefficient = -coefficient
        if den is None:
            return Angle(math.pi * coefficient)
        if den == 0:
            line, column = self._position(node)
            raise ParseError("angle denominator must be positive", line, column)
        return angle_from_pi_fraction(coefficient, den)

    def exponent(self, node) -> float:
        sign, kids = self._signed(node.children)
        if node.data == "real_exponent":
            value = float(kids[0])
        else:
            den = int(kids[1])
            if den == 0:
                line, column = self._position(node)
                raise ParseError("exponent denominator must be positive", line, column)
            value = int(kids[0]) / den
        return -value if sign < 0 else value


# ---------------------------------------------------------------------------
# Elaboration
# ---------------------------------------------------------------------------

Environment = Dict[str, TermExpr]


def definitions_environment(source: SourceFile, base: Optional[Environment] = None) -> Environment:
    """Elaborate the definitions of ``source`` in order, on top of ``base``."""
    env: Environment = dict(base or {})
    for name, body in source.defs:
        try:
            env[name] = _elaborate_term(body, env, ())
        except ElaborationError as exc:
            raise ElaborationError(f"in definition {name!r}: {exc}", exc.path) from None
    return env


def elaborate(file: SourceFile, prelude: Optional[SourceFile] = None) -> TermExpr:
    """
    Resolve names and desugar ``^`` and ``inv`` in the main expression.

    Args:
        file: parsed source
        prelude: definitions visible to ``file`` (its main expression is ignored)

    Returns:
        Ref-free term

    Raises:
        ElaborationError: unknown name or exponent on a term containing ``;``
        TypeCheckError: a meta-operation was applied to an ill-typed term
    """
    env = definitions_environment(prelude) if prelude is not None else {}
    env = definitions_environment(file, env)
    term = _elaborate_term(file.main, env, ())
    validate_term(term)
    return term


def elaborate_pattern(pattern: PatternExpr, env: Environment) -> PatternExpr:
    return _elaborate_pattern(pattern, env, ())


def _elaborate_term(node: SurfaceTerm, env: Environment, path: TreePath) -> TermExpr:
    if isinstance(node, (Phase, Identity)):
        return node
    if isinstance(node, Seq):
        return Seq(_elaborate_term(node.first, env, path + (0,)),
                   _elaborate_term(node.second, env, path + (1,)))
    if isinstance(node, Tensor):
        return Tensor(_elaborate_term(node.left, env, path + (0,)),
                      _elaborate_term(node.right, env, path + (1,)))
    if isinstance(node, IfLet):
        return IfLet(_elaborate_pattern(node.pattern, env, path + (0,)),
                     _elaborate_term(node.body, env, path + (1,)))
    if isinstance(node, Ref):
        if node.name not in env:
            raise ElaborationError(f"unknown name {node.name!r}", path)
        return env[node.name]
    if isinstance(node, Inverse):
        return invert(_elaborate_term(node.term, env, path + (0,)))
    if isinstance(node, Power):
        base = _elaborate_term(node.term, env, path + (0,))
        try:
            return exponentiate(base, node.alpha)
        except CompositionError as exc:
            raise CompositionError("exponent applied to a term containing ';'",
                                   path + (0,) + exc.path) from None
    raise ElaborationError(f"unexpected node {node!r}", path)


def _elaborate_pattern(node: PatternExpr, env: Environment, path: TreePath) -> PatternExpr:
    if isinstance(node, Ket):
        return node
    if isinstance(node, Unitary):
        return Unitary(_elaborate_term(node.term, env, path + (0,)))
    if isinstance(node, PCompose):
        return PCompose(_elaborate_pattern(node.outer, env, path + (0,)),
                        _elaborate_pattern(node.inner, env, path + (1,)))
    if isinstance(node, PTensor):
        return PTensor(_elaborate_pattern(node.left, env, path + (0,)),
                       _elaborate_pattern(node.right, env, path + (1,)))
    raise ElaborationError(f"unexpected pattern node {node!r}", path)


# ---------------------------------------------------------------------------
# Pretty-printing
# ---------------------------------------------------------------------------

_PI_DENOMINATORS = (1, 2, 3, 4, 6, 8, 12, 16, 32, 64, 128, 256, 512, 1024)

# Precedence levels: 0 sequence, 1 tensor, 2 composition, 3 atom
_SEQ, _TENS, _COMP, _ATOM = range(4)


def format_angle(theta: Angle) -> str:
    """Print as a pi fraction when that reproduces the radians exactly, else 17 digits."""
    radians = theta.radians
    if abs(radians) > 1024 * math.pi:
        return "%.17g" % radians
    for den in _PI_DENOMINATORS:
        num = round(radians * den / math.pi)
        if num == 0 or abs(num) > 1024:
            continue
        if math.pi * float(num) / den == radians:
            head = {1: "pi", -1: "-pi"}.get(num, f"{num}*pi")
            return head if den == 1 else f"{head}/{den}"
    return "%.17g" % radians


def _wrap(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def pretty(term: TermExpr) -> str:
    """
    Render an elaborated term in source syntax with minimal parentheses.

    Re-parsing the output and elaborating it gives a structurally equal term.
    """
    return _term_text(term, _SEQ)


def pretty_pattern(pattern: PatternExpr) -> str:
    return _pattern_text(pattern, _SEQ)


def _term_text(t: TermExpr, level: int) -> str:
    if isinstance(t, Seq):
        return _wrap(f"{_term_text(t.first, _SEQ)}; {_term_text(t.second, _TENS)}", level > _SEQ)
    if isinstance(t, Tensor):
        return _wrap(f"{_term_text(t.left, _TENS)} x {_term_text(t.right, _COMP)}", level > _TENS)
    if isinstance(t, Phase):
        return f"ph({format_angle(t.theta)})"
    if isinstance(t, Identity):
        return "id" if t.n == 1 else f"id({t.n})"
    if isinstance(t, IfLet):
        return f"if {_pattern_text(t.pattern, _SEQ)} {{ {_term_text(t.body, _SEQ)} }}"
    if isinstance(t, Ref):
        return t.name
    raise ElaborationError(f"cannot print {t!r}")


def _pattern_text(p: PatternExpr, level: int) -> str:
    if isinstance(p, PTensor):
        return _wrap(f"{_pattern_text(p.left, _TENS)} x {_pattern_text(p.right, _COMP)}", level > _TENS)
    if isinstance(p, PCompose):
        return _wrap(f"{_pattern_text(p.outer, _COMP)} . {_pattern_text(p.inner, _ATOM)}", level > _COMP)
    if isinstance(p, Ket):
        return str(p)
    if isinstance(p, Unitary):
        if isinstance(p.term, Tensor):
            return f"[{_term_text(p.term, _SEQ)}]"
        if isinstance(p.term, Seq):
            return f"({_term_text(p.term, _SEQ)})"
        return _term_text(p.term, _ATOM)
    raise ElaborationError(f"cannot print pattern {p!r}")
