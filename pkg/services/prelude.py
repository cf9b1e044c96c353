"""
Bundled standard-gate definitions (X, Z, S, T, V, Y, H, CZ, CX, XC, SWAP, CCX).
"""
import hashlib
import logging
from typing import Dict, Optional, Tuple

from config import PRELUDE_PATH
from services.core_ast import TermExpr
from services.errors import ElaborationError
from services.parser import Environment, SourceFile, definitions_environment, parse_file
from services.typecheck import type_of_term

logger = logging.getLogger(__name__)

# Parsed and elaborated prelude, keyed by a hash of the asset text
_prelude_cache: Dict[str, Tuple[SourceFile, Environment]] = {}


def get_prelude_hash(text: str) -> str:
    """Generate hash for prelude text."""
    return hashlib.md5(text.encode("utf-8")).hexdigest()


def _load(text: Optional[str] = None) -> Tuple[SourceFile, Environment]:
    if text is None:
        text = PRELUDE_PATH.read_text(encoding="utf-8")
    key = get_prelude_hash(text)
    cached = _prelude_cache.get(key)
    if cached is None:
        source = parse_file(text)
        cached = (source, definitions_environment(source))
        _prelude_cache[key] = cached
        logger.debug("loaded prelude with %d definitions", len(source.defs))
    return cached


def get_prelude(text: Optional[str] = None) -> SourceFile:
    """
    Parsed prelude source file.

    Args:
        text: alternative prelude text; the bundled asset when omitted

    Returns:
        SourceFile whose definitions are visible to every program
    """
    return _load(text)[0]


def prelude_environment() -> Environment:
    return dict(_load()[1])


def prelude_term(name: str) -> TermExpr:
    """Elaborated prelude gate by name, e.g. ``prelude_term("SWAP")``."""
    env = _load()[1]
    if name not in env:
        raise ElaborationError(f"no prelude definition named {name!r}")
    return env[name]


def prelude_arities() -> Dict[str, int]:
    """Qubit count of every prelude gate, in definition order."""
    env = _load()[1]
    return {name: type_of_term(env[name]).n for name in get_prelude().names()}
