"""
Hamiltonian spec files: JSON documents describing ``H = sum(lambda_i P_i)``.

See HAMILTONIAN_FORMAT.md for the schema.
"""
import json
import logging
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from services.algorithms import HamiltonianSpec, SpectralComponent
from services.errors import HamiltonianSpecError, QphError
from services.parser import elaborate_pattern, parse_pattern
from services.prelude import prelude_environment
from services.typecheck import type_of_pattern

logger = logging.getLogger(__name__)


class TermRecord(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    lam: float = Field(alias="lambda", allow_inf_nan=False)
    pattern: str = Field(min_length=1)


class HamiltonianFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=0)
    t: float = Field(allow_inf_nan=False)
    steps: int = Field(default=1, ge=1)
    terms: List[TermRecord] = Field(default_factory=list)


def _field_path(location) -> str:
    return ".".join(str(part) for part in location)


def load_hamiltonian(text: str) -> Tuple[HamiltonianSpec, HamiltonianFile]:
    """
    Validate a spec document and build its HamiltonianSpec.

    Args:
        text: JSON text

    Returns:
        (spec, raw document); the document carries ``t`` and ``steps``

    Raises:
        HamiltonianSpecError: invalid JSON, schema violation, or a pattern
            that does not parse, elaborate or act on ``n`` qubits; ``fields``
            lists the offending paths such as ``terms.2.pattern``
    """
    try:
        document = HamiltonianFile.model_validate(json.loads(text))
    except json.JSONDecodeError as exc:
        raise HamiltonianSpecError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    except ValidationError as exc:
        problems = [(_field_path(err["loc"]), err["msg"]) for err in exc.errors()]
        detail = "; ".join(f"{path}: {msg}" for path, msg in problems)
        raise HamiltonianSpecError(detail, [path for path, _ in problems]) from None

    env = prelude_environment()
    components = []
    for index, record in enumerate(document.terms):
        path = f"terms.{index}.pattern"
        try:
            pattern = elaborate_pattern(parse_pattern(record.pattern), env)
            pattern_type = type_of_pattern(pattern)
        except QphError as exc:
            raise HamiltonianSpecError(f"{path}: {exc}", [path]) from None
        if pattern_type.m != document.n:
            raise HamiltonianSpecError(
                f"{path}: pattern acts on {pattern_type.m} qubit(s), expected {document.n}", [path]
            )
        components.append(SpectralComponent(record.lam, pattern))
    logger.debug("loaded Hamiltonian with %d component(s) on %d qubit(s)", len(components), document.n)
    return HamiltonianSpec(document.n, tuple(components)), document
