"""
Hypothesis strategies for well-typed terms and patterns.

``terms(n)`` draws a term of type ``unitary n``; ``patterns(m)`` draws a pair
``(pattern, j)`` where the pattern has type ``pattern j m``.
"""
import math

from hypothesis import strategies as st

from services.core_ast import (
    KET0, KET1, KET_MINUS, KET_PLUS, Angle, Identity, IfLet, PCompose, PTensor, Phase, Seq,
    Tensor, Unitary, ptensor_all,
)

angles = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi,
                   allow_nan=False, allow_infinity=False).map(Angle)

exponents = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)

_SLOTS = [KET0, KET1, KET_PLUS, KET_MINUS, Unitary(Identity(1))]


@st.composite
def terms(draw, n: int, depth: int = 3, composition_free: bool = False):
    kinds = ["leaf"]
    if depth > 0:
        kinds += ["tensor", "iflet", "iflet"]
        if not composition_free:
            kinds.append("seq")
    kind = draw(st.sampled_from(kinds))
    if kind == "leaf":
        if n == 0:
            return draw(st.one_of(angles.map(Phase), st.just(Identity(0))))
        return draw(st.one_of(st.just(Identity(n)), angles.map(lambda a: Tensor(Phase(a), Identity(n)))))
    if kind == "seq":
        return Seq(draw(terms(n, depth - 1)), draw(terms(n, depth - 1)))
    if kind == "tensor":
        left = draw(st.integers(min_value=0, max_value=n))
        return Tensor(draw(terms(left, depth - 1, composition_free)),
                      draw(terms(n - left, depth - 1, composition_free)))
    pattern, j = draw(patterns(n, depth - 1))
    return IfLet(pattern, draw(terms(j, depth - 1, composition_free)))


@st.composite
def patterns(draw, m: int, depth: int = 2):
    kinds = ["leaf"]
    if depth > 0:
        kinds += ["unitary", "compose"]
        if m >= 2:
            kinds.append("tensor")
    kind = draw(st.sampled_from(kinds))
    if kind == "leaf":
        if m == 0:
            return Unitary(Identity(0)), 0
        slots = draw(st.lists(st.sampled_from(_SLOTS), min_size=m, max_size=m))
        return ptensor_all(slots), sum(1 for slot in slots if isinstance(slot, Unitary))
    if kind == "unitary":
        return Unitary(draw(terms(m, depth - 1))), m
    if kind == "tensor":
        left = draw(st.integers(min_value=1, max_value=m - 1))
        p1, j1 = draw(patterns(left, depth - 1))
        p2, j2 = draw(patterns(m - left, depth - 1))
        return PTensor(p1, p2), j1 + j2
    outer, middle = draw(patterns(m, depth - 1))
    inner, j = draw(patterns(middle, depth - 1))
    return PCompose(outer, inner), j


@st.composite
def sized_terms(draw, max_qubits: int = 4, max_depth: int = 4, composition_free: bool = False):
    """A term of random width, returned with that width."""
    n = draw(st.integers(min_value=0, max_value=max_qubits))
    depth = draw(st.integers(min_value=0, max_value=max_depth))
    return draw(terms(n, depth, composition_free)), n


@st.composite
def sized_patterns(draw, max_qubits: int = 3, max_depth: int = 3):
    """``(pattern, j, m)`` with random output width ``m >= 1``."""
    m = draw(st.integers(min_value=1, max_value=max_qubits))
    pattern, j = draw(patterns(m, draw(st.integers(min_value=0, max_value=max_depth))))
    return pattern, j, m
