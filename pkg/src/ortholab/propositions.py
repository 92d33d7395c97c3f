"""Boolean predicates over state vectors.

A proposition is a tree built from three generating predicates (membership
in a subspace, expectation value inside a set of rational intervals, exact
equality with a vector) and the classical connectives.  Trees are evaluated
extensionally on nonzero states; there is deliberately no decision
procedure for equality of propositions themselves, only for their values
on given states.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .linalg import (
    Matrix,
    Rational,
    Scalar,
    Vector,
    inner,
    matrix_from_json,
    matrix_to_json,
    vector_from_json,
    vector_to_json,
)
from .lattice import Subspace, subspace_from_json, subspace_to_json
from .spin import SPIN_Y

__all__ = [
    "Interval",
    "Proposition",
    "InSubspace",
    "ExpectationIn",
    "EqualsVector",
    "And",
    "Or",
    "Not",
    "Constant",
    "TRUE",
    "FALSE",
    "expectation",
    "evaluate",
    "is_subspace_closed",
    "spin_bound_witness",
    "proposition_to_json",
    "proposition_from_json",
]


def _to_rational_or_none(value):
    if value is None:
        return None
    if isinstance(value, float):
        raise TypeError("interval endpoints must be exact rationals")
    return Rational(value)


@dataclass(frozen=True)
class Interval:
    """Rational interval, possibly unbounded; None endpoints mean +-infinity."""

    lo: object = None
    hi: object = None
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", _to_rational_or_none(self.lo))
        object.__setattr__(self, "hi", _to_rational_or_none(self.hi))
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @classmethod
    def point(cls, value) -> "Interval":
        return cls(value, value, True, True)

    def contains(self, x) -> bool:
        if self.lo is not None:
            if x < self.lo or (x == self.lo and not self.lo_closed):
                return False
        if self.hi is not None:
            if x > self.hi or (x == self.hi and not self.hi_closed):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "lo": "-inf" if self.lo is None else str(self.lo),
            "hi": "inf" if self.hi is None else str(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_json(cls, data) -> "Interval":
        lo = None if data["lo"] == "-inf" else Rational(data["lo"])
        hi = None if data["hi"] == "inf" else Rational(data["hi"])
        return cls(lo, hi, bool(data["lo_closed"]), bool(data["hi_closed"]))


class Proposition:
    """Base class; combine with ``&``, ``|`` and ``~``."""

    __slots__ = ()

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class InSubspace(Proposition):
    subspace: Subspace


@dataclass(frozen=True)
class ExpectationIn(Proposition):
    """The expectation value of ``observable`` lies in the union of ``windows``."""

    observable: Matrix
    windows: tuple

    def __post_init__(self):
        object.__setattr__(self, "windows", tuple(self.windows))
        if not self.observable.is_hermitian():
            raise ValueError("expectation predicates need a hermitian observable")


@dataclass(frozen=True)
class EqualsVector(Proposition):
    vector: Vector


@dataclass(frozen=True)
class And(Proposition):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Or(Proposition):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Not(Proposition):
    child: Proposition


@dataclass(frozen=True)
class Constant(Proposition):
    value: bool


TRUE = Constant(True)
FALSE = Constant(False)


def expectation(observable: Matrix, state: Vector):
    """Exact expectation <state, A state> / <state, state> as a rational.

    The numerator's imaginary part is asserted to vanish (it always does for
    a hermitian observable) rather than silently discarded.
    """
    if state.is_zero():
        raise ValueError("expectation is undefined on the zero vector")
    if not observable.is_hermitian():
        raise ValueError("expectation needs a hermitian observable")
    if observable.ncols != state.dim:
        raise ValueError(f"dimension mismatch: {observable.ncols} vs {state.dim}")
    num = inner(state, observable @ state)
    if num.im != 0:
        raise ArithmeticError("hermitian expectation produced a nonzero imaginary part")
    den = inner(state, state).re
    return num.re / den


def evaluate(prop: Proposition, state: Vector) -> bool:
    """Truth value of a proposition at a nonzero state."""
    if state.is_zero():
        raise ValueError("propositions are evaluated on nonzero states only")
    return _eval(prop, state)


def _eval(prop, state):
    if isinstance(prop, Constant):
        return prop.value
    if isinstance(prop, InSubspace):
        return prop.subspace.contains(state)
    if isinstance(prop, ExpectationIn):
        value = expectation(prop.observable, state)
        return any(w.contains(value) for w in prop.windows)
    if isinstance(prop, EqualsVector):
        if prop.vector.dim != state.dim:
            raise ValueError(f"dimension mismatch: {prop.vector.dim} vs {state.dim}")
        return state == prop.vector
    if isinstance(prop, And):
        return all(_eval(c, state) for c in prop.children)
    if isinstance(prop, Or):
        return any(_eval(c, state) for c in prop.children)
    if isinstance(prop, Not):
        return not _eval(prop.child, state)
    raise TypeError(f"not a proposition node: {prop!r}")


# Coefficients used to mix probe states when hunting closure violations.
# Includes 1 so that plain sums of probes are always tried.
_MIX_COEFFICIENTS = (Rational(1), Rational(-1), Rational(2), Rational(1, 2))


def is_subspace_closed(prop: Proposition, probe_states) -> bool:
    """One-sided falsifier for 'the truth set of ``prop`` is a subspace'.

    Looks for two satisfying probes whose rational combination falsifies the
    proposition.  False means a witness against closure was found; True only
    means no violation showed up among these probes.
    """
    probes = tuple(probe_states)
    satisfying = [u for u in probes if evaluate(prop, u)]
    for u, w in itertools.combinations_with_replacement(satisfying, 2):
        for a in _MIX_COEFFICIENTS:
            for b in _MIX_COEFFICIENTS:
                candidate = u.scale(Scalar(a)) + w.scale(Scalar(b))
                if candidate.is_zero():
                    continue
                if not evaluate(prop, candidate):
                    return False
    return True


def spin_bound_witness(state: Vector):
    """Expectation of y-spin for a 2-dim state; bounded by +-1/2 exactly."""
    if state.dim != 2:
        raise ValueError("spin_bound_witness needs a 2-dimensional state")
    return expectation(SPIN_Y, state)


# ---------------------------------------------------------------------------
# Wire format: tagged JSON tree.
# ---------------------------------------------------------------------------


def proposition_to_json(prop: Proposition) -> dict:
    if isinstance(prop, Constant):
        return {"type": "true" if prop.value else "false"}
    if isinstance(prop, InSubspace):
        return {"type": "in_subspace", "subspace": subspace_to_json(prop.subspace)}
    if isinstance(prop, ExpectationIn):
        return {
            "type": "expectation_in",
            "observable": matrix_to_json(prop.observable),
            "set": [w.to_json() for w in prop.windows],
        }
    if isinstance(prop, EqualsVector):
        return {"type": "equals", "vector": vector_to_json(prop.vector)}
    if isinstance(prop, And):
        return {"type": "and", "children": [proposition_to_json(c) for c in prop.children]}
    if isinstance(prop, Or):
        return {"type": "or", "children": [proposition_to_json(c) for c in prop.children]}
    if isinstance(prop, Not):
        return {"type": "not", "child": proposition_to_json(prop.child)}
    raise TypeError(f"not a proposition node: {prop!r}")


def proposition_from_json(data) -> Proposition:
    tag = data["type"]
    if tag == "true":
        return TRUE
    if tag == "false":
        return FALSE
    if tag == "in_subspace":
        return InSubspace(subspace_from_json(data["subspace"]))
    if tag == "expectation_in":
        return ExpectationIn(
            matrix_from_json(data["observable"]),
            tuple(Interval.from_json(w) for w in data["set"]),
        )
    if tag == "equals":
        return EqualsVector(vector_from_json(data["vector"]))
    if tag == "and":
        return And(tuple(proposition_from_json(c) for c in data["children"]))
    if tag == "or":
        return Or(tuple(proposition_from_json(c) for c in data["children"]))
    if tag == "not":
        return Not(proposition_from_json(data["child"]))
    raise ValueError(f"unknown proposition tag {tag!r}")
