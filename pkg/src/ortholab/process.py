"""Branching preparation/measurement experiments with exact probabilities.

A process is a list of stages.  Running it enumerates every branch: each
projective measurement splits the current branch, weighting outcome ``b``
by <psi, P_b psi> / <psi, psi> and continuing with the unnormalized state
``P_b psi``.  Classical processes use sample-point labels and stochastic
kernels instead.  Histories come back with exact rational probabilities
that sum to 1.

Formulas over a run bind each predicate to a stage index, which is what
lets statements "before" and "after" a measurement coexist in one Boolean
expression without ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType

from .linalg import (
    Matrix,
    Rational,
    Vector,
    inner,
    matrix_from_json,
    matrix_to_json,
    vector_from_json,
)
from .lattice import span
from .propositions import ExpectationIn, InSubspace, Interval, evaluate
from . import spin

__all__ = [
    "Outcome",
    "Observable",
    "Prepare",
    "Measure",
    "OutcomeIs",
    "ConditionalUnitary",
    "ClassicalPrepare",
    "ClassicalStep",
    "TraceEntry",
    "History",
    "Formula",
    "Atom",
    "PointIs",
    "Conjunction",
    "Disjunction",
    "Negation",
    "Truth",
    "ALWAYS",
    "NEVER",
    "run",
    "evaluate_in",
    "holds_surely",
    "prob_of",
    "formula_stages",
    "DistributivityVerdict",
    "check_distributivity",
    "spin_observable",
    "spin_demo",
    "hatch_demo",
    "process_to_json",
    "process_from_json",
    "histories_to_json",
]


def _to_rational(value):
    if isinstance(value, float):
        raise TypeError("probabilities and outcome values must be exact rationals")
    return Rational(value)


@dataclass(frozen=True)
class Outcome:
    label: str
    value: object
    projector: Matrix

    def __post_init__(self):
        object.__setattr__(self, "value", _to_rational(self.value))


@dataclass(frozen=True)
class Observable:
    """A measurement given by its spectral projectors.

    Projectors must be hermitian, idempotent, pairwise orthogonal and sum
    to the identity; all four conditions are checked exactly on
    construction, so ``run`` can trust them.
    """

    name: str
    outcomes: tuple

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        if not self.outcomes:
            raise ValueError(f"observable {self.name!r} has no outcomes")
        dim = self.outcomes[0].projector.ncols
        total = None
        for out in self.outcomes:
            p = out.projector
            if p.nrows != dim or p.ncols != dim:
                raise ValueError(f"projector {out.label!r} is not {dim}x{dim}")
            if not p.is_hermitian():
                raise ValueError(f"projector {out.label!r} is not hermitian")
            if p @ p != p:
                raise ValueError(f"projector {out.label!r} is not idempotent")
            total = p if total is None else total + p
        zero = Matrix.identity(dim).scale(0)
        for i, a in enumerate(self.outcomes):
            for b in self.outcomes[i + 1 :]:
                if a.projector @ b.projector != zero:
                    raise ValueError(
                        f"projectors {a.label!r} and {b.label!r} are not orthogonal"
                    )
        if total != Matrix.identity(dim):
            raise ValueError(f"projectors of {self.name!r} do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.outcomes[0].projector.ncols

    def labels(self) -> tuple:
        return tuple(out.label for out in self.outcomes)


@dataclass(frozen=True)
class Prepare:
    state: Vector

    def __post_init__(self):
        if self.state.is_zero():
            raise ValueError("cannot prepare the zero vector")


@dataclass(frozen=True)
class Measure:
    observable: Observable


@dataclass(frozen=True)
class OutcomeIs:
    """Branch condition: the outcome recorded at ``stage`` equals ``label``."""

    stage: int
    label: str


@dataclass(frozen=True)
class ConditionalUnitary:
    condition: OutcomeIs
    matrix: Matrix

    def __post_init__(self):
        if not self.matrix.is_unitary():
            raise ValueError("conditional stage needs a unitary matrix")


@dataclass(frozen=True)
class ClassicalPrepare:
    point: str


@dataclass(frozen=True)
class ClassicalStep:
    """Stochastic transition: maps a sample point to weighted successors."""

    kernel: MappingProxyType

    def __post_init__(self):
        normalized = {}
        for source, transitions in self.kernel.items():
            row = tuple((str(target), _to_rational(p)) for target, p in transitions)
            total = Rational(0)
            for _, p in row:
                if p < 0:
                    raise ValueError(f"negative probability in kernel row {source!r}")
                total += p
            if total != 1:
                raise ValueError(f"kernel row {source!r} sums to {total}, not 1")
            normalized[str(source)] = row
        object.__setattr__(self, "kernel", MappingProxyType(normalized))


_QUANTUM_STAGES = (Prepare, Measure, ConditionalUnitary)
_CLASSICAL_STAGES = (ClassicalPrepare, ClassicalStep)


@dataclass(frozen=True)
class TraceEntry:
    stage: int
    outcome: str  # "-" when the stage has no measurement outcome
    state: object  # Vector for quantum branches, sample label for classical


@dataclass(frozen=True)
class History:
    """One branch of a run: its exact probability and per-stage trace."""

    probability: object
    trace: tuple

    def state_at(self, stage: int):
        if not 0 <= stage < len(self.trace):
            raise ValueError(f"stage index {stage} out of range 0..{len(self.trace) - 1}")
        return self.trace[stage].state


def _validate_process(stages):
    if not stages:
        raise ValueError("a process needs at least one stage")
    quantum = isinstance(stages[0], _QUANTUM_STAGES)
    for idx, st in enumerate(stages):
        if quantum and not isinstance(st, _QUANTUM_STAGES):
            raise ValueError("cannot mix classical stages into a quantum process")
        if not quantum and not isinstance(st, _CLASSICAL_STAGES):
            raise ValueError("cannot mix quantum stages into a classical process")
        if isinstance(st, ConditionalUnitary):
            cond = st.condition
            if not 0 <= cond.stage < idx:
                raise ValueError(
                    f"stage {idx} conditions on stage {cond.stage}, which is not earlier"
                )
            target = stages[cond.stage]
            if not isinstance(target, Measure):
                raise ValueError(f"stage {idx} conditions on stage {cond.stage}, not a measurement")
            if cond.label not in target.observable.labels():
                raise ValueError(
                    f"stage {idx} conditions on unknown outcome {cond.label!r}"
                )
    first = stages[0]
    if not isinstance(first, (Prepare, ClassicalPrepare)):
        raise ValueError("a process must start with a preparation")
    for idx, st in enumerate(stages[1:], start=1):
        if isinstance(st, (Prepare, ClassicalPrepare)):
            raise ValueError(f"stage {idx}: preparation is only allowed first")


def run(stages) -> tuple:
    """Enumerate all branches; histories in depth-first outcome order."""
    stages = tuple(stages)
    _validate_process(stages)
    histories = []

    def walk(idx, state, probability, trace):
        if idx == len(stages):
            histories.append(History(probability, tuple(trace)))
            return
        st = stages[idx]
        if isinstance(st, Prepare):
            trace.append(TraceEntry(idx, "-", st.state))
            walk(idx + 1, st.state, probability, trace)
            trace.pop()
        elif isinstance(st, Measure):
            norm = inner(state, state).re
            for out in st.observable.outcomes:
                post = out.projector @ state
                weight = inner(state, post).re / norm
                if weight == 0:
                    continue
                trace.append(TraceEntry(idx, out.label, post))
                walk(idx + 1, post, probability * weight, trace)
                trace.pop()
        elif isinstance(st, ConditionalUnitary):
            cond = st.condition
            applies = trace[cond.stage].outcome == cond.label
            after = st.matrix @ state if applies else state
            trace.append(TraceEntry(idx, "-", after))
            walk(idx + 1, after, probability, trace)
            trace.pop()
        elif isinstance(st, ClassicalPrepare):
            trace.append(TraceEntry(idx, "-", st.point))
            walk(idx + 1, st.point, probability, trace)
            trace.pop()
        elif isinstance(st, ClassicalStep):
            row = st.kernel.get(state)
            if row is None:
                raise ValueError(f"kernel has no transition row for point {state!r}")
            for target, p in row:
                if p == 0:
                    continue
                trace.append(TraceEntry(idx, target, target))
                walk(idx + 1, target, probability * p, trace)
                trace.pop()
        else:  # pragma: no cover
            raise TypeError(f"unknown stage {st!r}")

    walk(0, None, Rational(1), [])
    return tuple(histories)


# ---------------------------------------------------------------------------
# Stage-indexed formulas.
# ---------------------------------------------------------------------------


class Formula:
    """Boolean tree over stage-bound atoms; combine with ``&``, ``|``, ``~``."""

    __slots__ = ()

    def __and__(self, other):
        return Conjunction((self, other))

    def __or__(self, other):
        return Disjunction((self, other))

    def __invert__(self):
        return Negation(self)


@dataclass(frozen=True)
class PointIs:
    """Classical test: the branch sits at this sample point."""

    point: str


@dataclass(frozen=True)
class Atom(Formula):
    """A predicate evaluated on the state after ``stage`` in each history."""

    test: object  # Proposition for quantum runs, PointIs for classical runs
    stage: int


@dataclass(frozen=True)
class Conjunction(Formula):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Disjunction(Formula):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Negation(Formula):
    child: Formula


@dataclass(frozen=True)
class Truth(Formula):
    value: bool


ALWAYS = Truth(True)
NEVER = Truth(False)


def evaluate_in(formula: Formula, history: History) -> bool:
    """Truth value of a stage-indexed formula in one history."""
    if isinstance(formula, Truth):
        return formula.value
    if isinstance(formula, Atom):
        state = history.state_at(formula.stage)
        if isinstance(state, str):
            if not isinstance(formula.test, PointIs):
                raise TypeError("classical history states need PointIs atoms")
            return state == formula.test.point
        if isinstance(formula.test, PointIs):
            raise TypeError("PointIs atoms only apply to classical histories")
        return evaluate(formula.test, state)
    if isinstance(formula, Conjunction):
        return all(evaluate_in(c, history) for c in formula.children)
    if isinstance(formula, Disjunction):
        return any(evaluate_in(c, history) for c in formula.children)
    if isinstance(formula, Negation):
        return not evaluate_in(formula.child, history)
    raise TypeError(f"not a formula node: {formula!r}")


def holds_surely(formula: Formula, histories) -> bool:
    """True iff the formula holds in every positive-probability history."""
    return all(evaluate_in(formula, h) for h in histories)


def prob_of(formula: Formula, histories):
    """Exact probability mass of the histories where the formula is true."""
    total = Rational(0)
    for h in histories:
        if evaluate_in(formula, h):
            total += h.probability
    return total


def formula_stages(formula: Formula) -> frozenset:
    if isinstance(formula, Atom):
        return frozenset((formula.stage,))
    if isinstance(formula, (Conjunction, Disjunction)):
        out = frozenset()
        for c in formula.children:
            out |= formula_stages(c)
        return out
    if isinstance(formula, Negation):
        return formula_stages(formula.child)
    return frozenset()


@dataclass(frozen=True)
class DistributivityVerdict:
    """Side-by-side comparison of two formulas over one set of histories.

    ``stage_mismatch`` flags comparisons whose two sides do not even refer
    to the same stages; their disagreement says nothing about logic.
    """

    left_true_in_all: bool
    left_false_in_all: bool
    right_true_in_all: bool
    right_false_in_all: bool
    per_history: tuple  # (left, right) truth pairs, one per history
    stage_mismatch: bool

    @property
    def sides_agree(self) -> bool:
        return self.left_true_in_all == self.right_true_in_all

    @property
    def per_history_agree(self) -> bool:
        return all(l == r for l, r in self.per_history)

    @property
    def satisfied(self) -> bool:
        return self.sides_agree and self.per_history_agree

    def to_json(self) -> dict:
        return {
            "left_true_in_all": self.left_true_in_all,
            "left_false_in_all": self.left_false_in_all,
            "right_true_in_all": self.right_true_in_all,
            "right_false_in_all": self.right_false_in_all,
            "sides_agree": self.sides_agree,
            "per_history_agree": self.per_history_agree,
            "stage_mismatch": self.stage_mismatch,
            "satisfied": self.satisfied,
        }


def check_distributivity(left: Formula, right: Formula, histories) -> DistributivityVerdict:
    lvals = tuple(evaluate_in(left, h) for h in histories)
    rvals = tuple(evaluate_in(right, h) for h in histories)
    return DistributivityVerdict(
        left_true_in_all=all(lvals),
        left_false_in_all=not any(lvals),
        right_true_in_all=all(rvals),
        right_false_in_all=not any(rvals),
        per_history=tuple(zip(lvals, rvals)),
        stage_mismatch=formula_stages(left) != formula_stages(right),
    )


# ---------------------------------------------------------------------------
# The two worked demos.
# ---------------------------------------------------------------------------


def spin_observable(axis: str) -> Observable:
    projs = {
        "x": (spin.PROJ_X_UP, spin.PROJ_X_DOWN),
        "y": (spin.PROJ_Y_UP, spin.PROJ_Y_DOWN),
        "z": (spin.PROJ_Z_UP, spin.PROJ_Z_DOWN),
    }
    if axis not in projs:
        raise ValueError(f"unknown spin axis {axis!r}")
    up, down = projs[axis]
    return Observable(
        f"S_{axis}",
        (
            Outcome(f"{axis}+", spin.HALF, up),
            Outcome(f"{axis}-", -spin.HALF, down),
        ),
    )


def spin_demo():
    """Three-step spin experiment plus its named stage-indexed statements.

    Prepare x-spin up, measure y-spin, then rotate the y-down branch onto
    the x-up ray with the exact unitary diag(1, i).  Stage subscripts: _i is
    the post-preparation stage 0, _o the post-measurement stage 1, _f the
    final stage 2.  The primed statements assert the y-spin expectation
    value is +-1/2 rather than asserting an eigenstate.
    """
    in_x_up = InSubspace(span([spin.X_UP], 2))
    in_y_up = InSubspace(span([spin.Y_UP], 2))
    in_y_down = InSubspace(span([spin.Y_DOWN], 2))

    stages = (
        Prepare(spin.X_UP),
        Measure(spin_observable("y")),
        ConditionalUnitary(OutcomeIs(1, "y-"), Matrix.diagonal(1, "i")),
    )
    formulas = {}
    for stage, tag in ((0, "i"), (1, "o"), (2, "f")):
        formulas[f"p_{tag}"] = Atom(in_x_up, stage)
        formulas[f"q_{tag}"] = Atom(in_y_up, stage)
        formulas[f"r_{tag}"] = Atom(in_y_down, stage)
    formulas["q'_i"] = Atom(ExpectationIn(spin.SPIN_Y, (Interval.point(spin.HALF),)), 0)
    formulas["r'_i"] = Atom(ExpectationIn(spin.SPIN_Y, (Interval.point(-spin.HALF),)), 0)
    return stages, formulas


def hatch_demo():
    """Classical analogue: a ball on a hatch drops to q or r with chance 1/2.

    Stage 0 is before the hatch opens (ball surely at p), stage 1 after.
    """
    stages = (
        ClassicalPrepare("p"),
        ClassicalStep(
            {
                "p": (("q", Rational(1, 2)), ("r", Rational(1, 2))),
                "q": (("q", Rational(1)),),
                "r": (("r", Rational(1)),),
            }
        ),
    )
    formulas = {}
    for stage, tag in ((0, "i"), (1, "o")):
        for point in ("p", "q", "r"):
            formulas[f"{point}_{tag}"] = Atom(PointIs(point), stage)
    return stages, formulas


# ---------------------------------------------------------------------------
# Wire formats.
# ---------------------------------------------------------------------------


def _outcome_to_json(out: Outcome) -> dict:
    return {
        "label": out.label,
        "value": str(out.value),
        "projector": matrix_to_json(out.projector),
    }


def _observable_to_json(obs: Observable) -> dict:
    return {"name": obs.name, "outcomes": [_outcome_to_json(o) for o in obs.outcomes]}


def _observable_from_json(data) -> Observable:
    return Observable(
        data["name"],
        tuple(
            Outcome(o["label"], Rational(o["value"]), matrix_from_json(o["projector"]))
            for o in data["outcomes"]
        ),
    )


def stage_to_json(stage) -> dict:
    if isinstance(stage, Prepare):
        return {"kind": "prepare", "state": [str(e) for e in stage.state]}
    if isinstance(stage, Measure):
        return {"kind": "measure", "observable": _observable_to_json(stage.observable)}
    if isinstance(stage, ConditionalUnitary):
        return {
            "kind": "conditional_unitary",
            "condition": {"stage": stage.condition.stage, "outcome": stage.condition.label},
            "matrix": matrix_to_json(stage.matrix),
        }
    if isinstance(stage, ClassicalPrepare):
        return {"kind": "classical_prepare", "point": stage.point}
    if isinstance(stage, ClassicalStep):
        return {
            "kind": "classical_step",
            "kernel": {
                src: [[target, str(p)] for target, p in row]
                for src, row in stage.kernel.items()
            },
        }
    raise TypeError(f"unknown stage {stage!r}")


def stage_from_json(data):
    kind = data["kind"]
    if kind == "prepare":
        return Prepare(vector_from_json(data["state"]))
    if kind == "measure":
        return Measure(_observable_from_json(data["observable"]))
    if kind == "conditional_unitary":
        cond = data["condition"]
        return ConditionalUnitary(
            OutcomeIs(int(cond["stage"]), cond["outcome"]),
            matrix_from_json(data["matrix"]),
        )
    if kind == "classical_prepare":
        return ClassicalPrepare(data["point"])
    if kind == "classical_step":
        kernel = {
            src: tuple((target, Rational(p)) for target, p in row)
            for src, row in data["kernel"].items()
        }
        return ClassicalStep(kernel)
    raise ValueError(f"unknown stage kind {kind!r}")


def process_to_json(stages) -> list:
    return [stage_to_json(s) for s in stages]


def process_from_json(data) -> tuple:
    return tuple(stage_from_json(s) for s in data)


def _state_to_json(state):
    if isinstance(state, str):
        return state
    return [str(e) for e in state]


def histories_to_json(histories) -> list:
    return [
        {
            "prob": str(h.probability),
            "trace": [
                {"stage": t.stage, "outcome": t.outcome, "state": _state_to_json(t.state)}
                for t in h.trace
            ],
        }
        for h in histories
    ]
