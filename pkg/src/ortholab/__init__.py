"""ortholab: an exact-arithmetic workbench for the lattice of subspaces,
Boolean predicates over states, and branching measurement experiments.

Everything is computed over the Gaussian rationals, so lattice identities,
Born probabilities and expectation values are exact decisions rather than
floating-point approximations.
"""

__version__ = "0.1.0"

from .linalg import (
    Matrix,
    Rational,
    Scalar,
    ScalarParseError,
    Vector,
    inner,
    nullspace,
    outer,
    parse_scalar,
    rank,
    rref,
    vec,
)
from .lattice import (
    GAUSSIAN_RATIONAL,
    RATIONAL_REAL,
    Subspace,
    check_orthomodular,
    distributes,
    find_nondistributive_witness,
    join,
    leq,
    meet,
    ortho,
    random_subspace,
    span,
    substream,
)
from .propositions import (
    EqualsVector,
    ExpectationIn,
    InSubspace,
    Interval,
    evaluate,
    expectation,
    is_subspace_closed,
    spin_bound_witness,
)
from .process import (
    Atom,
    ClassicalPrepare,
    ClassicalStep,
    ConditionalUnitary,
    Measure,
    Observable,
    Outcome,
    OutcomeIs,
    PointIs,
    Prepare,
    check_distributivity,
    hatch_demo,
    holds_surely,
    prob_of,
    run,
    spin_demo,
    spin_observable,
)
from .classical import (
    ClassicalState,
    MultiplicativeObservable,
    PhaseSpace,
    classical_expectation,
    density,
    two_state_demo,
)
from .dsl import (
    BooleanSetAlgebra,
    IdentityStatement,
    SubspaceLattice,
    check,
    eval_term,
    parse_statement,
    parse_term,
)

__all__ = [name for name in dir() if not name.startswith("_")]
