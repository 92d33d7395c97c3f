"""The lattice of subspaces of a finite-dimensional space.

Meet is intersection, join is span, negation is the orthogonal complement,
and the order is inclusion.  Subspaces carry a canonical RREF basis, so
lattice equality is a syntactic comparison and every law check below is an
exact decision, not an approximation.
"""

from __future__ import annotations

import random

from .linalg import Matrix, Rational, Scalar, Vector, nullspace, rank, rref, vector_from_json

__all__ = [
    "GAUSSIAN_RATIONAL",
    "RATIONAL_REAL",
    "Subspace",
    "span",
    "ortho",
    "join",
    "meet",
    "leq",
    "check_orthomodular",
    "distributes",
    "random_subspace",
    "substream",
    "find_nondistributive_witness",
    "subspace_to_json",
    "subspace_from_json",
]

GAUSSIAN_RATIONAL = "gaussian-rational"
RATIONAL_REAL = "rational-real"


class Subspace:
    """A subspace of a ``space_dim``-dimensional space, held as an RREF basis.

    The basis has no zero rows and is fully reduced, so two Subspace values
    are equal exactly when they denote the same subspace.  Construct through
    :func:`span` (or the classmethods) rather than directly; the constructor
    trusts its input to be canonical.
    """

    __slots__ = ("space_dim", "basis")

    def __init__(self, space_dim: int, basis: Matrix):
        if basis.ncols != space_dim:
            raise ValueError(f"basis width {basis.ncols} != space_dim {space_dim}")
        if basis.nrows > space_dim:
            raise ValueError("basis has more rows than the space dimension")
        self.space_dim = space_dim
        self.basis = basis

    @classmethod
    def zero(cls, space_dim: int) -> "Subspace":
        return cls(space_dim, Matrix((), ncols=space_dim))

    @classmethod
    def full(cls, space_dim: int) -> "Subspace":
        return cls(space_dim, Matrix.identity(space_dim))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def is_zero(self) -> bool:
        return self.basis.nrows == 0

    def is_full(self) -> bool:
        return self.basis.nrows == self.space_dim

    def contains(self, v: Vector) -> bool:
        """Exact membership test (the zero vector belongs to every subspace)."""
        if v.dim != self.space_dim:
            raise ValueError(f"vector dim {v.dim} != space_dim {self.space_dim}")
        stacked = Matrix(self.basis.rows + (v.entries,), ncols=self.space_dim)
        return rank(stacked) == self.dim

    def __and__(self, other):
        return meet(self, other)

    def __or__(self, other):
        return join(self, other)

    def __invert__(self):
        return ortho(self)

    def __le__(self, other):
        return leq(self, other)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.space_dim == other.space_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.space_dim, self.basis))

    def __repr__(self):
        rows = "; ".join(", ".join(str(e) for e in row) for row in self.basis.rows)
        return f"Subspace(dim {self.dim} of {self.space_dim}: [{rows}])"


def _same_space(s: Subspace, t: Subspace):
    if s.space_dim != t.space_dim:
        raise ValueError(f"space dimension mismatch: {s.space_dim} vs {t.space_dim}")


def _canonical(rows, space_dim: int) -> Subspace:
    reduced = rref(Matrix(rows, ncols=space_dim))
    kept = tuple(row for row in reduced.rows if any(row))
    return Subspace(space_dim, Matrix(kept, ncols=space_dim))


def span(vectors, space_dim: int) -> Subspace:
    """Smallest subspace containing the given vectors; empty input spans zero."""
    vectors = tuple(vectors)
    for v in vectors:
        if v.dim != space_dim:
            raise ValueError(f"vector dim {v.dim} != space_dim {space_dim}")
    return _canonical(tuple(v.entries for v in vectors), space_dim)


def ortho(s: Subspace) -> Subspace:
    """Orthogonal complement: all vectors orthogonal to every vector of ``s``."""
    conj_rows = tuple(tuple(e.conjugate() for e in row) for row in s.basis.rows)
    basis = nullspace(Matrix(conj_rows, ncols=s.space_dim))
    return Subspace(s.space_dim, basis)


def join(s: Subspace, t: Subspace) -> Subspace:
    """Least upper bound: the span of both subspaces together."""
    _same_space(s, t)
    return _canonical(s.basis.rows + t.basis.rows, s.space_dim)


def meet(s: Subspace, t: Subspace) -> Subspace:
    """Greatest lower bound: the intersection, via (s^perp v t^perp)^perp."""
    _same_space(s, t)
    return ortho(join(ortho(s), ortho(t)))


def leq(s: Subspace, t: Subspace) -> bool:
    """Inclusion order: true iff every basis row of ``s`` lies in ``t``."""
    _same_space(s, t)
    stacked = Matrix(s.basis.rows + t.basis.rows, ncols=s.space_dim)
    return rank(stacked) == t.dim


def check_orthomodular(s: Subspace, t: Subspace) -> bool:
    """Orthomodular law: s <= t implies t = s v (t ^ s^perp)."""
    _same_space(s, t)
    if not leq(s, t):
        return True
    return t == join(s, meet(t, ortho(s)))


def distributes(p: Subspace, q: Subspace, r: Subspace) -> bool:
    """Does p ^ (q v r) equal (p ^ q) v (p ^ r) for this triple?"""
    _same_space(p, q)
    _same_space(p, r)
    return meet(p, join(q, r)) == join(meet(p, q), meet(p, r))


# ---------------------------------------------------------------------------
# Seeded random sampling.
# ---------------------------------------------------------------------------

_NUMERATOR_BOUND = 3
_DENOMINATORS = (1, 2, 3)


def substream(seed, index: int) -> random.Random:
    """Independent deterministic RNG for one trial; stable across platforms."""
    return random.Random(f"{seed}:{index}")


def _random_rational(rng: random.Random):
    return Rational(rng.randint(-_NUMERATOR_BOUND, _NUMERATOR_BOUND), rng.choice(_DENOMINATORS))


def random_subspace(rng: random.Random, space_dim: int, field: str = GAUSSIAN_RATIONAL) -> Subspace:
    """Draw a proper subspace: dimension uniform in 1..space_dim-1, small
    rational entries, resampled until the requested rank is hit."""
    if space_dim < 2:
        raise ValueError("need space_dim >= 2 to sample a proper subspace")
    if field not in (GAUSSIAN_RATIONAL, RATIONAL_REAL):
        raise ValueError(f"unknown scalar field {field!r}")
    gaussian = field == GAUSSIAN_RATIONAL
    k = rng.randint(1, space_dim - 1)
    while True:
        rows = []
        for _ in range(k):
            row = []
            for _ in range(space_dim):
                re = _random_rational(rng)
                im = _random_rational(rng) if gaussian else 0
                row.append(Scalar(re, im))
            rows.append(tuple(row))
        candidate = _canonical(tuple(rows), space_dim)
        if candidate.dim == k:
            return candidate


def find_nondistributive_witness(
    space_dim: int,
    trials: int = 1000,
    seed=0,
    field: str = GAUSSIAN_RATIONAL,
):
    """Search seeded random triples for a distributivity failure.

    Returns the first failing triple (lowest trial index) or None.  Each
    trial draws from its own substream, so the result does not depend on
    evaluation order.
    """
    if space_dim < 2:
        raise ValueError("the subspace lattice of a space of dimension <= 1 is distributive")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    for trial in range(trials):
        rng = substream(seed, trial)
        p = random_subspace(rng, space_dim, field)
        q = random_subspace(rng, space_dim, field)
        r = random_subspace(rng, space_dim, field)
        if not distributes(p, q, r):
            return p, q, r
    return None


# ---------------------------------------------------------------------------
# Wire format.
# ---------------------------------------------------------------------------


def subspace_to_json(s: Subspace) -> dict:
    return {
        "space_dim": s.space_dim,
        "basis": [[str(e) for e in row] for row in s.basis.rows],
    }


def subspace_from_json(data) -> Subspace:
    space_dim = int(data["space_dim"])
    vectors = [vector_from_json(row) for row in data["basis"]]
    return span(vectors, space_dim)
