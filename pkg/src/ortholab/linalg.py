"""Exact Gaussian-rational scalars and the linear algebra built on them.

Every scalar is a complex number ``a + b*i`` with rational ``a`` and ``b``
kept in canonical reduced form, so subspace equality, Born probabilities
and expectation values downstream are all decidable exactly.  No operation
in this module introduces a tolerance.

Values (Scalar, Vector, Matrix) are immutable after construction and safe
to share between concurrent tasks.
"""

from __future__ import annotations

from fractions import Fraction

try:  # gmpy2.mpq is a drop-in replacement for Fraction, roughly 10x faster
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rational

__all__ = [
    "Rational",
    "Scalar",
    "ScalarParseError",
    "Vector",
    "Matrix",
    "parse_scalar",
    "vec",
    "inner",
    "outer",
    "rref",
    "rank",
    "nullspace",
    "matrix_to_json",
    "matrix_from_json",
    "vector_to_json",
    "vector_from_json",
]

RAT_ZERO = Rational(0)
RAT_ONE = Rational(1)

_RATIONAL_TYPES = (int, Rational, Fraction)


class ScalarParseError(ValueError):
    """A scalar literal does not match the wire grammar."""


def _to_rational(value):
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}: scalar parts must be exact rationals")
    return Rational(value)


class Scalar:
    """A Gaussian rational ``re + im*i``; the field all state spaces use."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_rational(re)
        self.im = _to_rational(im)

    def conjugate(self) -> "Scalar":
        return _scalar(self.re, -self.im)

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return _scalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return _scalar(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        return _scalar(a * c - b * d, a * d + b * c)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        c, d = other.re, other.im
        denom = c * c + d * d
        if not denom:
            raise ZeroDivisionError("division by zero scalar")
        a, b = self.re, self.im
        return _scalar((a * c + b * d) / denom, (b * c - a * d) / denom)

    def __neg__(self):
        return _scalar(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RATIONAL_TYPES):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        # real scalars hash like their rational value, matching __eq__
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"


def _scalar(re, im) -> Scalar:
    # internal fast constructor: re, im must already be Rational
    z = Scalar.__new__(Scalar)
    z.re = re
    z.im = im
    return z


SC_ZERO = Scalar(0)
SC_ONE = Scalar(1)
SC_I = Scalar(0, 1)


def format_scalar(z: Scalar) -> str:
    """Canonical printout: reduced parts, no ``+0i``, unit ``1i`` printed ``i``."""
    re, im = z.re, z.im
    if not im:
        return str(re)
    if im == 1:
        imag = "i"
    elif im == -1:
        imag = "-i"
    else:
        imag = f"{im}i"
    if not re:
        return imag
    return f"{re}+{imag}" if im > 0 else f"{re}{imag}"


def parse_scalar(text: str) -> Scalar:
    """Parse the scalar wire grammar; exact inverse of the canonical printer.

    Accepted forms: ``3``, ``-1/2``, ``i``, ``-i``, ``2i``, ``1+i``,
    ``3/4-1/3i``.  A real part, when present, precedes the imaginary part.
    """
    s = text.strip()
    if not s:
        raise ScalarParseError("empty scalar text")
    n = len(s)
    pos = 0

    def signed_term():
        # one signed term; returns (is_imaginary, rational value)
        nonlocal pos
        start = pos
        sign = 1
        if pos < n and s[pos] in "+-":
            if s[pos] == "-":
                sign = -1
            pos += 1
        if pos < n and s[pos] == "i":
            pos += 1
            return True, Rational(sign)
        digits_start = pos
        while pos < n and s[pos].isdigit():
            pos += 1
        if pos == digits_start:
            found = s[pos] if pos < n else "end of text"
            raise ScalarParseError(
                f"expected digits at position {pos + 1} in {text!r}, found {found!r}"
            )
        num = int(s[digits_start:pos])
        den = 1
        if pos < n and s[pos] == "/":
            pos += 1
            den_start = pos
            while pos < n and s[pos].isdigit():
                pos += 1
            if pos == den_start:
                raise ScalarParseError(f"expected denominator digits in token {s[start:pos]!r}")
            den = int(s[den_start:pos])
            if den == 0:
                raise ScalarParseError(f"zero denominator in token {s[start:pos]!r}")
        value = Rational(sign * num, den)
        if pos < n and s[pos] == "i":
            pos += 1
            return True, value
        return False, value

    first_imag, first = signed_term()
    if pos == n:
        return Scalar(0, first) if first_imag else Scalar(first, 0)
    if first_imag:
        raise ScalarParseError(
            f"unexpected {s[pos]!r} at position {pos + 1} in {text!r}:"
            " the imaginary term must come last"
        )
    if s[pos] not in "+-":
        raise ScalarParseError(f"unexpected {s[pos]!r} at position {pos + 1} in {text!r}")
    second_imag, second = signed_term()
    if not second_imag:
        raise ScalarParseError(f"expected an imaginary term at position {pos + 1} in {text!r}")
    if pos != n:
        raise ScalarParseError(f"trailing {s[pos:]!r} at position {pos + 1} in {text!r}")
    return Scalar(first, second)


def _as_scalar(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, str):
        return parse_scalar(value)
    if isinstance(value, _RATIONAL_TYPES):
        return Scalar(value)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


class Vector:
    """Immutable state vector; entries are Scalars, not required normalized."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = tuple(_as_scalar(e) for e in entries)
        if not self.entries:
            raise ValueError("vectors must have positive dimension")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def scale(self, factor) -> "Vector":
        z = _as_scalar(factor)
        return Vector(tuple(z * e for e in self.entries))

    def __add__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        _same_dim(self.dim, other.dim)
        return Vector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        _same_dim(self.dim, other.dim)
        return Vector(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"vec({', '.join(repr(str(e)) for e in self.entries)})"


def vec(*entries) -> Vector:
    """Build a Vector from scalar literals, ints, or Scalars: ``vec(1, 'i')``."""
    return Vector(entries)


def _same_dim(a: int, b: int):
    if a != b:
        raise ValueError(f"dimension mismatch: {a} vs {b}")


def inner(v: Vector, w: Vector) -> Scalar:
    """Hermitian inner product, conjugate-linear in the FIRST argument."""
    _same_dim(v.dim, w.dim)
    re = RAT_ZERO
    im = RAT_ZERO
    for a, b in zip(v.entries, w.entries):
        # conj(a) * b
        re += a.re * b.re + a.im * b.im
        im += a.re * b.im - a.im * b.re
    return _scalar(re, im)


def outer(v: Vector, w: Vector) -> "Matrix":
    """Rank-one operator |v><w|: entry (j, k) is v_j * conj(w_k)."""
    return Matrix(
        tuple(tuple(a * b.conjugate() for b in w.entries) for a in v.entries),
        ncols=w.dim,
    )


class Matrix:
    """Immutable rectangular matrix of Scalars (zero rows allowed)."""

    __slots__ = ("rows", "_ncols")

    def __init__(self, rows, ncols: int | None = None):
        self.rows = tuple(tuple(_as_scalar(e) for e in row) for row in rows)
        if self.rows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise ValueError("matrix rows must have equal length")
            width = widths.pop()
            if ncols is not None and ncols != width:
                raise ValueError(f"ncols={ncols} does not match row length {width}")
            self._ncols = width
        else:
            if ncols is None:
                raise ValueError("empty matrix needs an explicit ncols")
            self._ncols = ncols
        if self._ncols < 1:
            raise ValueError("matrices must have positive column count")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(
            tuple(
                tuple(SC_ONE if i == j else SC_ZERO for j in range(n))
                for i in range(n)
            )
        )

    @classmethod
    def diagonal(cls, *entries) -> "Matrix":
        diag = tuple(_as_scalar(e) for e in entries)
        n = len(diag)
        return cls(
            tuple(
                tuple(diag[i] if i == j else SC_ZERO for j in range(n))
                for i in range(n)
            )
        )

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    def row(self, i: int) -> Vector:
        return Vector(self.rows[i])

    def column(self, j: int) -> Vector:
        return Vector(tuple(r[j] for r in self.rows))

    def conj_transpose(self) -> "Matrix":
        if not self.rows:
            raise ValueError("cannot transpose a matrix with no rows")
        return Matrix(
            tuple(
                tuple(self.rows[i][j].conjugate() for i in range(self.nrows))
                for j in range(self._ncols)
            ),
            ncols=self.nrows,
        )

    def scale(self, factor) -> "Matrix":
        z = _as_scalar(factor)
        return Matrix(tuple(tuple(z * e for e in row) for row in self.rows), ncols=self._ncols)

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.nrows != other.nrows or self._ncols != other._ncols:
            raise ValueError("matrix shapes differ")
        return Matrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            ),
            ncols=self._ncols,
        )

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + other.scale(-1)

    def __matmul__(self, other):
        if isinstance(other, Vector):
            _same_dim(self._ncols, other.dim)
            return Vector(
                tuple(
                    sum((a * b for a, b in zip(row, other.entries)), SC_ZERO)
                    for row in self.rows
                )
            )
        if isinstance(other, Matrix):
            _same_dim(self._ncols, other.nrows)
            cols = other._ncols
            return Matrix(
                tuple(
                    tuple(
                        sum((row[k] * other.rows[k][j] for k in range(self._ncols)), SC_ZERO)
                        for j in range(cols)
                    )
                    for row in self.rows
                ),
                ncols=cols,
            )
        return NotImplemented

    def trace(self) -> Scalar:
        if self.nrows != self._ncols:
            raise ValueError("trace needs a square matrix")
        return sum((self.rows[i][i] for i in range(self.nrows)), SC_ZERO)

    def is_hermitian(self) -> bool:
        if self.nrows != self._ncols:
            raise ValueError("hermitian test needs a square matrix")
        return self == self.conj_transpose()

    def is_unitary(self) -> bool:
        if self.nrows != self._ncols:
            raise ValueError("unitary test needs a square matrix")
        return self @ self.conj_transpose() == Matrix.identity(self.nrows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._ncols == other._ncols and self.rows == other.rows

    def __hash__(self):
        return hash((self._ncols, self.rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.rows)
        return f"Matrix([{body}], ncols={self._ncols})"


# ---------------------------------------------------------------------------
# Row reduction kernel.
#
# Rows are flattened to [re0, im0, re1, im1, ...] lists of Rationals so the
# inner loops run on bare rational arithmetic.  This is the hot path for the
# whole lattice layer; keep it free of Scalar allocations.
# ---------------------------------------------------------------------------


def _flatten_rows(rows) -> list:
    flat = []
    for row in rows:
        out = []
        for e in row:
            out.append(e.re)
            out.append(e.im)
        flat.append(out)
    return flat


def _unflatten_row(flat_row, ncols) -> tuple:
    return tuple(_scalar(flat_row[2 * j], flat_row[2 * j + 1]) for j in range(ncols))


def _rref_in_place(flat, ncols) -> list:
    """Reduce flattened rows to RREF; returns the pivot column list."""
    nrows = len(flat)
    pivot_cols = []
    r = 0
    for c in range(ncols):
        cc = 2 * c
        pivot = None
        for k in range(r, nrows):
            row = flat[k]
            if row[cc] or row[cc + 1]:
                pivot = k
                break
        if pivot is None:
            continue
        if pivot != r:
            flat[r], flat[pivot] = flat[pivot], flat[r]
        prow = flat[r]
        a, b = prow[cc], prow[cc + 1]
        if b:
            d = a * a + b * b
            ia, ib = a / d, -b / d
            for j in range(cc, 2 * ncols, 2):
                x, y = prow[j], prow[j + 1]
                prow[j] = x * ia - y * ib
                prow[j + 1] = x * ib + y * ia
        elif a != 1:
            ia = 1 / a
            for j in range(cc, 2 * ncols, 2):
                prow[j] *= ia
                prow[j + 1] *= ia
        for k in range(nrows):
            if k == r:
                continue
            row = flat[k]
            fa, fb = row[cc], row[cc + 1]
            if fa or fb:
                for j in range(cc, 2 * ncols, 2):
                    x, y = prow[j], prow[j + 1]
                    row[j] -= fa * x - fb * y
                    row[j + 1] -= fa * y + fb * x
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    return pivot_cols


def rref(m: Matrix) -> Matrix:
    """Reduced row echelon form: unit pivots, cleared pivot columns, zero rows last."""
    flat = _flatten_rows(m.rows)
    _rref_in_place(flat, m.ncols)
    return Matrix(tuple(_unflatten_row(fr, m.ncols) for fr in flat), ncols=m.ncols)


def rank(m: Matrix) -> int:
    flat = _flatten_rows(m.rows)
    return len(_rref_in_place(flat, m.ncols))


def nullspace(m: Matrix) -> Matrix:
    """RREF basis (as rows) of ``{x : m @ x = 0}``; has ncols - rank rows."""
    ncols = m.ncols
    flat = _flatten_rows(m.rows)
    pivot_cols = _rref_in_place(flat, ncols)
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        row = [RAT_ZERO] * (2 * ncols)
        row[2 * free] = RAT_ONE
        for r, pc in enumerate(pivot_cols):
            row[2 * pc] = -flat[r][2 * free]
            row[2 * pc + 1] = -flat[r][2 * free + 1]
        basis.append(row)
    _rref_in_place(basis, ncols)
    return Matrix(tuple(_unflatten_row(b, ncols) for b in basis), ncols=ncols)


# ---------------------------------------------------------------------------
# Wire formats.
# ---------------------------------------------------------------------------


def vector_to_json(v: Vector) -> list:
    return [str(e) for e in v.entries]


def vector_from_json(data) -> Vector:
    return Vector(tuple(parse_scalar(e) for e in data))


def matrix_to_json(m: Matrix) -> dict:
    out = {"rows": [[str(e) for e in row] for row in m.rows]}
    if not m.rows:
        out["ncols"] = m.ncols
    return out


def matrix_from_json(data) -> Matrix:
    rows = [[parse_scalar(e) for e in row] for row in data["rows"]]
    return Matrix(rows, ncols=data.get("ncols"))
