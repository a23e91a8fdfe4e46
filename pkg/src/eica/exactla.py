"""Exact scalars over Q and F_p, and a small dense matrix kernel.

Rationals are ``fractions.Fraction`` (always canonical), prime field elements
are Python ints in ``[0, p)``.  Nothing here ever touches a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import FieldMismatch, ParseError, ShapeError

RATIONALS = "Q"
PRIME_FIELD = "Fp"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals or a prime field F_p with 2 <= p < 2**16."""

    kind: str = RATIONALS
    p: int | None = None

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.p is not None:
                raise FieldMismatch("the rationals carry no prime")
        elif self.kind == PRIME_FIELD:
            if not isinstance(self.p, int) or not 2 <= self.p < 2**16 or not _is_prime(self.p):
                raise FieldMismatch(f"not a prime in [2, 2^16): {self.p!r}")
        else:
            raise FieldMismatch(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls(RATIONALS)

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls(PRIME_FIELD, p)

    @classmethod
    def parse(cls, name: str) -> FieldSpec:
        """Parse a CLI-style field name: ``Q``, ``QQ``, ``F2``, ``F3``, ``GF5`` ..."""
        s = name.strip()
        if s.upper() in ("Q", "QQ"):
            return cls.rationals()
        for prefix in ("GF", "F"):
            if s.upper().startswith(prefix) and s[len(prefix):].isdigit():
                return cls.prime(int(s[len(prefix):]))
        raise ParseError(f"cannot parse field name {name!r}")

    @classmethod
    def from_json(cls, obj) -> FieldSpec:
        if isinstance(obj, str):
            return cls.parse(obj)
        kind = obj.get("kind")
        if kind in ("Q", "QQ", "Rationals"):
            return cls.rationals()
        if kind in ("Fp", "PrimeField"):
            return cls.prime(obj.get("p"))
        raise ParseError(f"unknown field {obj!r}")

    def to_json(self) -> dict:
        if self.kind == RATIONALS:
            return {"kind": "Q"}
        return {"kind": "Fp", "p": self.p}

    @property
    def name(self) -> str:
        return "Q" if self.kind == RATIONALS else f"F{self.p}"

    def __str__(self):
        return self.name

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == RATIONALS else self.p

    @property
    def order(self) -> int | None:
        """Number of elements, or None for an infinite field."""
        return None if self.kind == RATIONALS else self.p

    @property
    def is_finite(self) -> bool:
        return self.kind == PRIME_FIELD

    @property
    def zero(self):
        return Fraction(0) if self.kind == RATIONALS else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == RATIONALS else 1

    def coerce(self, x):
        if isinstance(x, bool) or isinstance(x, float):
            raise FieldMismatch(f"{type(x).__name__} is not an exact scalar")
        if self.kind == RATIONALS:
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            if isinstance(x, str):
                return self.parse_scalar(x)
            raise FieldMismatch(f"cannot read {x!r} as a rational")
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise FieldMismatch(f"{x} is not an element of {self.name}")
            x = x.numerator
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            return self.parse_scalar(x)
        raise FieldMismatch(f"cannot read {x!r} as an element of {self.name}")

    def parse_scalar(self, text) -> int | Fraction:
        """Read the text encoding: decimal in [0, p) for F_p, ``a`` or ``a/b`` for Q."""
        if isinstance(text, int) and not isinstance(text, bool):
            text = str(text)
        if not isinstance(text, str):
            raise ParseError(f"scalar must be an integer or string, got {text!r}")
        s = text.strip()
        try:
            if self.kind == RATIONALS:
                if "/" in s:
                    num, den = s.split("/")
                    if int(den) <= 0:
                        raise ParseError(f"denominator must be positive in {text!r}")
                    return Fraction(int(num), int(den))
                return Fraction(int(s))
            v = int(s)
        except ValueError as exc:
            raise ParseError(f"bad scalar {text!r} for {self.name}") from exc
        if not 0 <= v < self.p:
            raise ParseError(f"{v} is outside [0, {self.p})")
        return v

    def format_scalar(self, x) -> str:
        if self.kind == RATIONALS:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x))

    def json_scalar(self, x):
        """Integers stay integers in JSON output; non-integral rationals become strings."""
        if self.kind == RATIONALS and Fraction(x).denominator != 1:
            return self.format_scalar(x)
        return int(x)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == RATIONALS:
            return 1 / Fraction(x)
        return pow(x, -1, self.p)

    def elements(self):
        if self.kind == RATIONALS:
            raise ValueError("the rationals cannot be enumerated")
        return range(self.p)


class ExactMatrix:
    """Immutable dense matrix over a single FieldSpec."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: FieldSpec, rows: Iterable[Sequence], ncols: int | None = None):
        data = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ShapeError("ncols must be given for a matrix with no rows")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise ShapeError(f"ragged row of length {len(r)}, expected {ncols}")
        self.field = field
        self.nrows = len(data)
        self.ncols = ncols
        self.rows = data

    @classmethod
    def _raw(cls, field, rows, ncols) -> ExactMatrix:
        m = object.__new__(cls)
        m.field = field
        m.rows = rows if isinstance(rows, tuple) else tuple(map(tuple, rows))
        m.nrows = len(m.rows)
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, field, nrows, ncols) -> ExactMatrix:
        z = field.zero
        return cls._raw(field, tuple((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field, n) -> ExactMatrix:
        z, o = field.zero, field.one
        return cls._raw(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, field, columns: Sequence[Sequence], nrows: int) -> ExactMatrix:
        cols = [tuple(field.coerce(x) for x in c) for c in columns]
        for c in cols:
            if len(c) != nrows:
                raise ShapeError(f"column of length {len(c)}, expected {nrows}")
        return cls._raw(field, tuple(zip(*cols)) if cols else tuple(() for _ in range(nrows)), len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format_scalar(x) for x in r) for r in self.rows)
        return f"ExactMatrix[{self.field.name}]({self.nrows}x{self.ncols}: {body})"

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.field, self.shape, self.rows))

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def to_json(self) -> list[list]:
        fs = self.field.json_scalar
        return [[fs(x) for x in r] for r in self.rows]

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    @property
    def T(self) -> ExactMatrix:
        return ExactMatrix._raw(self.field, tuple(zip(*self.rows)) if self.nrows else
                                tuple(() for _ in range(self.ncols)), self.nrows)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def _check(self, other):
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"expected ExactMatrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")

    def __add__(self, other) -> ExactMatrix:
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        if self.field.kind == RATIONALS:
            rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        else:
            p = self.field.p
            rows = tuple(tuple((a + b) % p for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return ExactMatrix._raw(self.field, rows, self.ncols)

    def __neg__(self) -> ExactMatrix:
        if self.field.kind == RATIONALS:
            rows = tuple(tuple(-a for a in r) for r in self.rows)
        else:
            p = self.field.p
            rows = tuple(tuple((-a) % p for a in r) for r in self.rows)
        return ExactMatrix._raw(self.field, rows, self.ncols)

    def __sub__(self, other) -> ExactMatrix:
        return self + (-other)

    def scale(self, c) -> ExactMatrix:
        c = self.field.coerce(c)
        if self.field.kind == RATIONALS:
            rows = tuple(tuple(c * a for a in r) for r in self.rows)
        else:
            p = self.field.p
            rows = tuple(tuple(c * a % p for a in r) for r in self.rows)
        return ExactMatrix._raw(self.field, rows, self.ncols)

    def __matmul__(self, other) -> ExactMatrix:
        self._check(other)
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = tuple(zip(*other.rows)) if other.nrows else tuple(() for _ in range(other.ncols))
        if self.field.kind == RATIONALS:
            rows = tuple(
                tuple(Fraction(sum(a * b for a, b in zip(r, c) if a and b)) for c in cols)
                for r in self.rows
            )
        else:
            p = self.field.p
            rows = tuple(tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in self.rows)
        return ExactMatrix._raw(self.field, rows, other.ncols)

    def apply(self, vec: Sequence) -> tuple:
        """Matrix times a column vector given as a sequence."""
        if len(vec) != self.ncols:
            raise ShapeError(f"vector of length {len(vec)} for a {self.shape} matrix")
        if self.field.kind == RATIONALS:
            return tuple(Fraction(sum(a * b for a, b in zip(r, vec) if a and b)) for r in self.rows)
        p = self.field.p
        return tuple(sum(a * b for a, b in zip(r, vec)) % p for r in self.rows)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> ExactMatrix:
        return ExactMatrix._raw(self.field, tuple(tuple(self.rows[i][j] for j in col_idx) for i in row_idx),
                                len(col_idx))


def hstack(field: FieldSpec, blocks: Sequence[ExactMatrix], nrows: int) -> ExactMatrix:
    for b in blocks:
        if b.field != field:
            raise FieldMismatch(f"{b.field.name} vs {field.name}")
        if b.nrows != nrows:
            raise ShapeError(f"block with {b.nrows} rows, expected {nrows}")
    rows = tuple(sum((b.rows[i] for b in blocks), ()) for i in range(nrows))
    return ExactMatrix._raw(field, rows, sum(b.ncols for b in blocks))


def vstack(field: FieldSpec, blocks: Sequence[ExactMatrix], ncols: int) -> ExactMatrix:
    for b in blocks:
        if b.field != field:
            raise FieldMismatch(f"{b.field.name} vs {field.name}")
        if b.ncols != ncols:
            raise ShapeError(f"block with {b.ncols} columns, expected {ncols}")
    return ExactMatrix._raw(field, sum((b.rows for b in blocks), ()), ncols)


def block_diag(field: FieldSpec, blocks: Sequence[ExactMatrix]) -> ExactMatrix:
    ncols = sum(b.ncols for b in blocks)
    z = field.zero
    rows = []
    offset = 0
    for b in blocks:
        if b.field != field:
            raise FieldMismatch(f"{b.field.name} vs {field.name}")
        left = (z,) * offset
        right = (z,) * (ncols - offset - b.ncols)
        rows.extend(left + r + right for r in b.rows)
        offset += b.ncols
    return ExactMatrix._raw(field, tuple(rows), ncols)


# elimination -------------------------------------------------------------

def _eliminate(field: FieldSpec, rows: list[list], pivot_limit: int) -> list[int]:
    """In-place Gauss-Jordan on ``rows``; pivots are searched in columns < pivot_limit.

    Returns the pivot columns.  The pivot of each column is the first row (at or
    below the current pivot row) with a nonzero entry there.
    """
    pivots = []
    nrows = len(rows)
    r = 0
    if field.kind == RATIONALS:
        for c in range(pivot_limit):
            if r == nrows:
                break
            k = next((i for i in range(r, nrows) if rows[i][c]), None)
            if k is None:
                continue
            rows[r], rows[k] = rows[k], rows[r]
            inv = 1 / rows[r][c]
            prow = rows[r] = [x * inv if x else x for x in rows[r]]
            for i in range(nrows):
                if i != r:
                    f = rows[i][c]
                    if f:
                        rows[i] = [x - f * y if y else x for x, y in zip(rows[i], prow)]
            pivots.append(c)
            r += 1
    else:
        p = field.p
        for c in range(pivot_limit):
            if r == nrows:
                break
            k = next((i for i in range(r, nrows) if rows[i][c]), None)
            if k is None:
                continue
            rows[r], rows[k] = rows[k], rows[r]
            inv = pow(rows[r][c], -1, p)
            prow = rows[r] = [x * inv % p for x in rows[r]]
            for i in range(nrows):
                if i != r:
                    f = rows[i][c]
                    if f:
                        rows[i] = [(x - f * y) % p for x, y in zip(rows[i], prow)]
            pivots.append(c)
            r += 1
    return pivots


def rref(m: ExactMatrix) -> tuple[ExactMatrix, int, list[int]]:
    """Reduced row echelon form, rank, and pivot columns."""
    if not isinstance(m, ExactMatrix):
        raise TypeError(f"expected ExactMatrix, got {type(m).__name__}")
    rows = [list(r) for r in m.rows]
    pivots = _eliminate(m.field, rows, m.ncols)
    return ExactMatrix._raw(m.field, tuple(map(tuple, rows)), m.ncols), len(pivots), pivots


def rank(m: ExactMatrix) -> int:
    return rref(m)[1]


def kernel_basis(m: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of {v : m v = 0}, one per free column in increasing order."""
    red, rk, pivots = rref(m)
    field = m.field
    n = m.ncols
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    z, one = field.zero, field.one
    cols = []
    for j in free:
        v = [z] * n
        v[j] = one
        for i, pc in enumerate(pivots):
            a = red.rows[i][j]
            if a:
                v[pc] = -a if field.kind == RATIONALS else (-a) % field.p
        cols.append(tuple(v))
    return ExactMatrix._raw(field, tuple(zip(*cols)) if cols else tuple(() for _ in range(n)), len(cols))


def solve(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix | None:
    """One solution x of a x = b (free variables set to zero), or None if inconsistent."""
    a._check(b)
    if a.nrows != b.nrows:
        raise ShapeError(f"a has {a.nrows} rows but b has {b.nrows}")
    field = a.field
    n = a.ncols
    rows = [list(ra) + list(rb) for ra, rb in zip(a.rows, b.rows)]
    pivots = _eliminate(field, rows, n)
    rk = len(pivots)
    for i in range(rk, len(rows)):
        if any(rows[i][n:]):
            return None
    z = field.zero
    x = [[z] * b.ncols for _ in range(n)]
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][n:]
    return ExactMatrix._raw(field, tuple(map(tuple, x)), b.ncols)


def column_space(m: ExactMatrix) -> ExactMatrix:
    """Canonical basis (as columns) of the column space: the nonzero rows of rref(m^T)."""
    red, rk, _ = rref(m.T)
    return ExactMatrix._raw(m.field, tuple(zip(*red.rows[:rk])) if rk else
                            tuple(() for _ in range(m.nrows)), rk)


def complement_columns(span: ExactMatrix) -> list[int]:
    """Indices of standard basis vectors that extend a basis of col(span) to the whole space.

    Chosen greedily in increasing index order, so the result is canonical.
    """
    n = span.nrows
    aug = hstack(span.field, [span, ExactMatrix.identity(span.field, n)], n)
    rows = [list(r) for r in aug.rows]
    pivots = _eliminate(span.field, rows, aug.ncols)
    return [c - span.ncols for c in pivots if c >= span.ncols]


def in_span(span: ExactMatrix, vectors: ExactMatrix) -> bool:
    return solve(span, vectors) is not None
