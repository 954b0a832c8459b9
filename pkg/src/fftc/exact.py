"""Exact scalars and dense linear algebra over Q, Q(i) and F_p.

Scalars are plain Python numbers where possible: rationals are ``int`` or
``fractions.Fraction``; Gaussian rationals with a nonzero imaginary part are
:class:`GaussianRational` (a real-valued result always collapses back to a
rational); residues are :class:`ModP`. Matrices are immutable row-major
tuples tagged with their :class:`FieldSpec`.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "FieldSpec",
    "QQ",
    "QQ_I",
    "GaussianRational",
    "ModP",
    "Matrix",
    "ScalarParseError",
    "gaussian",
    "parse_scalar",
    "render_scalar",
    "mat_rref",
    "rank",
    "kernel_basis",
    "solve_linear",
    "inverse",
    "solve_many",
    "span_basis",
    "in_span",
    "same_span",
    "express_in_basis",
    "SparseEchelon",
]


class ScalarParseError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


# --------------------------------------------------------------------------
# scalar types


class GaussianRational:
    """``re + im*i`` with rational parts; ``im`` is never zero.

    Build values through :func:`gaussian`, which returns a plain rational when
    the imaginary part vanishes.
    """

    __slots__ = ("re", "im")

    def __init__(self, re_: Union[int, Fraction], im: Union[int, Fraction]):
        self.re = re_
        self.im = im

    @staticmethod
    def _parts(x):
        if isinstance(x, GaussianRational):
            return x.re, x.im
        if isinstance(x, (int, Fraction)):
            return x, 0
        return None

    def __add__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return gaussian(self.re + o[0], self.im + o[1])

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return gaussian(self.re - o[0], self.im - o[1])

    def __rsub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return gaussian(o[0] - self.re, o[1] - self.im)

    def __mul__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = o
        return gaussian(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def _inverse(self):
        n = self.re * self.re + self.im * self.im
        return GaussianRational(Fraction(self.re) / n, Fraction(-self.im) / n)

    def __truediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        if o[1] == 0:
            if o[0] == 0:
                raise ZeroDivisionError("division by zero")
            return gaussian(Fraction(self.re) / o[0], Fraction(self.im) / o[0])
        return self * GaussianRational(*o)._inverse()

    def __rtruediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return gaussian(*o) * self._inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self._inverse()
        result: object = 1
        for _ in range(abs(n)):
            result = result * base
        return result

    def __eq__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return self.re == o[0] and self.im == o[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return True

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"


def gaussian(re_, im=0):
    """Canonical Gaussian rational: a rational if ``im == 0``."""
    re_ = _norm_rational(re_)
    im = _norm_rational(im)
    if im == 0:
        return re_
    return GaussianRational(re_, im)


def _norm_rational(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


class ModP:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError(f"mixing residues mod {self.p} and mod {other.p}")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.value, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero residue")
        return ModP(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.value == 0:
            raise ZeroDivisionError("division by zero residue")
        return ModP(o * pow(self.value, -1, self.p), self.p)

    def __pow__(self, n: int):
        if n < 0:
            return ModP(pow(pow(self.value, -1, self.p), -n, self.p), self.p)
        return ModP(pow(self.value, n, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.value - o) % self.p == 0

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"ModP({self.value}, {self.p})"


# --------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("rational", "gaussian_rational", "prime_field"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "prime_field":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"prime_field needs a prime p, got {self.p!r}")
        elif self.p is not None:
            raise ValueError("p is only meaningful for prime_field")

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "prime_field" else 0

    @property
    def zero(self):
        return ModP(0, self.p) if self.kind == "prime_field" else 0

    @property
    def one(self):
        return ModP(1, self.p) if self.kind == "prime_field" else 1

    def convert(self, x):
        """Coerce ``x`` (int, Fraction, GaussianRational, ModP or str) into this field."""
        if isinstance(x, str):
            return parse_scalar(x, self)
        if self.kind == "prime_field":
            if isinstance(x, ModP):
                if x.p != self.p:
                    raise ValueError(f"residue mod {x.p} in field F_{self.p}")
                return x
            if isinstance(x, int):
                return ModP(x, self.p)
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {self.p}")
                return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)
            raise TypeError(f"cannot convert {x!r} to F_{self.p}")
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            return _norm_rational(x)
        if isinstance(x, GaussianRational):
            if self.kind != "gaussian_rational":
                raise ValueError(f"{x!r} is not rational")
            return x
        if isinstance(x, ModP):
            raise TypeError("residue in characteristic-zero field")
        raise TypeError(f"cannot convert {x!r} (floats are not exact)")

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.p is not None:
            d["p"] = self.p
        return d

    @classmethod
    def from_json(cls, d: dict) -> FieldSpec:
        return cls(d["kind"], d.get("p"))


QQ = FieldSpec("rational")
QQ_I = FieldSpec("gaussian_rational")


# --------------------------------------------------------------------------
# text grammar

_INT = r"[+-]?\d+"
_RAT = rf"{_INT}(?:/\d+)?"
_RAT_RE = re.compile(rf"^\s*({_INT})(?:/(\d+))?\s*$")
_GAUSS_RE = re.compile(
    rf"^\s*(?:(?P<re>{_RAT})\s*(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*i"
    rf"|(?P<im_only>[+-]?(?:\d+(?:/\d+)?)?)\s*\*?\s*i)\s*$"
)


def _parse_rat(text: str) -> Fraction | int:
    m = _RAT_RE.match(text)
    if not m:
        raise ScalarParseError(f"malformed scalar {text!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return num
    den = int(m.group(2))
    if den == 0:
        raise ScalarParseError(f"zero denominator in {text!r}")
    return _norm_rational(Fraction(num, den))


def _parse_coeff(text: str | None, sign: str = "+") -> Fraction | int:
    if text in (None, "", "+"):
        v: Fraction | int = 1
    elif text == "-":
        v = -1
    else:
        v = _parse_rat(text)
    return -v if sign == "-" else v


def parse_scalar(text: str, field: FieldSpec):
    """Parse ``int``, ``int/int``, ``a/b+c/d*i`` (Gaussian field) or an integer residue.

    >>> parse_scalar("3/4", QQ)
    Fraction(3, 4)
    """
    if not isinstance(text, str):
        raise ScalarParseError(f"expected a string, got {type(text).__name__}")
    if "i" in text:
        m = _GAUSS_RE.match(text)
        if not m:
            raise ScalarParseError(f"malformed scalar {text!r}")
        if field.kind != "gaussian_rational":
            raise ScalarParseError(f"imaginary term in {text!r} outside the Gaussian field")
        if m.group("re") is not None:
            return gaussian(_parse_rat(m.group("re")), _parse_coeff(m.group("im"), m.group("sign")))
        return gaussian(0, _parse_coeff(m.group("im_only")))
    return field.convert(_parse_rat(text))


def _render_rat(x) -> str:
    x = _norm_rational(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def render_scalar(x) -> str:
    """Canonical text form; ``parse_scalar(render_scalar(x), field) == x``."""
    if isinstance(x, ModP):
        return str(x.value)
    if isinstance(x, GaussianRational):
        im = x.im
        sign = "-" if im < 0 else "+"
        return f"{_render_rat(x.re)}{sign}{_render_rat(abs(im))}*i"
    if isinstance(x, (int, Fraction)):
        return _render_rat(x)
    raise TypeError(f"not an exact scalar: {x!r}")


# --------------------------------------------------------------------------
# matrices


def _inv(x):
    if isinstance(x, int):
        if x == 1 or x == -1:
            return x
        return Fraction(1, x)
    return 1 / x


class Matrix:
    """Dense matrix with exact entries, immutable by convention."""

    __slots__ = ("rows", "cols", "field", "data")

    def __init__(self, data: Sequence[Sequence], field: FieldSpec = QQ, cols: int | None = None,
                 convert: bool = True):
        rows = tuple(
            tuple(field.convert(x) for x in r) if convert else tuple(r) for r in data
        )
        self.rows = len(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        self.cols = cols
        self.field = field
        self.data = rows

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec = QQ) -> Matrix:
        z = field.zero
        return cls([[z] * cols for _ in range(rows)], field, cols=cols, convert=False)

    @classmethod
    def identity(cls, n: int, field: FieldSpec = QQ) -> Matrix:
        z, o = field.zero, field.one
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], field,
                   cols=n, convert=False)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], field: FieldSpec = QQ,
                     rows: int | None = None) -> Matrix:
        if not columns:
            return cls.zeros(rows or 0, 0, field)
        n = len(columns[0])
        return cls([[c[i] for c in columns] for i in range(n)], field)

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries: Iterable, field: FieldSpec = QQ) -> Matrix:
        z = field.zero
        data = [[z] * cols for _ in range(rows)]
        for r, c, v in entries:
            data[r][c] = data[r][c] + field.convert(v)
        return cls(data, field, cols=cols, convert=False)

    def __getitem__(self, idx):
        r, c = idx
        return self.data[r][c]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> Matrix:
        return Matrix(list(zip(*self.data)) if self.rows else [], self.field,
                      cols=self.rows, convert=False) if self.cols else Matrix.zeros(0, self.rows, self.field)

    T = property(transpose)

    def _check(self, other: Matrix):
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
                      self.field, cols=self.cols, convert=False)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
                      self.field, cols=self.cols, convert=False)

    def __neg__(self) -> Matrix:
        return self.scale(-1)

    def scale(self, c) -> Matrix:
        c = self.field.convert(c)
        return Matrix([[c * a for a in r] for r in self.data], self.field, cols=self.cols,
                      convert=False)

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        z = self.field.zero
        # sparse-aware: skip zero entries of the left factor
        other_rows = other.data
        out = []
        for r in self.data:
            acc = [z] * other.cols
            for k, a in enumerate(r):
                if a:
                    ok = other_rows[k]
                    for j, b in enumerate(ok):
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(out, self.field, cols=other.cols, convert=False)

    def apply(self, v: Sequence) -> tuple:
        z = self.field.zero
        out = []
        for r in self.data:
            s = z
            for a, b in zip(r, v):
                if a and b:
                    s = s + a * b
            out.append(s)
        return tuple(out)

    def kron(self, other: Matrix) -> Matrix:
        """Kronecker product, row/column index ``i*other.rows + k``."""
        self._check(other)
        z = self.field.zero
        R, C = self.rows * other.rows, self.cols * other.cols
        data = [[z] * C for _ in range(R)]
        onz = [[(k, l, b) for l, b in enumerate(orow) if b] for k, orow in enumerate(other.data)]
        for i, srow in enumerate(self.data):
            for j, a in enumerate(srow):
                if not a:
                    continue
                for k, entries in enumerate(onz):
                    target = data[i * other.rows + k]
                    off = j * other.cols
                    for _, l, b in entries:
                        target[off + l] = a * b
        return Matrix(data, self.field, cols=C, convert=False)

    def trace(self):
        if self.rows != self.cols:
            raise ValueError("trace of non-square matrix")
        s = self.field.zero
        for i in range(self.rows):
            s = s + self.data[i][i]
        return s

    def is_zero(self) -> bool:
        return not any(x for r in self.data for x in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix([[self.data[i][j] for j in cols] for i in rows], self.field,
                      cols=len(cols), convert=False)

    def flat(self) -> tuple:
        return tuple(x for r in self.data for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __pow__(self, n: int) -> Matrix:
        if self.rows != self.cols or n < 0:
            raise ValueError("matrix power needs a square matrix and n >= 0")
        result = Matrix.identity(self.rows, self.field)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def to_strings(self) -> list[list[str]]:
        return [[render_scalar(x) for x in r] for r in self.data]

    def __repr__(self):
        body = "; ".join(" ".join(render_scalar(x) for x in r) for r in self.data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


# --------------------------------------------------------------------------
# elimination


def _rref_rows(rows: list[list], ncols: int, max_pivot_col: int | None = None):
    """In-place RREF of a list of mutable rows. Returns pivot columns."""
    pivots: list[int] = []
    nrows = len(rows)
    r = 0
    limit = ncols if max_pivot_col is None else max_pivot_col
    for c in range(limit):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = _inv(prow[c])
        nz = [j for j in range(c, ncols) if prow[j]]
        if inv != 1:
            for j in nz:
                prow[j] = prow[j] * inv
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f:
                for j in nz:
                    row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def _clean(row) -> tuple:
    return tuple(_norm_rational(x) for x in row)


def mat_rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns."""
    rows = [list(r) for r in m.data]
    pivots = _rref_rows(rows, m.cols)
    rows = [_clean(r) for r in rows]
    return Matrix(rows, m.field, cols=m.cols, convert=False), len(pivots), pivots


def rank(m: Matrix) -> int:
    return mat_rref(m)[1]


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of the right null space ``{x : m x = 0}``, one vector per free column."""
    rows = [list(r) for r in m.data]
    pivots = _rref_rows(rows, m.cols)
    pivset = set(pivots)
    z, o = m.field.zero, m.field.one
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [z] * m.cols
        v[free] = o
        for i, pc in enumerate(pivots):
            a = rows[i][free]
            if a:
                v[pc] = -a
        basis.append(_clean(v))
    return basis


def solve_linear(a: Matrix, b: Sequence):
    """One exact solution of ``a x = b``, or ``None`` when the system is inconsistent."""
    if len(b) != a.rows:
        raise ValueError(f"dimension mismatch: {a.rows} rows, rhs of length {len(b)}")
    f = a.field
    rows = [list(r) + [f.convert(x)] for r, x in zip(a.data, b)]
    pivots = _rref_rows(rows, a.cols + 1, max_pivot_col=a.cols)
    for i in range(len(pivots), a.rows):
        if rows[i][a.cols]:
            return None
    x = [f.zero] * a.cols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][a.cols]
    x = _clean(x)
    if a.apply(x) != tuple(f.convert(v) for v in b):
        raise ArithmeticError("solution failed substitution check")
    return x


def solve_many(a: Matrix, rhs: Sequence[Sequence]) -> list | None:
    """Solutions of ``a x = b`` for several right-hand sides (one elimination)."""
    f = a.field
    k = len(rhs)
    rows = [list(r) + [f.convert(b[i]) for b in rhs] for i, r in enumerate(a.data)]
    pivots = _rref_rows(rows, a.cols + k, max_pivot_col=a.cols)
    for i in range(len(pivots), a.rows):
        if any(rows[i][a.cols:]):
            return None
    out = []
    for j in range(k):
        x = [f.zero] * a.cols
        for i, pc in enumerate(pivots):
            x[pc] = rows[i][a.cols + j]
        out.append(_clean(x))
    return out


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("inverse of non-square matrix")
    n = m.rows
    f = m.field
    z, o = f.zero, f.one
    rows = [list(r) + [o if i == j else z for j in range(n)] for i, r in enumerate(m.data)]
    pivots = _rref_rows(rows, 2 * n, max_pivot_col=n)
    if len(pivots) != n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix([_clean(r[n:]) for r in rows], f, cols=n, convert=False)


def span_basis(vectors: Sequence[Sequence], field: FieldSpec, length: int | None = None) -> list[tuple]:
    """Echelon basis (RREF rows) of the span of ``vectors``."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    n = len(vectors[0]) if length is None else length
    pivots = _rref_rows(vectors, n)
    return [_clean(vectors[i]) for i in range(len(pivots))]


def in_span(v: Sequence, basis: Sequence[Sequence], field: FieldSpec) -> bool:
    if not basis:
        return not any(v)
    return len(span_basis(list(basis) + [v], field)) == len(span_basis(basis, field))


def same_span(a: Sequence[Sequence], b: Sequence[Sequence], field: FieldSpec) -> bool:
    ra = span_basis(a, field)
    rb = span_basis(b, field)
    return ra == rb


def express_in_basis(v: Sequence, basis: Sequence[Sequence], field: FieldSpec):
    """Coordinates of ``v`` in ``basis`` (independent vectors), or ``None`` if outside the span."""
    if not basis:
        return () if not any(v) else None
    a = Matrix.from_columns(basis, field)
    return solve_linear(a, v)


class SparseEchelon:
    """Incremental row echelon basis of sparse vectors (``dict`` index -> scalar).

    Stored rows are normalized so the leading (smallest) index carries 1. This
    is the workhorse for spans of very sparse vectors, where dense elimination
    would waste most of its time on zeros.
    """

    def __init__(self):
        self.rows: dict[int, dict] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        """Fully reduce ``v`` against the stored rows; returns the remainder."""
        v = {k: x for k, x in v.items() if x}
        rows = self.rows
        heap = [k for k in v if k in rows]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap)
            x = v.get(k)
            if not x:
                continue
            for j, y in rows[k].items():
                old = v.get(j)
                nv = (old if old is not None else 0) - x * y
                if nv:
                    v[j] = nv
                    if old is None and j in rows:
                        heapq.heappush(heap, j)
                else:
                    v.pop(j, None)
        return v

    def add(self, v: dict) -> bool:
        """Insert ``v``; returns ``True`` if it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        lead = min(r)
        inv = _inv(r[lead])
        if inv != 1:
            r = {j: _norm_rational(x * inv) for j, x in r.items()}
        self.rows[lead] = r
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def pivots(self) -> set[int]:
        return set(self.rows)

    def kernel(self, nvars: int, one=1) -> list[dict]:
        """Null space basis of the stored rows viewed as equations in ``nvars`` unknowns."""
        reduced: dict[int, dict] = {}
        # decreasing pivot order: later rows are already free of other pivots
        for p in sorted(self.rows, reverse=True):
            row = dict(self.rows[p])
            for q in [k for k in row if k != p and k in reduced]:
                x = row.get(q)
                if not x:
                    continue
                for j, y in reduced[q].items():
                    nv = row.get(j, 0) - x * y
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
            reduced[p] = row
        out = []
        for fv in range(nvars):
            if fv in reduced:
                continue
            vec = {fv: one}
            for p, row in reduced.items():
                x = row.get(fv)
                if x:
                    vec[p] = -x
            out.append(vec)
        return out
