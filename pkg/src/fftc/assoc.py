"""Finite-dimensional unital associative algebras given by structure constants.

Modules are left modules. A right module over ``A`` is a left module over
``opposite(A)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import NamedTuple, Sequence

import sympy

from .exact import (
    FieldSpec,
    GaussianRational,
    Matrix,
    ModP,
    SparseEchelon,
    gaussian,
    in_span,
    kernel_basis,
    mat_rref,
    parse_scalar,
    render_scalar,
    solve_linear,
    span_basis,
)

__all__ = [
    "Algebra",
    "AlgModule",
    "IdempotentSet",
    "LocalFreeResult",
    "NonSplitError",
    "NotProjectiveError",
    "validate_algebra",
    "validate_module",
    "center",
    "radical_char0",
    "is_nilpotent_matrix",
    "quotient_algebra",
    "primitive_idempotents",
    "cartan_matrix",
    "hom_basis",
    "endomorphism_algebra",
    "decompose_local_free",
    "decompose_module",
    "regular_module",
    "ideal_module",
    "simple_module",
    "opposite",
    "minimal_polynomial",
    "load_algebra",
    "load_module",
]


class NonSplitError(ValueError):
    """The semisimple quotient is not split over the working field."""

    def __init__(self, message: str, minpoly: str | None = None):
        super().__init__(message)
        self.minpoly = minpoly


class NotProjectiveError(ValueError):
    pass


Vec = tuple


def _vec_zero(n: int, field: FieldSpec) -> list:
    return [field.zero] * n


# --------------------------------------------------------------------------
# algebras


@dataclass(frozen=True, eq=False)
class Algebra:
    """Algebra with basis ``b_0..b_{n-1}``; ``mult[(i, j)]`` lists ``(k, c)`` with
    ``b_i b_j = Σ c b_k``. Missing pairs multiply to zero."""

    field: FieldSpec
    basis: tuple[str, ...]
    mult: dict
    unit: Vec
    parity: tuple[int, ...] | None = None

    def __post_init__(self):
        n = len(self.basis)
        if len(self.unit) != n:
            raise ValueError("unit has wrong length")
        if self.parity is not None and len(self.parity) != n:
            raise ValueError("parity has wrong length")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def graded(self) -> bool:
        return self.parity is not None

    def zero(self) -> Vec:
        return tuple(_vec_zero(self.dim, self.field))

    def basis_vector(self, i: int) -> Vec:
        v = _vec_zero(self.dim, self.field)
        v[i] = self.field.one
        return tuple(v)

    def vector(self, coords: Sequence) -> Vec:
        return tuple(self.field.convert(x) for x in coords)

    def mul(self, x: Sequence, y: Sequence) -> Vec:
        out = _vec_zero(self.dim, self.field)
        ynz = [(j, b) for j, b in enumerate(y) if b]
        mult = self.mult
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in ynz:
                terms = mult.get((i, j))
                if terms:
                    ab = a * b
                    for k, c in terms:
                        out[k] = out[k] + ab * c
        return tuple(out)

    def add(self, x: Sequence, y: Sequence) -> Vec:
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x: Sequence, y: Sequence) -> Vec:
        return tuple(a - b for a, b in zip(x, y))

    def scale(self, c, x: Sequence) -> Vec:
        c = self.field.convert(c)
        return tuple(c * a for a in x)

    def left_matrix(self, x: Sequence) -> Matrix:
        """Matrix of ``y ↦ x y``."""
        cols = [self.mul(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.field, rows=self.dim) if cols else Matrix.zeros(0, 0, self.field)

    def right_matrix(self, x: Sequence) -> Matrix:
        """Matrix of ``y ↦ y x``."""
        cols = [self.mul(self.basis_vector(j), x) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.field, rows=self.dim) if cols else Matrix.zeros(0, 0, self.field)

    @cached_property
    def op(self) -> Algebra:
        """The opposite algebra, cached so modules over it share one object."""
        return opposite(self)

    @cached_property
    def left_basis_matrices(self) -> tuple[Matrix, ...]:
        return tuple(self.left_matrix(self.basis_vector(i)) for i in range(self.dim))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices that generate the algebra, chosen greedily in basis order."""
        gens: list[int] = []
        span = SparseEchelon()
        span.add(_sparse(self.unit))
        elements = [self.unit]
        for i in range(self.dim):
            if len(span) == self.dim:
                break
            if span.contains({i: self.field.one}):
                continue
            gens.append(i)
            # words in the generators: close under right multiplication
            queue = list(elements)
            while queue:
                x = queue.pop()
                for g in gens:
                    y = self.mul(x, self.basis_vector(g))
                    if span.add(_sparse(y)):
                        elements.append(y)
                        queue.append(y)
        return tuple(gens)

    def to_json(self) -> dict:
        d: dict = {
            "field": self.field.to_json(),
            "dim": self.dim,
            "basis": list(self.basis),
            "unit": [render_scalar(x) for x in self.unit],
            "mult": [
                [i, j, k, render_scalar(c)]
                for (i, j), terms in sorted(self.mult.items())
                for k, c in terms
            ],
        }
        if self.parity is not None:
            d["parity"] = list(self.parity)
        return d

    @classmethod
    def from_json(cls, d: dict) -> Algebra:
        fld = FieldSpec.from_json(d["field"])
        n = int(d["dim"])
        basis = tuple(d.get("basis") or [f"b{i}" for i in range(n)])
        if len(basis) != n:
            raise ValueError("basis length differs from dim")
        unit = tuple(_scalar(x, fld) for x in d["unit"])
        acc: dict = {}
        for entry in d.get("mult", []):
            i, j, k, c = entry
            for idx in (i, j, k):
                if not (isinstance(idx, int) and 0 <= idx < n):
                    raise ValueError(f"index out of range in mult entry {entry}")
            row = acc.setdefault((i, j), {})
            row[k] = row.get(k, fld.zero) + _scalar(c, fld)
        mult = {ij: tuple((k, c) for k, c in sorted(t.items()) if c) for ij, t in acc.items()}
        mult = {ij: t for ij, t in mult.items() if t}
        parity = d.get("parity")
        return cls(fld, basis, mult, unit, tuple(parity) if parity is not None else None)


def _scalar(x, fld: FieldSpec):
    if isinstance(x, str):
        return parse_scalar(x, fld)
    if isinstance(x, int) and not isinstance(x, bool):
        return fld.convert(x)
    raise ValueError(f"scalars must be strings or integers, got {x!r}")


def _sparse(v: Sequence) -> dict:
    return {i: x for i, x in enumerate(v) if x}


def algebra_from_products(field: FieldSpec, basis: Sequence[str], product, unit: Sequence,
                          parity: Sequence[int] | None = None) -> Algebra:
    """Build an algebra from a function ``product(i, j) -> coordinate vector``."""
    n = len(basis)
    mult = {}
    for i in range(n):
        for j in range(n):
            v = product(i, j)
            terms = tuple((k, field.convert(c)) for k, c in enumerate(v) if c)
            if terms:
                mult[(i, j)] = terms
    return Algebra(field, tuple(basis), mult, tuple(field.convert(x) for x in unit),
                   tuple(parity) if parity is not None else None)


def opposite(a: Algebra) -> Algebra:
    mult = {(j, i): t for (i, j), t in a.mult.items()}
    return Algebra(a.field, a.basis, mult, a.unit, a.parity)


def load_algebra(path: str | Path) -> Algebra:
    with open(path) as fh:
        return Algebra.from_json(json.load(fh))


def validate_algebra(a: Algebra) -> list[str]:
    """All violated associativity, unit and grading identities (empty means valid)."""
    problems = []
    n = a.dim
    e = [a.basis_vector(i) for i in range(n)]
    for i in range(n):
        if a.mul(a.unit, e[i]) != e[i]:
            problems.append(f"unit is not a left identity on {a.basis[i]}")
        if a.mul(e[i], a.unit) != e[i]:
            problems.append(f"unit is not a right identity on {a.basis[i]}")
    prod = {(i, j): a.mul(e[i], e[j]) for i in range(n) for j in range(n)}
    for i in range(n):
        for j in range(n):
            ij = prod[(i, j)]
            for k in range(n):
                lhs = a.mul(ij, e[k])
                rhs = a.mul(e[i], prod[(j, k)])
                if lhs != rhs:
                    problems.append(
                        f"associativity fails on ({a.basis[i]},{a.basis[j]},{a.basis[k]})"
                    )
    if a.parity is not None:
        for (i, j), terms in a.mult.items():
            for k, _ in terms:
                if a.parity[k] != (a.parity[i] + a.parity[j]) % 2:
                    problems.append(
                        f"grading fails: {a.basis[i]}*{a.basis[j]} has a {a.basis[k]} term"
                    )
        for k, c in enumerate(a.unit):
            if c and a.parity[k]:
                problems.append("unit has an odd component")
    return problems


# --------------------------------------------------------------------------
# modules


class AlgModule:
    """Left module. The action of ``b_i`` is stored column-sparse:
    ``columns[i][c]`` is a ``dict`` row -> scalar giving ``b_i · v_c``."""

    def __init__(self, algebra: Algebra, dim: int, columns: Sequence[Sequence[dict]],
                 parity: Sequence[int] | None = None):
        if len(columns) != algebra.dim:
            raise ValueError("need one action per algebra basis element")
        for cols in columns:
            if len(cols) != dim:
                raise ValueError("action has wrong number of columns")
        if parity is not None and len(parity) != dim:
            raise ValueError("parity has wrong length")
        self.algebra = algebra
        self.dim = dim
        self.columns = tuple(tuple(c) for c in columns)
        self.parity = tuple(parity) if parity is not None else None

    @classmethod
    def from_matrices(cls, algebra: Algebra, matrices: Sequence[Matrix],
                      parity: Sequence[int] | None = None) -> AlgModule:
        dim = matrices[0].rows if matrices else 0
        cols = []
        for m in matrices:
            if (m.rows, m.cols) != (dim, dim):
                raise ValueError("action matrices must be square of equal size")
            cols.append([{r: m.data[r][c] for r in range(dim) if m.data[r][c]} for c in range(dim)])
        return cls(algebra, dim, cols, parity)

    @cached_property
    def action(self) -> tuple[Matrix, ...]:
        fld = self.algebra.field
        return tuple(
            Matrix.from_sparse(self.dim, self.dim,
                               ((r, c, v) for c, col in enumerate(cols) for r, v in col.items()),
                               fld)
            for cols in self.columns
        )

    @property
    def graded(self) -> bool:
        return self.parity is not None

    def act(self, x: Sequence, v: Sequence) -> Vec:
        """``x · v`` for an algebra element ``x`` and a module vector ``v``."""
        fld = self.algebra.field
        out = _vec_zero(self.dim, fld)
        vnz = [(c, b) for c, b in enumerate(v) if b]
        for i, a in enumerate(x):
            if not a:
                continue
            cols = self.columns[i]
            for c, b in vnz:
                ab = a * b
                for r, w in cols[c].items():
                    out[r] = out[r] + ab * w
        return tuple(out)

    def act_sparse(self, i: int, v: dict) -> dict:
        """``b_i · v`` for a sparse module vector."""
        out: dict = {}
        cols = self.columns[i]
        for c, b in v.items():
            for r, w in cols[c].items():
                nv = out.get(r, 0) + b * w
                if nv:
                    out[r] = nv
                else:
                    out.pop(r, None)
        return out

    def matrix_of(self, x: Sequence) -> Matrix:
        fld = self.algebra.field
        m = Matrix.zeros(self.dim, self.dim, fld)
        for i, a in enumerate(x):
            if a:
                m = m + self.action[i].scale(a)
        return m

    def shift(self) -> AlgModule:
        """Parity-shifted module (same action, flipped grading)."""
        if self.parity is None:
            raise ValueError("only graded modules can be parity shifted")
        return AlgModule(self.algebra, self.dim, self.columns, [1 - p for p in self.parity])

    def to_json(self) -> dict:
        d: dict = {
            "dim": self.dim,
            "action": [
                [[r, c, render_scalar(v)] for c, col in enumerate(cols) for r, v in sorted(col.items())]
                for cols in self.columns
            ],
        }
        if self.parity is not None:
            d["parity"] = list(self.parity)
        return d

    @classmethod
    def from_json(cls, d: dict, algebra: Algebra) -> AlgModule:
        dim = int(d["dim"])
        if len(d["action"]) != algebra.dim:
            raise ValueError("need one action per algebra basis element")
        cols = []
        for triples in d["action"]:
            acc = [dict() for _ in range(dim)]
            for r, c, v in triples:
                if not (0 <= r < dim and 0 <= c < dim):
                    raise ValueError(f"action index ({r},{c}) out of range")
                val = acc[c].get(r, algebra.field.zero) + _scalar(v, algebra.field)
                if val:
                    acc[c][r] = val
                else:
                    acc[c].pop(r, None)
            cols.append(acc)
        return cls(algebra, dim, cols, d.get("parity"))


def load_module(path: str | Path, algebra: Algebra | None = None) -> AlgModule:
    path = Path(path)
    with open(path) as fh:
        d = json.load(fh)
    if algebra is None:
        ref = d["algebra"]
        if isinstance(ref, dict):
            algebra = Algebra.from_json(ref)
        else:
            algebra = load_algebra(path.parent / ref)
    return AlgModule.from_json(d, algebra)


def regular_module(a: Algebra) -> AlgModule:
    cols = []
    for i in range(a.dim):
        bi = a.basis_vector(i)
        cols.append([_sparse(a.mul(bi, a.basis_vector(j))) for j in range(a.dim)])
    return AlgModule(a, a.dim, cols, a.parity)


def ideal_module(a: Algebra, e: Sequence, side: str = "right") -> AlgModule:
    """The projective ``e·A`` (``side="right"``, a left module over ``a.op``) or
    ``A·e`` (``side="left"``) on an echelon basis."""
    fld = a.field
    if side == "right":
        vecs = [a.mul(e, a.basis_vector(i)) for i in range(a.dim)]
        alg = a.op
    elif side == "left":
        vecs = [a.mul(a.basis_vector(i), e) for i in range(a.dim)]
        alg = a
    else:
        raise ValueError("side must be 'left' or 'right'")
    if a.parity is not None:
        ev = [tuple(x if a.parity[k] == 0 else 0 for k, x in enumerate(v)) for v in vecs]
        od = [tuple(x if a.parity[k] == 1 else 0 for k, x in enumerate(v)) for v in vecs]
        ev, od = span_basis(ev, fld, a.dim), span_basis(od, fld, a.dim)
        basis, parity = ev + od, [0] * len(ev) + [1] * len(od)
    else:
        basis, parity = span_basis(vecs, fld, a.dim), None
    if not basis:
        return AlgModule(alg, 0, [[] for _ in range(a.dim)], parity)
    coords = Matrix.from_columns(basis, fld)
    cols = []
    for i in range(a.dim):
        bi = a.basis_vector(i)
        col = []
        for v in basis:
            w = a.mul(v, bi) if side == "right" else a.mul(bi, v)
            x = solve_linear(coords, w)
            if x is None:
                raise ArithmeticError("ideal is not closed under the action")
            col.append(_sparse(x))
        cols.append(col)
    return AlgModule(alg, len(basis), cols, parity)


def simple_module(a: Algebra, e: Sequence, radical: Sequence[Sequence] | None = None) -> AlgModule:
    """The simple top ``A·e / J·e`` of the left projective ``A·e``."""
    fld = a.field
    if radical is None:
        radical = radical_char0(a)
    sub = span_basis([a.mul(r, a.mul(a.basis_vector(i), e)) for r in radical for i in range(a.dim)],
                     fld, a.dim)
    full = span_basis([a.mul(a.basis_vector(i), e) for i in range(a.dim)], fld, a.dim)
    comp = []
    for v in full:
        if not in_span(v, sub + comp, fld):
            comp.append(v)
    coords = Matrix.from_columns(sub + comp, fld)
    k = len(sub)
    cols = []
    for i in range(a.dim):
        bi = a.basis_vector(i)
        col = []
        for v in comp:
            x = solve_linear(coords, a.mul(bi, v))
            if x is None:
                raise ArithmeticError("left ideal is not closed under the action")
            col.append(_sparse(x[k:]))
        cols.append(col)
    return AlgModule(a, len(comp), cols)


def validate_module(m: AlgModule) -> list[str]:
    a = m.algebra
    problems = []
    if m.matrix_of(a.unit) != Matrix.identity(m.dim, a.field):
        problems.append("unit does not act as the identity")
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = m.action[i] @ m.action[j]
            rhs = m.matrix_of(a.mul(a.basis_vector(i), a.basis_vector(j)))
            if lhs != rhs:
                problems.append(f"action is not multiplicative on ({a.basis[i]},{a.basis[j]})")
    if m.parity is not None and a.parity is not None:
        for i in range(a.dim):
            for c, col in enumerate(m.columns[i]):
                for r in col:
                    if m.parity[r] != (a.parity[i] + m.parity[c]) % 2:
                        problems.append(f"action of {a.basis[i]} breaks the grading at ({r},{c})")
    return problems


# --------------------------------------------------------------------------
# center, radical


def center(a: Algebra) -> list[Vec]:
    """Basis of ``{z : z b_i = b_i z for all i}``."""
    n = a.dim
    rows = []
    for i in range(n):
        diff = a.right_matrix(a.basis_vector(i)) - a.left_matrix(a.basis_vector(i))
        rows.extend(diff.data)
    if not rows:
        return []
    return kernel_basis(Matrix(rows, a.field, cols=n, convert=False))


def is_nilpotent_matrix(m: Matrix) -> bool:
    if m.rows == 0:
        return True
    p = m
    # repeated squaring reaches an exponent >= dim
    e = 1
    while e < m.rows:
        p = p @ p
        e *= 2
    return p.is_zero()


def radical_char0(a: Algebra) -> list[Vec]:
    """Jacobson radical via Dickson's criterion ``tr(L_x L_y) = 0`` for all ``y``."""
    if a.field.characteristic != 0:
        raise ValueError("radical_char0 needs characteristic 0; supply a radical basis instead")
    n = a.dim
    # tr(L_x L_y) = tr(L_{xy}) is linear in xy
    tr = [m.trace() for m in a.left_basis_matrices]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            s = a.field.zero
            for k, c in a.mult.get((i, j), ()):
                s = s + c * tr[k]
            row.append(s)
        rows.append(row)
    gram = Matrix(rows, a.field, cols=n, convert=False)
    rad = span_basis(kernel_basis(gram), a.field, n)
    _check_nilpotent_ideal(a, rad)
    return rad


def _check_nilpotent_ideal(a: Algebra, ideal: Sequence[Vec]) -> None:
    if not ideal:
        return
    ech = SparseEchelon()
    for v in ideal:
        ech.add(_sparse(v))
    for v in ideal:
        for i in range(a.dim):
            bi = a.basis_vector(i)
            if not ech.contains(_sparse(a.mul(bi, v))) or not ech.contains(_sparse(a.mul(v, bi))):
                raise ArithmeticError("radical candidate is not a two-sided ideal")
    for v in ideal:
        if not is_nilpotent_matrix(a.left_matrix(v)):
            raise ArithmeticError("radical candidate has a non-nilpotent element")


# --------------------------------------------------------------------------
# quotients and minimal polynomials


@dataclass(frozen=True, eq=False)
class Quotient:
    algebra: Algebra
    complement: tuple[int, ...]  # indices of A's basis giving S's basis
    ideal_rows: tuple  # RREF rows of the ideal

    def project(self, x: Sequence) -> Vec:
        v = list(x)
        for row in self.ideal_rows:
            p = next(k for k, c in enumerate(row) if c)
            c = v[p]
            if c:
                for k, r in enumerate(row):
                    if r:
                        v[k] = v[k] - c * r
        return tuple(v[k] for k in self.complement)

    def lift(self, y: Sequence, dim: int, field: FieldSpec) -> Vec:
        v = _vec_zero(dim, field)
        for k, c in zip(self.complement, y):
            v[k] = c
        return tuple(v)


def quotient_algebra(a: Algebra, ideal: Sequence[Vec]) -> Quotient:
    """``A / I`` on the basis of standard vectors outside the ideal's pivot columns."""
    if ideal:
        rref, r, piv = mat_rref(Matrix(ideal, a.field, convert=False))
        rows = tuple(rref.data[:r])
    else:
        rows, piv = (), []
    comp = tuple(k for k in range(a.dim) if k not in set(piv))
    q = Quotient(a, comp, rows)
    names = tuple(a.basis[k] for k in comp)

    def product(i, j):
        return q.project(a.mul(a.basis_vector(comp[i]), a.basis_vector(comp[j])))

    parity = tuple(a.parity[k] for k in comp) if a.parity is not None else None
    s = algebra_from_products(a.field, names, product, q.project(a.unit), parity)
    return Quotient(s, comp, rows)


def minimal_polynomial(a: Algebra, c: Sequence, one: Sequence | None = None) -> list:
    """Monic minimal polynomial of ``c`` over the algebra (or a corner with identity
    ``one``), as coefficients from the constant term upward."""
    one = tuple(one) if one is not None else a.unit
    powers = [one]
    ech = SparseEchelon()
    ech.add(_sparse(one))
    while True:
        nxt = a.mul(powers[-1], c)
        if ech.contains(_sparse(nxt)):
            coeffs = solve_linear(Matrix.from_columns(powers, a.field), nxt)
            return [-x for x in coeffs] + [a.field.one]
        powers.append(nxt)
        ech.add(_sparse(nxt))


def _to_sympy(x):
    if isinstance(x, GaussianRational):
        return sympy.Rational(x.re.numerator if isinstance(x.re, Fraction) else x.re,
                              x.re.denominator if isinstance(x.re, Fraction) else 1) + \
            sympy.I * sympy.Rational(x.im.numerator if isinstance(x.im, Fraction) else x.im,
                                     x.im.denominator if isinstance(x.im, Fraction) else 1)
    if isinstance(x, Fraction):
        return sympy.Rational(x.numerator, x.denominator)
    if isinstance(x, ModP):
        return sympy.Integer(x.value)
    return sympy.Integer(x)


def _from_sympy(x, fld: FieldSpec):
    x = sympy.sympify(x)
    if fld.kind == "prime_field":
        return fld.convert(int(x))
    re_, im_ = sympy.re(x), sympy.im(x)
    re_f = Fraction(int(sympy.numer(re_)), int(sympy.denom(re_)))
    im_f = Fraction(int(sympy.numer(im_)), int(sympy.denom(im_)))
    return fld.convert(gaussian(re_f, im_f))


_T = sympy.Symbol("t")


def _sympy_poly(coeffs: Sequence, fld: FieldSpec) -> sympy.Poly:
    exprs = [_to_sympy(c) for c in reversed(coeffs)]
    if fld.kind == "prime_field":
        return sympy.Poly(exprs, _T, modulus=fld.p)
    if fld.kind == "gaussian_rational":
        return sympy.Poly(exprs, _T, domain=sympy.QQ_I)
    return sympy.Poly(exprs, _T, domain=sympy.QQ)


def _poly_at(a: Algebra, poly: sympy.Poly, c: Sequence, one: Sequence) -> Vec:
    """Evaluate ``poly`` at ``c`` by Horner's rule, with ``one`` as identity."""
    acc = a.scale(0, one)
    for coeff in poly.all_coeffs():
        acc = a.add(a.mul(acc, c), a.scale(_from_sympy(coeff, a.field), one))
    return acc


def _split_by_element(a: Algebra, c: Sequence, f: Sequence):
    """Try to split the idempotent ``f`` using ``c ∈ fAf``.

    Returns ``(e, minpoly)`` with ``e`` a nontrivial idempotent of ``fAf`` that
    is a polynomial in ``c``, or ``(None, minpoly)`` when the minimal
    polynomial is a power of one irreducible factor.
    """
    poly = _sympy_poly(minimal_polynomial(a, c, f), a.field)
    _, factors = poly.factor_list()
    if len(factors) < 2:
        return None, poly
    # linear factors first, so the split is an eigenspace projection
    factors.sort(key=lambda fm: (fm[0].degree(), str(fm[0].as_expr())))
    g, k = factors[0]
    gk = g ** k
    h = sympy.div(poly, gk)[0]
    _, t, one = sympy.gcdex(gk, h)
    # t*h is 1 modulo g^k and 0 modulo h: the projection onto the g-primary part
    proj = sympy.rem(t * h * (1 / one.LC()), poly)
    return _poly_at(a, proj, c, f), poly


def _corner_basis(a: Algebra, f: Sequence) -> list[Vec]:
    vecs = [a.mul(a.mul(f, a.basis_vector(i)), f) for i in range(a.dim)]
    return span_basis(vecs, a.field, a.dim)


def _leading_index(v: Sequence) -> int:
    return next(k for k, x in enumerate(v) if x)


def _split_semisimple(s: Algebra) -> list[Vec]:
    """Complete set of primitive orthogonal idempotents of a split semisimple algebra."""
    done: list[Vec] = []
    queue: list[Vec] = [s.unit]
    while queue:
        f = queue.pop()
        basis = _corner_basis(s, f)
        if len(basis) == 1:
            done.append(f)
            continue
        e, last_poly = _find_splitter(s, f, basis)
        if e is None:
            raise NonSplitError(
                f"cannot split a corner of dimension {len(basis)}; minimal polynomial "
                f"{last_poly.as_expr()} has a single irreducible factor",
                str(last_poly.as_expr()),
            )
        queue.append(e)
        queue.append(s.sub(f, e))
    done.sort(key=_leading_index)
    return done


def _candidates(s: Algebra, basis: Sequence[Vec]):
    yield from basis
    n = len(basis)
    for i in range(n):
        for j in range(i + 1, n):
            yield s.add(basis[i], basis[j])
    for i in range(n):
        for j in range(n):
            yield s.mul(basis[i], basis[j])
    # deterministic "generic" combinations
    for shift in range(1, 4):
        acc = s.zero()
        for k, v in enumerate(basis):
            acc = s.add(acc, s.scale(k * k + shift, v))
        yield acc


def _find_splitter(s: Algebra, f: Sequence, basis: Sequence[Vec]):
    witness = poly = None
    for c in _candidates(s, basis):
        e, poly = _split_by_element(s, c, f)
        if e is not None:
            return e, poly
        factors = poly.factor_list()[1]
        if factors[0][0].degree() != 1:
            # first irreducible minimal polynomial of degree > 1 is the report
            witness = witness or poly
            continue
        # c = λf + y with y nilpotent; some y·b is not nilpotent unless y = 0
        lam = -_from_sympy(factors[0][0].all_coeffs()[1], s.field)
        y = s.sub(c, s.scale(lam, f))
        if not any(y):
            continue
        for b in basis:
            z = s.mul(y, b)
            if any(z):
                e, poly2 = _split_by_element(s, z, f)
                if e is not None:
                    return e, poly2
    return None, witness or poly


@dataclass(frozen=True)
class IdempotentSet:
    """Complete set of primitive orthogonal idempotents with class labels.

    ``classes[k]`` is the index (into ``labels``) of the simple module that
    ``elements[k]`` belongs to; ``representatives[u]`` is the first element of
    class ``u``.
    """

    elements: tuple[Vec, ...]
    classes: tuple[int, ...]
    labels: tuple[str, ...]

    @property
    def representatives(self) -> tuple[Vec, ...]:
        reps = []
        for u in range(len(self.labels)):
            reps.append(self.elements[self.classes.index(u)])
        return tuple(reps)

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(self.classes.count(u) for u in range(len(self.labels)))


def _newton_lift(a: Algebra, x: Vec) -> Vec:
    e = x
    for _ in range(64):
        e2 = a.mul(e, e)
        if e2 == e:
            return e
        e3 = a.mul(e2, e)
        e = a.sub(a.scale(3, e2), a.scale(2, e3))
    raise ArithmeticError("idempotent lifting did not stabilize")


def primitive_idempotents(a: Algebra, radical: Sequence[Vec] | None = None,
                          labels: Sequence[str] | None = None) -> IdempotentSet:
    """Primitive orthogonal idempotents summing to 1, lifted from ``A/rad``."""
    if radical is None:
        radical = radical_char0(a)
    q = quotient_algebra(a, radical)
    s = q.algebra
    prims = _split_semisimple(s) if s.dim else []
    # classes: e_i ~ e_j iff e_i S e_j != 0
    classes: list[int] = []
    reps: list[Vec] = []
    for e in prims:
        for u, r in enumerate(reps):
            if any(any(s.mul(s.mul(r, s.basis_vector(k)), e)) for k in range(s.dim)):
                classes.append(u)
                break
        else:
            classes.append(len(reps))
            reps.append(e)
    # lift sequentially; each lift lives in the corner orthogonal to the previous ones
    lifted: list[Vec] = []
    acc = a.zero()
    for k, e in enumerate(prims):
        if k == len(prims) - 1:
            lifted.append(a.sub(a.unit, acc))
            break
        g = a.sub(a.unit, acc)
        x = a.mul(a.mul(g, q.lift(e, a.dim, a.field)), g)
        x = _newton_lift(a, x)
        lifted.append(x)
        acc = a.add(acc, x)
    nclasses = len(reps)
    if labels is None:
        labels = [f"S{u}" for u in range(nclasses)]
    elif len(labels) != nclasses:
        raise ValueError(f"{nclasses} simple classes but {len(labels)} labels")
    out = IdempotentSet(tuple(lifted), tuple(classes), tuple(labels))
    _check_idempotents(a, out)
    return out


def _check_idempotents(a: Algebra, idems: IdempotentSet) -> None:
    total = a.zero()
    for i, e in enumerate(idems.elements):
        if a.mul(e, e) != e:
            raise ArithmeticError("lifted element is not idempotent")
        for j, f in enumerate(idems.elements):
            if i != j and any(a.mul(e, f)):
                raise ArithmeticError("lifted idempotents are not orthogonal")
        total = a.add(total, e)
    if total != a.unit:
        raise ArithmeticError("idempotents do not sum to 1")


def cartan_matrix(a: Algebra, idems: IdempotentSet) -> Matrix:
    """``C[U][V] = dim e_U A e_V`` over class representatives."""
    total = a.zero()
    for e in idems.elements:
        total = a.add(total, e)
    if total != a.unit:
        raise ValueError("incomplete idempotent set: elements do not sum to 1")
    reps = idems.representatives
    rows = []
    for eu in reps:
        row = []
        for ev in reps:
            vecs = [a.mul(a.mul(eu, a.basis_vector(i)), ev) for i in range(a.dim)]
            row.append(len(span_basis(vecs, a.field, a.dim)))
        rows.append(row)
    return Matrix(rows, a.field)


# --------------------------------------------------------------------------
# homomorphisms


def hom_basis(m: AlgModule, n: AlgModule) -> list[Matrix]:
    """Basis of module maps ``m -> n`` (even maps when both are graded)."""
    if m.algebra is not n.algebra:
        raise ValueError("modules over different algebras")
    a = m.algebra
    fld = a.field
    graded = m.graded and n.graded
    # unknowns F[r][c] (r in n, c in m), restricted to parity-preserving entries if graded
    unknowns = [
        (r, c) for r in range(n.dim) for c in range(m.dim)
        if not graded or n.parity[r] == m.parity[c]
    ]
    index = {rc: k for k, rc in enumerate(unknowns)}
    if not unknowns:
        return []
    ech_rows: list[list] = []
    for g in a.generators:
        # (F ∘ A_m(g) - A_n(g) ∘ F)[r][c] = Σ_k F[r][k] A_m(g)[k][c] - Σ_k A_n(g)[r][k] F[k][c]
        am = m.columns[g]
        an_rows: dict[int, dict] = {}
        for k, col in enumerate(n.columns[g]):
            for r, v in col.items():
                an_rows.setdefault(r, {})[k] = v
        for r in range(n.dim):
            for c in range(m.dim):
                eq: dict = {}
                for k, v in am[c].items():
                    u = index.get((r, k))
                    if u is not None:
                        eq[u] = eq.get(u, 0) + v
                for k, v in an_rows.get(r, {}).items():
                    u = index.get((k, c))
                    if u is not None:
                        eq[u] = eq.get(u, 0) - v
                eq = {u: x for u, x in eq.items() if x}
                if eq:
                    ech_rows.append(eq)
    ech = SparseEchelon()
    for eq in ech_rows:
        ech.add(eq)
    basis = ech.kernel(len(unknowns), fld.one)
    out = []
    for vec in basis:
        entries = [(unknowns[u][0], unknowns[u][1], x) for u, x in vec.items()]
        out.append(Matrix.from_sparse(n.dim, m.dim, entries, fld))
    return out


def endomorphism_algebra(m: AlgModule) -> tuple[Algebra, list[Matrix]]:
    """``End(m)`` as an abstract algebra (product = composition) with its basis maps."""
    maps = hom_basis(m, m)
    fld = m.algebra.field
    if not maps:
        return algebra_from_products(fld, [], lambda i, j: (), ()), []
    coords = Matrix.from_columns([f.flat() for f in maps], fld)

    def express(f: Matrix):
        x = solve_linear(coords, f.flat())
        if x is None:
            raise ArithmeticError("composition left the endomorphism space")
        return x

    def product(i, j):
        return express(maps[i] @ maps[j])

    unit = express(Matrix.identity(m.dim, fld))
    names = [f"f{k}" for k in range(len(maps))]
    return algebra_from_products(fld, names, product, unit), maps


def _combine(maps: Sequence[Matrix], coeffs: Sequence, fld: FieldSpec, rows: int, cols: int) -> Matrix:
    out = Matrix.zeros(rows, cols, fld)
    for f, c in zip(maps, coeffs):
        if c:
            out = out + f.scale(c)
    return out


def _submodule_on_image(m: AlgModule, e: Matrix) -> AlgModule:
    """The summand ``e(m)`` for an idempotent module endomorphism ``e``."""
    fld = m.algebra.field
    cols = span_basis(e.columns(), fld, m.dim)
    # prefer homogeneous basis vectors for graded modules
    if m.graded:
        even = [tuple(x if m.parity[k] == 0 else 0 for k, x in enumerate(v)) for v in e.columns()]
        odd = [tuple(x if m.parity[k] == 1 else 0 for k, x in enumerate(v)) for v in e.columns()]
        ev = span_basis(even, fld, m.dim)
        od = span_basis(odd, fld, m.dim)
        cols = ev + od
        parity = [0] * len(ev) + [1] * len(od)
    else:
        parity = None
    basis = Matrix.from_columns(cols, fld)
    action = []
    for i in range(m.algebra.dim):
        imgs = [m.act(m.algebra.basis_vector(i), v) for v in cols]
        coords = [solve_linear(basis, w) for w in imgs]
        if any(x is None for x in coords):
            raise ArithmeticError("image of an idempotent is not a submodule")
        action.append([_sparse(x) for x in coords])
    return AlgModule(m.algebra, len(cols), action, parity)


def _isomorphic_indecomposable(x: AlgModule, y: AlgModule) -> bool:
    """For indecomposable ``x``: ``x ≅ y`` iff some ``g∘f`` with ``f: x→y``,
    ``g: y→x`` is not nilpotent (Fitting)."""
    if x.dim != y.dim:
        return False
    fs = hom_basis(x, y)
    gs = hom_basis(y, x)
    for f in fs:
        for g in gs:
            if not is_nilpotent_matrix(g @ f):
                return True
    return False


def decompose_module(m: AlgModule, candidates: Sequence[tuple[str, AlgModule]]):
    """Multiplicities of the candidate indecomposables in ``m``.

    Returns ``[(label, multiplicity), ...]`` in candidate order, omitting zero
    multiplicities.
    """
    e_alg, maps = endomorphism_algebra(m)
    if e_alg.dim == 0:
        return []
    idems = primitive_idempotents(e_alg)
    fld = m.algebra.field
    counts = {label: 0 for label, _ in candidates}
    for e in idems.elements:
        emap = _combine(maps, e, fld, m.dim, m.dim)
        summand = _submodule_on_image(m, emap)
        for label, cand in candidates:
            if _isomorphic_indecomposable(summand, cand):
                counts[label] += 1
                break
        else:
            raise ValueError(f"summand of dimension {summand.dim} matches no candidate")
    return [(label, counts[label]) for label, _ in candidates if counts[label]]


# --------------------------------------------------------------------------
# free modules over local superalgebras


class LocalFreeResult(NamedTuple):
    a: int
    b: int
    generators: tuple  # sparse vectors, even generators first


def decompose_local_free(m: AlgModule, radical: Sequence[Sequence] | None = None) -> LocalFreeResult:
    """``m ≅ A^a ⊕ (ΠA)^b`` for a graded module over a local superalgebra.

    ``radical`` may be any list of algebra elements ``r`` with
    ``rad·m = Σ r·m``; a basis of the radical always qualifies.
    """
    a = m.algebra
    if m.parity is None:
        raise ValueError("decompose_local_free needs a graded module")
    if radical is None:
        radical = radical_char0(a)
    parity = m.parity
    # rad·m, one echelon per parity so the quotient basis is homogeneous
    ech = SparseEchelon()
    rad_sparse = [_sparse(r) for r in radical]
    for r in rad_sparse:
        for c in range(m.dim):
            img: dict = {}
            for i, x in r.items():
                for row, v in m.act_sparse(i, {c: 1}).items():
                    nv = img.get(row, 0) + x * v
                    if nv:
                        img[row] = nv
                    else:
                        img.pop(row, None)
            if img:
                ech.add(img)
    piv = ech.pivots()
    gens_even = [k for k in range(m.dim) if k not in piv and parity[k] == 0]
    gens_odd = [k for k in range(m.dim) if k not in piv and parity[k] == 1]
    na, nb = len(gens_even), len(gens_odd)
    if m.dim != (na + nb) * a.dim:
        raise NotProjectiveError(
            f"dim m = {m.dim} but m/rad·m has dimension {na + nb} over an algebra of dimension {a.dim}"
        )
    span = SparseEchelon()
    for k in gens_even + gens_odd:
        for i in range(a.dim):
            span.add(m.act_sparse(i, {k: 1}))
    if len(span) != m.dim:
        raise NotProjectiveError("lifted generators do not generate the module freely")
    gens = tuple({k: a.field.one} for k in gens_even + gens_odd)
    return LocalFreeResult(na, nb, gens)
