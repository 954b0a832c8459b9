"""Central forms, symmetric algebras and the ideals ``Z ⊃ Rey ⊃ Hig``.

A central form is stored by its values on the basis. For a symmetric form
``ε`` with Gram matrix ``G[i][j] = ε(b_i b_j)`` the copairing is
``γ = Σ_ij (G^{-1})[i][j] b_i ⊗ b_j`` and ``τ(a) = Σ γ' a γ''``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import sympy

from .assoc import (
    AlgModule,
    Algebra,
    cartan_matrix,
    center,
    primitive_idempotents,
    radical_char0,
)
from .exact import (
    FieldSpec,
    Matrix,
    inverse,
    kernel_basis,
    parse_scalar,
    rank,
    render_scalar,
    same_span,
    solve_linear,
    span_basis,
)

__all__ = [
    "CentralForm",
    "Copairing",
    "TraceAssignment",
    "DegenerateFormError",
    "check_central_form",
    "copairing",
    "tau",
    "higman_basis",
    "reynolds_basis",
    "character_form",
    "zeta",
    "central_forms",
    "find_symmetric_form",
    "ideal_report",
    "extend_trace",
]


class DegenerateFormError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CentralForm:
    algebra: Algebra
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.algebra.dim:
            raise ValueError("form needs one value per basis element")

    def __call__(self, x: Sequence):
        s = self.algebra.field.zero
        for a, c in zip(x, self.coords):
            if a and c:
                s = s + a * c
        return s

    @classmethod
    def from_json(cls, d: dict, algebra: Algebra) -> CentralForm:
        fld = algebra.field
        vals = tuple(parse_scalar(x, fld) if isinstance(x, str) else fld.convert(x) for x in d["coords"])
        return cls(algebra, vals)

    def to_json(self) -> dict:
        return {"coords": [render_scalar(x) for x in self.coords]}


def _gram(f: CentralForm) -> Matrix:
    a = f.algebra
    n = a.dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            s = a.field.zero
            for k, c in a.mult.get((i, j), ()):
                s = s + c * f.coords[k]
            row.append(s)
        rows.append(row)
    return Matrix(rows, a.field, cols=n, convert=False)


def check_central_form(f: CentralForm) -> dict:
    g = _gram(f)
    central = g == g.transpose()
    return {"central": central, "nondegenerate": rank(g) == f.algebra.dim, "gram": g}


@dataclass(frozen=True)
class Copairing:
    """``γ = Σ_k left[k] ⊗ right[k]``; ``matrix`` holds ``γ`` in the basis ``b_i ⊗ b_j``."""

    left: tuple
    right: tuple
    matrix: Matrix

    def is_symmetric(self) -> bool:
        return self.matrix == self.matrix.transpose()


def _require_symmetric(f: CentralForm) -> Matrix:
    chk = check_central_form(f)
    if not chk["central"]:
        raise DegenerateFormError("form is not central")
    if not chk["nondegenerate"]:
        raise DegenerateFormError("form is degenerate")
    return chk["gram"]


def copairing(f: CentralForm) -> Copairing:
    a = f.algebra
    h = inverse(_require_symmetric(f))
    left = tuple(a.basis_vector(i) for i in range(a.dim))
    right = tuple(h.row(i) for i in range(a.dim))
    gamma = Copairing(left, right, h)
    # resolution identities on the basis
    for k in range(a.dim):
        bk = a.basis_vector(k)
        acc1 = a.zero()
        acc2 = a.zero()
        for x, y in zip(left, right):
            acc1 = a.add(acc1, a.scale(f(a.mul(bk, x)), y))
            acc2 = a.add(acc2, a.scale(f(a.mul(y, bk)), x))
        if acc1 != bk or acc2 != bk:
            raise ArithmeticError("copairing fails the resolution identity")
    if not gamma.is_symmetric():
        raise ArithmeticError("copairing of a central form is not symmetric")
    return gamma


def _is_central(a: Algebra, z: Sequence) -> bool:
    return all(
        a.mul(z, a.basis_vector(i)) == a.mul(a.basis_vector(i), z) for i in range(a.dim)
    )


def tau(f: CentralForm, x: Sequence, gamma: Copairing | None = None) -> tuple:
    a = f.algebra
    gamma = gamma or copairing(f)
    acc = a.zero()
    for l, r in zip(gamma.left, gamma.right):
        acc = a.add(acc, a.mul(a.mul(l, x), r))
    if not _is_central(a, acc):
        raise ArithmeticError("tau produced a non-central element")
    return acc


def higman_basis(a: Algebra, f: CentralForm) -> list[tuple]:
    gamma = copairing(f)
    return span_basis([tau(f, a.basis_vector(i), gamma) for i in range(a.dim)], a.field, a.dim)


def reynolds_basis(a: Algebra, radical: Sequence[Sequence] | None = None) -> list[tuple]:
    """``{z ∈ Z(A) : z r = 0 for all r ∈ rad}``."""
    if radical is None:
        radical = radical_char0(a)
    rows = []
    for i in range(a.dim):
        d = a.right_matrix(a.basis_vector(i)) - a.left_matrix(a.basis_vector(i))
        rows.extend(d.data)
    for r in radical:
        rows.extend(a.right_matrix(r).data)
    if not rows:
        return [a.basis_vector(i) for i in range(a.dim)]
    return span_basis(kernel_basis(Matrix(rows, a.field, cols=a.dim, convert=False)), a.field, a.dim)


def character_form(m: AlgModule) -> CentralForm:
    return CentralForm(m.algebra, tuple(x.trace() for x in m.action))


def zeta(f: CentralForm, z: Sequence) -> tuple:
    """Coordinates of the form ``ε(z·−)``."""
    a = f.algebra
    return tuple(f(a.mul(z, a.basis_vector(i))) for i in range(a.dim))


def central_forms(a: Algebra) -> list[tuple]:
    """Basis of the central forms ``{ε : ε(xy) = ε(yx)}``."""
    rows = []
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            d = a.sub(a.mul(a.basis_vector(i), a.basis_vector(j)),
                      a.mul(a.basis_vector(j), a.basis_vector(i)))
            if any(d):
                rows.append(d)
    if not rows:
        return [a.basis_vector(i) for i in range(a.dim)]
    return kernel_basis(Matrix(rows, a.field, cols=a.dim, convert=False))


def find_symmetric_form(a: Algebra, seed: int = 0, attempts: int = 24) -> dict:
    """Look for a nondegenerate central form.

    Returns ``{"form": CentralForm | None, "certificate": str}``. Absence is
    certified either by a common kernel vector of all central-form Grams, or by
    the symbolic determinant of the generic Gram vanishing identically.
    """
    basis = central_forms(a)
    if not basis:
        return {"form": None, "certificate": "no nonzero central forms"}
    grams = [_gram(CentralForm(a, tuple(v))) for v in basis]
    stacked = Matrix([row for g in grams for row in g.data], a.field, cols=a.dim, convert=False)
    common = kernel_basis(stacked)
    if common:
        return {
            "form": None,
            "certificate": "common kernel vector " + "(" + ", ".join(render_scalar(x) for x in common[0]) + ")",
        }
    rng = random.Random(seed)
    for _ in range(attempts):
        coeffs = [rng.randint(-50, 50) for _ in basis]
        coords = tuple(
            sum((c * v[k] for c, v in zip(coeffs, basis)), a.field.zero) for k in range(a.dim)
        )
        form = CentralForm(a, coords)
        if check_central_form(form)["nondegenerate"]:
            return {"form": form, "certificate": "nondegenerate Gram at a sample point"}
    # fall back to the exact generic determinant
    ts = sympy.symbols(f"t0:{len(basis)}")
    from .assoc import _to_sympy

    gen = sympy.Matrix(a.dim, a.dim, lambda i, j: sum(
        t * _to_sympy(g.data[i][j]) for t, g in zip(ts, grams)))
    if sympy.expand(gen.det()) == 0:
        return {"form": None, "certificate": "generic Gram determinant vanishes identically"}
    raise ArithmeticError("nondegenerate central form exists but sampling missed it")


def _cartan_rank(a: Algebra) -> int:
    return rank(cartan_matrix(a, primitive_idempotents(a)))


def ideal_report(a: Algebra, f: CentralForm, simples: Sequence[AlgModule],
                 projectives: Sequence[AlgModule], radical: Sequence[Sequence] | None = None) -> dict:
    """Dimensions of ``Z ⊃ Rey ⊃ Hig`` and the comparisons with module characters."""
    _require_symmetric(f)
    fld = a.field
    if radical is None:
        radical = radical_char0(a)
    z = center(a)
    rey = reynolds_basis(a, radical)
    hig = higman_basis(a, f)
    r_span = span_basis([character_form(m).coords for m in simples], fld, a.dim)
    i_span = span_basis([character_form(m).coords for m in projectives], fld, a.dim)

    def contained(small, big):
        return len(span_basis(list(big) + list(small), fld, a.dim)) == len(span_basis(big, fld, a.dim))

    zeta_hig = span_basis([zeta(f, x) for x in hig], fld, a.dim)
    zeta_rey = span_basis([zeta(f, x) for x in rey], fld, a.dim)
    c_rank = _cartan_rank(a)
    return {
        "dims": {"Z": len(z), "Rey": len(rey), "Hig": len(hig), "Jac": len(radical)},
        "semisimple": len(radical) == 0,
        "center": [[render_scalar(x) for x in v] for v in z],
        "reynolds": [[render_scalar(x) for x in v] for v in rey],
        "higman": [[render_scalar(x) for x in v] for v in hig],
        "characters_R": [[render_scalar(x) for x in v] for v in r_span],
        "characters_I": [[render_scalar(x) for x in v] for v in i_span],
        "chain_holds": contained(hig, rey) and contained(rey, z),
        "zeta_hig_equals_I": same_span(zeta_hig, i_span, fld),
        "zeta_rey_equals_R": same_span(zeta_rey, r_span, fld),
        "I_equals_R": same_span(i_span, r_span, fld),
        "cartan_rank": c_rank,
        "hig_dim_equals_cartan_rank": len(hig) == c_rank,
    }


# --------------------------------------------------------------------------
# traces on projectives


@dataclass(frozen=True)
class TraceAssignment:
    """Trace functionals on endomorphisms of indecomposable projectives, by label."""

    functionals: Mapping[str, Callable[[Matrix], object]]

    @classmethod
    def from_coordinates(cls, hom_bases: Mapping[str, Sequence[Matrix]],
                         coords: Mapping[str, Sequence], field: FieldSpec) -> TraceAssignment:
        """``t_U(f) = Σ_k coords[U][k]·x_k`` where ``f = Σ_k x_k·hom_bases[U][k]``."""
        funcs = {}
        for label, basis in hom_bases.items():
            values = [field.convert(v) for v in coords[label]]
            if len(values) != len(basis):
                raise ValueError(f"trace on {label} needs {len(basis)} values")
            mat = Matrix.from_columns([h.flat() for h in basis], field)

            def fn(f: Matrix, mat=mat, values=values, label=label):
                x = solve_linear(mat, f.flat())
                if x is None:
                    raise ValueError(f"map is not an endomorphism of {label}")
                s = field.zero
                for a, b in zip(x, values):
                    s = s + a * b
                return s

            funcs[label] = fn
        return cls(funcs)

    def __getitem__(self, label: str):
        return self.functionals[label]


def extend_trace(t: TraceAssignment, summands: Sequence[tuple[str, Matrix, Matrix]], f: Matrix):
    """``t_P(f) = Σ t_{P_U}(p_{Uα} ∘ f ∘ j_{Uα})`` over a decomposition of ``P``.

    ``summands`` lists ``(label, projection, embedding)`` with
    ``Σ embedding ∘ projection = id`` and ``projection ∘ embedding = id``.
    """
    if not summands:
        raise ValueError("empty decomposition")
    fld = f.field
    total = None
    for label, p, j in summands:
        if label not in t.functionals:
            raise ValueError(f"no trace for summand {label!r}; is the object projective?")
        if p @ j != Matrix.identity(p.rows, fld):
            raise ValueError(f"projection and embedding of {label} are not inverse")
        total = j @ p if total is None else total + j @ p
    if total != Matrix.identity(f.rows, fld):
        raise ValueError("summands do not decompose the object")
    s = fld.zero
    for label, p, j in summands:
        s = s + t[label](p @ f @ j)
    return s
