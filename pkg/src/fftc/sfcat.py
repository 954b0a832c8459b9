"""Symplectic fermion categories SF(h, β) for ``N = dim(h)/2``.

Sector 0 objects are finite-dimensional super modules over the exterior
algebra ``Λ = Λ(h)`` on generators ``a_1..a_2N``; sector 1 objects are plain
super vector spaces. ``β`` enters only through ``β^{-2}``, which satisfies
``(β^{-2})^2 = (-1)^N``.

Basis of ``Λ``: subsets ``S`` of ``{1..2N}`` (written as sorted tuples) in
lexicographic order, ``e_S = a_{s1} ... a_{sk}``, parity ``|S| mod 2``.

Simple objects are labelled ``1, Pi1, T, PiT``; their projective covers are
``Lambda, PiLambda, T, PiT``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .assoc import AlgModule, Algebra, algebra_from_products, decompose_local_free, hom_basis
from .exact import (
    QQ_I,
    Matrix,
    SparseEchelon,
    gaussian,
    parse_scalar,
    render_scalar,
    solve_linear,
    solve_many,
)
from .frobform import CentralForm, TraceAssignment, extend_trace
from .grring import CommRing
from .superlin import SuperSpace

__all__ = [
    "IRR",
    "J_LABELS",
    "PROJECTIVE_COVER",
    "LambdaAlgebra",
    "SFObject",
    "SFModularData",
    "ResourceCapError",
    "lambda_algebra",
    "sf_object",
    "sf_tensor",
    "sf_hom_basis",
    "sf_modified_trace",
    "sf_fusion",
    "sf_fusion_closed_form",
    "sf_cartan",
    "sf_cartan_from_composition_series",
    "sf_modular_data",
    "sf_phi_table",
    "sf_check_trace_vs_tg",
    "sf_end_algebra",
    "beta_sq_inv_symbolic",
    "max_dense_dim",
    "right_multiplication",
    "sf_grothendieck_ring",
]

FIELD = QQ_I
IRR = ("1", "Pi1", "T", "PiT")
J_LABELS = ("1", "T", "PiT")
PROJECTIVE_COVER = {"1": "Lambda", "Pi1": "PiLambda", "T": "T", "PiT": "PiT"}


class ResourceCapError(RuntimeError):
    pass


def max_dense_dim() -> int:
    return int(os.environ.get("FFTC_MAX_DIM", "4096"))


def _shuffle_sign(a: Sequence[int], b: Sequence[int]) -> int:
    """``(-1)^{#{(s, t) : s in a, t in b, s > t}}``: sign of sorting ``a + b``."""
    inv = sum(1 for s in a for t in b if s > t)
    return -1 if inv % 2 else 1


# --------------------------------------------------------------------------
# the exterior Hopf superalgebra


@dataclass(frozen=True, eq=False)
class LambdaAlgebra:
    N: int
    beta_sq_inv: object
    algebra: Algebra
    subsets: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def top(self) -> int:
        """Index of the top monomial ``a_1 ... a_2N``."""
        return self.index[tuple(range(1, 2 * self.N + 1))]

    @property
    def index(self) -> dict:
        return _subset_index(self.N)

    def generator(self, j: int) -> int:
        """Basis index of ``a_j`` (``1 <= j <= 2N``)."""
        return self.index[(j,)]

    def counit(self) -> tuple:
        return self.algebra.basis_vector(self.index[()])

    def cointegral(self) -> tuple:
        """Coordinates of ``λ``: ``λ(e_top) = β^{-2}``, zero elsewhere."""
        v = [0] * self.dim
        v[self.top] = self.beta_sq_inv
        return tuple(v)

    def coproduct(self, k: int) -> list[tuple[int, int, int]]:
        """``Δ(e_S) = Σ_{A ⊔ B = S} sign(A, B) e_A ⊗ e_B`` as ``(iA, iB, sign)``."""
        return _coproduct(self.N)[k]

    def apply_coproduct(self, x: Sequence) -> dict:
        out: dict = {}
        for k, c in enumerate(x):
            if c:
                for ia, ib, s in self.coproduct(k):
                    out[(ia, ib)] = out.get((ia, ib), 0) + s * c
        return {key: v for key, v in out.items() if v}

    def antipode(self, x: Sequence) -> tuple:
        return tuple(c if len(self.subsets[k]) % 2 == 0 else -c for k, c in enumerate(x))


@lru_cache(maxsize=None)
def _subsets(N: int) -> tuple[tuple[int, ...], ...]:
    gens = range(1, 2 * N + 1)
    subs = [c for r in range(2 * N + 1) for c in combinations(gens, r)]
    return tuple(sorted(subs))


@lru_cache(maxsize=None)
def _subset_index(N: int) -> dict:
    return {s: k for k, s in enumerate(_subsets(N))}


@lru_cache(maxsize=None)
def _coproduct(N: int) -> tuple:
    subs = _subsets(N)
    index = _subset_index(N)
    out = []
    for s in subs:
        terms = []
        for r in range(len(s) + 1):
            for a in combinations(s, r):
                b = tuple(x for x in s if x not in a)
                terms.append((index[a], index[b], _shuffle_sign(a, b)))
        out.append(tuple(terms))
    return tuple(out)


@lru_cache(maxsize=None)
def _exterior_algebra(N: int) -> Algebra:
    subs = _subsets(N)
    index = _subset_index(N)
    mult = {}
    for i, s in enumerate(subs):
        for j, t in enumerate(subs):
            if set(s) & set(t):
                continue
            u = tuple(sorted(s + t))
            mult[(i, j)] = ((index[u], _shuffle_sign(s, t)),)
    names = tuple("".join(f"a{x}" for x in s) or "1" for s in subs)
    unit = tuple(1 if not s else 0 for s in subs)
    parity = tuple(len(s) % 2 for s in subs)
    return Algebra(FIELD, names, mult, unit, parity)


def beta_sq_inv_symbolic(N: int):
    """``β^{-2}`` for ``β = e^{-iNπ/4}``, i.e. ``i^N``."""
    return gaussian(0, 1) ** N if N % 2 else (-1) ** (N // 2)


def _parse_beta(value, N: int):
    if isinstance(value, str):
        value = parse_scalar(value, FIELD)
    value = FIELD.convert(value)
    if value * value != (-1) ** N:
        raise ValueError(
            f"beta_sq_inv = {render_scalar(value)} does not satisfy (beta_sq_inv)^2 = (-1)^{N}"
        )
    return value


def lambda_algebra(N: int, beta_sq_inv="symbolic") -> LambdaAlgebra:
    if not isinstance(N, int) or N < 1:
        raise ValueError("N must be a positive integer")
    if beta_sq_inv == "symbolic":
        beta_sq_inv = beta_sq_inv_symbolic(N)
    return LambdaAlgebra(N, _parse_beta(beta_sq_inv, N), _exterior_algebra(N), _subsets(N))


# --------------------------------------------------------------------------
# objects


@dataclass(frozen=True, eq=False)
class SFObject:
    lam: LambdaAlgebra
    sector: int
    parity: tuple[int, ...]
    module: AlgModule | None = None
    name: str = ""

    def __post_init__(self):
        if self.sector == 0 and self.module is None:
            raise ValueError("sector 0 objects need a Λ-action")
        if self.sector == 1 and self.module is not None:
            raise ValueError("sector 1 objects carry no action")

    @property
    def dim(self) -> int:
        return len(self.parity)

    @property
    def space(self) -> SuperSpace:
        odd = sum(self.parity)
        return SuperSpace(self.dim - odd, odd, FIELD)

    def shift(self) -> SFObject:
        par = tuple(1 - p for p in self.parity)
        mod = self.module.shift() if self.module is not None else None
        return SFObject(self.lam, self.sector, par, mod, f"Pi({self.name})")


def _trivial_module(lam: LambdaAlgebra, parity: int) -> AlgModule:
    a = lam.algebra
    cols = [[{0: 1} if not s else {}] for s in lam.subsets]
    return AlgModule(a, 1, cols, [parity])


def _regular(lam: LambdaAlgebra, shift: int) -> AlgModule:
    a = lam.algebra
    cols = []
    for i in range(a.dim):
        col = []
        for j in range(a.dim):
            t = a.mult.get((i, j))
            col.append({t[0][0]: t[0][1]} if t else {})
        cols.append(col)
    return AlgModule(a, a.dim, cols, [(p + shift) % 2 for p in a.parity])


def sf_object(lam: LambdaAlgebra, name: str) -> SFObject:
    """Named objects: ``1, Pi1, Lambda, PiLambda, T, PiT``."""
    if name == "1":
        return SFObject(lam, 0, (0,), _trivial_module(lam, 0), name)
    if name == "Pi1":
        return SFObject(lam, 0, (1,), _trivial_module(lam, 1), name)
    if name == "Lambda":
        m = _regular(lam, 0)
        return SFObject(lam, 0, m.parity, m, name)
    if name == "PiLambda":
        m = _regular(lam, 1)
        return SFObject(lam, 0, m.parity, m, name)
    if name == "T":
        return SFObject(lam, 1, (0,), None, name)
    if name == "PiT":
        return SFObject(lam, 1, (1,), None, name)
    raise ValueError(f"unknown SF object {name!r}")


def _check_cap(dim: int) -> None:
    cap = max_dense_dim()
    if dim > cap:
        raise ResourceCapError(f"object of dimension {dim} exceeds FFTC_MAX_DIM={cap}")


def sf_tensor(x: SFObject, y: SFObject) -> SFObject:
    """The sector-dependent tensor product ``x * y``."""
    if x.lam is not y.lam:
        if (x.lam.N, x.lam.beta_sq_inv) != (y.lam.N, y.lam.beta_sq_inv):
            raise ValueError("objects belong to different SF categories")
    lam = x.lam
    name = f"{x.name}*{y.name}"
    if x.sector == 0 and y.sector == 0:
        _check_cap(x.dim * y.dim)
        return SFObject(lam, 0, *_diagonal_tensor(lam, x, y), name=name)
    if x.sector + y.sector == 1:
        _check_cap(x.dim * y.dim)
        par = tuple((p + q) % 2 for p in x.parity for q in y.parity)
        return SFObject(lam, 1, par, None, name)
    # both in sector 1: Λ ⊗ X ⊗ Y with Λ acting on the left factor
    _check_cap(lam.dim * x.dim * y.dim)
    a = lam.algebra
    xy = [(p + q) % 2 for p in x.parity for q in y.parity]
    n = len(xy)
    par = tuple((a.parity[s] + r) % 2 for s in range(a.dim) for r in xy)
    cols = []
    for i in range(a.dim):
        col = []
        for s in range(a.dim):
            t = a.mult.get((i, s))
            for r in range(n):
                col.append({t[0][0] * n + r: t[0][1]} if t else {})
        cols.append(col)
    return SFObject(lam, 0, par, AlgModule(a, a.dim * n, cols, par), name)


def _diagonal_tensor(lam: LambdaAlgebra, x: SFObject, y: SFObject):
    """Basis ``(i, j)`` lexicographic; ``e_S`` acts by ``Σ ± e_A v ⊗ e_B w``."""
    a = lam.algebra
    xm, ym = x.module, y.module
    ny = y.dim
    par = tuple((p + q) % 2 for p in x.parity for q in y.parity)
    cols = []
    for k in range(a.dim):
        terms = lam.coproduct(k)
        col = []
        for i in range(x.dim):
            for j in range(ny):
                out: dict = {}
                for ia, ib, s in terms:
                    xi = xm.columns[ia][i]
                    if not xi:
                        continue
                    yj = ym.columns[ib][j]
                    if not yj:
                        continue
                    # Koszul sign: e_B passes v_i
                    sign = -s if (a.parity[ib] and x.parity[i]) else s
                    for r, u in xi.items():
                        for c, w in yj.items():
                            key = r * ny + c
                            val = out.get(key, 0) + sign * u * w
                            if val:
                                out[key] = val
                            else:
                                out.pop(key, None)
                col.append(out)
        cols.append(col)
    return par, AlgModule(a, x.dim * ny, cols, par)


def sf_hom_basis(x: SFObject, y: SFObject) -> list[Matrix]:
    """Basis of the even morphisms ``x -> y``."""
    if x.sector != y.sector:
        return []
    if x.sector == 0:
        return hom_basis(x.module, y.module)
    out = []
    for r in range(y.dim):
        for c in range(x.dim):
            if y.parity[r] == x.parity[c]:
                out.append(Matrix.from_sparse(y.dim, x.dim, [(r, c, 1)], FIELD))
    return out


# --------------------------------------------------------------------------
# modified trace


def _supertrace(m: Matrix, parity: Sequence[int]):
    s = FIELD.zero
    for k, p in enumerate(parity):
        v = m.data[k][k]
        s = s - v if p else s + v
    return s


def _is_even(m: Matrix, src: Sequence[int], tgt: Sequence[int]) -> bool:
    return all(
        not v or src[c] == tgt[r] for r, row in enumerate(m.data) for c, v in enumerate(row)
    )


def sf_modified_trace(p: SFObject, f: Matrix, t0, generators: Sequence[dict] | None = None):
    """Modified trace of an even endomorphism ``f`` of a projective ``p``.

    Sector 1: ``t0·str(f)``. Sector 0: present ``p ≅ Λ ⊗ X`` through
    homogeneous free generators ``g_k`` (``e_S ⊗ x_k ↦ e_S·g_k``) and return
    ``t0·str((λ⊗id) f (η⊗id))``. Generators default to those found by
    :func:`decompose_local_free`.
    """
    t0 = FIELD.convert(parse_scalar(t0, FIELD) if isinstance(t0, str) else t0)
    if not _is_even(f, p.parity, p.parity):
        raise ValueError("modified trace needs an even endomorphism")
    if p.sector == 1:
        return t0 * _supertrace(f, p.parity)
    lam = p.lam
    m = p.module
    if generators is None:
        generators = decompose_local_free(m, _radical_generators(lam)).generators
    gens = [dict(g) for g in generators]
    gpar = []
    for g in gens:
        ps = {m.parity[k] for k in g}
        if len(ps) != 1:
            raise ValueError("presentation generators must be homogeneous")
        gpar.append(ps.pop())
    if len(gens) * lam.dim != m.dim:
        raise ValueError("generator count does not match a free presentation")
    # Φ: column (S, k) is e_S · g_k
    phi_cols = []
    for s in range(lam.dim):
        for g in gens:
            v = [0] * m.dim
            for r, x in m.act_sparse(s, g).items():
                v[r] = x
            phi_cols.append(v)
    phi = Matrix.from_columns(phi_cols, FIELD)
    images = []
    for g in gens:
        v = [0] * m.dim
        for c, x in g.items():
            for r, fx in enumerate(f.column(c)):
                if fx:
                    v[r] = v[r] + fx * x
        images.append(v)
    coords = solve_many(phi, images)
    if coords is None:
        raise ValueError("generators do not present the module freely")
    ng = len(gens)
    top = lam.top
    # (λ⊗id) F (η⊗id): x_k ↦ β^{-2} Σ_l [coefficient of e_top ⊗ x_l] x_l
    reduced = Matrix(
        [[lam.beta_sq_inv * coords[k][top * ng + l] for k in range(ng)] for l in range(ng)],
        FIELD,
    )
    return t0 * _supertrace(reduced, gpar)


def _radical_generators(lam: LambdaAlgebra) -> list[tuple]:
    # Λ is supercommutative, so rad·M = Σ_j a_j·M
    return [lam.algebra.basis_vector(lam.generator(j)) for j in range(1, 2 * lam.N + 1)]


def right_multiplication(p: SFObject, a: Sequence) -> Matrix:
    """``R_a`` on ``Lambda`` or ``PiLambda`` (same matrix; parities differ)."""
    lam = p.lam
    if p.module is None or p.dim != lam.dim:
        raise ValueError("right multiplication is defined on Lambda and PiLambda")
    return lam.algebra.right_matrix(a)


# --------------------------------------------------------------------------
# fusion and Cartan data


def _sector1_dims(x: SFObject) -> tuple[int, int]:
    odd = sum(x.parity)
    return x.dim - odd, odd


def sf_fusion(N: int, beta_sq_inv="symbolic") -> dict:
    """``M[(U, V)] = {W: multiplicity}`` from ``P_U * P_V ≅ ⊕ P_W^M``, computed by
    decomposing each tensor product (zero multiplicities omitted)."""
    lam = lambda_algebra(N, beta_sq_inv)
    if lam.dim ** 2 > max_dense_dim():
        raise ResourceCapError(
            f"fusion at N={N} needs modules of dimension {lam.dim ** 2} > FFTC_MAX_DIM={max_dense_dim()}"
        )
    objs = {u: sf_object(lam, PROJECTIVE_COVER[u]) for u in IRR}
    rad = _radical_generators(lam)
    out = {}
    for u in IRR:
        for v in IRR:
            x = sf_tensor(objs[u], objs[v])
            if x.sector == 0:
                a, b, _ = decompose_local_free(x.module, rad)
                res = {"1": a, "Pi1": b}
            else:
                p, q = _sector1_dims(x)
                res = {"T": p, "PiT": q}
            out[(u, v)] = {w: m for w, m in res.items() if m}
    return out


def sf_fusion_closed_form(N: int) -> dict:
    c = 2 ** (2 * N - 1)
    par = {"1": 0, "Pi1": 1, "T": 0, "PiT": 1}
    sector = {"1": 0, "Pi1": 0, "T": 1, "PiT": 1}
    out = {}
    for u in IRR:
        for v in IRR:
            shift = (par[u] + par[v]) % 2
            s = (sector[u] + sector[v]) % 2
            if sector[u] == 0 and sector[v] == 0:
                res = {"1": c, "Pi1": c}
            elif s == 1:
                res = {"T": c, "PiT": c}
            else:
                res = {("Pi1" if shift else "1"): 1}
            out[(u, v)] = res
    return out


def sf_cartan(N: int) -> Matrix:
    c = 2 ** (2 * N - 1)
    return Matrix([[c, c, 0, 0], [c, c, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], FIELD)


def sf_cartan_from_composition_series(N: int) -> Matrix:
    """Cartan matrix from the radical layers of ``Lambda`` and ``PiLambda``.

    Each layer ``rad^k P / rad^{k+1} P`` is semisimple; its even and odd
    dimensions count the composition factors ``1`` and ``Pi1``. ``T`` and
    ``PiT`` are simple projective.
    """
    lam = lambda_algebra(N)
    gens = [lam.generator(j) for j in range(1, 2 * N + 1)]
    rows = []
    for name in ("Lambda", "PiLambda"):
        m = sf_object(lam, name).module
        counts = [0, 0]
        layer = [{k: 1} for k in range(m.dim)]
        while layer:
            ev, od = SparseEchelon(), SparseEchelon()
            for v in layer:
                for g in gens:
                    w = m.act_sparse(g, v)
                    if w:
                        (od if m.parity[next(iter(w))] else ev).add(w)
            cur = _graded_dims(m, layer)
            counts[0] += cur[0] - len(ev)
            counts[1] += cur[1] - len(od)
            layer = list(ev.rows.values()) + list(od.rows.values())
        rows.append(counts)
    (a, b), (c, d) = rows
    return Matrix([[a, b, 0, 0], [c, d, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], FIELD)


def _graded_dims(m: AlgModule, vectors: Sequence[dict]) -> tuple[int, int]:
    ev, od = SparseEchelon(), SparseEchelon()
    for v in vectors:
        e = {k: x for k, x in v.items() if m.parity[k] == 0}
        o = {k: x for k, x in v.items() if m.parity[k] == 1}
        if e:
            ev.add(e)
        if o:
            od.add(o)
    return len(ev), len(od)


def sf_grothendieck_ring(N: int) -> CommRing:
    """``Gr_Q(SF)`` on the simple classes, with projective classes from the Cartan rows.

    ``[X][Y]`` is the class of ``X * Y``; for ``T * T = Lambda`` this is the
    composition-series class ``c([1] + [Pi1])`` with ``c = 2^{2N-1}``.
    """
    from .exact import QQ

    c = 2 ** (2 * N - 1)
    idx = {u: k for k, u in enumerate(IRR)}
    par = {"1": 0, "Pi1": 1, "T": 0, "PiT": 1}
    sector = {"1": 0, "Pi1": 0, "T": 1, "PiT": 1}

    def product(i, j):
        u, v = IRR[i], IRR[j]
        vec = [0] * 4
        shift = (par[u] + par[v]) % 2
        if sector[u] == 1 and sector[v] == 1:
            vec[idx["1"]] = c
            vec[idx["Pi1"]] = c
        elif sector[u] + sector[v] == 1:
            vec[idx["PiT" if shift else "T"]] = 1
        else:
            vec[idx["Pi1" if shift else "1"]] = 1
        return vec

    from .assoc import algebra_from_products

    alg = algebra_from_products(QQ, IRR, product, (1, 0, 0, 0))
    cart = sf_cartan(N)
    proj = {f"P{u}": tuple(QQ.convert(x) for x in cart.row(idx[u])) for u in IRR}
    return CommRing(alg, proj, {u: u for u in IRR})


# --------------------------------------------------------------------------
# modular data


@dataclass(frozen=True)
class SFModularData:
    N: int
    irr: tuple[str, ...]
    J: tuple[str, ...]
    irrproj: tuple[str, ...]
    Btilde: Matrix
    Stilde: Matrix
    Ctilde: Matrix
    b: dict
    cartan: Matrix
    dual: dict

    def to_dataset_json(self, fusion: dict, t0) -> dict:
        """Serialize in the modular-dataset format consumed by the auditor."""
        t0 = FIELD.convert(parse_scalar(t0, FIELD) if isinstance(t0, str) else t0)
        return {
            "name": f"SF modular data, N={self.N}",
            "irr": list(self.irr),
            "dual": dict(self.dual),
            "cartan": self.cartan.to_strings(),
            "J": list(self.J),
            "irrproj": list(self.irrproj),
            "Btilde": self.Btilde.to_strings(),
            "Stilde": self.Stilde.to_strings(),
            "Ctilde": self.Ctilde.to_strings(),
            "b": {k: render_scalar(v) for k, v in self.b.items()},
            "fusion": {
                f"{u},{v}": {w: m for w, m in sorted(res.items())}
                for (u, v), res in fusion.items()
            },
            "t0": render_scalar(t0),
            "unit": "1",
            "trace_id": {"T": render_scalar(t0), "PiT": render_scalar(-t0)},
            "hopf_link_expected": {"T,1": render_scalar(4 ** (self.N - 1) * t0)},
        }


def sf_modular_data(N: int) -> SFModularData:
    h = 2 ** (N - 1)
    half = Fraction(1, 2)
    S = Matrix([[0, h, -h], [2 ** N, half, half], [-(2 ** N), half, half]], FIELD)
    B = Matrix([[1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], FIELD)
    b = {"T": Fraction(1, 2 ** (N + 1)), "PiT": -Fraction(1, 2 ** (N + 1))}
    return SFModularData(
        N=N,
        irr=IRR,
        J=J_LABELS,
        irrproj=("T", "PiT"),
        Btilde=B,
        Stilde=S,
        Ctilde=Matrix.identity(3, FIELD),
        b=b,
        cartan=sf_cartan(N),
        dual={u: u for u in IRR},
    )


# --------------------------------------------------------------------------
# φ-normalization and the trace comparison


def _projective_covers(lam: LambdaAlgebra) -> dict:
    return {u: sf_object(lam, PROJECTIVE_COVER[u]) for u in IRR}


def _trace_assignment(lam: LambdaAlgebra, t0, covers: dict) -> TraceAssignment:
    return TraceAssignment({u: (lambda f, p=covers[u]: sf_modified_trace(p, f, t0)) for u in IRR})


def _solve_pi1_scalar(lam: LambdaAlgebra, t0, covers: dict, b_T):
    """Scalar ``c'`` with ``(φ_Pi1)_PiLambda = R_{c'·top}``, fixed by the trace
    comparison on the idempotent onto ``PiLambda`` (left side equals 1)."""
    p = covers["Pi1"]
    r_top = right_multiplication(p, lam.algebra.basis_vector(lam.top))
    unit_value = sf_modified_trace(p, r_top, t0) / (b_T * t0)
    return 1 / unit_value


def sf_phi_table(N: int, t0, beta_sq_inv="symbolic") -> dict:
    """``{(U, V): endomorphism matrix of P_V}`` for the normalized ``φ_U``."""
    lam = lambda_algebra(N, beta_sq_inv)
    t0 = FIELD.convert(parse_scalar(t0, FIELD) if isinstance(t0, str) else t0)
    if not t0:
        raise ValueError("t0 must be nonzero")
    data = sf_modular_data(N)
    covers = _projective_covers(lam)
    b_T = data.b["T"]
    c = b_T / lam.beta_sq_inv
    c_pi = _solve_pi1_scalar(lam, t0, covers, b_T)
    top = lam.algebra.basis_vector(lam.top)
    table = {}
    for u in IRR:
        for v in IRR:
            p = covers[v]
            zero = Matrix.zeros(p.dim, p.dim, FIELD)
            if u != v:
                table[(u, v)] = zero
            elif u in ("T", "PiT"):
                table[(u, v)] = Matrix.identity(1, FIELD).scale(data.b[u])
            elif u == "1":
                table[(u, v)] = right_multiplication(p, lam.algebra.scale(c, top))
            else:
                table[(u, v)] = right_multiplication(p, lam.algebra.scale(c_pi, top))
    return {"table": table, "c": c, "c_pi": c_pi, "lam": lam, "b": data.b}


@dataclass(frozen=True)
class _Summand:
    label: str
    obj: SFObject
    offset: int


def _generator_data(lam: LambdaAlgebra):
    """Summands of ``G = Lambda ⊕ PiLambda ⊕ T ⊕ PiT``, a basis of ``End(G)`` as
    block matrices, and the projection/embedding pairs of the summands."""
    covers = _projective_covers(lam)
    summands = []
    off = 0
    for u in IRR:
        summands.append(_Summand(u, covers[u], off))
        off += covers[u].dim
    gdim = off
    # E = End(G): block maps from hom bases between summands
    e_basis: list[Matrix] = []
    for tgt in summands:
        for src in summands:
            for h in sf_hom_basis(src.obj, tgt.obj):
                e_basis.append(_embed_block(h, tgt.offset, src.offset, gdim))
    proj_emb = []
    for s in summands:
        d = s.obj.dim
        proj = Matrix.from_sparse(d, gdim, [(k, s.offset + k, 1) for k in range(d)], FIELD)
        emb = Matrix.from_sparse(gdim, d, [(s.offset + k, k, 1) for k in range(d)], FIELD)
        proj_emb.append((s.label, proj, emb))
    return covers, summands, gdim, e_basis, proj_emb


def sf_end_algebra(N: int, t0, beta_sq_inv="symbolic") -> tuple[Algebra, CentralForm]:
    """``E = End(G)`` by structure constants together with the central form
    ``x ↦ t_G(x)`` from the modified trace."""
    lam = lambda_algebra(N, beta_sq_inv)
    t0 = FIELD.convert(parse_scalar(t0, FIELD) if isinstance(t0, str) else t0)
    covers, _, gdim, e_basis, proj_emb = _generator_data(lam)
    coords = Matrix.from_columns([m.flat() for m in e_basis], FIELD)
    products = {}
    for i, x in enumerate(e_basis):
        for j, y in enumerate(e_basis):
            c = solve_linear(coords, (x @ y).flat())
            if c is None:
                raise ArithmeticError("End(G) basis is not closed under composition")
            products[(i, j)] = c
    unit = solve_linear(coords, Matrix.identity(gdim, FIELD).flat())
    alg = algebra_from_products(FIELD, [f"e{k}" for k in range(len(e_basis))],
                                lambda i, j: products[(i, j)], unit)
    traces = _trace_assignment(lam, t0, covers)
    form = CentralForm(alg, tuple(extend_trace(traces, proj_emb, x) for x in e_basis))
    return alg, form


def sf_check_trace_vs_tg(N: int, t0, beta_sq_inv="symbolic") -> dict:
    """Compare ``tr_{Hom(G, M)}(x)`` with ``t_G((φ_M)_G ∘ x) / (b_T t0)`` for
    ``G = Lambda ⊕ PiLambda ⊕ T ⊕ PiT``, every simple ``M`` and every ``x`` in a
    basis of ``E = End(G)``."""
    phi = sf_phi_table(N, t0, beta_sq_inv)
    lam = phi["lam"]
    t0 = FIELD.convert(parse_scalar(t0, FIELD) if isinstance(t0, str) else t0)
    covers, summands, gdim, e_basis, proj_emb = _generator_data(lam)
    traces = _trace_assignment(lam, t0, covers)
    b_T = phi["b"]["T"]
    simples = {u: sf_object(lam, u) for u in IRR}
    report = {"N": N, "t0": render_scalar(t0), "dim_E": len(e_basis),
              "c": render_scalar(phi["c"]), "c_pi": render_scalar(phi["c_pi"]), "simples": {}}
    for mlabel in IRR:
        mobj = simples[mlabel]
        # Hom(G, M) = ⊕_V Hom(P_V, M), basis as block row maps
        hom_gm = []
        for s in summands:
            for h in sf_hom_basis(s.obj, mobj):
                hom_gm.append(_embed_block(h, 0, s.offset, gdim, rows=mobj.dim))
        phi_g = Matrix.zeros(gdim, gdim, FIELD)
        for s in summands:
            phi_g = phi_g + _embed_block(phi["table"][(mlabel, s.label)], s.offset, s.offset, gdim)
        residuals = []
        for x in e_basis:
            lhs = _trace_on_hom(hom_gm, x)
            rhs = extend_trace(traces, proj_emb, phi_g @ x) / (b_T * t0)
            residuals.append(lhs - rhs)
        nonzero = [r for r in residuals if r]
        worst = max(residuals, key=_norm2) if residuals else 0
        report["simples"][mlabel] = {
            "dim_hom_G_M": len(hom_gm),
            "checked": len(residuals),
            "max_residual": render_scalar(worst),
            "zero_residual": not nonzero,
        }
    return report


def _norm2(x):
    if hasattr(x, "re"):
        return x.re * x.re + x.im * x.im
    return x * x


def _embed_block(h: Matrix, row_off: int, col_off: int, cols: int, rows: int | None = None) -> Matrix:
    rows = cols if rows is None else rows
    entries = [
        (row_off + r, col_off + c, v)
        for r, row in enumerate(h.data)
        for c, v in enumerate(row)
        if v
    ]
    return Matrix.from_sparse(rows, cols, entries, FIELD)


def _trace_on_hom(hom_gm: Sequence[Matrix], x: Matrix):
    """Trace of ``h ↦ h ∘ x`` on the span of ``hom_gm``."""
    if not hom_gm:
        return FIELD.zero
    basis = Matrix.from_columns([h.flat() for h in hom_gm], FIELD)
    images = [(h @ x).flat() for h in hom_gm]
    coords = solve_many(basis, images)
    if coords is None:
        raise ArithmeticError("Hom(G, M) is not closed under precomposition")
    s = FIELD.zero
    for k, c in enumerate(coords):
        s = s + c[k]
    return s
