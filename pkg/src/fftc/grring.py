"""Commutative rings by structure constants: Grothendieck rings and K_0 data.

Nilpotency is decided at the exponent ``dim`` (Cayley-Hamilton), so no
search over exponents is needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .assoc import Algebra, _scalar
from .exact import Matrix, kernel_basis, rank, render_scalar

__all__ = [
    "CommRing",
    "load_ring",
    "ring_power",
    "ring_element_power_nilpotent",
    "condition_p",
    "ring_semisimple",
    "nilpotent_witness",
    "validate_ring",
]


@dataclass(frozen=True, eq=False)
class CommRing:
    algebra: Algebra
    projectives: Mapping[str, tuple]  # label -> class in the ring basis
    dual: Mapping[str, str] | None = None

    @property
    def field(self):
        return self.algebra.field

    @property
    def labels(self) -> tuple[str, ...]:
        return self.algebra.basis

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def element(self, coeffs: Mapping[str, object] | Sequence) -> tuple:
        """Ring element from ``{label: coefficient}`` or a coordinate list."""
        if isinstance(coeffs, Mapping):
            v = [self.field.zero] * self.dim
            for label, c in coeffs.items():
                v[self.labels.index(label)] = self.field.convert(c)
            return tuple(v)
        return self.algebra.vector(coeffs)

    def mul(self, x, y) -> tuple:
        return self.algebra.mul(x, y)

    def render(self, x: Sequence) -> dict:
        return {lab: render_scalar(c) for lab, c in zip(self.labels, x) if c}

    @classmethod
    def from_json(cls, d: dict) -> CommRing:
        a = Algebra.from_json(d)
        projectives: dict = {}
        raw = d.get("projectives", [])
        if isinstance(raw, Mapping):
            for label, vec in raw.items():
                if len(vec) != a.dim:
                    raise ValueError(f"projective class {label} has the wrong length")
                projectives[label] = tuple(_scalar(x, a.field) for x in vec)
        else:
            for label in raw:
                if label not in a.basis:
                    raise ValueError(f"projective label {label!r} is not a basis label")
                projectives[label] = a.basis_vector(a.basis.index(label))
        dual = d.get("dual")
        if dual is not None:
            for k, v in dual.items():
                if k not in a.basis or v not in a.basis or dual.get(v) != k:
                    raise ValueError("dual must be an involution on basis labels")
        return cls(a, projectives, dual)

    def to_json(self) -> dict:
        d = self.algebra.to_json()
        d["projectives"] = {k: [render_scalar(x) for x in v] for k, v in self.projectives.items()}
        if self.dual is not None:
            d["dual"] = dict(self.dual)
        return d


def load_ring(path: str | Path) -> CommRing:
    with open(path) as fh:
        return CommRing.from_json(json.load(fh))


def validate_ring(r: CommRing) -> list[str]:
    from .assoc import validate_algebra

    problems = validate_algebra(r.algebra)
    a = r.algebra
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            if a.mul(a.basis_vector(i), a.basis_vector(j)) != a.mul(a.basis_vector(j), a.basis_vector(i)):
                problems.append(f"not commutative on ({a.basis[i]},{a.basis[j]})")
    return problems


def ring_power(r: CommRing, x: Sequence, n: int) -> tuple:
    result = r.algebra.unit
    base = tuple(x)
    while n:
        if n & 1:
            result = r.mul(result, base)
        base = r.mul(base, base)
        n >>= 1
    return result


def ring_element_power_nilpotent(r: CommRing, x: Sequence) -> bool:
    """``x^dim == 0``; equivalent to nilpotency of the multiplication matrix."""
    return not any(ring_power(r, x, max(r.dim, 1)))


def condition_p(r: CommRing) -> str | None:
    """First projective label (declaration order) whose class is not nilpotent."""
    for label, cls in r.projectives.items():
        if not ring_element_power_nilpotent(r, cls):
            return label
    return None


def _trace_gram(r: CommRing) -> Matrix:
    a = r.algebra
    tr = [m.trace() for m in a.left_basis_matrices]
    rows = []
    for i in range(a.dim):
        row = []
        for j in range(a.dim):
            s = a.field.zero
            for k, c in a.mult.get((i, j), ()):
                s = s + c * tr[k]
            row.append(s)
        rows.append(row)
    return Matrix(rows, a.field, cols=a.dim, convert=False)


def _exact_div(x, y):
    if isinstance(x, int) and isinstance(y, int):
        q = Fraction(x, y)
        return q.numerator if q.denominator == 1 else q
    return x / y


def ring_semisimple(r: CommRing) -> bool:
    """Trace-form criterion ``det(tr(L_{b_i b_j})) != 0`` (characteristic 0 only)."""
    if r.field.characteristic != 0:
        raise ValueError("the trace-form criterion needs characteristic 0")
    return rank(_trace_gram(r)) == r.dim


def nilpotent_witness(r: CommRing) -> tuple | None:
    """A nonzero nilpotent element (first kernel vector of the trace form, scaled to
    leading coefficient 1), or ``None``."""
    if r.field.characteristic != 0:
        raise ValueError("the trace-form radical needs characteristic 0")
    for v in kernel_basis(_trace_gram(r)):
        if ring_element_power_nilpotent(r, v):
            lead = next(x for x in v if x)
            return tuple(_exact_div(x, lead) for x in v)
    return None
