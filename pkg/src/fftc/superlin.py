"""Super vector spaces and homogeneous linear maps.

Basis convention (global): even basis vectors first, then odd ones. The
tensor product ``x ⊗ y`` lists the pairs ``(i, j)`` of factor indices in
lexicographic order inside each parity block, even block first.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import QQ, FieldSpec, Matrix

__all__ = [
    "SuperSpace",
    "SuperMap",
    "ParityError",
    "tensor_space",
    "supertrace",
    "tensor_map",
    "flip",
]


class ParityError(ValueError):
    pass


@dataclass(frozen=True)
class SuperSpace:
    even_dim: int
    odd_dim: int
    field: FieldSpec = QQ

    def __post_init__(self):
        if self.even_dim < 0 or self.odd_dim < 0:
            raise ValueError("dimensions must be nonnegative")

    @property
    def dim(self) -> int:
        return self.even_dim + self.odd_dim

    @property
    def sdim(self) -> int:
        return self.even_dim - self.odd_dim

    def parity(self, k: int) -> int:
        return 0 if k < self.even_dim else 1

    def parities(self) -> list[int]:
        return [0] * self.even_dim + [1] * self.odd_dim

    def shift(self) -> SuperSpace:
        """Parity shift ``Π``."""
        return SuperSpace(self.odd_dim, self.even_dim, self.field)


def tensor_space(x: SuperSpace, y: SuperSpace) -> tuple[SuperSpace, list[tuple[int, int]]]:
    """The tensor space and its ordered basis of factor-index pairs."""
    if x.field != y.field:
        raise ValueError("field mismatch")
    pairs = [(i, j) for i in range(x.dim) for j in range(y.dim)]
    even = [p for p in pairs if (x.parity(p[0]) + y.parity(p[1])) % 2 == 0]
    odd = [p for p in pairs if (x.parity(p[0]) + y.parity(p[1])) % 2 == 1]
    return SuperSpace(len(even), len(odd), x.field), even + odd


@dataclass(frozen=True)
class SuperMap:
    source: SuperSpace
    target: SuperSpace
    matrix: Matrix
    parity: int = 0

    def __post_init__(self):
        m = self.matrix
        if (m.rows, m.cols) != (self.target.dim, self.source.dim):
            raise ValueError(
                f"matrix is {m.rows}x{m.cols}, expected {self.target.dim}x{self.source.dim}"
            )
        if m.field != self.source.field or m.field != self.target.field:
            raise ValueError("field mismatch")
        if self.parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        for r in range(m.rows):
            pr = self.target.parity(r)
            for c, v in enumerate(m.data[r]):
                if v and (pr + self.source.parity(c)) % 2 != self.parity:
                    raise ParityError(f"entry ({r},{c}) breaks parity {self.parity}")

    @classmethod
    def identity(cls, space: SuperSpace) -> SuperMap:
        return cls(space, space, Matrix.identity(space.dim, space.field), 0)

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def __matmul__(self, other: SuperMap) -> SuperMap:
        """Composition ``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return SuperMap(other.source, self.target, self.matrix @ other.matrix,
                        (self.parity + other.parity) % 2)

    def __add__(self, other: SuperMap) -> SuperMap:
        if (self.source, self.target, self.parity) != (other.source, other.target, other.parity):
            raise ValueError("can only add maps with equal source, target and parity")
        return SuperMap(self.source, self.target, self.matrix + other.matrix, self.parity)

    def scale(self, c) -> SuperMap:
        return SuperMap(self.source, self.target, self.matrix.scale(c), self.parity)


def supertrace(f: SuperMap):
    if not f.is_endomorphism:
        raise ValueError("supertrace needs an endomorphism")
    if f.parity != 0:
        raise ParityError("supertrace of an odd map")
    e = f.source.even_dim
    s = f.matrix.field.zero
    for k in range(f.source.dim):
        v = f.matrix.data[k][k]
        s = s + v if k < e else s - v
    return s


def tensor_map(f: SuperMap, g: SuperMap) -> SuperMap:
    """``(f⊗g)(v⊗w) = (-1)^{|g||v|} f(v)⊗g(w)`` on homogeneous ``v``."""
    if f.matrix.field != g.matrix.field:
        raise ValueError("field mismatch")
    src, src_pairs = tensor_space(f.source, g.source)
    tgt, tgt_pairs = tensor_space(f.target, g.target)
    tgt_index = {p: n for n, p in enumerate(tgt_pairs)}
    field = f.matrix.field
    fcols = f.matrix.columns()
    gcols = g.matrix.columns()
    fnz = [[(k, a) for k, a in enumerate(col) if a] for col in fcols]
    gnz = [[(l, b) for l, b in enumerate(col) if b] for col in gcols]
    entries = []
    for col, (i, j) in enumerate(src_pairs):
        sign = -1 if (g.parity and f.source.parity(i)) else 1
        for k, a in fnz[i]:
            for l, b in gnz[j]:
                entries.append((tgt_index[(k, l)], col, sign * a * b))
    m = Matrix.from_sparse(tgt.dim, src.dim, entries, field)
    return SuperMap(src, tgt, m, (f.parity + g.parity) % 2)


def flip(x: SuperSpace, y: SuperSpace) -> SuperMap:
    """Symmetric braiding ``v⊗w ↦ (-1)^{|v||w|} w⊗v`` from ``x⊗y`` to ``y⊗x``."""
    src, src_pairs = tensor_space(x, y)
    tgt, tgt_pairs = tensor_space(y, x)
    tgt_index = {p: n for n, p in enumerate(tgt_pairs)}
    entries = []
    for col, (i, j) in enumerate(src_pairs):
        sign = -1 if (x.parity(i) and y.parity(j)) else 1
        entries.append((tgt_index[(j, i)], col, sign))
    return SuperMap(src, tgt, Matrix.from_sparse(tgt.dim, src.dim, entries, x.field), 0)
