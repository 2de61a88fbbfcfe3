"""Quivers, representations and the linear-algebra toolkit on top of them.

Hom spaces are solved as the null space of the coefficient matrix of the
commutativity equations ``M(a) f_i - f_j H(a) = 0``.  Unknowns are ordered
vertex by vertex, each ``f_i`` flattened column-major; equations are ordered
arrow by arrow, each block flattened column-major as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import DimensionError, DomainError, StabilityError
from .fields import QQ, Field
from .linalg import Matrix


@dataclass(frozen=True)
class Arrow:
    id: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    """Vertices are numbered ``1..vertex_count``."""

    vertex_count: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        ids = [a.id for a in arrows]
        if len(set(ids)) != len(ids):
            raise DomainError(f"arrow ids are not unique: {ids}")
        for a in arrows:
            for v in (a.source, a.target):
                if not 1 <= v <= self.vertex_count:
                    raise DomainError(f"arrow {a.id} touches vertex {v}, outside 1..{self.vertex_count}")

    @classmethod
    def kronecker(cls) -> "Quiver":
        return cls(2, (Arrow("alpha", 1, 2), Arrow("beta", 1, 2)))

    @classmethod
    def linear(cls, n: int) -> "Quiver":
        """Equioriented type A: ``1 -> 2 -> ... -> n``."""
        return cls(n, tuple(Arrow(f"a{i}", i, i + 1) for i in range(1, n)))

    @classmethod
    def loop(cls) -> "Quiver":
        """One vertex with one loop; its representations are k[x]-modules."""
        return cls(1, (Arrow("x", 1, 1),))

    def arrow_index(self, arrow_id: str) -> int:
        for k, a in enumerate(self.arrows):
            if a.id == arrow_id:
                return k
        raise KeyError(arrow_id)


@dataclass(frozen=True)
class QuiverRep:
    """A representation: a dimension per vertex and a matrix per arrow.

    ``mats[k]`` belongs to ``quiver.arrows[k]`` and has shape
    ``(dims[target-1], dims[source-1])``.
    """

    quiver: Quiver
    field: Field
    dims: tuple[int, ...]
    mats: tuple[Matrix, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mats", tuple(self.mats))
        if len(dims) != self.quiver.vertex_count:
            raise DimensionError(f"{len(dims)} dimensions for {self.quiver.vertex_count} vertices")
        if any(d < 0 for d in dims):
            raise DimensionError(f"negative dimension in {dims}")
        if len(self.mats) != len(self.quiver.arrows):
            raise DimensionError(f"{len(self.mats)} matrices for {len(self.quiver.arrows)} arrows")
        for a, m in zip(self.quiver.arrows, self.mats):
            want = (dims[a.target - 1], dims[a.source - 1])
            if m.shape != want:
                raise DimensionError(f"arrow {a.id}: matrix shape {m.shape}, expected {want}")
            if m.field != self.field:
                raise DimensionError(f"arrow {a.id}: matrix over {m.field}, representation over {self.field}")

    @classmethod
    def from_dict(cls, quiver: Quiver, field: Field, dims: Sequence[int], mats: dict) -> "QuiverRep":
        """Build from a mapping arrow id -> matrix (or nested lists); missing arrows are zero."""
        out = []
        for a in quiver.arrows:
            shape = (dims[a.target - 1], dims[a.source - 1])
            m = mats.get(a.id)
            if m is None:
                m = Matrix.zeros(field, *shape)
            elif not isinstance(m, Matrix):
                m = Matrix(field, m, shape[1])
            out.append(m)
        return cls(quiver, field, tuple(dims), tuple(out))

    @classmethod
    def zero(cls, quiver: Quiver, field: Field = QQ) -> "QuiverRep":
        return cls.from_dict(quiver, field, (0,) * quiver.vertex_count, {})

    def mat(self, arrow_id: str) -> Matrix:
        return self.mats[self.quiver.arrow_index(arrow_id)]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0


@dataclass(frozen=True)
class HomBasis:
    """A basis of ``Hom(domain, codomain)``; each element is a tuple of per-vertex matrices."""

    domain: QuiverRep
    codomain: QuiverRep
    basis: tuple[tuple[Matrix, ...], ...] = dc_field(default=())

    def __len__(self):
        return len(self.basis)


def _check_compatible(h: QuiverRep, m: QuiverRep):
    if h.quiver != m.quiver:
        raise DomainError("representations live on different quivers")
    if h.field != m.field:
        raise DomainError(f"representations over different fields: {h.field} vs {m.field}")


def _hom_system(h: QuiverRep, m: QuiverRep):
    """Sparse rows of the coefficient matrix and the unknown offsets."""
    offsets = []
    n = 0
    for hi, mi in zip(h.dims, m.dims):
        offsets.append(n)
        n += hi * mi
    rows = []
    zero = h.field.zero
    for a, ha, ma in zip(h.quiver.arrows, h.mats, m.mats):
        i, j = a.source - 1, a.target - 1
        mi, mj, hi, hj = m.dims[i], m.dims[j], h.dims[i], h.dims[j]
        oi, oj = offsets[i], offsets[j]
        mrows, hcols = ma.rows, ha.T.rows if hj else ((),) * hi
        for c in range(hi):
            hcol = hcols[c]
            for r in range(mj):
                eq = {}
                for k, v in enumerate(mrows[r]):
                    if v != zero:
                        eq[oi + c * mi + k] = v
                for k in range(hj):
                    v = hcol[k]
                    if v != zero:
                        idx = oj + k * mj + r
                        eq[idx] = eq.get(idx, zero) - v
                rows.append({k: v for k, v in eq.items() if v != zero})
    return rows, offsets, n


def _normalized(field: Field, rows: list[dict]) -> list[dict]:
    if field.characteristic:
        p = field.characteristic
        return [{k: v % p for k, v in r.items() if v % p} for r in rows]
    out = []
    for r in rows:
        if not r:
            out.append(r)
            continue
        den = 1
        for v in r.values():
            d = Fraction(v).denominator
            if d != 1:
                den = den * d // math.gcd(den, d)
        out.append(linalg._primitive({k: int(Fraction(v) * den) for k, v in r.items()}))
    return out


def coefficient_matrix(h: QuiverRep, m: QuiverRep) -> Matrix:
    """The ``c x N`` matrix whose null space is ``Hom(h, m)``."""
    _check_compatible(h, m)
    rows, _, n = _hom_system(h, m)
    z = h.field.zero
    dense = []
    for r in rows:
        line = [z] * n
        for k, v in r.items():
            line[k] = v
        dense.append(line)
    return Matrix(h.field, dense, n)


def hom_dim(h: QuiverRep, m: QuiverRep) -> int:
    """``dim Hom(h, m) = N - rank B``."""
    _check_compatible(h, m)
    rows, _, n = _hom_system(h, m)
    if n == 0:
        return 0
    return n - linalg._rank_rows(h.field, _normalized(h.field, rows), n)


def hom_basis(h: QuiverRep, m: QuiverRep) -> HomBasis:
    _check_compatible(h, m)
    rows, offsets, n = _hom_system(h, m)
    if n == 0:
        return HomBasis(h, m, ())
    vecs = linalg._kernel_rows(h.field, _normalized(h.field, rows), n)
    basis = []
    for v in vecs:
        parts = []
        for off, hi, mi in zip(offsets, h.dims, m.dims):
            parts.append(Matrix._raw(h.field, tuple(tuple(v[off + c * mi + r] for c in range(hi)) for r in range(mi)), hi))
        basis.append(tuple(parts))
    return HomBasis(h, m, tuple(basis))


def is_morphism(h: QuiverRep, m: QuiverRep, f: Sequence[Matrix]) -> bool:
    """Check every commuting square ``M(a) f_i = f_j H(a)``."""
    for a, ha, ma in zip(h.quiver.arrows, h.mats, m.mats):
        if ma @ f[a.source - 1] != f[a.target - 1] @ ha:
            return False
    return True


def direct_sum(parts: Sequence[tuple[QuiverRep, int]], quiver: Quiver | None = None,
               field: Field | None = None) -> QuiverRep:
    """Block-diagonal sum ``⊕ rep^(mult)``."""
    expanded = [rep for rep, mult in parts for _ in range(mult)]
    if not expanded:
        if quiver is None:
            if not parts:
                raise DomainError("direct sum of nothing needs a quiver")
            quiver, field = parts[0][0].quiver, parts[0][0].field
        return QuiverRep.zero(quiver, field or QQ)
    q, f = expanded[0].quiver, expanded[0].field
    for rep in expanded:
        _check_compatible(expanded[0], rep)
    dims = tuple(sum(r.dims[i] for r in expanded) for i in range(q.vertex_count))
    mats = tuple(linalg.block_diag([r.mats[k] for r in expanded], f) for k in range(len(q.arrows)))
    return QuiverRep(q, f, dims, mats)


def base_change(m: QuiverRep, gs: Sequence[Matrix]) -> QuiverRep:
    """Conjugate: arrow ``i -> j`` becomes ``g_j M(a) g_i^{-1}``."""
    if len(gs) != m.quiver.vertex_count:
        raise DimensionError("one change of basis per vertex is required")
    for i, g in enumerate(gs):
        if g.shape != (m.dims[i], m.dims[i]):
            raise DimensionError(f"vertex {i + 1}: change of basis of shape {g.shape}, dimension {m.dims[i]}")
    invs = [linalg.invert(g) for g in gs]
    mats = tuple(gs[a.target - 1] @ mat @ invs[a.source - 1] for a, mat in zip(m.quiver.arrows, m.mats))
    return QuiverRep(m.quiver, m.field, m.dims, mats)


def sub_quotient(m: QuiverRep, sub_basis: Sequence[Matrix]):
    """Induced representations on an arrow-stable subspace and on the quotient.

    ``sub_basis[i]`` has ``dims[i]`` rows; its columns span the subspace at
    vertex ``i+1`` (dependent columns are discarded).  Quotient coordinates
    come from completing the subspace basis with the leftmost standard basis
    vectors.
    """
    f = m.field
    if len(sub_basis) != m.quiver.vertex_count:
        raise DimensionError("one subspace per vertex is required")
    subs, comps, transforms = [], [], []
    for i, s in enumerate(sub_basis):
        if s.nrows != m.dims[i]:
            raise DimensionError(f"vertex {i + 1}: subspace basis has {s.nrows} rows, dimension is {m.dims[i]}")
        s = linalg.column_space_basis(s) if s.ncols else s
        c = linalg.extend_to_basis(s)
        subs.append(s)
        comps.append(c)
        transforms.append(linalg.hstack([s, c], m.dims[i]))
    inverses = [linalg.invert(t) for t in transforms]
    sub_mats, quo_mats = [], []
    for a, mat in zip(m.quiver.arrows, m.mats):
        i, j = a.source - 1, a.target - 1
        new = inverses[j] @ mat @ transforms[i]
        si, sj = subs[i].ncols, subs[j].ncols
        lower_left = new.submatrix(range(sj, m.dims[j]), range(si))
        if not lower_left.is_zero():
            raise StabilityError(f"subspace is not stable under arrow {a.id}", arrow=a.id)
        sub_mats.append(new.submatrix(range(sj), range(si)))
        quo_mats.append(new.submatrix(range(sj, m.dims[j]), range(si, m.dims[i])))
    sub = QuiverRep(m.quiver, f, tuple(s.ncols for s in subs), tuple(sub_mats))
    quo = QuiverRep(m.quiver, f, tuple(c.ncols for c in comps), tuple(quo_mats))
    return sub, quo


def trace(m: QuiverRep, u: QuiverRep) -> tuple[Matrix, ...]:
    """Per-vertex basis of the sum of images of all maps ``u -> m``."""
    hb = hom_basis(u, m)
    return tuple(linalg.column_space_sum([g[i] for g in hb.basis], m.dims[i], m.field)
                 for i in range(m.quiver.vertex_count))


def reject(m: QuiverRep, u: QuiverRep) -> tuple[Matrix, ...]:
    """Per-vertex basis of the intersection of kernels of all maps ``m -> u``."""
    hb = hom_basis(m, u)
    return tuple(linalg.subspace_intersection([g[i] for g in hb.basis], m.dims[i], m.field)
                 for i in range(m.quiver.vertex_count))


def subspace_dims(basis: Sequence[Matrix]) -> tuple[int, ...]:
    return tuple(b.ncols for b in basis)
