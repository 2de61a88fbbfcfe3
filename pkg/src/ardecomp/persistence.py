"""Persistence diagrams of equioriented type-A representations.

A module ``k^a1 -> k^a2 -> ... -> k^an`` decomposes into interval modules
``I(b, d)``.  Multiplicities come from ranks of composites of consecutive
maps, with the conventions ``M_0 = 0`` and ``M_n = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from . import linalg
from .ar import ARMesh
from .errors import ConsistencyError, DimensionError, DomainError
from .fields import Field
from .linalg import Matrix
from .quiver import Quiver, QuiverRep


@dataclass(frozen=True)
class AnModule:
    """``maps[i]`` (0-based) is the map from vertex ``i+1`` to ``i+2``."""

    field: Field
    dims: tuple[int, ...]
    maps: tuple[Matrix, ...]
    _table: dict = dc_field(default_factory=dict, init=False, compare=False, repr=False)

    def __post_init__(self):
        dims = tuple(int(a) for a in self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "maps", tuple(self.maps))
        if not dims:
            raise DimensionError("an A_n module needs at least one vertex")
        if any(a < 0 for a in dims):
            raise DimensionError(f"negative dimension in {dims}")
        if len(self.maps) != len(dims) - 1:
            raise DimensionError(f"{len(self.maps)} maps for {len(dims)} vertices")
        for i, m in enumerate(self.maps):
            if m.shape != (dims[i + 1], dims[i]):
                raise DimensionError(f"map {i + 1}: shape {m.shape}, expected {(dims[i + 1], dims[i])}")

    @property
    def n(self) -> int:
        return len(self.dims)

    @classmethod
    def from_maps(cls, field: Field, maps: Sequence[Matrix], dims: Sequence[int] | None = None) -> "AnModule":
        maps = tuple(maps)
        if dims is None:
            if not maps:
                raise DimensionError("dims are needed for a single-vertex module")
            dims = [maps[0].ncols] + [m.nrows for m in maps]
        return cls(field, tuple(dims), maps)

    @classmethod
    def from_rep(cls, rep: QuiverRep) -> "AnModule":
        if rep.quiver != Quiver.linear(rep.quiver.vertex_count):
            raise DomainError("representation is not over the equioriented A_n quiver")
        return cls(rep.field, rep.dims, rep.mats)

    def as_rep(self) -> QuiverRep:
        return QuiverRep(Quiver.linear(self.n), self.field, self.dims, self.maps)

    def composite(self, b: int, d: int) -> Matrix:
        """``M_d ... M_b`` for ``1 <= b <= d <= n-1``, built from the next shorter product."""
        key = (b, d)
        hit = self._table.get(key)
        if hit is None:
            step = self.maps[d - 1]
            hit = step if d == b else step @ self.composite(b, d - 1)
            self._table[key] = hit
        return hit

    def chain_rank(self, b: int, d: int) -> int:
        """``rank(M_d ... M_b)`` with ``M_0 = M_n = 0`` and the empty product ``E_{a_b}``."""
        if d == b - 1:
            return self.dims[b - 1] if b >= 1 else 0
        if b == 0 or d == self.n:
            return 0
        key = ("rank", b, d)
        hit = self._table.get(key)
        if hit is None:
            hit = self._table[key] = linalg.rank(self.composite(b, d))
        return hit


@dataclass(frozen=True)
class PersistenceDiagram:
    points: tuple[tuple[int, int, int], ...]

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(b, d): m for b, d, m in self.points}

    def dims(self, n: int) -> tuple[int, ...]:
        out = [0] * n
        for b, d, mult in self.points:
            for i in range(b - 1, d):
                out[i] += mult
        return tuple(out)


def _check_interval(m: AnModule, b: int, d: int):
    if not 1 <= b <= d <= m.n:
        raise DomainError(f"interval ({b}, {d}) outside 1 <= b <= d <= {m.n}")


def interval_hom_dim(m: AnModule, b: int, d: int) -> int:
    """``dim Hom(I(b, d), M) = a_b - rank(M_d ... M_b)``."""
    _check_interval(m, b, d)
    return m.dims[b - 1] - m.chain_rank(b, d)


def _jump(m: AnModule, b: int, d: int) -> int:
    return m.chain_rank(b, d) - m.chain_rank(b, d - 1)


def an_multiplicity(m: AnModule, b: int, d: int) -> int:
    _check_interval(m, b, d)
    return _jump(m, b - 1, d) - _jump(m, b, d)


def an_diagram(m: AnModule) -> PersistenceDiagram:
    points = []
    for b in range(1, m.n + 1):
        for d in range(b, m.n + 1):
            mult = an_multiplicity(m, b, d)
            if mult < 0:
                raise ConsistencyError(f"negative multiplicity {mult} at ({b}, {d})")
            if mult:
                points.append((b, d, mult))
    diagram = PersistenceDiagram(tuple(points))
    if diagram.dims(m.n) != m.dims:
        raise ConsistencyError(f"intervals cover {diagram.dims(m.n)}, module has {m.dims}")
    return diagram


def interval_module(field: Field, n: int, b: int, d: int) -> AnModule:
    dims = tuple(1 if b <= i <= d else 0 for i in range(1, n + 1))
    maps = tuple(Matrix.identity(field, 1) if b <= i < d else Matrix.zeros(field, dims[i], dims[i - 1])
                 for i in range(1, n))
    return AnModule(field, dims, maps)


def interval_rep(field: Field, n: int, b: int, d: int) -> QuiverRep:
    return interval_module(field, n, b, d).as_rep()


def an_meshes(field: Field, n: int) -> list[ARMesh]:
    """The AR meshes of all intervals, in ``(b, d)`` order.

    ``I(1, d)`` is injective with sink map onto ``I(1, d-1)``; for ``b >= 2``
    the mesh is ``I(b, d) -> I(b-1, d) ⊕ I(b, d-1) -> I(b-1, d-1)``.
    """
    out = []
    for b in range(1, n + 1):
        for d in range(b, n + 1):
            src = interval_rep(field, n, b, d)
            label = f"I({b},{d})"
            if b == 1:
                middle = ((interval_rep(field, n, 1, d - 1), 1),) if d > 1 else ()
                out.append(ARMesh(src, middle, None, label))
                continue
            middle = [(interval_rep(field, n, b - 1, d), 1)]
            if d > b:
                middle.append((interval_rep(field, n, b, d - 1), 1))
            out.append(ARMesh(src, tuple(middle), interval_rep(field, n, b - 1, d - 1), label))
    return out
