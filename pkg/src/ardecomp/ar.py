"""Multiplicities of indecomposables from almost split sequence data.

Given the mesh ``0 -> L -> ⊕ X^(a(X)) -> τ⁻¹L -> 0`` of an indecomposable
``L``, the multiplicity of ``L`` in ``M`` is the alternating sum of Hom
dimensions

    dim Hom(L, M) - Σ a(X) dim Hom(X, M) + dim Hom(τ⁻¹L, M).

For injective ``L`` the middle terms describe the sink map
``L -> L / soc L`` and there is no third term.  Meshes are caller data; the
engine only checks their dimension bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

from . import quiver as qv
from ._parallel import parallel_map
from .errors import CoverageError, DomainError, InvalidMeshError
from .quiver import QuiverRep

HomFn = Callable[[QuiverRep, QuiverRep], int]


@dataclass(frozen=True)
class ARMesh:
    source: QuiverRep
    middle: tuple[tuple[QuiverRep, int], ...] = ()
    target: QuiverRep | None = None
    label: str = ""

    def __post_init__(self):
        middle = tuple((rep, int(a)) for rep, a in self.middle)
        object.__setattr__(self, "middle", middle)
        if not self.label:
            object.__setattr__(self, "label", f"L{self.source.dims}")
        for rep, a in middle:
            if a < 1:
                raise InvalidMeshError(f"mesh {self.label}: middle multiplicity {a} < 1")
            if rep.quiver != self.source.quiver or rep.field != self.source.field:
                raise DomainError(f"mesh {self.label}: middle term over a different quiver or field")
        if self.target is not None:
            if self.target.quiver != self.source.quiver or self.target.field != self.source.field:
                raise DomainError(f"mesh {self.label}: target over a different quiver or field")
            n = self.source.quiver.vertex_count
            lhs = tuple(self.source.dims[i] + self.target.dims[i] for i in range(n))
            rhs = tuple(sum(a * rep.dims[i] for rep, a in middle) for i in range(n))
            if lhs != rhs:
                raise InvalidMeshError(
                    f"mesh {self.label}: dims(L) + dims(target) = {lhs} but middle terms sum to {rhs}")
        elif not middle and self.source.total_dim != 1:
            raise InvalidMeshError(f"mesh {self.label}: empty middle without target needs a simple source")

    @property
    def injective(self) -> bool:
        return self.target is None


@dataclass(frozen=True)
class DecompEntry:
    """One isotypic component: ``multiplicity`` copies of the indecomposable ``label``.

    ``info`` carries solver-specific coordinates (``n``, ``lambda``, ``b``,
    ``d``, ``size``) as sorted key/value pairs; ``rep`` is optional and
    ignored by comparisons.
    """

    label: str
    multiplicity: int
    dims: tuple[int, ...]
    info: tuple[tuple[str, object], ...] = ()
    rep: QuiverRep | None = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.multiplicity < 1:
            raise DomainError(f"{self.label}: multiplicity {self.multiplicity} < 1")


@dataclass(frozen=True)
class Decomposition:
    entries: tuple[DecompEntry, ...] = ()
    warnings: tuple[str, ...] = dc_field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        labels = [e.label for e in self.entries]
        if len(set(labels)) != len(labels):
            raise DomainError(f"duplicate labels in decomposition: {labels}")

    def as_dict(self) -> dict[str, int]:
        return {e.label: e.multiplicity for e in self.entries}

    def total_dims(self, vertex_count: int) -> tuple[int, ...]:
        out = [0] * vertex_count
        for e in self.entries:
            for i, d in enumerate(e.dims):
                out[i] += e.multiplicity * d
        return tuple(out)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def alternating_sum(m: QuiverRep, mesh: ARMesh, hom: HomFn = qv.hom_dim) -> int:
    total = hom(mesh.source, m)
    for rep, a in mesh.middle:
        total -= a * hom(rep, m)
    if mesh.target is not None:
        total += hom(mesh.target, m)
    return total


def multiplicity(m: QuiverRep, mesh: ARMesh, hom: HomFn = qv.hom_dim) -> int:
    """Multiplicity of ``mesh.source`` as a direct summand of ``m``."""
    if m.quiver != mesh.source.quiver or m.field != mesh.source.field:
        raise DomainError("module and mesh live over different quivers or fields")
    d = alternating_sum(m, mesh, hom)
    if d < 0:
        raise InvalidMeshError(f"mesh {mesh.label} gives multiplicity {d} < 0; it is not almost split")
    return d


def _mult_job(args):
    m, mesh, hom = args
    return multiplicity(m, mesh, hom)


def decompose_with_ar(m: QuiverRep, meshes: Sequence[ARMesh], hom: HomFn = qv.hom_dim,
                      jobs: int = 1) -> Decomposition:
    """Evaluate every mesh and keep the summands that occur.

    Raises :class:`CoverageError` when the meshes do not account for all of
    ``m``; its ``deficit`` is the dimension vector left unexplained.
    """
    n = m.quiver.vertex_count
    mults = parallel_map(_mult_job, [(m, mesh, hom) for mesh in meshes], jobs)
    entries = [DecompEntry(mesh.label, d, mesh.source.dims, rep=mesh.source)
               for mesh, d in zip(meshes, mults) if d]
    dec = Decomposition(tuple(entries))
    covered = dec.total_dims(n)
    deficit = tuple(a - b for a, b in zip(m.dims, covered))
    if any(x < 0 for x in deficit):
        raise InvalidMeshError(f"summands overshoot the module: covered {covered}, module {m.dims}")
    if any(deficit):
        raise CoverageError(f"candidate meshes miss summands of total dimension {deficit}", deficit)
    return dec
