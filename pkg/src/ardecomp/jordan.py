"""Jordan-block multiplicities of a square matrix from ranks of powers.

For ``N = M - λE`` the number of Jordan cells ``J_i(λ)`` is
``rank N^(i+1) + rank N^(i-1) - 2 rank N^i`` with ``N^0 = E``.  This is the
k[x] instance of the AR multiplicity formula, with meshes
``J_i -> J_(i-1) ⊕ J_(i+1) -> J_i`` and ``dim Hom(J_i(λ), M) = d - rank N^i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import linalg
from .ar import ARMesh
from .errors import ConsistencyError, DimensionError, DomainError
from .fields import QQ, Field
from .linalg import Matrix
from .poly import Polynomial, linear_roots
from .quiver import Quiver, QuiverRep


@dataclass(frozen=True)
class EndoModule:
    matrix: Matrix
    _ladders: dict = dc_field(default_factory=dict, init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.matrix.nrows != self.matrix.ncols:
            raise DimensionError(f"endomorphism needs a square matrix, got {self.matrix.shape}")

    @classmethod
    def from_rows(cls, rows, field: Field = QQ) -> "EndoModule":
        rows = [[field(x) for x in r] for r in rows]
        return cls(Matrix(field, rows, len(rows)))

    @property
    def field(self) -> Field:
        return self.matrix.field

    @property
    def d(self) -> int:
        return self.matrix.nrows

    def power_ranks(self, lam) -> "_PowerRanks":
        """Memoized ranks of powers of ``M - λE`` (a cache, not state)."""
        lam = self.field(lam)
        ladder = self._ladders.get(lam)
        if ladder is None:
            ladder = self._ladders[lam] = _PowerRanks(self.matrix, lam)
        return ladder

    def as_rep(self) -> QuiverRep:
        return QuiverRep(Quiver.loop(), self.field, (self.d,), (self.matrix,))


@dataclass(frozen=True)
class JordanSpectrum:
    """Entries ``(λ, size, multiplicity)`` sorted by ``(λ, size)``; ``nonsplit`` is monic."""

    entries: tuple[tuple[object, int, int], ...]
    nonsplit: Polynomial

    def splits(self) -> bool:
        return self.nonsplit.degree == 0


def jordan_cell(field: Field, lam, size: int) -> Matrix:
    lam = field(lam)
    rows = [[lam if i == j else (field.one if j == i + 1 else field.zero) for j in range(size)]
            for i in range(size)]
    return Matrix(field, rows, size)


def jordan_matrix(field: Field, cells) -> Matrix:
    """Block diagonal matrix of cells given as ``(λ, size, multiplicity)``."""
    blocks = [jordan_cell(field, lam, size) for lam, size, mult in cells for _ in range(mult)]
    return linalg.block_diag(blocks, field)


class _PowerRanks:
    """Ranks of ``(M - λE)^i``, computed by extending the last power."""

    def __init__(self, m: Matrix, lam):
        f = m.field
        self.shifted = m - Matrix.identity(f, m.nrows).scale(f(lam))
        self.power = Matrix.identity(f, m.nrows)
        self.ranks = [m.nrows]

    def __call__(self, i: int) -> int:
        while len(self.ranks) <= i:
            self.power = self.power @ self.shifted
            self.ranks.append(linalg.rank(self.power))
        return self.ranks[i]


def eigenvalues(e: EndoModule):
    """``(distinct eigenvalues in field order, nonsplit factor)``."""
    if e.d == 0:
        return [], Polynomial.constant(e.field, e.field.one)
    roots, rest = linear_roots(linalg.char_poly(e.matrix))
    return [r for r, _ in roots], rest


def jordan_multiplicity(e: EndoModule, lam, i: int) -> int:
    if i < 1:
        raise DomainError(f"Jordan cell size must be at least 1, got {i}")
    if e.d == 0:
        return 0
    rk = e.power_ranks(lam)
    return rk(i + 1) + rk(i - 1) - 2 * rk(i)


def jordan_hom_dim(e: EndoModule, lam, i: int) -> int:
    """``dim Hom(J_i(λ), M) = d - rank (M - λE)^i``."""
    if e.d == 0:
        return 0
    return e.d - e.power_ranks(lam)(i)


def jordan_decompose(e: EndoModule) -> JordanSpectrum:
    f = e.field
    roots, rest = (linear_roots(linalg.char_poly(e.matrix)) if e.d
                   else ([], Polynomial.constant(f, f.one)))
    entries = []
    for lam, alg in roots:
        rk = e.power_ranks(lam)
        found = 0
        for i in range(1, e.d + 1):
            mult = rk(i + 1) + rk(i - 1) - 2 * rk(i)
            if mult < 0:
                raise ConsistencyError(f"negative multiplicity for J{i}({f.render(lam)})")
            if mult:
                entries.append((lam, i, mult))
                found += i * mult
            if rk(i) == rk(i + 1):
                break
        if found != alg:
            raise ConsistencyError(
                f"eigenvalue {f.render(lam)}: cells cover {found}, algebraic multiplicity {alg}")
    covered = sum(size * mult for _, size, mult in entries)
    if covered != e.d - rest.degree:
        raise ConsistencyError(f"cells cover {covered} of {e.d - rest.degree} split dimensions")
    entries.sort(key=lambda t: (f.sort_key(t[0]), t[1]))
    return JordanSpectrum(tuple(entries), rest)


def cell_rep(field: Field, lam, size: int) -> QuiverRep:
    return QuiverRep(Quiver.loop(), field, (size,), (jordan_cell(field, lam, size),))


def jordan_meshes(field: Field, lam, max_size: int) -> list[ARMesh]:
    """Meshes of the tube at ``λ`` for cells of size ``1..max_size``."""
    out = []
    for i in range(1, max_size + 1):
        middle = [(cell_rep(field, lam, j), 1) for j in (i - 1, i + 1) if j >= 1]
        out.append(ARMesh(cell_rep(field, lam, i), tuple(middle), cell_rep(field, lam, i),
                          label=f"J{i}({field.render(field(lam))})"))
    return out


def cell_hom_dim(x: QuiverRep, m: QuiverRep) -> int:
    """Hom from a Jordan cell rep into ``m`` via the rank of a power."""
    size = x.dims[0]
    lam = x.mats[0][0, 0]
    return jordan_hom_dim(EndoModule(m.mats[0]), lam, size)
