"""Ground truth for tests: planted instances and independently coded solvers.

Random numbers come from :class:`random.Random` (Mersenne Twister) seeded
with the instance seed; every draw goes through the helpers below so a seed
always produces the same instance.  Changes of basis are products of
elementary transvections ``row_i += c * row_j`` with ``c`` in ``±{1,2,3}``
and row swaps, hence invertible with integer inverses.

The oracles here do not call the rank-formula solvers.  They use their own
incremental Gaussian reduction (:class:`ReducedBasis`) instead of the
sparse elimination in :mod:`ardecomp.linalg`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from . import kronecker as kr
from . import linalg
from .ar import Decomposition
from .fields import QQ, Field
from .jordan import EndoModule, JordanSpectrum, jordan_matrix
from .linalg import Matrix
from .persistence import AnModule, PersistenceDiagram, interval_module
from .poly import Polynomial, linear_roots
from .quiver import base_change, direct_sum

LAMBDAS = (-2, -1, 0, 1, 2, kr.INF)


# ---------------------------------------------------------------------------
# an independent elimination


class ReducedBasis:
    """Span of vectors kept in reduced echelon form, grown one vector at a time."""

    def __init__(self, field: Field, dim: int):
        self.field = field
        self.dim = dim
        self.rows: dict[int, list] = {}  # pivot index -> row with 1 at the pivot

    def reduce(self, vec: Sequence) -> list:
        f = self.field
        v = [f(x) for x in vec]
        for p, row in self.rows.items():
            c = v[p]
            if c != f.zero:
                v = [f(a - c * b) for a, b in zip(v, row)]
        return v

    def add(self, vec: Sequence) -> bool:
        """Insert ``vec``; False if it was already in the span."""
        f = self.field
        v = self.reduce(vec)
        p = next((i for i, x in enumerate(v) if x != f.zero), None)
        if p is None:
            return False
        inv = f.inv(v[p])
        v = [f(x * inv) for x in v]
        for q, row in self.rows.items():
            c = row[p]
            if c != f.zero:
                self.rows[q] = [f(a - c * b) for a, b in zip(row, v)]
        self.rows[p] = v
        return True

    def combination(self, vec: Sequence, basis: Sequence[Sequence]):
        """Coefficients writing ``vec`` in terms of ``basis`` (assumed independent), or None."""
        f = self.field
        n = len(basis)
        # augment every vector with an identity tail to record the combination
        tracker = ReducedBasis(f, self.dim + n)
        for k, b in enumerate(basis):
            tracker.add(list(b) + [f.one if j == k else f.zero for j in range(n)])
        v = tracker.reduce(list(vec) + [f.zero] * n)
        if any(x != f.zero for x in v[: self.dim]):
            return None
        return [f(-x) for x in v[self.dim:]]

    def __len__(self):
        return len(self.rows)


def rank_oracle(m: Matrix) -> int:
    basis = ReducedBasis(m.field, m.ncols)
    for row in m.rows:
        basis.add(row)
    return len(basis)


def _apply(m: Matrix, v: Sequence) -> list:
    f = m.field
    out = []
    for row in m.rows:
        acc = f.zero
        for a, b in zip(row, v):
            acc += a * b
        out.append(f(acc))
    return out


# ---------------------------------------------------------------------------
# seeded random objects


def random_invertible(field: Field, n: int, rng: random.Random, ops: int | None = None) -> Matrix:
    rows = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    if n < 2:
        return Matrix(field, rows, n)
    for _ in range(2 * n if ops is None else ops):
        i, j = rng.sample(range(n), 2)
        if rng.random() < 0.15:
            rows[i], rows[j] = rows[j], rows[i]
            continue
        c = field(rng.choice((-3, -2, -1, 1, 2, 3)))
        rows[i] = [field(a + c * b) for a, b in zip(rows[i], rows[j])]
    return Matrix(field, rows, n)


def random_matrix(field: Field, nrows: int, ncols: int, rng: random.Random, density: float = 1.0) -> Matrix:
    rows = [[field(rng.randint(-3, 3)) if rng.random() < density else field.zero for _ in range(ncols)]
            for _ in range(nrows)]
    return Matrix(field, rows, ncols)


# ---------------------------------------------------------------------------
# planted instances


@dataclass(frozen=True)
class PlantedInstance:
    module: object
    truth: object
    seed: int


def _normalize_lambda(field: Field, lab: kr.IndecLabel) -> kr.IndecLabel:
    if lab.kind == "R" and lab.lam is not kr.INF:
        return kr.IndecLabel.R(lab.n, field(lab.lam))
    return lab


def kronecker_truth(spec: Sequence[tuple[kr.IndecLabel, int]], field: Field = QQ) -> Decomposition:
    counts: dict = {}
    for lab, mult in spec:
        lab = _normalize_lambda(field, lab)
        counts[lab] = counts.get(lab, 0) + mult
    ordered = sorted((lab for lab, c in counts.items() if c), key=lambda lab: lab.sort_key(field))
    return Decomposition(tuple(kr.label_entry(lab, counts[lab], field) for lab in ordered))


def plant_kronecker(spec: Sequence[tuple[kr.IndecLabel, int]], seed: int, field: Field = QQ,
                    conjugate: bool = True) -> PlantedInstance:
    rng = random.Random(seed)
    spec = [(_normalize_lambda(field, lab), mult) for lab, mult in spec]
    from .quiver import Quiver

    parts = [(kr.indec_rep(lab, field).rep(), mult) for lab, mult in spec]
    rep = direct_sum(parts, Quiver.kronecker(), field)
    if conjugate:
        rep = base_change(rep, [random_invertible(field, d, rng) for d in rep.dims])
    return PlantedInstance(kr.KroneckerModule.from_rep(rep), kronecker_truth(spec, field), seed)


def random_kronecker_spec(rng: random.Random, max_dims: tuple[int, int] = (12, 12),
                          lambdas: Sequence = LAMBDAS, max_parts: int = 6):
    """Random label multiset whose direct sum fits inside ``max_dims``."""
    spec = []
    used = [0, 0]
    for _ in range(rng.randint(1, max_parts)):
        kind = rng.choice("PIR")
        n = rng.randint(1, 4)
        lab = kr.IndecLabel.R(n, rng.choice(lambdas)) if kind == "R" else kr.IndecLabel(kind, n)
        mult = rng.choice((1, 1, 1, 2))
        dims = lab.dims
        if used[0] + mult * dims[0] <= max_dims[0] and used[1] + mult * dims[1] <= max_dims[1]:
            spec.append((lab, mult))
            used[0] += mult * dims[0]
            used[1] += mult * dims[1]
    return spec


def plant_jordan(cells: Sequence[tuple[object, int, int]], seed: int, field: Field = QQ) -> PlantedInstance:
    """``cells`` are ``(λ, size, multiplicity)``; the module is ``g J g⁻¹``."""
    rng = random.Random(seed)
    j = jordan_matrix(field, cells)
    g = random_invertible(field, j.nrows, rng)
    m = g @ j @ linalg.invert(g) if j.nrows else j
    counts: dict = {}
    for lam, size, mult in cells:
        key = (field(lam), size)
        counts[key] = counts.get(key, 0) + mult
    entries = tuple(sorted(((lam, size, c) for (lam, size), c in counts.items()),
                           key=lambda t: (field.sort_key(t[0]), t[1])))
    return PlantedInstance(EndoModule(m), JordanSpectrum(entries, Polynomial.constant(field, field.one)), seed)


def plant_an(n: int, intervals: Sequence[tuple[int, int, int]], seed: int, field: Field = QQ) -> PlantedInstance:
    """``intervals`` are ``(b, d, multiplicity)``."""
    rng = random.Random(seed)
    from .quiver import Quiver

    parts = [(interval_module(field, n, b, d).as_rep(), mult) for b, d, mult in intervals]
    rep = direct_sum(parts, Quiver.linear(n), field)
    rep = base_change(rep, [random_invertible(field, a, rng) for a in rep.dims])
    counts: dict = {}
    for b, d, mult in intervals:
        counts[(b, d)] = counts.get((b, d), 0) + mult
    truth = PersistenceDiagram(tuple((b, d, c) for (b, d), c in sorted(counts.items()) if c))
    return PlantedInstance(AnModule.from_rep(rep), truth, seed)


def random_an_module(rng: random.Random, n: int, max_dim: int = 5, field: Field = QQ,
                     low_rank: bool = True) -> AnModule:
    """Random chain; with ``low_rank`` maps are products of two thin factors so bars appear."""
    dims = [rng.randint(0, max_dim) for _ in range(n)]
    maps = []
    for i in range(n - 1):
        rows, cols = dims[i + 1], dims[i]
        if low_rank and rows and cols:
            r = rng.randint(0, min(rows, cols))
            m = random_matrix(field, rows, r, rng) @ random_matrix(field, r, cols, rng)
        else:
            m = random_matrix(field, rows, cols, rng)
        maps.append(m)
    return AnModule(field, tuple(dims), tuple(maps))


# ---------------------------------------------------------------------------
# independent solvers


def persistence_reduction(m: AnModule) -> PersistenceDiagram:
    """Barcode by carrying an adapted basis along the chain.

    At each vertex the live basis vectors are pushed forward oldest first;
    a vector whose image depends on older images is corrected by those older
    vectors so it maps to zero, and its bar ends here.  The surviving images,
    completed by new vectors born at the next vertex, form the next basis.
    """
    f = m.field
    n = m.n
    bars: dict[tuple[int, int], int] = {}
    # live: list of (birth, vector) at the current vertex, oldest first
    live = _complete(f, m.dims[0], [], birth=1)
    for i in range(1, n + 1):
        if i == n:
            for b, _ in live:
                bars[(b, n)] = bars.get((b, n), 0) + 1
            break
        phi = m.maps[i - 1]
        images = ReducedBasis(f, m.dims[i])
        kept = []
        for b, v in live:
            w = _apply(phi, v)
            if images.add(w):
                kept.append((b, w))
            else:
                bars[(b, i)] = bars.get((b, i), 0) + 1
        live = _complete(f, m.dims[i], kept, birth=i + 1)
    points = tuple((b, d, c) for (b, d), c in sorted(bars.items()))
    return PersistenceDiagram(points)


def _complete(f: Field, dim: int, kept, birth: int):
    span = ReducedBasis(f, dim)
    for _, w in kept:
        span.add(w)
    out = list(kept)
    for k in range(dim):
        e = [f.one if j == k else f.zero for j in range(dim)]
        if span.add(e):
            out.append((birth, e))
    return out


def char_poly_oracle(m: Matrix) -> Polynomial:
    """``det(x E - m)`` by Lagrange interpolation of determinants (elimination at sample points)."""
    f = m.field
    n = m.nrows
    xs = [f(k) for k in range(n + 1)]
    if f.characteristic and f.characteristic <= n:
        raise ValueError("interpolation needs more field elements than the matrix size")
    ys = [_det(Matrix.identity(f, n).scale(x) - m) for x in xs]
    result = Polynomial(f, [])
    for i, xi in enumerate(xs):
        basis = Polynomial.constant(f, ys[i])
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * Polynomial(f, [f(-xj), f.one]).scale(f.inv(f(xi - xj)))
        result = result + basis
    return result


def _det(m: Matrix):
    f = m.field
    a = [list(r) for r in m.rows]
    n = len(a)
    det = f.one
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != f.zero), None)
        if p is None:
            return f.zero
        if p != c:
            a[p], a[c] = a[c], a[p]
            det = f(-det)
        det = f(det * a[c][c])
        inv = f.inv(a[c][c])
        for r in range(c + 1, n):
            t = f(a[r][c] * inv)
            if t != f.zero:
                a[r] = [f(x - t * y) for x, y in zip(a[r], a[c])]
    return det


def jordan_form_oracle(e: EndoModule) -> JordanSpectrum:
    """Jordan cells from the ladder ``dim Ker (M - λE)^i``."""
    f = e.field
    d = e.d
    if d == 0:
        return JordanSpectrum((), Polynomial.constant(f, f.one))
    if f.characteristic and f.characteristic <= d:
        cp = linalg.char_poly(e.matrix)
    else:
        cp = char_poly_oracle(e.matrix)
    roots, rest = linear_roots(cp)
    entries = []
    for lam, alg in roots:
        shifted = e.matrix - Matrix.identity(f, d).scale(lam)
        kernels = [0]
        power = Matrix.identity(f, d)
        while kernels[-1] < alg:
            power = _naive_mul(power, shifted)
            kernels.append(d - rank_oracle(power))
        kernels.append(kernels[-1])
        # number of cells of size >= i is kernels[i] - kernels[i-1]
        for i in range(1, len(kernels) - 1):
            at_least = kernels[i] - kernels[i - 1]
            at_least_next = kernels[i + 1] - kernels[i]
            if at_least - at_least_next:
                entries.append((lam, i, at_least - at_least_next))
    entries.sort(key=lambda t: (f.sort_key(t[0]), t[1]))
    return JordanSpectrum(tuple(entries), rest)


def _naive_mul(a: Matrix, b: Matrix) -> Matrix:
    f = a.field
    cols = b.columns()
    return Matrix(f, [[f(sum((x * y for x, y in zip(row, col)), f.zero)) for col in cols] for row in a.rows],
                  b.ncols)
