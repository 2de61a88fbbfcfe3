"""Dense exact matrices and the elimination routines everything else rests on.

Matrices are immutable.  Elimination works on sparse row dictionaries:
over the rationals each row is cleared to a primitive integer vector and
rows are combined fraction-free (cross multiplication followed by content
removal), over a prime field rows are kept monic mod ``p``.  Columns are
processed left to right, so the pivot columns of a matrix are always its
leftmost independent columns; among candidate pivot rows the sparsest one
wins, which keeps the block staircase matrices of the Kronecker solver
banded during elimination.
"""

from __future__ import annotations

import heapq
import math
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, SingularMatrixError
from .fields import QQ, Field

_ZERO = Fraction(0)


class Matrix:
    """Immutable ``nrows x ncols`` matrix over an exact field."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_hash")

    def __init__(self, field: Field, rows: Iterable[Sequence], ncols: int | None = None):
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionError("column count must be given for a matrix without rows")
            ncols = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise DimensionError(f"row {i} has length {len(r)}, expected {ncols}")
        self._init(field, rows, len(rows), ncols)

    def _init(self, field, rows, nrows, ncols):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, field, rows, ncols):
        # rows must already be tuples of canonical field elements
        m = cls.__new__(cls)
        m._init(field, rows, len(rows), ncols)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __reduce__(self):
        return (Matrix._raw, (self.field, self.rows, self.ncols))

    # construction ----------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls._raw(field, tuple((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls._raw(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        if not columns:
            return cls.zeros(field, nrows, 0)
        return cls(field, zip(*columns), len(columns)) if nrows else cls.zeros(field, 0, len(columns))

    @classmethod
    def diagonal(cls, field: Field, values: Sequence) -> "Matrix":
        n = len(values)
        z = field.zero
        return cls(field, [[values[i] if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def block(cls, field: Field, grid, row_sizes: Sequence[int], col_sizes: Sequence[int]) -> "Matrix":
        """Assemble from a grid of blocks; ``None`` entries are zero blocks."""
        z = field.zero
        out = []
        for bi, h in enumerate(row_sizes):
            for r in range(h):
                line = []
                for bj, w in enumerate(col_sizes):
                    blk = grid[bi][bj]
                    if blk is None:
                        line.extend((z,) * w)
                    else:
                        if blk.shape != (h, w):
                            raise DimensionError(f"block ({bi},{bj}) has shape {blk.shape}, expected {(h, w)}")
                        line.extend(blk.rows[r])
                out.append(tuple(line))
        return cls._raw(field, tuple(out), sum(col_sizes))

    # basic protocol --------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self.rows == other.rows)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.field, self.nrows, self.ncols, self.rows)))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(self.field.render(x) for x in r) for r in self.rows)
        return f"Matrix<{self.nrows}x{self.ncols} {self.field}>[{body}]"

    def tolist(self):
        return [list(r) for r in self.rows]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for r in self.rows for x in r)

    @property
    def T(self) -> "Matrix":
        if self.nrows == 0:
            return Matrix.zeros(self.field, self.ncols, 0)
        return Matrix._raw(self.field, tuple(zip(*self.rows)), self.nrows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    # arithmetic ------------------------------------------------------

    def _check_same(self, other):
        if self.field != other.field:
            raise DimensionError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        f = self.field
        return Matrix._raw(f, tuple(tuple(f(a + b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix._raw(f, tuple(tuple(f(-a) for a in r) for r in self.rows), self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f(c)
        return Matrix._raw(f, tuple(tuple(f(c * a) for a in r) for r in self.rows), self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        z = f.zero
        cols = other.T.rows if other.nrows else ((),) * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a != z]
            line = []
            for c in cols:
                s = z
                for k, a in nz:
                    b = c[k]
                    if b != z:
                        s = s + a * b
                line.append(f(s) if f is not QQ else s)
            out.append(tuple(line))
        return Matrix._raw(f, tuple(out), other.ncols)

    def __pow__(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise DimensionError("power of a non-square matrix")
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def hstack(self, *others: "Matrix") -> "Matrix":
        return hstack([self, *others], self.nrows)

    def vstack(self, *others: "Matrix") -> "Matrix":
        return vstack([self, *others], self.ncols)

    # linear algebra shortcuts ---------------------------------------

    def rank(self) -> int:
        return rank(self)

    def kernel(self) -> "Matrix":
        return kernel_basis(self)

    def inverse(self) -> "Matrix":
        return invert(self)


def hstack(ms: Sequence[Matrix], nrows: int | None = None, field: Field | None = None) -> Matrix:
    if not ms:
        if nrows is None:
            raise DimensionError("hstack of nothing needs a row count")
        return Matrix.zeros(field or QQ, nrows, 0)
    nrows = ms[0].nrows if nrows is None else nrows
    for m in ms:
        if m.nrows != nrows:
            raise DimensionError(f"hstack: row counts differ ({m.nrows} vs {nrows})")
        ms[0]._check_same(m)
    rows = tuple(tuple(x for m in ms for x in m.rows[i]) for i in range(nrows))
    return Matrix._raw(ms[0].field, rows, sum(m.ncols for m in ms))


def vstack(ms: Sequence[Matrix], ncols: int | None = None, field: Field | None = None) -> Matrix:
    if not ms:
        if ncols is None:
            raise DimensionError("vstack of nothing needs a column count")
        return Matrix.zeros(field or QQ, 0, ncols)
    ncols = ms[0].ncols if ncols is None else ncols
    for m in ms:
        if m.ncols != ncols:
            raise DimensionError(f"vstack: column counts differ ({m.ncols} vs {ncols})")
        ms[0]._check_same(m)
    return Matrix._raw(ms[0].field, tuple(r for m in ms for r in m.rows), ncols)


def block_diag(ms: Sequence[Matrix], field: Field) -> Matrix:
    grid = [[m if i == j else None for j in range(len(ms))] for i, m in enumerate(ms)]
    return Matrix.block(field, grid, [m.nrows for m in ms], [m.ncols for m in ms])


# ---------------------------------------------------------------------------
# sparse elimination core


def sparse_rows(m: Matrix) -> list[dict]:
    """Nonzero entries of each row; over QQ scaled to primitive integer rows."""
    out = []
    if m.field.characteristic == 0:
        for r in m.rows:
            entries = [(j, x) for j, x in enumerate(r) if x]
            if not entries:
                out.append({})
                continue
            den = math.lcm(*(x.denominator for _, x in entries))
            row = {j: x.numerator * (den // x.denominator) for j, x in entries}
            out.append(_primitive(row))
    else:
        for r in m.rows:
            out.append({j: x for j, x in enumerate(r) if x})
    return out


def _primitive(row: dict) -> dict:
    g = math.gcd(*row.values())
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def _combine_int(row, prow, c, a):
    """``a*row - row[c]*prow`` with common factors removed; kills column c."""
    b = row[c]
    g = math.gcd(a, b)
    a1, b1 = a // g, b // g
    if a1 == 1:
        new = dict(row)
    elif a1 == -1:
        new = {j: -v for j, v in row.items()}
    else:
        new = {j: a1 * v for j, v in row.items()}
    get = new.get
    for j, v in prow.items():
        new[j] = get(j, 0) - b1 * v
    new = {j: v for j, v in new.items() if v}
    return _primitive(new) if new else new


def _combine_mod(row, prow, c, p):
    """``row - row[c]*prow`` mod p for a monic pivot row."""
    b = row[c]
    new = dict(row)
    get = new.get
    for j, v in prow.items():
        new[j] = (get(j, 0) - b * v) % p
    return {j: v for j, v in new.items() if v}


def echelon(field: Field, rows: list[dict], ncols: int, pivot_limit: int | None = None,
            reduced: bool = False):
    """Row-reduce sparse rows.

    Returns ``(pivots, leftover)`` where ``pivots`` is a list of
    ``(column, row)`` pairs sorted by column and ``leftover`` holds the
    nonzero rows that have no pivot below ``pivot_limit`` (only possible when
    a limit is given).  With ``reduced=True`` every pivot column is cleared
    from all other pivot rows.
    """
    p = field.characteristic
    limit = ncols if pivot_limit is None else pivot_limit
    active = [r for r in rows if r]
    pivots = []
    for c in range(limit):
        if not active:
            break
        best = -1
        best_len = 0
        for i, r in enumerate(active):
            if c in r and (best < 0 or len(r) < best_len):
                best, best_len = i, len(r)
        if best < 0:
            continue
        prow = active[best]
        if p:
            inv = pow(prow[c], -1, p)
            if inv != 1:
                prow = {j: v * inv % p for j, v in prow.items()}
        a = prow[c]
        nxt = []
        for i, r in enumerate(active):
            if i == best:
                continue
            if c in r:
                r = _combine_mod(r, prow, c, p) if p else _combine_int(r, prow, c, a)
                if not r:
                    continue
            nxt.append(r)
        active = nxt
        pivots.append((c, prow))
    if reduced:
        for k in range(len(pivots) - 1, -1, -1):
            c, prow = pivots[k]
            a = prow[c]
            for t in range(k):
                ct, r = pivots[t]
                if c in r:
                    r = _combine_mod(r, prow, c, p) if p else _combine_int(r, prow, c, a)
                    if not p and r[ct] < 0:
                        r = {j: -v for j, v in r.items()}
                    pivots[t] = (ct, r)
    return pivots, active


def eliminate(field: Field, rows: list[dict], ncols: int):
    """Forward elimination with sparsity-driven pivoting (shortest row, then
    the column of that row occurring in the fewest live rows).

    Returns the pivots ``(column, row)`` in elimination order.  The order is
    deterministic; it only affects which kernel basis is produced, never the
    rank.
    """
    p = field.characteristic
    live = {}
    where = defaultdict(set)
    heap = []
    for i, r in enumerate(rows):
        if r:
            live[i] = r
            for j in r:
                where[j].add(i)
            heap.append((len(r), i))
    heapq.heapify(heap)
    next_id = len(rows)
    pivots = []
    while live:
        while True:
            ln, i = heapq.heappop(heap)
            prow = live.get(i)
            if prow is not None:
                break
        del live[i]
        for j in prow:
            where[j].discard(i)
        c = min(prow, key=lambda j: (len(where[j]), j))
        if p:
            inv = pow(prow[c], -1, p)
            if inv != 1:
                prow = {j: v * inv % p for j, v in prow.items()}
        a = prow[c]
        for k in sorted(where[c]):
            old = live.pop(k)
            for j in old:
                where[j].discard(k)
            new = _combine_mod(old, prow, c, p) if p else _combine_int(old, prow, c, a)
            if new:
                live[next_id] = new
                for j in new:
                    where[j].add(next_id)
                heapq.heappush(heap, (len(new), next_id))
                next_id += 1
        pivots.append((c, prow))
    return pivots


def _back_reduce(field: Field, pivots: list) -> list:
    """Clear every pivot column from the pivot rows eliminated before it."""
    p = field.characteristic
    pivots = list(pivots)
    pos = {c: k for k, (c, _) in enumerate(pivots)}
    holders = defaultdict(list)
    for t, (ct, r) in enumerate(pivots):
        for j in r:
            k = pos.get(j)
            if k is not None and k > t:
                holders[k].append(t)
    for k in range(len(pivots) - 1, -1, -1):
        c, prow = pivots[k]
        a = prow[c]
        for t in holders[k]:
            ct, r = pivots[t]
            pivots[t] = (ct, _combine_mod(r, prow, c, p) if p else _combine_int(r, prow, c, a))
    return pivots


def _rank_rows(field: Field, rows: list[dict], ncols: int) -> int:
    return len(eliminate(field, rows, ncols))


def _kernel_rows(field: Field, rows: list[dict], ncols: int) -> list[list]:
    """Kernel basis vectors (as lists of field elements), one per free column."""
    pivots = _back_reduce(field, eliminate(field, rows, ncols))
    pivot_cols = {c for c, _ in pivots}
    free = [j for j in range(ncols) if j not in pivot_cols]
    holders = defaultdict(list)
    for c, r in pivots:
        for j in r:
            if j != c:
                holders[j].append((c, r))
    p = field.characteristic
    basis = []
    for f in free:
        hits = holders[f]
        if p:
            vec = [0] * ncols
            vec[f] = 1
            for c, r in hits:
                vec[c] = -r[f] % p
        else:
            scale = math.lcm(*(r[c] for c, r in hits)) if hits else 1
            ints = {f: scale}
            for c, r in hits:
                ints[c] = -r[f] * (scale // r[c])
            g = math.gcd(*ints.values())
            vec = [_ZERO] * ncols
            for j, v in ints.items():
                vec[j] = Fraction(v // g)
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# public operations


def rank(m: Matrix) -> int:
    """Exact rank; empty matrices have rank 0."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return _rank_rows(m.field, sparse_rows(m), m.ncols)


def kernel_basis(m: Matrix) -> Matrix:
    """Matrix whose columns are a basis of ``{x : m x = 0}``.

    One column per non-pivot column of ``m``; over QQ the columns are
    primitive integer vectors with a positive entry at their free position.
    """
    if m.nrows == 0:
        return Matrix.identity(m.field, m.ncols)
    vecs = _kernel_rows(m.field, sparse_rows(m), m.ncols)
    return Matrix.from_columns(m.field, vecs, m.ncols)


def column_space_basis(m: Matrix) -> Matrix:
    """The leftmost independent columns of ``m``."""
    if m.ncols == 0 or m.nrows == 0:
        return Matrix.zeros(m.field, m.nrows, 0)
    pivots, _ = echelon(m.field, sparse_rows(m), m.ncols)
    return m.submatrix(range(m.nrows), [c for c, _ in pivots])


def column_space_sum(ms: Sequence[Matrix], dim: int | None = None, field: Field | None = None) -> Matrix:
    """A basis (as columns) of the sum of the column spaces of ``ms``."""
    if not ms:
        if dim is None:
            raise DimensionError("column_space_sum of nothing needs the ambient dimension")
        return Matrix.zeros(field or QQ, dim, 0)
    stacked = hstack(list(ms), dim)
    if stacked.ncols == 0 or stacked.nrows == 0:
        return Matrix.zeros(stacked.field, stacked.nrows, 0)
    return column_space_basis(stacked)


def subspace_intersection(ms: Sequence[Matrix], dim: int | None = None, field: Field | None = None) -> Matrix:
    """A basis of the intersection of the kernels of ``ms`` (maps out of ``k^dim``)."""
    if not ms:
        if dim is None:
            raise DimensionError("subspace_intersection of nothing needs the ambient dimension")
        return Matrix.identity(field or QQ, dim)
    return kernel_basis(vstack(list(ms), dim))


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """One solution ``x`` of ``a x = b`` (free variables set to zero), or None."""
    a._check_same(b)
    if a.nrows != b.nrows:
        raise DimensionError(f"solve: {a.shape} vs right-hand side {b.shape}")
    f = a.field
    n = a.ncols
    if a.nrows == 0:
        return Matrix.zeros(f, n, b.ncols)
    aug = hstack([a, b])
    pivots, leftover = echelon(f, sparse_rows(aug), aug.ncols, pivot_limit=n, reduced=True)
    if leftover:
        return None
    z = f.zero
    x = [[z] * b.ncols for _ in range(n)]
    for c, r in pivots:
        lead = r[c]
        for j, v in r.items():
            if j >= n:
                x[c][j - n] = f(Fraction(v, lead)) if not f.characteristic else f(v * pow(lead, -1, f.characteristic))
    return Matrix(f, x, b.ncols)


def invert(m: Matrix) -> Matrix:
    """Exact inverse; :class:`SingularMatrixError` if ``m`` is singular."""
    if m.nrows != m.ncols:
        raise DimensionError(f"cannot invert a {m.shape} matrix")
    if m.nrows == 0:
        return m
    if rank(m) != m.nrows:
        raise SingularMatrixError("matrix is singular")
    x = solve(m, Matrix.identity(m.field, m.nrows))
    assert x is not None
    return x


def extend_to_basis(s: Matrix) -> Matrix:
    """Standard basis vectors completing the independent columns of ``s``.

    Candidates ``e_1, e_2, ...`` are tried in order, so the completion is the
    leftmost-pivot choice.
    """
    n = s.nrows
    f = s.field
    full = hstack([s, Matrix.identity(f, n)], n)
    pivots, _ = echelon(f, sparse_rows(full), full.ncols)
    chosen = [c - s.ncols for c, _ in pivots if c >= s.ncols]
    if len([c for c, _ in pivots if c < s.ncols]) != s.ncols:
        raise DimensionError("columns to extend are not independent")
    eye = Matrix.identity(f, n)
    return eye.submatrix(range(n), chosen)


def char_poly(m: Matrix):
    """``det(x E - m)`` via reduction to Hessenberg form."""
    from .poly import Polynomial

    if m.nrows != m.ncols:
        raise DimensionError(f"characteristic polynomial of a {m.shape} matrix")
    f = m.field
    n = m.nrows
    h = [list(r) for r in m.rows]
    z = f.zero
    for k in range(1, n - 1):
        piv = next((i for i in range(k, n) if h[i][k - 1] != z), None)
        if piv is None:
            continue
        if piv != k:
            h[piv], h[k] = h[k], h[piv]
            for r in h:
                r[piv], r[k] = r[k], r[piv]
        t = f.inv(h[k][k - 1])
        for i in range(k + 1, n):
            u = f(h[i][k - 1] * t)
            if u == z:
                continue
            hi, hk = h[i], h[k]
            for j in range(n):
                hi[j] = f(hi[j] - u * hk[j])
            for r in h:
                r[k] = f(r[k] + u * r[i])
    x = Polynomial(f, [z, f.one])
    polys = [Polynomial.constant(f, f.one)]
    for k in range(n):
        nxt = (x - Polynomial.constant(f, h[k][k])) * polys[k]
        t = f.one
        for i in range(1, k + 1):
            t = f(t * h[k - i + 1][k - i])
            coeff = f(t * h[k - i][k])
            if coeff != z:
                nxt = nxt - polys[k - i].scale(coeff)
        polys.append(nxt)
    return polys[n]
