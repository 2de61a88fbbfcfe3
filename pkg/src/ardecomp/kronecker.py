"""Complete decomposition of Kronecker modules (pairs of d2 x d1 matrices).

The indecomposables are the preprojectives ``P_n`` (dims ``(n-1, n)``), the
preinjectives ``I_n`` (dims ``(n, n-1)``) and the regular modules
``R_n(λ)`` (dims ``(n, n)``) for ``λ`` in the field or ``∞``.  Their
multiplicities in ``M`` are second differences of ranks of staircase block
matrices built from ``M(α)`` and ``M(β)``.

To bound the candidate list, ``M`` is cut into its preprojective, regular
and preinjective parts with rejects and traces, and the regular parameters
are read off the characteristic polynomial of ``X⁻¹Y`` on the part of the
regular summand away from ``∞``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from . import linalg
from . import quiver as qv
from ._parallel import parallel_map
from .ar import ARMesh, DecompEntry, Decomposition
from .errors import (ConsistencyError, DimensionError, DomainError,
                     InvalidRegularPartError, SingularMatrixError)
from .fields import QQ, Field
from .linalg import Matrix
from .poly import Polynomial, linear_roots
from .quiver import Quiver, QuiverRep


class _Infinity:
    """The point at infinity of the projective line; a singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

_KIND_ORDER = {"P": 0, "I": 1, "R": 2}


def param_text(x) -> str:
    if x is INF:
        return "inf"
    if isinstance(x, Fraction):
        return QQ.render(x)
    return str(x)


@dataclass(frozen=True)
class IndecLabel:
    kind: str
    n: int
    lam: object = None

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise DomainError(f"unknown indecomposable kind {self.kind!r}")
        if self.n < 1:
            raise DomainError(f"{self.kind}{self.n}: index must be at least 1")
        if (self.kind == "R") != (self.lam is not None):
            raise DomainError("a parameter is required exactly for regular labels")

    @classmethod
    def P(cls, n: int) -> "IndecLabel":
        return cls("P", n)

    @classmethod
    def I(cls, n: int) -> "IndecLabel":
        return cls("I", n)

    @classmethod
    def R(cls, n: int, lam) -> "IndecLabel":
        return cls("R", n, lam)

    @property
    def dims(self) -> tuple[int, int]:
        if self.kind == "P":
            return (self.n - 1, self.n)
        if self.kind == "I":
            return (self.n, self.n - 1)
        return (self.n, self.n)

    @property
    def name(self) -> str:
        if self.kind == "R":
            return f"R{self.n}({param_text(self.lam)})"
        return f"{self.kind}{self.n}"

    def sort_key(self, field: Field):
        if self.kind == "R":
            lam_key = (1, 0) if self.lam is INF else (0, field.sort_key(self.lam))
            return (_KIND_ORDER["R"], lam_key, self.n)
        return (_KIND_ORDER[self.kind], (0, 0), self.n)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class KroneckerModule:
    """``alpha`` and ``beta`` are the two ``d2 x d1`` arrow matrices."""

    field: Field
    alpha: Matrix
    beta: Matrix
    _cache: dict = dc_field(default_factory=dict, init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.alpha.shape != self.beta.shape:
            raise DimensionError(f"alpha {self.alpha.shape} and beta {self.beta.shape} differ in shape")
        if self.alpha.field != self.field or self.beta.field != self.field:
            raise DimensionError("matrices are over a different field than the module")

    @classmethod
    def from_rows(cls, alpha, beta, field: Field = QQ, dims: tuple[int, int] | None = None) -> "KroneckerModule":
        def build(rows):
            rows = [[field(x) for x in r] for r in rows]
            ncols = dims[0] if dims is not None else (len(rows[0]) if rows else 0)
            return Matrix(field, rows, ncols)

        return cls(field, build(alpha), build(beta))

    @classmethod
    def zero(cls, field: Field = QQ, d1: int = 0, d2: int = 0) -> "KroneckerModule":
        z = Matrix.zeros(field, d2, d1)
        return cls(field, z, z)

    @classmethod
    def from_rep(cls, rep: QuiverRep) -> "KroneckerModule":
        if rep.quiver != Quiver.kronecker():
            raise DomainError("representation is not over the Kronecker quiver")
        return cls(rep.field, rep.mat("alpha"), rep.mat("beta"))

    @property
    def d1(self) -> int:
        return self.alpha.ncols

    @property
    def d2(self) -> int:
        return self.alpha.nrows

    @property
    def dims(self) -> tuple[int, int]:
        return (self.d1, self.d2)

    def rep(self) -> QuiverRep:
        return QuiverRep(Quiver.kronecker(), self.field, self.dims, (self.alpha, self.beta))

    def memo(self, key, compute):
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = compute()
        return hit


def indec_rep(label: IndecLabel, field: Field = QQ) -> KroneckerModule:
    n = label.n
    f = field
    if label.kind == "P":
        # P_n = ([E; 0], [0; E]) with E of size n-1
        alpha = Matrix(f, [[f.one if i == j else f.zero for j in range(n - 1)] for i in range(n)], n - 1)
        beta = Matrix(f, [[f.one if i == j + 1 else f.zero for j in range(n - 1)] for i in range(n)], n - 1)
    elif label.kind == "I":
        alpha = Matrix(f, [[f.one if i == j else f.zero for j in range(n)] for i in range(n - 1)], n)
        beta = Matrix(f, [[f.one if j == i + 1 else f.zero for j in range(n)] for i in range(n - 1)], n)
    elif label.lam is INF:
        alpha = _jordan(f, f.zero, n)
        beta = Matrix.identity(f, n)
    else:
        alpha = Matrix.identity(f, n)
        beta = _jordan(f, f(label.lam), n)
    return KroneckerModule(f, alpha, beta)


def _jordan(f: Field, lam, n: int) -> Matrix:
    return Matrix(f, [[lam if i == j else (f.one if j == i + 1 else f.zero) for j in range(n)]
                      for i in range(n)], n)


# ---------------------------------------------------------------------------
# staircase block matrices and their ranks

def p_block_matrix(m: KroneckerModule, n: int) -> Matrix:
    """``n-1`` block rows, ``n`` block columns: beta on the diagonal, alpha right of it."""
    grid = [[m.beta if c == r else (m.alpha if c == r + 1 else None) for c in range(n)] for r in range(n - 1)]
    return Matrix.block(m.field, grid, [m.d2] * (n - 1), [m.d1] * n)


def i_block_matrix(m: KroneckerModule, n: int) -> Matrix:
    """``n+1`` block rows, ``n`` block columns: beta on the diagonal, alpha below it."""
    grid = [[m.beta if r == c else (m.alpha if r == c + 1 else None) for c in range(n)] for r in range(n + 1)]
    return Matrix.block(m.field, grid, [m.d2] * (n + 1), [m.d1] * n)


def r_block_matrix(m: KroneckerModule, lam, n: int) -> Matrix:
    f = m.field
    if lam is INF:
        diag, sub = m.alpha, -m.beta
    else:
        diag, sub = m.alpha.scale(f(lam)) - m.beta, m.alpha
    grid = [[diag if r == c else (sub if r == c + 1 else None) for c in range(n)] for r in range(n)]
    return Matrix.block(f, grid, [m.d2] * n, [m.d1] * n)


def block_rank_p(m: KroneckerModule, n: int) -> int:
    if n < 1:
        raise DomainError(f"p_n needs n >= 1, got {n}")
    if n == 1 or m.d1 + m.d2 == 0:
        return 0
    return m.memo(("p", n), lambda: linalg.rank(p_block_matrix(m, n)))


def block_rank_i(m: KroneckerModule, n: int) -> int:
    if n < 0:
        raise DomainError(f"i_n needs n >= 0, got {n}")
    if n == 0 or m.d1 + m.d2 == 0:
        return 0
    return m.memo(("i", n), lambda: linalg.rank(i_block_matrix(m, n)))


def block_rank_r(m: KroneckerModule, lam, n: int) -> int:
    if n < 0:
        raise DomainError(f"r_n needs n >= 0, got {n}")
    if n == 0 or m.d1 + m.d2 == 0:
        return 0
    lam = lam if lam is INF else m.field(lam)
    return m.memo(("r", lam, n), lambda: linalg.rank(r_block_matrix(m, lam, n)))


def hom_dim_fast(m: KroneckerModule, label: IndecLabel) -> int:
    """``dim Hom(label, M)`` from one block rank."""
    n = label.n
    if label.kind == "P":
        return m.d2 if n == 1 else (n - 1) * m.d1 - block_rank_p(m, n - 1)
    if label.kind == "I":
        return n * m.d1 - block_rank_i(m, n)
    return n * m.d1 - block_rank_r(m, label.lam, n)


def kronecker_multiplicity(m: KroneckerModule, label: IndecLabel) -> int:
    n = label.n
    if label.kind == "P":
        if n == 1:
            d = m.d2 - block_rank_p(m, 2)
        else:
            d = 2 * block_rank_p(m, n) - block_rank_p(m, n - 1) - block_rank_p(m, n + 1)
    elif label.kind == "I":
        if n == 1:
            d = m.d1 - block_rank_i(m, 1)
        else:
            d = 2 * block_rank_i(m, n - 1) - block_rank_i(m, n) - block_rank_i(m, n - 2)
    else:
        lam = label.lam
        d = block_rank_r(m, lam, n - 1) + block_rank_r(m, lam, n + 1) - 2 * block_rank_r(m, lam, n)
    if d < 0:
        raise ConsistencyError(f"negative multiplicity {d} for {label.name}")
    return d


# ---------------------------------------------------------------------------
# splitting off the three families

@dataclass(frozen=True)
class KroneckerSplit:
    p_part: KroneckerModule
    r_prime_part: KroneckerModule
    r_inf_part: KroneckerModule
    i_part: KroneckerModule
    witnesses: dict = dc_field(default_factory=dict, compare=False, repr=False)

    @property
    def regular_size(self) -> int:
        return self.r_prime_part.d1 + self.r_inf_part.d1


def _reject_step(m: QuiverRep, u: QuiverRep):
    basis = qv.reject(m, u)
    sub, quo = qv.sub_quotient(m, basis)
    return basis, sub, quo


def _trace_step(m: QuiverRep, u: QuiverRep):
    basis = qv.trace(m, u)
    sub, quo = qv.sub_quotient(m, basis)
    return basis, sub, quo


def split_parts(m: KroneckerModule) -> KroneckerSplit:
    """``M = P ⊕ R' ⊕ R(∞) ⊕ I`` up to isomorphism, via four trace/reject stages."""
    return m.memo(("split",), lambda: _split(m))


def _split(m: KroneckerModule) -> KroneckerSplit:
    f = m.field
    rep = m.rep()
    witnesses = {}
    # (1) the reject of P_{d2} is R ⊕ I; the quotient is the preprojective part
    if m.d2 == 0:
        ri, p_part = rep, QuiverRep.zero(rep.quiver, f)
    else:
        basis, ri, p_part = _reject_step(rep, indec_rep(IndecLabel.P(m.d2), f).rep())
        witnesses["reject_P"] = basis
    # (2) inside R ⊕ I, the trace of I_n (n = its first dimension) is I
    if ri.dims[0] == 0:
        i_part, r_all = QuiverRep.zero(rep.quiver, f), ri
    else:
        basis, i_part, r_all = _trace_step(ri, indec_rep(IndecLabel.I(ri.dims[0]), f).rep())
        witnesses["trace_I"] = basis
    d = r_all.dims[0]
    if r_all.dims[1] != d:
        raise ConsistencyError(f"regular part has dims {r_all.dims}, expected a square pencil")
    # (3)-(4) inside R, the trace of R_d(∞) is R(∞); its reject is R'
    if d == 0:
        r_inf, r_prime = r_all, r_all
    else:
        r_d_inf = indec_rep(IndecLabel.R(d, INF), f).rep()
        basis, r_inf, _ = _trace_step(r_all, r_d_inf)
        witnesses["trace_R_inf"] = basis
        basis, r_prime, _ = _reject_step(r_all, r_d_inf)
        witnesses["reject_R_inf"] = basis
        if r_inf.dims[0] + r_prime.dims[0] != d:
            raise ConsistencyError(
                f"regular part of size {d} splits as {r_inf.dims} + {r_prime.dims}")
    parts = [KroneckerModule.from_rep(x) for x in (p_part, r_prime, r_inf, i_part)]
    total = tuple(sum(p.dims[k] for p in parts) for k in range(2))
    if total != m.dims:
        raise ConsistencyError(f"parts add up to {total}, module has {m.dims}")
    return KroneckerSplit(*parts, witnesses=witnesses)


def regular_params(r_prime: KroneckerModule):
    """``(roots of det(x - X⁻¹Y) in the field, the root-free cofactor)``."""
    f = r_prime.field
    if r_prime.d1 != r_prime.d2:
        raise InvalidRegularPartError(f"regular part must be square, got {r_prime.dims}")
    if r_prime.d1 == 0:
        return [], Polynomial.constant(f, f.one)
    try:
        x_inv = linalg.invert(r_prime.alpha)
    except SingularMatrixError as exc:
        raise InvalidRegularPartError("alpha map of the regular part is singular") from exc
    roots, rest = linear_roots(linalg.char_poly(x_inv @ r_prime.beta))
    return [r for r, _ in roots], rest


@dataclass(frozen=True)
class SupportSet:
    labels: tuple[IndecLabel, ...]
    params: tuple = ()
    nonsplit: Polynomial | None = None
    warnings: tuple[str, ...] = ()

    @property
    def names(self) -> list[str]:
        return [lab.name for lab in self.labels]


def nonsplit_warning(field: Field, factor: Polynomial) -> str:
    return (f"NonSplitRegularPart: characteristic polynomial factor {factor.render()} "
            f"has no roots over {field.name}; regular summands with these parameters are not resolved")


def support_set(m: KroneckerModule) -> SupportSet:
    return m.memo(("support",), lambda: _support(m))


def _support(m: KroneckerModule) -> SupportSet:
    f = m.field
    if m.d1 + m.d2 == 0:
        return SupportSet((), (), Polynomial.constant(f, f.one))
    split = split_parts(m)
    params, rest = regular_params(split.r_prime_part)
    params = list(params)
    if split.r_inf_part.d1:
        params.append(INF)
    d = split.regular_size
    labels = [IndecLabel.P(i) for i in range(1, m.d2 + 1)]
    labels += [IndecLabel.I(j) for j in range(1, m.d1 + 1)]
    labels += [IndecLabel.R(k, lam) for lam in params for k in range(1, d + 1)]
    labels.sort(key=lambda lab: lab.sort_key(f))
    warnings = (nonsplit_warning(f, rest),) if rest.degree > 0 else ()
    return SupportSet(tuple(labels), tuple(params), rest, warnings)


# ---------------------------------------------------------------------------
# decomposition

def label_entry(label: IndecLabel, mult: int, field: Field) -> DecompEntry:
    info = [("n", label.n)]
    if label.kind == "R":
        info.append(("lambda", param_text(label.lam)))
    return DecompEntry(label.name, mult, label.dims, tuple(info))


def _scan(part: KroneckerModule, labels: Sequence[IndecLabel], budget: tuple[int, int] | None = None):
    """Multiplicities of ``labels`` (in order) on ``part``; stops once ``budget`` is used up."""
    budget = part.dims if budget is None else budget
    found = []
    used = [0, 0]
    for lab in labels:
        if tuple(used) == tuple(budget):
            break
        mult = kronecker_multiplicity(part, lab)
        if mult:
            found.append((lab, mult))
            used[0] += mult * lab.dims[0]
            used[1] += mult * lab.dims[1]
    return found


def _mult_job(args):
    m, lab = args
    return kronecker_multiplicity(m, lab)


def decompose(m: KroneckerModule, mode: str = "split", jobs: int = 1, require_split: bool = False) -> Decomposition:
    """Multiplicity of every indecomposable summand of ``m``.

    ``mode="split"`` evaluates each family on its own part; ``mode="direct"``
    evaluates the whole support set on ``m``.  When the regular parameters
    do not split over the field the unresolved part is reported as a
    warning and excluded from the conservation check.
    """
    from .errors import NonSplitError

    f = m.field
    sup = support_set(m)
    if require_split and sup.warnings:
        raise NonSplitError(sup.warnings[0], sup.nonsplit)
    if mode == "split":
        found = _split_mode(m, sup)
    elif mode == "direct":
        mults = parallel_map(_mult_job, [(m, lab) for lab in sup.labels], jobs)
        found = [(lab, d) for lab, d in zip(sup.labels, mults) if d]
    else:
        raise DomainError(f"unknown mode {mode!r}; expected 'split' or 'direct'")
    found.sort(key=lambda t: t[0].sort_key(f))
    dec = Decomposition(tuple(label_entry(lab, d, f) for lab, d in found), sup.warnings)
    unresolved = sup.nonsplit.degree if sup.nonsplit is not None else 0
    expected = (m.d1 - unresolved, m.d2 - unresolved)
    if dec.total_dims(2) != expected:
        raise ConsistencyError(f"summands cover {dec.total_dims(2)}, expected {expected}")
    return dec


def _split_mode(m: KroneckerModule, sup: SupportSet):
    if m.d1 + m.d2 == 0:
        return []
    split = split_parts(m)
    by_kind = {"P": [], "I": [], "R": []}
    for lab in sup.labels:
        by_kind[lab.kind].append(lab)
    found = _scan(split.p_part, by_kind["P"])
    found += _scan(split.i_part, by_kind["I"])
    unresolved = sup.nonsplit.degree
    finite = [lab for lab in by_kind["R"] if lab.lam is not INF]
    r_prime = split.r_prime_part
    found += _scan(r_prime, finite, (r_prime.d1 - unresolved, r_prime.d2 - unresolved))
    found += _scan(split.r_inf_part, [lab for lab in by_kind["R"] if lab.lam is INF])
    return found


# ---------------------------------------------------------------------------
# AR meshes of the Kronecker algebra

def mesh_for(label: IndecLabel, field: Field = QQ) -> ARMesh:
    n = label.n

    def rep(lab):
        return indec_rep(lab, field).rep()

    if label.kind == "P":
        return ARMesh(rep(label), ((rep(IndecLabel.P(n + 1)), 2),), rep(IndecLabel.P(n + 2)), label.name)
    if label.kind == "I":
        if n == 1:
            return ARMesh(rep(label), (), None, label.name)
        if n == 2:
            return ARMesh(rep(label), ((rep(IndecLabel.I(1)), 2),), None, label.name)
        return ARMesh(rep(label), ((rep(IndecLabel.I(n - 1)), 2),), rep(IndecLabel.I(n - 2)), label.name)
    middle = [(rep(IndecLabel.R(k, label.lam)), 1) for k in (n - 1, n + 1) if k >= 1]
    return ARMesh(rep(label), tuple(middle), rep(label), label.name)


def kronecker_meshes(labels: Sequence[IndecLabel], field: Field = QQ) -> list[ARMesh]:
    return [mesh_for(lab, field) for lab in labels]
