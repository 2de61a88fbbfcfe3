"""Acceptance criteria, each run at its stated size, tolerance and time budget.

Every criterion prints one ``PASS``/``FAIL`` line (also collected into the
pytest terminal summary).  Run alone with ``pytest tests/test_acceptance.py -s``
or as a script.
"""

import itertools
import random
import time

import pytest

from ardecomp import ar, oracles
from ardecomp import kronecker as kr
from ardecomp import quiver as qv
from ardecomp.errors import CoverageError
from ardecomp.fields import GF, QQ
from ardecomp.jordan import EndoModule, jordan_decompose
from ardecomp.kronecker import INF, IndecLabel, KroneckerModule
from ardecomp.linalg import Matrix
from ardecomp.persistence import AnModule, an_diagram
from ardecomp.poly import Polynomial
from ardecomp.quiver import Quiver, QuiverRep

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance


def report(number, title, fn):
    t0 = time.perf_counter()
    try:
        detail = fn()
    except AssertionError as exc:
        elapsed = time.perf_counter() - t0
        line = f"FAIL criterion {number}: {title} ({elapsed:.2f} s) {exc}"
        print(line)
        ACCEPTANCE_LINES[number] = line
        raise
    elapsed = time.perf_counter() - t0
    line = f"PASS criterion {number}: {title} ({elapsed:.2f} s){' ' + detail if detail else ''}"
    print(line)
    ACCEPTANCE_LINES[number] = line
    return elapsed


def timed(budget):
    def check(elapsed):
        assert elapsed < budget, f"took {elapsed:.2f} s, budget {budget} s"
    return check


# ---------------------------------------------------------------------------


def check_p3_table():
    t0 = time.perf_counter()
    m = kr.indec_rep(IndecLabel.P(3))
    table = {n: kr.block_rank_p(m, n) for n in range(1, 13)}
    want = {1: 0, 2: 3, **{n: 2 * n for n in range(3, 13)}}
    assert table == want, f"p table {table}"
    mults = {n: kr.kronecker_multiplicity(m, IndecLabel.P(n)) for n in range(1, 13)}
    assert mults == {n: int(n == 3) for n in range(1, 13)}, f"multiplicities {mults}"
    timed(1.0)(time.perf_counter() - t0)
    return "p = " + ",".join(str(table[n]) for n in range(1, 13))


def check_example_two():
    t0 = time.perf_counter()
    m = KroneckerModule.from_rows([[0, 0], [1, 0]], [[0, 0], [0, 0]])
    rep = m.rep()
    rej = qv.reject(rep, kr.indec_rep(IndecLabel.P(2)).rep())
    assert qv.subspace_dims(rej) == (2, 1), f"Rej(P2) dims {qv.subspace_dims(rej)}"
    rej_sub, _ = qv.sub_quotient(rep, rej)
    tr = qv.trace(rej_sub, kr.indec_rep(IndecLabel.I(2)).rep())
    assert qv.subspace_dims(tr) == (1, 0), f"Tr(I2) dims {qv.subspace_dims(tr)}"
    _, quotient = qv.sub_quotient(rej_sub, tr)
    params, rest = kr.regular_params(KroneckerModule.from_rep(quotient))
    assert quotient.dims == (1, 1) and params == [0] and rest.degree == 0, (quotient.dims, params)
    assert kr.split_parts(m).regular_size == 1
    sup = kr.support_set(m)
    assert sup.names == ["P1", "P2", "I1", "I2", "R1(0)"], sup.names
    for mode in ("split", "direct"):
        got = kr.decompose(m, mode=mode).as_dict()
        assert got == {"P1": 1, "R1(0)": 1, "I1": 1}, (mode, got)
    timed(1.0)(time.perf_counter() - t0)
    return ""


def check_planted_kronecker():
    t0 = time.perf_counter()
    largest = (0, 0)
    for seed in range(200):
        rng = random.Random(seed)
        spec = oracles.random_kronecker_spec(rng, (12, 12), oracles.LAMBDAS)
        inst = oracles.plant_kronecker(spec, seed)
        largest = max(largest, inst.module.dims, key=sum)
        for mode in ("direct", "split"):
            got = kr.decompose(inst.module, mode=mode)
            assert got == inst.truth, f"seed {seed} {mode}: {got.as_dict()} != {inst.truth.as_dict()}"
    timed(60.0)(time.perf_counter() - t0)
    return f"largest dims {largest}"


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def jordan_multisets(max_total, lams):
    for sizes in itertools.product(range(max_total + 1), repeat=len(lams)):
        if sum(sizes) > max_total:
            continue
        for parts in itertools.product(*(list(_partitions(s)) for s in sizes)):
            yield [(lam, size, 1) for lam, p in zip(lams, parts) for size in p]


def check_jordan_round_trip():
    t0 = time.perf_counter()
    count = 0
    for k, cells in enumerate(jordan_multisets(6, (0, 1, 2))):
        for j in range(3):
            inst = oracles.plant_jordan(cells, seed=1000 * k + j)
            got = jordan_decompose(inst.module)
            assert got == inst.truth, f"cells {cells} seed {inst.seed}: {got.entries}"
            assert oracles.jordan_form_oracle(inst.module) == got, f"oracle disagrees on {cells}"
            count += 1
    timed(60.0)(time.perf_counter() - t0)
    return f"{count // 3} multisets x 3 conjugations"


def check_an_oracle():
    t0 = time.perf_counter()
    for seed in range(300):
        rng = random.Random(seed)
        m = oracles.random_an_module(rng, rng.randint(1, 8), 5)
        diagram = an_diagram(m)
        assert diagram.dims(m.n) == m.dims, f"seed {seed}: conservation"
        assert diagram == oracles.persistence_reduction(m), f"seed {seed}: {diagram.points}"
    timed(120.0)(time.perf_counter() - t0)
    return ""


CROSS_LABELS = [IndecLabel.P(n) for n in range(1, 5)] + [IndecLabel.I(n) for n in range(1, 5)] + \
               [IndecLabel.R(n, lam) for lam in (0, 1, INF) for n in range(1, 5)]


def random_kronecker(rng):
    d1, d2 = rng.randint(0, 6), rng.randint(0, 6)
    density = rng.choice((0.2, 0.5, 1.0))
    return KroneckerModule(QQ, oracles.random_matrix(QQ, d2, d1, rng, density),
                           oracles.random_matrix(QQ, d2, d1, rng, density))


def check_cross_validation():
    t0 = time.perf_counter()
    nonsplit = 0
    for seed in range(50):
        rng = random.Random(10_000 + seed)
        m = random_kronecker(rng)
        rep = m.rep()
        for lab in CROSS_LABELS:
            fast = kr.hom_dim_fast(m, lab)
            slow = qv.hom_dim(kr.indec_rep(lab).rep(), rep)
            assert fast == slow, f"seed {seed} {lab.name}: fast {fast} generic {slow}"
        want = kr.decompose(m)
        sup = kr.support_set(m)
        meshes = kr.kronecker_meshes(sup.labels)
        unresolved = sup.nonsplit.degree
        if unresolved:
            nonsplit += 1
            # the unresolved regular part is exactly what the meshes cannot account for
            try:
                ar.decompose_with_ar(rep, meshes)
            except CoverageError as exc:
                assert exc.deficit == (unresolved, unresolved), f"seed {seed}: deficit {exc.deficit}"
            else:
                raise AssertionError(f"seed {seed}: expected a coverage deficit of degree {unresolved}")
            got = [(mesh.label, d) for mesh in meshes if (d := ar.multiplicity(rep, mesh))]
        else:
            got = [(e.label, e.multiplicity) for e in ar.decompose_with_ar(rep, meshes)]
        assert sorted(got) == sorted((e.label, e.multiplicity) for e in want), f"seed {seed}: {got}"
    # planted modules exercise every family with full coverage
    for seed in range(50):
        rng = random.Random(20_000 + seed)
        spec = oracles.random_kronecker_spec(rng, (6, 6), (0, 1, INF))
        inst = oracles.plant_kronecker(spec, seed)
        labels = kr.support_set(inst.module).labels
        dec = ar.decompose_with_ar(inst.module.rep(), kr.kronecker_meshes(labels))
        assert sorted(dec.as_dict().items()) == sorted(kr.decompose(inst.module).as_dict().items()), seed
    timed(60.0)(time.perf_counter() - t0)
    return f"{nonsplit} of 50 random modules had a non-split regular part"


def check_degenerate():
    zero = KroneckerModule.zero()
    for mode in ("split", "direct"):
        assert len(kr.decompose(zero, mode=mode)) == 0
        assert kr.decompose(KroneckerModule.zero(QQ, 0, 3), mode=mode).as_dict() == {"P1": 3}
        assert kr.decompose(KroneckerModule.zero(QQ, 2, 0), mode=mode).as_dict() == {"I1": 2}
        assert kr.decompose(kr.indec_rep(IndecLabel.P(1)), mode=mode).as_dict() == {"P1": 1}
        assert kr.decompose(KroneckerModule.zero(QQ, 2, 3), mode=mode).as_dict() == {"P1": 3, "I1": 2}
    assert kr.support_set(zero).labels == ()
    p1 = kr.indec_rep(IndecLabel.P(1))
    assert p1.alpha.shape == (1, 0) and kr.p_block_matrix(p1, 1).shape == (0, 0)
    assert kr.hom_dim_fast(p1, IndecLabel.P(1)) == 1 and kr.kronecker_multiplicity(p1, IndecLabel.I(1)) == 0
    assert jordan_decompose(EndoModule(Matrix.zeros(QQ, 0, 0))).entries == ()
    assert jordan_decompose(EndoModule(Matrix.zeros(QQ, 3, 3))).entries == ((0, 1, 3),)
    assert an_diagram(AnModule(QQ, (0, 0, 0), (Matrix.zeros(QQ, 0, 0),) * 2)).points == ()
    zero_maps = AnModule(QQ, (2, 0, 1), (Matrix.zeros(QQ, 0, 2), Matrix.zeros(QQ, 1, 0)))
    assert an_diagram(zero_maps).points == ((1, 1, 2), (3, 3, 1))
    assert oracles.persistence_reduction(zero_maps) == an_diagram(zero_maps)
    meshes = kr.kronecker_meshes([IndecLabel.P(1), IndecLabel.I(1)])
    assert len(ar.decompose_with_ar(QuiverRep.zero(Quiver.kronecker()), meshes)) == 0
    return ""


def check_nonsplit():
    rows = ([[1, 0], [0, 1]], [[0, 2], [1, 0]])
    m = KroneckerModule.from_rows(*rows)
    sup = kr.support_set(m)
    assert sup.nonsplit == Polynomial(QQ, [-2, 0, 1]), sup.nonsplit
    assert sup.params == () and len(sup.warnings) == 1 and "NonSplitRegularPart" in sup.warnings[0]
    assert len(kr.decompose(m)) == 0
    f7 = GF(7)
    m7 = KroneckerModule.from_rows(*rows, field=f7)
    sup7 = kr.support_set(m7)
    assert sup7.warnings == () and sup7.params == (3, 4), sup7.params
    for mode in ("split", "direct"):
        assert kr.decompose(m7, mode=mode).as_dict() == {"R1(3)": 1, "R1(4)": 1}
    return ""


CRITERIA = [
    (1, "P3 rank table and multiplicities", check_p3_table),
    (2, "worked example: reject, trace, parameters, decomposition, support", check_example_two),
    (3, "200 planted Kronecker modules, both modes", check_planted_kronecker),
    (4, "exhaustive Jordan round trip with oracle", check_jordan_round_trip),
    (5, "300 random A_n modules against the reduction oracle", check_an_oracle),
    (6, "fast Hom formula and AR engine cross-validation", check_cross_validation),
    (7, "degenerate inputs", check_degenerate),
    (8, "non-split detection over QQ and GF(7)", check_nonsplit),
]


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn):
    report(number, title, fn)


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        try:
            report(number, title, fn)
        except AssertionError:
            failed += 1
    raise SystemExit(1 if failed else 0)
