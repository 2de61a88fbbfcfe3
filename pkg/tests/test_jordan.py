import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ardecomp import ar, linalg, oracles
from ardecomp import quiver as qv
from ardecomp.errors import DimensionError, DomainError
from ardecomp.fields import GF, QQ
from ardecomp.jordan import (EndoModule, cell_hom_dim, cell_rep, eigenvalues, jordan_cell, jordan_decompose,
                             jordan_hom_dim, jordan_matrix, jordan_meshes, jordan_multiplicity)
from ardecomp.linalg import Matrix
from ardecomp.poly import Polynomial

from conftest import mat


def entries(spec):
    return spec.entries


def test_single_nilpotent_block():
    e = EndoModule(jordan_cell(QQ, 0, 4))
    assert entries(jordan_decompose(e)) == ((0, 4, 1),)


def test_planted_mixed_blocks():
    inst = oracles.plant_jordan([(1, 3, 1), (1, 1, 1), (5, 2, 1)], seed=11)
    assert jordan_decompose(inst.module) == inst.truth
    assert entries(inst.truth) == ((1, 1, 1), (1, 3, 1), (5, 2, 1))


def test_identity_and_zero():
    assert entries(jordan_decompose(EndoModule(Matrix.identity(QQ, 3)))) == ((1, 1, 3),)
    assert entries(jordan_decompose(EndoModule(Matrix.zeros(QQ, 2, 2)))) == ((0, 1, 2),)
    empty = jordan_decompose(EndoModule(Matrix.zeros(QQ, 0, 0)))
    assert empty.entries == () and empty.splits()


def test_non_square_rejected():
    with pytest.raises(DimensionError):
        EndoModule(Matrix.zeros(QQ, 2, 3))


def test_cell_size_must_be_positive():
    with pytest.raises(DomainError):
        jordan_multiplicity(EndoModule(Matrix.identity(QQ, 2)), 1, 0)


def test_nonsplit_factor_reported():
    e = EndoModule.from_rows([[0, 2], [1, 0]])
    spec = jordan_decompose(e)
    assert spec.entries == () and spec.nonsplit == Polynomial(QQ, [-2, 0, 1])
    spec7 = jordan_decompose(EndoModule.from_rows([[0, 2], [1, 0]], GF(7)))
    assert spec7.splits() and entries(spec7) == ((3, 1, 1), (4, 1, 1))


def test_partial_split():
    # x (x^2 + 1): one real eigenvalue, one irreducible quadratic
    m = linalg.block_diag([Matrix.zeros(QQ, 1, 1), mat([[0, -1], [1, 0]])], QQ)
    spec = jordan_decompose(EndoModule(m))
    assert entries(spec) == ((0, 1, 1),) and spec.nonsplit.degree == 2


def test_eigenvalues_sorted():
    e = EndoModule(jordan_matrix(QQ, [(2, 1, 1), (-1, 2, 1), (0, 1, 1)]))
    vals, rest = eigenvalues(e)
    assert vals == [-1, 0, 2] and rest.degree == 0


def test_hom_dims_match_linear_system():
    # dim Hom(J_i(λ), M) against a direct solve of M X = X J_i(λ)
    rng = random.Random(5)
    for _ in range(12):
        cells = [(rng.choice([0, 1]), rng.randint(1, 3), 1) for _ in range(rng.randint(1, 3))]
        inst = oracles.plant_jordan(cells, seed=rng.randint(0, 999))
        m = inst.module
        for lam in (0, 1, 2):
            for i in (1, 2, 3):
                assert jordan_hom_dim(m, lam, i) == qv.hom_dim(cell_rep(QQ, lam, i), m.as_rep())


def test_power_ranks_stabilize():
    inst = oracles.plant_jordan([(0, 3, 1), (0, 1, 2), (2, 2, 1)], seed=1)
    rk = inst.module.power_ranks(0)
    seq = [rk(i) for i in range(0, 8)]
    assert all(a >= b for a, b in zip(seq, seq[1:]))
    assert seq[3:] == [seq[3]] * 5
    assert all(jordan_multiplicity(inst.module, 0, i) == 0 for i in range(4, 8))


def test_ar_meshes_agree_with_formula():
    rng = random.Random(8)
    for _ in range(10):
        cells = [(rng.choice([0, 1, 2]), rng.randint(1, 3), rng.randint(1, 2)) for _ in range(2)]
        inst = oracles.plant_jordan(cells, seed=rng.randint(0, 999))
        rep = inst.module.as_rep()
        for lam in (0, 1, 2):
            for mesh in jordan_meshes(QQ, lam, 4):
                size = mesh.source.dims[0]
                want = jordan_multiplicity(inst.module, lam, size)
                assert ar.multiplicity(rep, mesh, hom=cell_hom_dim) == want
                assert ar.multiplicity(rep, mesh) == want


def test_mesh_labels():
    assert [m.label for m in jordan_meshes(QQ, QQ("1/2"), 2)] == ["J1(1/2)", "J2(1/2)"]


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def cell_multisets(total, lams):
    # distribute sizes among eigenvalues, then choose a partition for each
    for split in itertools.product(range(total + 1), repeat=len(lams)):
        if sum(split) != total:
            continue
        for parts in itertools.product(*(list(partitions(s)) for s in split)):
            yield [(lam, size, 1) for lam, p in zip(lams, parts) for size in p]


def test_round_trip_small_exhaustive():
    count = 0
    for total in range(1, 6):
        for cells in cell_multisets(total, (-2, 0, 2)):
            inst = oracles.plant_jordan(cells, seed=count)
            assert jordan_decompose(inst.module) == inst.truth
            count += 1
    assert count > 100


cells = st.lists(st.tuples(st.integers(-2, 2), st.integers(1, 4), st.integers(1, 2)), min_size=1, max_size=4) \
    .filter(lambda cs: sum(s * m for _, s, m in cs) <= 8)


@given(cells, st.integers(0, 10**6))
def test_conjugation_invariance(cs, seed):
    base = EndoModule(jordan_matrix(QQ, cs))
    moved = oracles.plant_jordan(cs, seed).module
    assert jordan_decompose(base) == jordan_decompose(moved)


@given(cells, st.integers(0, 10**6))
def test_round_trip_matches_oracle(cs, seed):
    inst = oracles.plant_jordan(cs, seed)
    got = jordan_decompose(inst.module)
    assert got == inst.truth == oracles.jordan_form_oracle(inst.module)


@given(st.integers(0, 10**6), st.sampled_from([QQ, GF(5), GF(11)]))
def test_random_matrices_match_oracle(seed, field):
    rng = random.Random(seed)
    d = rng.randint(1, 6)
    m = EndoModule(oracles.random_matrix(field, d, d, rng, 0.5))
    spec = jordan_decompose(m)
    assert spec == oracles.jordan_form_oracle(m)
    assert sum(s * k for _, s, k in spec.entries) + spec.nonsplit.degree == d
