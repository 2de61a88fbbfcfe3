import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ardecomp import ar, oracles
from ardecomp import quiver as qv
from ardecomp.errors import DimensionError, DomainError
from ardecomp.fields import GF, QQ
from ardecomp.linalg import Matrix
from ardecomp.persistence import (AnModule, an_diagram, an_meshes, an_multiplicity, interval_hom_dim,
                                  interval_module, interval_rep)

from conftest import mat


def test_planted_intervals():
    inst = oracles.plant_an(4, [(1, 3, 1), (2, 2, 1)], seed=2)
    assert an_diagram(inst.module).points == ((1, 3, 1), (2, 2, 1))


def test_zero_module():
    m = AnModule(QQ, (0, 0, 0), (Matrix.zeros(QQ, 0, 0),) * 2)
    assert an_diagram(m).points == ()


def test_single_vertex():
    m = AnModule(QQ, (3,), ())
    assert an_diagram(m).points == ((1, 1, 3),)


def test_zero_maps_give_simples():
    m = AnModule(QQ, (2, 1, 3), (Matrix.zeros(QQ, 1, 2), Matrix.zeros(QQ, 3, 1)))
    assert an_diagram(m).points == ((1, 1, 2), (2, 2, 1), (3, 3, 3))


def test_isomorphisms_give_one_long_bar():
    m = AnModule.from_maps(QQ, [Matrix.identity(QQ, 2)] * 3)
    assert an_diagram(m).points == ((1, 4, 2),)


def test_from_maps_infers_dims_and_validates():
    m = AnModule.from_maps(QQ, [mat([[1, 0]]), mat([[1], [2], [0]])])
    assert m.dims == (2, 1, 3)
    with pytest.raises(DimensionError):
        AnModule(QQ, (2, 2), (Matrix.zeros(QQ, 1, 2),))
    with pytest.raises(DimensionError):
        AnModule.from_maps(QQ, [])


def test_interval_bounds_checked():
    m = interval_module(QQ, 3, 1, 3)
    with pytest.raises(DomainError):
        an_multiplicity(m, 2, 1)
    with pytest.raises(DomainError):
        interval_hom_dim(m, 1, 4)


def test_interval_hom_matches_linear_system():
    rng = random.Random(4)
    for _ in range(10):
        m = oracles.random_an_module(rng, 4, 3)
        for b in range(1, 5):
            for d in range(b, 5):
                assert interval_hom_dim(m, b, d) == qv.hom_dim(interval_rep(QQ, 4, b, d), m.as_rep())


def test_composites_match_fresh_products():
    rng = random.Random(9)
    m = oracles.random_an_module(rng, 6, 4)
    for b in range(1, 6):
        for d in range(b, 6):
            prod = m.maps[b - 1]
            for k in range(b, d):
                prod = m.maps[k] @ prod
            assert m.composite(b, d) == prod
            assert m.chain_rank(b, d) == oracles.rank_oracle(prod)


def test_ar_meshes_agree():
    rng = random.Random(12)
    for _ in range(15):
        n = rng.randint(1, 5)
        m = oracles.random_an_module(rng, n, 3)
        dec = ar.decompose_with_ar(m.as_rep(), an_meshes(QQ, n))
        want = {f"I({b},{d})": k for b, d, k in an_diagram(m).points}
        assert dec.as_dict() == want


def test_over_prime_field():
    f = GF(3)
    m = AnModule.from_maps(f, [mat([[1, 1], [1, 1]], f)])
    assert an_diagram(m).points == ((1, 1, 1), (1, 2, 1), (2, 2, 1))


@given(st.integers(0, 10**6), st.integers(1, 8))
def test_conservation_and_oracle(seed, n):
    m = oracles.random_an_module(random.Random(seed), n)
    diagram = an_diagram(m)
    assert diagram.dims(n) == m.dims
    assert diagram == oracles.persistence_reduction(m)


@given(st.integers(0, 10**6), st.integers(1, 6))
def test_base_change_invariance(seed, n):
    rng = random.Random(seed)
    m = oracles.random_an_module(rng, n, 4)
    rep = qv.base_change(m.as_rep(), [oracles.random_invertible(QQ, a, rng) for a in m.dims])
    assert an_diagram(AnModule.from_rep(rep)) == an_diagram(m)
