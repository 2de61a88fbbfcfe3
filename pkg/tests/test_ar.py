import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ardecomp import ar, oracles
from ardecomp import kronecker as kr
from ardecomp import quiver as qv
from ardecomp.errors import CoverageError, DomainError, InvalidMeshError
from ardecomp.fields import GF, QQ
from ardecomp.kronecker import INF, IndecLabel
from ardecomp.quiver import Quiver, QuiverRep

KQ = Quiver.kronecker()
SMALL = [IndecLabel.P(n) for n in range(1, 5)] + [IndecLabel.I(n) for n in range(1, 5)] + \
        [IndecLabel.R(n, lam) for n in range(1, 4) for lam in (0, 1, INF)]


def rep(label, field=QQ):
    return kr.indec_rep(label, field).rep()


def example_two():
    return QuiverRep.from_dict(KQ, QQ, (2, 2), {"alpha": [[0, 0], [1, 0]], "beta": [[0, 0], [0, 0]]})


def test_p3_mesh_gives_one():
    assert ar.multiplicity(rep(IndecLabel.P(3)), kr.mesh_for(IndecLabel.P(3))) == 1


def test_mesh_of_self_is_one_and_others_zero():
    for lab in SMALL:
        m = rep(lab)
        for other in SMALL:
            assert ar.multiplicity(m, kr.mesh_for(other)) == (1 if other == lab else 0), (lab, other)


def test_example_two_decomposes():
    labels = [IndecLabel.P(1), IndecLabel.P(2), IndecLabel.I(1), IndecLabel.I(2), IndecLabel.R(1, 0)]
    dec = ar.decompose_with_ar(example_two(), kr.kronecker_meshes(labels))
    assert dec.as_dict() == {"P1": 1, "I1": 1, "R1(0)": 1}
    assert dec.total_dims(2) == (2, 2)


def test_zero_module_decomposes_to_nothing():
    dec = ar.decompose_with_ar(QuiverRep.zero(KQ), kr.kronecker_meshes(SMALL))
    assert len(dec) == 0


def test_missing_candidate_reports_deficit():
    inst = oracles.plant_kronecker([(IndecLabel.P(2), 1), (IndecLabel.R(2, 1), 1)], seed=3)
    meshes = kr.kronecker_meshes([IndecLabel.P(1), IndecLabel.P(2), IndecLabel.R(1, 1)])
    with pytest.raises(CoverageError) as info:
        ar.decompose_with_ar(inst.module.rep(), meshes)
    assert info.value.deficit == (2, 2)


def test_mesh_bookkeeping_is_validated():
    p = [rep(IndecLabel.P(n)) for n in range(1, 6)]
    with pytest.raises(InvalidMeshError):
        ar.ARMesh(p[2], ((p[3], 1),), p[4])
    with pytest.raises(InvalidMeshError):
        ar.ARMesh(p[2], ((p[3], 0),), p[4])
    with pytest.raises(InvalidMeshError):
        ar.ARMesh(p[2], (), None)
    with pytest.raises(DomainError):
        ar.ARMesh(p[0], ((rep(IndecLabel.P(2), GF(5)), 2),), p[2])


def test_wrong_mesh_is_caught():
    # P1 does not map onto I1, so this "mesh" gives -1 on I1
    bad = ar.ARMesh(rep(IndecLabel.P(1)), ((rep(IndecLabel.I(1)), 1),), None, "bad")
    with pytest.raises(InvalidMeshError):
        ar.multiplicity(rep(IndecLabel.I(1)), bad)


def test_mismatched_field_rejected():
    with pytest.raises(DomainError):
        ar.multiplicity(rep(IndecLabel.P(1), GF(5)), kr.mesh_for(IndecLabel.P(1)))


def test_decomposition_rejects_duplicates_and_zero():
    e = ar.DecompEntry("P1", 1, (0, 1))
    with pytest.raises(DomainError):
        ar.Decomposition((e, e))
    with pytest.raises(DomainError):
        ar.DecompEntry("P1", 0, (0, 1))


def test_planted_sums_evaluated_mesh_by_mesh(rng):
    for seed in range(15):
        spec = oracles.random_kronecker_spec(random.Random(seed), max_dims=(7, 7), lambdas=(0, 1, INF))
        spec = [(lab, m) for lab, m in spec if lab in SMALL]
        inst = oracles.plant_kronecker(spec, seed)
        got = {mesh.label: ar.multiplicity(inst.module.rep(), mesh) for mesh in kr.kronecker_meshes(SMALL)}
        want = inst.truth.as_dict()
        assert {k: v for k, v in got.items() if v} == want


def test_parallel_matches_serial():
    inst = oracles.plant_kronecker([(IndecLabel.P(2), 1), (IndecLabel.I(3), 1), (IndecLabel.R(1, 0), 2)], seed=9)
    meshes = kr.kronecker_meshes(SMALL)
    assert ar.decompose_with_ar(inst.module.rep(), meshes, jobs=2) == ar.decompose_with_ar(inst.module.rep(), meshes)


specs = st.lists(st.tuples(st.sampled_from(SMALL[:10]), st.integers(1, 2)), max_size=3)


@given(specs, st.integers(0, 10**6), st.sampled_from(SMALL))
def test_multiplicity_is_base_change_invariant(spec, seed, lab):
    plain = oracles.plant_kronecker(spec, seed, conjugate=False).module.rep()
    moved = oracles.plant_kronecker(spec, seed).module.rep()
    mesh = kr.mesh_for(lab)
    assert ar.multiplicity(plain, mesh) == ar.multiplicity(moved, mesh)


@given(specs, specs, st.sampled_from(SMALL))
def test_multiplicity_is_additive(s1, s2, lab):
    m1 = oracles.plant_kronecker(s1, 1).module.rep()
    m2 = oracles.plant_kronecker(s2, 2).module.rep()
    mesh = kr.mesh_for(lab)
    both = qv.direct_sum([(m1, 1), (m2, 1)])
    assert ar.multiplicity(both, mesh) == ar.multiplicity(m1, mesh) + ar.multiplicity(m2, mesh)


@given(specs, st.integers(0, 10**6))
def test_covering_candidates_conserve_dimension(spec, seed):
    inst = oracles.plant_kronecker(spec, seed)
    dec = ar.decompose_with_ar(inst.module.rep(), kr.kronecker_meshes(SMALL))
    assert dec.total_dims(2) == inst.module.dims
    fast = kr.decompose(inst.module)
    assert sorted((e.label, e.multiplicity, e.dims) for e in dec) == \
        sorted((e.label, e.multiplicity, e.dims) for e in fast)
