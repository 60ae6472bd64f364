import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amgeo.algebra import EntireModel, FunctionModel, MatrixModel, Poly
from amgeo.functor import (
    AlgebraMorphism,
    ConvexStructure,
    NotAMorphismError,
    coarse_map_from_morphism,
    coordinate_morphism,
    gelfand_certificate,
    gelfand_functor,
    gelfand_member,
    gelfand_Mp,
    identity_morphism,
    pullback,
    pure_state_functor,
    pure_state_member,
    seminorm_from_marked_set,
    separates_points,
    substitution_morphism,
    verify_convex_structure,
    verify_salg_condition,
    verify_spectral_axioms,
)
from amgeo.seminorms import ScaledOperatorNorm, SubsetMax, WeightedL1, join, scale_chart, subset_chart, weight_chart
from amgeo.states import dual_norm, evaluation_functional, point_mass, vector_state


def test_gelfand_membership_examples():
    p = WeightedL1((1.0,))
    assert gelfand_member(p, (0.5,))
    # oracle: |chi(a)| <= p(a) means sup_k |w|^k / r^k stays bounded
    f = evaluation_functional(EntireModel(1), [0.5], 40)
    assert dual_norm(f, p) <= 1
    assert not gelfand_member(p, (2.0,))
    cert = gelfand_certificate(p, (2.0,))
    assert not cert.member and cert.witness is not None
    assert cert.growth[:4] == (2.0, 4.0, 8.0, 16.0)
    m = gelfand_Mp(SubsetMax(3, {1}))
    assert m.members == frozenset({1}) and 1 in m and 0 not in m


def test_certificate_for_member_gives_dominating_weights():
    cert = gelfand_certificate(WeightedL1((1.0, 3.0)), (0.5, -2j))
    assert cert.member
    assert cert.dominating_weights == pytest.approx((0.5, 2.0))


def test_pure_state_membership():
    p = WeightedL1((1.0,))
    model = EntireModel(1)
    assert pure_state_member(p, evaluation_functional(model, [0.5], 16))
    assert not pure_state_member(p, evaluation_functional(model, [2.0], 16))
    f = FunctionModel(4)
    q = SubsetMax(4, {0, 3})
    for i in range(4):
        assert pure_state_member(q, point_mass(f, i)) == (i in q.subset)


def test_join_membership_tracks_monomials():
    j = join(WeightedL1((1.0, 2.0)), WeightedL1((2.0, 1.0)))
    assert gelfand_member(j, (1.0, 2.0)) and gelfand_member(j, (2.0, 1.0))
    assert gelfand_member(j, (math.sqrt(2), math.sqrt(2)))
    assert not gelfand_member(j, (1.6, 1.6))


def test_convex_structure_of_all_subsets():
    for k in range(1, 7):
        rep = verify_convex_structure(ConvexStructure.from_instance(gelfand_functor(subset_chart(k))))
        assert rep.passed and rep.exact


def test_two_disjoint_sets_are_not_directed():
    cs = ConvexStructure(frozenset({0, 1, 2}), (frozenset({0}), frozenset({1, 2})))
    rep = verify_convex_structure(cs)
    assert not rep.directed and "directed" in rep.witnesses


def test_convex_structure_of_discs_sampled():
    rep = verify_convex_structure(ConvexStructure.from_instance(gelfand_functor(weight_chart(1))), budget=200)
    assert rep.passed and not rep.exact


def test_spectral_axioms_exhaustive_k5():
    chart = subset_chart(5)
    inst = gelfand_functor(chart)
    pairs = list(itertools.product(chart.members, repeat=2))
    rep = verify_spectral_axioms(inst, pairs)
    assert rep.pairs == 1024 and rep.exact and rep.passed
    # independent oracle: containment of the marked sets is subset inclusion
    for p, q in pairs[::37]:
        marked_p = {i for i in range(5) if gelfand_member(p, i)}
        marked_q = {i for i in range(5) if gelfand_member(q, i)}
        assert (marked_p <= marked_q) == (p.subset <= q.subset)


def test_spectral_axioms_discs():
    inst = gelfand_functor(weight_chart(1))
    p, q = WeightedL1((1.0,)), WeightedL1((2.0,))
    rep = verify_spectral_axioms(inst, [(p, q), (q, p), (p, p)], points=300)
    assert rep.passed


def test_pure_state_functor_on_matrices():
    inst = pure_state_functor(scale_chart(2))
    rng = np.random.default_rng(0)
    pairs = list(zip(scale_chart(2).sample(rng, 5), scale_chart(2).sample(rng, 5)))
    assert verify_spectral_axioms(inst, pairs, points=60).passed


def test_doubling_pulls_back_weights():
    z = Poly.variable(1, 0)
    phi = substitution_morphism([2 * z])
    assert pullback(WeightedL1((1.0,)), phi) == WeightedL1((2.0,))
    a = Poly(1, {(0,): 1, (3,): -2j})
    assert WeightedL1((1.0,))(phi(a)) == pytest.approx(WeightedL1((2.0,))(a))
    inst = gelfand_functor(weight_chart(1))
    cmap = coarse_map_from_morphism(phi, inst, inst)
    assert (1.9,) in cmap(WeightedL1((1.0,))) and (2.1,) not in cmap(WeightedL1((1.0,)))


def test_identity_coarse_map():
    chart = subset_chart(3)
    inst = gelfand_functor(chart)
    cmap = coarse_map_from_morphism(identity_morphism(FunctionModel(3)), inst, inst)
    assert all(cmap.index_map(p) == p for p in chart.members)


def test_coordinate_restriction_exhaustive():
    # C^5 -> C^3 keeping the first three coordinates
    phi = coordinate_morphism(5, [0, 1, 2])
    src, tgt = gelfand_functor(subset_chart(3)), gelfand_functor(subset_chart(5))
    cmap = coarse_map_from_morphism(phi, src, tgt)
    b = np.arange(1, 6, dtype=complex)
    for q in subset_chart(3).members:
        pulled = cmap.index_map(q)
        assert pulled.subset == q.subset
        assert pulled(b) == q(phi(b))
    pairs = list(itertools.product(subset_chart(3).members, repeat=2))
    assert cmap.check_inclusions(pairs) == []


def test_composition_of_coordinate_maps():
    outer = coordinate_morphism(4, [3, 0])
    inner = coordinate_morphism(5, [4, 1, 2, 0])
    both = outer.compose(inner)
    b = np.array([10, 11, 12, 13, 14], dtype=complex)
    assert list(both(b)) == list(outer(inner(b)))
    assert both.mapping == (0, 4)


def test_non_morphism_rejected():
    m = EntireModel(1)
    bad = AlgebraMorphism(m, m, lambda b: b + Poly.variable(1, 0))
    with pytest.raises(NotAMorphismError):
        bad.check(np.random.default_rng(0))


def test_salg_condition_examples():
    v = verify_salg_condition(WeightedL1((1.0,)), WeightedL1((2.0,)))
    assert v.passed and v.exact
    p = WeightedL1((1.0, 2.0))
    assert verify_salg_condition(p, p).passed
    s = verify_salg_condition(SubsetMax(4, {0, 1}), SubsetMax(4, {1, 2}))
    assert s.passed and s.exact


def test_salg_discrepancy_in_two_variables():
    v = verify_salg_condition(WeightedL1((1.0, 2.0)), WeightedL1((2.0, 1.0)), degree=16)
    assert not v.passed and v.caveat
    assert v.worst_direction == (1, 1)
    # single-monomial oracle: min(r^a, s^a) = 2 against the meet weight 1
    assert v.growth[:4] == pytest.approx((2.0, 4.0, 8.0, 16.0))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.2, 5), st.floats(0.2, 5))
def test_salg_holds_in_one_variable(r, s):
    assert verify_salg_condition(WeightedL1((r,)), WeightedL1((s,))).passed


def test_marked_norm_examples():
    p = WeightedL1((1.0,))
    for k in range(6):
        rep = seminorm_from_marked_set(p, Poly.monomial((k,)))
        assert rep.marked_sup == pytest.approx(1) and rep.value == 1
    one = seminorm_from_marked_set(p, EntireModel(1).one())
    assert one.marked_sup == pytest.approx(1) and one.passed
    rep = seminorm_from_marked_set(SubsetMax(3, {0, 1}), FunctionModel(3).element([1, 2, 3]))
    assert rep.marked_sup == 2 == rep.value and rep.certified


def test_marked_norm_on_matrices():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a = MatrixModel(3).random_element(rng)
        rep = seminorm_from_marked_set(ScaledOperatorNorm(3), a, samples=64)
        assert rep.passed and rep.certified and rep.ratio <= 2 + 1e-6


def test_pure_states_separate_points():
    rng = np.random.default_rng(0)
    for chart in (weight_chart(2), subset_chart(4), scale_chart(2)):
        inst = pure_state_functor(chart)
        elems = [inst.model.random_element(rng) for _ in range(10)]
        assert separates_points(inst, elems) == []
    inst = pure_state_functor(subset_chart(3))
    assert len(separates_points(inst, [FunctionModel(3).zero()])) == 1


def test_vector_state_is_pure_state_member():
    f = vector_state(MatrixModel(2), [1, 1j])
    assert pure_state_member(ScaledOperatorNorm(2, 3.0), f)
