import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amgeo.algebra import EntireModel, FunctionModel, Poly
from amgeo.seminorms import (
    NotDominatedError,
    ScaledOperatorNorm,
    SubsetMax,
    WeightedL1,
    join,
    scale_chart,
    subset_chart,
    weight_chart,
)
from amgeo.topology import (
    Annulus,
    Chain,
    EmptySet,
    FinitePoints,
    IntersectionRep,
    NotStrictlyIncreasingError,
    NotTotallyOrderedError,
    Polydisc,
    UnionRep,
    Whole,
    basis_open,
    chain_infimum,
    full_closure,
    intersect_basis_opens,
    intersection_agreement,
    is_A_convex,
    is_full,
    is_schwartz,
    is_strictly_increasing,
    marked_inside,
    marked_rep,
    minimal_seminorm,
    P_of,
    strictly_dominates,
)


def test_minimal_seminorm_examples():
    res = minimal_seminorm(EntireModel(1), (0.5,))
    assert res.seminorm == WeightedL1((0.5,)) and res.certified
    # grid oracle: among weights in (0, 1], the smallest containing 0.5 is 0.5
    grid = np.linspace(0.01, 1, 100)
    assert min(r for r in grid if r >= 0.5 - 1e-12) == pytest.approx(0.5)
    res = minimal_seminorm(FunctionModel(3), 2)
    assert res.seminorm == SubsetMax(3, {2}) and res.certified
    res = minimal_seminorm(EntireModel(1), (0,))
    assert res.seminorm.weights == (0.0,)
    assert res.seminorm(Poly(1, {(0,): 3, (2,): 5})) == 3


def test_chain_infimum_examples():
    chain = [WeightedL1((r,)) for r in (1.0, 0.5, 0.25)]
    inf, rep = chain_infimum(chain)
    assert inf(Poly.variable(1, 0)) == 0.25
    assert rep.max_identity_deviation < 1e-9 and rep.submultiplicative
    p = WeightedL1((2.0,))
    assert chain_infimum([p])[0] == p


def test_chain_infimum_rejects_incomparable():
    with pytest.raises(NotTotallyOrderedError):
        chain_infimum([WeightedL1((1.0, 2.0)), WeightedL1((2.0, 1.0))])


def test_full_closure_examples():
    closure = full_closure(FinitePoints(EntireModel(1), ((1.0,),)))
    for w in [(0.3,), (1j,), (-0.99,)]:
        assert w in closure
    assert (1.01,) not in closure
    assert isinstance(full_closure(EmptySet(EntireModel(1))), EmptySet)
    pts = FinitePoints(FunctionModel(4), (0, 2))
    assert full_closure(pts) is pts


def test_fullness_examples():
    assert is_full(Polydisc((1.0,))).full
    v = is_full(Annulus(0.5, 1.0))
    assert not v.full
    m, w = v.witness
    assert abs(w[0]) < 0.5
    assert is_full(Whole(EntireModel(2))).full
    assert is_full(FinitePoints(FunctionModel(3), (1,))).exact


def test_P_of_examples():
    chart = weight_chart(1)
    fam = P_of(Polydisc((1.0,)), chart)
    assert WeightedL1((0.7,)) in fam and WeightedL1((1.0,)) in fam
    assert WeightedL1((1.2,)) not in fam
    fam = P_of(EmptySet(FunctionModel(3)), subset_chart(3))
    assert fam == (SubsetMax(3, frozenset()),)
    fam = P_of(FinitePoints(FunctionModel(3), (0, 1)), subset_chart(3))
    assert {p.subset for p in fam} == {frozenset(s) for s in [(), (0,), (1,), (0, 1)]}


def test_a_convexity_examples():
    chart = weight_chart(1)
    assert is_A_convex(UnionRep((Polydisc((1.0,)), Polydisc((2.0,)))), chart).a_convex
    pts = UnionRep((FinitePoints(FunctionModel(3), (0,)), FinitePoints(FunctionModel(3), (1,))))
    assert is_A_convex(pts, subset_chart(3)).a_convex
    p = WeightedL1((0.5, 3.0))
    assert is_A_convex(marked_rep(p), weight_chart(2)).a_convex
    assert is_full(marked_rep(p)).full


def test_union_of_crossed_polydiscs_is_not_a_convex():
    N = UnionRep((Polydisc((1.0, 2.0)), Polydisc((2.0, 1.0))))
    v = is_A_convex(N, weight_chart(2))
    assert not v.a_convex
    _, _, w = v.witness
    assert np.abs(w) == pytest.approx([math.sqrt(2)] * 2)


def test_join_marked_set_leaves_union():
    j = join(WeightedL1((1.0, 2.0)), WeightedL1((2.0, 1.0)))
    N = UnionRep((Polydisc((1.0, 2.0)), Polydisc((2.0, 1.0))))
    ok, w = marked_inside(N, j)
    assert not ok and w not in N


def test_p_of_intersection_is_intersection_on_subsets():
    chart = subset_chart(4)
    sets = [FinitePoints(FunctionModel(4), s) for r in range(5) for s in itertools.combinations(range(4), r)]
    for a, b in itertools.product(sets, repeat=2):
        both = P_of(IntersectionRep((a, b)), chart)
        assert set(both) == set(P_of(a, chart)) & set(P_of(b, chart))


def test_strict_domination_examples():
    w = strictly_dominates(WeightedL1((1.0,)), WeightedL1((2.0,)))
    assert w.strict and w.tail[:3] == (0.5, 0.25, 0.125) and w.schauder
    w = strictly_dominates(WeightedL1((1.0,)), WeightedL1((1.0,)))
    assert not w.strict and set(w.tail) == {1.0}
    w = strictly_dominates(WeightedL1((1.0, 1.0)), WeightedL1((2.0, 1.0)))
    assert not w.strict and not w.schauder
    with pytest.raises(NotDominatedError):
        strictly_dominates(WeightedL1((2.0,)), WeightedL1((1.0,)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.1, 4), min_size=2, max_size=2), st.lists(st.floats(1.0, 2.0), min_size=2, max_size=2))
def test_strict_domination_criterion(r, factors):
    R = [x * f for x, f in zip(r, factors)]
    w = strictly_dominates(WeightedL1(tuple(r)), WeightedL1(tuple(R)))
    assert w.strict == all(a < b for a, b in zip(r, R))
    assert w.schauder == w.strict


def test_strictly_increasing_examples():
    chain = Chain(tuple(WeightedL1((float(k),)) for k in range(1, 6)), lambda p: WeightedL1((p.weights[0] + 1,)))
    assert is_strictly_increasing(chain)[0]
    assert not is_strictly_increasing(Chain((WeightedL1((1.0,)),)))[0]
    assert is_schwartz(subset_chart(4))[0]
    assert is_schwartz(weight_chart(2))[0]
    assert is_strictly_increasing(Chain((SubsetMax(3, {0}),)))[0]


def test_basis_open_rejects_flat_chain():
    with pytest.raises(NotStrictlyIncreasingError):
        basis_open(Chain((WeightedL1((1.0,)), WeightedL1((1.0,)))))


def test_intersection_of_discs():
    u1 = basis_open(Chain.increasing_to((0.5,), (1.0,)))
    u2 = basis_open(Chain.increasing_to((0.5,), (2.0,)))
    inter = intersect_basis_opens([u1, u2])
    grid = [(complex(x, y),) for x in np.linspace(-2.5, 2.5, 41) for y in np.linspace(-2.5, 2.5, 41)]
    for w in grid:
        assert (w in inter) == (abs(w[0]) < 1)
    assert intersection_agreement([u1, u2], grid).passed


def test_intersection_with_whole_space():
    u = basis_open(Chain.increasing_to((0.5,), (1.5,)))
    total = basis_open(Chain.increasing_to((1.0,), (math.inf,)))
    inter = intersect_basis_opens([u, total])
    grid = [(complex(x, 0.3),) for x in np.linspace(-3, 3, 61)]
    assert all((w in inter) == (w in u) for w in grid)


def test_limit_membership_matches_chain_terms():
    # without the recorded limit, membership runs through the chain terms themselves
    chain = Chain.increasing_to((0.25,), (1.0,))
    bare = Chain(chain.prefix, chain.step)
    rng = np.random.default_rng(0)
    for _ in range(200):
        w = (complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)),)
        if abs(abs(w[0]) - 1) > 1e-6:
            assert chain.contains_point(w) == bare.contains_point(w)


def test_subset_chain_intersections_exhaustive():
    k = 4
    subsets = [frozenset(s) for r in range(1, k + 1) for s in itertools.combinations(range(k), r)]
    for s, t in itertools.product(subsets, repeat=2):
        u = basis_open(Chain((SubsetMax(k, s),)))
        v = basis_open(Chain((SubsetMax(k, t),)))
        inter = intersect_basis_opens([u, v])
        assert [i for i in range(k) if i in inter] == sorted(s & t)


def test_matrix_chain_is_strictly_increasing():
    chain = Chain((ScaledOperatorNorm(2, 1.0), ScaledOperatorNorm(2, 2.0)))
    assert is_strictly_increasing(chain)[0]
    assert is_schwartz(scale_chart(2))[0]
