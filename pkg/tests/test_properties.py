"""Hypothesis property suites for structural invariants spanning several modules."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amgeo.algebra import EntireModel, FunctionModel, MatrixModel, Poly, separating_character, spectral_data, spectral_radius
from amgeo.functor import coarse_map_from_morphism, coordinate_morphism, gelfand_functor, gelfand_member, verify_spectral_axioms
from amgeo.reconstruction import DerivationRep, chart_phi, cotangent_space, leibniz_defect
from amgeo.scheme import PresheafInstance
from amgeo.seminorms import ScaledOperatorNorm, SubsetMax, WeightedL1, dominates, join, pointwise_le, subset_chart, weight_chart
from amgeo.states import dual_norm, is_state, pure_states_sample
from amgeo.topology import (
    Chain,
    FinitePoints,
    IntersectionRep,
    P_of,
    UnionRep,
    basis_open,
    marked_rep,
    minimal_seminorm,
    strictly_dominates,
)

seeds = st.integers(0, 2**31 - 1)
radii = st.floats(0.2, 4.0)


@settings(max_examples=30)
@given(seeds, st.sampled_from(["matrix", "function"]))
def test_gelfand_iterate_decreases_and_ignores_norm_choice(seed, kind):
    rng = np.random.default_rng(seed)
    if kind == "matrix":
        model, p, q = MatrixModel(3), ScaledOperatorNorm(3, 1.0), ScaledOperatorNorm(3, 5.0)
    else:
        model, p, q = FunctionModel(5), SubsetMax(5, frozenset(range(5))), SubsetMax(5, frozenset(range(5)))
    a = model.random_element(rng)
    values = [spectral_radius(a, p, K, model) for K in range(1, 8)]
    assert all(b <= a_ * (1 + 1e-9) for a_, b in zip(values, values[1:]))
    exact = spectral_data(model, a).radius
    assert spectral_radius(a, p, 40, model) == pytest.approx(spectral_radius(a, q, 40, model), rel=1e-6)
    assert spectral_radius(a, q, 40, model) == pytest.approx(exact, rel=1e-6)


@settings(max_examples=40)
@given(seeds)
def test_nonzero_polynomials_have_separating_characters(seed):
    rng = np.random.default_rng(seed)
    a = EntireModel(2).random_element(rng, degree=4)
    chi = separating_character(EntireModel(2), a)
    assert (chi is None) == a.is_zero()
    if chi is not None:
        assert chi(a) != 0


@settings(max_examples=60)
@given(st.tuples(radii, radii), st.tuples(radii, radii), st.tuples(radii, radii))
def test_domination_is_a_preorder_with_lattice_bounds(r, s, t):
    p, q, u = WeightedL1(r), WeightedL1(s), WeightedL1(t)
    assert dominates(p, p)
    if dominates(p, q) and dominates(q, u):
        assert dominates(p, u)
    chart = weight_chart(2)
    assert dominates(p, chart.upper_bound(p, q)) and dominates(q, chart.upper_bound(p, q))
    assert dominates(chart.meet(p, q), p) and dominates(chart.meet(p, q), q)


@settings(max_examples=40)
@given(st.tuples(radii, radii), st.tuples(st.floats(0.1, 1.0), st.floats(0.1, 1.0)), seeds)
def test_saturation_constant_bounds_evaluations(r, shrink, seed):
    p = WeightedL1(r)
    q = WeightedL1(tuple(x * f for x, f in zip(r, shrink)))
    d = dominates(q, p)
    rng = np.random.default_rng(seed)
    elems = [EntireModel(2).random_element(rng) for _ in range(20)]
    assert pointwise_le(q, p, elems, d.constant) is None


@settings(max_examples=40)
@given(st.tuples(radii, radii), seeds)
def test_continuous_characters_are_states(r, seed):
    p = WeightedL1(r)
    for f in pure_states_sample(p, 5, seed=seed, degree=8):
        v = is_state(f, p)
        assert v.is_state and v.dual_norm == pytest.approx(1, abs=1e-9)


def test_sampled_states_have_unit_norm():
    for p in (ScaledOperatorNorm(3), SubsetMax(5, {0, 3})):
        for f in pure_states_sample(p, 20, seed=1):
            assert dual_norm(f, p) == pytest.approx(1, abs=1e-9) and f.at_one() == pytest.approx(1)


def test_coarse_maps_compose_exhaustively():
    outer = coordinate_morphism(4, [3, 1, 1])  # C^4 -> C^3
    inner = coordinate_morphism(5, [0, 2, 4, 4])  # C^5 -> C^4
    inst = {k: gelfand_functor(subset_chart(k)) for k in (3, 4, 5)}
    c_outer = coarse_map_from_morphism(outer, inst[3], inst[4])
    c_inner = coarse_map_from_morphism(inner, inst[4], inst[5])
    c_both = coarse_map_from_morphism(outer.compose(inner), inst[3], inst[5])
    for p in subset_chart(3).members:
        assert c_both.index_map(p) == c_inner.index_map(c_outer.index_map(p))


def test_meet_axiom_on_discs_with_many_points():
    inst = gelfand_functor(weight_chart(1))
    rng = np.random.default_rng(0)
    pairs = list(zip(weight_chart(1).sample(rng, 10), weight_chart(1).sample(rng, 10)))
    rep = verify_spectral_axioms(inst, pairs, points=1200)
    assert rep.passed and rep.points_checked >= 10_000


@settings(max_examples=40)
@given(st.tuples(st.floats(-3, 3), st.floats(-3, 3)), st.tuples(radii, radii), st.integers(0, 5), st.integers(0, 5))
def test_minimal_seminorm_is_below_every_containing_one(w, r, i, j):
    model = EntireModel(2)
    pm = minimal_seminorm(model, w).seminorm
    p = WeightedL1(tuple(max(abs(x), y) for x, y in zip(w, r)))  # any chart member whose marked set holds w
    assert gelfand_member(p, w)
    mono = Poly.monomial((i, j))
    assert pm(mono) <= p(mono) * (1 + 1e-12)


@settings(max_examples=30)
@given(st.lists(st.tuples(radii, radii), min_size=1, max_size=3), seeds)
def test_full_convex_sets_are_unions_of_their_marked_sets(parts, seed):
    # intersections of marked sets are full and A-convex; compare with the union over P(N)
    chart = weight_chart(2)
    N = IntersectionRep(tuple(marked_rep(WeightedL1(r)) for r in parts))
    rng = np.random.default_rng(seed)
    fam = P_of(N, chart).sample(rng, 40)
    union = UnionRep(tuple(marked_rep(p) for p in fam))
    box = [tuple(rng.uniform(-4, 4, 2) + 1j * rng.uniform(-4, 4, 2)) for _ in range(200)]
    for w in N.sample(rng, 100):
        assert w in union
    for w in box:
        if w in union:
            assert w in N


@settings(max_examples=60)
@given(st.tuples(radii, radii), st.tuples(st.floats(1.05, 3), st.floats(1.05, 3)), st.tuples(st.floats(1, 2), st.floats(1, 2)))
def test_strict_then_weak_is_strict(r, up, more):
    p = WeightedL1(r)
    q = WeightedL1(tuple(x * f for x, f in zip(r, up)))
    s = WeightedL1(tuple(x * f for x, f in zip(q.weights, more)))
    assert strictly_dominates(p, q) and dominates(q, s)
    assert strictly_dominates(p, s)


def test_restriction_is_functorial_on_nested_subsets():
    k = 4
    m = FunctionModel(k)
    sheaf = PresheafInstance(m, subset_chart(k))
    rng = np.random.default_rng(0)
    subsets = [s for r in range(k + 1) for s in itertools.combinations(range(k), r)]
    for U in subsets:
        a = sheaf.sections(FinitePoints(m, U)).section(m.random_element(rng))
        for V in (s for s in subsets if set(s) <= set(U)):
            for W in (s for s in subsets if set(s) <= set(V)):
                two_step = sheaf.restrict(sheaf.restrict(a, FinitePoints(m, V)), FinitePoints(m, W))
                assert two_step.equals(sheaf.restrict(a, FinitePoints(m, W)))


@settings(max_examples=30)
@given(st.floats(0.3, 3), st.floats(0.3, 3), st.floats(0.3, 3))
def test_restriction_is_functorial_on_nested_discs(a, b, c):
    lw, lv, lu = sorted((a, b, c))
    sheaf = PresheafInstance(EntireModel(1), weight_chart(1))
    opens = [basis_open(Chain.increasing_to((L / 2,), (L,))) for L in (lw, lv, lu)]
    f = sheaf.sections(opens[2]).section(Poly(1, {(0,): 1, (2,): -3}))
    two_step = sheaf.restrict(sheaf.restrict(f, opens[1]), opens[0])
    assert two_step.equals(sheaf.restrict(f, opens[0]))


def test_sections_are_unital():
    k = 4
    m = FunctionModel(k)
    sheaf = PresheafInstance(m, subset_chart(k))
    for r in range(1, k + 1):
        for U in itertools.combinations(range(k), r):
            alg = sheaf.sections(FinitePoints(m, U))
            for p in alg.nonzero_family(np.random.default_rng(0)):
                assert alg.one().value(p) == 1


def test_leibniz_on_many_pairs():
    rng = np.random.default_rng(0)
    m = EntireModel(2)
    worst = 0.0
    for _ in range(500):
        delta = DerivationRep(tuple(m.random_element(rng, degree=2) for _ in range(2)))
        a, b = m.random_element(rng), m.random_element(rng)
        scale = max([1.0] + [abs(c) for c in (a * b).terms.values()]) * 100
        worst = max(worst, leibniz_defect(delta, a, b) / scale)
    assert worst <= 1e-12


@settings(max_examples=30)
@given(seeds, st.integers(1, 3))
def test_pairing_is_identity(seed, n):
    rng = np.random.default_rng(seed)
    cd = cotangent_space(tuple(rng.standard_normal(n) + 1j * rng.standard_normal(n)))
    assert cd.pairing_error <= 1e-10


@settings(max_examples=30)
@given(seeds)
def test_chart_characters_are_multiplicative(seed):
    rng = np.random.default_rng(seed)
    n = 2
    cd = cotangent_space(tuple(rng.standard_normal(n)))
    chi = chart_phi(cd, tuple(0.5 * rng.standard_normal(n)))
    a, b = (EntireModel(n).random_element(rng) for _ in range(2))
    lhs, rhs = chi(a * b), chi(a) * chi(b)
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))


def test_join_of_crossed_weights_exceeds_both_on_mixed_monomials():
    # the pointwise max is below the componentwise-max chart member
    j = join(WeightedL1((1.0, 2.0)), WeightedL1((2.0, 1.0)))
    u = weight_chart(2).upper_bound(WeightedL1((1.0, 2.0)), WeightedL1((2.0, 1.0)))
    for alpha in itertools.product(range(6), repeat=2):
        mono = Poly.monomial(alpha)
        assert j(mono) <= u(mono)
    assert j(Poly.monomial((1, 1))) < u(Poly.monomial((1, 1)))
