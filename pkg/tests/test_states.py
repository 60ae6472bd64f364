import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amgeo.algebra import EntireModel, FunctionModel, MatrixModel
from amgeo.seminorms import ScaledOperatorNorm, SubsetMax, WeightedL1
from amgeo.states import (
    Functional,
    bohnenblust_karlin_check,
    combine,
    density_state,
    dual_norm,
    evaluation_functional,
    find_spectral_violation,
    is_spectral_state,
    is_state,
    midpoint_extremality,
    moore_spanning_check,
    numerical_radius,
    point_mass,
    pure_states_sample,
    state_monotonicity_check,
    state_set_closedness_probe,
    trace_state,
    vector_state,
)

NILPOTENT = np.array([[0, 1], [0, 0]], dtype=complex)


def brute_numerical_radius(a, count=20000, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((count, a.shape[0])) + 1j * rng.standard_normal((count, a.shape[0]))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return float(np.max(np.abs(np.einsum("ki,ij,kj->k", x.conj(), a, x))))


def test_dual_norm_of_evaluation():
    f = evaluation_functional(EntireModel(1), [0.5], 20)
    oracle = max(0.5**k / 1.0**k for k in range(21))
    assert dual_norm(f, WeightedL1((1.0,))) == pytest.approx(oracle) == 1


def test_dual_norm_of_zero_and_density():
    m = MatrixModel(2)
    assert dual_norm(Functional(m, np.zeros((2, 2), dtype=complex)), ScaledOperatorNorm(2)) == 0
    rho = np.diag([1.0, 0.0]).astype(complex)
    trace_norm = float(np.sum(np.linalg.svd(rho, compute_uv=False)))
    assert dual_norm(density_state(m, rho), ScaledOperatorNorm(2)) == pytest.approx(trace_norm) == 1


def test_is_state_examples():
    p = WeightedL1((1.0,))
    chi = evaluation_functional(EntireModel(1), [1.0], 12)
    assert is_state(chi, p).is_state
    double = combine([2.0], [chi])
    assert double.at_one() == 2
    assert not is_state(double, p).is_state
    assert is_state(trace_state(MatrixModel(3)), ScaledOperatorNorm(3)).is_state


def test_point_masses_are_extreme_states():
    p = SubsetMax(4, frozenset(range(4)))
    rng = np.random.default_rng(0)
    pure = pure_states_sample(p, 10)
    assert [int(np.flatnonzero(f.data)[0]) for f in pure] == [0, 1, 2, 3]
    for f in pure:
        assert is_state(f, p).is_pure == "yes"
        assert midpoint_extremality(f, p, rng)[0]
    mid = combine([0.5, 0.5], pure[:2])
    extreme, direction = midpoint_extremality(mid, p, rng)
    assert not extreme and direction is not None


def test_vector_state_reads_entry():
    f = vector_state(MatrixModel(2), [1, 0])
    a = np.array([[3, 4], [5, 6]], dtype=complex)
    assert f(a) == 3
    assert is_state(f, ScaledOperatorNorm(2)).is_state


def test_count_must_be_positive():
    with pytest.raises(ValueError):
        pure_states_sample(ScaledOperatorNorm(2), 0)


def test_numerical_radius_examples():
    assert numerical_radius(NILPOTENT) == pytest.approx(0.5, abs=1e-6)
    assert numerical_radius(NILPOTENT) == pytest.approx(brute_numerical_radius(NILPOTENT), abs=1e-3)
    assert numerical_radius(np.eye(2)) == pytest.approx(1)
    d = np.diag([1.0, -1.0]).astype(complex)
    assert numerical_radius(d) == pytest.approx(1)
    assert brute_numerical_radius(d) == pytest.approx(1, abs=1e-3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from([2, 3, 4]))
def test_numerical_radius_brackets_norm(seed, n):
    a = MatrixModel(n).random_element(np.random.default_rng(seed))
    w = numerical_radius(a)
    op = np.linalg.norm(a, 2)
    assert w <= op * (1 + 1e-9)
    assert op <= 2 * w * (1 + 1e-6)
    assert w >= brute_numerical_radius(a, 2000, seed) - 1e-9


def test_bohnenblust_karlin_examples():
    p = ScaledOperatorNorm(2)
    rep = bohnenblust_karlin_check(NILPOTENT, p)
    assert rep.passed and rep.ratio == pytest.approx(2, rel=1e-6)
    assert bohnenblust_karlin_check(np.eye(2, dtype=complex), p).ratio == pytest.approx(1)
    rep = bohnenblust_karlin_check(np.diag([3.0, 1.0]).astype(complex), p)
    assert rep.passed and rep.state_sup == pytest.approx(3) and rep.value == pytest.approx(3)


def test_bohnenblust_karlin_needs_unital_norm():
    with pytest.raises(ValueError):
        bohnenblust_karlin_check(NILPOTENT, ScaledOperatorNorm(2, 2.0))


def test_bohnenblust_karlin_on_polynomials_and_tuples():
    rng = np.random.default_rng(2)
    p = WeightedL1((0.5, 2.0))
    for _ in range(20):
        a = EntireModel(2).random_element(rng)
        if a.is_zero():
            continue
        rep = bohnenblust_karlin_check(a, p)
        assert rep.passed
        assert rep.character_sup <= rep.state_sup * (1 + 1e-9)
    q = SubsetMax(3, {0, 2})
    assert bohnenblust_karlin_check(FunctionModel(3).element([1, 9, -2]), q).ratio == 1


def test_moore_rank_examples():
    assert moore_spanning_check(MatrixModel(2), 64).rank == 4
    assert moore_spanning_check(FunctionModel(3), 3).rank == 3
    assert moore_spanning_check(MatrixModel(1), 4).rank == 1
    with pytest.raises(ValueError):
        moore_spanning_check(MatrixModel(3), 5)


def test_spectral_state_examples():
    m = MatrixModel(2)
    assert is_spectral_state(trace_state(m), [NILPOTENT]).spectral
    e1 = vector_state(m, [1, 0])
    assert is_spectral_state(e1, [NILPOTENT, np.array([[1, 1], [0, 1]], dtype=complex)]).spectral
    diag = vector_state(m, [1, 1])
    v = is_spectral_state(diag, [NILPOTENT])
    assert not v.spectral and v.value == pytest.approx(0.5) and v.radius == 0
    f = FunctionModel(3)
    rng = np.random.default_rng(0)
    assert is_spectral_state(point_mass(f, 1), f.sample_elements(rng, 50)).spectral


def test_only_trace_is_spectral():
    rng = np.random.default_rng(5)
    m = MatrixModel(2)
    assert find_spectral_violation(trace_state(m), rng, extra=200).spectral
    for f in pure_states_sample(ScaledOperatorNorm(2), 20, seed=1):
        assert not find_spectral_violation(f, rng).spectral


def test_monotonicity_examples():
    chi = evaluation_functional(EntireModel(1), [0.5], 16)
    v = state_monotonicity_check(chi, WeightedL1((0.5,)), WeightedL1((1.0,)))
    assert v.state_for_q and v.state_for_p and v.holds
    tr = trace_state(MatrixModel(2))
    v = state_monotonicity_check(tr, ScaledOperatorNorm(2), ScaledOperatorNorm(2, 2.0))
    assert v.state_for_q and v.holds and not v.p_unital
    assert v.p_dual_norm == pytest.approx(0.5)
    p = SubsetMax(3, {1})
    assert state_monotonicity_check(point_mass(FunctionModel(3), 1), p, p).holds


def test_monotonicity_requires_domination():
    chi = evaluation_functional(EntireModel(1), [0.5], 16)
    with pytest.raises(ValueError):
        state_monotonicity_check(chi, WeightedL1((2.0,)), WeightedL1((1.0,)))


@pytest.mark.parametrize("p", [ScaledOperatorNorm(2), SubsetMax(3, {0, 1, 2})])
def test_closedness(p):
    rep = state_set_closedness_probe(p, trials=20)
    assert rep.all_states and rep.max_deviation <= 1e-9


def test_midpoint_of_vector_states_is_state():
    m = MatrixModel(2)
    f = combine([0.5, 0.5], [vector_state(m, [1, 0]), vector_state(m, [1, 1j])])
    assert is_state(f, ScaledOperatorNorm(2)).is_state
    assert is_state(f, ScaledOperatorNorm(2)).is_pure == "no"


def test_characters_of_polydisc_are_states():
    p = WeightedL1((0.5, 2.0))
    for f in pure_states_sample(p, 10, seed=3, degree=8):
        assert is_state(f, p).is_state
    outside = evaluation_functional(EntireModel(2), [0.6, 0.1], 8)
    assert dual_norm(outside, p) > 1
    assert math.isclose(dual_norm(outside, p), (0.6 / 0.5) ** 8, rel_tol=1e-9)
