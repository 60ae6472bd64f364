"""Verification suites, their configuration and the structured report."""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .algebra import EntireModel, FunctionModel, MatrixModel, Model, Poly
from .functor import (
    ConvexStructure,
    coarse_map_from_morphism,
    coordinate_morphism,
    gelfand_functor,
    pullback,
    pure_state_functor,
    seminorm_from_marked_set,
    separates_points,
    substitution_morphism,
    verify_convex_structure,
    verify_salg_condition,
    verify_spectral_axioms,
)
from .reconstruction import (
    DerivationRep,
    chart_phi,
    cotangent_space,
    exponentiability_probe,
    geometric_hypotheses,
    injectivity_check,
    jacobian_check,
    leibniz_defect,
)
from .scheme import (
    PresheafInstance,
    completeness_check,
    separatedness_check,
    spectrum_of_sections,
    verify_affine_scheme,
)
from .seminorms import (
    ScaledOperatorNorm,
    Seminorm,
    SeminormChart,
    SubsetMax,
    WeightedL1,
    connecting_map,
    dominates,
    join,
    mittag_leffler_density_check,
    pointwise_le,
    probe_elements,
    quotient_algebra,
    scale_chart,
    subset_chart,
    weight_chart,
)
from .states import (
    bohnenblust_karlin_check,
    find_spectral_violation,
    moore_spanning_check,
    pure_states_sample,
    random_density_matrix,
    density_state,
    state_monotonicity_check,
    state_set_closedness_probe,
    trace_state,
    midpoint_extremality,
)
from .topology import (
    Chain,
    FinitePoints,
    IntersectionRep,
    P_of,
    Whole,
    basis_open,
    chain_infimum,
    intersection_agreement,
    is_A_convex,
    is_full,
    is_schwartz,
    marked_inside,
    marked_rep,
    minimal_seminorm,
    strictly_dominates,
)

SCHEMA = "amgeo-report/1"
MODELS = ("entire", "matrix", "function")
SUITES = ("lattice", "states", "functor", "topology", "scheme", "reconstruction")
DIM_BOUNDS = {"entire": 4, "matrix": 8, "function": 32}
DEFAULT_DIM = {"entire": 1, "matrix": 2, "function": 4}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    model: str = "function"
    dim: int | None = None
    degree: int = 8
    horizon: int = 64
    seed: int = 0
    suite: str = "all"
    tol_rel: float = 1e-9

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        if self.dim is None:
            object.__setattr__(self, "dim", DEFAULT_DIM[self.model])
        if not 1 <= self.dim <= DIM_BOUNDS[self.model]:
            raise ConfigError(f"dimension {self.dim} outside 1..{DIM_BOUNDS[self.model]} for model {self.model}")
        if self.degree < 1:
            raise ConfigError("degree must be positive")
        if self.horizon < 4:
            raise ConfigError("horizon must be at least 4")
        if self.suite not in SUITES + ("all",):
            raise ConfigError(f"unknown suite {self.suite!r}")
        if not 0 < self.tol_rel < 1:
            raise ConfigError("relative tolerance must lie in (0, 1)")

    def make_model(self) -> Model:
        return {"entire": EntireModel, "matrix": MatrixModel, "function": FunctionModel}[self.model](self.dim)

    def make_chart(self) -> SeminormChart:
        return {"entire": weight_chart, "matrix": scale_chart, "function": subset_chart}[self.model](self.dim)


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    witnesses: list = field(default_factory=list)
    margins: dict = field(default_factory=dict)
    skipped: bool = False


@dataclass(frozen=True)
class Check:
    id: str
    suite: str
    anchor: str
    fn: Callable[[SuiteConfig, np.random.Generator], CheckResult]
    models: tuple[str, ...] = MODELS
    mandatory: Callable[[SuiteConfig], bool] = lambda cfg: True


REGISTRY: list[Check] = []


def check(suite: str, cid: str, anchor: str, models=MODELS, mandatory=lambda cfg: True):
    def deco(fn):
        REGISTRY.append(Check(f"{suite}.{cid}", suite, anchor, fn, tuple(models), mandatory))
        return fn

    return deco


def sub_seed(seed: int, check_id: str) -> int:
    """Per-check seed so that ordering never affects results."""
    digest = hashlib.sha256(f"{seed}:{check_id}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _unital(p: Seminorm) -> bool:
    return not (isinstance(p, SubsetMax) and not p.subset) and not (isinstance(p, ScaledOperatorNorm) and p.scale != 1.0)


def _unital_sample(cfg: SuiteConfig, rng, count: int) -> list[Seminorm]:
    if cfg.model == "matrix":
        return [ScaledOperatorNorm(cfg.dim)]
    if cfg.model == "function":
        out = []
        while len(out) < count:
            S = frozenset(np.flatnonzero(rng.random(cfg.dim) < 0.5).tolist())
            if S:
                out.append(SubsetMax(cfg.dim, S))
        return out
    return cfg.make_chart().sample(rng, count)


def _witness_log_ratio(p: Seminorm, q: Seminorm, w) -> float:
    """``log(p(w)/q(w))``, in log space for monomial witnesses of high degree."""
    if isinstance(p, WeightedL1) and isinstance(w, Poly) and len(w.terms) == 1:
        (alpha, _), = w.terms.items()
        total = 0.0
        for a, r, s in zip(alpha, p.weights, q.weights):
            if a:
                if s == 0:
                    return math.inf
                total += a * (math.log(r) - math.log(s))
        return total
    qw = q(w)
    return math.inf if qw == 0 else math.log(p(w) / qw)


# lattice

@check("lattice", "domination_order", "domination preorder on seminorms")
def _domination(cfg, rng):
    chart = cfg.make_chart()
    model = cfg.make_model()
    probes = probe_elements(model, rng, 32, degree=cfg.degree)
    bad = []
    for p, q in zip(chart.sample(rng, 40), chart.sample(rng, 40)):
        d = dominates(p, q)
        if d.verdict == "yes":
            if pointwise_le(p, q, probes, c=d.constant * (1 + cfg.tol_rel)) is not None:
                bad.append((p, q, "constant fails"))
        elif d.verdict == "no":
            if _witness_log_ratio(p, q, d.witness) <= math.log(1e6):
                bad.append((p, q, "witness too weak"))
        else:
            bad.append((p, q, "undecided"))
        if not dominates(p, p):
            bad.append((p, "reflexivity"))
    return CheckResult(not bad, bad[:3])


@check("lattice", "meet_join", "meet and join of seminorms")
def _meet_join(cfg, rng):
    chart = cfg.make_chart()
    model = cfg.make_model()
    probes = probe_elements(model, rng, 32, degree=cfg.degree)
    bad = []
    for p, q in zip(chart.sample(rng, 30), chart.sample(rng, 30)):
        m, j = chart.meet(p, q), join(p, q)
        for a in probes:
            pa, qa = p(a), q(a)
            if m(a) > min(pa, qa) * (1 + cfg.tol_rel) + 1e-12 or j(a) < max(pa, qa) * (1 - cfg.tol_rel) - 1e-12:
                bad.append((p, q, repr(a)))
                break
    return CheckResult(not bad, bad[:3])


@check("lattice", "submultiplicative", "submultiplicative unital seminorms")
def _submult(cfg, rng):
    model = cfg.make_model()
    bad = []
    for p in _unital_sample(cfg, rng, 10):
        if abs(p(model.one()) - 1) > cfg.tol_rel:
            bad.append((p, "p(1) != 1"))
        for _ in range(20):
            a, b = model.random_element(rng), model.random_element(rng)
            if p(model.mul(a, b)) > p(a) * p(b) * (1 + cfg.tol_rel) + 1e-12:
                bad.append((p, "p(ab) > p(a)p(b)"))
                break
    return CheckResult(not bad, bad[:3])


@check("lattice", "quotients", "quotient Banach algebras and connecting maps")
def _quotients(cfg, rng):
    chart = cfg.make_chart()
    model = cfg.make_model()
    bad, worst = [], 0.0
    for p in chart.sample(rng, 6):
        if isinstance(p, SubsetMax) and not p.subset:
            continue
        deg = min(cfg.degree, 4) if cfg.model == "entire" else 0
        Q = quotient_algebra(p, deg)
        for _ in range(10):
            a = model.random_element(rng, degree=deg) if cfg.model == "entire" else model.random_element(rng)
            dev = abs(Q.norm(Q.project(a)) - p(a)) / max(1.0, p(a))
            worst = max(worst, dev)
        q = chart.upper_bound(p, p)
        cm = connecting_map(p, q)
        if not mittag_leffler_density_check(p, deg, 1e-6, samples=10, seed=int(rng.integers(2**31))).passed:
            bad.append((p, "density"))
        if cm.constant > 1 + cfg.tol_rel:
            bad.append((p, "connecting constant"))
    if worst > cfg.tol_rel * 100:
        bad.append(("quotient norm deviation", worst))
    return CheckResult(not bad, bad[:3], {"max_norm_deviation": worst})


# states

@check("states", "bohnenblust_karlin", "Bohnenblust-Karlin inequality p(a) <= e * state sup")
def _bk(cfg, rng):
    model = cfg.make_model()
    bad, worst = [], 0.0
    count = 200 if cfg.model == "matrix" else 60
    ps = _unital_sample(cfg, rng, 10)
    for i in range(count):
        p = ps[i % len(ps)]
        a = model.random_element(rng)
        if p(a) == 0:
            continue
        rep = bohnenblust_karlin_check(a, p, rtol=cfg.tol_rel)
        worst = max(worst, rep.ratio)
        if not rep.passed:
            bad.append((p, repr(a)))
    return CheckResult(not bad, bad[:3], {"max_ratio": worst, "bound": math.e})


@check("states", "moore_spanning", "pure states span the dual", models=("matrix", "function"))
def _moore(cfg, rng):
    model = cfg.make_model()
    dual_dim = cfg.dim**2 if cfg.model == "matrix" else cfg.dim
    rep = moore_spanning_check(model, 2 * dual_dim, seed=int(rng.integers(2**31)))
    return CheckResult(rep.full, [] if rep.full else [rep.rank], {"rank": rep.rank, "expected": rep.expected, "gap": rep.gap})


@check("states", "spectral_scarcity", "the only spectral state is the trace", models=("matrix",),
       mandatory=lambda cfg: cfg.dim >= 2)
def _scarcity(cfg, rng):
    model = cfg.make_model()
    if cfg.dim == 1:
        return CheckResult(True, [], {}, skipped=True)
    found = 0
    trials = 100
    for _ in range(trials):
        f = density_state(model, random_density_matrix(cfg.dim, rng))
        if not find_spectral_violation(f, rng).spectral:
            found += 1
    trace_ok = find_spectral_violation(trace_state(model), rng, extra=200).spectral
    rate = found / trials
    return CheckResult(rate >= 0.99 and trace_ok, [] if trace_ok else ["trace"], {"detection_rate": rate})


@check("states", "extremality", "pure states are extreme points", models=("matrix", "function"))
def _extreme(cfg, rng):
    model = cfg.make_model()
    p = ScaledOperatorNorm(cfg.dim) if cfg.model == "matrix" else SubsetMax(cfg.dim, frozenset(range(cfg.dim)))
    bad = []
    for f in pure_states_sample(p, 8, seed=int(rng.integers(2**31))):
        ext, wit = midpoint_extremality(f, p, rng)
        if not ext:
            bad.append(repr(wit))
    if cfg.model == "matrix" and cfg.dim >= 2:
        if midpoint_extremality(trace_state(model), p, rng)[0]:
            bad.append("trace reported extreme")
    return CheckResult(not bad, bad[:3])


@check("states", "closedness", "the state set is closed", models=("matrix", "function"))
def _closed(cfg, rng):
    p = ScaledOperatorNorm(cfg.dim) if cfg.model == "matrix" else SubsetMax(cfg.dim, frozenset(range(cfg.dim)))
    rep = state_set_closedness_probe(p, trials=20, seed=int(rng.integers(2**31)))
    return CheckResult(rep.all_states, [], {"max_deviation": rep.max_deviation})


@check("states", "monotonicity", "states of a smaller seminorm stay states", models=("matrix", "function"))
def _monotone(cfg, rng):
    model = cfg.make_model()
    bad = []
    if cfg.model == "matrix":
        q, p = ScaledOperatorNorm(cfg.dim), ScaledOperatorNorm(cfg.dim, 2.0)
        fs = [trace_state(model)] + pure_states_sample(q, 6, seed=int(rng.integers(2**31)))
        pairs = [(f, q, p) for f in fs]
    else:
        pairs = []
        for _ in range(10):
            S = frozenset(np.flatnonzero(rng.random(cfg.dim) < 0.5).tolist()) or frozenset([0])
            T = S | frozenset(np.flatnonzero(rng.random(cfg.dim) < 0.5).tolist())
            q, p = SubsetMax(cfg.dim, S), SubsetMax(cfg.dim, T)
            for f in pure_states_sample(q, len(S), seed=int(rng.integers(2**31))):
                pairs.append((f, q, p))
    for f, q, p in pairs:
        v = state_monotonicity_check(f, q, p)
        if not v.holds:
            bad.append((q, p))
    return CheckResult(not bad, bad[:3], {"pairs": len(pairs)})


# functor

def _instance(cfg):
    chart = cfg.make_chart()
    if cfg.model == "matrix":
        return pure_state_functor(chart)
    return gelfand_functor(chart)


def _pairs(cfg, chart, rng, count):
    if chart.members and len(chart.members) ** 2 <= 4096:
        return [(p, q) for p in chart.members for q in chart.members]
    ps = chart.sample(rng, count)
    qs = chart.sample(rng, count)
    pairs = list(zip(ps, qs)) + [(p, p) for p in ps[:4]]
    if cfg.model == "entire":
        pairs += [(p, chart.upper_bound(p, q)) for p, q in zip(ps[:8], qs[:8])]
    return pairs


@check("functor", "convex_structure", "convex structure: covers, directed, intersection-closed")
def _convex(cfg, rng):
    rep = verify_convex_structure(ConvexStructure.from_instance(_instance(cfg)), budget=200, seed=int(rng.integers(2**31)))
    return CheckResult(rep.passed, [f"{k}: {v!r}" for k, v in rep.witnesses.items()], {"exact": rep.exact})


@check("functor", "spectral_axioms", "spectral functor: containment iff domination, meets to intersections")
def _axioms(cfg, rng):
    inst = _instance(cfg)
    pts = 1000 if cfg.model == "entire" and cfg.dim == 1 else 200
    count = 20 if cfg.model != "matrix" else 8
    rep = verify_spectral_axioms(inst, _pairs(cfg, inst.chart, rng, count), points=pts, seed=int(rng.integers(2**31)))
    return CheckResult(rep.passed, (rep.containment_failures + rep.meet_failures)[:3],
                       {"pairs": rep.pairs, "points": rep.points_checked, "exact": rep.exact})


@check("functor", "pure_state_axioms", "pure-state functor M_p = A_p* ∩ PS(A)", models=("entire", "function"))
def _ps_axioms(cfg, rng):
    inst = pure_state_functor(cfg.make_chart(), degree=cfg.degree)
    rep = verify_spectral_axioms(inst, _pairs(cfg, inst.chart, rng, 6)[:64], points=60, seed=int(rng.integers(2**31)))
    return CheckResult(rep.passed, (rep.containment_failures + rep.meet_failures)[:3], {"pairs": rep.pairs})


@check("functor", "coarse_maps", "coarse maps from algebra morphisms are functorial", models=("entire", "function"))
def _coarse(cfg, rng):
    bad = []
    if cfg.model == "function":
        k = cfg.dim
        mid = max(1, k - 1)
        psi = coordinate_morphism(k, rng.integers(0, k, mid))  # C^k -> C^mid
        phi = coordinate_morphism(mid, rng.integers(0, mid, k))  # C^mid -> C^k
        comp = phi.compose(psi)  # C^k -> C^k
        src = subset_chart(k)
        for p in src.members or src.sample(rng, 64):
            if pullback(pullback(p, phi), psi) != pullback(p, comp):
                bad.append(p)
        cm = coarse_map_from_morphism(comp, gelfand_functor(src), gelfand_functor(src))
        bad += cm.check_inclusions(_pairs(cfg, src, rng, 32)[:256])
    else:
        n = cfg.dim
        lam1 = rng.uniform(0.5, 2.0, n)
        lam2 = rng.uniform(0.5, 2.0, n)
        phi = substitution_morphism([Poly.variable(n, i) * lam1[i] for i in range(n)])
        psi = substitution_morphism([Poly.variable(n, i) * lam2[i] for i in range(n)])
        chart = weight_chart(n)
        inst = gelfand_functor(chart)
        comp = phi.compose(psi)
        for p in chart.sample(rng, 16):
            lhs = pullback(p, comp)
            rhs = pullback(pullback(p, phi), psi)
            direct = WeightedL1(tuple(r * a * b for r, a, b in zip(p.weights, lam1, lam2)))
            for a in probe_elements(EntireModel(n), rng, 8, degree=4):
                if not math.isclose(lhs(a), rhs(a), rel_tol=1e-9, abs_tol=1e-12) or not math.isclose(lhs(a), direct(a), rel_tol=1e-9, abs_tol=1e-12):
                    bad.append(p)
                    break
        cm = coarse_map_from_morphism(phi, inst, inst)
        bad += cm.check_inclusions(_pairs(cfg, chart, rng, 8), points=100)
    return CheckResult(not bad, [repr(b) for b in bad[:3]])


@check("functor", "salg_condition", "A_p* ∩ A_q* = A_{p∧q}* (sAlg)", models=("entire", "function", "matrix"),
       mandatory=lambda cfg: not (cfg.model == "entire" and cfg.dim >= 2))
def _salg(cfg, rng):
    chart = cfg.make_chart()
    fails = []
    worst = 1.0
    for p, q in zip(chart.sample(rng, 20), chart.sample(rng, 20)):
        v = verify_salg_condition(p, q, degree=min(cfg.degree, 12))
        worst = max(worst, v.worst_ratio)
        if not v.passed:
            fails.append({"p": p, "q": q, "direction": v.worst_direction})
    if cfg.model == "entire" and cfg.dim == 2:
        v = verify_salg_condition(WeightedL1((1.0, 2.0)), WeightedL1((2.0, 1.0)), degree=4)
        fails.append({"p": "p[1, 2]", "q": "p[2, 1]", "direction": v.worst_direction, "ratio_along_direction": v.growth[:4]})
    return CheckResult(not fails, fails[:4], {"worst_ratio": worst})


@check("functor", "marked_norm", "seminorms recovered from marked sets up to e")
def _marked(cfg, rng):
    model = cfg.make_model()
    bad, worst = [], 0.0
    for p in _unital_sample(cfg, rng, 10)[:10]:
        for _ in range(5):
            a = model.random_element(rng, degree=3) if cfg.model == "entire" else model.random_element(rng)
            rep = seminorm_from_marked_set(p, a, samples=256, seed=int(rng.integers(2**31)))
            worst = max(worst, rep.ratio if rep.certified else 0.0)
            if not rep.passed:
                bad.append((p, repr(a)))
    return CheckResult(not bad, bad[:3], {"max_certified_ratio": worst})


@check("functor", "separation", "pure states separate points")
def _separation(cfg, rng):
    model = cfg.make_model()
    elements = []
    while len(elements) < 100:
        a = model.random_element(rng)
        if not model.is_zero(a):
            elements.append(a)
    fails = separates_points(_instance(cfg), elements, seed=int(rng.integers(2**31)))
    return CheckResult(not fails, [repr(a) for a in fails[:3]], {"elements": len(elements)})


# topology

COMMUTATIVE = ("entire", "function")


def _points(cfg, rng, count):
    model = cfg.make_model()
    if cfg.model == "function":
        return list(range(cfg.dim))
    return Whole(model, 4.0).sample(rng, count)


@check("topology", "minimality", "minimal seminorm of a point", models=COMMUTATIVE)
def _minimal(cfg, rng):
    model, chart = cfg.make_model(), cfg.make_chart()
    probes = probe_elements(model, rng, 24, degree=4)
    bad = []
    for m in _points(cfg, rng, 30):
        res = minimal_seminorm(model, m, seed=int(rng.integers(2**31)))
        if not res.certified:
            bad.append((m, "smaller seminorm keeps the point"))
        for p in chart.sample(rng, 16):
            if marked_inside(marked_rep(p), res.seminorm)[0] and pointwise_le(res.seminorm, p, probes) is not None:
                bad.append((m, p))
    return CheckResult(not bad, bad[:3])


@check("topology", "marked_sets_full_convex", "marked sets are full and A-convex", models=COMMUTATIVE)
def _full_convex(cfg, rng):
    chart = cfg.make_chart()
    bad = []
    members = chart.sample(rng, 200)
    for i, p in enumerate(members):
        N = marked_rep(p)
        if not is_full(N, budget=16, seed=i).full or not is_A_convex(N, chart, budget=4, seed=i).a_convex:
            bad.append(p)
    return CheckResult(not bad, bad[:3], {"instances": len(members)})


@check("topology", "intersection_preservation", "fullness and A-convexity survive intersections", models=COMMUTATIVE)
def _preserve(cfg, rng):
    chart = cfg.make_chart()
    bad = []
    for i, (p, q) in enumerate(zip(chart.sample(rng, 200), chart.sample(rng, 200))):
        N = IntersectionRep((marked_rep(p), marked_rep(q)))
        if not is_full(N, budget=16, seed=i).full or not is_A_convex(N, chart, budget=4, seed=i).a_convex:
            bad.append((p, q))
        if cfg.model == "function" and chart.members:
            lhs = set(P_of(N, chart))
            rhs = set(P_of(marked_rep(p), chart)) & set(P_of(marked_rep(q), chart))
            if lhs != rhs:
                bad.append((p, q, "P(N1 ∩ N2)"))
    return CheckResult(not bad, bad[:3])


@check("topology", "union_recovery", "full A-convex sets are unions of their marked sets", models=COMMUTATIVE)
def _union_recovery(cfg, rng):
    model, chart = cfg.make_model(), cfg.make_chart()
    bad = []
    for p in chart.sample(rng, 20):
        N = marked_rep(p)
        for w in _points(cfg, rng, 50):
            rhs = marked_inside(N, minimal_seminorm(model, w).seminorm)[0]
            if (w in N) != rhs:
                bad.append((p, w))
    return CheckResult(not bad, bad[:3])


@check("topology", "strict_domination", "strict domination via compact connecting maps", models=COMMUTATIVE)
def _strict(cfg, rng):
    bad = []
    if cfg.model == "function":
        chart = cfg.make_chart()
        for p, q in zip(chart.sample(rng, 30), chart.sample(rng, 30)):
            if dominates(p, q) and not strictly_dominates(p, q):
                bad.append((p, q))
        return CheckResult(not bad, bad[:3])
    n = cfg.dim
    grid = [0.5, 1.0, 2.0]
    if n <= 2:
        import itertools

        vecs = list(itertools.product(grid, repeat=n))
    else:
        vecs = [tuple(rng.choice(grid, n)) for _ in range(12)]
    for r in vecs:
        for R in vecs:
            if not all(a <= b for a, b in zip(r, R)):
                continue
            w = strictly_dominates(WeightedL1(r), WeightedL1(R), cfg.horizon)
            analytic = all(a < b for a, b in zip(r, R))
            if w.strict != analytic or w.schauder != analytic:
                bad.append((r, R))
    return CheckResult(not bad, bad[:3], {"pairs": len(vecs) ** 2})


@check("topology", "basis_intersections", "U_Q opens form a basis", models=COMMUTATIVE)
def _basis(cfg, rng):
    bad = []
    if cfg.model == "function":
        k = cfg.dim
        for _ in range(30):
            opens = []
            for _ in range(2):
                S = sorted(np.flatnonzero(rng.random(k) < 0.6).tolist()) or [0]
                prefix = tuple(SubsetMax(k, frozenset(S[: j + 1])) for j in range(len(S)))
                opens.append(basis_open(Chain(prefix)))
            rep = intersection_agreement(opens, range(k))
            bad += rep.disagreements
        return CheckResult(not bad, bad[:3])
    n = cfg.dim
    pairs = 100 if n == 1 else 30
    pts = Whole(cfg.make_model(), 4.0).sample(rng, 1000 if n == 1 else 300)
    for _ in range(pairs):
        opens = []
        for _ in range(2):
            lim = rng.uniform(0.3, 3.0, n)
            if rng.random() < 0.1:
                lim = np.full(n, np.inf)
                start = rng.uniform(0.2, 1.0, n)
            else:
                start = lim * rng.uniform(0.2, 0.9, n)
            opens.append(basis_open(Chain.increasing_to(tuple(start), tuple(lim))))
        rep = intersection_agreement(opens, pts)
        bad += rep.disagreements
    return CheckResult(not bad, [repr(b) for b in bad[:3]], {"pairs": pairs, "points": len(pts)})


@check("topology", "chain_infimum", "infimum of a chain is a submultiplicative seminorm", models=COMMUTATIVE)
def _chain_inf(cfg, rng):
    if cfg.model == "entire":
        base = rng.uniform(0.5, 2.0, cfg.dim)
        chain = [WeightedL1(tuple(base * t)) for t in (1.0, 0.5, 0.25)]
    else:
        chain = [SubsetMax(cfg.dim, frozenset(range(j))) for j in range(cfg.dim, 0, -1)]
    _, rep = chain_infimum(chain, samples=100, seed=int(rng.integers(2**31)))
    ok = rep.max_identity_deviation < 1e-9 and rep.submultiplicative
    return CheckResult(ok, [], {"max_identity_deviation": rep.max_identity_deviation})


@check("topology", "schwartz", "the chart is a Schwartz space", models=COMMUTATIVE)
def _schwartz(cfg, rng):
    ok, wit = is_schwartz(cfg.make_chart(), seed=int(rng.integers(2**31)), horizon=cfg.horizon)
    return CheckResult(ok, [repr(wit)] if wit is not None else [])


# scheme

def _random_open(cfg, rng):
    model = cfg.make_model()
    if cfg.model == "function":
        return FinitePoints(model, np.flatnonzero(rng.random(cfg.dim) < 0.6).tolist())
    lim = rng.uniform(0.5, 3.0, cfg.dim)
    return basis_open(Chain.increasing_to(tuple(lim / 2), tuple(lim)))


def _shrink(cfg, U, rng):
    model = cfg.make_model()
    if cfg.model == "function":
        return FinitePoints(model, [i for i in U.points if rng.random() < 0.6])
    lim = np.asarray(U.chain.limit) * rng.uniform(0.3, 1.0, cfg.dim)
    return basis_open(Chain.increasing_to(tuple(lim / 2), tuple(lim)))


@check("scheme", "functoriality", "restriction is contravariantly functorial", models=COMMUTATIVE)
def _functorial(cfg, rng):
    model = cfg.make_model()
    sheaf = PresheafInstance(model, cfg.make_chart())
    bad = []
    for _ in range(20):
        U = _random_open(cfg, rng)
        V = _shrink(cfg, U, rng)
        W = _shrink(cfg, V, rng)
        f = sheaf.sections(U).section(model.random_element(rng))
        if not sheaf.restrict(sheaf.restrict(f, V), W).equals(sheaf.restrict(f, W)):
            bad.append("triple nesting")
    return CheckResult(not bad, bad[:3])


@check("scheme", "separatedness", "sections presheaf is separated", models=COMMUTATIVE)
def _separated(cfg, rng):
    model = cfg.make_model()
    sheaf = PresheafInstance(model, cfg.make_chart())
    bad, nulls, total = [], 0, 0
    for _ in range(25 if cfg.model == "function" else 10):
        cover = [_random_open(cfg, rng) for _ in range(2)]
        elements = [model.random_element(rng) for _ in range(20)]
        if cfg.model == "function":
            # sections vanishing on the cover's points are the null candidates
            inside = [i for i in range(cfg.dim) if any(i in U for U in cover)]
            for a in elements[:10]:
                a[inside] = 0
        else:
            elements[:5] = [Poly(cfg.dim)] * 5
        rep = separatedness_check(sheaf, cover, elements, seed=int(rng.integers(2**31)))
        bad += rep.counterexamples
        nulls += rep.null_sections
        total += rep.sections
    return CheckResult(not bad, [repr(b) for b in bad[:3]], {"sections": total, "null_sections": nulls})


@check("scheme", "completeness", "gluing compatible local sections", models=COMMUTATIVE)
def _complete(cfg, rng):
    model = cfg.make_model()
    sheaf = PresheafInstance(model, cfg.make_chart())
    bad = []
    for _ in range(10):
        cover = [_random_open(cfg, rng) for _ in range(2)]
        a = model.random_element(rng)
        family = [sheaf.sections(U).section(a) for U in cover]
        res = completeness_check(sheaf, cover, family)
        if not res.glues:
            bad.append(res.obstruction)
    return CheckResult(not bad, bad[:3])


@check("scheme", "spectrum", "characters of sections recover the open", models=COMMUTATIVE)
def _spectrum(cfg, rng):
    sheaf = PresheafInstance(cfg.make_model(), cfg.make_chart())
    bad = []
    for i in range(5):
        U = _random_open(cfg, rng)
        rep = spectrum_of_sections(sheaf, U, budget=100, seed=i)
        if not rep.passed:
            bad.append({"missing": rep.missing[:2], "extra": rep.extra[:2]})
    return CheckResult(not bad, bad[:3])


@check("scheme", "affine", "locality A|_U ≅ O_{A(U)}", models=COMMUTATIVE)
def _affine(cfg, rng):
    rep = verify_affine_scheme(cfg.make_model(), cfg.make_chart(), budget=max(10, 50 // cfg.dim ** 2), seed=int(rng.integers(2**31)))
    return CheckResult(rep.passed, rep.failures[:3], {"points": rep.points, "squares": rep.squares})


@check("scheme", "unital_sections", "section algebras are unital", models=COMMUTATIVE)
def _unital_sections(cfg, rng):
    sheaf = PresheafInstance(cfg.make_model(), cfg.make_chart())
    bad = []
    for _ in range(10):
        alg = sheaf.sections(_random_open(cfg, rng))
        for p in alg.nonzero_family(rng, 16):
            if abs(alg.one().value(p) - 1) > cfg.tol_rel:
                bad.append(p)
    return CheckResult(not bad, bad[:3])


# reconstruction

def _random_derivation(n, rng):
    model = EntireModel(n)
    return DerivationRep(tuple(model.random_element(rng, degree=2) for _ in range(n)))


@check("reconstruction", "leibniz", "derivations satisfy the Leibniz rule", models=("entire",))
def _leibniz(cfg, rng):
    model = cfg.make_model()
    worst = 0.0
    for _ in range(500):
        d = _random_derivation(cfg.dim, rng)
        a, b = model.random_element(rng, degree=3), model.random_element(rng, degree=3)
        worst = max(worst, leibniz_defect(d, a, b))
    return CheckResult(worst <= 1e-9, [], {"max_defect": worst})


@check("reconstruction", "cotangent", "cotangent basis and dual derivations", models=("entire",))
def _cotangent(cfg, rng):
    bad, worst = [], 0.0
    for _ in range(10):
        w0 = tuple(rng.standard_normal(cfg.dim) + 1j * rng.standard_normal(cfg.dim))
        cd = cotangent_space(w0)
        worst = max(worst, cd.pairing_error)
        if not cd.hypothesis_ok:
            bad.append(w0)
    return CheckResult(not bad and worst <= 1e-10, [repr(b) for b in bad[:3]], {"max_pairing_error": worst})


@check("reconstruction", "jacobian", "(psi∘phi)'(0) = Id", models=("entire",))
def _jacobian(cfg, rng):
    worst, fails = 0.0, 0
    for _ in range(50):
        w0 = tuple(rng.standard_normal(cfg.dim) + 1j * rng.standard_normal(cfg.dim))
        rep = jacobian_check(cotangent_space(w0), h=1e-4)
        worst = max(worst, rep.max_deviation)
        fails += not rep.passed
    return CheckResult(fails == 0, [], {"max_deviation": worst, "base_points": 50})


@check("reconstruction", "chart_multiplicative", "chart points are characters", models=("entire",))
def _chart_mult(cfg, rng):
    model = cfg.make_model()
    worst = 0.0
    for _ in range(10):
        w0 = tuple(rng.standard_normal(cfg.dim))
        phi = chart_phi(cotangent_space(w0), tuple(rng.uniform(-1, 1, cfg.dim)))
        for _ in range(5):
            a, b = model.random_element(rng, degree=3), model.random_element(rng, degree=3)
            worst = max(worst, abs(phi(a * b) - phi(a) * phi(b)) / max(1.0, abs(phi(a) * phi(b))))
    return CheckResult(worst <= 1e-8, [], {"max_defect": worst})


@check("reconstruction", "injectivity", "psi is injective on characters", models=("entire",))
def _inject(cfg, rng):
    n = cfg.dim
    pts = [tuple(rng.standard_normal(n) + 1j * rng.standard_normal(n)) for _ in range(100)]
    rep = injectivity_check([Poly.variable(n, i) for i in range(n)], pts)
    return CheckResult(rep.passed, rep.collisions[:3], {"min_separation": rep.min_separation})


@check("reconstruction", "exponentiability", "local exponentiability radii", models=("entire",))
def _expo(cfg, rng):
    n = cfg.dim
    z = Poly.variable(n, 0)
    one = (1.0,) * n
    flows = [
        (DerivationRep.partial(n, 0), math.inf),
        (DerivationRep(tuple(z if i == 0 else Poly(n) for i in range(n))), math.inf),
        (DerivationRep(tuple(z * z if i == 0 else Poly(n) for i in range(n))), 1.0),
    ]
    radii, ok = [], True
    for d, expected in flows:
        rep = exponentiability_probe(d, one, z, K=cfg.horizon)
        radii.append(rep.radius)
        if math.isinf(expected):
            ok &= math.isinf(rep.radius)
        else:
            ok &= abs(rep.radius - expected) <= 0.1 * expected and rep.cauchy
    return CheckResult(bool(ok), [], {"radii": radii})


@check("reconstruction", "hypotheses", "geometric hypotheses of the reconstruction theorem", models=("entire",))
def _hyp(cfg, rng):
    rep = geometric_hypotheses(cfg.dim, samples=8, seed=int(rng.integers(2**31)))
    return CheckResult(rep.passed, [], asdict(rep))


# running and reporting

def jsonable(x):
    """Deterministic JSON-friendly rendering of witnesses and margins."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (frozenset, set)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return float(f"{x:.12g}")
    if isinstance(x, (complex, np.complexfloating)):
        return [jsonable(x.real), jsonable(x.imag)]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if x is None or isinstance(x, str):
        return x
    return repr(x)


@dataclass
class SuiteReport:
    config: SuiteConfig
    records: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "skip": 0}
        for r in self.records:
            counts[r["verdict"]] += 1
        counts["mandatory_failures"] = sum(1 for r in self.records if r["verdict"] == "fail" and r["mandatory"])
        return counts

    @property
    def ok(self) -> bool:
        return self.summary["mandatory_failures"] == 0

    def body(self) -> dict:
        return {"schema": SCHEMA, "config": asdict(self.config), "records": self.records, "summary": self.summary}

    def body_text(self) -> str:
        return json.dumps(self.body(), sort_keys=True, indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        doc = dict(self.body())
        doc["timing"] = self.timing
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def selected_checks(cfg: SuiteConfig) -> list[Check]:
    return [c for c in REGISTRY if cfg.suite in ("all", c.suite)]


def run(cfg: SuiteConfig, log: Callable[[str], None] | None = None) -> SuiteReport:
    report = SuiteReport(cfg)
    started = time.time()
    elapsed = {}
    for c in selected_checks(cfg):
        t0 = time.perf_counter()
        if cfg.model not in c.models:
            res = CheckResult(True, [], {}, skipped=True)
        else:
            res = c.fn(cfg, np.random.default_rng(sub_seed(cfg.seed, c.id)))
        elapsed[c.id] = round(time.perf_counter() - t0, 4)
        verdict = "skip" if res.skipped else ("pass" if res.passed else "fail")
        mandatory = bool(c.mandatory(cfg)) and not res.skipped
        record = {
            "check": c.id,
            "anchor": c.anchor,
            "verdict": verdict,
            "mandatory": mandatory,
            "witnesses": jsonable(res.witnesses),
            "margins": jsonable(res.margins),
        }
        report.records.append(record)
        if log:
            log(f"{verdict.upper():4} {c.id}" + ("" if mandatory or verdict == "skip" else " (advisory)"))
    report.timing = {"started": started, "elapsed": elapsed}
    return report
