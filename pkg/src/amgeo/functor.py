"""Convex structures, spectral functors and coarse maps.

Two instantiations are provided: the Gelfand functor (points are characters,
``M_p`` the ``p``-continuous ones) and the pure-state functor (points are
pure-state functionals, ``M_p = A_p^* ∩ PS(A)``).  Marked sets are membership
predicates indexed by a seminorm; only C^k materialises them as point sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import EntireModel, FunctionModel, MatrixModel, Model, Poly, multi_indices
from .seminorms import (
    DEFAULT_RTOL,
    JoinSeminorm,
    ScaledOperatorNorm,
    Seminorm,
    SeminormChart,
    SubsetMax,
    SupSeminorm,
    WeightedL1,
    ZeroSeminorm,
    dominates,
    meet,
    probe_elements,
)
from .states import (
    E,
    Functional,
    dual_norm,
    evaluation_functional,
    numerical_radius,
    point_mass,
    pure_states_sample,
)

__all__ = [
    "MarkedSet",
    "gelfand_member",
    "GelfandCertificate",
    "gelfand_certificate",
    "gelfand_Mp",
    "pure_state_member",
    "pure_state_Mp",
    "SpectralFunctorInstance",
    "gelfand_functor",
    "pure_state_functor",
    "polydisc_points",
    "ConvexStructure",
    "ConvexReport",
    "verify_convex_structure",
    "AxiomReport",
    "verify_spectral_axioms",
    "AlgebraMorphism",
    "NotAMorphismError",
    "substitution_morphism",
    "coordinate_morphism",
    "identity_morphism",
    "PullbackSeminorm",
    "pullback",
    "CoarseMap",
    "coarse_map_from_morphism",
    "SAlgVerdict",
    "verify_salg_condition",
    "MarkedNormReport",
    "seminorm_from_marked_set",
    "separates_points",
]


@dataclass(frozen=True, eq=False)
class MarkedSet:
    """A marked subset ``M_p`` of the carrier: predicate plus index."""

    index: Seminorm
    contains: Callable[[object], bool]
    members: frozenset | None = None

    def __contains__(self, point) -> bool:
        return self.contains(point)


def gelfand_member(p: Seminorm, w, horizon: int = 64, rtol: float = DEFAULT_RTOL) -> bool:
    """Is the character at ``w`` (or index ``w``) ``p``-continuous?

    For a submultiplicative ``p`` continuity means ``|chi(a)| <= p(a)``; on
    weighted l1 norms and their joins it suffices to test monomials.
    """
    if isinstance(p, ZeroSeminorm):
        return False
    if isinstance(p, SubsetMax):
        return int(w) in p.subset
    if isinstance(p, WeightedL1):
        return all(abs(complex(x)) <= r * (1 + rtol) for x, r in zip(w, p.weights))
    if isinstance(p, (JoinSeminorm, SupSeminorm)) and isinstance(p.model, EntireModel):
        if any(gelfand_member(q, w, horizon, rtol) for q in p.parts):
            return True
        mods = [abs(complex(x)) for x in w]
        for alpha in multi_indices(len(mods), horizon, 1):
            val = math.prod(m**a for m, a in zip(mods, alpha))
            if val > p(Poly.monomial(alpha)) * (1 + rtol):
                return False
        return True
    model = p.model
    if isinstance(model, EntireModel):
        probes = probe_elements(model, np.random.default_rng(0), 64, degree=8)
        return all(abs(a(w)) <= p(a) * (1 + rtol) + 1e-300 for a in probes)
    if isinstance(model, FunctionModel):
        probes = probe_elements(model, np.random.default_rng(0), 64)
        return all(abs(a[int(w)]) <= p(a) * (1 + rtol) for a in probes)
    raise TypeError("characters are only modelled on commutative models")


@dataclass(frozen=True)
class GelfandCertificate:
    member: bool
    dominating_weights: tuple[float, ...] | None = None
    witness: Poly | None = None
    growth: tuple[float, ...] = ()


def gelfand_certificate(p: WeightedL1, w: Sequence[complex], horizon: int = 64) -> GelfandCertificate:
    """Both directions of the polydisc characterisation.

    Member: ``|chi_w(f)| <= p_{|w|}(f) <= p_r(f)`` with ``|w| <= r``.
    Non-member: for ``|w_j| > r_j`` the ratios ``|w_j|^k / r_j^k`` along
    ``z_j^k`` grow without bound.
    """
    mods = tuple(abs(complex(x)) for x in w)
    for j, (m, r) in enumerate(zip(mods, p.weights)):
        if m > r * (1 + DEFAULT_RTOL):
            alpha = [0] * len(mods)
            alpha[j] = horizon
            growth = tuple((m / r) ** k if r > 0 else math.inf for k in range(1, horizon + 1))
            return GelfandCertificate(False, witness=Poly.monomial(alpha), growth=growth)
    return GelfandCertificate(True, dominating_weights=mods)


def gelfand_Mp(p: Seminorm) -> MarkedSet:
    if isinstance(p, SubsetMax):
        return MarkedSet(p, lambda i: int(i) in p.subset, frozenset(p.subset))
    if isinstance(p.model, MatrixModel):
        raise TypeError("the Gelfand functor needs a commutative model")
    return MarkedSet(p, lambda w: gelfand_member(p, w))


def _character_point(f: Functional, tol: float = 1e-9):
    """The point ``w`` if the moment table of ``f`` is multiplicative, else ``None``."""
    n = f.model.n
    zero = (0,) * n
    if abs(f.data.get(zero, 0) - 1) > tol:
        return None
    w = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        w.append(f.data.get(tuple(e), 0j))
    for alpha, v in f.data.items():
        expected = math.prod(x**a for x, a in zip(w, alpha))
        if abs(v - expected) > tol * max(1.0, abs(expected)):
            return None
    return tuple(w)


def pure_state_member(p: Seminorm, f: Functional, tol: float = 1e-9) -> bool:
    """``f`` in ``A_p^* ∩ PS(A)``: a pure state that is ``p``-bounded."""
    model = f.model
    if isinstance(model, EntireModel):
        w = _character_point(f, tol)
        return w is not None and gelfand_member(p, w)
    if isinstance(model, FunctionModel):
        lam = np.asarray(f.data)
        nz = np.flatnonzero(np.abs(lam) > tol)
        if nz.size != 1 or abs(lam[nz[0]] - 1) > tol:
            return False
        return math.isfinite(dual_norm(f, p))
    if isinstance(model, MatrixModel):
        rho = np.asarray(f.data)
        if np.abs(rho - rho.conj().T).max() > tol or abs(np.trace(rho) - 1) > tol:
            return False
        ev = np.linalg.eigvalsh(rho)
        return bool(ev.min() > -tol and np.sum(ev > tol) == 1 and math.isfinite(dual_norm(f, p)))
    raise TypeError("unknown model")


def pure_state_Mp(p: Seminorm) -> MarkedSet:
    members = None
    if isinstance(p, SubsetMax):
        members = frozenset(p.subset)
    return MarkedSet(p, lambda f: pure_state_member(p, f), members)


def polydisc_points(radii: Sequence[float], rng: np.random.Generator, count: int, boundary: float = 0.3) -> list:
    """Points of the closed polydisc; a fraction lies on the distinguished boundary."""
    radii = np.asarray(radii, dtype=float)
    pts = []
    for _ in range(count):
        if rng.random() < boundary:
            rad = radii.copy()
        else:
            rad = radii * np.sqrt(rng.uniform(0, 1, radii.size))
        w = rad * np.exp(2j * np.pi * rng.uniform(0, 1, radii.size))
        pts.append(tuple(complex(x) for x in w))
    return pts


@dataclass(frozen=True, eq=False)
class SpectralFunctorInstance:
    """``p -> M_p`` on one model and chart; ``tag`` is "gelfand" or "pure-state"."""

    model: Model
    chart: SeminormChart
    tag: str = "gelfand"
    degree: int = 16  # moment-table truncation for pure-state points on polynomials

    def marked_set(self, p: Seminorm) -> MarkedSet:
        if self.tag == "gelfand":
            return gelfand_Mp(p)
        return pure_state_Mp(p)

    def member(self, p: Seminorm, point) -> bool:
        if self.tag == "gelfand":
            return gelfand_member(p, point)
        return pure_state_member(p, point)

    def carrier(self) -> list | None:
        """All points when the carrier is finite."""
        if isinstance(self.model, FunctionModel):
            if self.tag == "gelfand":
                return list(range(self.model.k))
            return [point_mass(self.model, i) for i in range(self.model.k)]
        return None

    def _wrap(self, pts: list) -> list:
        if self.tag == "gelfand" or not isinstance(self.model, EntireModel):
            return pts
        return [evaluation_functional(self.model, w, self.degree) for w in pts]

    def sample_points(self, rng: np.random.Generator, count: int, within: Seminorm | None = None, radius: float = 12.0):
        """Points of ``M_within`` (or of a large box when ``within`` is None)."""
        finite = self.carrier()
        if finite is not None:
            if within is None:
                return finite
            return [pt for pt in finite if self.member(within, pt)]
        if isinstance(self.model, EntireModel):
            if within is None:
                return self._wrap(polydisc_points([radius] * self.model.n, rng, count, boundary=0.0))
            if isinstance(within, WeightedL1):
                return self._wrap(polydisc_points(within.weights, rng, count))
            box = polydisc_points([radius] * self.model.n, rng, count * 4, boundary=0.0)
            return self._wrap([w for w in box if gelfand_member(within, w)][:count])
        if isinstance(self.model, MatrixModel):
            return pure_states_sample(ScaledOperatorNorm(self.model.n), count, int(rng.integers(2**31)))
        raise TypeError("unknown model")

    def cover_index(self, point) -> Seminorm:
        """A chart member whose marked set contains ``point``."""
        if isinstance(self.model, FunctionModel):
            i = point if self.tag == "gelfand" else int(np.flatnonzero(np.abs(point.data) > 0)[0])
            return SubsetMax(self.model.k, frozenset([int(i)]))
        if isinstance(self.model, EntireModel):
            w = point if self.tag == "gelfand" else _character_point(point)
            return WeightedL1(tuple(max(abs(complex(x)), 1e-12) for x in w))
        return ScaledOperatorNorm(self.model.n)


def gelfand_functor(chart: SeminormChart) -> SpectralFunctorInstance:
    if isinstance(chart.model, MatrixModel):
        raise TypeError("the Gelfand functor needs a commutative model")
    return SpectralFunctorInstance(chart.model, chart, "gelfand")


def pure_state_functor(chart: SeminormChart, degree: int = 16) -> SpectralFunctorInstance:
    return SpectralFunctorInstance(chart.model, chart, "pure-state", degree)


@dataclass(frozen=True, eq=False)
class ConvexStructure:
    """A family of marked subsets of a carrier.

    Either finite (``carrier`` and ``sets`` given explicitly) or parametric:
    ``sigma = {M_p : p in chart}`` for a functor instance.
    """

    carrier: frozenset | None = None
    sets: tuple[frozenset, ...] = ()
    instance: SpectralFunctorInstance | None = None

    @classmethod
    def from_instance(cls, inst: SpectralFunctorInstance) -> "ConvexStructure":
        if inst.chart.members and isinstance(inst.model, FunctionModel) and inst.tag == "gelfand":
            sets = tuple(frozenset(p.subset) for p in inst.chart.members)
            return cls(frozenset(range(inst.model.k)), sets, inst)
        return cls(None, (), inst)


@dataclass(frozen=True)
class ConvexReport:
    covers: bool
    directed: bool
    intersections: bool
    witnesses: dict = field(default_factory=dict)
    exact: bool = False

    @property
    def passed(self) -> bool:
        return self.covers and self.directed and self.intersections


def verify_convex_structure(cs: ConvexStructure, budget: int = 200, seed: int = 0) -> ConvexReport:
    """Covering, directedness and closure under finite intersections."""
    if cs.carrier is not None:
        return _verify_finite(cs)
    inst = cs.instance
    rng = np.random.default_rng(seed)
    wit = {}
    covers = True
    for pt in inst.sample_points(rng, budget):
        if not inst.member(inst.cover_index(pt), pt):
            covers = False
            wit["covers"] = pt
            break
    directed = intersections = True
    pairs = max(1, budget // 20)
    for _ in range(pairs):
        p, q = inst.chart.sample(rng, 2)
        u = inst.chart.upper_bound(p, q)
        for pt in inst.sample_points(rng, 10, p) + inst.sample_points(rng, 10, q):
            if not inst.member(u, pt):
                directed = False
                wit.setdefault("directed", (p, q, pt))
        m = inst.chart.meet(p, q)
        pts = inst.sample_points(rng, 10, p) + inst.sample_points(rng, 10, q) + inst.sample_points(rng, 10)
        for pt in pts:
            if inst.member(m, pt) != (inst.member(p, pt) and inst.member(q, pt)):
                intersections = False
                wit.setdefault("intersections", (p, q, pt))
    return ConvexReport(covers, directed, intersections, wit, exact=False)


def _verify_finite(cs: ConvexStructure) -> ConvexReport:
    sets = set(cs.sets)
    wit = {}
    union = frozenset().union(*sets) if sets else frozenset()
    covers = union >= cs.carrier
    if not covers:
        wit["covers"] = min(cs.carrier - union)
    directed = True
    for a in sets:
        for b in sets:
            if not any(c >= a | b for c in sets):
                directed = False
                wit.setdefault("directed", (a, b))
    intersections = all(a & b in sets for a in sets for b in sets)
    if not intersections:
        wit["intersections"] = next((a, b) for a in sets for b in sets if a & b not in sets)
    return ConvexReport(covers, directed, intersections, wit, exact=True)


@dataclass(frozen=True)
class AxiomReport:
    pairs: int
    containment_failures: list
    meet_failures: list
    exact: bool
    points_checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.containment_failures and not self.meet_failures


def _contained(inst: SpectralFunctorInstance, p, q, rng, points: int):
    """``M_p ⊆ M_q``: exact on finite carriers, else by points sampled in ``M_p``."""
    finite = inst.carrier()
    pts = [x for x in finite if inst.member(p, x)] if finite is not None else inst.sample_points(rng, points, p)
    for x in pts:
        if not inst.member(q, x):
            return False, x, len(pts)
    return True, None, len(pts)


def verify_spectral_axioms(
    inst: SpectralFunctorInstance,
    pairs: Iterable[tuple[Seminorm, Seminorm]],
    points: int = 1000,
    seed: int = 0,
) -> AxiomReport:
    """``M_p ⊆ M_q`` iff ``p ≼ q``, and ``M_{p∧q} = M_p ∩ M_q``, per pair."""
    rng = np.random.default_rng(seed)
    finite = inst.carrier()
    cont_fail, meet_fail = [], []
    count = checked = 0
    for p, q in pairs:
        count += 1
        inside, pt, n = _contained(inst, p, q, rng, points)
        checked += n
        dom = dominates(p, q)
        if inside != bool(dom) or dom.verdict == "unknown":
            cont_fail.append((p, q, inside, dom.verdict, pt))
        m = inst.chart.meet(p, q)
        if finite is not None:
            pts = finite
        else:
            third = max(1, points // 3)
            pts = inst.sample_points(rng, third, p) + inst.sample_points(rng, third, q) + inst.sample_points(rng, third, m)
        checked += len(pts)
        for x in pts:
            if inst.member(m, x) != (inst.member(p, x) and inst.member(q, x)):
                meet_fail.append((p, q, x))
                break
    return AxiomReport(count, cont_fail, meet_fail, finite is not None, checked)


class NotAMorphismError(ValueError):
    def __init__(self, msg: str, witness):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    """A unital algebra morphism ``phi: source -> target`` (``B -> A``)."""

    source: Model
    target: Model
    fn: Callable
    scaling: tuple | None = None  # (weights factor, permutation) for monomial substitutions
    mapping: tuple[int, ...] | None = None  # coordinate maps on C^k

    def __call__(self, b):
        self.source.check(b)
        out = self.fn(b)
        self.target.check(out)
        return out

    def compose(self, inner: "AlgebraMorphism") -> "AlgebraMorphism":
        """``self ∘ inner``."""
        if inner.target != self.source:
            raise ValueError("morphisms are not composable")
        mapping = None
        if self.mapping is not None and inner.mapping is not None:
            mapping = tuple(inner.mapping[j] for j in self.mapping)
        return AlgebraMorphism(inner.source, self.target, lambda c: self.fn(inner.fn(c)), None, mapping)

    def check(self, rng: np.random.Generator, samples: int = 20, tol: float = 1e-9) -> None:
        """Sampled unitality and multiplicativity; raises :class:`NotAMorphismError`."""
        src, tgt = self.source, self.target
        if not _close(tgt, self(src.one()), tgt.one(), tol):
            raise NotAMorphismError("not unital", src.one())
        for _ in range(samples):
            a, b = src.random_element(rng), src.random_element(rng)
            lhs = self(src.mul(a, b))
            rhs = tgt.mul(self(a), self(b))
            if not _close(tgt, lhs, rhs, tol):
                raise NotAMorphismError("not multiplicative", (a, b))


def _close(model: Model, x, y, tol: float) -> bool:
    if isinstance(model, EntireModel):
        scale = max([1.0] + [abs(c) for c in x.terms.values()])
        return x.allclose(y, tol * scale)
    return bool(np.allclose(x, y, atol=tol * max(1.0, float(np.max(np.abs(x)))), rtol=0))


def substitution_morphism(images: Sequence[Poly]) -> AlgebraMorphism:
    """``C[u_1..u_m] -> C[z_1..z_n]``, ``u_i -> images[i]``."""
    images = tuple(images)
    src, tgt = EntireModel(len(images)), EntireModel(images[0].n)
    scaling = None
    perm = []
    factors = []
    for g in images:
        if len(g.terms) == 1:
            (alpha, c), = g.terms.items()
            if sum(alpha) == 1:
                perm.append(alpha.index(1))
                factors.append(abs(c))
                continue
        break
    else:
        if len(set(perm)) == len(perm):
            scaling = (tuple(factors), tuple(perm))
    return AlgebraMorphism(src, tgt, lambda b: b.substitute(images), scaling)


def coordinate_morphism(source_k: int, mapping: Sequence[int]) -> AlgebraMorphism:
    """``C^{k_B} -> C^{k_A}``, ``phi(b)_j = b_{mapping[j]}``."""
    mapping = tuple(int(m) for m in mapping)
    if any(not 0 <= m < source_k for m in mapping):
        raise ValueError("mapping points outside the source")
    idx = np.array(mapping, dtype=int)
    return AlgebraMorphism(FunctionModel(source_k), FunctionModel(len(mapping)), lambda b: b[idx], None, mapping)


def identity_morphism(model: Model) -> AlgebraMorphism:
    mapping = tuple(range(model.k)) if isinstance(model, FunctionModel) else None
    scaling = ((1.0,) * model.n, tuple(range(model.n))) if isinstance(model, EntireModel) else None
    return AlgebraMorphism(model, model, lambda b: b, scaling, mapping)


@dataclass(frozen=True, eq=False)
class PullbackSeminorm(Seminorm):
    base: Seminorm
    morphism: AlgebraMorphism

    @property
    def model(self) -> Model:
        return self.morphism.source

    def _eval(self, b) -> float:
        return self.base(self.morphism(b))


def pullback(p: Seminorm, phi: AlgebraMorphism) -> Seminorm:
    """``p ∘ phi`` on the source of ``phi``, as a chart member when exact."""
    if p.model != phi.target:
        raise ValueError("seminorm does not live on the morphism's target")
    if isinstance(p, SubsetMax) and phi.mapping is not None:
        return SubsetMax(phi.source.k, frozenset(phi.mapping[j] for j in p.subset))
    if isinstance(p, WeightedL1) and phi.scaling is not None:
        factors, perm = phi.scaling
        return WeightedL1(tuple(f * p.weights[j] for f, j in zip(factors, perm)))
    return PullbackSeminorm(p, phi)


@dataclass(frozen=True, eq=False)
class CoarseMap:
    """Index-level functor ``M_p(A) -> M_{p∘phi}(B)`` induced by ``phi: B -> A``."""

    morphism: AlgebraMorphism
    source: SpectralFunctorInstance  # on A
    target: SpectralFunctorInstance  # on B

    def index_map(self, p: Seminorm) -> Seminorm:
        return pullback(p, self.morphism)

    def __call__(self, p: Seminorm) -> MarkedSet:
        return self.target.marked_set(self.index_map(p))

    def check_inclusions(self, pairs: Iterable[tuple[Seminorm, Seminorm]], points: int = 200, seed: int = 0) -> list:
        """Pairs ``p ≼ q`` with ``M_{p∘phi} ⊄ M_{q∘phi}`` (empty list when functorial)."""
        rng = np.random.default_rng(seed)
        bad = []
        for p, q in pairs:
            if not dominates(p, q):
                continue
            ok, pt, _ = _contained(self.target, self.index_map(p), self.index_map(q), rng, points)
            if not ok:
                bad.append((p, q, pt))
        return bad


def coarse_map_from_morphism(
    phi: AlgebraMorphism,
    source: SpectralFunctorInstance,
    target: SpectralFunctorInstance,
    seed: int = 0,
) -> CoarseMap:
    phi.check(np.random.default_rng(seed))
    return CoarseMap(phi, source, target)


@dataclass(frozen=True)
class SAlgVerdict:
    passed: bool
    exact: bool
    caveat: bool
    worst_direction: tuple | None = None  # lowest-degree direction where the cones differ
    worst_ratio: float = 1.0  # largest ratio up to the probed degree
    growth: tuple[float, ...] = ()


def verify_salg_condition(p: Seminorm, q: Seminorm, degree: int = 16, rtol: float = DEFAULT_RTOL) -> SAlgVerdict:
    """Compare ``A_p^* ∩ A_q^*`` with ``A_{p∧q}^*`` (chart meet) along dual basis directions.

    A functional bounded by 1 for both ``p`` and ``q`` may put mass
    ``min(p(z^a), q(z^a))`` on the monomial direction ``a``; one bounded for the
    meet only ``(p∧q)(z^a)``.  Their ratio must stay bounded (it is 1 exactly
    when the cones coincide).  ``growth`` lists the ratio along multiples of
    the worst direction.
    """
    m = meet(p, q)
    if isinstance(p, SubsetMax):
        # bounded for q_S iff supported in S; for both iff in S ∩ T
        ok = all(((i in p.subset) and (i in q.subset)) == (i in m.subset) for i in range(p.k))
        return SAlgVerdict(ok, True, False)
    if isinstance(p, ScaledOperatorNorm):
        return SAlgVerdict(True, True, False)
    if not isinstance(p, WeightedL1):
        raise TypeError("sAlg comparison is implemented for chart seminorms")
    n = len(p.weights)
    worst, worst_alpha = 1.0, None
    for alpha in multi_indices(n, degree, 1):
        mono = Poly.monomial(alpha)
        inter = min(p(mono), q(mono))
        mm = m(mono)
        ratio = inter / mm if mm > 0 else (math.inf if inter > 0 else 1.0)
        if ratio > 1 + rtol and worst_alpha is None:
            worst_alpha = alpha  # lowest-degree discrepancy
        worst = max(worst, ratio)
    growth = ()
    if worst_alpha is not None:
        growth = tuple(
            min(p(Poly.monomial([k * a for a in worst_alpha])), q(Poly.monomial([k * a for a in worst_alpha])))
            / m(Poly.monomial([k * a for a in worst_alpha]))
            for k in range(1, 9)
        )
    passed = worst <= 1 + rtol
    return SAlgVerdict(passed, n == 1, n >= 2, worst_alpha, worst, growth)


@dataclass(frozen=True)
class MarkedNormReport:
    value: float  # p(a)
    marked_sup: float
    lower_ok: bool
    upper_ok: bool
    certified: bool  # whether the upper bound is asserted for this model

    @property
    def passed(self) -> bool:
        return self.lower_ok and (self.upper_ok or not self.certified)

    @property
    def ratio(self) -> float:
        return self.value / self.marked_sup if self.marked_sup else math.inf


def seminorm_from_marked_set(p: Seminorm, a, samples: int = 512, seed: int = 0, rtol: float = DEFAULT_RTOL) -> MarkedNormReport:
    """``||a||_{M_p} = sup_{f in M_p} |f(a)|`` against ``p(a)``.

    Checks ``||a||_{M_p} <= p(a) <= e ||a||_{M_p}``.  On matrices the supremum
    over vector states is the numerical radius; on C^k it is exact.  On
    polynomials the marked set holds characters only, whose supremum is the
    polydisc maximum modulus; there the upper bound is reported but not
    certified (weighted l1 norms are not equivalent to sup norms uniformly in
    the degree).
    """
    val = p(a)
    if isinstance(p, ScaledOperatorNorm):
        sampled = max(abs(f(a)) for f in pure_states_sample(p, samples, seed))
        sup = max(sampled, numerical_radius(a, 720))
        certified = p.scale == 1.0
    elif isinstance(p, SubsetMax):
        sup = max((abs(a[i]) for i in p.subset), default=0.0)
        certified = True
    elif isinstance(p, WeightedL1):
        n = len(p.weights)
        per_axis = max(8, int(round(samples ** (1.0 / n))))
        theta = 2 * np.pi * np.arange(per_axis) / per_axis
        grids = np.meshgrid(*[r * np.exp(1j * theta) for r in p.weights], indexing="ij")
        pts = np.stack([g.reshape(-1) for g in grids], axis=1)
        sup = max(abs(a(w)) for w in pts)  # maximum modulus sits on the distinguished boundary
        certified = False
    else:
        raise TypeError(f"unsupported seminorm {type(p).__name__}")
    lower = sup <= val * (1 + rtol) + 1e-12
    upper = val <= E * sup * (1 + rtol)
    return MarkedNormReport(val, float(sup), lower, upper, certified)


def separates_points(inst: SpectralFunctorInstance, elements: Iterable, count: int = 64, seed: int = 0, tol: float = 1e-12):
    """Elements on which every sampled pure state vanishes (empty when pure states separate)."""
    rng = np.random.default_rng(seed)
    model = inst.model
    if isinstance(model, EntireModel):
        p = WeightedL1((1.0,) * model.n)
    elif isinstance(model, FunctionModel):
        p = SubsetMax(model.k, frozenset(range(model.k)))
    else:
        p = ScaledOperatorNorm(model.n)
    states = None
    failures = []
    for a in elements:
        if isinstance(model, EntireModel):
            states = pure_states_sample(p, count, int(rng.integers(2**31)), max(a.degree, 0))
        elif states is None:
            states = pure_states_sample(p, max(count, model.dim), seed)
        if not any(abs(f(a)) > tol for f in states):
            failures.append(a)
    return failures
