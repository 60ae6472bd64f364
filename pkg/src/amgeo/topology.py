"""Minimal seminorms, full and A-convex sets, strict domination and the U_Q basis.

Everything here lives on the Gelfand carrier: points are tuples of complex
numbers for polynomials and integer indices for C^k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import EntireModel, FunctionModel, MatrixModel, Model, multi_indices
from .functor import gelfand_member, polydisc_points
from .seminorms import (
    DEFAULT_RTOL,
    InfSeminorm,
    JoinSeminorm,
    NotDominatedError,
    Seminorm,
    SeminormChart,
    SubsetMax,
    WeightedL1,
    ZeroSeminorm,
    dominates,
    join,
    meet,
    pointwise_le,
    probe_elements,
)

__all__ = [
    "MinimalSeminormResult",
    "minimal_seminorm",
    "NotTotallyOrderedError",
    "ChainInfimumReport",
    "chain_infimum",
    "SubsetRep",
    "FinitePoints",
    "Polydisc",
    "Annulus",
    "Whole",
    "EmptySet",
    "UnionRep",
    "IntersectionRep",
    "marked_rep",
    "marked_points",
    "marked_inside",
    "polydisc_bounds",
    "polydisc_contained",
    "full_closure",
    "FullVerdict",
    "is_full",
    "PredicateFamily",
    "P_of",
    "AConvexVerdict",
    "is_A_convex",
    "StrictDominationWitness",
    "strictly_dominates",
    "Chain",
    "is_strictly_increasing",
    "is_schwartz",
    "NotStrictlyIncreasingError",
    "BasisOpen",
    "basis_open",
    "intersect_basis_opens",
    "IntersectionAgreement",
    "intersection_agreement",
]


def _moduli(w) -> np.ndarray:
    return np.abs(np.asarray(w, dtype=complex))


@dataclass(frozen=True)
class MinimalSeminormResult:
    point: object
    seminorm: Seminorm
    certificate: tuple = ()  # (smaller chart seminorm, whether it still contains the point)

    @property
    def certified(self) -> bool:
        return all(not inside for _, inside in self.certificate)


def minimal_seminorm(model: Model, m, samples: int = 16, seed: int = 0) -> MinimalSeminormResult:
    """The smallest chart seminorm whose marked set contains ``m``.

    Polynomials: weights ``|w|``; any weight vector lowering a coordinate
    below ``|w_i|`` loses the point.  C^k: ``q_{{i}}``.
    """
    if isinstance(model, FunctionModel):
        p = SubsetMax(model.k, frozenset([int(m)]))
        empty = SubsetMax(model.k, frozenset())
        return MinimalSeminormResult(int(m), p, ((empty, gelfand_member(empty, m)),))
    if not isinstance(model, EntireModel):
        raise TypeError("minimal seminorms are defined on commutative models")
    mods = _moduli(m)
    p = WeightedL1(tuple(mods))
    rng = np.random.default_rng(seed)
    cert = []
    positive = np.flatnonzero(mods > 0)
    for _ in range(samples if positive.size else 0):
        r = mods * rng.uniform(0.0, 1.0, mods.size)
        r = np.minimum(r, mods)
        i = positive[rng.integers(positive.size)]
        r[i] = mods[i] * rng.uniform(0.0, 1.0 - 1e-6)
        q = WeightedL1(tuple(r))
        cert.append((q, gelfand_member(q, m)))
    return MinimalSeminormResult(tuple(complex(x) for x in m), p, tuple(cert))


class NotTotallyOrderedError(ValueError):
    def __init__(self, msg: str, witness):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class ChainInfimumReport:
    pairs: int
    max_identity_deviation: float
    submultiplicative: bool


def chain_infimum(chain: Sequence[Seminorm], samples: int = 100, seed: int = 0, elements: Iterable | None = None):
    """Pointwise infimum of a totally ordered family, with the additivity identity.

    For a chain, ``inf_q (q(a) + q(b)) = inf_q q(a) + inf_q q(b)``; the report
    gives the largest deviation over sampled pairs and whether the infimum is
    submultiplicative on them.
    """
    chain = list(chain)
    if not chain:
        raise ValueError("empty chain")
    rng = np.random.default_rng(seed)
    model = chain[0].model
    probes = probe_elements(model, rng, 32)
    for i, p in enumerate(chain):
        for q in chain[i + 1:]:
            if pointwise_le(p, q, probes) is not None and pointwise_le(q, p, probes) is not None:
                raise NotTotallyOrderedError(f"{p!r} and {q!r} are incomparable", (p, q))
    inf = chain[0] if len(chain) == 1 else InfSeminorm(tuple(chain))
    pool = list(elements) if elements is not None else model.sample_elements(rng, 2 * samples)
    dev, submult, pairs = 0.0, True, 0
    for a, b in zip(pool[::2], pool[1::2]):
        pairs += 1
        lhs = min(q(a) + q(b) for q in chain)
        rhs = inf(a) + inf(b)
        dev = max(dev, abs(lhs - rhs) / max(1.0, abs(rhs)))
        if inf(model.mul(a, b)) > inf(a) * inf(b) * (1 + DEFAULT_RTOL) + 1e-12:
            submult = False
    return inf, ChainInfimumReport(pairs, dev, submult)


class SubsetRep:
    """A subset of the Gelfand carrier with a total membership predicate."""

    model: Model
    full_hint: bool = False  # known to be full, so marked-set containment reduces to the corner

    def __contains__(self, w) -> bool:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, count: int) -> list:
        raise NotImplementedError

    def seed_seminorms(self) -> list[Seminorm]:
        """Natural chart members inside the set (used to seed A-convexity searches)."""
        return []


@dataclass(frozen=True)
class FinitePoints(SubsetRep):
    model: Model
    points: tuple

    def __post_init__(self):
        if isinstance(self.model, FunctionModel):
            object.__setattr__(self, "points", tuple(sorted({int(i) for i in self.points})))
        else:
            object.__setattr__(self, "points", tuple(tuple(complex(x) for x in w) for w in self.points))

    @property
    def full_hint(self) -> bool:
        return isinstance(self.model, FunctionModel)

    def __contains__(self, w) -> bool:
        if isinstance(self.model, FunctionModel):
            return int(w) in self.points
        return any(np.allclose(w, m, rtol=0, atol=1e-12) for m in self.points)

    def sample(self, rng, count):
        return list(self.points)

    def seed_seminorms(self):
        if isinstance(self.model, FunctionModel):
            return [SubsetMax(self.model.k, frozenset(self.points))]
        return []


@dataclass(frozen=True)
class Polydisc(SubsetRep):
    radii: tuple[float, ...]
    closed: bool = True
    full_hint = True

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))

    @property
    def model(self) -> EntireModel:
        return EntireModel(len(self.radii))

    def __contains__(self, w) -> bool:
        m = _moduli(w)
        r = np.asarray(self.radii)
        if self.closed:
            return bool(np.all(m <= r * (1 + DEFAULT_RTOL)))
        return bool(np.all(m < r))

    def sample(self, rng, count):
        r = np.asarray(self.radii, dtype=float)
        if not np.all(np.isfinite(r)):
            r = np.where(np.isfinite(r), r, 12.0)
        if not self.closed:
            r = r * (1 - 1e-9)
        return polydisc_points(r, rng, count)

    def seed_seminorms(self):
        if self.closed and all(math.isfinite(x) for x in self.radii):
            return [WeightedL1(self.radii)]
        return []


@dataclass(frozen=True)
class Annulus(SubsetRep):
    inner: float
    outer: float
    model: Model = EntireModel(1)

    def __contains__(self, w) -> bool:
        m = float(_moduli(w)[0])
        return self.inner * (1 - DEFAULT_RTOL) <= m <= self.outer * (1 + DEFAULT_RTOL)

    def sample(self, rng, count):
        rad = rng.uniform(self.inner, self.outer, count)
        rad[: max(1, count // 4)] = self.outer
        return [(complex(r * np.exp(2j * np.pi * rng.random())),) for r in rad]


@dataclass(frozen=True)
class Whole(SubsetRep):
    model: Model
    radius: float = 12.0  # sampling box for polynomials
    full_hint = True

    def __contains__(self, w) -> bool:
        return True

    def sample(self, rng, count):
        if isinstance(self.model, FunctionModel):
            return list(range(self.model.k))
        return polydisc_points([self.radius] * self.model.n, rng, count, boundary=0.0)

    def seed_seminorms(self):
        if isinstance(self.model, FunctionModel):
            return [SubsetMax(self.model.k, frozenset(range(self.model.k)))]
        return [WeightedL1((1.0,) * self.model.n)]


@dataclass(frozen=True)
class EmptySet(SubsetRep):
    model: Model
    full_hint = True

    def __contains__(self, w) -> bool:
        return False

    def sample(self, rng, count):
        return []


@dataclass(frozen=True)
class UnionRep(SubsetRep):
    parts: tuple[SubsetRep, ...]

    @property
    def model(self) -> Model:
        return self.parts[0].model

    @property
    def full_hint(self) -> bool:
        return all(p.full_hint for p in self.parts)

    def __contains__(self, w) -> bool:
        return any(w in p for p in self.parts)

    def sample(self, rng, count):
        per = max(1, count // len(self.parts))
        return [x for p in self.parts for x in p.sample(rng, per)]

    def seed_seminorms(self):
        return [s for p in self.parts for s in p.seed_seminorms()]


@dataclass(frozen=True)
class IntersectionRep(SubsetRep):
    parts: tuple[SubsetRep, ...]

    @property
    def model(self) -> Model:
        return self.parts[0].model

    @property
    def full_hint(self) -> bool:
        return all(p.full_hint for p in self.parts)

    def __contains__(self, w) -> bool:
        return all(w in p for p in self.parts)

    def sample(self, rng, count):
        if isinstance(self.model, FunctionModel):
            return [i for i in range(self.model.k) if i in self]
        if all(isinstance(p, Polydisc) for p in self.parts):
            closed = all(p.closed for p in self.parts)
            return Polydisc(tuple(np.min([p.radii for p in self.parts], axis=0)), closed).sample(rng, count)
        out = []
        for p in self.parts:
            out += [x for x in p.sample(rng, count) if x in self]
        return out[:count]

    def seed_seminorms(self):
        seeds = [s for p in self.parts for s in p.seed_seminorms()]
        return [s for s in seeds if marked_inside(self, s)[0]]


def marked_rep(p: Seminorm) -> SubsetRep:
    """``M_p`` as a subset representation."""
    if isinstance(p, SubsetMax):
        return FinitePoints(p.model, tuple(p.subset))
    if isinstance(p, WeightedL1):
        return Polydisc(p.weights)
    if isinstance(p, ZeroSeminorm):
        return EmptySet(p.model)
    raise TypeError(f"no subset representation for {type(p).__name__}")


def marked_points(p: Seminorm, rng: np.random.Generator, count: int) -> list:
    """Points of ``M_p`` including its extreme boundary.

    For a join of weighted l1 norms the marked set contains every point whose
    moduli are log-convex combinations of the part weights; these include
    points outside the union of the part polydiscs.
    """
    if isinstance(p, WeightedL1):
        radial = [tuple(complex(t * r) for r in p.weights) for t in np.linspace(0, 1, 9)]
        return radial + polydisc_points(p.weights, rng, count)
    if isinstance(p, JoinSeminorm) and all(isinstance(q, WeightedL1) for q in p.parts):
        logs = np.log(np.maximum(np.array([q.weights for q in p.parts]), 1e-300))
        out = []
        grid = [0.5, 0.0, 1.0, 0.25, 0.75, 0.125, 0.375, 0.625, 0.875]  # geometric mean first
        if len(p.parts) == 2:
            combos = [np.array([t, 1 - t]) for t in grid]
        else:
            combos = []
        combos += list(rng.dirichlet(np.ones(len(p.parts)), count))
        for c in combos:
            mods = np.exp(c @ logs)
            out.append(tuple(complex(x) for x in mods * np.exp(2j * np.pi * rng.random(mods.size))))
        return out
    if isinstance(p, SubsetMax):
        return sorted(p.subset)
    raise TypeError(f"cannot sample the marked set of {type(p).__name__}")


def marked_inside(N: SubsetRep, p: Seminorm, rng: np.random.Generator | None = None, samples: int = 64):
    """``M_p ⊆ N``, as ``(verdict, witness)``.

    Exact on C^k and for polydiscs inside full sets (the distinguished corner
    decides); otherwise by sampling the marked set.
    """
    if isinstance(p, ZeroSeminorm) or (isinstance(p, SubsetMax) and not p.subset):
        return True, None
    if isinstance(p, SubsetMax):
        for i in sorted(p.subset):
            if i not in N:
                return False, i
        return True, None
    rng = rng or np.random.default_rng(0)
    if isinstance(p, WeightedL1):
        corner = tuple(complex(r) for r in p.weights)
        if corner not in N:
            return False, corner
        if N.full_hint:
            return True, None
    for w in marked_points(p, rng, samples):
        if w not in N:
            return False, w
    return True, None


def polydisc_bounds(N: SubsetRep):
    """``(radii, closed)`` when ``N`` is a polydisc (closed, or an increasing-chain open)."""
    if isinstance(N, Polydisc):
        return np.asarray(N.radii), N.closed
    if isinstance(N, BasisOpen) and N.chain.limit is not None:
        return np.asarray(N.chain.limit, dtype=float), False
    return None


def polydisc_contained(V: SubsetRep, U: SubsetRep) -> bool | None:
    """Exact ``V ⊆ U`` for two polydiscs, ``None`` when either is not one."""
    bv, bu = polydisc_bounds(V), polydisc_bounds(U)
    if bv is None or bu is None:
        return None
    (rv, cv), (ru, cu) = bv, bu
    if cv and not cu:
        return bool(np.all(rv < ru))
    return bool(np.all(rv <= ru))


def full_closure(N: SubsetRep, budget: int = 256, seed: int = 0) -> SubsetRep:
    """``O(N)``, the union of the minimal marked sets of the points of ``N``."""
    if isinstance(N.model, FunctionModel) or N.full_hint:
        return N
    if isinstance(N, Annulus):
        return Polydisc((N.outer,))
    if isinstance(N, UnionRep):
        return UnionRep(tuple(full_closure(p, budget, seed) for p in N.parts))
    pts = N.sample(np.random.default_rng(seed), budget)
    if not pts:
        return EmptySet(N.model)
    return UnionRep(tuple(Polydisc(tuple(_moduli(m))) for m in pts))


@dataclass(frozen=True)
class FullVerdict:
    full: bool
    witness: tuple | None = None  # (m in N, point of O(m) outside N)
    exact: bool = False


def is_full(N: SubsetRep, budget: int = 128, seed: int = 0) -> FullVerdict:
    """Does ``N`` contain ``O(m)`` for each of its points ``m``?"""
    if isinstance(N.model, FunctionModel):
        return FullVerdict(True, exact=True)  # O(i) = {i}
    rng = np.random.default_rng(seed)
    for m in N.sample(rng, budget):
        p = WeightedL1(tuple(_moduli(m)))
        for w in marked_points(p, rng, 16):
            if w not in N:
                return FullVerdict(False, (m, w))
    return FullVerdict(True)


@dataclass(frozen=True, eq=False)
class PredicateFamily:
    """``P(N)`` on a parametric chart: a membership test plus a sampler."""

    subset: SubsetRep
    chart: SeminormChart

    def __contains__(self, p) -> bool:
        return p in self.chart and marked_inside(self.subset, p)[0]

    def sample(self, rng: np.random.Generator, count: int) -> list[Seminorm]:
        model = self.chart.model
        if isinstance(model, FunctionModel):
            pts = [i for i in range(model.k) if i in self.subset]
            out = [SubsetMax(model.k, frozenset()), SubsetMax(model.k, frozenset(pts))]
            for _ in range(count):
                out.append(SubsetMax(model.k, frozenset(i for i in pts if rng.random() < 0.5)))
            return out
        out = [s for s in self.subset.seed_seminorms() if s in self]
        for m in self.subset.sample(rng, count):
            p = WeightedL1(tuple(_moduli(m)))
            if p in self:
                out.append(p)
                shrunk = WeightedL1(tuple(_moduli(m) * rng.uniform(0.2, 1.0)))
                out.append(shrunk)
        return out


def P_of(N: SubsetRep, chart: SeminormChart):
    """Chart members whose marked set lies in ``N``: a tuple on finite charts."""
    if chart.members:
        return tuple(p for p in chart.members if marked_inside(N, p)[0])
    return PredicateFamily(N, chart)


@dataclass(frozen=True)
class AConvexVerdict:
    a_convex: bool
    witness: tuple | None = None  # (p1, p2, point of M_{p1 v p2} outside N)
    exact: bool = False
    pairs: int = 0


def is_A_convex(N: SubsetRep, chart: SeminormChart, budget: int = 64, seed: int = 0) -> AConvexVerdict:
    """Is ``P(N)`` directed, i.e. ``p1 v p2 in P(N)`` for members ``p1, p2``?"""
    rng = np.random.default_rng(seed)
    fam = P_of(N, chart)
    if isinstance(fam, tuple):
        for i, p in enumerate(fam):
            for q in fam[i:]:
                ok, w = marked_inside(N, join(p, q))
                if not ok:
                    return AConvexVerdict(False, (p, q, w), True, len(fam) ** 2)
        return AConvexVerdict(True, None, True, len(fam) ** 2)
    members = fam.sample(rng, budget)
    pairs = 0
    for i, p in enumerate(members):
        for q in members[i + 1:]:
            if pairs >= budget * 4:
                break
            pairs += 1
            ok, w = marked_inside(N, join(p, q), rng)
            if not ok:
                return AConvexVerdict(False, (p, q, w), False, pairs)
    return AConvexVerdict(True, None, False, pairs)


@dataclass(frozen=True)
class StrictDominationWitness:
    p: Seminorm
    q: Seminorm
    strict: bool
    tail: tuple[float, ...] = ()  # max over |alpha| = d of (r/R)^alpha, d = 1..horizon
    monotone: bool = True
    schauder: bool | None = None  # precompactness of the polar of {p <= 1} in the q-dual

    def __bool__(self) -> bool:
        return self.strict

    @property
    def tail_sup(self) -> float:
        half = len(self.tail) // 2
        return max(self.tail[half:]) if self.tail else 0.0


def _shell_max(r, R, d: int) -> float:
    """``max_{|alpha| = d} prod (r_i/R_i)^alpha_i`` by enumeration."""
    ratios = [x / y if y > 0 else 0.0 for x, y in zip(r, R)]
    return max(math.prod(t**a for t, a in zip(ratios, alpha)) for alpha in multi_indices(len(ratios), d, d))


def strictly_dominates(p: Seminorm, q: Seminorm, horizon: int = 64) -> StrictDominationWitness:
    """Is the connecting map ``A_q -> A_p`` compact (``p ≺ q``)?

    Weighted l1: the map is diagonal on monomials with entries ``(r/R)^alpha``,
    compact iff these tend to 0, i.e. iff the shell maxima decrease strictly
    (they form the geometric sequence ``rho^d``).  The polar of the p-unit ball
    sits in the q-dual as ``{|f_alpha| <= r^alpha}``, precompact under
    ``sup |f_alpha| / R^alpha`` by the same decay, checked independently on
    enumerated shells.  Finite-dimensional quotients make every map compact.
    """
    dom = dominates(p, q)
    if dom.verdict != "yes":
        raise NotDominatedError(f"{p!r} is not dominated by {q!r}", dom.witness)
    if isinstance(p, WeightedL1) and isinstance(q, WeightedL1):
        ratios = [r / R if R > 0 else 0.0 for r, R in zip(p.weights, q.weights)]
        rho = max(ratios)
        tail = tuple(rho**d for d in range(1, horizon + 1))
        monotone = all(b <= a for a, b in zip(tail, tail[1:]))
        strict = monotone and tail[-1] < tail[0]
        shell_d = min(horizon, 24) if len(ratios) > 2 else horizon
        schauder = _shell_max(p.weights, q.weights, shell_d) < _shell_max(p.weights, q.weights, max(1, shell_d // 2))
        return StrictDominationWitness(p, q, strict, tail, monotone, schauder)
    if isinstance(p.model, (FunctionModel, MatrixModel)):
        return StrictDominationWitness(p, q, True, (), True, True)
    raise TypeError("strict domination is decided for chart seminorms")


@dataclass(frozen=True, eq=False)
class Chain:
    """A seminorm chain: a finite prefix, optionally extended by a successor rule.

    ``limit`` gives the supremum of the weights along an infinite chain (use
    ``inf`` for unbounded) so that ``U_Q`` membership is exact.
    """

    prefix: tuple[Seminorm, ...]
    step: Callable[[Seminorm], Seminorm] | None = None
    limit: tuple[float, ...] | None = None
    term_fn: Callable[[int], Seminorm] | None = None

    @property
    def model(self) -> Model:
        return self.prefix[0].model

    @property
    def infinite(self) -> bool:
        return self.step is not None or self.term_fn is not None

    def term(self, k: int) -> Seminorm:
        if self.term_fn is not None:
            return self.term_fn(k)
        if k < len(self.prefix):
            return self.prefix[k]
        if self.step is None:
            return self.prefix[-1]
        p = self.prefix[-1]
        for _ in range(k - len(self.prefix) + 1):
            p = self.step(p)
        return p

    def members(self, count: int | None = None) -> list[Seminorm]:
        if count is None:
            count = len(self.prefix) if not self.infinite else len(self.prefix) + 8
        return [self.term(k) for k in range(count)]

    def contains_point(self, w, horizon: int = 64) -> bool:
        if self.limit is not None and isinstance(self.model, EntireModel):
            return bool(np.all(_moduli(w) < np.asarray(self.limit)))
        n = horizon if self.infinite else len(self.prefix)
        return any(gelfand_member(self.term(k), w) for k in range(n))

    @classmethod
    def increasing_to(cls, start: Sequence[float], limit: Sequence[float]) -> "Chain":
        """Weights halving their distance to ``limit`` (doubling when unbounded)."""
        limit = tuple(float(x) for x in limit)

        def step(p):
            return WeightedL1(tuple(2 * r if math.isinf(L) else L - (L - r) / 2 for r, L in zip(p.weights, limit)))

        return cls((WeightedL1(tuple(start)),), step, limit)


class NotStrictlyIncreasingError(ValueError):
    def __init__(self, msg: str, witness):
        super().__init__(msg)
        self.witness = witness


def is_strictly_increasing(chain: Chain, checks: int = 12, horizon: int = 64):
    """Every member is strictly dominated by some member; returns ``(verdict, witness)``.

    On finite-dimensional models every map is compact, so a member may serve
    as its own strict successor.
    """
    finite_dim = isinstance(chain.model, (FunctionModel, MatrixModel))
    members = chain.members(len(chain.prefix) + (checks if chain.infinite else 0))
    last = len(members) if chain.infinite else len(members) - 1
    for i in range(last):
        p = members[i]
        nxt = members[i + 1] if i + 1 < len(members) else chain.term(i + 1)
        if finite_dim:
            ok = bool(dominates(p, nxt))
        else:
            ok = dominates(p, nxt).verdict == "yes" and bool(strictly_dominates(p, nxt, horizon))
        if not ok:
            return False, (p, nxt)
    if not chain.infinite and not finite_dim:
        return False, (members[-1], None)
    return True, None


def is_schwartz(chart: SeminormChart, samples: int = 32, seed: int = 0, horizon: int = 64):
    """Every chart member strictly dominated by some chart member."""
    if isinstance(chart.model, (FunctionModel, MatrixModel)):
        return True, None
    rng = np.random.default_rng(seed)
    for p in chart.sample(rng, samples):
        q = WeightedL1(tuple(2 * r for r in p.weights))
        if q not in chart or not strictly_dominates(p, q, horizon):
            return False, p
    return True, None


@dataclass(frozen=True, eq=False)
class BasisOpen(SubsetRep):
    """``U_Q``, the union of the marked sets along a strictly increasing chain."""

    chain: Chain

    @property
    def model(self) -> Model:
        return self.chain.model

    @property
    def full_hint(self) -> bool:
        return True

    def __contains__(self, w) -> bool:
        return self.chain.contains_point(w)

    def sample(self, rng, count):
        if isinstance(self.model, FunctionModel):
            return [i for i in range(self.model.k) if i in self]
        if self.chain.limit is not None:
            return Polydisc(self.chain.limit, closed=False).sample(rng, count)
        per = max(1, count // 8)
        return [w for p in self.chain.members(8) for w in polydisc_points(p.weights, rng, per)]

    def seed_seminorms(self):
        return self.chain.members()


def basis_open(chain: Chain) -> BasisOpen:
    ok, wit = is_strictly_increasing(chain)
    if not ok:
        raise NotStrictlyIncreasingError("chain is not strictly increasing", wit)
    return BasisOpen(chain)


def intersect_basis_opens(opens: Sequence[BasisOpen]) -> BasisOpen:
    """``U_{Q'}`` with ``Q' = {q_1 ∧ ... ∧ q_m}`` taken along the diagonal.

    Chains are increasing, so diagonal meets are cofinal among all meets.
    """
    opens = list(opens)
    chains = [u.chain for u in opens]
    length = max(len(c.prefix) for c in chains)

    def term(k):
        out = chains[0].term(k)
        for c in chains[1:]:
            out = meet(out, c.term(k))
        return out

    infinite = any(c.infinite for c in chains)
    limit = None
    if all(c.limit is not None for c in chains):
        limit = tuple(np.min([c.limit for c in chains], axis=0))
    prefix = tuple(term(k) for k in range(length))
    if infinite:
        chain = Chain(prefix, None, limit, term)
    else:
        chain = Chain(prefix)
    return basis_open(chain)


@dataclass(frozen=True)
class IntersectionAgreement:
    points: int
    disagreements: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.disagreements


def intersection_agreement(opens: Sequence[BasisOpen], points: Iterable) -> IntersectionAgreement:
    """Compare membership in ``U_{Q'}`` with membership in every ``U_{Q_i}``."""
    inter = intersect_basis_opens(opens)
    bad, count = [], 0
    for w in points:
        count += 1
        if (w in inter) != all(w in u for u in opens):
            bad.append(w)
    return IntersectionAgreement(count, bad)
