"""Submultiplicative seminorms, their preorder, lattice operations and quotients.

Lattice operations are computed relative to a :class:`SeminormChart`, a
working subfamily of all continuous submultiplicative seminorms.  The chart
kinds are

* weighted l1 norms ``p_r(f) = sum |c_alpha| r^alpha`` on polynomials,
* coordinate maxima ``q_S(a) = max_{i in S} |a_i|`` on C^k,
* scaled operator norms ``c * ||a||_op`` on matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import EntireModel, FunctionModel, MatrixModel, Model, ModelMismatch, Poly, multi_indices

__all__ = [
    "DEFAULT_RTOL",
    "Seminorm",
    "WeightedL1",
    "SubsetMax",
    "ScaledOperatorNorm",
    "ZeroSeminorm",
    "GenericSeminorm",
    "JoinSeminorm",
    "SupSeminorm",
    "InfSeminorm",
    "Domination",
    "NotDominatedError",
    "UnboundedFamilyError",
    "SeminormChart",
    "weight_chart",
    "subset_chart",
    "scale_chart",
    "dominates",
    "join",
    "meet",
    "sup_family",
    "pointwise_le",
    "probe_elements",
    "QuotientAlgebra",
    "quotient_algebra",
    "ConnectingMap",
    "connecting_map",
    "DensityReport",
    "mittag_leffler_density_check",
]

DEFAULT_RTOL = 1e-9


class Seminorm:
    """Base class; subclasses evaluate with ``p(a)``."""

    model: Model
    parametric = False

    def __call__(self, a) -> float:
        self.model.check(a)
        return self._eval(a)

    def _eval(self, a) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class WeightedL1(Seminorm):
    """``p_r(f) = sum_alpha |c_alpha| r^alpha``; exactly submultiplicative."""

    weights: tuple[float, ...]
    parametric = True

    def __post_init__(self):
        w = tuple(float(x) for x in np.atleast_1d(self.weights))
        if any(x < 0 or not math.isfinite(x) for x in w):
            raise ValueError("weights must be finite and nonnegative")
        object.__setattr__(self, "weights", w)

    @property
    def model(self) -> EntireModel:
        return EntireModel(len(self.weights))

    def monomial_value(self, alpha: Sequence[int]) -> float:
        return math.prod(r**a for r, a in zip(self.weights, alpha))

    def _eval(self, a: Poly) -> float:
        return math.fsum(abs(c) * self.monomial_value(alpha) for alpha, c in a.terms.items())

    def __repr__(self):
        return f"p{list(self.weights)}"


@dataclass(frozen=True)
class SubsetMax(Seminorm):
    """``q_S(a) = max_{i in S} |a_i|`` on C^k; ``q_{}`` is the zero seminorm."""

    k: int
    subset: frozenset[int]
    parametric = True

    def __post_init__(self):
        s = frozenset(int(i) for i in self.subset)
        if any(not 0 <= i < self.k for i in s):
            raise ValueError(f"subset {sorted(s)} not inside 0..{self.k - 1}")
        object.__setattr__(self, "subset", s)

    @property
    def model(self) -> FunctionModel:
        return FunctionModel(self.k)

    def _eval(self, a) -> float:
        if not self.subset:
            return 0.0
        return float(np.max(np.abs(a[sorted(self.subset)])))

    def __repr__(self):
        return f"q{sorted(self.subset)}"


@dataclass(frozen=True)
class ScaledOperatorNorm(Seminorm):
    """``c * ||a||_op`` on n x n matrices; submultiplicative for ``c >= 1``."""

    n: int
    scale: float = 1.0
    parametric = True

    def __post_init__(self):
        if self.scale < 1.0:
            raise ValueError("scale below 1 breaks submultiplicativity")

    @property
    def model(self) -> MatrixModel:
        return MatrixModel(self.n)

    def _eval(self, a) -> float:
        return self.scale * float(np.linalg.norm(a, 2))

    def __repr__(self):
        return f"{self.scale:g}*op"


@dataclass(frozen=True)
class ZeroSeminorm(Seminorm):
    """The non-unital zero seminorm, admitted as the empty supremum."""

    model: Model

    def _eval(self, a) -> float:
        return 0.0


@dataclass(frozen=True, eq=False)
class GenericSeminorm(Seminorm):
    """A seminorm given only by an evaluation closure."""

    model: Model
    fn: Callable[[object], float]
    label: str = "generic"

    def _eval(self, a) -> float:
        return float(self.fn(a))

    def __repr__(self):
        return self.label


@dataclass(frozen=True)
class JoinSeminorm(Seminorm):
    """Pointwise maximum of finitely many seminorms."""

    parts: tuple[Seminorm, ...]

    @property
    def model(self) -> Model:
        return self.parts[0].model

    def _eval(self, a) -> float:
        return max(p._eval(a) for p in self.parts)

    def __repr__(self):
        return " v ".join(map(repr, self.parts))


@dataclass(frozen=True)
class SupSeminorm(Seminorm):
    """Pointwise supremum of a (finite, sampled) family.

    ``lower_bound`` marks an inner approximation of a supremum over a larger,
    unsampled family.
    """

    parts: tuple[Seminorm, ...]
    model: Model
    lower_bound: bool = False

    def _eval(self, a) -> float:
        return max((p._eval(a) for p in self.parts), default=0.0)


@dataclass(frozen=True)
class InfSeminorm(Seminorm):
    """Pointwise infimum over a totally ordered family."""

    parts: tuple[Seminorm, ...]

    @property
    def model(self) -> Model:
        return self.parts[0].model

    def _eval(self, a) -> float:
        return min(p._eval(a) for p in self.parts)


def _same_model(p: Seminorm, q: Seminorm) -> None:
    if p.model != q.model:
        raise ModelMismatch(f"{p!r} and {q!r} live on different models")


def probe_elements(model: Model, rng: np.random.Generator, count: int = 64, degree: int = 6) -> list:
    """Elements used to probe black-box seminorms: basis-like plus random."""
    out: list = []
    if isinstance(model, EntireModel):
        out.extend(model.monomials(degree))
        out.extend(model.random_element(rng, degree=min(degree, 4)) for _ in range(count))
    elif isinstance(model, FunctionModel):
        out.extend(model.indicator([i]) for i in range(model.k))
        out.append(model.one())
        out.extend(model.random_element(rng, zero_prob=0.3) for _ in range(count))
    elif isinstance(model, MatrixModel):
        for i in range(model.n):
            for j in range(model.n):
                e = model.zero()
                e[i, j] = 1.0
                out.append(e)
        out.append(model.one())
        out.extend(model.random_element(rng) for _ in range(count))
    return out


def pointwise_le(p: Seminorm, q: Seminorm, elements: Iterable, c: float = 1.0, rtol: float = DEFAULT_RTOL):
    """First element with ``p(a) > c*q(a)`` (beyond tolerance), or ``None``."""
    for a in elements:
        pa, qa = p(a), c * q(a)
        if pa > qa + rtol * max(pa, qa, 1e-300):
            return a
    return None


@dataclass(frozen=True)
class Domination:
    """Three-valued answer to ``p <= C q`` for some ``C``."""

    verdict: str  # "yes" | "no" | "unknown"
    constant: float | None = None
    witness: object = None

    def __bool__(self) -> bool:
        return self.verdict == "yes"


def dominates(
    p: Seminorm,
    q: Seminorm,
    *,
    candidate_bound: float = 1e6,
    rng: np.random.Generator | None = None,
    samples: int = 64,
) -> Domination:
    """Decide ``p <= C q``.

    Parametric kinds are decided exactly.  A "no" carries a witness element
    on which ``p/q`` exceeds ``candidate_bound`` (or ``q`` vanishes while ``p``
    does not).  Other seminorms get a sampled verdict.
    """
    _same_model(p, q)
    if p == q:
        return Domination("yes", 1.0)
    if isinstance(p, ZeroSeminorm) or (isinstance(p, SubsetMax) and not p.subset):
        return Domination("yes", 1.0)
    if isinstance(p, WeightedL1) and isinstance(q, WeightedL1):
        for j, (r, s) in enumerate(zip(p.weights, q.weights)):
            if r > s:
                if s == 0.0:
                    k = 1
                else:
                    k = max(1, math.floor(math.log(candidate_bound) / math.log(r / s)) + 1)
                alpha = [0] * len(p.weights)
                alpha[j] = k
                return Domination("no", witness=Poly.monomial(alpha))
        return Domination("yes", 1.0)
    if isinstance(p, SubsetMax) and isinstance(q, SubsetMax):
        extra = p.subset - q.subset
        if extra:
            return Domination("no", witness=p.model.indicator([min(extra)]))
        return Domination("yes", 1.0)
    if isinstance(p, ScaledOperatorNorm) and isinstance(q, ScaledOperatorNorm):
        return Domination("yes", p.scale / q.scale)
    if isinstance(p, JoinSeminorm):
        verdicts = [dominates(part, q, candidate_bound=candidate_bound, rng=rng, samples=samples) for part in p.parts]
        for v in verdicts:
            if v.verdict != "yes":
                return v
        return Domination("yes", max(v.constant for v in verdicts))
    if isinstance(q, JoinSeminorm):
        for part in q.parts:
            v = dominates(p, part, candidate_bound=candidate_bound, rng=rng, samples=samples)
            if v:
                return v
    return _sampled_domination(p, q, rng or np.random.default_rng(0), samples, candidate_bound)


def _sampled_domination(p, q, rng, samples, candidate_bound) -> Domination:
    worst = 0.0
    for a in probe_elements(p.model, rng, samples):
        pa, qa = p(a), q(a)
        if qa == 0.0:
            if pa > 0.0:
                return Domination("no", witness=a)
            continue
        ratio = pa / qa
        if ratio > candidate_bound:
            return Domination("no", witness=a)
        worst = max(worst, ratio)
    return Domination("unknown", worst)


def join(p: Seminorm, q: Seminorm) -> Seminorm:
    """``(p v q)(a) = max(p(a), q(a))``, returned as a chart member when exact."""
    _same_model(p, q)
    if p == q:
        return p
    if isinstance(p, SubsetMax) and isinstance(q, SubsetMax):
        return SubsetMax(p.k, p.subset | q.subset)
    if isinstance(p, ScaledOperatorNorm) and isinstance(q, ScaledOperatorNorm):
        return p if p.scale >= q.scale else q
    if isinstance(p, WeightedL1) and isinstance(q, WeightedL1):
        # comparable weights: the larger one is pointwise larger on every polynomial
        if all(r <= s for r, s in zip(p.weights, q.weights)):
            return q
        if all(r >= s for r, s in zip(p.weights, q.weights)):
            return p
    if isinstance(p, ZeroSeminorm):
        return q
    if isinstance(q, ZeroSeminorm):
        return p
    parts = (p.parts if isinstance(p, JoinSeminorm) else (p,)) + (q.parts if isinstance(q, JoinSeminorm) else (q,))
    return JoinSeminorm(parts)


def meet(p: Seminorm, q: Seminorm, chart: "SeminormChart | None" = None, *, rng=None) -> Seminorm:
    """Chart meet of ``p`` and ``q``.

    Componentwise-minimum weights, subset intersection, or smaller scale for
    the parametric kinds.  Otherwise the supremum of the chart members found
    below both ``p`` and ``q`` (a :class:`SupSeminorm` flagged as lower bound;
    the zero seminorm when none is found).
    """
    _same_model(p, q)
    if p == q:
        return p
    if isinstance(p, WeightedL1) and isinstance(q, WeightedL1):
        return WeightedL1(tuple(min(r, s) for r, s in zip(p.weights, q.weights)))
    if isinstance(p, SubsetMax) and isinstance(q, SubsetMax):
        return SubsetMax(p.k, p.subset & q.subset)
    if isinstance(p, ScaledOperatorNorm) and isinstance(q, ScaledOperatorNorm):
        return p if p.scale <= q.scale else q
    if chart is None:
        raise ValueError("meet of non-parametric seminorms needs a chart to search")
    rng = rng or np.random.default_rng(0)
    probes = probe_elements(p.model, rng)
    candidates = list(chart.members) or chart.sample(rng, 64)
    below = tuple(
        r for r in candidates if pointwise_le(r, p, probes) is None and pointwise_le(r, q, probes) is None
    )
    return SupSeminorm(below, p.model, lower_bound=True)


class UnboundedFamilyError(ValueError):
    def __init__(self, msg: str, member: Seminorm, witness):
        super().__init__(msg)
        self.member = member
        self.witness = witness


def sup_family(
    family: Sequence[Seminorm],
    bound: Seminorm,
    c: float = 1.0,
    *,
    rng: np.random.Generator | None = None,
    samples: int = 64,
) -> Seminorm:
    """Pointwise supremum of ``family``, after checking ``q <= c*bound`` on samples."""
    if not family:
        return ZeroSeminorm(bound.model)
    probes = probe_elements(bound.model, rng or np.random.default_rng(0), samples)
    for q in family:
        _same_model(q, bound)
        bad = pointwise_le(q, bound, probes, c)
        if bad is not None:
            raise UnboundedFamilyError(f"{q!r} exceeds {c}*{bound!r}", q, bad)
    if len(family) == 1:
        return family[0]
    return SupSeminorm(tuple(family), bound.model)


@dataclass(frozen=True, eq=False)
class SeminormChart:
    """A declared working subfamily of seminorms.

    ``members`` lists a finite chart; ``sampler`` draws from a parametric one.
    ``contains`` decides chart membership.
    """

    model: Model
    members: tuple[Seminorm, ...] = ()
    sampler: Callable[[np.random.Generator], Seminorm] | None = None
    contains: Callable[[Seminorm], bool] | None = None
    directed: bool = True
    meet_closed: bool = True
    label: str = "chart"

    def sample(self, rng: np.random.Generator, count: int) -> list[Seminorm]:
        if self.sampler is not None:
            return [self.sampler(rng) for _ in range(count)]
        idx = rng.integers(0, len(self.members), size=count)
        return [self.members[i] for i in idx]

    def __contains__(self, p) -> bool:
        if self.contains is not None:
            return self.contains(p)
        return p in self.members

    def upper_bound(self, p: Seminorm, q: Seminorm) -> Seminorm:
        """A chart member dominating both ``p`` and ``q``."""
        if isinstance(p, WeightedL1) and isinstance(q, WeightedL1):
            return WeightedL1(tuple(max(r, s) for r, s in zip(p.weights, q.weights)))
        return join(p, q)

    def meet(self, p: Seminorm, q: Seminorm) -> Seminorm:
        return meet(p, q, self)


def weight_chart(n: int, low: float = 0.1, high: float = 10.0) -> SeminormChart:
    """``{p_r : r in (0, inf)^n}``; sampling is log-uniform on ``[low, high]^n``."""

    def sampler(rng):
        return WeightedL1(tuple(np.exp(rng.uniform(math.log(low), math.log(high), n))))

    def contains(p):
        return isinstance(p, WeightedL1) and len(p.weights) == n and all(r > 0 for r in p.weights)

    return SeminormChart(EntireModel(n), (), sampler, contains, label=f"weights(n={n})")


ENUMERATED_SUBSETS = 10  # up to this k the subset chart lists all 2^k members


def subset_chart(k: int) -> SeminormChart:
    """All ``q_S`` for ``S`` a subset of ``{0..k-1}``, including the empty (zero) one.

    Listed exhaustively for small ``k``; sampled (each index kept with
    probability 1/2) beyond that.
    """
    if k <= ENUMERATED_SUBSETS:
        members = tuple(
            SubsetMax(k, frozenset(i for i in range(k) if mask >> i & 1)) for mask in range(2**k)
        )
        return SeminormChart(FunctionModel(k), members, label=f"subsets(k={k})")

    def sampler(rng):
        return SubsetMax(k, frozenset(np.flatnonzero(rng.random(k) < 0.5).tolist()))

    def contains(p):
        return isinstance(p, SubsetMax) and p.k == k

    return SeminormChart(FunctionModel(k), (), sampler, contains, label=f"subsets(k={k})")


def scale_chart(n: int, max_scale: float = 8.0) -> SeminormChart:
    def sampler(rng):
        return ScaledOperatorNorm(n, float(rng.uniform(1.0, max_scale)))

    def contains(p):
        return isinstance(p, ScaledOperatorNorm) and p.n == n

    return SeminormChart(MatrixModel(n), (), sampler, contains, label=f"scales(n={n})")


@dataclass(frozen=True, eq=False)
class QuotientAlgebra:
    """``A_p``: representatives modulo the null space of ``p``.

    For polynomials the representatives are coefficient vectors over
    ``basis`` (monomials of degree <= ``degree`` outside the kernel).  For
    C^k they are the coordinates in ``S``; for matrices the whole matrix.
    """

    seminorm: Seminorm
    degree: int | None
    basis: tuple
    kernel_basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def project(self, a) -> np.ndarray:
        p = self.seminorm
        if isinstance(p, WeightedL1):
            return a.coefficient_vector(self.basis)
        if isinstance(p, SubsetMax):
            return np.asarray(a)[list(self.basis)].astype(complex)
        return np.asarray(a, dtype=complex).copy()

    def lift(self, rep: np.ndarray):
        p = self.seminorm
        if isinstance(p, WeightedL1):
            return Poly(len(p.weights), dict(zip(self.basis, rep)))
        if isinstance(p, SubsetMax):
            a = np.zeros(p.k, dtype=complex)
            a[list(self.basis)] = rep
            return a
        return np.asarray(rep, dtype=complex).copy()

    def norm(self, rep: np.ndarray) -> float:
        p = self.seminorm
        if isinstance(p, WeightedL1):
            w = np.array([p.monomial_value(al) for al in self.basis])
            return float(np.sum(np.abs(rep) * w))
        if isinstance(p, SubsetMax):
            return float(np.max(np.abs(rep), initial=0.0))
        return p(rep)

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of representatives; polynomial products are truncated at ``degree``."""
        p = self.seminorm
        if isinstance(p, WeightedL1):
            return self.project(self.lift(x) * self.lift(y))
        if isinstance(p, SubsetMax):
            return x * y
        return x @ y

    def one(self) -> np.ndarray:
        return self.project(self.seminorm.model.one())


def quotient_algebra(p: Seminorm, degree: int = 0) -> QuotientAlgebra:
    if degree < 0:
        raise ValueError("truncation degree must be nonnegative")
    if isinstance(p, WeightedL1):
        basis, kernel = [], []
        for alpha in multi_indices(len(p.weights), degree):
            (basis if p.monomial_value(alpha) > 0 else kernel).append(alpha)
        return QuotientAlgebra(p, degree, tuple(basis), tuple(Poly.monomial(a) for a in kernel))
    if isinstance(p, SubsetMax):
        if not p.subset:
            raise ValueError("the zero seminorm has no quotient algebra")
        model = p.model
        kernel = tuple(model.indicator([i]) for i in range(p.k) if i not in p.subset)
        return QuotientAlgebra(p, None, tuple(sorted(p.subset)), kernel)
    if isinstance(p, ScaledOperatorNorm):
        return QuotientAlgebra(p, None, tuple((i, j) for i in range(p.n) for j in range(p.n)), ())
    raise TypeError(f"no quotient construction for {type(p).__name__}")


class NotDominatedError(ValueError):
    def __init__(self, msg: str, witness):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class ConnectingMap:
    """``pi_pq : A_q -> A_p`` for ``p <= C q``; the identity on coefficients."""

    target: Seminorm  # p
    source: Seminorm  # q
    constant: float

    def __call__(self, a):
        return a

    def compose(self, inner: "ConnectingMap") -> "ConnectingMap":
        """``self o inner``: ``pi_pq o pi_qr = pi_pr``."""
        if inner.target != self.source:
            raise ValueError("maps are not composable")
        return ConnectingMap(self.target, inner.source, self.constant * inner.constant)

    def norm_estimate(self, degree: int) -> float:
        """``max p(m)/q(m)`` over basis elements (monomials up to ``degree``)."""
        p, q = self.target, self.source
        model = p.model
        if isinstance(model, EntireModel):
            basis = model.monomials(degree)
        else:
            basis = probe_elements(model, np.random.default_rng(0), 0)
        ratios = [p(m) / q(m) for m in basis if q(m) > 0]
        return max(ratios, default=0.0)


def connecting_map(p: Seminorm, q: Seminorm) -> ConnectingMap:
    d = dominates(p, q)
    if not d:
        raise NotDominatedError(f"{p!r} is not dominated by {q!r}", d.witness)
    return ConnectingMap(p, q, d.constant)


@dataclass(frozen=True)
class DensityReport:
    seminorm: Seminorm
    samples: int
    max_distance: float
    tolerance: float
    passed: bool


def mittag_leffler_density_check(
    p: Seminorm, degree: int, eps: float, samples: int = 50, seed: int = 0
) -> DensityReport:
    """Approximate sampled ``A_p`` representatives by algebra elements.

    The representatives are themselves images of elements, so the distance
    is exactly zero; the check exercises the lift/project round trip.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    rng = np.random.default_rng(seed)
    qa = quotient_algebra(p, degree)
    worst = 0.0
    for _ in range(samples):
        rep = rng.standard_normal(qa.dim) + 1j * rng.standard_normal(qa.dim)
        if isinstance(p, ScaledOperatorNorm):
            rep = rep.reshape(p.n, p.n)
        rep = rep / max(qa.norm(rep), 1e-300)
        approx = qa.lift(rep)
        worst = max(worst, qa.norm(qa.project(approx) - rep))
    return DensityReport(p, samples, worst, eps, worst <= eps)
