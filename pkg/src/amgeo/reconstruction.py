"""Derivations, cotangent data and the holomorphic chart ``phi``/``psi`` on polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import Character, EntireModel, Poly, multi_indices

__all__ = [
    "DerivationRep",
    "PointDerivation",
    "apply_derivation",
    "leibniz_defect",
    "CotangentData",
    "cotangent_space",
    "lift_point_derivation",
    "ExponentiabilityReport",
    "exponentiability_probe",
    "DivergenceError",
    "ChartCharacter",
    "chart_phi",
    "chart_psi",
    "JacobianReport",
    "jacobian_check",
    "InjectivityReport",
    "injectivity_check",
    "HypothesesReport",
    "geometric_hypotheses",
]


@dataclass(frozen=True)
class DerivationRep:
    """``delta = sum_i g_i d/dz_i`` on ``C[z_1..z_n]``."""

    coeffs: tuple[Poly, ...]

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @classmethod
    def partial(cls, n: int, i: int) -> "DerivationRep":
        return cls(tuple(Poly.constant(n, 1.0 if j == i else 0.0) for j in range(n)))

    @classmethod
    def constant(cls, values: Sequence[complex]) -> "DerivationRep":
        n = len(values)
        return cls(tuple(Poly.constant(n, complex(v)) for v in values))

    def __call__(self, a: Poly) -> Poly:
        return apply_derivation(self, a)

    def power(self, a: Poly, k: int) -> Poly:
        for _ in range(k):
            a = self(a)
        return a


def apply_derivation(delta: DerivationRep, a: Poly) -> Poly:
    if a.n != delta.n:
        raise ValueError("derivation and element live in different numbers of variables")
    out = Poly(a.n)
    for i, g in enumerate(delta.coeffs):
        if not g.is_zero():
            out = out + g * a.diff(i)
    return out


def leibniz_defect(delta: DerivationRep, a: Poly, b: Poly) -> float:
    """Largest coefficient of ``delta(ab) - delta(a) b - a delta(b)``."""
    diff = delta(a * b) - delta(a) * b - a * delta(b)
    return max((abs(c) for c in diff.terms.values()), default=0.0)


@dataclass(frozen=True)
class PointDerivation:
    """A derivation over the character at ``at``, given by its values on ``z_i``."""

    at: tuple[complex, ...]
    values: tuple[complex, ...]

    def __call__(self, a: Poly) -> complex:
        return sum(v * a.diff(i)(self.at) for i, v in enumerate(self.values))


@dataclass(frozen=True)
class CotangentData:
    base: tuple[complex, ...]
    gens: tuple[Poly, ...]
    degree: int
    dimension: int  # dim m/m^2 on the degree filtration
    generator_rank: int  # rank of the generator classes modulo m^2
    derivations: tuple[DerivationRep, ...]
    pairing: np.ndarray

    @property
    def hypothesis_ok(self) -> bool:
        return self.dimension == len(self.gens) == self.generator_rank

    @property
    def pairing_error(self) -> float:
        return float(np.max(np.abs(self.pairing - np.eye(len(self.gens))))) if self.derivations else math.inf


def _shifted_basis(n: int, degree: int):
    return list(multi_indices(n, degree))


def cotangent_space(base: Sequence[complex], gens: Sequence[Poly] | None = None, degree: int = 2) -> CotangentData:
    """``m/m^2`` at the character ``chi_0`` on the polynomials of degree ``<= degree``.

    ``m`` is spanned by ``m - m(w0)`` over monomials, ``m^2`` by products of
    two such elements within the degree bound.  The generator classes
    ``[a_i - chi_0(a_i)]`` must form a basis; dual derivations come from the
    inverse Jacobian of the generators at the base point.
    """
    base = tuple(complex(x) for x in base)
    n = len(base)
    gens = tuple(gens) if gens is not None else tuple(Poly.variable(n, i) for i in range(n))
    degree = max(degree, 2, max(g.degree for g in gens))
    basis = _shifted_basis(n, degree)
    monos = [Poly.monomial(al) for al in basis if sum(al) >= 1]
    kernel = [m - m(base) for m in monos]
    square = [
        (a - a(base)) * (b - b(base))
        for i, a in enumerate(monos)
        for b in monos[i:]
        if a.degree + b.degree <= degree
    ]
    vec = lambda ps: np.array([p.coefficient_vector(basis) for p in ps]) if ps else np.zeros((0, len(basis)))
    rank = lambda m: int(np.linalg.matrix_rank(m, tol=1e-9 * max(1.0, np.abs(m).max(initial=0)))) if m.size else 0
    K, K2 = vec(kernel), vec(square)
    r2 = rank(K2)
    dim = rank(K) - r2
    shifted = [g - g(base) for g in gens]
    gen_rank = rank(np.vstack([K2, vec(shifted)])) - r2
    jac = np.array([[g.diff(i)(base) for i in range(n)] for g in gens], dtype=complex)
    derivations: tuple = ()
    pairing = np.full((len(gens), len(gens)), np.nan)
    if jac.shape[0] == n and abs(np.linalg.det(jac)) > 1e-12:
        inv = np.linalg.inv(jac)
        derivations = tuple(DerivationRep.constant(inv[:, i]) for i in range(n))
        pairing = np.array([[d(g)(base) for g in gens] for d in derivations], dtype=complex)
    return CotangentData(base, gens, degree, dim, gen_rank, derivations, pairing)


def lift_point_derivation(pd: PointDerivation, samples: int = 32, seed: int = 0):
    """Constant-coefficient lift ``sum delta_chi(z_i) d/dz_i``; returns ``(lift, verified)``."""
    lift = DerivationRep.constant(pd.values)
    rng = np.random.default_rng(seed)
    model = EntireModel(len(pd.at))
    ok = all(abs(lift(Poly.variable(model.n, i))(pd.at) - v) < 1e-12 for i, v in enumerate(pd.values))
    for _ in range(samples):
        a, b = model.random_element(rng), model.random_element(rng)
        lhs = lift(a * b)(pd.at)
        rhs = pd(a) * b(pd.at) + a(pd.at) * pd(b)
        if abs(lhs - rhs) > 1e-9 * max(1.0, abs(rhs)) or abs(lhs - pd(a * b)) > 1e-9 * max(1.0, abs(lhs)):
            ok = False
    return lift, ok


@dataclass(frozen=True)
class ExponentiabilityReport:
    coefficients: tuple[complex, ...]  # c_k = chi(delta^k a) / k!
    radius: float  # empirical radius of convergence
    terminating: bool
    limit_estimate: float  # fitted lim |c_{k+1}/c_k| (or root test)
    cauchy: bool


ZERO_LIMIT = 1e-3  # fitted limits below this are read as 0 (entire series)


def _fit_limit(seq: np.ndarray, ks: np.ndarray) -> float:
    """Least-squares ``seq ~ L + B/k`` over the tail; returns ``L``."""
    A = np.vstack([np.ones_like(ks), 1.0 / ks]).T
    coef, *_ = np.linalg.lstsq(A, seq, rcond=None)
    return float(coef[0])


def exponentiability_probe(delta: DerivationRep, at: Sequence[complex], a: Poly, K: int = 64, tol: float = 1e-6) -> ExponentiabilityReport:
    """Radius of ``sum_k z^k / k! chi(delta^k a)`` from its first ``K`` coefficients."""
    if K < 4:
        raise ValueError("need at least 4 coefficients")
    at = tuple(complex(x) for x in at)
    coeffs = []
    cur = a
    terminating = False
    for k in range(K + 1):
        if cur.is_zero():
            terminating = True
            break
        coeffs.append(complex(cur(at)))
        cur = delta(cur) / (k + 1)  # carries delta^k a / k! without factorial overflow
    if terminating:
        return ExponentiabilityReport(tuple(coeffs), math.inf, True, 0.0, True)
    mags = np.abs(np.array(coeffs))
    ks = np.arange(len(mags), dtype=float)
    tail = slice(len(mags) // 2, len(mags) - 1)
    if np.all(mags[tail] > 0) and np.all(mags[1:][tail] > 0):
        ratios = mags[1:] / mags[:-1]
        limit = _fit_limit(ratios[tail], ks[tail] + 1)
    else:
        nz = ks[tail][mags[tail] > 0]
        if nz.size < 2:
            return ExponentiabilityReport(tuple(coeffs), math.inf, False, 0.0, True)
        roots = mags[nz.astype(int)] ** (1.0 / nz)
        limit = _fit_limit(roots, nz)
    limit = max(limit, 0.0)
    radius = math.inf if limit < ZERO_LIMIT else 1.0 / limit
    z = 1.0 if math.isinf(radius) else radius / 2
    powers = np.array(coeffs) * z ** ks
    total = powers.sum()
    half = powers[: len(powers) // 2 + 1].sum()
    cauchy = abs(total - half) <= tol * max(1.0, abs(total)) or abs(powers[len(powers) // 2:]).sum() <= tol
    return ExponentiabilityReport(tuple(coeffs), radius, False, limit, bool(cauchy))


class DivergenceError(ValueError):
    def __init__(self, msg: str, radius: float):
        super().__init__(msg)
        self.radius = radius


@dataclass(frozen=True, eq=False)
class ChartCharacter:
    """``a -> sum_{|alpha|<=K} z^alpha / alpha! chi_0(delta^alpha a)``.

    ``K = None`` truncates at the degree of ``a``, which is exact.
    """

    data: CotangentData
    z: tuple[complex, ...]
    K: int | None = None

    def __call__(self, a: Poly) -> complex:
        ders = self.data.derivations
        base = self.data.base
        n = len(ders)
        order = max(a.degree, 0) if self.K is None else self.K
        total = 0j
        # derivative table keyed by multi-index; zero entries prune their extensions
        table = {(0,) * n: a}
        for d in range(order + 1):
            for alpha in multi_indices(n, d, d):
                if d == 0:
                    cur = a
                else:
                    i = next(j for j in range(n - 1, -1, -1) if alpha[j])
                    prev = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
                    parent = table.get(prev)
                    if parent is None or parent.is_zero():
                        continue
                    cur = ders[i](parent)
                    table[alpha] = cur
                if cur.is_zero():
                    continue
                weight = math.prod(zi**ai / math.factorial(ai) for zi, ai in zip(self.z, alpha))
                total += weight * cur(base)
        return total


def chart_phi(data: CotangentData, z: Sequence[complex], K: int | None = None, radius: float | None = None) -> ChartCharacter:
    """The chart map at ``z``; rejects ``z`` outside the probed polydisc."""
    if not data.derivations:
        raise ValueError("cotangent data has no dual derivations")
    z = tuple(complex(x) for x in z)
    if radius is None:
        radius = min(exponentiability_probe(d, data.base, g, K=16).radius for d in data.derivations for g in data.gens)
    if max(abs(x) for x in z) >= radius:
        raise DivergenceError("point lies outside the convergence polydisc", radius)
    return ChartCharacter(data, z, K)


def chart_psi(chi, gens: Sequence[Poly]) -> np.ndarray:
    """``(chi(a_1), ..., chi(a_n))``; ``chi`` may be a callable character or a point."""
    if isinstance(chi, (ChartCharacter, Character)) or callable(chi):
        return np.array([chi(g) for g in gens], dtype=complex)
    return np.array([g(chi) for g in gens], dtype=complex)


@dataclass(frozen=True)
class JacobianReport:
    matrix: np.ndarray
    max_deviation: float
    passed: bool


def jacobian_check(data: CotangentData, h: float = 1e-4, K: int | None = None, tol: float = 1e-6) -> JacobianReport:
    """Central-difference Jacobian of ``psi∘phi`` at 0 against the identity."""
    if h <= 0:
        raise ValueError("step must be positive")
    n = len(data.base)
    F = lambda z: chart_psi(chart_phi(data, z, K, radius=math.inf), data.gens)
    J = np.zeros((n, n), dtype=complex)
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        J[:, j] = (F(e) - F(-e)) / (2 * h)
    dev = float(np.max(np.abs(J - np.eye(n))))
    return JacobianReport(J, dev, dev <= tol)


@dataclass(frozen=True)
class InjectivityReport:
    count: int
    collisions: list = field(default_factory=list)
    min_separation: float = math.inf

    @property
    def passed(self) -> bool:
        return not self.collisions


def injectivity_check(gens: Sequence, points: Sequence, tol: float = 1e-12) -> InjectivityReport:
    """Distinct characters must have distinct generator values.

    ``points`` are evaluation points (polynomials) or indices (C^k, with
    ``gens`` given as tuples).
    """
    if len(points) < 2:
        raise ValueError("need at least two characters")
    if isinstance(gens[0], Poly):
        images = [chart_psi(tuple(w), gens) for w in points]
        keys = [np.asarray(w, dtype=complex) for w in points]
    else:
        images = [np.array([g[int(i)] for g in gens], dtype=complex) for i in points]
        keys = [np.array([int(i)]) for i in points]
    collisions, sep = [], math.inf
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            same_point = np.allclose(keys[i], keys[j], rtol=0, atol=0)
            d = float(np.max(np.abs(images[i] - images[j])))
            if same_point:
                continue
            sep = min(sep, d)
            if d <= tol:
                collisions.append((points[i], points[j]))
    return InjectivityReport(len(points), collisions, sep)


@dataclass(frozen=True)
class HypothesesReport:
    generators: bool
    non_singular: bool
    exponentiable: bool
    separating: bool

    @property
    def passed(self) -> bool:
        return self.generators and self.non_singular and self.exponentiable and self.separating


def geometric_hypotheses(n: int, samples: int = 16, seed: int = 0) -> HypothesesReport:
    """The reconstruction hypotheses on ``C[z_1..z_n]`` at sampled base points."""
    rng = np.random.default_rng(seed)
    model = EntireModel(n)
    gens_ok = nonsing = expo = sep = True
    for _ in range(samples):
        w0 = tuple(rng.standard_normal(n) + 1j * rng.standard_normal(n))
        cd = cotangent_space(w0)
        gens_ok &= cd.hypothesis_ok and cd.pairing_error <= 1e-10
        pd = PointDerivation(w0, tuple(rng.standard_normal(n) + 1j * rng.standard_normal(n)))
        nonsing &= lift_point_derivation(pd, samples=4, seed=int(rng.integers(2**31)))[1]
        expo &= all(exponentiability_probe(d, w0, g, K=8).radius == math.inf for d in cd.derivations for g in cd.gens)
        a = model.random_element(rng)
        if not a.is_zero():
            pts = [tuple(rng.standard_normal(n)) for _ in range(8)]
            sep &= any(abs(a(w)) > 1e-12 for w in pts)
    return HypothesesReport(bool(gens_ok), bool(nonsing), bool(expo), bool(sep))
