"""States, pure states and spectral states of the model algebras.

A :class:`Functional` is stored per model as

* a moment table ``{alpha: f(z^alpha)}`` up to a truncation degree (polynomials),
* a matrix ``F`` acting by ``a -> tr(F a)`` (matrices),
* a weight vector ``lam`` acting by ``a -> sum lam_i a_i`` (C^k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .algebra import (
    EntireModel,
    FunctionModel,
    MatrixModel,
    Model,
    ModelMismatch,
    Poly,
    multi_indices,
    spectral_data,
)
from .seminorms import ScaledOperatorNorm, Seminorm, SubsetMax, WeightedL1, ZeroSeminorm

__all__ = [
    "STATE_TOL",
    "RANK_TOL",
    "E",
    "Functional",
    "evaluation_functional",
    "point_mass",
    "vector_state",
    "trace_state",
    "density_state",
    "combine",
    "dual_norm",
    "StateVerdict",
    "is_state",
    "midpoint_extremality",
    "pure_states_sample",
    "random_density_matrix",
    "numerical_radius",
    "BKReport",
    "bohnenblust_karlin_check",
    "state_supremum",
    "RankReport",
    "moore_spanning_check",
    "SpectralVerdict",
    "is_spectral_state",
    "spectral_witness_family",
    "find_spectral_violation",
    "MonotonicityVerdict",
    "state_monotonicity_check",
    "ClosednessReport",
    "state_set_closedness_probe",
]

STATE_TOL = 1e-9
RANK_TOL = 1e-8
E = math.e


@dataclass(frozen=True, eq=False)
class Functional:
    """A continuous linear functional on one of the models."""

    model: Model
    data: object
    degree: int | None = None  # truncation of the moment table (polynomials only)

    def __call__(self, a) -> complex:
        self.model.check(a)
        if isinstance(self.model, EntireModel):
            if a.degree > self.degree:
                raise ValueError(f"element of degree {a.degree} beyond the moment table ({self.degree})")
            return sum((c * self.data.get(al, 0j) for al, c in a.terms.items()), 0j)
        if isinstance(self.model, MatrixModel):
            return complex(np.sum(self.data.T * a))
        return complex(np.dot(self.data, a))

    def at_one(self) -> complex:
        return self(self.model.one())

    def vector(self) -> np.ndarray:
        """Coordinates in the dual basis of the model's standard basis."""
        if isinstance(self.model, MatrixModel):
            return np.asarray(self.data).T.reshape(-1)
        if isinstance(self.model, FunctionModel):
            return np.asarray(self.data)
        alphas = list(multi_indices(self.model.n, self.degree))
        return np.array([self.data.get(al, 0j) for al in alphas])

    def __repr__(self):
        return f"Functional({self.model}, degree={self.degree})"


def evaluation_functional(model: EntireModel, w: Sequence[complex], degree: int) -> Functional:
    """The character ``a -> a(w)`` as a moment table ``alpha -> w^alpha``."""
    w = tuple(complex(x) for x in np.atleast_1d(w))
    if len(w) != model.n:
        raise ModelMismatch("point dimension does not match the model")
    moments = {al: complex(math.prod(x**k for x, k in zip(w, al))) for al in multi_indices(model.n, degree)}
    return Functional(model, moments, degree)


def point_mass(model: FunctionModel, i: int) -> Functional:
    lam = np.zeros(model.k, dtype=complex)
    lam[i] = 1.0
    return Functional(model, lam)


def vector_state(model: MatrixModel, x: Sequence[complex]) -> Functional:
    """``a -> x* a x`` for a unit vector ``x``."""
    x = np.asarray(x, dtype=complex)
    x = x / np.linalg.norm(x)
    return Functional(model, np.outer(x, x.conj()))


def density_state(model: MatrixModel, rho: np.ndarray) -> Functional:
    return Functional(model, np.asarray(rho, dtype=complex))


def trace_state(model: MatrixModel) -> Functional:
    """The normalised trace ``tr(a)/n``."""
    return Functional(model, np.eye(model.n, dtype=complex) / model.n)


def combine(weights: Sequence[float], functionals: Sequence[Functional]) -> Functional:
    """Linear combination of functionals on the same model."""
    model = functionals[0].model
    if any(f.model != model for f in functionals):
        raise ModelMismatch("functionals on different models")
    if isinstance(model, EntireModel):
        degree = min(f.degree for f in functionals)
        out = {}
        for t, f in zip(weights, functionals):
            for al, v in f.data.items():
                if sum(al) <= degree:
                    out[al] = out.get(al, 0j) + t * v
        return Functional(model, out, degree)
    return Functional(model, sum(t * np.asarray(f.data) for t, f in zip(weights, functionals)))


def random_density_matrix(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    g = rng.standard_normal((n, rank or n)) + 1j * rng.standard_normal((n, rank or n))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def dual_norm(f: Functional, p: Seminorm, degree: int | None = None) -> float:
    """``sup_{p(a) <= 1} |f(a)|`` on the (truncated) representative space.

    Returns ``inf`` when ``f`` charges a direction on which ``p`` vanishes.
    """
    if f.model != p.model:
        raise ModelMismatch("functional and seminorm on different models")
    if isinstance(p, ZeroSeminorm):
        return 0.0 if not np.any(np.abs(f.vector()) > 0) else math.inf
    if isinstance(p, WeightedL1):
        deg = f.degree if degree is None else min(degree, f.degree)
        best = 0.0
        for al, v in f.data.items():
            if sum(al) > deg or v == 0:
                continue
            w = p.monomial_value(al)
            if w == 0.0:
                return math.inf
            best = max(best, abs(v) / w)
        return best
    if isinstance(p, SubsetMax):
        lam = np.abs(np.asarray(f.data))
        outside = [i for i in range(p.k) if i not in p.subset]
        if outside and np.any(lam[outside] > 0):
            return math.inf
        return float(lam.sum())
    if isinstance(p, ScaledOperatorNorm):
        return float(np.linalg.norm(np.asarray(f.data), "nuc")) / p.scale
    raise TypeError(f"no dual norm for {type(p).__name__}")


@dataclass(frozen=True, eq=False)
class StateVerdict:
    functional: Functional
    seminorm: Seminorm
    dual_norm: float
    value_at_one: complex
    is_state: bool
    is_pure: str = "undetermined"  # "yes" | "no" | "undetermined"
    is_spectral: str = "undetermined"
    witness: object = None


def is_state(f: Functional, p: Seminorm, tol: float = STATE_TOL, degree: int | None = None) -> StateVerdict:
    """``||f||_p* == f(1) == 1`` within ``tol``."""
    dn = dual_norm(f, p, degree)
    one = f.at_one()
    state = abs(one - 1.0) <= tol and abs(dn - one.real) <= tol
    pure = "undetermined"
    if state:
        pure = _purity(f)
    return StateVerdict(f, p, dn, one, state, pure)


def _purity(f: Functional) -> str:
    model = f.model
    if isinstance(model, FunctionModel):
        return "yes" if np.count_nonzero(np.abs(f.data) > STATE_TOL) == 1 else "no"
    if isinstance(model, MatrixModel):
        ev = np.linalg.eigvalsh((f.data + f.data.conj().T) / 2)
        return "yes" if np.sum(ev > STATE_TOL) == 1 else "no"
    return "undetermined"


def midpoint_extremality(
    f: Functional,
    p: Seminorm,
    rng: np.random.Generator,
    trials: int = 64,
    step: float = 1e-3,
) -> tuple[bool, object]:
    """Search for ``f = (g + h)/2`` with ``g != h`` both states.

    Perturbation directions ``d`` with ``d(1) = 0`` are tried; ``f +- step*d``
    both being states exhibits ``f`` as a midpoint.  On C^k all edge
    directions ``e_i - e_j`` are tried exhaustively.  Returns
    ``(extreme, witness_direction)``.
    """
    model = f.model
    directions = []
    if isinstance(model, FunctionModel):
        for i in range(model.k):
            for j in range(model.k):
                if i != j:
                    d = np.zeros(model.k, dtype=complex)
                    d[i], d[j] = 1.0, -1.0
                    directions.append(d)
    elif isinstance(model, MatrixModel):
        n = model.n
        for _ in range(trials if n > 1 else 0):  # M_1 has no traceless Hermitian directions
            h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            h = (h + h.conj().T) / 2
            h -= np.trace(h) / n * np.eye(n)
            directions.append(h / np.linalg.norm(h))
    else:
        raise TypeError("midpoint search is only implemented on finite-dimensional models")
    for d in directions:
        g = Functional(model, np.asarray(f.data) + step * d)
        h = Functional(model, np.asarray(f.data) - step * d)
        if is_state(g, p).is_state and is_state(h, p).is_state:
            return False, d
    return True, None


def pure_states_sample(p: Seminorm, count: int, seed: int = 0, degree: int = 20) -> list[Functional]:
    """Constructive pure states of ``A_p``.

    Vector states with random unit vectors (matrices), the point masses of
    ``S`` (C^k, at most ``count`` of them), and characters at random points
    of the closed polydisc of radii ``r`` (polynomials).
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    model = p.model
    if isinstance(p, ScaledOperatorNorm):
        out = []
        for _ in range(count):
            x = rng.standard_normal(model.n) + 1j * rng.standard_normal(model.n)
            out.append(vector_state(model, x))
        return out
    if isinstance(p, SubsetMax):
        return [point_mass(model, i) for i in sorted(p.subset)[:count]]
    if isinstance(p, WeightedL1):
        out = []
        for _ in range(count):
            rad = np.array(p.weights) * np.sqrt(rng.uniform(0, 1, model.n))
            w = rad * np.exp(2j * np.pi * rng.uniform(0, 1, model.n))
            out.append(evaluation_functional(model, w, degree))
        return out
    raise TypeError(f"no pure-state construction for {type(p).__name__}")


def numerical_radius(a: np.ndarray, grid: int = 360) -> float:
    """``max_theta lambda_max((e^{i theta} a + e^{-i theta} a*)/2)`` over a uniform angle grid.

    Every grid value is a lower bound for the numerical radius, so doubling
    the grid never decreases the result.
    """
    if grid < 8:
        raise ValueError("angle grid must have at least 8 points")
    a = np.asarray(a, dtype=complex)
    thetas = 2 * np.pi * np.arange(grid) / grid
    phases = np.exp(1j * thetas)[:, None, None]
    h = (phases * a + phases.conj() * a.conj().T) / 2
    return float(np.max(np.linalg.eigvalsh(h)[:, -1]))


def state_supremum(a, p: Seminorm, grid: int = 720) -> tuple[float, bool]:
    """``sup_{f in S(A_p)} |f(a)|`` and whether the value is exact.

    Matrices: the numerical radius (states of ``M_n`` are density matrices).
    C^k: ``max_{i in S} |a_i|``.  Polynomials: the maximising state has
    moments ``r^alpha`` with phases aligned to the coefficients, which gives
    exactly ``p_r(a)``.
    """
    if isinstance(p, ScaledOperatorNorm):
        if p.scale != 1.0:
            raise ValueError("the state supremum needs a unital norm")
        return numerical_radius(a, grid), True
    if isinstance(p, SubsetMax):
        return p(a), True
    if isinstance(p, WeightedL1):
        f = _aligned_state(a, p)
        return abs(f(a)), True
    raise TypeError(f"no state supremum for {type(p).__name__}")


def _aligned_state(a: Poly, p: WeightedL1) -> Functional:
    n = len(p.weights)
    c0 = a.coeff((0,) * n)
    base = np.angle(c0) if c0 != 0 else 0.0
    moments = {}
    for al in multi_indices(n, max(a.degree, 0)):
        c = a.coeff(al)
        phase = np.exp(1j * (base - np.angle(c))) if c != 0 else 1.0
        moments[al] = p.monomial_value(al) * phase
    moments[(0,) * n] = 1.0
    return Functional(EntireModel(n), moments, max(a.degree, 0))


@dataclass(frozen=True)
class BKReport:
    value: float  # p(a)
    state_sup: float
    exact: bool
    lower_ok: bool
    upper_ok: bool
    character_sup: float | None = None

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok

    @property
    def ratio(self) -> float:
        return self.value / self.state_sup if self.state_sup else math.inf


def bohnenblust_karlin_check(a, p: Seminorm, rtol: float = STATE_TOL, grid: int = 720) -> BKReport:
    """``sup_S |f(a)| <= p(a) <= e * sup_S |f(a)|``.

    Raises ``AssertionError`` when the upper bound fails on a model where the
    state supremum is computed exactly.
    """
    model = p.model
    model.check(a)
    if model.is_zero(a):
        raise ValueError("a must be nonzero")
    if abs(p(model.one()) - 1.0) > rtol:
        raise ValueError("the inequality concerns unital seminorms")
    val = p(a)
    sup, exact = state_supremum(a, p, grid)
    lower = sup <= val * (1 + rtol)
    upper = val <= E * sup * (1 + rtol)
    char_sup = None
    if isinstance(p, WeightedL1):
        # characters alone only give a lower bound for the state supremum
        char_sup = max(abs(f(a)) for f in pure_states_sample(p, 256, 0, max(a.degree, 0)))
    report = BKReport(val, sup, exact, lower, upper, char_sup)
    if exact and not upper:
        raise AssertionError(f"p(a)={val} exceeds e*{sup}")
    return report


@dataclass(frozen=True)
class RankReport:
    rank: int
    expected: int
    singular_values: tuple[float, ...]
    gap: float  # smallest singular value kept

    @property
    def full(self) -> bool:
        return self.rank == self.expected


def moore_spanning_check(model: Model, samples: int, seed: int = 0, threshold: float = RANK_TOL) -> RankReport:
    """Numeric rank of a matrix whose rows are sampled pure states."""
    if isinstance(model, MatrixModel):
        expected = model.n**2
        p = ScaledOperatorNorm(model.n)
    elif isinstance(model, FunctionModel):
        expected = model.k
        p = SubsetMax(model.k, frozenset(range(model.k)))
    else:
        raise TypeError("Moore spanning check runs on finite-dimensional models")
    if samples < expected:
        raise ValueError(f"need at least {expected} samples")
    states = pure_states_sample(p, samples, seed)
    rows = np.array([f.vector() for f in states])
    sv = np.linalg.svd(rows, compute_uv=False)
    rank = int(np.sum(sv > threshold))
    gap = float(sv[rank - 1]) if rank else 0.0
    return RankReport(rank, expected, tuple(float(s) for s in sv), gap)


@dataclass(frozen=True, eq=False)
class SpectralVerdict:
    spectral: bool
    witness: object = None
    value: float | None = None
    radius: float | None = None
    checked: int = 0


def is_spectral_state(f: Functional, witnesses: Iterable, tol: float = STATE_TOL) -> SpectralVerdict:
    """``|f(a)| <= rho(a)`` for every witness; the first violation is returned."""
    witnesses = list(witnesses)
    if not witnesses:
        raise ValueError("need at least one witness")
    for count, a in enumerate(witnesses, 1):
        rho = spectral_data(f.model, a).radius
        val = abs(f(a))
        if val > rho + tol:
            return SpectralVerdict(False, a, val, rho, count)
    return SpectralVerdict(True, checked=len(witnesses))


def spectral_witness_family(model: MatrixModel) -> list[np.ndarray]:
    """Rank-one nilpotents ``W E_ij W*`` (i != j) in the standard and Fourier bases.

    Any state that is not the normalised trace is nonzero on one of them,
    while each has spectral radius 0.
    """
    n = model.n
    fourier = np.exp(2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n) / np.sqrt(n)
    out = []
    for w in (np.eye(n), fourier):
        for i in range(n):
            for j in range(n):
                if i != j:
                    out.append(np.outer(w[:, i], w[:, j].conj()))
    return out


def find_spectral_violation(f: Functional, rng: np.random.Generator, extra: int = 16, tol: float = STATE_TOL):
    """Search the nilpotent family plus random elements for a spectral-state violation."""
    model = f.model
    witnesses = spectral_witness_family(model) + [model.random_element(rng) for _ in range(extra)]
    return is_spectral_state(f, witnesses, tol)


@dataclass(frozen=True)
class MonotonicityVerdict:
    state_for_q: bool
    state_for_p: bool
    q_dual_norm: float
    p_dual_norm: float
    p_unital: bool
    holds: bool


def state_monotonicity_check(
    f: Functional,
    q: Seminorm,
    p: Seminorm,
    *,
    probes: Iterable | None = None,
    tol: float = STATE_TOL,
) -> MonotonicityVerdict:
    """If ``f`` is a state for ``q`` and ``q <= p``, then ``||f||_p* <= f(1)``.

    For unital ``p`` that inequality makes ``f`` a state of ``A_p``; for a
    non-unital ``p`` (e.g. ``2*||.||_op``) only the inequality is asserted.
    """
    from .seminorms import pointwise_le, probe_elements

    elems = list(probes) if probes is not None else probe_elements(p.model, np.random.default_rng(0))
    bad = pointwise_le(q, p, elems)
    if bad is not None:
        raise ValueError("hypothesis q <= p fails on the sample", bad)
    vq, vp = is_state(f, q, tol), is_state(f, p, tol)
    one = f.at_one().real
    p_unital = abs(p(p.model.one()) - 1.0) <= tol
    holds = (not vq.is_state) or (vp.dual_norm <= one + tol and (vp.is_state or not p_unital))
    return MonotonicityVerdict(vq.is_state, vp.is_state, vq.dual_norm, vp.dual_norm, p_unital, holds)


@dataclass(frozen=True)
class ClosednessReport:
    trials: int
    max_deviation: float
    all_states: bool


def state_set_closedness_probe(p: Seminorm, trials: int = 50, seed: int = 0, length: int = 200) -> ClosednessReport:
    """Limits of convergent sequences of states are states.

    Each trial draws two pure states ``g, h`` and a target ``t``; the sequence
    ``f_j = t_j g + (1 - t_j) h`` with ``t_j -> t`` and its Cesaro means are
    followed to the limit, which is tested with :func:`is_state`.
    """
    model = p.model
    if isinstance(model, EntireModel):
        raise TypeError("closedness probe needs a finite-dimensional model")
    rng = np.random.default_rng(seed)
    pool = pure_states_sample(p, 16, seed)
    worst, ok = 0.0, True
    for _ in range(trials):
        i, j = rng.integers(len(pool), size=2)
        g, h = pool[i], pool[j]
        t = rng.uniform()
        seq = np.clip(t + (0.5 - rng.uniform(size=length)) * 0.9 ** np.arange(length), 0.0, 1.0)
        cesaro = np.cumsum(seq) / np.arange(1, length + 1)
        for limit_t in (seq[-1], cesaro[-1]):
            limit = combine([limit_t, 1 - limit_t], [g, h])
            v = is_state(limit, p)
            worst = max(worst, abs(v.dual_norm - v.value_at_one.real), abs(v.value_at_one - 1.0))
            ok = ok and v.is_state
    return ClosednessReport(trials, worst, ok)
