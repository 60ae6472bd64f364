"""Model algebras: exact sparse polynomials, complex matrices, and finite tuples.

Three concrete commutative/non-commutative unital algebras stand in for an
Arens-Michael algebra:

* :class:`EntireModel` -- polynomials in ``n`` variables, the dense subalgebra of
  entire functions on C^n (topologised by the weighted l1 seminorms).
* :class:`MatrixModel` -- ``n x n`` complex matrices with the operator norm.
* :class:`FunctionModel` -- C^k with the pointwise product.

Indices of FunctionModel points are 0-based throughout the package.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "ModelMismatch",
    "Poly",
    "Model",
    "EntireModel",
    "MatrixModel",
    "FunctionModel",
    "Character",
    "SpectralData",
    "character_eval",
    "characters",
    "spectral_radius",
    "spectral_data",
    "separating_character",
    "multi_indices",
]


class ModelMismatch(ValueError):
    """An element or functional was handed to a model it does not belong to."""


def multi_indices(n: int, max_degree: int, min_degree: int = 0):
    """All alpha in N^n with ``min_degree <= |alpha| <= max_degree``, graded order."""
    for d in range(min_degree, max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), d):
            alpha = [0] * n
            for i in combo:
                alpha[i] += 1
            yield tuple(alpha)


class Poly:
    """Immutable sparse polynomial in ``n`` variables with complex coefficients.

    Terms are stored as ``{alpha: coefficient}``; exact zeros are never stored.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Sequence[int], complex] | None = None):
        if n < 1:
            raise ValueError("number of variables must be positive")
        clean: dict[tuple[int, ...], complex] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or min(alpha, default=0) < 0:
                raise ValueError(f"bad multi-index {alpha} for n={n}")
            clean[alpha] = clean.get(alpha, 0j) + complex(c)
        self.n = n
        self._terms = MappingProxyType({a: c for a, c in clean.items() if c != 0})
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, n: int, c: complex = 1.0) -> "Poly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> "Poly":
        alpha = [0] * n
        alpha[i] = 1
        return cls(n, {tuple(alpha): 1.0})

    @classmethod
    def monomial(cls, alpha: Sequence[int], c: complex = 1.0) -> "Poly":
        return cls(len(alpha), {tuple(alpha): c})

    @property
    def terms(self) -> Mapping[tuple[int, ...], complex]:
        return self._terms

    @property
    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((sum(a) for a in self._terms), default=-1)

    def coeff(self, alpha: Sequence[int]) -> complex:
        return self._terms.get(tuple(alpha), 0j)

    def is_zero(self) -> bool:
        return not self._terms

    # arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.n != self.n:
                raise ModelMismatch(f"cannot combine polynomials in {self.n} and {other.n} variables")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Poly.constant(self.n, complex(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for a, c in other._terms.items():
            out[a] = out.get(a, 0j) + c
        return Poly(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return Poly(self.n, {a: c * other for a, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, ...], complex] = {}
        for a, c in self._terms.items():
            for b, d in other._terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, 0j) + c * d
        return Poly(self.n, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / complex(scalar))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result, base = Poly.constant(self.n, 1.0), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and dict(self._terms) == dict(other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def allclose(self, other: "Poly", atol: float = 1e-12) -> bool:
        keys = set(self._terms) | set(other._terms)
        return all(abs(self.coeff(k) - other.coeff(k)) <= atol for k in keys)

    def __call__(self, point: Sequence[complex]) -> complex:
        point = tuple(complex(x) for x in point)
        if len(point) != self.n:
            raise ModelMismatch(f"point of length {len(point)} for polynomial in {self.n} variables")
        total = 0j
        for alpha, c in self._terms.items():
            term = c
            for x, a in zip(point, alpha):
                if a:
                    term *= x**a
            total += term
        return total

    def diff(self, i: int) -> "Poly":
        out = {}
        for alpha, c in self._terms.items():
            if alpha[i]:
                beta = list(alpha)
                beta[i] -= 1
                out[tuple(beta)] = c * alpha[i]
        return Poly(self.n, out)

    def truncate(self, degree: int) -> "Poly":
        return Poly(self.n, {a: c for a, c in self._terms.items() if sum(a) <= degree})

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Composition ``self(g_1, ..., g_n)`` with polynomials ``g_i`` in a common ring."""
        if len(images) != self.n:
            raise ValueError("need one image per variable")
        m = images[0].n
        total = Poly(m)
        cache: dict[tuple[int, int], Poly] = {}
        for alpha, c in self._terms.items():
            term = Poly.constant(m, c)
            for i, a in enumerate(alpha):
                if a:
                    if (i, a) not in cache:
                        cache[(i, a)] = images[i] ** a
                    term = term * cache[(i, a)]
            total = total + term
        return total

    def coefficient_vector(self, basis: Sequence[tuple[int, ...]]) -> np.ndarray:
        return np.array([self.coeff(a) for a in basis], dtype=complex)

    def __repr__(self):
        if not self._terms:
            return "Poly(0)"
        parts = []
        for alpha in sorted(self._terms, key=lambda a: (sum(a), a)):
            c = self._terms[alpha]
            mono = "*".join(
                f"z{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(alpha) if a
            )
            parts.append(f"({c:g})" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(parts) + ")"


class Model:
    """Common interface of the three model algebras."""

    kind: str = ""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def check(self, a) -> None:
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def mul(self, a, b):
        self.check(a)
        self.check(b)
        return self._mul(a, b)

    def add(self, a, b):
        self.check(a)
        self.check(b)
        return a + b

    def scale(self, c: complex, a):
        self.check(a)
        return a * c

    def _mul(self, a, b):
        raise NotImplementedError

    def is_commutative(self) -> bool:
        return True

    def random_element(self, rng: np.random.Generator, **kw):
        raise NotImplementedError

    def sample_elements(self, rng: np.random.Generator, count: int) -> list:
        return [self.random_element(rng) for _ in range(count)]

    def is_zero(self, a, atol: float = 0.0) -> bool:
        raise NotImplementedError


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@dataclass(frozen=True)
class EntireModel(Model):
    """Polynomials in ``n`` complex variables."""

    n: int
    kind = "entire"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def dim(self) -> int:
        return self.n

    def check(self, a) -> None:
        if not isinstance(a, Poly) or a.n != self.n:
            raise ModelMismatch(f"{a!r} is not an element of {self}")

    def one(self) -> Poly:
        return Poly.constant(self.n, 1.0)

    def zero(self) -> Poly:
        return Poly(self.n)

    def variable(self, i: int) -> Poly:
        return Poly.variable(self.n, i)

    def variables(self) -> list[Poly]:
        return [Poly.variable(self.n, i) for i in range(self.n)]

    def _mul(self, a, b):
        return a * b

    def random_element(self, rng, degree: int = 3, density: float = 0.6) -> Poly:
        terms = {}
        for alpha in multi_indices(self.n, degree):
            if rng.random() < density:
                terms[alpha] = complex(*rng.standard_normal(2))
        return Poly(self.n, terms)

    def monomials(self, max_degree: int) -> list[Poly]:
        return [Poly.monomial(a) for a in multi_indices(self.n, max_degree)]

    def is_zero(self, a, atol: float = 0.0) -> bool:
        return all(abs(c) <= atol for c in a.terms.values())


@dataclass(frozen=True)
class MatrixModel(Model):
    """``n x n`` complex matrices; the unit is the identity."""

    n: int
    kind = "matrix"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def dim(self) -> int:
        return self.n

    def check(self, a) -> None:
        if not isinstance(a, np.ndarray) or a.shape != (self.n, self.n):
            raise ModelMismatch(f"expected a {self.n}x{self.n} matrix")

    def one(self) -> np.ndarray:
        return np.eye(self.n, dtype=complex)

    def zero(self) -> np.ndarray:
        return np.zeros((self.n, self.n), dtype=complex)

    def _mul(self, a, b):
        return a @ b

    def is_commutative(self) -> bool:
        return self.n == 1

    def random_element(self, rng, scale: float = 1.0) -> np.ndarray:
        return scale * _complex_normal(rng, (self.n, self.n))

    def is_zero(self, a, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(a) <= atol))


@dataclass(frozen=True)
class FunctionModel(Model):
    """C^k with the pointwise product: functions on ``k`` points."""

    k: int
    kind = "function"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")

    @property
    def dim(self) -> int:
        return self.k

    def check(self, a) -> None:
        if not isinstance(a, np.ndarray) or a.shape != (self.k,):
            raise ModelMismatch(f"expected a length-{self.k} tuple")

    def element(self, values: Iterable[complex]) -> np.ndarray:
        a = np.asarray(list(values), dtype=complex)
        self.check(a)
        return a

    def one(self) -> np.ndarray:
        return np.ones(self.k, dtype=complex)

    def zero(self) -> np.ndarray:
        return np.zeros(self.k, dtype=complex)

    def indicator(self, indices: Iterable[int]) -> np.ndarray:
        a = self.zero()
        a[list(indices)] = 1.0
        return a

    def _mul(self, a, b):
        return a * b

    def random_element(self, rng, zero_prob: float = 0.0) -> np.ndarray:
        a = _complex_normal(rng, self.k)
        if zero_prob:
            a[rng.random(self.k) < zero_prob] = 0.0
        return a

    def is_zero(self, a, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(a) <= atol))


@dataclass(frozen=True)
class Character:
    """A character of a commutative model.

    For :class:`EntireModel` ``at`` is the evaluation point ``w`` (a tuple of
    complex numbers); for :class:`FunctionModel` it is the coordinate index.
    """

    model: Model
    at: object

    def __post_init__(self):
        if isinstance(self.model, EntireModel):
            w = tuple(complex(x) for x in np.atleast_1d(self.at))
            if len(w) != self.model.n:
                raise ModelMismatch("evaluation point has the wrong dimension")
            object.__setattr__(self, "at", w)
        elif isinstance(self.model, FunctionModel):
            i = int(self.at)
            if not 0 <= i < self.model.k:
                raise ModelMismatch(f"index {i} outside 0..{self.model.k - 1}")
            object.__setattr__(self, "at", i)
        else:
            raise ModelMismatch("characters are only modelled on commutative models")

    def __call__(self, a) -> complex:
        return character_eval(self, a)


def character_eval(chi: Character, a) -> complex:
    """Gelfand transform value ``chi(a)``."""
    chi.model.check(a)
    if isinstance(chi.model, EntireModel):
        return a(chi.at)
    return complex(a[chi.at])


def characters(model: FunctionModel) -> list[Character]:
    """All characters of C^k: the coordinate projections."""
    return [Character(model, i) for i in range(model.k)]


def spectral_radius(a, p, iterations: int, model: Model | None = None) -> float:
    """Gelfand-formula iterate ``p(a^(2^K))^(1/2^K)``.

    The powers are renormalised after each squaring so the intermediate
    norms never overflow; ``log p(a^(2^j))`` is carried instead.
    """
    if iterations < 1:
        raise ValueError("iteration count must be at least 1")
    model = model or p.model
    weights = getattr(p, "weights", None)
    if isinstance(a, Poly) and weights is not None and all(r > 0 for r in weights):
        # f(z) -> f(r z) is an isometry p_r -> p_1; unit weights keep the
        # normalised coefficients of high powers representable
        a = a.substitute([Poly.monomial(np.eye(a.n, dtype=int)[i], r) for i, r in enumerate(weights)])
        p = type(p)((1.0,) * a.n)
    norm = p(a)
    if norm == 0.0:
        return 0.0
    log_norm = math.log(norm)
    b = model.scale(1.0 / norm, a)
    for _ in range(iterations):
        sq = model.mul(b, b)
        s = p(sq)
        if s == 0.0:
            return 0.0
        log_norm = 2.0 * log_norm + math.log(s)
        b = model.scale(1.0 / s, sq)
    return math.exp(log_norm / 2.0**iterations)


@dataclass(frozen=True)
class SpectralData:
    element: object
    spectrum: tuple[complex, ...]
    radius: float


def spectral_data(model: Model, a) -> SpectralData:
    """Exact spectrum on the finite-spectrum models."""
    model.check(a)
    if isinstance(model, MatrixModel):
        spec = np.linalg.eigvals(a)
    elif isinstance(model, FunctionModel):
        spec = np.asarray(a)
    else:
        raise TypeError("spectra are only computed on finite-spectrum models; use spectral_radius")
    spec = tuple(complex(x) for x in spec)
    return SpectralData(a, spec, max((abs(x) for x in spec), default=0.0))


def separating_character(model: Model, a) -> Character | None:
    """A character that does not vanish on ``a``, or ``None`` when ``a == 0``.

    For polynomials the search runs over the grid ``{0..d}^n``; a nonzero
    polynomial of degree ``d`` cannot vanish on all of it.
    """
    model.check(a)
    if isinstance(model, FunctionModel):
        nz = np.flatnonzero(a)
        return Character(model, int(nz[0])) if nz.size else None
    if isinstance(model, EntireModel):
        if a.is_zero():
            return None
        grid = range(a.degree + 1)
        for w in itertools.product(grid, repeat=model.n):
            if a(w) != 0:
                return Character(model, w)
        raise AssertionError("nonzero polynomial vanished on a full grid")
    raise TypeError("no characters on a non-commutative model")
