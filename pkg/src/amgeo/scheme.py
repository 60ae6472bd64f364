"""The sections presheaf ``U -> O_A(U)`` over basis opens, and its sheaf checks.

Sections over ``U`` are elements of the algebra read through the family
``P(U)`` of chart seminorms whose marked sets lie in ``U``.  On C^k the limit
algebra is ``C^U`` and sections are stored as k-vectors zeroed off ``U``;
polynomial sections keep their coefficients under restriction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import FunctionModel, Model, Poly
from .functor import gelfand_member
from .seminorms import Seminorm, SeminormChart, SubsetMax, WeightedL1, ZeroSeminorm
from .topology import (
    Chain,
    FinitePoints,
    IntersectionRep,
    P_of,
    SubsetRep,
    UnionRep,
    Whole,
    basis_open,
    is_A_convex,
    is_full,
    marked_inside,
    minimal_seminorm,
    polydisc_bounds,
    polydisc_contained,
)

__all__ = [
    "NotContainedError",
    "IncompatibleFamilyError",
    "HypothesisError",
    "Section",
    "SectionAlgebra",
    "PresheafInstance",
    "SeparatednessReport",
    "separatedness_check",
    "GlueResult",
    "completeness_check",
    "SpectrumReport",
    "spectrum_of_sections",
    "AffineReport",
    "verify_affine_scheme",
]


class NotContainedError(ValueError):
    def __init__(self, msg: str, witness):
        super().__init__(msg)
        self.witness = witness


class IncompatibleFamilyError(ValueError):
    def __init__(self, msg: str, witness):
        super().__init__(msg)
        self.witness = witness


class HypothesisError(ValueError):
    pass


def _is_zero_seminorm(p: Seminorm) -> bool:
    return isinstance(p, ZeroSeminorm) or (isinstance(p, SubsetMax) and not p.subset)


@dataclass(frozen=True, eq=False)
class SectionAlgebra:
    """Handle on ``O_A(U)``: arithmetic plus the seminorm family ``P(U)``."""

    presheaf: "PresheafInstance"
    open: SubsetRep
    family: object  # tuple of chart members, or a PredicateFamily

    @property
    def model(self) -> Model:
        return self.presheaf.model

    def family_sample(self, rng: np.random.Generator, count: int = 32) -> list[Seminorm]:
        if isinstance(self.family, tuple):
            return list(self.family)
        return self.family.sample(rng, count)

    def nonzero_family(self, rng: np.random.Generator, count: int = 32) -> list[Seminorm]:
        return [p for p in self.family_sample(rng, count) if not _is_zero_seminorm(p)]

    @property
    def degenerate(self) -> bool:
        """No marked set lies in ``U``."""
        return not self.nonzero_family(np.random.default_rng(0), 16)

    def in_family(self, p: Seminorm) -> bool:
        return p in self.family

    def normalise(self, a):
        if isinstance(self.model, FunctionModel):
            out = np.zeros(self.model.k, dtype=complex)
            idx = [i for i in range(self.model.k) if i in self.open]
            out[idx] = np.asarray(a)[idx]
            return out
        return a

    def section(self, a) -> "Section":
        self.model.check(a)
        return Section(self.normalise(a), self)

    def one(self) -> "Section":
        return self.section(self.model.one())

    def zero(self) -> "Section":
        return self.section(self.model.zero())


@dataclass(frozen=True, eq=False)
class Section:
    element: object
    algebra: SectionAlgebra

    @property
    def open(self) -> SubsetRep:
        return self.algebra.open

    def value(self, p: Seminorm) -> float:
        if not self.algebra.in_family(p):
            raise ValueError(f"{p!r} is not in the family of this open")
        return p(self.element)

    def _binary(self, other: "Section", op) -> "Section":
        if other.algebra is not self.algebra:
            raise ValueError("sections live over different opens")
        return self.algebra.section(op(self.element, other.element))

    def __add__(self, other):
        return self._binary(other, self.algebra.model.add)

    def __mul__(self, other):
        return self._binary(other, self.algebra.model.mul)

    def __sub__(self, other):
        model = self.algebra.model
        return self._binary(other, lambda a, b: model.add(a, model.scale(-1, b)))

    def equals(self, other: "Section", atol: float = 1e-12) -> bool:
        a, b = self.element, other.element
        if isinstance(a, Poly):
            return a.allclose(b, atol)
        return bool(np.allclose(a, b, rtol=0, atol=atol))

    def is_zero(self, atol: float = 0.0) -> bool:
        return self.algebra.model.is_zero(self.element, atol)


@dataclass(frozen=True, eq=False)
class PresheafInstance:
    """``O_A`` for one model and chart; opens are subset representations."""

    model: Model
    chart: SeminormChart
    samples: int = 256  # points used to certify open containment on polynomials

    def sections(self, U: SubsetRep) -> SectionAlgebra:
        return SectionAlgebra(self, U, P_of(U, self.chart))

    def contained(self, V: SubsetRep, U: SubsetRep, seed: int = 0):
        """``V ⊆ U`` as ``(verdict, witness)``; exact on C^k."""
        if isinstance(self.model, FunctionModel):
            for i in range(self.model.k):
                if i in V and i not in U:
                    return False, i
            return True, None
        exact = polydisc_contained(V, U)
        if exact is not None:
            return exact, None if exact else tuple(complex(r) for r in polydisc_bounds(V)[0])
        pts = V.sample(np.random.default_rng(seed), self.samples)
        pts += [p for s in V.seed_seminorms()[:8] if isinstance(s, WeightedL1) for p in [tuple(complex(r) for r in s.weights)]]
        for w in pts:
            if w not in U:
                return False, w
        return True, None

    def restrict(self, f: Section, V: SubsetRep) -> Section:
        ok, wit = self.contained(V, f.open)
        if not ok:
            raise NotContainedError("restriction target is not inside the open", wit)
        return self.sections(V).section(f.element)

    def restrict_to(self, f: Section, alg: SectionAlgebra) -> Section:
        ok, wit = self.contained(alg.open, f.open)
        if not ok:
            raise NotContainedError("restriction target is not inside the open", wit)
        return alg.section(f.element)


@dataclass(frozen=True)
class SeparatednessReport:
    sections: int
    null_sections: int
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def separatedness_check(
    sheaf: PresheafInstance,
    cover: Sequence[SubsetRep],
    elements: Sequence,
    seed: int = 0,
) -> SeparatednessReport:
    """A section over the union whose restrictions are null for every
    ``p in ∪ P(U_i)`` must be zero."""
    rng = np.random.default_rng(seed)
    union = cover[0] if len(cover) == 1 else _union(cover)
    total = sheaf.sections(union)
    algs = [sheaf.sections(U) for U in cover]
    fams = [alg.family_sample(rng, 32) for alg in algs]
    bad, nulls = [], 0
    for a in elements:
        s = total.section(a)
        restricted = [sheaf.restrict_to(s, alg) for alg in algs]
        null = all(p(r.element) == 0.0 for r, fam in zip(restricted, fams) for p in fam)
        if null:
            nulls += 1
            if not s.is_zero():
                bad.append(a)
    return SeparatednessReport(len(elements), nulls, bad)


def _union(cover: Sequence[SubsetRep]) -> SubsetRep:
    return UnionRep(tuple(cover))


@dataclass(frozen=True)
class GlueResult:
    glued: Section | None
    obstruction: str | None = None

    @property
    def glues(self) -> bool:
        return self.glued is not None


def completeness_check(sheaf: PresheafInstance, cover: Sequence[SubsetRep], family: Sequence[Section], seed: int = 0) -> GlueResult:
    """Glue compatible local sections over the union of ``cover``.

    Raises :class:`IncompatibleFamilyError` (with the overlap witness) when
    two sections disagree on an overlap.  A compatible family that cannot be
    represented by one global element is returned with an obstruction note.
    """
    if len(cover) != len(family):
        raise ValueError("one section per open is required")
    rng = np.random.default_rng(seed)
    for i in range(len(cover)):
        for j in range(i + 1, len(cover)):
            V = IntersectionRep((cover[i], cover[j]))
            if not V.sample(rng, 8):
                continue  # empty overlap, nothing to compare
            fi = sheaf.sections(V).section(family[i].element)
            fj = sheaf.sections(V).section(family[j].element)
            if not fi.equals(fj):
                raise IncompatibleFamilyError(f"sections {i} and {j} disagree on their overlap", (i, j, V))
    union = _union(cover) if len(cover) > 1 else cover[0]
    total = sheaf.sections(union)
    model = sheaf.model
    if isinstance(model, FunctionModel):
        out = np.zeros(model.k, dtype=complex)
        for U, f in zip(cover, family):
            for i in range(model.k):
                if i in U:
                    out[i] = f.element[i]
        glued = total.section(out)
    else:
        first = family[0].element
        if not all(f.element.allclose(first) for f in family):
            return GlueResult(None, "local sections are distinct polynomials; no global element restricts to all")
        glued = total.section(first)
    for U, f in zip(cover, family):
        if not sheaf.sections(U).section(glued.element).equals(f):
            return GlueResult(None, "glued element does not restrict to the given family")
    return GlueResult(glued)


@dataclass(frozen=True)
class SpectrumReport:
    inside_checked: int
    outside_checked: int
    missing: list = field(default_factory=list)  # points of U that are not continuous characters
    extra: list = field(default_factory=list)  # continuous characters outside U
    characters: int | None = None  # exact count on C^k

    @property
    def passed(self) -> bool:
        return not self.missing and not self.extra


def spectrum_of_sections(sheaf: PresheafInstance, U: SubsetRep, budget: int = 200, seed: int = 0) -> SpectrumReport:
    """Compare the ``P(U)``-continuous characters with the points of ``U``."""
    if not is_full(U, seed=seed).full or not is_A_convex(U, sheaf.chart, seed=seed).a_convex:
        raise HypothesisError("the open must be full and A-convex")
    rng = np.random.default_rng(seed)
    alg = sheaf.sections(U)
    fam = alg.family_sample(rng, 64)
    model = sheaf.model
    missing, extra = [], []
    if isinstance(model, FunctionModel):
        chars = [i for i in range(model.k) if any(gelfand_member(p, i) for p in fam)]
        missing = [i for i in range(model.k) if i in U and i not in chars]
        extra = [i for i in chars if i not in U]
        inside = sum(1 for i in range(model.k) if i in U)
        return SpectrumReport(inside, model.k - inside, missing, extra, len(chars))
    inside_pts = U.sample(rng, budget)
    for w in inside_pts:
        pm = minimal_seminorm(model, w).seminorm
        if not marked_inside(U, pm)[0]:
            missing.append(w)
    box = Whole(model).sample(rng, budget)
    outside_pts = [w for w in box if w not in U]
    for w in outside_pts:
        if any(gelfand_member(p, w) for p in fam):
            extra.append(w)
    return SpectrumReport(len(inside_pts), len(outside_pts), missing, extra)


@dataclass(frozen=True)
class AffineReport:
    points: int
    failures: list = field(default_factory=list)
    squares: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures


def _restricted_chart(chart: SeminormChart, alg: SectionAlgebra) -> SeminormChart:
    if chart.members:
        return SeminormChart(chart.model, tuple(p for p in chart.members if alg.in_family(p)), label="P(U)")
    fam = alg.family

    def sampler(rng):
        return fam.sample(rng, 4)[0]

    return SeminormChart(chart.model, (), sampler, lambda p: p in chart and p in fam, label="P(U)")


EXHAUSTIVE_K = 6  # above this many points, opens on C^k are sampled


def _random_subsets(pts: list, rng: np.random.Generator, count: int, keep=None) -> list[tuple]:
    out = []
    for _ in range(count):
        chosen = [p for p in pts if rng.random() < 0.5 or p == keep]
        out.append(tuple(chosen))
    return out


def _basis_opens_around(model: Model, m, rng: np.random.Generator, scale: float = 1.0) -> list[SubsetRep]:
    """Every open containing ``m`` on small C^k; one increasing-disc open on polynomials."""
    if isinstance(model, FunctionModel):
        k = model.k
        if k > EXHAUSTIVE_K:
            return [FinitePoints(model, s) for s in _random_subsets(list(range(k)), rng, 4, int(m))]
        return [FinitePoints(model, [i for i in range(k) if mask >> i & 1]) for mask in range(2**k) if mask >> int(m) & 1]
    mods = np.abs(np.asarray(m, dtype=complex))
    limit = tuple(float(x) + scale for x in mods)
    start = tuple(x / 2 for x in limit)
    return [basis_open(Chain.increasing_to(start, limit))]


def _subopens(model: Model, U: SubsetRep, m, rng: np.random.Generator, count: int) -> list[SubsetRep]:
    if isinstance(model, FunctionModel):
        pts = [i for i in range(model.k) if i in U]
        if len(pts) > EXHAUSTIVE_K:
            return [FinitePoints(model, s) for s in _random_subsets(pts, rng, 6)]
        return [FinitePoints(model, tuple(p for j, p in enumerate(pts) if mask >> j & 1)) for mask in range(2 ** len(pts))]
    lim = np.asarray(U.chain.limit)
    out = []
    for _ in range(count):
        sub = lim * rng.uniform(0.1, 1.0, lim.size)
        out.append(basis_open(Chain.increasing_to(tuple(sub / 2), tuple(sub))))
    return out


def verify_affine_scheme(model: Model, chart: SeminormChart, budget: int = 50, seed: int = 0) -> AffineReport:
    """Locality ``A|_U ≅ O_{A(U)}`` at sampled points.

    For each point ``m`` a basis open ``U ∋ m`` is built; for opens
    ``W ⊆ V ⊆ U`` the families ``P(V)`` computed over ``A`` and over the
    section algebra ``A(U)`` (chart ``P(U)``) must agree, section data must
    coincide, and the restriction squares must commute.
    """
    rng = np.random.default_rng(seed)
    sheaf = PresheafInstance(model, chart)
    if isinstance(model, FunctionModel):
        points = list(range(model.k))
    else:
        points = Whole(model, 6.0).sample(rng, budget)
    failures, squares = [], 0
    for m, U in ((m, U) for m in points for U in _basis_opens_around(model, m, rng)):
        if m not in U:
            failures.append((m, "no basis open contains the point"))
            continue
        big = sheaf.sections(U)
        local = PresheafInstance(model, _restricted_chart(chart, big))
        subs = _subopens(model, U, m, rng, 3)
        probe_seminorms = chart.members or chart.sample(rng, 24)
        a = model.random_element(rng)
        for V in subs:
            in_a = sheaf.sections(V)
            in_local = local.sections(V)
            for p in probe_seminorms:
                if in_a.in_family(p) != in_local.in_family(p):
                    failures.append((m, "families differ", V, p))
                    break
            fa = sheaf.restrict(big.section(a), V)
            fl = local.restrict(local.sections(U).section(a), V)
            if not fa.equals(fl):
                failures.append((m, "section data differ", V))
            for W in _subopens(model, V, m, rng, 1)[:4] if not isinstance(model, FunctionModel) else subs:
                if not sheaf.contained(W, V)[0]:
                    continue
                squares += 1
                lhs = sheaf.restrict(fa, W)
                rhs = local.restrict(fl, W)
                direct = sheaf.restrict(big.section(a), W)
                if not (lhs.equals(rhs) and lhs.equals(direct)):
                    failures.append((m, "restriction square does not commute", V, W))
    return AffineReport(len(points), failures, squares)
