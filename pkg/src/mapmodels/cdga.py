"""Differentials, CDGA morphisms, cohomology and homotopy-group readout.

A differential is stored by its generator images and extended as a degree +1
derivation.  Rational homotopy groups of the space a Sullivan algebra models
are read from the homology of the linear part of the differential on the
generator space; a brute-force minimalizer in the test suite guards this
reading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from . import linalg
from .algebra import AlgebraError, Element, FreeGca, Generator, Monomial, substitute


class NotADifferentialError(AlgebraError):
    """Raised when proposed generator images do not square to zero."""


@dataclass
class Report:
    """Outcome of a verification pass; failures keep both offending sides."""

    passed: bool
    failures: list[str] = field(default_factory=list)

    @classmethod
    def collect(cls, failures: list[str]) -> "Report":
        return cls(passed=not failures, failures=failures)

    def __bool__(self) -> bool:
        return self.passed


class Differential:
    """A degree +1 derivation of a free graded-commutative algebra."""

    def __init__(self, algebra: FreeGca, images: Mapping[Generator, Element]):
        self.algebra = algebra
        self._images: dict[int, Element] = {}
        for g, img in images.items():
            if img.algebra is not algebra:
                raise AlgebraError("differential image lives in a different algebra")
            if not img.is_homogeneous_of_degree(g.degree + 1):
                raise AlgebraError(
                    f"d({g.name}) must be homogeneous of degree {g.degree + 1}"
                )
            self._images[g.index] = img
        for g in algebra.generators:
            self._images.setdefault(g.index, algebra.zero())

    def image(self, g: Generator) -> Element:
        return self._images[g.index]

    def images(self) -> dict[Generator, Element]:
        return {g: self._images[g.index] for g in self.algebra.generators}

    def apply(self, element: Element) -> Element:
        """Leibniz extension: d(uv) = (du)v + (-1)^|u| u(dv)."""
        algebra = self.algebra
        out = algebra.zero()
        for m, c in element.terms().items():
            out = out + self._apply_monomial(m).scale(c)
        return out

    def _apply_monomial(self, m: Monomial) -> Element:
        algebra = self.algebra
        out = algebra.zero()
        prefix_degree = 0
        for pos, (idx, e) in enumerate(m):
            g = algebra.generators[idx]
            img = self._images[idx]
            if not img.is_zero():
                left: Monomial = m[:pos] + (((idx, e - 1),) if e > 1 else ())
                right: Monomial = m[pos + 1 :]
                term = (
                    Element(algebra, {left: Fraction(e)})
                    * img
                    * Element(algebra, {right: Fraction(1)})
                )
                if prefix_degree % 2:
                    term = -term
                out = out + term
            prefix_degree += g.degree * e
        return out

    def linear_part(self) -> dict[int, dict[int, Fraction]]:
        """Single-generator terms of each image: target index -> coefficient."""
        table: dict[int, dict[int, Fraction]] = {}
        for idx, img in self._images.items():
            row: dict[int, Fraction] = {}
            for m, c in img.terms().items():
                if len(m) == 1 and m[0][1] == 1:
                    row[m[0][0]] = c
            table[idx] = row
        return table

    def __repr__(self) -> str:
        parts = ", ".join(
            f"d{g.name}={self._images[g.index]}"
            for g in self.algebra.generators
            if not self._images[g.index].is_zero()
        )
        return f"Differential({parts or '0'})"


def extend_derivation(
    algebra: FreeGca, images: Mapping[Generator, Element]
) -> Differential:
    """Build the unique Leibniz extension of generator images and check d^2 = 0.

    d^2 vanishes on every monomial as soon as it vanishes on generators,
    because d^2 of an odd derivation is again a derivation.
    """
    d = Differential(algebra, images)
    for g in algebra.generators:
        dd = d.apply(d.image(g))
        if not dd.is_zero():
            raise NotADifferentialError(
                f"not a differential: d^2({g.name}) = {dd}"
            )
    return d


@dataclass
class Cdga:
    algebra: FreeGca
    differential: Differential

    def __post_init__(self):
        if self.differential.algebra is not self.algebra:
            raise AlgebraError("differential belongs to a different algebra")


@dataclass
class HomotopyTable:
    """dim pi_k (x) Q of the modeled space for 1 <= k <= window."""

    window: int
    dims: dict[int, int]

    def as_list(self) -> list[int]:
        return [self.dims[k] for k in range(1, self.window + 1)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomotopyTable):
            return NotImplemented
        return self.window == other.window and self.dims == other.dims


def cohomology(cdga: Cdga, degree: int) -> tuple[int, list[Element]]:
    """Dimension of H^degree and cocycle representatives of a basis.

    Exact kernel/image computation on the monomial bases of the three
    neighbouring degrees.
    """
    algebra = cdga.algebra
    if degree < 0:
        return 0, []
    if degree + 1 > algebra.max_degree:
        raise AlgebraError(
            f"cohomology in degree {degree} needs max_degree >= {degree + 1}"
        )
    basis_k = algebra.monomial_basis(degree)
    basis_up = algebra.monomial_basis(degree + 1)
    basis_down = algebra.monomial_basis(degree - 1) if degree >= 1 else []
    up_index = {m: i for i, m in enumerate(basis_up)}
    k_index = {m: i for i, m in enumerate(basis_k)}

    def column(element: Element, index: dict, size: int) -> list[Fraction]:
        col = [Fraction(0)] * size
        for m, c in element.terms().items():
            col[index[m]] = c
        return col

    d = cdga.differential
    # rows = equations (coefficients in degree+1), one column per basis monomial
    d_cols = [column(d.apply(Element(algebra, {m: Fraction(1)})), up_index, len(basis_up)) for m in basis_k]
    matrix = [[d_cols[j][i] for j in range(len(basis_k))] for i in range(len(basis_up))]
    kernel = linalg.nullspace(matrix, len(basis_k))

    boundaries = [
        column(d.apply(Element(algebra, {m: Fraction(1)})), k_index, len(basis_k))
        for m in basis_down
    ]
    span = linalg.EchelonAccumulator(len(basis_k))
    for b in boundaries:
        span.add(b)
    image_rank = span.dim

    representatives: list[Element] = []
    for v in kernel:
        if span.add(v):
            representatives.append(
                Element(algebra, {basis_k[i]: v[i] for i in range(len(basis_k)) if v[i]})
            )
    dim = len(kernel) - image_rank
    assert dim == len(representatives)
    return dim, representatives


def linearized_homotopy(cdga: Cdga, window: int) -> HomotopyTable:
    """Rational homotopy dimensions read from the linear part of d.

    Requires all generators in degree >= 1 and images without constant
    term (a constant would mean the model was never localized).
    """
    algebra = cdga.algebra
    if any(g.degree <= 0 for g in algebra.generators):
        raise AlgebraError("homotopy readout needs all generators in degree >= 1")
    for g in algebra.generators:
        if cdga.differential.image(g).constant_term():
            raise AlgebraError(
                f"d({g.name}) has a constant term; the model is not localized"
            )
    by_degree: dict[int, list[Generator]] = {}
    for g in algebra.generators:
        by_degree.setdefault(g.degree, []).append(g)
    linear = cdga.differential.linear_part()

    def rank_between(k: int) -> int:
        dom = by_degree.get(k, [])
        cod = by_degree.get(k + 1, [])
        if not dom or not cod:
            return 0
        pos = {g.index: i for i, g in enumerate(cod)}
        matrix = []
        for g in dom:
            row = [Fraction(0)] * len(cod)
            for tgt, c in linear[g.index].items():
                row[pos[tgt]] = c
            matrix.append(row)
        return linalg.rank(matrix)

    dims: dict[int, int] = {}
    for k in range(1, window + 1):
        n_k = len(by_degree.get(k, []))
        dims[k] = n_k - rank_between(k) - rank_between(k - 1)
    return HomotopyTable(window, dims)


class CdgaMorphism:
    """Degree-preserving algebra map between CDGAs, given on generators."""

    def __init__(self, source: Cdga, target: Cdga, images: Mapping[Generator, Element]):
        self.source = source
        self.target = target
        self._images: dict[int, Element] = {}
        for g, img in images.items():
            if img.algebra is not target.algebra:
                raise AlgebraError("morphism image outside the target algebra")
            if not img.is_homogeneous_of_degree(g.degree):
                raise AlgebraError(
                    f"image of {g.name} must be homogeneous of degree {g.degree}"
                )
            self._images[g.index] = img
        missing = [g.name for g in source.algebra.generators if g.index not in self._images]
        if missing:
            raise AlgebraError(f"morphism lacks images for generators {missing}")

    def image(self, g: Generator) -> Element:
        return self._images[g.index]

    def generator_images(self) -> dict[Generator, Element]:
        return {g: self._images[g.index] for g in self.source.algebra.generators}

    def apply(self, element: Element) -> Element:
        assignment = {
            g: self._images[g.index] for g in self.source.algebra.generators
        }
        return substitute(element, assignment, self.target.algebra)

    def is_identity(self) -> bool:
        if self.source.algebra is not self.target.algebra:
            return False
        return all(
            self._images[g.index] == self.source.algebra.gen(g.name)
            for g in self.source.algebra.generators
        )

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{g.name} -> {self._images[g.index]}" for g in self.source.algebra.generators
        )
        return f"CdgaMorphism({parts})"


def identity_morphism(cdga: Cdga) -> CdgaMorphism:
    return CdgaMorphism(
        cdga, cdga, {g: cdga.algebra.gen(g.name) for g in cdga.algebra.generators}
    )


def verify_morphism(phi: CdgaMorphism) -> Report:
    """Check the chain condition phi(d g) = d(phi g) on every generator."""
    failures = []
    for g in phi.source.algebra.generators:
        lhs = phi.apply(phi.source.differential.image(g))
        rhs = phi.target.differential.apply(phi.image(g))
        if lhs != rhs:
            failures.append(
                f"chain condition fails at {g.name}: phi(d {g.name}) = {lhs}, "
                f"d(phi {g.name}) = {rhs}"
            )
    return Report.collect(failures)


def compose(phi: CdgaMorphism, psi: CdgaMorphism) -> CdgaMorphism:
    """phi after psi; the chain condition is re-verified."""
    if psi.target is not phi.source and psi.target.algebra is not phi.source.algebra:
        raise AlgebraError("morphisms are not composable")
    images = {
        g: phi.apply(psi.image(g)) for g in psi.source.algebra.generators
    }
    out = CdgaMorphism(psi.source, phi.target, images)
    report = verify_morphism(out)
    if not report:
        raise AlgebraError(f"composite is not a chain map: {report.failures[0]}")
    return out
