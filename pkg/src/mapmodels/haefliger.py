"""Section-space models: twist, dual-tensor differential, localization.

Given a finite model A of the source, a minimal model of the target and a
section encoding the chosen component, this module

  * twists the product differential so the component sits at the origin,
  * solves for the differential delta on the free algebra over the
    dual-tensor generators a_i^* (x) v,
  * truncates away the nonpositive-degree generators (localization), and
  * reduces to the based-map variant by dropping the unit duals.

Elements of A (x) Lambda are sparse maps (basis index, monomial) ->
coefficient; products re-expand the A-part through structure constants and
take their signs from the monomial merge, so no sign is ever placed by
hand.  Wrong conventions would be caught by the delta^2 = 0 and chain-map
postconditions, which raise instead of warn.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .algebra import (
    AlgebraError,
    Element,
    FreeGca,
    Generator,
    Monomial,
    transport,
)
from .cdga import Cdga, Differential, Report, extend_derivation
from .finite import FiniteCdga, Vec


class SignConventionError(AlgebraError):
    """Internal fault: a solved differential failed its own certificate."""


class LocalizationError(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# target and section data
# ---------------------------------------------------------------------------


@dataclass
class TargetModel:
    """Minimal Sullivan model of the target plus its ordered degree-2 basis."""

    cdga: Cdga
    degree2_basis: list[Generator]
    name: str = ""

    def __post_init__(self):
        algebra = self.cdga.algebra
        for g in algebra.generators:
            if g.degree < 2:
                raise AlgebraError(
                    f"target must be simply connected: generator {g.name} has degree {g.degree}"
                )
        linear = self.cdga.differential.linear_part()
        for g in algebra.generators:
            if linear[g.index]:
                raise AlgebraError(
                    f"target model is not minimal: d({g.name}) has a linear term"
                )
        degree2 = [g for g in algebra.generators if g.degree == 2]
        if sorted(g.index for g in self.degree2_basis) != [g.index for g in degree2]:
            raise AlgebraError(
                "degree2_basis must list each degree-2 generator exactly once"
            )

    @property
    def rank(self) -> int:
        """Rank of pi_2 of the target, the length of a component vector."""
        return len(self.degree2_basis)


@dataclass
class SectionData:
    """Generator images in A encoding the component of the mapping space."""

    component: tuple[int, ...]
    images: dict[int, Vec]  # target generator index -> A-vector

    def image(self, g: Generator) -> Vec:
        return dict(self.images.get(g.index, {}))

    def validate(self, target: TargetModel, source: FiniteCdga) -> None:
        algebra = target.cdga.algebra
        for g in algebra.generators:
            img = self.image(g)
            deg = source.vec_degree(img)
            if deg is not None and deg != g.degree:
                raise AlgebraError(
                    f"section image of {g.name} has degree {deg}, expected {g.degree}"
                )
        # chain compatibility: sigma(d v) = d_A(sigma(v)) for every generator
        for g in algebra.generators:
            lhs = evaluate_in_source(
                target.cdga.differential.image(g), self, source
            )
            rhs = source.d(self.image(g))
            if lhs != rhs:
                raise AlgebraError(
                    f"section is not chain compatible at {g.name}: "
                    f"sigma(d{g.name}) = {source.format_vec(lhs)}, "
                    f"d_A sigma({g.name}) = {source.format_vec(rhs)}"
                )


def evaluate_in_source(
    element: Element, section: SectionData, source: FiniteCdga
) -> Vec:
    """Multiplicative extension of the section applied to a target element."""
    out = source.zero_vec()
    for m, c in element.terms().items():
        acc = source.unit_vec()
        for idx, e in m:
            img = section.images.get(idx, {})
            for _ in range(e):
                acc = source.mult(acc, img)
            if not acc:
                break
        out = source.add(out, source.scale(acc, c))
    return out


def section_for_component(
    target: TargetModel, source: FiniteCdga, component: tuple[int, ...]
) -> SectionData:
    """The standard section: x_i -> n_i * (degree-2 class), 0 elsewhere."""
    if len(component) != target.rank:
        raise AlgebraError(
            f"component vector has length {len(component)}, expected {target.rank}"
        )
    degree2 = source.by_degree(2)
    if len(degree2) != 1:
        raise AlgebraError(
            "source has no canonical degree-2 class; supply explicit section images"
        )
    a = degree2[0].index
    images: dict[int, Vec] = {}
    for g, n in zip(target.degree2_basis, component):
        if n:
            images[g.index] = {a: Fraction(n)}
    section = SectionData(tuple(int(n) for n in component), images)
    section.validate(target, source)
    return section


# ---------------------------------------------------------------------------
# tensor elements A (x) Lambda
# ---------------------------------------------------------------------------


class TensorElement:
    """Sparse element of A (x) Lambda: (basis index, monomial) -> coefficient."""

    __slots__ = ("source", "algebra", "_terms")

    def __init__(
        self,
        source: FiniteCdga,
        algebra: FreeGca,
        terms: Optional[dict[tuple[int, Monomial], Fraction]] = None,
    ):
        self.source = source
        self.algebra = algebra
        self._terms: dict[tuple[int, Monomial], Fraction] = terms or {}

    @classmethod
    def zero(cls, source: FiniteCdga, algebra: FreeGca) -> "TensorElement":
        return cls(source, algebra)

    @classmethod
    def from_source(cls, source: FiniteCdga, algebra: FreeGca, vec: Vec) -> "TensorElement":
        return cls(source, algebra, {(i, ()): Fraction(c) for i, c in vec.items() if c})

    @classmethod
    def from_lambda(cls, source: FiniteCdga, element: Element) -> "TensorElement":
        return cls(
            source,
            element.algebra,
            {(0, m): c for m, c in element.terms().items()},
        )

    def terms(self) -> dict[tuple[int, Monomial], Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "TensorElement") -> None:
        if self.source is not other.source or self.algebra is not other.algebra:
            raise AlgebraError("tensor operands belong to different algebras")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            s = out.get(key, Fraction(0)) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return TensorElement(self.source, self.algebra, out)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + other.scale(-1)

    def scale(self, c) -> "TensorElement":
        c = Fraction(c)
        if not c:
            return TensorElement(self.source, self.algebra)
        return TensorElement(
            self.source, self.algebra, {k: c * v for k, v in self._terms.items()}
        )

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        src, alg = self.source, self.algebra
        out: dict[tuple[int, Monomial], Fraction] = {}
        for (i, m1), c1 in self._terms.items():
            deg_m1 = alg.monomial_degree(m1)
            for (j, m2), c2 in other._terms.items():
                # move a_j left past m1
                sign = -1 if (deg_m1 % 2 and src.degree(j) % 2) else 1
                msign, m = alg.merge_monomials(m1, m2)
                if msign == 0:
                    continue
                coeff = sign * msign * c1 * c2
                for k, c in src.mult_basis(i, j).items():
                    s = out.get((k, m), Fraction(0)) + coeff * c
                    if s:
                        out[(k, m)] = s
                    else:
                        del out[(k, m)]
        return TensorElement(src, alg, out)

    def collect(self, basis_index: int) -> Element:
        """Coefficient of a_k as an element of the Lambda factor."""
        return Element(
            self.algebra,
            {m: c for (i, m), c in self._terms.items() if i == basis_index},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (
            self.source is other.source
            and self.algebra is other.algebra
            and self._terms == other._terms
        )

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (i, m) in sorted(
            self._terms, key=lambda key: (key[0], self.algebra.monomial_key(key[1]))
        ):
            c = self._terms[(i, m)]
            mono = Element(self.algebra, {m: Fraction(1)})
            parts.append(f"{c}*{self.source.basis[i].name}(x){mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<{self}>"


def tensor_substitute(
    element: Element, images: Mapping[int, TensorElement], source: FiniteCdga, algebra: FreeGca
) -> TensorElement:
    """Evaluate a Lambda-polynomial with generators sent to tensor elements."""
    out = TensorElement.zero(source, algebra)
    one = TensorElement(source, algebra, {(0, ()): Fraction(1)})
    for m, c in element.terms().items():
        acc = one.scale(c)
        for idx, e in m:
            img = images[idx]
            for _ in range(e):
                acc = acc * img
            if acc.is_zero():
                break
        out = out + acc
    return out


class TensorDerivation:
    """Derivation of A (x) Lambda given d_A and images of the generators.

    When produced by :func:`twist` it remembers the section, which is the
    provenance the solver threads into the finished model.
    """

    def __init__(
        self,
        source: FiniteCdga,
        algebra: FreeGca,
        images: Mapping[int, TensorElement],
        section: Optional[SectionData] = None,
    ):
        self.source = source
        self.algebra = algebra
        self.section = section
        self._images = {
            g.index: images.get(g.index, TensorElement.zero(source, algebra))
            for g in algebra.generators
        }

    def image(self, g: Generator) -> TensorElement:
        return self._images[g.index]

    def apply(self, t: TensorElement) -> TensorElement:
        src, alg = self.source, self.algebra
        out = TensorElement.zero(src, alg)
        for (i, m), c in t.terms().items():
            # d_A on the A factor
            d_vec = src.d_basis(i)
            for k, dc in d_vec.items():
                out = out + TensorElement(src, alg, {(k, m): c * dc})
            # Koszul sign for jumping the derivation over a_i
            base = TensorElement(src, alg, {(i, ()): Fraction(1)})
            body = self._apply_monomial(m)
            sign = -1 if src.degree(i) % 2 else 1
            out = out + (base * body).scale(sign * c)
        return out

    def _apply_monomial(self, m: Monomial) -> TensorElement:
        src, alg = self.source, self.algebra
        out = TensorElement.zero(src, alg)
        prefix_degree = 0
        for pos, (idx, e) in enumerate(m):
            g = alg.generators[idx]
            img = self._images[idx]
            if not img.is_zero():
                left: Monomial = m[:pos] + (((idx, e - 1),) if e > 1 else ())
                right: Monomial = m[pos + 1 :]
                term = (
                    TensorElement(src, alg, {(0, left): Fraction(e)})
                    * img
                    * TensorElement(src, alg, {(0, right): Fraction(1)})
                )
                if prefix_degree % 2:
                    term = term.scale(-1)
                out = out + term
            prefix_degree += g.degree * e
        return out

    def check_square_zero(self) -> None:
        for g in self.algebra.generators:
            dd = self.apply(self._images[g.index])
            if not dd.is_zero():
                raise SignConventionError(
                    f"twisted differential does not square to zero at {g.name}: {dd}"
                )


# ---------------------------------------------------------------------------
# twist
# ---------------------------------------------------------------------------


def twist(
    target: TargetModel, section: SectionData, source: FiniteCdga
) -> TensorDerivation:
    """Twisted differential relocating the section's component to the origin.

    d'(v) = (d v with u replaced by u + sigma(u)) - d_A(sigma(v)); d' is
    d_A on the A factor.  d'^2 = 0 is checked on every generator.
    """
    section.validate(target, source)
    algebra = target.cdga.algebra
    shift: dict[int, TensorElement] = {}
    for g in algebra.generators:
        shift[g.index] = TensorElement(
            source, algebra, {(0, ((g.index, 1),)): Fraction(1)}
        ) + TensorElement.from_source(source, algebra, section.image(g))
    images: dict[int, TensorElement] = {}
    for g in algebra.generators:
        moved = tensor_substitute(
            target.cdga.differential.image(g), shift, source, algebra
        )
        correction = TensorElement.from_source(
            source, algebra, source.d(section.image(g))
        )
        images[g.index] = moved - correction
    derivation = TensorDerivation(source, algebra, images, section=section)
    derivation.check_square_zero()
    return derivation


# ---------------------------------------------------------------------------
# the section-space model
# ---------------------------------------------------------------------------


@dataclass
class HaefligerModel:
    """Free CDGA on the dual-tensor generators with the solved differential.

    ``generator_table`` maps (source basis index, target generator index) to
    the corresponding generator of ``algebra``, or None once removed by
    localization or the based reduction.
    """

    source: FiniteCdga
    target: TargetModel
    section: SectionData
    algebra: FreeGca
    delta: Differential
    generator_table: dict[tuple[int, int], Optional[Generator]]
    localized: bool = False
    based: bool = False

    @property
    def cdga(self) -> Cdga:
        return Cdga(self.algebra, self.delta)

    def dual_generator(self, basis_index: int, target_gen: Generator) -> Optional[Generator]:
        return self.generator_table[(basis_index, target_gen.index)]

    def epsilon_image(self, target_gen: Generator) -> TensorElement:
        """epsilon(v) = sum_i a_i (x) (a_i^* (x) v) over the surviving pairs."""
        terms: dict[tuple[int, Monomial], Fraction] = {}
        for b in self.source.basis:
            w = self.generator_table[(b.index, target_gen.index)]
            if w is not None:
                terms[(b.index, ((w.index, 1),))] = Fraction(1)
        return TensorElement(self.source, self.algebra, terms)


def dual_generator_name(target_name: str, basis_name: str) -> str:
    return f"{target_name}@{basis_name}"


def solve_delta(
    twisted: TensorDerivation, source: FiniteCdga, target: TargetModel
) -> HaefligerModel:
    """Solve for the unique differential making epsilon a chain map.

    For each target generator v, expand epsilon(d'v), re-express every
    A-part in the basis, subtract the d_A(a_i) (x) (a_i^* (x) v) terms and
    read delta(a_k^* (x) v) off the a_k coefficient.  The result must pass
    delta^2 = 0 and the chain-map recheck; failures raise, never warn.
    """
    if twisted.algebra is not target.cdga.algebra or twisted.source is not source:
        raise AlgebraError("twisted differential does not match target and source")
    if twisted.section is None:
        raise AlgebraError("twisted differential carries no section provenance")
    gens: list[tuple[str, int]] = []
    pairs: list[tuple[int, int]] = []
    for v in target.cdga.algebra.generators:
        for b in source.basis:
            gens.append(
                (dual_generator_name(v.name, b.name), v.degree - b.degree)
            )
            pairs.append((b.index, v.index))
    w_algebra = FreeGca(gens, max_degree=target.cdga.algebra.max_degree)
    table: dict[tuple[int, int], Optional[Generator]] = {
        pair: w_algebra.generators[pos] for pos, pair in enumerate(pairs)
    }

    eps_images: dict[int, TensorElement] = {}
    for v in target.cdga.algebra.generators:
        terms = {
            (b.index, ((table[(b.index, v.index)].index, 1),)): Fraction(1)
            for b in source.basis
        }
        eps_images[v.index] = TensorElement(source, w_algebra, terms)

    delta_images: dict[Generator, Element] = {}
    for v in target.cdga.algebra.generators:
        rhs = tensor_substitute(twisted.image(v), eps_images, source, w_algebra)
        for b in source.basis:
            w = table[(b.index, v.index)]
            for k, c in source.d_basis(b.index).items():
                rhs = rhs - TensorElement(
                    source, w_algebra, {(k, ((w.index, 1),)): c}
                )
        for b in source.basis:
            w = table[(b.index, v.index)]
            image = rhs.collect(b.index)
            if b.degree % 2:
                image = -image
            delta_images[w] = image

    try:
        delta = extend_derivation(w_algebra, delta_images)
    except AlgebraError as exc:
        raise SignConventionError(
            f"solved differential failed its certificate: {exc}"
        ) from exc

    model = HaefligerModel(
        source=source,
        target=target,
        section=twisted.section,
        algebra=w_algebra,
        delta=delta,
        generator_table=table,
    )
    report = verify_epsilon_chain_map(model)
    if not report:
        raise SignConventionError(
            f"epsilon chain-map recheck failed: {report.failures[0]}"
        )
    return model


def localize_component(model: HaefligerModel) -> HaefligerModel:
    """Drop all generators of degree <= 0 and restrict delta.

    Legitimate exactly when every removed generator's image dies in the
    quotient; a surviving term (a constant in particular) means the model
    was never twisted to the chosen component.
    """
    if model.localized:
        return model
    kept = [g for g in model.algebra.generators if g.degree >= 1]
    new_algebra = FreeGca(
        [(g.name, g.degree) for g in kept], max_degree=model.algebra.max_degree
    )
    removed = {g.index for g in model.algebra.generators} - {g.index for g in kept}
    for g in model.algebra.generators:
        if g.index in removed:
            residue = transport(model.delta.image(g), new_algebra)
            if not residue.is_zero():
                detail = (
                    "a constant term appears"
                    if residue.constant_term()
                    else f"delta({g.name}) survives as {residue}"
                )
                raise LocalizationError(
                    f"component not localizable at origin: {detail}; "
                    "was the twist step skipped?"
                )
    images: dict[Generator, Element] = {}
    for g in kept:
        image = transport(model.delta.image(g), new_algebra)
        if image.constant_term():
            raise LocalizationError(
                f"component not localizable at origin: delta({g.name}) has a constant term"
            )
        images[new_algebra.generator(g.name)] = image
    delta = extend_derivation(new_algebra, images)
    table = {
        pair: (new_algebra.generator(g.name) if g is not None and g.degree >= 1 else None)
        for pair, g in model.generator_table.items()
    }
    out = HaefligerModel(
        source=model.source,
        target=model.target,
        section=model.section,
        algebra=new_algebra,
        delta=delta,
        generator_table=table,
        localized=True,
    )
    report = verify_epsilon_chain_map(out)
    if not report:
        raise SignConventionError(
            f"localized model failed the chain-map recheck: {report.failures[0]}"
        )
    return out


def based_model(model: HaefligerModel) -> HaefligerModel:
    """Model of the based-map component: discard the unit-dual generators.

    Models the fiber of the evaluation fibration over the target.
    """
    if not model.localized:
        raise AlgebraError("based reduction requires a localized model")
    if model.based:
        return model
    if len(model.source.by_degree(0)) != 1:
        raise AlgebraError("based reduction needs a one-dimensional degree-0 part")
    kept = [
        g
        for pair, g in model.generator_table.items()
        if g is not None and pair[0] != 0
    ]
    kept.sort(key=lambda g: g.index)
    new_algebra = FreeGca(
        [(g.name, g.degree) for g in kept], max_degree=model.algebra.max_degree
    )
    for pair, g in model.generator_table.items():
        if g is not None and pair[0] == 0:
            residue = transport(model.delta.image(g), new_algebra)
            if not residue.is_zero():
                raise SignConventionError(
                    f"unit-dual ideal is not stable: delta({g.name}) -> {residue}"
                )
    images = {
        new_algebra.generator(g.name): transport(model.delta.image(g), new_algebra)
        for g in kept
    }
    delta = extend_derivation(new_algebra, images)
    table = {
        pair: (
            new_algebra.generator(g.name)
            if g is not None and pair[0] != 0
            else None
        )
        for pair, g in model.generator_table.items()
    }
    return HaefligerModel(
        source=model.source,
        target=model.target,
        section=model.section,
        algebra=new_algebra,
        delta=delta,
        generator_table=table,
        localized=True,
        based=True,
    )


def verify_epsilon_chain_map(model: HaefligerModel) -> Report:
    """Residual of (d_A (x) delta) o epsilon - epsilon o d' on each generator."""
    twisted = twist(model.target, model.section, model.source)
    tensor_delta = TensorDerivation(
        model.source,
        model.algebra,
        {
            g.index: TensorElement.from_lambda(model.source, model.delta.image(g))
            for g in model.algebra.generators
        },
    )
    eps_images = {
        v.index: model.epsilon_image(v) for v in model.target.cdga.algebra.generators
    }
    failures = []
    for v in model.target.cdga.algebra.generators:
        lhs = tensor_delta.apply(model.epsilon_image(v))
        rhs = tensor_substitute(twisted.image(v), eps_images, model.source, model.algebra)
        residual = lhs - rhs
        if not residual.is_zero():
            failures.append(
                f"epsilon chain map fails at {v.name}: residual {residual}"
            )
    return Report.collect(failures)
