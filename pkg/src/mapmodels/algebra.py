"""Sparse exact-rational arithmetic in free graded-commutative algebras.

Monomials are modeled as sparse vectors ``((i1, e1), (i2, e2), ...)`` of
(generator index, exponent) pairs, kept in the canonical order given by the
key ``(degree, index)``.  Odd-degree generators never carry an exponent
above 1; a product in which an odd generator repeats is zero and is
eliminated during multiplication.  Signs are produced mechanically by
counting transpositions of odd factors while merging sorted monomials,
so a single code path owns the Koszul convention for the whole package.

Coefficients are ``fractions.Fraction`` throughout.  No floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

Monomial = tuple  # tuple[tuple[int, int], ...]; see module docstring
Scalar = Union[int, Fraction]

ONE_MONOMIAL: Monomial = ()


class AlgebraError(ValueError):
    """Structural misuse: mixed algebras, bad degrees, unknown generators."""


@dataclass(frozen=True)
class Generator:
    """A free algebra generator.

    ``index`` is the stable identifier inside its algebra; ``degree`` may be
    any integer.  Negative and zero degrees occur in pre-localization
    section-space models; enumeration operations refuse them explicitly.
    """

    index: int
    name: str
    degree: int

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 != 0

    @property
    def sort_key(self) -> tuple:
        return (self.degree, self.index)


class FreeGca:
    """Free graded-commutative algebra on a finite, ordered generator list.

    ``max_degree`` is the truncation bound threaded through windowed
    computations (basis enumeration, cohomology).  Products themselves are
    exact and never truncated.
    """

    def __init__(self, generators: Iterable[tuple[str, int]], max_degree: int):
        gens: list[Generator] = []
        seen: set[str] = set()
        for name, degree in generators:
            if not isinstance(degree, int):
                raise AlgebraError(f"generator degree must be an integer, got {degree!r}")
            if name in seen:
                raise AlgebraError(f"duplicate generator name {name!r}")
            seen.add(name)
            gens.append(Generator(len(gens), name, degree))
        self.generators: tuple[Generator, ...] = tuple(gens)
        self.max_degree = max_degree
        self._by_name = {g.name: g for g in gens}
        # canonical factor order: ascending (degree, index)
        self._key = [g.sort_key for g in gens]
        self._odd = [g.is_odd for g in gens]
        self._deg = [g.degree for g in gens]

    # -- lookup -------------------------------------------------------

    def generator(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise AlgebraError(f"no generator named {name!r}") from None

    def gen(self, name: str) -> "Element":
        g = self.generator(name)
        return Element(self, {((g.index, 1),): Fraction(1)})

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {ONE_MONOMIAL: Fraction(1)})

    def scalar(self, c: Scalar) -> "Element":
        c = Fraction(c)
        return Element(self, {ONE_MONOMIAL: c} if c else {})

    def element(self, terms: Mapping[Monomial, Scalar]) -> "Element":
        """Build an element from already-canonical monomials."""
        out: dict[Monomial, Fraction] = {}
        for m, c in terms.items():
            c = Fraction(c)
            if c:
                out[m] = out.get(m, Fraction(0)) + c
                if not out[m]:
                    del out[m]
        return Element(self, out)

    # -- monomial arithmetic -------------------------------------------

    def monomial_degree(self, m: Monomial) -> int:
        return sum(self._deg[i] * e for i, e in m)

    def monomial_key(self, m: Monomial) -> tuple:
        """Total order on monomials: degree, then canonical factor keys."""
        return (self.monomial_degree(m), tuple(self._key[i] + (e,) for i, e in m))

    def merge_monomials(self, m1: Monomial, m2: Monomial) -> tuple[int, Optional[Monomial]]:
        """Multiply two canonical monomials.

        Returns ``(sign, product)``, or ``(0, None)`` when an odd generator
        repeats.  The sign is (-1)^t where t counts transpositions of odd
        factor pairs performed while interleaving the two sorted factor
        sequences.
        """
        if not m1:
            return 1, m2
        if not m2:
            return 1, m1
        odd = self._odd
        key = self._key
        # odd factor occurrences of m1 at positions >= p
        odd_suffix = [0] * (len(m1) + 1)
        for p in range(len(m1) - 1, -1, -1):
            odd_suffix[p] = odd_suffix[p + 1] + (1 if odd[m1[p][0]] else 0)
        out: list[tuple[int, int]] = []
        sign = 1
        i = j = 0
        while i < len(m1) and j < len(m2):
            i1, e1 = m1[i]
            i2, e2 = m2[j]
            if i1 == i2:
                if odd[i1]:
                    return 0, None
                out.append((i1, e1 + e2))
                i += 1
                j += 1
            elif key[i1] < key[i2]:
                out.append((i1, e1))
                i += 1
            else:
                if odd[i2] and (odd_suffix[i] % 2):
                    sign = -sign
                out.append((i2, e2))
                j += 1
        out.extend(m1[i:])
        out.extend(m2[j:])
        return sign, tuple(out)

    # -- enumeration ----------------------------------------------------

    def monomial_basis(self, degree: int) -> list[Monomial]:
        """All monomials of the given total degree, canonically ordered.

        Requires every generator to have degree >= 1 (otherwise the basis
        of a fixed degree is not finite) and ``degree <= max_degree``.
        """
        if any(g.degree <= 0 for g in self.generators):
            raise AlgebraError(
                "infinite basis: algebra has a generator of degree <= 0; "
                "localize the component first"
            )
        if degree > self.max_degree:
            raise AlgebraError(
                f"degree {degree} exceeds the algebra's truncation bound {self.max_degree}"
            )
        if degree < 0:
            return []
        # generators visited in canonical order so the emitted factor tuples
        # are canonical without a sort
        order = sorted(range(len(self.generators)), key=self._key.__getitem__)
        found: list[Monomial] = []

        def walk(pos: int, remaining: int, acc: list[tuple[int, int]]):
            if remaining == 0:
                found.append(tuple(acc))
                return
            if pos == len(order):
                return
            idx = order[pos]
            d = self._deg[idx]
            walk(pos + 1, remaining, acc)
            top = 1 if self._odd[idx] else remaining // d
            for e in range(1, top + 1):
                if e * d > remaining:
                    break
                acc.append((idx, e))
                walk(pos + 1, remaining - e * d, acc)
                acc.pop()

        walk(0, degree, [])
        found.sort(key=self.monomial_key)
        return found

    def basis_dimension_series(self, through: int) -> list[int]:
        """Coefficients of the Hilbert series up to ``through``.

        Computed from the generating function
        prod_even 1/(1 - t^d) * prod_odd (1 + t^d); used as the independent
        count oracle for :meth:`monomial_basis`.
        """
        series = [0] * (through + 1)
        series[0] = 1
        for g in self.generators:
            if g.degree <= 0:
                raise AlgebraError("Hilbert series needs strictly positive degrees")
            if g.is_odd:
                nxt = series[:]
                for n in range(g.degree, through + 1):
                    nxt[n] += series[n - g.degree]
                series = nxt
            else:
                # multiply by 1/(1 - t^d) in place
                for n in range(g.degree, through + 1):
                    series[n] += series[n - g.degree]
        return series

    def __repr__(self) -> str:
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"FreeGca({gens}; max_degree={self.max_degree})"


class Element:
    """A sparse rational combination of canonical monomials.

    Immutable by convention; every operation returns a new element.  Two
    elements are equal iff they live in the same algebra and their term
    maps agree, which makes equality a normal-form comparison.
    """

    __slots__ = ("algebra", "_terms")

    def __init__(self, algebra: FreeGca, terms: dict[Monomial, Fraction]):
        self.algebra = algebra
        self._terms = terms

    # -- inspection ----------------------------------------------------

    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE_MONOMIAL, Fraction(0))

    def homogeneous_degree(self) -> Optional[int]:
        """Common degree of all monomials, ``None`` for zero.

        Raises :class:`AlgebraError` when the element mixes degrees.
        """
        deg: Optional[int] = None
        for m in self._terms:
            d = self.algebra.monomial_degree(m)
            if deg is None:
                deg = d
            elif d != deg:
                raise AlgebraError(f"element has mixed degrees {deg} and {d}")
        return deg

    def is_homogeneous_of_degree(self, degree: int) -> bool:
        if self.is_zero():
            return True
        try:
            return self.homogeneous_degree() == degree
        except AlgebraError:
            return False

    def homogeneous_component(self, degree: int) -> "Element":
        keep = {
            m: c
            for m, c in self._terms.items()
            if self.algebra.monomial_degree(m) == degree
        }
        return Element(self.algebra, keep)

    # -- ring operations -------------------------------------------------

    def _check(self, other: "Element") -> None:
        if self.algebra is not other.algebra:
            raise AlgebraError("operands belong to different algebras")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Element(self.algebra, out)

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, Fraction(0)) - c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Element(self.algebra, out)

    def __neg__(self) -> "Element":
        return Element(self.algebra, {m: -c for m, c in self._terms.items()})

    def scale(self, c: Scalar) -> "Element":
        c = Fraction(c)
        if not c:
            return Element(self.algebra, {})
        return Element(self.algebra, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other: Union["Element", Scalar]) -> "Element":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        merge = self.algebra.merge_monomials
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                sign, m = merge(m1, m2)
                if sign == 0:
                    continue
                s = out.get(m, Fraction(0)) + sign * c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Element(self.algebra, out)

    def __rmul__(self, other: Scalar) -> "Element":
        return self.scale(other)

    def __pow__(self, n: int) -> "Element":
        if n < 0:
            raise AlgebraError("negative powers are not defined")
        result = self.algebra.one()
        for _ in range(n):
            result = result * self
        return result

    # -- equality / rendering --------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((id(self.algebra), frozenset(self._terms.items())))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        names = {g.index: g.name for g in self.algebra.generators}
        parts: list[str] = []
        ordered = sorted(self._terms, key=self.algebra.monomial_key)
        for m in ordered:
            c = self._terms[m]
            factors = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in m
            )
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = factors
            else:
                body = f"{abs(c)}*{factors}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"<{self}>"


def substitute(
    element: Element,
    assignment: Mapping[Generator, Element],
    target: Optional[FreeGca] = None,
) -> Element:
    """Apply the algebra-morphism extension of a generator assignment.

    Images must be homogeneous of the generator's own degree (zero is
    allowed).  Generators without an image are kept, which requires the
    target algebra to be the element's own; a cross-algebra substitution
    must therefore assign every generator that occurs.
    """
    source = element.algebra
    if target is None:
        for img in assignment.values():
            target = img.algebra
            break
        else:
            target = source
    images: dict[int, Element] = {}
    for g, img in assignment.items():
        if img.algebra is not target:
            raise AlgebraError("substitution images live in different algebras")
        if not img.is_homogeneous_of_degree(g.degree):
            raise AlgebraError(
                f"image of {g.name} (degree {g.degree}) is not homogeneous of that degree"
            )
        images[g.index] = img

    def image_of(idx: int) -> Element:
        if idx in images:
            return images[idx]
        if target is source:
            g = source.generators[idx]
            return Element(source, {((g.index, 1),): Fraction(1)})
        raise AlgebraError(
            f"no image for generator {source.generators[idx].name!r} in cross-algebra substitution"
        )

    out = target.zero()
    for m, c in element.terms().items():
        acc = target.scalar(c)
        for idx, e in m:
            img = image_of(idx)
            for _ in range(e):
                acc = acc * img
            if acc.is_zero():
                break
        out = out + acc
    return out


def transport(element: Element, target: FreeGca) -> Element:
    """Re-express an element in another algebra by matching generator names.

    Missing names are sent to zero; this implements the quotient maps used
    by component localization and the based-model reduction.
    """
    mapping: dict[Generator, Element] = {}
    for g in element.algebra.generators:
        if g.name in {t.name for t in target.generators}:
            mapping[g] = target.gen(g.name)
        else:
            mapping[g] = target.zero()
    return substitute(element, mapping, target)
