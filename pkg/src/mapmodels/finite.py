"""Finite-dimensional CDGA models of the source space.

The source of the section-space construction is described by an explicit
basis with structure constants and a differential matrix, so that products
can be re-expanded in the basis and coefficients of a fixed basis element
collected directly.  Elements of the model are sparse vectors
``dict[index, Fraction]`` over the basis.

Only the two-sphere model ships built in; arbitrary models are accepted
from spec files and validated by :func:`verify_finite_cdga`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .algebra import AlgebraError
from .cdga import Report

Vec = dict  # dict[int, Fraction], sparse over the basis


@dataclass(frozen=True)
class BasisElement:
    index: int
    name: str
    degree: int


@dataclass(frozen=True)
class DualGenerator:
    """Label of a dual-basis element; its degree is minus the primal one."""

    index: int
    name: str
    degree: int

    @classmethod
    def of(cls, basis_element: BasisElement) -> "DualGenerator":
        return cls(
            basis_element.index, f"{basis_element.name}*", -basis_element.degree
        )


class FiniteCdga:
    """Finite basis, structure constants c_ij^k, differential matrix d_ik.

    ``basis[0]`` must be the unit in degree 0.  Structure constants are
    given for non-unit pairs only; unit products are implied.  The
    constructor normalizes; :func:`verify_finite_cdga` checks the axioms.
    """

    def __init__(
        self,
        basis: list[tuple[str, int]],
        products: Mapping[tuple[int, int], Mapping[int, Fraction]],
        differential: Mapping[int, Mapping[int, Fraction]],
        name: str = "",
    ):
        if not basis:
            raise AlgebraError("finite model needs a nonempty basis")
        self.name = name
        self.basis = tuple(
            BasisElement(i, n, d) for i, (n, d) in enumerate(basis)
        )
        if self.basis[0].degree != 0:
            raise AlgebraError("basis[0] must be the unit in degree 0")
        names = [b.name for b in self.basis]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate basis names")
        self._products: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), row in products.items():
            cleaned = {k: Fraction(c) for k, c in row.items() if Fraction(c)}
            if cleaned:
                self._products[(i, j)] = cleaned
        self._differential: dict[int, dict[int, Fraction]] = {}
        for i, row in differential.items():
            cleaned = {k: Fraction(c) for k, c in row.items() if Fraction(c)}
            if cleaned:
                self._differential[i] = cleaned

    # -- structure --------------------------------------------------------

    def degree(self, i: int) -> int:
        return self.basis[i].degree

    def dim(self) -> int:
        return len(self.basis)

    def by_degree(self, degree: int) -> list[BasisElement]:
        return [b for b in self.basis if b.degree == degree]

    def dual_generators(self) -> list[DualGenerator]:
        return [DualGenerator.of(b) for b in self.basis]

    def mult_basis(self, i: int, j: int) -> Vec:
        if i == 0:
            return {j: Fraction(1)}
        if j == 0:
            return {i: Fraction(1)}
        return dict(self._products.get((i, j), {}))

    def d_basis(self, i: int) -> Vec:
        return dict(self._differential.get(i, {}))

    # -- sparse vector arithmetic ------------------------------------------

    def zero_vec(self) -> Vec:
        return {}

    def unit_vec(self) -> Vec:
        return {0: Fraction(1)}

    def add(self, u: Vec, v: Vec) -> Vec:
        out = dict(u)
        for k, c in v.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def scale(self, u: Vec, c) -> Vec:
        c = Fraction(c)
        return {k: c * v for k, v in u.items()} if c else {}

    def mult(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.mult_basis(i, j).items():
                    s = out.get(k, Fraction(0)) + a * b * c
                    if s:
                        out[k] = s
                    else:
                        del out[k]
        return out

    def d(self, u: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for k, c in self.d_basis(i).items():
                s = out.get(k, Fraction(0)) + a * c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return out

    def vec_degree(self, u: Vec) -> Optional[int]:
        """Common degree of a homogeneous vector, None when zero."""
        deg: Optional[int] = None
        for i, c in u.items():
            if not c:
                continue
            if deg is None:
                deg = self.degree(i)
            elif deg != self.degree(i):
                raise AlgebraError("vector has mixed degrees")
        return deg

    def format_vec(self, u: Vec) -> str:
        if not u:
            return "0"
        parts = []
        for i in sorted(u):
            c = u[i]
            name = self.basis[i].name
            parts.append(f"{c}*{name}" if name != "1" else str(c))
        return " + ".join(parts)

    def __repr__(self) -> str:
        basis = ", ".join(f"{b.name}:{b.degree}" for b in self.basis)
        return f"FiniteCdga({self.name or basis})"


def sphere2_model() -> FiniteCdga:
    """The cohomology model of the two-sphere: basis {1, a}, a^2 = 0, d = 0."""
    return FiniteCdga(
        basis=[("1", 0), ("a", 2)],
        products={(1, 1): {}},
        differential={},
        name="sphere2",
    )


def verify_finite_cdga(model: FiniteCdga) -> Report:
    """Exhaustive check of the CDGA axioms on the finite basis.

    Grading of products and differential, unitality, graded commutativity,
    associativity on all basis triples, Leibniz, d^2 = 0.
    """
    failures: list[str] = []
    n = model.dim()

    for (i, j), row in model._products.items():
        for k, c in row.items():
            if c and model.degree(k) != model.degree(i) + model.degree(j):
                failures.append(
                    f"grading: c[{i},{j}]^{k} nonzero but |a_{k}| != |a_{i}|+|a_{j}|"
                )
    for i, row in model._differential.items():
        for k, c in row.items():
            if c and model.degree(k) != model.degree(i) + 1:
                failures.append(
                    f"grading: d[{i},{k}] nonzero but |a_{k}| != |a_{i}|+1"
                )

    for i in range(n):
        for j in range(n):
            prod = model.mult_basis(i, j)
            sign = -1 if (model.degree(i) % 2 and model.degree(j) % 2) else 1
            flipped = model.scale(model.mult_basis(j, i), sign)
            if prod != flipped:
                failures.append(
                    f"graded commutativity fails at (a_{i}, a_{j}): "
                    f"{model.format_vec(prod)} vs {model.format_vec(flipped)}"
                )

    for i in range(n):
        if model.mult_basis(0, i) != {i: Fraction(1)} or model.mult_basis(i, 0) != {
            i: Fraction(1)
        }:
            failures.append(f"unitality fails at a_{i}")

    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = model.mult(model.mult_basis(i, j), {k: Fraction(1)})
                right = model.mult({i: Fraction(1)}, model.mult_basis(j, k))
                if left != right:
                    failures.append(
                        f"associativity fails at (a_{i}, a_{j}, a_{k}): "
                        f"{model.format_vec(left)} vs {model.format_vec(right)}"
                    )

    for i in range(n):
        for j in range(n):
            lhs = model.d(model.mult_basis(i, j))
            rhs = model.add(
                model.mult(model.d_basis(i), {j: Fraction(1)}),
                model.scale(
                    model.mult({i: Fraction(1)}, model.d_basis(j)),
                    -1 if model.degree(i) % 2 else 1,
                ),
            )
            if lhs != rhs:
                failures.append(
                    f"Leibniz fails at (a_{i}, a_{j}): "
                    f"{model.format_vec(lhs)} vs {model.format_vec(rhs)}"
                )

    for i in range(n):
        dd = model.d(model.d_basis(i))
        if dd:
            failures.append(f"d^2 != 0 at a_{i}: {model.format_vec(dd)}")

    return Report.collect(failures)
