"""Independent oracles used by the test suite.

Nothing in here is imported by the package.  The minimalizer reimplements
homotopy-group readout by brute-force elimination of contractible pairs and
must stay independent of the linear-part computation it guards.
"""

from __future__ import annotations

import random
from fractions import Fraction

from mapmodels.algebra import Element, FreeGca, substitute
from mapmodels.cdga import Cdga, Differential, extend_derivation
from mapmodels import linalg


def brute_force_basis(algebra: FreeGca, degree: int) -> list[tuple]:
    """Enumerate monomials of a degree by filtered products of generators.

    Deliberately dumb: walk all factor multisets with total degree equal to
    the requested one by bounded depth-first search over generator indices
    in arbitrary (not canonical) order, then normalize through the algebra's
    own one-step products.  Used to cross-check ``monomial_basis``.
    """
    gens = list(algebra.generators)
    found = set()

    def walk(start: int, remaining: int, acc: list[int]):
        if remaining == 0:
            found.add(_normalize(algebra, acc))
            return
        for pos in range(start, len(gens)):
            g = gens[pos]
            if g.degree > remaining:
                continue
            if g.is_odd and acc.count(g.index):
                continue
            acc.append(g.index)
            walk(pos, remaining - g.degree, acc)
            acc.pop()

    walk(0, degree, [])
    found.discard(None)
    return sorted(found, key=algebra.monomial_key)


def _normalize(algebra: FreeGca, indices: list[int]):
    element = algebra.one()
    for idx in indices:
        g = algebra.generators[idx]
        element = element * Element(algebra, {((idx, 1),): Fraction(1)})
    terms = element.terms()
    if not terms:
        return None
    (monomial, _), = terms.items()
    return monomial


def minimalize(cdga: Cdga, window: int) -> dict[int, int]:
    """Homotopy dims by iterated elimination of contractible pairs.

    Pick a generator u whose differential has a linear term c*v, rewrite the
    algebra without u and v (u -> 0, v -> -(du - c v)/c) and repeat until no
    differential has a linear part; then the dims are the generator counts.
    Requires all generators in degree >= 2 so that du can contain neither u
    nor v outside its linear term.
    """
    algebra = cdga.algebra
    if any(g.degree < 2 for g in algebra.generators):
        raise ValueError("minimalizer oracle needs generators in degree >= 2")
    differential = cdga.differential

    while True:
        pair = _find_contractible_pair(algebra, differential)
        if pair is None:
            break
        u, v, c = pair
        rest = differential.image(u) - algebra.gen(v.name).scale(c)
        replacement = rest.scale(Fraction(-1, 1) / c)
        survivors = [g for g in algebra.generators if g.index not in (u.index, v.index)]
        new_algebra = FreeGca(
            [(g.name, g.degree) for g in survivors], max_degree=algebra.max_degree
        )
        mapping = {}
        for g in algebra.generators:
            if g.index == u.index:
                mapping[g] = new_algebra.zero()
            elif g.index == v.index:
                mapping[g] = substitute(
                    replacement,
                    {
                        h: (
                            new_algebra.gen(h.name)
                            if h.index not in (u.index, v.index)
                            else new_algebra.zero()
                        )
                        for h in algebra.generators
                    },
                    new_algebra,
                )
            else:
                mapping[g] = new_algebra.gen(g.name)
        images = {}
        for g in survivors:
            images[new_algebra.generator(g.name)] = substitute(
                differential.image(g), mapping, new_algebra
            )
        differential = extend_derivation(new_algebra, images)
        algebra = new_algebra

    counts: dict[int, int] = {k: 0 for k in range(1, window + 1)}
    for g in algebra.generators:
        if 1 <= g.degree <= window:
            counts[g.degree] += 1
    return counts


def _find_contractible_pair(algebra: FreeGca, differential: Differential):
    for u in algebra.generators:
        image = differential.image(u)
        for m, c in sorted(image.terms().items(), key=lambda t: algebra.monomial_key(t[0])):
            if len(m) == 1 and m[0][1] == 1:
                v = algebra.generators[m[0][0]]
                return u, v, c
    return None


def random_sullivan_algebra(
    rng: random.Random,
    n_generators: int,
    degree_range: tuple[int, int] = (2, 5),
    max_degree: int = 12,
    minimal: bool = False,
) -> Cdga:
    """Random Sullivan algebra built as an iterated extension.

    Each new generator's differential is a random cocycle of the algebra
    built so far, which guarantees d^2 = 0.  With ``minimal`` the cocycle is
    restricted to decomposables so the result has no linear part.
    """
    lo, hi = degree_range
    specs = sorted(
        ((f"g{i}", rng.randint(lo, hi)) for i in range(n_generators)),
        key=lambda s: s[1],
    )
    algebra = FreeGca(specs, max_degree=max_degree)
    images: dict = {g: algebra.zero() for g in algebra.generators}

    for count in range(1, n_generators + 1):
        prefix = algebra.generators[:count]
        g = prefix[-1]
        target_degree = g.degree + 1
        if target_degree > max_degree:
            continue
        sub = FreeGca([(h.name, h.degree) for h in prefix[:-1]], max_degree=max_degree)
        sub_images = {
            sub.generator(h.name): substitute(
                images[h],
                {
                    hh: (sub.gen(hh.name) if hh.index < count - 1 else sub.zero())
                    for hh in algebra.generators
                },
                sub,
            )
            for h in prefix[:-1]
        }
        sub_d = extend_derivation(sub, sub_images)
        basis = sub.monomial_basis(target_degree)
        if minimal:
            basis = [m for m in basis if sum(e for _, e in m) >= 2]
        if not basis:
            continue
        up = sub.monomial_basis(target_degree + 1) if target_degree + 1 <= max_degree else []
        up_index = {m: i for i, m in enumerate(up)}
        matrix = []
        for i in range(len(up)):
            matrix.append([Fraction(0)] * len(basis))
        for j, m in enumerate(basis):
            img = sub_d.apply(Element(sub, {m: Fraction(1)}))
            for mm, c in img.terms().items():
                matrix[up_index[mm]][j] = c
        kernel = linalg.nullspace(matrix, len(basis))
        if not kernel:
            continue
        coeffs = [Fraction(rng.randint(-2, 2)) for _ in kernel]
        vec = [sum((c * k[i] for c, k in zip(coeffs, kernel)), Fraction(0)) for i in range(len(basis))]
        element = Element(sub, {basis[i]: vec[i] for i in range(len(basis)) if vec[i]})
        images[g] = substitute(
            element,
            {h: algebra.gen(h.name) for h in sub.generators},
            algebra,
        )
    return Cdga(algebra, extend_derivation(algebra, images))
