"""Diagonal symmetry groups, their actions, orbits and the cube-map kernel.

The quintic group G: scalings x_i -> w^(l_i) x_i (i = 1..4, x_0 fixed,
w a primitive 5th root of unity) with l_1 + l_2 + l_3 + l_4 = 0 mod 5;
125 elements, isomorphic to (Z/5)^3.

The cubic group Gtilde: 81 transformations g_(a, b, d, e; m) with
a, b, d, e in Z/3, m in Z/9 and m = a + b = d + e mod 3, acting as

  (x0 : .. : x5) -> (w3^a w9^m x0 : w3^b w9^m x1 : w9^m x2 :
                     w3^-d w9^-m x3 : w3^-e w9^-m x4 : w9^-m x5)

with w3, w9 fixed primitive cube and ninth roots of unity.  The subgroup
acting trivially through the coordinate-cubing map has 27 elements; the
quotient acts on the image by scaling x0, x1, x2 by a cube root of unity.

Group elements act through explicit field scalars, so invariance is an
exact polynomial comparison, not character bookkeeping.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import RootOfUnityUnavailable
from .families import FamilyInstance, normalize_point
from .ffield import FieldDescriptor, FieldElement, primitive_nth_root
from .mvpoly import MPoly


@dataclass(frozen=True)
class ScalingElement:
    """Exponent tuple (l1, l2, l3, l4) mod 5 with sum divisible by 5."""

    exponents: tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.exponents) != 4 or any(not 0 <= e < 5 for e in self.exponents):
            raise ValueError("exponents must be four residues mod 5")
        if sum(self.exponents) % 5 != 0:
            raise ValueError("exponent sum must be 0 mod 5")

    def compose(self, other: "ScalingElement") -> "ScalingElement":
        return ScalingElement(
            tuple((a + b) % 5 for a, b in zip(self.exponents, other.exponents))
        )

    def inverse(self) -> "ScalingElement":
        return ScalingElement(tuple((-a) % 5 for a in self.exponents))

    def order(self) -> int:
        return 1 if not any(self.exponents) else 5


@dataclass(frozen=True)
class GtildeElement:
    """(alpha, beta, delta, epsilon) mod 3 and mu mod 9 with
    mu = alpha + beta = delta + epsilon mod 3."""

    alpha: int
    beta: int
    delta: int
    epsilon: int
    mu: int

    def __post_init__(self):
        for v in (self.alpha, self.beta, self.delta, self.epsilon):
            if not 0 <= v < 3:
                raise ValueError("block exponents must be residues mod 3")
        if not 0 <= self.mu < 9:
            raise ValueError("mu must be a residue mod 9")
        if (self.alpha + self.beta) % 3 != self.mu % 3 or (
            self.delta + self.epsilon
        ) % 3 != self.mu % 3:
            raise ValueError("constraint mu = a + b = d + e mod 3 violated")

    def compose(self, other: "GtildeElement") -> "GtildeElement":
        return GtildeElement(
            (self.alpha + other.alpha) % 3,
            (self.beta + other.beta) % 3,
            (self.delta + other.delta) % 3,
            (self.epsilon + other.epsilon) % 3,
            (self.mu + other.mu) % 9,
        )

    def inverse(self) -> "GtildeElement":
        return GtildeElement(
            (-self.alpha) % 3,
            (-self.beta) % 3,
            (-self.delta) % 3,
            (-self.epsilon) % 3,
            (-self.mu) % 9,
        )

    def ninth_root_exponents(self) -> tuple[int, ...]:
        """Exponent of w9 in each of the six coordinate scalars."""
        a, b, d, e, m = self.alpha, self.beta, self.delta, self.epsilon, self.mu
        return (
            (3 * a + m) % 9,
            (3 * b + m) % 9,
            m % 9,
            (-3 * d - m) % 9,
            (-3 * e - m) % 9,
            (-m) % 9,
        )


class GroupSpec:
    """A finite abelian group given by its element list and composition."""

    def __init__(self, elements, identity):
        self.elements = tuple(elements)
        self.identity = identity

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in set(self.elements)

    def verify_axioms(self) -> bool:
        """Exhaustive closure, identity and inverse check (groups are small)."""
        elems = set(self.elements)
        if self.identity not in elems:
            return False
        for g in self.elements:
            if g.compose(self.identity) != g or g.inverse() not in elems:
                return False
            if g.compose(g.inverse()) != self.identity:
                return False
        for g in self.elements:
            for h in self.elements:
                if g.compose(h) not in elems:
                    return False
        return True

    def is_abelian(self) -> bool:
        return all(
            g.compose(h) == h.compose(g)
            for g in self.elements
            for h in self.elements
        )


def enumerate_G() -> GroupSpec:
    """The 125-element scaling group of the quintic family."""
    elems = [
        ScalingElement((a, b, c, (-(a + b + c)) % 5))
        for a, b, c in itertools.product(range(5), repeat=3)
    ]
    return GroupSpec(elems, ScalingElement((0, 0, 0, 0)))


def enumerate_Gtilde() -> GroupSpec:
    """The 81-element group acting on the cubic complete intersections."""
    elems = []
    for m in range(9):
        for a in range(3):
            b = (m - a) % 3
            for d in range(3):
                e = (m - d) % 3
                elems.append(GtildeElement(a, b, d, e, m))
    return GroupSpec(elems, GtildeElement(0, 0, 0, 0, 0))


def scalars_for(g, F: FieldDescriptor) -> tuple[FieldElement, ...]:
    """The diagonal field scalars through which g acts on coordinates."""
    if isinstance(g, ScalingElement):
        w = primitive_nth_root(F, 5)
        return (F.one,) + tuple(w**e for e in g.exponents)
    if isinstance(g, GtildeElement):
        if (F.q - 1) % 9 != 0:
            raise RootOfUnityUnavailable(
                f"{F!r} lacks a primitive 9th root of unity"
            )
        w9 = primitive_nth_root(F, 9)
        return tuple(w9**e for e in g.ninth_root_exponents())
    raise TypeError(f"unsupported group element {type(g).__name__}")


def apply_scalars(scalars, point):
    return tuple(s * x for s, x in zip(scalars, point))


def diagonal_invariance(scalars, instance: FamilyInstance) -> bool:
    """True iff each defining polynomial, composed with the diagonal scaling,
    is a nonzero scalar multiple of some defining polynomial of the system."""
    system = instance.system
    if len(scalars) != system.nvars:
        return False
    scaled = []
    for f in system.polys:
        terms = []
        for exps, c in f.terms():
            factor = instance.field.one
            for s, e in zip(scalars, exps):
                if e:
                    factor = factor * s**e
            terms.append((exps, c * factor))
        scaled.append(MPoly(f.nvars, terms, instance.field))
    for g in scaled:
        if not any(_scalar_multiple(g, f) for f in system.polys):
            return False
    return True


def _scalar_multiple(g: MPoly, f: MPoly) -> bool:
    gt, ft = g.terms(), f.terms()
    if len(gt) != len(ft):
        return False
    if not gt:
        return True
    (e0, cg), (e0f, cf) = gt[0], ft[0]
    if e0 != e0f or not cf:
        return False
    ratio = cg / cf
    if not ratio:
        return False
    return all(eg == ef and cg2 == ratio * cf2 for (eg, cg2), (ef, cf2) in zip(gt, ft))


def invariance_check(g, instance: FamilyInstance) -> bool:
    """Exact invariance of the instance's system under the group element."""
    return diagonal_invariance(scalars_for(g, instance.field), instance)


def orbit(point, group: GroupSpec, F: FieldDescriptor) -> set:
    """The orbit of a projective point as a set of normalized tuples."""
    out = set()
    for g in group:
        s = scalars_for(g, F)
        out.add(normalize_point(apply_scalars(s, point)))
    return out


def psi_kernel() -> GroupSpec:
    """The subgroup of Gtilde acting trivially through coordinate cubing.

    An element acts on the image through the cubes of its six scalars;
    those agree projectively exactly when mu = 0 mod 3, giving 27 elements.
    """
    kernel = [g for g in enumerate_Gtilde() if _cubes_projectively_trivial(g)]
    return GroupSpec(kernel, GtildeElement(0, 0, 0, 0, 0))


def _cubes_projectively_trivial(g: GtildeElement) -> bool:
    cubes = [(3 * u) % 9 for u in g.ninth_root_exponents()]
    return len(set(cubes)) == 1


def induced_cube_action(g: GtildeElement) -> tuple[int, ...]:
    """Exponents of w3 by which the image coordinates scale, normalized so
    the second block is fixed."""
    cubes = [u % 3 for u in g.ninth_root_exponents()]  # w9^(3u) = w3^(u mod 3)
    shift = (-cubes[5]) % 3
    return tuple((c + shift) % 3 for c in cubes)


def quotient_generator() -> GtildeElement:
    """Deterministic coset representative generating Gtilde mod the kernel,
    chosen so the induced action scales x0, x1, x2 by w3 exactly once."""
    for g in enumerate_Gtilde():
        if induced_cube_action(g) == (1, 1, 1, 0, 0, 0):
            return g
    raise AssertionError("no generator with the expected induced action")
