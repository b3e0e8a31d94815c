"""Singular loci, node classification, quotient-map fibers and the quadric
surface evidence.

Singularity is detected set-theoretically over F_q by the Jacobian
criterion: a point is singular when the defining equations vanish and the
Jacobian matrix has rank below the codimension (zero gradient for
hypersurfaces, all 2x2 minors zero for the codimension-2 pairs).  Nodes
are recognized by a full-rank Hessian in the affine chart of the first
nonzero coordinate; the criterion needs characteristic at least 7 and is
refused below that.

Containment statements about the quadric surface are certified by
exhaustive finite-field enumeration over several primes, which is strong
evidence but not a symbolic proof; the report type is named accordingly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .counting import iter_projective_chunks
from .errors import (
    BadCharacteristic,
    InstanceTooLarge,
    NotSingular,
    RootOfUnityUnavailable,
)
from .families import (
    FamilyId,
    FamilyInstance,
    MonomialMap,
    Stratum,
    normalize_point,
    quadric_q,
    quintic_y,
    strata_membership,
)
from .ffield import FieldDescriptor, FieldElement, element_roots
from .mvpoly import eval_batch

_P4_CAP = 41  # the node census runs up to F_41
_P5_CAP = 13


@dataclass
class SingularReport:
    family: str
    params: str
    q: int
    points: list[tuple[FieldElement, ...]]
    strata_counts: dict[Stratum, int]

    @property
    def count(self) -> int:
        return len(self.points)


@dataclass
class NodeClassification:
    point: tuple[FieldElement, ...]
    is_singular: bool
    hessian_rank: int
    is_node: bool


@dataclass
class FiberReport:
    point: tuple[FieldElement, ...]
    stratum: Stratum | None
    count: int
    predicted: int
    count_within: int | None = None
    within_family: str | None = None


@dataclass
class SurfaceEvidence:
    q: int
    surface_points: int
    special_point_on_surface: bool
    contained_in_target: bool
    jacobian_full_rank: bool
    images_on_mirror: bool
    images_avoid_singular_lines: bool
    # surface points whose images land on the singular lines; empty unless
    # F_q contains a primitive cube root of unity that is a fifth power
    # (then the two points of the surface on each coordinate plane are
    # rational and their images are the cube-root points of the lines)
    line_witnesses: list = dc_field(default_factory=list)

    def all_ok(self) -> bool:
        return (
            self.special_point_on_surface
            and self.contained_in_target
            and self.jacobian_full_rank
            and self.images_on_mirror
            and self.images_avoid_singular_lines
        )


def _codim(instance: FamilyInstance) -> int:
    return len(instance.system.polys)


def singular_points(instance: FamilyInstance, threads: int = 1) -> SingularReport:
    """All F_q-points where the system vanishes and the Jacobian drops rank."""
    F = instance.field
    dim = instance.ambient_dim
    cap = _P4_CAP if dim == 4 else _P5_CAP
    if F.q > cap:
        raise InstanceTooLarge(f"singular scan capped at q <= {cap} for P^{dim}")
    system = instance.system.to_field(F)
    polys = system.polys
    partials = [[f.derivative(v) for v in range(system.nvars)] for f in polys]

    hits: list[tuple[FieldElement, ...]] = []
    for coords in iter_projective_chunks(F, dim):
        mask = np.ones(coords[0].shape, dtype=bool)
        for f in polys:
            mask &= eval_batch(f, coords, F) == 0
        if not mask.any():
            continue
        sub = [c[mask] for c in coords]
        if len(polys) == 1:
            smask = np.ones(sub[0].shape, dtype=bool)
            for d in partials[0]:
                smask &= eval_batch(d, sub, F) == 0
        else:
            jac = [
                [eval_batch(d, sub, F) for d in row] for row in partials
            ]
            smask = np.ones(sub[0].shape, dtype=bool)
            for c1, c2 in itertools.combinations(range(system.nvars), 2):
                minor = F.vsub(
                    F.vmul(jac[0][c1], jac[1][c2]), F.vmul(jac[0][c2], jac[1][c1])
                )
                smask &= minor == 0
        for col in np.nonzero(smask)[0]:
            hits.append(tuple(F.from_index(int(c[col])) for c in sub))

    hits.sort(key=lambda pt: tuple(x.index for x in pt))
    strata: dict[Stratum, int] = {s: 0 for s in Stratum}
    if instance.id is FamilyId.QUINTIC_Y:
        for pt in hits:
            strata[strata_membership(pt, instance)] += 1
    else:
        strata[Stratum.GENERIC] = len(hits)
    return SingularReport(
        instance.id.value, instance.param_string(), F.q, hits, strata
    )


def _matrix_rank(rows: list[list[FieldElement]], F: FieldDescriptor) -> int:
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = m[rank][col].inverse()
        m[rank] = [v * inv for v in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def classify_node(instance: FamilyInstance, point) -> NodeClassification:
    """Hessian test at a singular point of a hypersurface instance.

    Dehomogenizes at the first nonzero coordinate and evaluates the 4x4
    Hessian of the affine equation there; a node has full rank.  Only
    characteristics p >= 7 are accepted: the quadratic-form rank criterion
    degenerates for small p.
    """
    F = instance.field
    if F.p < 7:
        raise BadCharacteristic(
            f"node classification requires characteristic >= 7, got {F.p}"
        )
    if len(instance.system.polys) != 1:
        raise ValueError("node classification applies to hypersurfaces")
    point = normalize_point(point)
    f = instance.system.polys[0].to_field(F)
    value = f.eval(point)
    grad = [f.derivative(v).eval(point) for v in range(f.nvars)]
    singular = (not value) and not any(grad)
    if not singular:
        raise NotSingular(f"{[x.index for x in point]} is a smooth point")
    pivot = next(i for i, x in enumerate(point) if x)
    others = [i for i in range(f.nvars) if i != pivot]
    firsts = {v: f.derivative(v) for v in others}
    hess = [
        [firsts[a].derivative(b).eval(point) for b in others] for a in others
    ]
    rank = _matrix_rank(hess, F)
    return NodeClassification(point, True, rank, rank == len(others))


def preimage_count(
    m: MonomialMap,
    point,
    F: FieldDescriptor,
    within: FamilyInstance | None = None,
    strata_instance: FamilyInstance | None = None,
) -> FiberReport:
    """Fiber of the coordinate-power map over a point, by enumerating e-th
    roots coordinate-wise and deduplicating under scalar identification.

    The count is the full fiber in projective space; when ``within`` is
    given the fiber points lying on that instance are counted as well.
    The predicted geometric count is e^(m-1) with m the number of nonzero
    coordinates; the rational count attains it exactly when every nonzero
    coordinate ratio is an e-th power in F_q.
    """
    point = normalize_point(point)
    if len(point) != m.arity:
        from .errors import DimensionMismatch

        raise DimensionMismatch("point arity does not match the map")
    if (F.q - 1) % m.exponent != 0:
        raise RootOfUnityUnavailable(
            f"{F!r} lacks the {m.exponent}-th roots of unity"
        )
    e = m.exponent
    pivot = next(i for i, x in enumerate(point) if x)
    root_lists = []
    for i, y in enumerate(point):
        if i == pivot:
            root_lists.append([F.one])
        elif not y:
            root_lists.append([F.zero])
        else:
            root_lists.append(element_roots(F, y, e))
    fiber = set()
    if all(root_lists):
        for combo in itertools.product(*root_lists):
            fiber.add(normalize_point(combo))
    nonzero = sum(1 for x in point if x)
    predicted = e ** (nonzero - 1)
    count_within = None
    within_family = None
    if within is not None:
        system = within.system.to_field(F)
        count_within = sum(1 for pt in fiber if system.vanishes_at(pt))
        within_family = within.id.value
    stratum = None
    src = strata_instance or (
        within if within is not None and within.id is FamilyId.QUINTIC_Y else None
    )
    if src is not None:
        stratum = strata_membership(point, src)
    return FiberReport(point, stratum, len(fiber), predicted, count_within, within_family)


def fiber_size_table(m: MonomialMap, F: FieldDescriptor) -> np.ndarray:
    """Vectorized ambient fiber sizes over every point of projective space.

    Returns the array of fiber cardinalities indexed in the deterministic
    chart order of iter_projective_chunks; its sum is the size of P^n(F_q)
    because fibers partition the source.
    """
    e = m.exponent
    dim = m.arity - 1
    # roots_count[v] = number of solutions of u^e = v
    counts = np.zeros(F.q, dtype=np.int64)
    for v in range(F.q):
        counts[v] = len(element_roots(F, F.from_index(v), e)) if v else 1
    out = []
    for coords in iter_projective_chunks(F, dim):
        sizes = np.ones(coords[0].shape, dtype=np.int64)
        seen_pivot = np.zeros(coords[0].shape, dtype=bool)
        for c in coords:
            nz = c != 0
            is_pivot = nz & ~seen_pivot
            seen_pivot |= nz
            take = np.where(nz & ~is_pivot, counts[c], 1)
            sizes *= take
        out.append(sizes)
    return np.concatenate(out)


def surface_evidence(
    surface: FamilyInstance, target: FamilyInstance
) -> SurfaceEvidence:
    """Exhaustive F_q evidence for the quadric-surface claims.

    Checks that (1:1:1:1:1) lies on the surface, that every F_q-point of
    the surface satisfies the target quintic, that the surface's Jacobian
    has full rank 2 at each of its points, and that the coordinate-power
    images of surface points land on the mirror quintic while avoiding its
    singular lines and triple points.
    """
    F = surface.field
    if surface.id is not FamilyId.QUADRIC_Q:
        raise ValueError("evidence is defined for the QuadricQ surface")
    system = surface.system.to_field(F)
    f_target = target.system.polys[0].to_field(F)
    partials = [[g.derivative(v) for v in range(5)] for g in system.polys]

    mu = target.params["mu"]
    mirror = quintic_y(mu, F)
    f_mirror = mirror.system.polys[0].to_field(F)
    phi = MonomialMap(5, 5)
    fifth = F.power_table(5)

    ones = (F.one,) * 5
    special_on_surface = system.vanishes_at(ones)

    n_points = 0
    contained = True
    full_rank = True
    on_mirror = True
    witnesses = []
    for coords in iter_projective_chunks(F, 4):
        mask = np.ones(coords[0].shape, dtype=bool)
        for g in system.polys:
            mask &= eval_batch(g, coords, F) == 0
        if not mask.any():
            continue
        sub = [c[mask] for c in coords]
        n_points += int(mask.sum())
        contained &= bool((eval_batch(f_target, sub, F) == 0).all())
        jac = [[eval_batch(d, sub, F) for d in row] for row in partials]
        rank2 = np.zeros(sub[0].shape, dtype=bool)
        for c1, c2 in itertools.combinations(range(5), 2):
            minor = F.vsub(
                F.vmul(jac[0][c1], jac[1][c2]), F.vmul(jac[0][c2], jac[1][c1])
            )
            rank2 |= minor != 0
        full_rank &= bool(rank2.all())
        imgs = [fifth[c] for c in sub]
        on_mirror &= bool((eval_batch(f_mirror, imgs, F) == 0).all())
        zeros = sum((c == 0).astype(np.int64) for c in imgs)
        total = imgs[0]
        for c in imgs[1:]:
            total = F.vadd(total, c)
        on_a_or_b = (zeros >= 2) & (total == 0)
        for col in np.nonzero(on_a_or_b)[0]:
            witnesses.append(tuple(F.from_index(int(c[col])) for c in sub))
    return SurfaceEvidence(
        F.q,
        n_points,
        special_on_surface,
        contained,
        full_rank,
        on_mirror,
        not witnesses,
        witnesses,
    )


def quadric_evidence_for_prime(p: int) -> SurfaceEvidence:
    """Convenience wrapper: evidence for the surface inside the mu = 1
    quintic over F_p (requires p = 1 mod 5)."""
    from .families import quintic_x
    from .ffield import make_field

    F = make_field(p)
    return surface_evidence(quadric_q(F), quintic_x(1, F))
