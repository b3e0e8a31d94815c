"""Constructors for the named projective families, maps and strata.

Families over F_q, all cut out by the systems below (x_i are projective
coordinates, parameters are elements of the field):

  QuinticX      x0^5 + x1^5 + x2^5 + x3^5 + x4^5 - 5 mu x0 x1 x2 x3 x4      in P^4
  QuinticY      (x0 + x1 + x2 + x3 + x4)^5 - (5 mu)^5 x0 x1 x2 x3 x4        in P^4
  QuadricQ      x0 + w x1 + w^2 x2 + w^3 x3 + w^4 x4  and a fixed
                w-weighted quadric (w a primitive 5th root of unity)        in P^4
  CubicsV       x0^3 + x1^3 + x2^3 = 3 lam x3 x4 x5,
                x3^3 + x4^3 + x5^3 = 3 lam x0 x1 x2                         in P^5
  CubicsW       (x0 + x1 + x2)^3 = (3 lam)^3 x3 x4 x5,
                (x3 + x4 + x5)^3 = (3 lam)^3 x0 x1 x2                       in P^5
  CubicsWtilde  (x3 + x4 + x5 - nu x0)^3 = 27 x3 x4 x5,
                (x0 + x1 + x2 - nu x3)^3 = 27 x0 x1 x2                      in P^5
  LinesA        union of the 10 lines  x_i = x_j = x_k + x_l + x_m = 0      in P^4
  PointsB       the 10 points with three zero coordinates and the other
                two opposite, e.g. (0:0:0:1:-1)                             in P^4

Integer-parameter instances are instantiated from one integer-coefficient
template by reduction mod p, so every field sees the same source of truth.
Projective points are tuples of FieldElements kept in canonical form
(first nonzero coordinate scaled to 1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DimensionMismatch, MissingParameter, ZeroDenominator
from .ffield import FieldDescriptor, FieldElement, primitive_nth_root
from .mvpoly import MPoly, PolySystem, eval_batch, poly_equal


class FamilyId(enum.Enum):
    QUINTIC_X = "QuinticX"
    QUINTIC_Y = "QuinticY"
    QUADRIC_Q = "QuadricQ"
    CUBICS_V = "CubicsV"
    CUBICS_W = "CubicsW"
    CUBICS_WTILDE = "CubicsWtilde"
    LINES_A = "LinesA"
    POINTS_B = "PointsB"


class Stratum(enum.Enum):
    GENERIC = "Generic"
    ON_LINE_A = "OnLineA"
    IN_POINT_SET_B = "InPointSetB"
    EXTRA_NODE = "ExtraNode"


@dataclass(frozen=True)
class MonomialMap:
    """Coordinate-wise power map x_i -> x_i^e on P^(arity-1)."""

    exponent: int
    arity: int

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("map exponent must be >= 1")


class LinearChange:
    """An invertible linear substitution, stored as a square matrix of
    FieldElements; row i gives the polynomial replacing variable i."""

    __slots__ = ("matrix", "field")

    def __init__(self, matrix):
        rows = [tuple(r) for r in matrix]
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise DimensionMismatch("linear change matrix must be square")
        self.matrix = tuple(rows)
        self.field = rows[0][0].field
        if _det_rank(rows, self.field) < n:
            raise ValueError("linear change matrix is singular")


def _det_rank(rows, F) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, n) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = m[rank][col].inverse()
        m[rank] = [v * inv for v in m[rank]]
        for r in range(n):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


@dataclass
class FamilyInstance:
    id: FamilyId
    field: FieldDescriptor
    params: dict[str, FieldElement]
    system: PolySystem | None
    ambient_dim: int
    degrees: tuple[int, ...] = dc_field(default=())

    @property
    def nvars(self) -> int:
        return self.ambient_dim + 1

    def param_string(self) -> str:
        """Canonical parameter string used as part of the cache key."""
        return ";".join(
            f"{k}={v.canonical_str()}" for k, v in sorted(self.params.items())
        )

    def __repr__(self):
        ps = self.param_string()
        return f"{self.id.value}({ps}) over {self.field!r}" if ps else (
            f"{self.id.value} over {self.field!r}"
        )


# ---------------------------------------------------------------------------
# equation builders (domain-generic: integer or field coefficients)
# ---------------------------------------------------------------------------


def _quintic_x_polys(mu, F=None) -> list[MPoly]:
    x = [MPoly.variable(5, i, F) for i in range(5)]
    f = MPoly.zero(5, F)
    for xi in x:
        f = f + xi**5
    prod = x[0] * x[1] * x[2] * x[3] * x[4]
    return [f - prod.scale(mu * 5)]


def _quintic_y_polys(mu, F=None) -> list[MPoly]:
    x = [MPoly.variable(5, i, F) for i in range(5)]
    s = MPoly.zero(5, F)
    for xi in x:
        s = s + xi
    prod = x[0] * x[1] * x[2] * x[3] * x[4]
    c = (5 * mu) ** 5 if F is None else (mu * 5) ** 5
    return [s**5 - prod.scale(c)]


def _cubics_v_polys(lam, F=None) -> list[MPoly]:
    x = [MPoly.variable(6, i, F) for i in range(6)]
    f1 = x[0] ** 3 + x[1] ** 3 + x[2] ** 3 - (x[3] * x[4] * x[5]).scale(lam * 3)
    f2 = x[3] ** 3 + x[4] ** 3 + x[5] ** 3 - (x[0] * x[1] * x[2]).scale(lam * 3)
    return [f1, f2]


def _cubics_w_polys(lam, F=None) -> list[MPoly]:
    x = [MPoly.variable(6, i, F) for i in range(6)]
    c = (3 * lam) ** 3 if F is None else (lam * 3) ** 3
    f1 = (x[0] + x[1] + x[2]) ** 3 - (x[3] * x[4] * x[5]).scale(c)
    f2 = (x[3] + x[4] + x[5]) ** 3 - (x[0] * x[1] * x[2]).scale(c)
    return [f1, f2]


def _cubics_wtilde_polys(nu, F=None) -> list[MPoly]:
    x = [MPoly.variable(6, i, F) for i in range(6)]
    f1 = (x[3] + x[4] + x[5] - x[0].scale(nu)) ** 3 - (x[3] * x[4] * x[5]).scale(27)
    f2 = (x[0] + x[1] + x[2] - x[3].scale(nu)) ** 3 - (x[0] * x[1] * x[2]).scale(27)
    return [f1, f2]


def _quadric_q_polys(xi: FieldElement, F: FieldDescriptor) -> list[MPoly]:
    x = [MPoly.variable(5, i, F) for i in range(5)]
    lin = x[0] + x[1].scale(xi) + x[2].scale(xi**2) + x[3].scale(xi**3) + x[4].scale(xi**4)
    pairs = [
        (0, 1, 0), (0, 2, 1), (0, 3, 2), (0, 4, 3),
        (1, 2, 2), (1, 3, 3), (1, 4, 4),
        (2, 3, 4), (2, 4, 0), (3, 4, 1),
    ]
    quad = MPoly.zero(5, F)
    for i, j, e in pairs:
        quad = quad + (x[i] * x[j]).scale(xi**e)
    return [lin, quad]


def template_system(fid: FamilyId, **int_params) -> list[MPoly]:
    """The integer-coefficient template for a family with integer parameters."""
    if fid is FamilyId.QUINTIC_X:
        return _quintic_x_polys(int_params["mu"])
    if fid is FamilyId.QUINTIC_Y:
        return _quintic_y_polys(int_params["mu"])
    if fid is FamilyId.CUBICS_V:
        return _cubics_v_polys(int_params["lam"])
    if fid is FamilyId.CUBICS_W:
        return _cubics_w_polys(int_params["lam"])
    if fid is FamilyId.CUBICS_WTILDE:
        return _cubics_wtilde_polys(int_params["nu"])
    raise ValueError(f"{fid} has no integer template")


_PARAM_NAMES = {
    FamilyId.QUINTIC_X: ("mu",),
    FamilyId.QUINTIC_Y: ("mu",),
    FamilyId.QUADRIC_Q: (),
    FamilyId.CUBICS_V: ("lam",),
    FamilyId.CUBICS_W: ("lam",),
    FamilyId.CUBICS_WTILDE: ("nu",),
    FamilyId.LINES_A: (),
    FamilyId.POINTS_B: (),
}


def build_family(fid: FamilyId, params: dict | None, F: FieldDescriptor) -> FamilyInstance:
    """Build a family instance over F.

    Integer parameter values reduce into the field.  QuadricQ requires a
    primitive 5th root of unity in F and takes none from the caller; the
    deterministic choice is recorded under params["xi5"].
    """
    params = dict(params or {})
    needed = _PARAM_NAMES[fid]
    for name in needed:
        if name not in params:
            raise MissingParameter(f"{fid.value} requires parameter '{name}'")
    for name in list(params):
        if name not in needed:
            raise MissingParameter(f"{fid.value} does not take parameter '{name}'")
    elems = {k: F.element(v) for k, v in params.items()}

    if fid in (FamilyId.LINES_A, FamilyId.POINTS_B):
        return FamilyInstance(fid, F, {}, None, 4)

    if fid is FamilyId.QUADRIC_Q:
        xi = primitive_nth_root(F, 5)
        system = PolySystem(_quadric_q_polys(xi, F), homogeneous=True)
        return FamilyInstance(fid, F, {"xi5": xi}, system, 4, degrees=(1, 2))

    if all(isinstance(params[n], int) for n in needed):
        polys = [p.to_field(F) for p in template_system(fid, **params)]
    else:
        builder = {
            FamilyId.QUINTIC_X: _quintic_x_polys,
            FamilyId.QUINTIC_Y: _quintic_y_polys,
            FamilyId.CUBICS_V: _cubics_v_polys,
            FamilyId.CUBICS_W: _cubics_w_polys,
            FamilyId.CUBICS_WTILDE: _cubics_wtilde_polys,
        }[fid]
        polys = builder(elems[needed[0]], F)
    system = PolySystem(polys, homogeneous=True)
    dim = system.nvars - 1
    degrees = tuple(p.degree() for p in system.polys)
    return FamilyInstance(fid, F, elems, system, dim, degrees=degrees)


def quintic_x(mu, F) -> FamilyInstance:
    return build_family(FamilyId.QUINTIC_X, {"mu": mu}, F)


def quintic_y(mu, F) -> FamilyInstance:
    return build_family(FamilyId.QUINTIC_Y, {"mu": mu}, F)


def quadric_q(F) -> FamilyInstance:
    return build_family(FamilyId.QUADRIC_Q, {}, F)


def cubics_v(lam, F) -> FamilyInstance:
    return build_family(FamilyId.CUBICS_V, {"lam": lam}, F)


def cubics_w(lam, F) -> FamilyInstance:
    return build_family(FamilyId.CUBICS_W, {"lam": lam}, F)


def cubics_wtilde(nu, F) -> FamilyInstance:
    return build_family(FamilyId.CUBICS_WTILDE, {"nu": nu}, F)


def wtilde_from_lambda(lam, F) -> FamilyInstance:
    """Convenience constructor setting nu = 1 / lam^3."""
    lam = F.element(lam)
    if not lam:
        raise ZeroDenominator("nu = 1 / lam^3 requires lam != 0")
    return cubics_wtilde((lam**3).inverse(), F)


# ---------------------------------------------------------------------------
# points and maps
# ---------------------------------------------------------------------------


def normalize_point(point) -> tuple[FieldElement, ...]:
    """Canonical projective representative: first nonzero coordinate is 1."""
    point = tuple(point)
    pivot = next((x for x in point if x), None)
    if pivot is None:
        raise ValueError("the zero vector is not a projective point")
    inv = pivot.inverse()
    return tuple(x * inv for x in point)


def apply_map(m, point) -> tuple[FieldElement, ...]:
    """Image of a projective point under a MonomialMap or LinearChange."""
    point = tuple(point)
    if isinstance(m, MonomialMap):
        if len(point) != m.arity:
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, map expects {m.arity}"
            )
        return normalize_point(tuple(x ** m.exponent for x in point))
    if isinstance(m, LinearChange):
        n = len(m.matrix)
        if len(point) != n:
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, change expects {n}"
            )
        image = tuple(
            sum((c * x for c, x in zip(row, point)), m.field.zero)
            for row in m.matrix
        )
        return normalize_point(image)
    raise TypeError(f"cannot apply {type(m).__name__} to a point")


def strata_membership(point, y_instance: FamilyInstance) -> Stratum:
    """Classify a P^4 point against the singular strata of a QuinticY instance.

    InPointSetB: exactly three coordinates vanish and the other two sum to
    zero.  OnLineA: some pair of coordinates vanishes and the remaining
    three sum to zero (and not InPointSetB).  ExtraNode: the point
    (1:1:1:1:1) when mu^5 = 1.  Everything else is Generic.
    """
    if y_instance.id is not FamilyId.QUINTIC_Y:
        raise ValueError("strata are defined relative to a QuinticY instance")
    point = tuple(point)
    if len(point) != 5:
        raise DimensionMismatch("strata are defined for points of P^4")
    F = y_instance.field
    zeros = sum(1 for x in point if not x)
    total = sum(point, F.zero)
    if zeros == 3 and not total:
        return Stratum.IN_POINT_SET_B
    if zeros >= 2 and not total:
        return Stratum.ON_LINE_A
    mu = y_instance.params["mu"]
    if zeros == 0 and mu**5 == F.one:
        if normalize_point(point) == (F.one,) * 5:
            return Stratum.EXTRA_NODE
    return Stratum.GENERIC


def points_b(F: FieldDescriptor) -> list[tuple[FieldElement, ...]]:
    """The 10 triple-intersection points, normalized."""
    out = []
    one, zero = F.one, F.zero
    minus = -one
    for i in range(5):
        for j in range(i + 1, 5):
            pt = [zero] * 5
            pt[i] = one
            pt[j] = minus
            out.append(tuple(pt))
    return out


def points_on_lines_a(F: FieldDescriptor) -> list[tuple[FieldElement, ...]]:
    """All F_q-points of the union of the 10 lines, normalized and deduplicated."""
    pts = set()
    idxs = list(range(5))
    for i in range(5):
        for j in range(i + 1, 5):
            rest = [r for r in idxs if r not in (i, j)]
            reps = [(F.one, F.zero)] + [(F.from_index(t), F.one) for t in range(F.q)]
            for u, v in reps:
                pt = [F.zero] * 5
                pt[rest[1]] = u
                pt[rest[2]] = v
                pt[rest[0]] = -(u + v)
                if any(pt):
                    pts.add(normalize_point(pt))
    return sorted(pts, key=lambda t: tuple(x.index for x in t))


def enumerate_points(instance: FamilyInstance) -> list[tuple[FieldElement, ...]]:
    """Point sets of the stratum families (LinesA, PointsB)."""
    if instance.id is FamilyId.LINES_A:
        return points_on_lines_a(instance.field)
    if instance.id is FamilyId.POINTS_B:
        return points_b(instance.field)
    raise ValueError(f"{instance.id.value} points come from the counting module")


# ---------------------------------------------------------------------------
# the cube-root coordinate change and its verification
# ---------------------------------------------------------------------------


def cube_root_vandermonde_change(F: FieldDescriptor) -> LinearChange:
    """The block substitution x_i -> x_a + w^s x_b + w^(2s) x_c on the two
    3-variable blocks, with w a primitive cube root of unity."""
    w = primitive_nth_root(F, 3)
    one, zero = F.one, F.zero
    w2 = w * w
    block = [
        (one, one, one),
        (one, w, w2),
        (one, w2, w),
    ]
    rows = []
    for r in block:
        rows.append(tuple(r) + (zero, zero, zero))
    for r in block:
        rows.append((zero, zero, zero) + tuple(r))
    return LinearChange(rows)


def verify_coordinate_change(lam, F: FieldDescriptor) -> bool:
    """Check that the Vandermonde block change rewrites CubicsW as claimed.

    After substitution the two cubics must equal, exactly,
      27 * (x0^3 - lam^3 (x3^3 + x4^3 + x5^3 - 3 x3 x4 x5)) and
      27 * (x3^3 - lam^3 (x0^3 + x1^3 + x2^3 - 3 x0 x1 x2)),
    and the nu-form with nu = 1 / lam^3 must be a scalar multiple of them.
    """
    lam = F.element(lam)
    if not lam:
        raise ZeroDenominator("the coordinate change needs lam != 0")
    change = cube_root_vandermonde_change(F)  # raises RootOfUnityUnavailable
    w_inst = cubics_w(lam, F)
    sub = w_inst.system.substitute(change)

    x = [MPoly.variable(6, i, F) for i in range(6)]
    lam3 = lam**3
    t345 = x[3] ** 3 + x[4] ** 3 + x[5] ** 3 - (x[3] * x[4] * x[5]).scale(3)
    t012 = x[0] ** 3 + x[1] ** 3 + x[2] ** 3 - (x[0] * x[1] * x[2]).scale(3)
    base1 = x[0] ** 3 - t345.scale(lam3)
    base2 = x[3] ** 3 - t012.scale(lam3)
    ok = poly_equal(sub.polys[0], base1.scale(27)) and poly_equal(
        sub.polys[1], base2.scale(27)
    )

    nu = lam3.inverse()
    nu_form1 = x[3] ** 3 + x[4] ** 3 + x[5] ** 3 - (x[0] ** 3).scale(nu) - (
        x[3] * x[4] * x[5]
    ).scale(3)
    nu_form2 = x[0] ** 3 + x[1] ** 3 + x[2] ** 3 - (x[3] ** 3).scale(nu) - (
        x[0] * x[1] * x[2]
    ).scale(3)
    ok = ok and poly_equal(nu_form1, base1.scale(-nu))
    ok = ok and poly_equal(nu_form2, base2.scale(-nu))
    return ok


def new_coordinates_w(lam, F: FieldDescriptor) -> FamilyInstance:
    """CubicsW rewritten in the Vandermonde coordinates (the nu-form system).

    Points of this instance are points of W_lam in the new coordinates; the
    cube map sends them onto CubicsWtilde with nu = 1 / lam^3.
    """
    lam = F.element(lam)
    if not lam:
        raise ZeroDenominator("the coordinate change needs lam != 0")
    primitive_nth_root(F, 3)
    nu = (lam**3).inverse()
    x = [MPoly.variable(6, i, F) for i in range(6)]
    f1 = x[3] ** 3 + x[4] ** 3 + x[5] ** 3 - (x[0] ** 3).scale(nu) - (
        x[3] * x[4] * x[5]
    ).scale(3)
    f2 = x[0] ** 3 + x[1] ** 3 + x[2] ** 3 - (x[3] ** 3).scale(nu) - (
        x[0] * x[1] * x[2]
    ).scale(3)
    system = PolySystem([f1, f2], homogeneous=True)
    return FamilyInstance(
        FamilyId.CUBICS_W, F, {"lam": lam}, system, 5, degrees=(3, 3)
    )


def sample_points(
    instance: FamilyInstance, n: int, seed: int = 0, nonzero_coords: bool = False
) -> list[tuple[FieldElement, ...]]:
    """Deterministic sample of n distinct F_q-points on the instance.

    Draws random coordinate tuples, keeps those on the variety, and
    normalizes; with nonzero_coords only points with every coordinate
    nonzero are kept.
    """
    F = instance.field
    nv = instance.nvars
    rng = np.random.default_rng(seed)
    found: dict[tuple, tuple] = {}
    polys = [p.to_field(F) for p in instance.system.polys]
    for _ in range(200):
        batch = rng.integers(1 if nonzero_coords else 0, F.q, size=(nv, 4096))
        coords = [np.ascontiguousarray(batch[i]) for i in range(nv)]
        mask = np.ones(batch.shape[1], dtype=bool)
        for p in polys:
            mask &= eval_batch(p, coords, F) == 0
        if nonzero_coords is False:
            mask &= batch.sum(axis=0) > 0
        for col in np.nonzero(mask)[0]:
            pt = normalize_point(
                [F.from_index(int(batch[i, col])) for i in range(nv)]
            )
            found[tuple(x.index for x in pt)] = pt
            if len(found) >= n:
                return list(found.values())
    raise RuntimeError(f"could not find {n} points on {instance!r}")
