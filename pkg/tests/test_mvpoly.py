import numpy as np
import pytest

from mirrorquintic.errors import DimensionMismatch, FieldMismatch
from mirrorquintic.families import (
    LinearChange,
    MonomialMap,
    cubics_v,
    cubics_w,
    cubics_wtilde,
    quadric_q,
    quintic_x,
    quintic_y,
)
from mirrorquintic.ffield import make_field, primitive_nth_root
from mirrorquintic.mvpoly import MPoly, PolySystem, eval_batch, poly_equal


def vars_over(n, F=None):
    return [MPoly.variable(n, i, F) for i in range(n)]


def random_poly(nvars, rng, F, max_terms=6, max_deg=3):
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        exps = tuple(int(e) for e in rng.integers(0, max_deg + 1, size=nvars))
        coeff = F.from_index(int(rng.integers(0, F.q)))
        terms.append((exps, coeff))
    return MPoly(nvars, terms, F)


def random_invertible_change(nvars, rng, F):
    while True:
        rows = [
            [F.from_index(int(rng.integers(0, F.q))) for _ in range(nvars)]
            for _ in range(nvars)
        ]
        try:
            return LinearChange(rows)
        except ValueError:
            continue


def test_eval_simple():
    F2 = make_field(2)
    x = vars_over(2, F2)
    f = x[0] + x[1]
    assert f.eval((F2.one, F2.one)) == F2.zero


def test_eval_family_symmetry_points():
    F11 = make_field(11)
    assert quintic_x(1, F11).system.eval((F11.one,) * 5)[0] == F11.zero
    F7 = make_field(7)
    assert quintic_y(1, F7).system.eval((F7.one,) * 5)[0] == F7.zero


def test_eval_dimension_mismatch():
    F = make_field(5)
    f = MPoly.variable(3, 0, F)
    with pytest.raises(DimensionMismatch):
        f.eval((F.one, F.one))


def test_eval_field_mismatch():
    F, G = make_field(5), make_field(7)
    f = MPoly.variable(2, 0, F)
    with pytest.raises(FieldMismatch):
        f.eval((G.one, G.one))


def test_derivative_power_rule():
    x = vars_over(5)
    f = x[0] ** 5
    assert poly_equal(f.derivative(0), (x[0] ** 4).scale(5))


def test_derivative_of_quintic_template():
    x = vars_over(5)
    f = sum((xi**5 for xi in x), MPoly.zero(5)) - (
        x[0] * x[1] * x[2] * x[3] * x[4]
    ).scale(5)
    expect = (x[0] ** 4).scale(5) - (x[1] * x[2] * x[3] * x[4]).scale(5)
    assert poly_equal(f.derivative(0), expect)


def test_second_derivatives_commute():
    rng = np.random.default_rng(3)
    F = make_field(13)
    for _ in range(100):
        f = random_poly(4, rng, F)
        assert poly_equal(f.derivative(0).derivative(1), f.derivative(1).derivative(0))


def test_derivative_linear():
    rng = np.random.default_rng(4)
    F = make_field(11)
    for _ in range(50):
        f, g = random_poly(3, rng, F), random_poly(3, rng, F)
        assert poly_equal((f + g).derivative(1), f.derivative(1) + g.derivative(1))


def test_substitute_vandermonde_sum():
    F7 = make_field(7)
    w = primitive_nth_root(F7, 3)
    a, b, c = vars_over(3, F7)
    rows = [a + b + c, a + b.scale(w) + c.scale(w**2), a + b.scale(w**2) + c.scale(w)]
    composite = (a + b + c).substitute(rows)
    assert poly_equal(composite, a.scale(3))


@pytest.mark.parametrize("p", [7, 13])
def test_substitute_cube_identity(p):
    # full expansion oracle for the classical three-factor product
    F = make_field(p)
    w = primitive_nth_root(F, 3)
    a, b, c = vars_over(3, F)
    prod = (a + b + c) * (a + b.scale(w) + c.scale(w**2)) * (
        a + b.scale(w**2) + c.scale(w)
    )
    target = a**3 + b**3 + c**3 - (a * b * c).scale(3)
    assert poly_equal(prod, target)


def test_substitute_monomial_map():
    x = vars_over(5)
    f = sum(x, MPoly.zero(5))
    g = f.substitute(MonomialMap(5, 5))
    assert poly_equal(g, sum((xi**5 for xi in x), MPoly.zero(5)))


def test_poly_equal_basics():
    x = vars_over(2)
    assert poly_equal(x[0] + x[1], x[1] + x[0])
    assert not poly_equal(x[0], x[0].scale(2))


def test_eval_substitute_compatibility():
    # eval(substitute(f, L), x) == eval(f, L(x)) on random data
    for p in (7, 11):
        F = make_field(p)
        rng = np.random.default_rng(p)
        for _ in range(100):
            f = random_poly(3, rng, F)
            L = random_invertible_change(3, rng, F)
            pt = tuple(F.from_index(int(i)) for i in rng.integers(0, F.q, size=3))
            if not any(pt):
                continue
            lhs = f.substitute(L).eval(pt)
            image = tuple(
                sum((c * x for c, x in zip(row, pt)), F.zero) for row in L.matrix
            )
            assert lhs == f.eval(image)


def all_family_systems(F_p4, F_p5):
    out = [
        quintic_x(1, F_p4).system,
        quintic_y(2, F_p4).system,
        cubics_v(1, F_p5).system,
        cubics_w(2, F_p5).system,
        cubics_wtilde(1, F_p5).system,
    ]
    out.append(quadric_q(F_p4).system)
    return out


def test_family_polynomials_homogeneous():
    F11, F7 = make_field(11), make_field(7)
    rng = np.random.default_rng(9)
    for system in all_family_systems(F11, F7):
        F = system.field
        for f in system.polys:
            assert f.is_homogeneous()
            d = f.degree()
            for _ in range(10):
                pt = tuple(F.from_index(int(i)) for i in rng.integers(0, F.q, size=f.nvars))
                t = F.from_index(int(rng.integers(1, F.q)))
                scaled = tuple(t * x for x in pt)
                assert f.eval(scaled) == t**d * f.eval(pt)


def test_euler_relation_exact():
    F11, F7 = make_field(11), make_field(7)
    for system in all_family_systems(F11, F7):
        for f in system.polys:
            total = MPoly.zero(f.nvars, system.field)
            for i in range(f.nvars):
                total = total + MPoly.variable(f.nvars, i, system.field) * f.derivative(i)
            assert poly_equal(total, f.scale(f.degree()))


def test_eval_batch_matches_scalar():
    F = make_field(11)
    f = quintic_y(2, F).system.polys[0]
    rng = np.random.default_rng(5)
    pts = rng.integers(0, 11, size=(5, 64))
    vals = eval_batch(f, [pts[i] for i in range(5)], F)
    for j in range(64):
        pt = tuple(F.from_index(int(pts[i, j])) for i in range(5))
        assert int(vals[j]) == f.eval(pt).index


def test_system_homogeneity_flag_checked():
    F = make_field(7)
    x = vars_over(2, F)
    with pytest.raises(ValueError):
        PolySystem([x[0] + x[1] ** 2], homogeneous=True)


def test_mixed_domain_promotes():
    F = make_field(7)
    xi = vars_over(2)  # integer coefficients
    xf = vars_over(2, F)
    assert poly_equal(xi[0].scale(8), xf[0])  # 8 = 1 mod 7 after promotion
