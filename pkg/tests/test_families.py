import pytest

from mirrorquintic.counting import count_naive
from mirrorquintic.errors import (
    MissingParameter,
    RootOfUnityUnavailable,
    ZeroDenominator,
)
from mirrorquintic.families import (
    FamilyId,
    MonomialMap,
    Stratum,
    apply_map,
    build_family,
    cubics_v,
    cubics_w,
    cubics_wtilde,
    enumerate_points,
    new_coordinates_w,
    normalize_point,
    points_b,
    points_on_lines_a,
    quadric_q,
    quintic_x,
    quintic_y,
    sample_points,
    strata_membership,
    template_system,
    verify_coordinate_change,
    wtilde_from_lambda,
)
from mirrorquintic.ffield import make_field
from mirrorquintic.mvpoly import MPoly, poly_equal

F7 = make_field(7)
F11 = make_field(11)
F13 = make_field(13)


def test_build_x_shape():
    inst = quintic_x(1, F11)
    f = inst.system.polys[0]
    assert inst.ambient_dim == 4
    assert len(f) == 6 and f.degree() == 5 and f.is_homogeneous()


def test_build_y_mu_zero_is_hyperplane_power():
    inst = quintic_y(0, F7)
    x = [MPoly.variable(5, i, F7) for i in range(5)]
    s = x[0] + x[1] + x[2] + x[3] + x[4]
    assert poly_equal(inst.system.polys[0], s**5)


def test_build_wtilde_pattern():
    inst = cubics_wtilde(1, F7)
    x = [MPoly.variable(6, i, F7) for i in range(6)]
    f1 = (x[3] + x[4] + x[5] - x[0]) ** 3 - (x[3] * x[4] * x[5]).scale(27)
    assert poly_equal(inst.system.polys[0], f1)
    assert inst.ambient_dim == 5


def test_build_missing_parameter():
    with pytest.raises(MissingParameter):
        build_family(FamilyId.QUINTIC_X, {}, F11)
    with pytest.raises(MissingParameter):
        build_family(FamilyId.QUINTIC_X, {"mu": 1, "nu": 2}, F11)


def test_quadric_needs_fifth_root():
    q = quadric_q(F11)
    assert q.params["xi5"] ** 5 == F11.one
    assert q.degrees == (1, 2)
    with pytest.raises(RootOfUnityUnavailable):
        quadric_q(F7)


def test_quadric_over_extension():
    F16 = make_field(2, 4)
    q = quadric_q(F16)
    assert q.system.vanishes_at((F16.one,) * 5)


def test_wtilde_from_lambda():
    inst = wtilde_from_lambda(2, F7)
    lam = F7.element(2)
    assert inst.params["nu"] == (lam**3).inverse()
    with pytest.raises(ZeroDenominator):
        wtilde_from_lambda(0, F7)


def test_apply_map_fixed_points():
    phi = MonomialMap(5, 5)
    ones = (F11.one,) * 5
    assert apply_map(phi, ones) == ones
    psi = MonomialMap(3, 6)
    ones6 = (F7.one,) * 6
    assert apply_map(psi, ones6) == ones6


def test_apply_map_fifth_root_of_minus_one():
    a = F11.element(2)  # 2^5 = -1 mod 11
    img = apply_map(MonomialMap(5, 5), (F11.zero,) * 3 + (F11.one, a))
    assert img == (F11.zero,) * 3 + (F11.one, F11.element(-1))


def test_strata_membership():
    y1 = quintic_y(1, F7)
    b_pt = (F7.zero, F7.zero, F7.zero, F7.one, F7.element(-1))
    assert strata_membership(b_pt, y1) is Stratum.IN_POINT_SET_B
    y11 = quintic_y(1, F11)
    a_pt = (F11.zero, F11.zero, F11.one, F11.one, F11.element(-2))
    assert strata_membership(a_pt, y11) is Stratum.ON_LINE_A
    ones = (F11.one,) * 5
    assert strata_membership(ones, y11) is Stratum.EXTRA_NODE
    assert strata_membership(ones, quintic_y(2, F11)) is Stratum.GENERIC
    generic = (F11.one, F11.element(2), F11.zero, F11.zero, F11.element(3))
    assert strata_membership(generic, y11) is Stratum.GENERIC


def test_point_sets_a_and_b():
    assert len(points_b(F11)) == 10
    a_pts = points_on_lines_a(F11)
    assert len(a_pts) == 10 * 11 - 10
    b_set = set(points_b(F11))
    assert b_set <= set(a_pts)
    assert len(enumerate_points(build_family(FamilyId.LINES_A, {}, F7))) == 10 * 7 - 10


@pytest.mark.parametrize(
    "q,p,k", [(4, 2, 2), (7, 7, 1), (9, 3, 2), (11, 11, 1), (13, 13, 1), (121, 11, 2)]
)
def test_y_vanishes_on_all_of_a(q, p, k):
    F = make_field(p, k)
    for mu in (1, 2):
        inst = quintic_y(mu, F)
        pts = points_on_lines_a(F)
        assert len(pts) == 10 * q - 10
        for pt in pts:
            assert inst.system.vanishes_at(pt)


@pytest.mark.parametrize("p,lam", [(7, 1), (7, 2), (13, 1), (13, 2)])
def test_verify_coordinate_change(p, lam):
    assert verify_coordinate_change(lam, make_field(p))


def test_coordinate_change_needs_cube_root():
    with pytest.raises(RootOfUnityUnavailable):
        verify_coordinate_change(1, make_field(5))
    with pytest.raises(ZeroDenominator):
        verify_coordinate_change(0, F7)


@pytest.mark.parametrize("p,lam", [(7, 1), (7, 2), (13, 1), (13, 2)])
def test_psi_sends_w_points_to_wtilde(p, lam):
    F = make_field(p)
    w_new = new_coordinates_w(lam, F)
    wt = wtilde_from_lambda(lam, F)
    psi = MonomialMap(3, 6)
    for pt in sample_points(w_new, 100, seed=lam * p):
        assert wt.system.vanishes_at(apply_map(psi, pt))


@pytest.mark.parametrize("p", [2, 3, 7, 11, 31])
def test_phi_sends_x_points_to_y(p):
    # exhaustive over F_q: every point of the quintic maps onto the mirror
    from mirrorquintic.counting import iter_projective_chunks
    from mirrorquintic.mvpoly import eval_batch

    F = make_field(p)
    mu = 2
    fx = quintic_x(mu, F).system.polys[0]
    fy = quintic_y(mu, F).system.polys[0]
    fifth = F.power_table(5)
    for coords in iter_projective_chunks(F, 4):
        on_x = eval_batch(fx, coords, F) == 0
        if not on_x.any():
            continue
        imgs = [fifth[c[on_x]] for c in coords]
        assert (eval_batch(fy, imgs, F) == 0).all()


def test_template_instantiation_consistency():
    # integer template reduced mod p equals direct field-side construction
    lam = F7.element(1)
    direct = cubics_v(lam, F7).system
    templ = [t.to_field(F7) for t in template_system(FamilyId.CUBICS_V, lam=1)]
    assert all(poly_equal(a, b) for a, b in zip(direct.polys, templ))
    assert count_naive(cubics_v(1, F7)).count == count_naive(cubics_v(lam, F7)).count


def test_param_string_canonical():
    assert quintic_x(1, F11).param_string() == "mu=1"
    F121 = make_field(11, 2)
    inst = quintic_x(F121.element((3, 2)), F121)
    assert inst.param_string() == "mu=3,2"


def test_normalize_point():
    pt = (F7.zero, F7.element(3), F7.element(5))
    n = normalize_point(pt)
    assert n[0] == F7.zero and n[1] == F7.one
    with pytest.raises(ValueError):
        normalize_point((F7.zero, F7.zero))
