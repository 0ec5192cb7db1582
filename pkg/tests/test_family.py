import pytest
from hypothesis import given, settings, strategies as st

from mordellfam.curves import MordellCurve, Point
from mordellfam.family import (
    FLAG_COINCIDENT,
    FLAG_K_ZERO,
    FamilyParams,
    PlaneCubic,
    SingularPointError,
    TangentContainedError,
    build_instance,
    compute_k,
    compute_points,
    cubic_condition,
    cubic_condition_symbolic,
    family_polynomials,
    normalize_projective,
    solve_t_pair,
    tangent_third_point,
    verify_derivation,
)
from mordellfam.polynomials import MultiPoly, parse_poly


# -- k and the points ---------------------------------------------------------------

def test_k_golden():
    assert compute_k(FamilyParams(1, 2, 3)) == 28592640


def test_k_all_ones():
    # factors 1, 1, 1 and trailing factor -3: -8 * -3 = 24
    assert compute_k(FamilyParams(1, 1, 1)) == 24


def test_k_one_one_two():
    # factors (-6)(8)(8), trailing factor 32
    assert -8 * (-6) * 8 * 8 * 32 == 98304
    assert compute_k(FamilyParams(1, 1, 2)) == 98304


def test_points_golden():
    p1, p2, p3 = compute_points(FamilyParams(1, 2, 3))
    assert (p1.x, p1.y) == (97920, 41909760)
    assert (p2.x, p2.y) == (195840, 91261440)
    assert (p3.x, p3.y) == (293760, 161763840)


def test_points_all_ones_collapse():
    p1, p2, p3 = compute_points(FamilyParams(1, 1, 1))
    assert p1 == p2 == p3 == Point.affine(-8, -8)


def test_points_one_one_two():
    p1, p2, p3 = compute_points(FamilyParams(1, 1, 2))
    assert p1 == p2 == Point.affine(3072, 196608)
    assert p3.x == 6144


def test_points_satisfy_curve_equation_symbolically():
    polys = family_polynomials()
    for i in "123":
        residual = polys[f"v{i}"] ** 2 - polys[f"u{i}"] ** 3 - polys["k"] ** 2
        assert residual.is_zero()
        assert (polys[f"v{i}"] ** 2).degree() == 30


params_strategy = st.tuples(
    st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20)
).filter(lambda t: t != (0, 0, 0))


@given(params_strategy)
@settings(max_examples=120, deadline=None, derandomize=True)
def test_points_on_curve_for_sampled_params(abc):
    params = FamilyParams(*abc)
    k = compute_k(params)
    for p in compute_points(params):
        assert p.y * p.y == p.x**3 + k * k


@given(st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6)).filter(
    lambda t: t != (0, 0, 0)), st.integers(1, 3))
@settings(max_examples=60, deadline=None, derandomize=True)
def test_scaling_covariance(abc, lam):
    a, b, c = abc
    base = FamilyParams(a, b, c)
    scaled = FamilyParams(lam * a, lam * b, lam * c)
    assert compute_k(scaled) == lam**15 * compute_k(base)
    for p, q in zip(compute_points(base), compute_points(scaled)):
        assert q.x == lam**10 * p.x
        assert abs(q.y) == lam**15 * abs(p.y)


@given(params_strategy)
@settings(max_examples=60, deadline=None, derandomize=True)
def test_swapping_b_and_c_swaps_the_last_two_points(abc):
    a, b, c = abc
    k1 = compute_k(FamilyParams(a, b, c))
    k2 = compute_k(FamilyParams(a, c, b))
    assert k1 == k2
    pts1 = {(p.x, abs(p.y)) for p in compute_points(FamilyParams(a, b, c))}
    pts2 = {(p.x, abs(p.y)) for p in compute_points(FamilyParams(a, c, b))}
    assert pts1 == pts2


# -- instance assembly ----------------------------------------------------------------

def test_build_instance_golden():
    inst = build_instance(FamilyParams(1, 2, 3))
    assert inst.k == 28592640
    assert inst.curve == MordellCurve(28592640**2)
    assert inst.flags == frozenset()


def test_build_instance_coincident():
    inst = build_instance(FamilyParams(1, 1, 1))
    assert FLAG_COINCIDENT in inst.flags


def test_build_instance_k_zero():
    # c = 0 kills the second factor of S: k = 0 and every point is (0, 0)
    inst = build_instance(FamilyParams(1, 1, 0))
    assert inst.k == 0
    assert inst.curve is None
    assert FLAG_K_ZERO in inst.flags
    assert FLAG_COINCIDENT in inst.flags


def test_params_reject_all_zero():
    with pytest.raises(ValueError):
        FamilyParams(0, 0, 0)


def test_instance_record_round_trip_values():
    inst = build_instance(FamilyParams(1, 2, 3))
    record = inst.as_record()
    assert record["k"] == "28592640"
    assert record["d"] == str(28592640**2)
    assert record["points"][0] == "(97920, 41909760)"
    assert record["flags"] == []


# -- the plane cubic -----------------------------------------------------------------

def test_cubic_is_homogeneous_degree_three():
    for abc in [(1, 2, 3), (2, 3, 4), (1, 5, 7), (-2, 3, 5)]:
        cubic = cubic_condition(FamilyParams(*abc))
        assert cubic.poly.is_homogeneous(3)


def test_cubic_vanishes_at_base_point():
    cubic = cubic_condition(FamilyParams(1, 2, 3))
    assert cubic.eval((1, 8, 27)) == 0


def test_cubic_vanishes_at_tangent_point():
    cubic = cubic_condition(FamilyParams(1, 2, 3))
    # w-values 1*34, 8*20, 27*(-18)
    assert cubic.eval((34, 160, -486)) == 0


def test_cubic_base_point_vanishes_symbolically():
    a3 = MultiPoly.var("a") ** 3
    b3 = MultiPoly.var("b") ** 3
    c3 = MultiPoly.var("c") ** 3
    f = cubic_condition_symbolic().subs({"w1": a3, "w2": b3, "w3": c3})
    assert f.is_zero()


def test_plane_cubic_validation():
    with pytest.raises(ValueError):
        PlaneCubic(parse_poly("w1^2 + w2"))
    with pytest.raises(ValueError):
        PlaneCubic(parse_poly("x^3"))


# -- tangent process -------------------------------------------------------------------

def test_tangent_golden():
    cubic = cubic_condition(FamilyParams(1, 2, 3))
    assert tangent_third_point(cubic, (1, 8, 27)) == normalize_projective((34, 160, -486))


def test_tangent_2_3_4():
    cubic = cubic_condition(FamilyParams(2, 3, 4))
    got = tangent_third_point(cubic, (8, 27, 64))
    expected = (8 * (27 + 64 - 8), 27 * (64 + 8 - 27), 64 * (8 + 27 - 64))
    assert got == normalize_projective(expected)
    assert cubic.eval(got) == 0


def test_tangent_fermat_like():
    cubic = PlaneCubic(parse_poly("w1^3 + w2^3 - 2*w3^3"))
    q = tangent_third_point(cubic, (1, 1, 1))
    assert cubic.eval(q) == 0
    g = 0
    from math import gcd
    for v in q:
        g = gcd(g, v)
    assert g == 1  # lowest terms


def test_tangent_result_always_on_cubic():
    for a in range(1, 6):
        for b in range(1, 6):
            for c in range(1, 6):
                cubic = cubic_condition(FamilyParams(a, b, c))
                try:
                    q = tangent_third_point(cubic, (a**3, b**3, c**3))
                except (SingularPointError, TangentContainedError):
                    continue  # repeated parameters degenerate the cubic
                assert cubic.eval(q) == 0


def test_tangent_rejects_singular_point():
    # repeated parameters make the base point singular on the degenerate cubic
    cubic = cubic_condition(FamilyParams(1, 1, 1))
    with pytest.raises(SingularPointError):
        tangent_third_point(cubic, (1, 1, 1))


def test_tangent_rejects_off_curve_point():
    cubic = cubic_condition(FamilyParams(1, 2, 3))
    assert cubic.eval((0, 1, 2)) != 0
    with pytest.raises(ValueError):
        tangent_third_point(cubic, (0, 1, 2))


def test_tangent_contained_in_reducible_cubic():
    # w1^2 * w2 contains the line w2 = 0; (1, 0, 0) is smooth there but its
    # tangent is that very line, so the restriction vanishes identically
    cubic = PlaneCubic(parse_poly("w1^2*w2"))
    with pytest.raises(TangentContainedError):
        tangent_third_point(cubic, (1, 0, 0))


def test_tangent_at_inflection_returns_the_point():
    # (1, -1, 0) is an inflection of the Fermat-like cubic
    cubic = PlaneCubic(parse_poly("w1^3 + w2^3 - 2*w3^3"))
    assert tangent_third_point(cubic, (1, -1, 0)) == (1, -1, 0)


def test_normalize_projective():
    assert normalize_projective((34, 160, -486)) == (17, 80, -243)
    assert normalize_projective((-2, 4, -6)) == (1, -2, 3)
    from fractions import Fraction
    assert normalize_projective((Fraction(1, 2), Fraction(1, 3), 0)) == (3, 2, 0)
    with pytest.raises(ValueError):
        normalize_projective((0, 0, 0))


# -- chord parameters -------------------------------------------------------------------

def test_t_pair_cross_multiplication_is_the_cubic_condition():
    (num1, den1), (num2, den2) = solve_t_pair()
    cross = num1 * den2 - num2 * den1
    assert (cross + 2 * MultiPoly.var("k") * cubic_condition_symbolic()).is_zero()


def test_t_pair_agree_at_base_point():
    # at w = (a^3, b^3, c^3) both parameters vanish identically
    (num1, den1), (num2, den2) = solve_t_pair(
        params=FamilyParams(1, 2, 3), w=(1, 8, 27)
    )
    t1 = num1.eval({"k": 1}) / den1.eval({})
    t2 = num2.eval({"k": 1}) / den2.eval({})
    assert t1 == t2 == 0
    assert den1.eval({}) != 0 and den2.eval({}) != 0


def test_t_pair_agree_at_tangent_point():
    params = FamilyParams(1, 2, 3)
    w = (34, 160, -486)
    (num1, den1), (num2, den2) = solve_t_pair(params=params, w=w)
    k = 28592640
    t1 = num1.eval({"k": k}) / den1.eval({})
    t2 = num2.eval({"k": k}) / den2.eval({})
    assert t1 == t2
    assert t1 != 0


def test_t_pair_degenerate_denominators_flagged_by_caller():
    (num1, den1), (num2, den2) = solve_t_pair(
        params=FamilyParams(1, 1, 1), w=(1, 1, 1)
    )
    assert den1.eval({}) == 0 and den2.eval({}) == 0


# -- the full derivation -------------------------------------------------------------------

def test_verify_derivation_all_pass():
    report = verify_derivation()
    assert report.all_passed
    names = [c.name for c in report]
    for needed in [
        "elimination_ab", "elimination_ac", "cube_condition", "scale_resolution",
        "p1_curve_identity", "p2_curve_identity", "p3_curve_identity",
        "cubic_base_point", "cubic_tangent_point", "chord_parameter_match",
    ]:
        assert needed in names
    for check in report:
        assert check.residual_terms == 0
        assert check.residual.is_zero()


def test_verify_derivation_perturbation_fails():
    report = verify_derivation({"p1_curve_identity": parse_poly("a")})
    by_name = {c.name: c for c in report}
    assert not by_name["p1_curve_identity"].passed
    assert by_name["p2_curve_identity"].passed
    assert not report.all_passed
