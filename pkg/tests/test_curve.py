import random

import pytest

from cabjac.errors import IntegrityError, ResourceError, UsageError, ValidationError
from cabjac.fields import FiniteField, extension_by_degree
from cabjac.curve import (
    Divisor,
    Place,
    build_factor_base,
    class_number_bounds,
    count_points,
    counts_from_zeta,
    hasse_weil_interval,
    validate_curve,
    zeta_from_counts,
)
from cabjac.poly import Poly, irreducibles_up_to, ypoly_derivative_y, ypoly_eval

F5 = FiniteField(5)
F3 = FiniteField(3)


def genus3_curve():
    return validate_curve(F5, 3, 4, [(4, 0, 1), (0, 0, 1)])


def elliptic_curve():
    return validate_curve(F5, 2, 3, [(3, 0, 1), (1, 0, 1), (0, 0, 1)])


# --- validation -----------------------------------------------------------------


def test_validate_accepts_genus3():
    m = genus3_curve()
    assert m.genus == 3
    assert m.n == 3 and m.d == 4


def test_validate_gcd_violation():
    with pytest.raises(ValidationError) as err:
        validate_curve(F5, 2, 2, [(2, 0, 1)])
    assert err.value.reason == "gcd-violation"


def test_validate_singular_cusp():
    with pytest.raises(ValidationError) as err:
        validate_curve(F5, 2, 3, [(3, 0, 1)])
    assert err.value.reason == "singular-curve"


def test_validate_inseparable():
    with pytest.raises(ValidationError) as err:
        validate_curve(F5, 5, 2, [(2, 0, 1)])
    assert err.value.reason == "inseparable"


def test_validate_weight_violation():
    # X^2 Y on a (2,3) model has weight 2*2+3*1 = 7 > 6
    with pytest.raises(ValidationError) as err:
        validate_curve(F5, 2, 3, [(3, 0, 1), (2, 1, 1)])
    assert err.value.reason == "weight-violation"


def test_validate_missing_xd_term():
    with pytest.raises(ValidationError) as err:
        validate_curve(F5, 2, 3, [(1, 0, 1)])
    assert err.value.reason == "shape"


def test_validate_singularity_over_extension_point():
    # y^2 = (x^2+2)^2 (x^3+x+1): the square factor creates singular points
    # whose x-coordinates have degree 2
    f = Poly(F5, (2, 0, 1)) * Poly(F5, (2, 0, 1)) * Poly(F5, (1, 1, 0, 1))
    mono = [(i, 0, c) for i, c in enumerate(f.c) if c]
    with pytest.raises(ValidationError) as err:
        validate_curve(F5, 2, 7, mono)
    assert err.value.reason == "singular-curve"


def test_validate_genus0_line_model():
    m = validate_curve(F5, 2, 1, [(1, 0, 1)])
    assert m.genus == 0


# --- point counting ---------------------------------------------------------------


def test_count_points_genus3_exhaustive_oracle():
    m = genus3_curve()
    scan = sum(1 for x in range(5) for y in range(5) if (y**3 + x**4 + 1) % 5 == 0)
    assert count_points(m, 1) == scan + 1 == 6


def test_count_points_f25_oracle():
    m = genus3_curve()
    K = extension_by_degree(F5, 2)
    scan = 0
    for x in K.elements():
        x4 = K.mul(K.mul(x, x), K.mul(x, x))
        for y in K.elements():
            if K.add(K.add(K.mul(K.mul(y, y), y), x4), 1) == 0:
                scan += 1
    assert count_points(m, 2) == scan + 1


def test_count_points_elliptic_oracle():
    m = elliptic_curve()
    scan = sum(1 for x in range(5) for y in range(5) if (y * y + x**3 + x + 1) % 5 == 0)
    assert count_points(m, 1) == scan + 1


def test_count_points_extension_ground_field():
    # ground field F_4, curve Y^3 + X^4 + X + t where t generates F_4
    # (the X term keeps dC/dX nonzero in characteristic 2)
    F4 = FiniteField(2, 2)
    m = validate_curve(F4, 3, 4, [(4, 0, 1), (1, 0, 1), (0, 0, 2)])
    scan = 0
    for x in F4.elements():
        x4 = F4.mul(F4.mul(x, x), F4.mul(x, x))
        for y in F4.elements():
            val = F4.add(F4.add(F4.mul(F4.mul(y, y), y), x4), F4.add(x, 2))
            if val == 0:
                scan += 1
    assert count_points(m, 1) == scan + 1


def test_count_points_ceiling_guard():
    m = genus3_curve()
    with pytest.raises(ResourceError):
        count_points(m, 9, ceiling=10**6)


# --- zeta -------------------------------------------------------------------------


def test_zeta_elliptic_h_equals_n1():
    m = elliptic_curve()
    n1 = count_points(m, 1)
    z = zeta_from_counts(m, [n1])
    assert z.h == n1


def test_zeta_genus0_trivial():
    m = validate_curve(F5, 2, 1, [(1, 0, 1)])
    z = zeta_from_counts(m, [])
    assert z.h == 1 and z.coeffs == (1,)


def test_zeta_genus3_golden():
    m = genus3_curve()
    counts = [count_points(m, i) for i in (1, 2, 3)]
    assert counts == [6, 20, 126]
    z = zeta_from_counts(m, counts)
    assert z.h == 108
    assert z.coeffs == (1, 0, -3, 0, -15, 0, 125)


def test_zeta_functional_equation():
    m = genus3_curve()
    z = zeta_from_counts(m, [6, 20, 126])
    g, q = m.genus, 5
    for i in range(g + 1):
        assert z.coeffs[2 * g - i] == q ** (g - i) * z.coeffs[i]


def test_zeta_counts_round_trip():
    m = genus3_curve()
    counts = [6, 20, 126]
    z = zeta_from_counts(m, counts)
    assert counts_from_zeta(m, z, 3) == counts
    # further counts are consistent with direct enumeration
    assert counts_from_zeta(m, z, 4)[3] == count_points(m, 4)


def test_zeta_rejects_inconsistent_counts():
    m = genus3_curve()
    with pytest.raises(IntegrityError):
        zeta_from_counts(m, [6, 20, 1260])


def test_zeta_wrong_length_rejected():
    with pytest.raises(UsageError):
        zeta_from_counts(genus3_curve(), [6, 20])


# --- class number bounds -----------------------------------------------------------


def test_bounds_exact_mode_degenerate():
    b = class_number_bounds(genus3_curve())
    assert (b.h_minus, b.h_plus, b.h, b.exact) == (108, 108, 108, True)
    assert b.admits(108) and not b.admits(109)


def test_bounds_truncated_contains_h():
    b = class_number_bounds(genus3_curve(), lam=3)
    assert not b.exact
    assert b.h_minus < 108 < b.h_plus
    assert b.h_plus <= 2 * b.h_minus  # the factor-2 window at full truncation
    assert b.admits(108)


def test_bounds_lam0_hasse_weil():
    m = genus3_curve()
    lo, hi = hasse_weil_interval(5, 3)
    b = class_number_bounds(m, lam=0)
    assert b.h_minus == lo - 1 and b.h_plus == hi + 1
    assert b.admits(108)


def test_hasse_weil_square_order():
    # q = 9 makes sqrt(q) integral: bracket must be exact
    lo, hi = hasse_weil_interval(9, 1)
    assert (lo, hi) == ((3 - 1) ** 2, (3 + 1) ** 2)


# --- factor base ------------------------------------------------------------------


def test_factor_base_genus3_b1_exhaustive():
    m = genus3_curve()
    fb = build_factor_base(m, 1)
    assert fb.t == 5
    # oracle: check all 25 candidate (x0, y0) pairs directly
    expected = set()
    for x0 in range(5):
        for y0 in range(5):
            if (y0**3 + x0**4 + 1) % 5 == 0:
                expected.add(((5 - x0) % 5, y0))
    got = {(p.u.c[0], p.v.c[0] if p.v.c else 0) for p in fb.places}
    assert got == expected


def test_factor_base_bound_guard():
    with pytest.raises(UsageError):
        build_factor_base(genus3_curve(), 0)


def test_factor_base_place_invariants():
    m = genus3_curve()
    fb = build_factor_base(m, 3)
    cy = m.curve_ypoly()
    cyd = ypoly_derivative_y(cy)
    for place in fb.places:
        assert (ypoly_eval(cy, place.v, place.u) % place.u).is_zero()
        assert not (ypoly_eval(cyd, place.v, place.u) % place.u).is_zero()
        assert place.degree == place.u.degree
        assert place.v.degree < place.u.degree


def test_factor_base_ramified_logged():
    m = genus3_curve()
    fb = build_factor_base(m, 2)
    ram = {(u.c, v.c, mult) for u, v, mult in fb.ramified_excluded}
    assert ram == {((2, 0, 1), (), 3), ((3, 0, 1), (), 3)}


def test_factor_base_deterministic_order():
    m = genus3_curve()
    a = build_factor_base(m, 3)
    b = build_factor_base(m, 3)
    assert [p.key() for p in a.places] == [p.key() for p in b.places]
    degs = [p.degree for p in a.places]
    assert degs == sorted(degs)


def test_factor_base_size_tracks_irreducible_count():
    # expectation: about one Y-root per u on average, across random curves
    rng = random.Random(31)
    checked = 0
    for _ in range(12):
        coeffs = [(4, 0, 1), (0, 0, rng.randrange(1, 5)), (1, 0, rng.randrange(5))]
        try:
            m = validate_curve(F5, 3, 4, coeffs)
        except ValidationError:
            continue
        fb = build_factor_base(m, 2)
        irr = sum(1 for _ in irreducibles_up_to(F5, 2))
        assert 0.3 * irr <= fb.t <= 2.5 * irr
        checked += 1
    assert checked >= 5


# --- divisors ----------------------------------------------------------------------


def test_divisor_algebra():
    m = genus3_curve()
    fb = build_factor_base(m, 2)
    p1, p2 = fb.places[0], fb.places[1]
    d = Divisor({p1: 2, p2: -1})
    assert d.degree() == 2 * p1.degree - p2.degree
    assert (d + (-d)).degree() == 0
    assert len(d + (-d)) == 0
    assert not d.is_effective()
    assert d.affine().support == d.support
    inf = Place.infinite()
    d2 = Divisor({p1: 1, inf: -1})
    assert d2.affine().support == {p1: 1}
