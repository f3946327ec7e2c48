"""Certificate layer tests: norm identity, exact vs grouped sums,
system windows, and the final three-valued comparison."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv

from lacuna import certificate as ct
from lacuna import integrals as ig
from lacuna.errors import CertificateError, RangeError, StructureViolation
from lacuna.spectrum import PointKind, TripleRep, classify_brute_force, make_spectrum

A5 = make_spectrum(base=5, depth=4)      # {0, +-1, +-5, +-25, +-125}
A4 = make_spectrum(base=4, depth=5)      # {0, +-1, +-4, ..., +-256}
NO_EXC = make_spectrum(lambdas=[0, 1, 10, 100])

# frozen regression anchors (defaults r_max=4000, tol=1e-6)
S_PAIR_ONES = 2.096621516760595          # S for f(1) = f(-1) = 1 on A5
MARGIN_PAIR_ONES = 0.5978409167803687


# ---------------------------------------------------------------------------
# coefficient vectors


def test_vector_validation():
    with pytest.raises(RangeError, match="not a spectrum element"):
        ct.CoefficientVector.from_dict(A5, {2: 1.0})
    with pytest.raises(RangeError, match="not finite"):
        ct.CoefficientVector(A5, ((1, complex(math.nan, 0)),))
    f = ct.CoefficientVector.from_dict(A5, {5: 0.0, 1: 2.0, -1: 1.0j})
    assert f.support == (-1, 1)          # zero amplitudes dropped, sorted
    assert f.amp(5) == 0 and f.amp(1) == 2.0
    assert f.mass() == pytest.approx(5.0, rel=1e-15)


def test_constant_vector():
    f = ct.CoefficientVector.constant(make_spectrum(lambdas=[0]), 2.0)
    assert f.support == (0,) and f.amp(0) == 2.0


# ---------------------------------------------------------------------------
# norm expansion


def test_norm6_examples():
    one = ct.CoefficientVector.from_dict(A5, {0: 1.0})
    r = ct.compute_norm6(one)
    assert r.value == 1.0 and r.grouped == 1.0
    pair = ct.CoefficientVector.from_dict(A5, {1: 1.0, -1: 1.0})
    assert ct.compute_norm6(pair).value == pytest.approx(8.0, rel=1e-15)


def test_norm6_identity_random():
    rng = random.Random(20260819)
    for _ in range(1000):
        size = rng.randint(1, 9)
        f = ct.random_vector(A5 if rng.random() < 0.5 else A4, rng, size=size)
        r = ct.compute_norm6(f)
        assert abs(r.grouped - r.mass_cubed) <= 1e-12 * max(r.mass_cubed, 1.0)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False),
        min_size=1,
        max_size=9,
    )
)
def test_norm6_identity_property(amps):
    elements = sorted(A5.elements)[: len(amps)]
    f = ct.CoefficientVector.from_dict(A5, dict(zip(elements, amps)))
    r = ct.compute_norm6(f)
    assert abs(r.grouped - r.mass_cubed) <= 1e-11 * max(r.mass_cubed, 1.0)


# ---------------------------------------------------------------------------
# basic inequality


def test_basic_inequality_equality_cases():
    assert ct.check_basic_inequality(1.0, 1.0, 5.0)
    # the b = 5 coefficients are dyadic, so equality at r = s = 1 is exact
    assert abs((5 / 8 + 1 / 8 + 1 / 4) - 1.0) <= 1e-15
    assert ct.check_basic_inequality(3.7, 0.0, 2.0)
    assert ct.check_basic_inequality(0.0, 2.5, 1.001)


def test_basic_inequality_random_sweep():
    rng = random.Random(7)
    for b in (1.5, 4.2, 5.0, 6.66, 50.0):
        for _ in range(2000):
            r, s = rng.uniform(0, 10), rng.uniform(0, 10)
            assert ct.check_basic_inequality(r, s, b)
    # exact rational evaluation keeps the r = s diagonal stable
    for b in (1.5, 4.2, 6.66, 50.0):
        for r in (1e-8, 0.3, 1.0, 9.999999999):
            assert ct.check_basic_inequality(r, r, b)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=0, max_value=1e3, allow_nan=False),
    st.floats(min_value=0, max_value=1e3, allow_nan=False),
    st.floats(min_value=1.0000001, max_value=1e6, allow_nan=False),
)
def test_basic_inequality_property(r, s, b):
    assert ct.check_basic_inequality(r, s, b)


def test_basic_inequality_validation():
    with pytest.raises(RangeError, match="must exceed 1"):
        ct.check_basic_inequality(1.0, 1.0, 1.0)
    with pytest.raises(RangeError, match="non-negative"):
        ct.check_basic_inequality(-1.0, 1.0, 2.0)


# ---------------------------------------------------------------------------
# b window


def test_b_window_endpoints_exact():
    w = ct.feasible_b_interval(7.94)
    assert w.feasible
    assert w.lo_exact == Fraction(397, 97)
    assert w.hi_exact == Fraction(353, 53)
    assert w.lo == pytest.approx(4.0928, abs=5e-5)
    assert w.hi == pytest.approx(6.6604, abs=5e-5)
    assert w.lo < 5.0 < w.hi and w.lo < 6.66 < w.hi


def test_b_window_infeasible():
    w = ct.feasible_b_interval(6.0)          # 3F = 18 kills the quartic row
    assert not w.feasible
    assert "9(b+1)/(b-1)" in w.binding_lower
    w2 = ct.feasible_b_interval(6.5)         # lo = 19.5/1.5 = 13 > hi
    assert not w2.feasible and w2.lo_exact == Fraction(13)


# ---------------------------------------------------------------------------
# exact sextic sum


def test_s_exact_zero_support_chain():
    f0 = ct.CoefficientVector.from_dict(A5, {0: 1.0})
    s0 = ct.compute_S_exact(f0)
    direct = ig.i_direct((0,) * 6)
    assert s0.value == pytest.approx(direct.value, rel=1e-15)
    assert s0.exceptional_part == 0.0
    # (2pi)^7 S / ((2pi)^3 norm6) equals the conjectured constant
    chain = (2 * math.pi) ** 7 * s0.value / ((2 * math.pi) ** 3 * ct.compute_norm6(f0).value)
    assert chain == pytest.approx(ig.c_opt().value, rel=1e-12)


def test_s_exact_split_consistency():
    rng = random.Random(11)
    for _ in range(10):
        f = ct.random_vector(A5, rng, size=7)
        s = ct.compute_S_exact(f)
        assert abs(s.value - (s.p3_part + s.exceptional_part)) <= 1e-12 * abs(s.value)
        assert s.error_bound > 0


def test_s_exact_support_cap():
    big = make_spectrum(base=4, depth=6)
    f = ct.CoefficientVector.constant(big)   # 13 entries
    with pytest.raises(RangeError, match="support size"):
        ct.compute_S_exact(f)


def test_s_exact_regression_pair_ones():
    f = ct.CoefficientVector.from_dict(A5, {1: 1.0, -1: 1.0})
    s = ct.compute_S_exact(f)
    assert s.value == pytest.approx(S_PAIR_ONES, rel=1e-12)


def _s_oracle(f, r_max=4000.0, dr=0.02):
    """Independent route: angular average of |sum fhat(n) J_n e^{in phi}|^6.

    The phi mean is exact for enough equispaced samples (trig polynomial),
    the radial integral is a dense trapezoid on the same truncation.
    """
    supp = f.support
    maxn = max((abs(n) for n in supp), default=0)
    m_angles = max(8, 2 * (6 * maxn + 2))
    r = np.arange(0.0, r_max + dr, dr)
    jn = {n: jv(abs(n), r) * ((-1.0) ** abs(n) if n < 0 else 1.0) for n in supp}
    acc = np.zeros_like(r)
    for k in range(m_angles):
        phi = 2 * math.pi * k / m_angles
        h = np.zeros_like(r, dtype=complex)
        for n in supp:
            h += f.amp(n) * jn[n] * np.exp(1j * n * phi)
        acc += np.abs(h) ** 6
    return float(np.trapezoid(acc / m_angles * r, r))


def test_s_exact_against_angular_oracle():
    rng = random.Random(42)
    for _ in range(2):
        raw = ct.random_vector(A5, rng, size=5)
        f = ct.CoefficientVector.from_dict(
            A5, {n: raw.amp(n) for n in raw.support if abs(n) <= 25}
        )
        if not f.support:
            continue
        s = ct.compute_S_exact(f)
        oracle = _s_oracle(f)
        assert abs(oracle - s.value) <= max(1e-4 * abs(s.value), s.error_bound)
    pair = ct.CoefficientVector.from_dict(A5, {1: 1.0, -1: 1.0})
    assert _s_oracle(pair) == pytest.approx(S_PAIR_ONES, rel=1e-10)


# ---------------------------------------------------------------------------
# grouped upper bound


def test_upper_bound_constant_mode_equality():
    f0 = ct.CoefficientVector.from_dict(A5, {0: 2.0})
    ub = ct.compute_S_upper_bound(f0, ct.CertificateParams())
    s0 = ct.compute_S_exact(f0)
    assert ub.value == pytest.approx(s0.value, rel=1e-15)


def test_upper_bound_requires_eps_for_fired_exception():
    # mass on {1, 5} makes D = 11 = 1+5+5 = ... fire one-distinct terms
    f = ct.CoefficientVector.from_dict(A5, {1: 1.0, 5: 1.0, -1: 1.0})
    with pytest.raises(CertificateError, match="no eps assigned"):
        ct.compute_S_upper_bound(f, ct.CertificateParams())


def test_upper_bound_no_exception_spectrum():
    # structural regression: no exception rows fire, eps map stays empty
    assert all(
        c.kind is not PointKind.EXCEPTION for c in classify_brute_force(NO_EXC)
    )
    params, reports = ct.derive_params(NO_EXC)
    assert params.eps == ()
    assert all(r.passed for r in reports)
    rng = random.Random(3)
    for _ in range(5):
        f = ct.random_vector(NO_EXC, rng, size=5)
        s = ct.compute_S_exact(f)
        ub = ct.compute_S_upper_bound(f, params)
        assert s.value <= ub.value + ub.error_bound + s.error_bound


def test_chain_random_vectors():
    for A in (A5, A4):
        params, _ = ct.derive_params(A)
        rng = random.Random(20260819)
        for t in range(30):
            f = ct.random_vector(A, rng, size=8, adversarial=(t % 3 == 0))
            s = ct.compute_S_exact(f)
            ub = ct.compute_S_upper_bound(f, params)
            assert s.value <= ub.value + ub.error_bound + s.error_bound, (
                A.lambdas,
                t,
            )


def test_b5_coefficient_reduction():
    # at b = 5 the two b rows reduce to the dyadic basic-inequality weights
    b = 5.0
    assert 9 * (b + 1) / (b - 1) == pytest.approx(13.5, abs=0)
    assert 9 * (b - 3) / (b - 1) == pytest.approx(4.5, abs=0)
    assert 5 / (2 * b - 2) == 5 / 8 and 1 / (2 * b - 2) == 1 / 8


def test_a_exponent_rule():
    assert ct.default_a_exponent(A5, 1, 5) == 0          # 7 not twice an element
    assert ct.default_a_exponent(A5, 5, 0) == 1          # 10 = 2*5, zero partner
    assert ct.default_a_exponent(A4, -1, 4) == -1        # 2 = 2*1, nonzero partner
    assert ct.default_a_exponent(A4, 1, 4) == 0          # 6 not twice an element


# ---------------------------------------------------------------------------
# F lower bounds


def test_f_lower_bounds_merge():
    flb = ct.FLowerBounds(A5)
    # at default precision the interval endpoint sits under the floor
    assert flb.lower(1, 1, 0) == 7.94
    assert flb.lower(5, 5, 0) > 10.8                     # quadrature beats floor
    assert flb.lower(1, 0, 0) == 5.0
    assert flb.lower(5, 1, 1) >= 13.2
    floors_only = ct.FLowerBounds(A5, numeric=None)
    assert floors_only.lower(1, 1, 0) == 7.94
    assert floors_only.lower(125, 5, 1) == 21.0          # member distinct row
    assert floors_only.lower(3, 1, 1) == 10.0            # 3 not an element here
    with pytest.raises(CertificateError, match="no lower bound"):
        floors_only.lower(2, 1, 1)                       # excluded pair pattern


def test_f_lower_bounds_excluded_distinct():
    floors_only = ct.FLowerBounds(A5, numeric=None)
    with pytest.raises(CertificateError):
        floors_only.lower(3, 2, 0)
    flb = ct.FLowerBounds(A5)                            # quadrature rescues it
    assert 13.0 < flb.lower(3, 2, 0) < 14.0


# ---------------------------------------------------------------------------
# systems


def test_systems_a4_shapes_and_windows():
    reports = {r.system_id: r for r in ct.check_systems(make_spectrum(base=4, depth=4))}
    assert all(r.passed for r in reports.values())
    s4 = {i.point: i for i in reports["S4"].instances}
    assert set(s4) == {2, -2, 8, -8, 32, -32}
    s3 = {i.point: i for i in reports["S3"].instances}
    assert set(s3) == {3, -3, 12, -12, 48, -48}
    assert not reports["S2"].instances and not reports["S5"].instances
    # quoted window for the smallest doubled point
    assert s4[2].eps_lo < 0.270 and s4[2].eps_hi > 0.289
    # the recorded defaults are inside every matching window
    for inst in s3.values():
        assert inst.eps_lo <= 2.0 <= inst.eps_hi


def test_systems_a5_defaults():
    reports = {r.system_id: r for r in ct.check_systems(A5)}
    s5 = {i.point: i for i in reports["S5"].instances}
    assert set(s5) == {3, -3, 15, -15, 75, -75}
    for inst in s5.values():
        assert inst.eps_lo <= 1.0 <= inst.eps_hi
    assert all(r.passed for r in reports.values())


def test_systems_scaled_s4_window():
    # elements {0,+-2,+-8,+-32}: doubled point 4 pairs moduli {2, 8}
    scaled = make_spectrum(base=4, depth=3, scale=2)
    reports = {r.system_id: r for r in ct.check_systems(scaled)}
    inst = {i.point: i for i in reports["S4"].instances}[4]
    assert inst.eps_lo < 0.110 and inst.eps_hi > 0.490


def test_systems_s2_both_variants():
    # [0,1,5,17]: 11 = 17-5-1 = 5+5+1 gives the nonzero-partner variant
    reports = {r.system_id: r for r in ct.check_systems(make_spectrum(lambdas=[0, 1, 5, 17]))}
    s2 = {i.point: i for i in reports["S2"].instances}
    assert set(s2) == {11, -11}
    assert s2[11].feasible and s2[11].eps_lo <= 2.0 <= s2[11].eps_hi
    # [0,1,5,16]: 10 = 16-5-1 = 5+5+0 gives the zero-partner variant
    reports = {r.system_id: r for r in ct.check_systems(make_spectrum(lambdas=[0, 1, 5, 16]))}
    s2 = {i.point: i for i in reports["S2"].instances}
    assert {10, -10} <= set(s2)
    assert s2[10].feasible and s2[10].eps_lo <= 1.0 <= s2[10].eps_hi
    assert "3F(5,5,0)" in s2[10].description


def test_systems_eps_free_pair_pair():
    # [0,1,5,17]: 7 = 17-5-5 = 5+1+1 needs no eps, lands in the flat rows
    reports = {r.system_id: r for r in ct.check_systems(make_spectrum(lambdas=[0, 1, 5, 17]))}
    flat = [i for i in reports["trivial"].instances if i.point in (7, -7)]
    assert len(flat) == 4 and all(i.feasible for i in flat)


def test_systems_global_row_equality_case():
    # the (1,0,0) row sits exactly on its floor, slack 0 is still a pass
    reports = ct.check_systems(A5)
    trivial = [r for r in reports if r.system_id == "trivial"][0]
    eq_rows = [i for i in trivial.instances if i.description == "15 <= 3F(1,0,0)"]
    assert len(eq_rows) == 1 and eq_rows[0].feasible and eq_rows[0].margin == 0.0


def test_dispatch_rejects_unknown_shape():
    from lacuna.spectrum import ClassifiedPoint, ExceptionKind

    flb = ct.FLowerBounds(A5, numeric=None)
    bogus = ClassifiedPoint(
        point=9,
        reps=(TripleRep((1, 3, 5)), TripleRep((0, 4, 5))),
        kind=PointKind.EXCEPTION,
        subtype=ExceptionKind.ONE_DISTINCT,
        family_tags=frozenset(),
        boundary_safe=True,
    )
    with pytest.raises(StructureViolation, match="match no known system"):
        ct._dispatch_exception(bogus, A5, 6.66, flb)


def test_derive_params_midpoints():
    params, reports = ct.derive_params(A5)
    eps = dict(params.eps)
    assert set(eps) == {3, -3, 15, -15, 75, -75}
    windows = {
        i.point: i for r in reports for i in r.instances if i.point in eps
    }
    for d, e in eps.items():
        inst = windows[d]
        assert inst.eps_lo < e < inst.eps_hi
        assert e == pytest.approx(0.5 * (inst.eps_lo + inst.eps_hi), rel=1e-15)


def test_params_validation():
    with pytest.raises(RangeError, match="must exceed 1"):
        ct.CertificateParams(b=1.0)
    with pytest.raises(RangeError, match="eps"):
        ct.CertificateParams.from_mapping(6.66, {3: 0.0})


# ---------------------------------------------------------------------------
# final comparison


def test_verify_theorem_equality_case():
    f0 = ct.CoefficientVector.from_dict(A5, {0: 1.0 + 0.5j})
    v = ct.verify_theorem(f0)
    assert v.verdict == "indeterminate" and v.equality_case
    assert abs(v.margin) <= v.error_budget


def test_verify_theorem_regression_margin():
    f = ct.CoefficientVector.from_dict(A5, {1: 1.0, -1: 1.0})
    v = ct.verify_theorem(f)
    assert v.verdict == "holds" and not v.equality_case
    assert v.margin == pytest.approx(MARGIN_PAIR_ONES, rel=1e-9)
    assert v.margin > v.error_budget


def test_verify_theorem_random_nonconstant():
    rng = random.Random(5)
    for A in (A5, A4):
        for _ in range(15):
            f = ct.random_vector(A, rng, size=rng.randint(2, 8))
            v = ct.verify_theorem(f)
            assert v.verdict == "holds" and v.margin > v.error_budget
            assert not v.equality_case


def test_random_vector_adversarial_targets_exceptions():
    rng = random.Random(9)
    f = ct.random_vector(A5, rng, size=4, adversarial=True)
    hot = set(ct.exception_frequencies(A5))
    assert set(f.support) <= hot
