"""Constructors for the constant-curvature factor families."""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentz2d.charts import Rectangle, diamond, full_plane
from lorentz2d.curvature import fd_ricci_oracle, ricci_from_omega
from lorentz2d.errors import (
    BranchYieldsNonPositive,
    MixedChartVariables,
    NonPositiveFactor,
    QuadratureNonConvergence,
    SingularDenominator,
)
from lorentz2d.expressions import Constant, evaluate, parse, unparse
from lorentz2d.families import (
    Antiderivative,
    ConformalFactor,
    factor_from_expression,
    flat_factor,
    liouville_factor,
    make_antiderivative,
    spacelike_factor,
    timelike_factor,
)
from lorentz2d.jets import Jet2, seed

OMEGA1_SOURCE = "exp(2*x) * (exp(x+t) - (1/4)*exp(x-t))^(-2)"
OMEGA1_NULL_PRINTED = "exp(x + t)*exp(x - t)*(exp(x + t) - 0.25*exp(x - t))^(-2)"


# ---------------------------------------------------------------------------
# Flat family

def test_flat_unit_factor():
    f = flat_factor("1", "1")
    assert f.expression == Constant(1.0)
    assert f.target_curvature == 0.0
    assert f.chart == "tx"
    assert f.value(0.3, -0.7) == 1.0
    assert ricci_from_omega(f, (0.3, -0.7)) == 0.0


def test_flat_constant_product():
    f = flat_factor("2", "3")
    assert f.value(1.0, 1.0) == 6.0
    assert ricci_from_omega(f, (1.0, 1.0)) == 0.0


def test_flat_substitutes_null_arguments():
    f = flat_factor("exp(l)", "exp(-l)")
    rng = np.random.default_rng(7)
    for t, x in rng.uniform(-1.0, 1.0, size=(100, 2)):
        assert math.isclose(f.value(t, x), math.exp(2.0 * t), rel_tol=1e-12)
        assert abs(fd_ricci_oracle(f, (t, x), h=1e-3)) < 1e-6


def test_flat_factor_curvature_exact_at_jet_level():
    f = flat_factor("exp(l)", "exp(-l)")
    for t, x in [(0.0, 0.0), (0.4, -0.9), (-1.2, 0.3)]:
        assert abs(ricci_from_omega(f, (t, x))) < 1e-12


def test_flat_halfangle_compact_form():
    # phi(s) = psi(s) = sec(s/2)^2 / 2 gives the compactified-flat factor;
    # on the t = 0 axis it reduces to (1 + cos x)^(-2).
    f = flat_factor("0.5*sec(l/2)^2", "0.5*sec(l/2)^2", domain=diamond())
    for x in (0.0, 0.8, -1.9, 2.6):
        assert math.isclose(f.value(0.0, x), (1.0 + math.cos(x)) ** -2,
                            rel_tol=1e-12)
    assert abs(ricci_from_omega(f, (0.3, -0.5))) < 1e-12


def test_flat_rejects_multivariable_argument():
    with pytest.raises(ValueError):
        flat_factor("t + x", "1")


def test_flat_nonpositive_value_raises():
    f = flat_factor("l", "l")  # (x+t)(x-t), negative inside the light cone
    assert f.value(0.25, 0.75) > 0
    with pytest.raises(NonPositiveFactor):
        f.value(0.75, 0.25)
    with pytest.raises(NonPositiveFactor):
        f.jet(0.75, 0.25)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=-0.5, max_value=0.5, allow_nan=False),
       st.floats(min_value=-0.5, max_value=0.5, allow_nan=False),
       st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
       st.floats(min_value=-1.0, max_value=1.0, allow_nan=False))
def test_flat_family_is_flat(a, b, t, x):
    f = flat_factor(f"exp({a!r}*l)", f"exp({b!r}*l)")
    assert abs(ricci_from_omega(f, (t, x))) < 1e-10


# ---------------------------------------------------------------------------
# One-variable families

def test_timelike_positive_curvature_branch():
    f = timelike_factor(-4.0, 0.0, 2.0)
    assert f.expression == parse("sec(t)^2")
    assert f.target_curvature == 2.0
    assert f.domain == Rectangle(-math.pi / 2, math.pi / 2, -math.inf, math.inf)
    assert math.isclose(ricci_from_omega(f, (0.4, 3.0)), 2.0, rel_tol=1e-12)


def test_timelike_negative_curvature_branch():
    f = timelike_factor(4.0, 0.0, -2.0)
    assert f.expression == parse("sech(t)^2")
    assert f.domain == full_plane()
    assert math.isclose(ricci_from_omega(f, (0.5, 0.0)), -2.0, rel_tol=1e-12)


def test_timelike_shift_moves_strip():
    f = timelike_factor(-4.0, 1.5, 2.0)
    assert f.domain == Rectangle(-1.5 - math.pi / 2, -1.5 + math.pi / 2,
                                 -math.inf, math.inf)
    assert math.isclose(f.value(-1.5, 0.0), 1.0, rel_tol=1e-15)


@pytest.mark.parametrize("c1,target", [(4.0, 2.0), (-4.0, -2.0)])
def test_timelike_wrong_sign_branch_rejected(c1, target):
    with pytest.raises(BranchYieldsNonPositive):
        timelike_factor(c1, 0.0, target)


def test_timelike_degenerate_parameters():
    with pytest.raises(BranchYieldsNonPositive):
        timelike_factor(0.0, 0.0, 2.0)
    with pytest.raises(ValueError):
        timelike_factor(4.0, 0.0, 0.0)


def test_spacelike_mirrors_timelike():
    sech_branch = spacelike_factor(4.0, 0.0, 2.0)
    assert sech_branch.expression == parse("sech(x)^2")
    assert math.isclose(ricci_from_omega(sech_branch, (1.0, 0.5)),
                        2.0, rel_tol=1e-12)

    sec_branch = spacelike_factor(-4.0, 0.0, -2.0)
    assert sec_branch.expression == parse("sec(x)^2")
    assert sec_branch.domain == Rectangle(-math.inf, math.inf,
                                          -math.pi / 2, math.pi / 2)
    assert math.isclose(ricci_from_omega(sec_branch, (5.0, 0.3)),
                        -2.0, rel_tol=1e-12)

    with pytest.raises(BranchYieldsNonPositive):
        spacelike_factor(4.0, 0.0, -2.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.5, max_value=8.0, allow_nan=False),
       st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
       st.floats(min_value=-4.0, max_value=-0.25, allow_nan=False),
       st.floats(min_value=-1.5, max_value=1.5, allow_nan=False),
       st.floats(min_value=-3.0, max_value=3.0, allow_nan=False))
def test_timelike_sech_branch_constant_curvature(c1, c2, target, t, x):
    f = timelike_factor(c1, c2, target)
    r = ricci_from_omega(f, (t, x))
    assert abs(r - target) < 1e-9 * max(1.0, abs(target))


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.5, max_value=8.0, allow_nan=False),
       st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
       st.floats(min_value=0.25, max_value=4.0, allow_nan=False),
       st.floats(min_value=-0.95, max_value=0.95, allow_nan=False))
def test_timelike_sec_branch_constant_curvature(c1_mag, c2, target, s):
    f = timelike_factor(-c1_mag, c2, target)
    rate = 0.5 * math.sqrt(c1_mag)
    t = -c2 + s * (math.pi / (2.0 * rate))
    r = ricci_from_omega(f, (t, 0.0))
    assert abs(r - target) < 1e-9 * max(1.0, abs(target))


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.5, max_value=6.0, allow_nan=False),
       st.floats(min_value=-1.5, max_value=1.5, allow_nan=False),
       st.floats(min_value=0.01, max_value=1.2, allow_nan=False))
def test_timelike_factor_symmetric_about_shift(c1, c2, delta):
    f = timelike_factor(c1, c2, -1.0)
    assert math.isclose(f.value(-c2 + delta, 0.0), f.value(-c2 - delta, 0.0),
                        rel_tol=1e-12)


# ---------------------------------------------------------------------------
# Antiderivatives

def test_antiderivative_vanishes_at_reference():
    F = make_antiderivative("exp(l)")
    assert F.value(0.0) == 0.0
    G = make_antiderivative("exp(l)", reference=1.0)
    assert G.value(1.0) == 0.0


def test_antiderivative_of_exponential():
    F = make_antiderivative("exp(l)")
    assert math.isclose(F.value(1.0), math.e - 1.0, rel_tol=0, abs_tol=1e-10)
    assert math.isclose(F.value(-1.0), math.exp(-1.0) - 1.0, abs_tol=1e-10)


def test_antiderivative_of_constant_is_identity():
    F = make_antiderivative("1")
    assert F.integrand_at(3.7) == 1.0
    assert math.isclose(F.value(2.5), 2.5, rel_tol=1e-13)
    assert math.isclose(F.value(-1.25), -1.25, rel_tol=1e-13)


def test_antiderivative_against_composite_simpson():
    F = make_antiderivative("exp(sin(l))")
    xs = np.linspace(0.0, 2.0, 2_000_001)
    ys = np.exp(np.sin(xs))
    h = xs[1] - xs[0]
    weights = np.ones_like(ys)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    oracle = float(h / 3.0 * np.dot(weights, ys))
    assert math.isclose(F.value(2.0), oracle, rel_tol=0, abs_tol=1e-9)


def test_antiderivative_fundamental_theorem():
    F = make_antiderivative("exp(sin(l))")
    h = 1e-3
    for s in (-0.8, 0.0, 0.7, 1.9):
        slope = (F.value(s + h) - F.value(s - h)) / (2.0 * h)
        assert abs(slope - F.integrand_at(s)) < 1e-6


def test_antiderivative_additivity():
    F = make_antiderivative("exp(sin(l))")
    G = make_antiderivative("exp(sin(l))", reference=1.0)
    assert abs((F.value(2.0) - F.value(1.0)) - G.value(2.0)) < 2e-10


def test_antiderivative_integrand_jet():
    F = make_antiderivative("l^2")
    v, d1, d2 = F.integrand_jet(1.5)
    assert v == 2.25
    assert d1 == 3.0
    assert d2 == 2.0


def test_antiderivative_jet_composition():
    F = make_antiderivative("exp(l)")
    inner = seed("t", (0.4, 0.0)) + 2.0 * seed("x", (0.4, -0.1))
    j = F.jet(inner)
    e = math.exp(inner.value)
    assert j.value == F.value(inner.value)
    assert math.isclose(j.dt, e * inner.dt, rel_tol=1e-14)
    assert math.isclose(j.dx, e * inner.dx, rel_tol=1e-14)
    assert math.isclose(j.dxx, e * inner.dx * inner.dx, rel_tol=1e-14)


def test_antiderivative_rejects_multivariable_integrand():
    with pytest.raises(ValueError):
        make_antiderivative("t*x")


def test_antiderivative_nonconvergence():
    F = make_antiderivative("exp(-400*l^2)", tol=1e-13, max_depth=2)
    with pytest.raises(QuadratureNonConvergence) as info:
        F.value(1.0)
    assert info.value.achieved_error > 0.0


def test_antiderivative_threaded_queries_match_sequential():
    points = [round(-1.1 + 0.037 * i, 6) for i in range(61)]
    threaded = make_antiderivative("exp(sin(l))")
    with ThreadPoolExecutor(max_workers=4) as pool:
        got = list(pool.map(threaded.value, points))
    sequential = make_antiderivative("exp(sin(l))")
    want = [sequential.value(p) for p in points]
    assert all(abs(g - w) < 2e-9 for g, w in zip(got, want))


# ---------------------------------------------------------------------------
# General (two-variable) family

def test_liouville_trivial_exponents_match_closed_form():
    f = liouville_factor("0", "0", k=1.0, C=1.0, target=2.0)
    closed = parse("(u - 0.25*v + 1)^(-2)")
    rng = np.random.default_rng(11)
    for t, x in rng.uniform(-0.8, 0.8, size=(25, 2)):
        u, v = x + t, x - t
        want = evaluate(closed, {"u": u, "v": v})
        assert math.isclose(f.value(t, x), want, rel_tol=1e-12)
        assert abs(ricci_from_omega(f, (t, x)) - 2.0) < 1e-9


def test_liouville_value_and_jet_value_agree_bitwise():
    f = liouville_factor("sin(l)", "0.5*l", k=1.2, C=2.0, target=-2.0)
    for t, x in [(0.1, -0.3), (-0.4, 0.2), (0.45, 0.45)]:
        assert f.jet(t, x).value == f.value(t, x)


def test_liouville_nontrivial_exponents_curvature():
    f = liouville_factor("sin(l)", "0.5*l", k=1.2, C=2.0, target=-2.0)
    rng = np.random.default_rng(5)
    for t, x in rng.uniform(-0.5, 0.5, size=(20, 2)):
        assert abs(ricci_from_omega(f, (t, x)) + 2.0) < 1e-9


def test_liouville_fd_oracle_cross_check():
    f = liouville_factor("sin(l)", "0.5*l", k=1.2, C=2.0, target=-2.0,
                         quadrature_tol=1e-12)
    assert abs(fd_ricci_oracle(f, (0.2, -0.1), h=1e-3) + 2.0) < 1e-4


def test_liouville_raw_form_prints_closed_expression():
    f = liouville_factor("l", "l", k=1.0, C=0.0, target=2.0,
                         raw_antiderivative=True)
    assert unparse(f.expression) == OMEGA1_NULL_PRINTED
    assert f.provenance.parameters["antiderivative"] == "raw"
    assert f.provenance.parameters["reference"] is None


def test_liouville_raw_form_matches_standard_chart_printing():
    f = liouville_factor("l", "l", k=1.0, C=0.0, target=2.0,
                         raw_antiderivative=True)
    reference = parse(OMEGA1_SOURCE)
    rng = np.random.default_rng(3)
    for t, x in rng.uniform(-1.0, 1.0, size=(50, 2)):
        want = evaluate(reference, {"t": t, "x": x})
        assert math.isclose(f.value(t, x), want, rel_tol=1e-12)
        assert abs(ricci_from_omega(f, (t, x)) - 2.0) < 1e-9


def test_liouville_raw_equals_shifted_with_folded_constant():
    # Shifted antiderivatives replace F(s) = e^s by e^s - 1; with
    # k = 1, R = 2 the difference is the constant 1 - 0.25 = 0.75,
    # which folds into C.
    raw = liouville_factor("l", "l", k=1.0, C=0.0, target=2.0,
                           raw_antiderivative=True)
    shifted = liouville_factor("l", "l", k=1.0, C=0.75, target=2.0)
    rng = np.random.default_rng(17)
    for t, x in rng.uniform(-1.0, 1.0, size=(30, 2)):
        assert math.isclose(raw.value(t, x), shifted.value(t, x), rel_tol=1e-9)
    assert abs(ricci_from_omega(shifted, (0.2, 0.3)) - 2.0) < 1e-9


def test_liouville_zero_curvature_drops_second_antiderivative():
    f = liouville_factor("0", "0", k=1.0, C=0.0, target=0.0)
    # D reduces to F(u) = u, so the factor is (x+t)^(-2)
    assert math.isclose(f.value(0.5, 0.5), 1.0, rel_tol=1e-12)
    assert math.isclose(f.value(0.0, 2.0), 0.25, rel_tol=1e-12)
    assert abs(ricci_from_omega(f, (0.3, 0.4))) < 1e-9
    with pytest.raises(SingularDenominator):
        f.value(-0.5, 0.5)


def test_liouville_singular_band():
    f = liouville_factor("0", "0", k=1.0, C=1.0, target=2.0)
    # D = (x+t) - 0.25 (x-t) + 1 vanishes at t = x = -2/3... pick the
    # exact zero u = -1, v = 0 instead: t = -0.5, x = -0.5.
    with pytest.raises(SingularDenominator):
        f.value(-0.5, -0.5)
    with pytest.raises(SingularDenominator):
        f.jet(-0.5, -0.5)


def test_liouville_singular_eps_is_respected():
    f = liouville_factor("0", "0", k=1.0, C=1.0, target=2.0, singular_eps=0.5)
    # here D(0,0) = 1 > eps but D = 0.3 at u = -0.7, v = 0
    with pytest.raises(SingularDenominator):
        f.value(-0.35, -0.35)


def test_liouville_parameter_validation():
    with pytest.raises(ValueError):
        liouville_factor("0", "0", k=0.0, C=1.0, target=2.0)
    with pytest.raises(ValueError):
        liouville_factor("2*l", "l", k=1.0, C=0.0, target=2.0,
                         raw_antiderivative=True)
    with pytest.raises(ValueError):
        liouville_factor("t + x", "0", k=1.0, C=0.0, target=2.0)


def test_liouville_provenance_records_parameters():
    f = liouville_factor("sin(l)", "0", k=1.5, C=0.25, target=-1.0)
    p = f.provenance
    assert p.family == "liouville"
    assert p.parameters["phi"] == "sin(l)"
    assert p.parameters["k"] == 1.5
    assert p.parameters["antiderivative"] == "shifted"
    assert p.parameters["reference"] == 0.0


# ---------------------------------------------------------------------------
# Ad-hoc expression factors

def test_expression_factor_standard_chart():
    f = factor_from_expression("exp(t)", claimed_curvature=0.0)
    assert f.chart == "tx"
    assert f.target_curvature == 0.0
    assert f.value(0.5, 9.0) == math.exp(0.5)


def test_expression_factor_null_chart():
    f = factor_from_expression("(u - 0.25*v + 1)^(-2)")
    assert f.chart == "uv"
    assert f.target_curvature is None
    assert math.isclose(f.value(0.3, -0.1), (0.3 + 0.025 + 1.0) ** -2,
                        rel_tol=1e-14)


def test_expression_factor_rejects_mixed_charts():
    with pytest.raises(MixedChartVariables):
        factor_from_expression("t + u")


def test_expression_factor_reserves_integration_variable():
    with pytest.raises(ValueError):
        factor_from_expression("l + 1")


def test_expression_factor_records_claim():
    f = factor_from_expression("sec(t)^2", claimed_curvature=2.0)
    assert f.provenance.parameters["claimed_R"] == 2.0
    assert f.provenance.parameters["source"] == "sec(t)^2"
