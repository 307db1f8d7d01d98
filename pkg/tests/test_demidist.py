import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from demicalc.demidist import (
    ABS,
    EXP_ABS_MINUS_ONE,
    SIN,
    SIN_ABS,
    FunctionalBound,
    NbhdBall,
    Neighborhood,
    SpanElement,
    WHOLE_SPACE,
    abs_regular,
    apply,
    check_demi_linearity,
    compose,
    dirac,
    dirac_derivative,
    exp_abs,
    gamma_composite,
    gamma_custom,
    gamma_identity,
    gamma_linear,
    gamma_sqrt,
    indicator,
    random_scalar,
    random_triple,
    regular,
    sample_w_star_uniformity,
    scalar_map,
    sin_abs,
    zero_functional,
)
from demicalc.testfn import SCHWARTZ, gaussian, make_bump, scale, seminorm, zero

from conftest import EXP_ABS_GAUSS, I0, SIN_ABS_BUMP, draw_schwartz, draw_unit, seeds

XI0 = make_bump(0.0, 1.0)


# -- oracle values ----------------------------------------------------------


def test_abs_regular_is_even():
    f = abs_regular(1)
    assert abs(apply(f, XI0) - I0) < 1e-13
    assert abs(apply(f, scale(-1.0, XI0)) - I0) < 1e-13


def test_sin_abs_on_unit_bump():
    assert abs(apply(sin_abs(), XI0) - SIN_ABS_BUMP) < 1e-12


def test_exp_abs_on_gaussian():
    val = apply(exp_abs(), gaussian(0.0, 1.0))
    assert val.real == 0
    assert abs(val.imag - EXP_ABS_GAUSS) < 1e-12


def test_dirac_and_its_derivative():
    xi = make_bump(0.2, 1.0)
    assert apply(dirac(), xi) == xi(0.0)
    assert apply(dirac_derivative(1), xi) == pytest.approx(-xi.derivative(1)(0.0))
    assert apply(dirac_derivative(2), xi) == pytest.approx(xi.derivative(2)(0.0))
    with pytest.raises(ValueError):
        dirac_derivative(-1)


def test_regular_with_indicator_density():
    # int_0^1 e^{-x^2} = (sqrt(pi)/2) erf(1)
    val = apply(regular(indicator(0.0, 1.0)), gaussian(0.0, 1.0))
    assert abs(val - math.sqrt(math.pi) / 2 * math.erf(1.0)) < 1e-12


@pytest.mark.parametrize("f", [abs_regular(1), sin_abs(), exp_abs(), regular(1), dirac(), zero_functional(),
                               compose(ABS, regular(gaussian()))], ids=lambda f: f.label)
def test_zero_maps_to_zero(f):
    assert apply(f, zero()) == 0


def test_space_mismatch_raises():
    with pytest.raises(ValueError):
        apply(sin_abs(), make_bump(0.0, 2.0))
    with pytest.raises(ValueError):
        apply(regular(lambda x: np.exp(x * x)), gaussian())  # a non-tempered density pairs only with D


def test_tempered_density_accepts_schwartz():
    val = apply(abs_regular(1), gaussian(0.0, 1.0, -1.0))
    assert abs(val - math.sqrt(math.pi)) < 1e-12


def test_class_and_gamma_metadata():
    assert abs_regular(1).class_tag == "K" and abs_regular(1).nbhd.is_whole_space
    s = sin_abs()
    assert s.class_tag == "K" and s.real_scalars
    assert s.gamma.magnitude(0.5) == pytest.approx(math.pi / 4)
    e = exp_abs()
    assert e.class_tag == "L" and e.gamma.magnitude(0.5) == pytest.approx(math.e / 2)
    assert regular(gaussian()).class_tag == "Linear"


# -- gamma functions --------------------------------------------------------


@pytest.mark.parametrize("g", [gamma_identity(), gamma_linear(math.pi / 2), gamma_linear(math.e), gamma_sqrt(),
                               gamma_composite(gamma_linear(2.0), gamma_sqrt())], ids=lambda g: g.label)
def test_builtin_gammas_admissible(g):
    assert g.check_admissible(400)


def test_inadmissible_gamma_detected():
    assert not gamma_linear(0.5).check_admissible(200)
    assert not gamma_custom(lambda t: abs(t) ** 2, "t^2").check_admissible(200)
    assert not gamma_custom(lambda t: 1.0 + abs(t), "1+t").check_admissible(200)


@given(st.floats(0, 1), st.floats(0, 1))
def test_sqrt_gamma_monotone(a, b):
    lo, hi = sorted((a, b))
    g = gamma_sqrt()
    assert g.magnitude(lo) <= g.magnitude(hi) + 1e-15
    assert g.magnitude(hi) <= 1.0


# -- neighborhoods ----------------------------------------------------------


def test_ball_membership_and_rescale():
    U = Neighborhood((NbhdBall(1, 0.5, SCHWARTZ),))
    g = gaussian(0.0, 0.5, 3.0)
    assert not U.contains(g)
    inside = U.rescale_into(g)
    assert U.contains(inside)
    assert seminorm(inside, 1) == pytest.approx(0.45, rel=1e-6)


def test_functional_bound_membership():
    U = Neighborhood((), (FunctionalBound(regular(1), 0.1),))
    assert not U.contains(XI0)
    assert U.contains(scale(0.2, XI0))


def test_whole_space_contains_everything():
    assert WHOLE_SPACE.contains(gaussian(0.0, 1.0, 1e6))
    assert WHOLE_SPACE.rescale_into(XI0) is XI0


def test_bad_ball_parameters():
    with pytest.raises(ValueError):
        NbhdBall(-1, 1.0)
    with pytest.raises(ValueError):
        NbhdBall(0, 0.0)


# -- composition -------------------------------------------------------------


def test_compose_class_rules():
    lin = regular(gaussian())
    assert compose(SIN_ABS, lin).class_tag == "K"
    assert compose(SIN_ABS, lin).gamma.magnitude(0.4) == pytest.approx(0.4 * math.pi / 2)
    k = abs_regular(1)
    assert compose(SIN_ABS, k).gamma.magnitude(0.4) == pytest.approx(0.4 * math.pi / 2)
    l_inner = exp_abs()
    c = compose(ABS, l_inner)
    assert c.class_tag == "L" and c.gamma.magnitude(0.4) == pytest.approx(0.4 * math.e) and c.certified
    c2 = compose(EXP_ABS_MINUS_ONE, l_inner)
    assert c2.class_tag == "L" and not c2.certified


def test_compose_adds_functional_bound():
    c = compose(SIN_ABS, regular(gaussian()))
    assert len(c.nbhd.bounds) == 1 and c.nbhd.bounds[0].eps == 1.0
    assert compose(ABS, regular(gaussian())).nbhd.is_whole_space


def test_compose_values():
    xi = make_bump(0.3, 0.8, -2.0)
    f = regular(gaussian())
    assert apply(compose(SIN, f), xi) == pytest.approx(np.sin(apply(f, xi)))
    assert apply(compose(ABS, f), xi) == pytest.approx(abs(apply(f, xi)))


def test_scalar_map_hook_validation():
    with pytest.raises(ValueError):
        scalar_map(abs, "Linear", gamma_identity(), 1.0, "bad")
    h = scalar_map(lambda z: 2 * abs(z), "K", gamma_linear(1.0), math.inf, "2|z|")
    assert apply(compose(h, regular(gaussian())), XI0) == pytest.approx(2 * abs(apply(regular(gaussian()), XI0)))


# -- spans --------------------------------------------------------------------


@given(seeds, st.complex_numbers(max_magnitude=5, allow_nan=False), st.complex_numbers(max_magnitude=5, allow_nan=False))
def test_span_is_linear_in_coefficients(seed, a, b):
    xi = draw_schwartz(seed)
    f, g = exp_abs(), dirac()
    s = SpanElement(((a, f), (b, g)))
    assert abs(apply(s, xi) - (a * apply(f, xi) + b * apply(g, xi))) < 1e-12 * (1 + abs(a) + abs(b)) * 10
    assert abs(apply(s * 2.0 + s, xi) - 3 * apply(s, xi)) < 1e-9 * (1 + abs(apply(s, xi)))


# -- demi-linearity feasibility (property form of the class inequalities) -----


@given(seeds)
def test_abs_regular_feasible(seed):
    f = abs_regular(1)
    xi, eta, t = random_triple(f, np.random.default_rng(seed))
    rep = check_demi_linearity(f, xi, eta, t)
    assert rep.feasible and rep.lhs_gap <= rep.bound + 1e-8
    r, s = rep.witness
    assert r == 1 and abs(s) <= abs(t) + 1e-12


@given(seeds)
def test_sin_abs_feasible(seed):
    f = sin_abs()
    xi, eta, t = random_triple(f, np.random.default_rng(seed))
    assert check_demi_linearity(f, xi, eta, t).feasible


@given(seeds)
def test_exp_abs_feasible(seed):
    f = exp_abs()
    xi, eta, t = random_triple(f, np.random.default_rng(seed))
    rep = check_demi_linearity(f, xi, eta, t)
    assert rep.feasible
    r, s = rep.witness
    g = math.e * abs(t)
    assert abs(r - 1) <= g + 1e-9 and abs(s) <= g + 1e-9
    assert abs(r * apply(f, xi) + s * apply(f, eta) - apply(f, xi + t * eta)) < 1e-9


@given(seeds)
def test_linear_functionals_are_exact(seed):
    f = regular(gaussian(0.1, 0.7))
    rng = np.random.default_rng(seed)
    xi, eta, t = draw_schwartz(seed), draw_schwartz(seed + 1), random_scalar(rng)
    assert abs(apply(f, xi + t * eta) - apply(f, xi) - t * apply(f, eta)) < 1e-11


def test_feasibility_rejects_outside_nbhd_and_large_t():
    f = exp_abs()
    big = gaussian(0.0, 1.0, 5.0)
    with pytest.raises(ValueError):
        check_demi_linearity(f, XI0, big, 0.5)
    with pytest.raises(ValueError):
        check_demi_linearity(f, XI0, scale(0.1, XI0), 1.5)
    with pytest.raises(ValueError):
        check_demi_linearity(sin_abs(), XI0, scale(0.1, XI0), 0.5j)


def test_infeasible_pair_is_reported():
    # the squared functional is not K with gamma(t) = t: the gap is quadratic in xi
    sq = scalar_map(lambda z: abs(z) ** 2, "K", gamma_identity(), math.inf, "|z|^2")
    f = compose(sq, regular(1))
    rep = check_demi_linearity(f, scale(10.0, XI0), scale(0.1, XI0), 1.0)
    assert not rep.feasible and rep.witness is None


@given(seeds)
def test_feasibility_real_unit_samples(seed):
    xi = draw_unit(seed)
    assert xi.support[0] >= -1 and xi.support[1] <= 1
    assert np.all(np.isreal(xi(np.linspace(-1, 1, 11))))


# -- sequences ----------------------------------------------------------------


def test_linear_family_gap_formula():
    g = gaussian(0.0, 1.0)
    B = [make_bump(0.2, 0.8), make_bump(-0.3, 0.5, 0.8)]
    seq = [regular(scale(1 + 1 / k, g)) for k in range(1, 11)]
    rep = sample_w_star_uniformity(seq, regular(g), B)
    peak = max(abs(apply(regular(g), xi)) for xi in B)
    for k, gap in zip(rep.ks, rep.gaps):
        assert gap == pytest.approx(peak / k, rel=1e-9)
    assert rep.monotone_after(1)
    assert rep.gap_at(10) == rep.final_gap


def test_w_star_with_callable():
    g = gaussian(0.0, 1.0)
    rep = sample_w_star_uniformity(lambda k: regular(scale(1 + 1 / k**2, g)), regular(g), [XI0], ks=[1, 10, 100])
    assert rep.ks == (1, 10, 100) and rep.gaps[-1] < 1e-4
