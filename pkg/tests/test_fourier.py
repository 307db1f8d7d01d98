import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as sci

from demicalc.demidist import SpanElement, abs_regular, apply, dirac, exp_abs, regular, sin_abs
from demicalc.fourier import (
    FourierDecayError,
    delta_vs_transform_check,
    fourier_functional,
    fourier_test,
    inverse_fourier_test,
    null_identity_check,
    sine_of_mean,
    spectral_radius,
    transform_from_function,
)
from demicalc.testfn import derivative, evaluate, gaussian, integrate, make_bump, translate, zero

from conftest import draw_compact, draw_schwartz, draw_unit, seeds

SIG = np.linspace(-8.0, 8.0, 50)


def test_gaussian_transform_closed_form():
    F = fourier_test(gaussian(0.0, math.sqrt(2.0)))
    ref = math.sqrt(2 * math.pi) * np.exp(-SIG**2 / 2)
    assert np.max(np.abs(F(SIG) - ref)) < 1e-7


def test_bump_transform_against_qawo():
    """Symmetric bump: F is the cosine transform, computed by QUADPACK's oscillatory rule."""
    xi = make_bump(0.0, 1.0)
    F = fourier_test(xi)
    for s in (0.0, 0.7, 3.0, 11.0):
        ref = sci.quad(lambda x: math.exp(1 / (x * x - 1)) if abs(x) < 1 else 0.0, -1, 1,
                       weight="cos", wvar=s, epsabs=1e-14)[0]
        assert abs(F(s) - ref) < 1e-10


def test_transform_at_zero_is_integral():
    xi = make_bump(0.4, 0.8, 2 - 1j)
    assert abs(fourier_test(xi)(0.0) - integrate(xi)) < 1e-12


def test_spectral_radius_scales_with_width():
    r1 = spectral_radius(make_bump(0.0, 1.0))
    r2 = spectral_radius(make_bump(0.0, 0.5))
    assert r2 > r1 > 100  # bumps decay like exp(-sqrt(sigma)), so the radius is large


def test_zero_transform():
    F = fourier_test(zero())
    assert np.all(F(SIG) == 0)
    assert inverse_fourier_test(F).expr.is_zero


@given(seeds)
def test_derivative_rule(seed):
    xi = draw_compact(seed)
    s = np.linspace(-6, 6, 13)
    lhs = fourier_test(derivative(xi, 1))(s)
    rhs = -1j * s * fourier_test(xi)(s)
    assert np.max(np.abs(lhs - rhs)) < 1e-9


@given(seeds, st.floats(-2, 2))
def test_translation_rule(seed, a):
    xi = draw_schwartz(seed)
    s = np.linspace(-4, 4, 9)
    lhs = fourier_test(translate(xi, -a))(s)  # x -> xi(x - a)
    rhs = np.exp(1j * a * s) * fourier_test(xi)(s)
    assert np.max(np.abs(lhs - rhs)) < 1e-9


@given(seeds)
def test_roundtrip_compact(seed):
    xi = draw_compact(seed)
    back = inverse_fourier_test(fourier_test(xi))
    xs = np.linspace(*xi.support, 401)
    assert back.support == xi.support
    assert np.max(np.abs(evaluate(back, xs) - evaluate(xi, xs))) < 1e-6


@given(seeds)
def test_roundtrip_schwartz(seed):
    xi = draw_schwartz(seed)
    back = inverse_fourier_test(fourier_test(xi))
    xs = np.linspace(-6, 6, 301)
    assert np.max(np.abs(evaluate(back, xs) - evaluate(xi, xs))) < 1e-6


def test_supplied_transform_inverts_to_gaussian():
    zeta = transform_from_function(lambda s: math.sqrt(math.pi) * np.exp(-s * s / 4), decay_radius=14.0)
    back = inverse_fourier_test(zeta)
    xs = np.linspace(-5, 5, 101)
    assert np.max(np.abs(evaluate(back, xs) - np.exp(-xs**2))) < 1e-10


def test_supplied_transform_needs_real_decay():
    zeta = transform_from_function(lambda s: 1.0 / (1.0 + s * s), decay_radius=20.0)
    with pytest.raises(FourierDecayError):
        inverse_fourier_test(zeta)
    with pytest.raises(ValueError):
        transform_from_function(np.exp, decay_radius=0.0)


def test_times_i_sigma_is_minus_derivative():
    xi = gaussian(0.3, 0.9)
    back = inverse_fourier_test(fourier_test(xi).times_i_sigma())
    xs = np.linspace(-4, 4, 81)
    assert np.max(np.abs(evaluate(back, xs) + evaluate(derivative(xi, 1), xs))) < 1e-8


def test_moment_and_arithmetic():
    xi = gaussian(0.0, 1.0)
    F = fourier_test(xi)
    # d/ds of sqrt(pi) e^{-s^2/4} is -(s/2) sqrt(pi) e^{-s^2/4}
    s = np.linspace(-3, 3, 7)
    assert np.max(np.abs(F.moment(1)(s) + s / 2 * math.sqrt(math.pi) * np.exp(-s**2 / 4))) < 1e-9
    G = 2.0 * F - F
    assert np.max(np.abs(G(s) - F(s))) < 1e-13
    with pytest.raises(ValueError):
        F.times_i_sigma().moment(1)


# -- transformed functionals --------------------------------------------------


@given(seeds)
def test_duality_for_builtins(seed):
    xi = draw_schwartz(seed)
    zeta = fourier_test(xi)
    for f in (dirac(), abs_regular(1), exp_abs(), regular(gaussian()), sine_of_mean()):
        assert abs(apply(fourier_functional(f), zeta) - 2 * math.pi * apply(f, xi)) < 1e-6


@given(seeds)
def test_duality_for_sin_abs(seed):
    xi = draw_unit(seed)
    f = sin_abs()
    assert abs(apply(fourier_functional(f), fourier_test(xi)) - 2 * math.pi * apply(f, xi)) < 1e-6


@given(seeds)
def test_example_closed_form(seed):
    xi = draw_schwartz(seed)
    Ff = fourier_functional(sine_of_mean())
    ref = 2 * math.pi * np.sin(math.exp(-1) * integrate(xi))
    assert abs(apply(Ff, fourier_test(xi)) - ref) < 1e-6


@given(seeds)
def test_null_identity(seed):
    zeta = fourier_test(draw_schwartz(seed))
    assert null_identity_check(fourier_functional(sine_of_mean()), zeta) < 1e-6


def test_delta_differs_from_transform():
    xi = gaussian(0.0, 1.0, 0.5)
    first, second = delta_vs_transform_check(2.0, xi)
    assert abs(first - 2.0 * integrate(xi)) < 1e-12
    assert abs(second - 2 * math.pi * math.sin(math.exp(-1) * integrate(xi).real)) < 1e-6
    assert abs(first - second) > 0.1


def test_fourier_functional_metadata_and_spans():
    f = exp_abs()
    Ff = fourier_functional(f)
    assert Ff.class_tag == f.class_tag and Ff.gamma is f.gamma
    with pytest.raises(ValueError):
        apply(Ff, gaussian())
    span = fourier_functional(SpanElement(((2.0, f), (1j, dirac()))))
    zeta = fourier_test(gaussian(0.2, 0.8))
    expect = 2.0 * apply(Ff, zeta) + 1j * apply(fourier_functional(dirac()), zeta)
    assert abs(apply(span, zeta) - expect) < 1e-10


def test_transform_side_neighborhood_uses_inverse():
    Ff = fourier_functional(exp_abs())
    small = fourier_test(gaussian(0.0, 1.0, 0.5))
    large = fourier_test(gaussian(0.0, 1.0, 2.0))
    assert Ff.nbhd.contains(small) and not Ff.nbhd.contains(large)
