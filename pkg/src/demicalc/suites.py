"""Registry of verification checks run by the ``verify`` command.

Each check draws its own samples from a generator seeded by
``SeedSequence([seed, crc32(check_id)])`` and returns one residual per sample.
A check passes when its largest residual is at most its tolerance.  The
``anchor`` strings are traceability labels pointing back to the source
statements each check exercises.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import trapezoid

from .calculus import (
    DiffOperator,
    derivative_functional,
    compose_derivative_identity_check,
    estimate_support,
    general_solution,
    invariance_check_E1,
    multiply,
    normalize,
    primitive_T,
    projection_A,
    solve_homogeneous,
    solve_inhomogeneous,
)
from .convolution import (
    CompactRegular,
    Dirac,
    DiracDerivative,
    convolution_continuity_check,
    convolve_functional,
    convolve_test,
    exchange_derivative_side,
    exchange_operator_side,
    exchange_test_side,
    mollifier,
    scalar_compat_check,
)
from .demidist import (
    ABS,
    SIN_ABS,
    SpanElement,
    abs_regular,
    apply,
    check_demi_linearity,
    compose,
    dirac,
    exp_abs,
    gamma_identity,
    gamma_linear,
    gamma_sqrt,
    random_scalar,
    random_test_function,
    random_triple,
    regular,
    sample_w_star_uniformity,
    sin_abs,
)
from .fourier import (
    delta_vs_transform_check,
    fourier_functional,
    fourier_test,
    inverse_fourier_test,
    null_identity_check,
    sine_of_mean,
)
from .quadrature import QuadratureConfig
from .testfn import (
    COMPACT_UNION,
    SCHWARTZ,
    CompactA,
    TestFunction,
    derivative,
    evaluate,
    gaussian,
    integrate,
    make_bump,
    make_plateau,
    polynomial,
    scale,
    translate,
)

# Integral of exp(1/(x^2-1)) over [-1, 1], frozen from the fixed-grid Romberg
# oracle in scripts/romberg_oracle.py (independent of the adaptive quadrature).
I0_REFERENCE = 0.4439938161680794

CONVERGENCE_KS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 30, 50, 70, 100)
GRID_KS = (1, 2, 3, 5, 7, 10, 20, 50, 100)


@dataclass(frozen=True)
class Context:
    rng: np.random.Generator
    n: int
    cfg: QuadratureConfig


@dataclass(frozen=True)
class Check:
    check_id: str
    suite: str
    anchor: str
    formula: str
    default_samples: int
    tolerance: float
    run: Callable[[Context], list]  # -> [(residual, description), ...]


REGISTRY: dict[str, list[Check]] = {}
SUITE_ALIASES = {"convolution": "conv"}


def _register(suite, check_id, anchor, formula, samples, tol):
    def deco(fn):
        REGISTRY.setdefault(suite, []).append(Check(check_id, suite, anchor, formula, samples, tol, fn))
        return fn
    return deco


def resolve_suite(name: str) -> str:
    name = SUITE_ALIASES.get(name, name)
    if name not in REGISTRY:
        raise KeyError(name)
    return name


# --------------------------------------------------------------------------
# helpers


def _compact(rng, real=False):
    return random_test_function(rng, COMPACT_UNION, real)


def _schwartz(rng):
    return random_test_function(rng, SCHWARTZ)


def _with_mass(rng, draw, floor=0.05):
    while True:
        xi = draw(rng)
        if abs(integrate(xi)) > floor:
            return xi


def _feasibility(f, ctx: Context):
    out = []
    for _ in range(ctx.n):
        xi, eta, t = random_triple(f, ctx.rng, ctx.cfg)
        rep = check_demi_linearity(f, xi, eta, t, slack=0.0, cfg=ctx.cfg)
        out.append((max(0.0, rep.lhs_gap - rep.bound), f"xi={xi.label}; eta={eta.label}; t={t:.6g}"))
    return out


def _sup_diff(a: TestFunction, b: TestFunction, xs) -> float:
    return float(np.max(np.abs(evaluate(a, xs) - evaluate(b, xs))))


def _grid(xi: TestFunction, n=801):
    lo, hi = xi.support if xi.support is not None else (-6.0, 6.0)
    return np.linspace(lo, hi, n)


# --------------------------------------------------------------------------
# demilinearity


@_register("demilinearity", "ex-1.1.1-abs-regular", "Example 1.1(1)",
           "|[1](xi+t eta) - [1](xi)| <= |t| [1](eta)", 100, 1e-8)
def _abs_regular(ctx):
    return _feasibility(abs_regular(1, ctx.cfg), ctx)


@_register("demilinearity", "ex-1.1.2-sin-abs", "Example 1.1(2)",
           "K bound with gamma(t) = (pi/2) t on D_1, max|eta| < 1", 100, 1e-8)
def _sin_abs(ctx):
    return _feasibility(sin_abs(ctx.cfg), ctx)


@_register("demilinearity", "ex-1.1.3-exp-abs", "Example 1.1(3)",
           "L bound with gamma(t) = e t on S, sup|eta| < 1", 100, 1e-8)
def _exp_abs(ctx):
    return _feasibility(exp_abs(ctx.cfg), ctx)


@_register("demilinearity", "ex-1.2.1-compose-abs", "Th 1.5 / Example 1.2(1)",
           "|regular(g)| is K with gamma(t) = t", 100, 1e-8)
def _compose_abs(ctx):
    return _feasibility(compose(ABS, regular(gaussian(0.0, 1.0), ctx.cfg)), ctx)


@_register("demilinearity", "ex-2.2.1-nonlinearity", "Example 2.2(1)",
           "f(xi0 - xi0) = 0 and f(xi0) + f(-xi0) = 2 I0^2", 1, 1e-8)
def _nonlinearity(ctx):
    xi0 = make_bump(0.0, 1.0)
    f = solve_homogeneous(abs_regular(1, ctx.cfg), xi0, ctx.cfg)
    out = []
    for i in range(ctx.n):
        a = 1.0 + 0.5 * i  # sample i uses the scaled pair a*xi0, -a*xi0
        xi = scale(a, xi0)
        r = max(abs(apply(f, xi - xi)), abs(apply(f, xi) + apply(f, -xi) - 2 * a * I0_REFERENCE**2))
        out.append((r, f"xi0 scaled by {a:g}"))
    return out


@_register("demilinearity", "span-linearity", "Def 1.1",
           "(a f + b g)(xi) = a f(xi) + b g(xi)", 20, 1e-12)
def _span(ctx):
    f, g = abs_regular(1, ctx.cfg), exp_abs(ctx.cfg)
    out = []
    for _ in range(ctx.n):
        a, b = random_scalar(ctx.rng), random_scalar(ctx.rng)
        xi = _schwartz(ctx.rng)
        s = SpanElement(((a, f), (b, g)))
        out.append((abs(apply(s, xi) - (a * apply(f, xi) + b * apply(g, xi))), xi.label))
    return out


@_register("demilinearity", "thm-1.6-gamma", "Th 1.6",
           "|t| <= |gamma(t)| on the unit disk, gamma(0) = 0", 1, 0.0)
def _gammas(ctx):
    out = []
    for i in range(ctx.n):
        for g in (gamma_identity(), gamma_linear(math.pi / 2), gamma_linear(math.e), gamma_sqrt()):
            ok = g.check_admissible(500, seed=int(ctx.rng.integers(2**31)))
            out.append((0.0 if ok else 1.0, f"sample {i}: {g.label}"))
    return [max(out[i * 4:(i + 1) * 4]) for i in range(ctx.n)]


# --------------------------------------------------------------------------
# differentiation


@_register("differentiation", "def-2.1-dual-derivative", "Def 2.1",
           "(D^k f)(xi) = f((-1)^k xi^(k))", 20, 1e-12)
def _dual(ctx):
    f = abs_regular(1, ctx.cfg)
    out = []
    for _ in range(ctx.n):
        k = int(ctx.rng.integers(1, 4))
        xi = _compact(ctx.rng)
        r = abs(apply(derivative_functional(f, k), xi) - apply(f, scale((-1) ** k, derivative(xi, k))))
        out.append((r, f"k={k}; {xi.label}"))
    return out


@_register("differentiation", "ex-2.1.1-abs-derivative", "Example 2.1(1)",
           "(D[1])(xi) = int |xi'|", 20, 1e-9)
def _abs_derivative(ctx):
    f = derivative_functional(abs_regular(1, ctx.cfg), 1)
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        d1 = derivative(xi, 1)
        xs = np.linspace(*xi.support, 200001)
        ref = trapezoid(np.abs(evaluate(d1, xs)), xs)
        out.append((abs(apply(f, xi) - ref), xi.label))
    return out


@_register("differentiation", "ex-2.1.3-compose-derivative", "Example 2.1(3)",
           "D^k (h o f) = h o D^k f", 20, 1e-12)
def _compose_derivative(ctx):
    out = []
    for i in range(ctx.n):
        k = int(ctx.rng.integers(0, 3))
        h, f = ((ABS, regular(gaussian(0.0, 1.0), ctx.cfg)), (SIN_ABS, abs_regular(1, ctx.cfg)))[i % 2]
        xi = _compact(ctx.rng)
        out.append((compose_derivative_identity_check(h, f, k, [xi]), f"{h.label}; k={k}; {xi.label}"))
    return out


@_register("differentiation", "cor-2.1-mixed-order", "Cor 2.1",
           "D^j D^k f = D^(j+k) f and D^k(f + t g) = D^k f + t D^k g", 20, 1e-12)
def _mixed(ctx):
    f, g = abs_regular(1, ctx.cfg), exp_abs(ctx.cfg)
    out = []
    for _ in range(ctx.n):
        j, k = (int(v) for v in ctx.rng.integers(0, 3, 2))
        t = random_scalar(ctx.rng)
        xi = _compact(ctx.rng)
        r1 = abs(apply(derivative_functional(derivative_functional(f, j), k), xi)
                 - apply(derivative_functional(f, j + k), xi))
        lin = derivative_functional(SpanElement(((1.0, f), (t, g))), k)
        r2 = abs(apply(lin, xi) - apply(derivative_functional(f, k), xi) - t * apply(derivative_functional(g, k), xi))
        out.append((max(r1, r2), f"j={j}; k={k}; {xi.label}"))
    return out


@_register("differentiation", "ibp-regular", "Def 2.1 (classical case)",
           "D regular(g) = regular(g') for smooth g", 20, 1e-7)
def _ibp(ctx):
    g = gaussian(0.3, 1.2)
    left = derivative_functional(regular(g, ctx.cfg), 1)
    right = regular(derivative(g, 1), ctx.cfg)
    out = []
    for _ in range(ctx.n):
        xi = _schwartz(ctx.rng)
        out.append((abs(apply(left, xi) - apply(right, xi)), xi.label))
    return out


@_register("differentiation", "def-2.2-multiply", "Def 2.2 / Th 2.2",
           "(zeta f)(xi) = f(zeta xi)", 20, 1e-9)
def _multiply(ctx):
    f = multiply(polynomial([0, 0, 1]), regular(1, ctx.cfg))
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        xs = np.linspace(*xi.support, 200001)
        vals = xs**2 * evaluate(xi, xs)
        ref = trapezoid(vals, xs)
        r = max(abs(apply(f, xi) - ref), abs(apply(multiply(polynomial([0, 1]), dirac()), xi)))
        out.append((r, xi.label))
    return out


# --------------------------------------------------------------------------
# ode


def _zetas():
    return (make_bump(0.1, 0.5), scale(2.0, make_bump(-0.4, 1.2)))


def _zeta_n(cfg):
    return normalize(make_bump(0.2, 0.6), cfg)


@_register("ode", "lemma-2.2-mean-zero", "Lemma 2.2", "int A(xi) = 0", 20, 1e-9)
def _mean_zero(ctx):
    zeta = _zeta_n(ctx.cfg)
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        a = projection_A(xi, zeta, ctx.cfg)
        a = TestFunction(a.expr, a.support, a.label)  # integrate numerically, not via the structural flag
        out.append((abs(integrate(a, ctx.cfg)), xi.label))
    return out


@_register("ode", "lemma-2.2-primitive", "Lemma 2.2 / Th 2.6", "T(xi') = xi, sup over the support", 20, 1e-7)
def _primitive(ctx):
    zeta = _zeta_n(ctx.cfg)
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        T = primitive_T(derivative(xi, 1), zeta, ctx.cfg)
        out.append((_sup_diff(T, xi, _grid(xi)), xi.label))
    return out


@_register("ode", "lemma-2.2-derivatives", "Lemma 2.2", "A(xi^(k)) = xi^(k) for k = 1, 2, 3", 20, 0.0)
def _fixes_derivatives(ctx):
    zeta = _zeta_n(ctx.cfg)
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        xs = _grid(xi)
        r = max(_sup_diff(projection_A(derivative(xi, k), zeta, ctx.cfg), derivative(xi, k), xs) for k in (1, 2, 3))
        out.append((r, xi.label))
    return out


@_register("ode", "thm-2.3", "Th 2.3 / Example 2.2(1)",
           "f(xi) = f0((int xi) xi0): |int xi| I0 and c int xi", 20, 1e-8)
def _thm23(ctx):
    xi0 = make_bump(0.0, 1.0)
    y_abs = solve_homogeneous(abs_regular(1, ctx.cfg), xi0, ctx.cfg)
    xi1 = make_bump(0.2, 0.7)
    c = integrate(xi1, ctx.cfg)
    y_lin = solve_homogeneous(regular(1, ctx.cfg), xi1, ctx.cfg)
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        m = integrate(xi, ctx.cfg)
        r = max(abs(apply(y_abs, xi) - abs(m) * I0_REFERENCE), abs(apply(y_lin, xi) - c * m))
        out.append((r, xi.label))
    return out


@_register("ode", "lemma-2.3", "Lemma 2.3",
           "y(xi) = 0 whenever int xi = 0; y(-xi') = 0", 20, 1e-8)
def _lemma23(ctx):
    zeta = normalize(make_bump(-0.2, 0.8), ctx.cfg)
    ys = (solve_homogeneous(abs_regular(1, ctx.cfg), make_bump(0.0, 1.0), ctx.cfg),
          solve_homogeneous(compose(SIN_ABS, dirac()), make_bump(0.3, 0.9), ctx.cfg))
    out = []
    for _ in range(ctx.n):
        raw = _compact(ctx.rng)
        xi = projection_A(raw, zeta, ctx.cfg)
        xi = TestFunction(xi.expr, xi.support, xi.label)  # drop the structural flag: integrate numerically
        r = max(max(abs(apply(y, xi)) for y in ys),
                max(abs(apply(derivative_functional(y, 1), raw)) for y in ys))
        out.append((r, raw.label))
    return out


@_register("ode", "thm-2.4", "Th 2.4 / Cor 2.2",
           "y(xi) = y(eta) on int = 1", 10, 1e-7)
def _thm24(ctx):
    y = solve_homogeneous(abs_regular(1, ctx.cfg), make_bump(0.0, 1.0), ctx.cfg)
    out = []
    for _ in range(ctx.n):
        xi = _with_mass(ctx.rng, _compact)
        eta = _with_mass(ctx.rng, _compact)
        out.append((invariance_check_E1(y, xi, eta, normalize_inputs=True, cfg=ctx.cfg),
                    f"{xi.label} | {eta.label}"))
    return out


@_register("ode", "thm-2.6", "Th 2.6 / Cor 2.3",
           "y_zeta(-xi') = f(xi) for two zeta", 20, 1e-7)
def _thm26(ctx):
    f = abs_regular(1, ctx.cfg)
    ys = [solve_inhomogeneous(f, z, ctx.cfg) for z in _zetas()]
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        target = apply(f, xi)
        r = max(abs(apply(y, scale(-1.0, derivative(xi, 1))) - target) for y in ys)
        out.append((r, xi.label))
    return out


@_register("ode", "thm-2.7", "Th 2.6 / Cor 2.3 (general solution)",
           "g = hom(f0, xi0) + y_zeta satisfies g' = f", 20, 1e-7)
def _thm27(ctx):
    f = abs_regular(1, ctx.cfg)
    g = general_solution(f, abs_regular(1, ctx.cfg), make_bump(0.0, 1.0), _zetas()[0], ctx.cfg)
    dg = derivative_functional(g, 1)
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        out.append((abs(apply(dg, xi) - apply(f, xi)), xi.label))
    return out


# --------------------------------------------------------------------------
# fourier


@_register("fourier", "gaussian-transform", "Def 3.1 (transform of test functions)",
           "F(exp(-(x-c)^2/2))(s) = sqrt(2 pi) e^{i c s} e^{-s^2/2} at 50 points", 1, 1e-7)
def _gauss_transform(ctx):
    sig = np.linspace(-8.0, 8.0, 50)
    out = []
    for i in range(ctx.n):
        c = 0.0 if i == 0 else float(ctx.rng.uniform(-2, 2))
        F = fourier_test(gaussian(c, math.sqrt(2.0)), ctx.cfg)
        ref = math.sqrt(2 * math.pi) * np.exp(1j * c * sig - sig**2 / 2)
        out.append((float(np.max(np.abs(F(sig) - ref))), f"c={c:.6g}"))
    return out


@_register("fourier", "roundtrip", "Lemma 3.1",
           "F^-1(F(xi)) = xi, sup error on the window", 10, 1e-6)
def _roundtrip(ctx):
    out = []
    for i in range(ctx.n):
        xi = _compact(ctx.rng) if i % 2 else _schwartz(ctx.rng)
        back = inverse_fourier_test(fourier_test(xi, ctx.cfg), ctx.cfg)
        xs = _grid(xi, 1001)
        out.append((_sup_diff(back, xi, xs), xi.label))
    return out


def _builtins(cfg):
    return [dirac(), abs_regular(1, cfg), exp_abs(cfg), regular(gaussian(0.0, 1.0), cfg), sine_of_mean(cfg)]


@_register("fourier", "def-3.1-duality", "Def 3.1",
           "F(f)(F(xi)) = 2 pi f(xi) through the numerical inverse", 20, 1e-6)
def _duality(ctx):
    fs = _builtins(ctx.cfg)
    sa = sin_abs(ctx.cfg)
    out = []
    for _ in range(ctx.n):
        xi = _schwartz(ctx.rng)
        zeta = fourier_test(xi, ctx.cfg)
        r = max(abs(apply(fourier_functional(f), zeta) - 2 * math.pi * apply(f, xi)) for f in fs)
        xr = random_test_function(ctx.rng, CompactA(1.0), real=True)
        r = max(r, abs(apply(fourier_functional(sa), fourier_test(xr, ctx.cfg)) - 2 * math.pi * apply(sa, xr)))
        out.append((r, f"{xi.label} | {xr.label}"))
    return out


@_register("fourier", "thm-3.1-transform-demilinearity", "Th 3.1",
           "F(f) keeps class and gamma on transform-side triples", 10, 1e-8)
def _transform_side(ctx):
    f = exp_abs(ctx.cfg)
    Ff = fourier_functional(f)
    out = []
    for _ in range(ctx.n):
        xi, eta, t = random_triple(f, ctx.rng, ctx.cfg)
        z_xi, z_eta = fourier_test(xi, ctx.cfg), fourier_test(eta, ctx.cfg)
        rep = check_demi_linearity(Ff, z_xi, z_eta, t, slack=0.0, cfg=ctx.cfg)
        # the transformed functional carries the factor 2 pi on both sides of the bound
        out.append((max(0.0, rep.lhs_gap - rep.bound), f"{xi.label}; {eta.label}; t={t:.6g}"))
    return out


@_register("fourier", "thm-3.2-span-linearity", "Th 3.2",
           "F(a f + b h) = a F(f) + b F(h)", 10, 1e-9)
def _span_transform(ctx):
    f, h = abs_regular(1, ctx.cfg), exp_abs(ctx.cfg)
    out = []
    for _ in range(ctx.n):
        a, b = random_scalar(ctx.rng), random_scalar(ctx.rng)
        zeta = fourier_test(_schwartz(ctx.rng), ctx.cfg)
        lhs = apply(fourier_functional(SpanElement(((a, f), (b, h)))), zeta)
        rhs = a * apply(fourier_functional(f), zeta) + b * apply(fourier_functional(h), zeta)
        out.append((abs(lhs - rhs), zeta.label))
    return out


@_register("fourier", "ex-3.1-closed-form", "Example 3.1",
           "F(f)(F(xi)) = 2 pi sin(e^-1 int xi)", 20, 1e-6)
def _ex31(ctx):
    Ff = fourier_functional(sine_of_mean(ctx.cfg))
    out = []
    for _ in range(ctx.n):
        xi = _schwartz(ctx.rng)
        ref = 2 * math.pi * np.sin(math.exp(-1) * integrate(xi, ctx.cfg))
        out.append((abs(apply(Ff, fourier_test(xi, ctx.cfg)) - ref), xi.label))
    return out


@_register("fourier", "thm-3.3-null", "Th 3.3 / Example 3.1",
           "F(f)(i sigma zeta(sigma)) = 0 for homogeneous f", 10, 1e-6)
def _null(ctx):
    Ff = fourier_functional(sine_of_mean(ctx.cfg))
    out = []
    for _ in range(ctx.n):
        zeta = fourier_test(_schwartz(ctx.rng), ctx.cfg)
        out.append((null_identity_check(Ff, zeta), zeta.label))
    return out


@_register("fourier", "ex-3.1-not-delta", "Example 3.1",
           "C delta(F(xi)) = C int xi", 10, 1e-9)
def _not_delta(ctx):
    out = []
    for _ in range(ctx.n):
        xi = _schwartz(ctx.rng)
        C = random_scalar(ctx.rng)
        first, _ = delta_vs_transform_check(C, xi, cfg=ctx.cfg)
        out.append((abs(first - C * integrate(xi, ctx.cfg)), xi.label))
    return out


# --------------------------------------------------------------------------
# convolution


def _f0():
    return CompactRegular(make_bump(0.0, 1.0))


@_register("conv", "ex-4.1.1-dirac", "Example 4.1(1)",
           "delta * xi = xi, (D^k delta) * xi = (-1)^k D^k xi, delta * f = f", 10, 0.0)
def _dirac_family(ctx):
    f = abs_regular(1, ctx.cfg)
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        k = int(ctx.rng.integers(1, 4))
        xs = _grid(xi, 201)
        r = _sup_diff(convolve_test(Dirac(), xi), xi, xs)
        r = max(r, _sup_diff(convolve_test(DiracDerivative(k), xi), scale((-1) ** k, derivative(xi, k)), xs))
        r = max(r, abs(apply(convolve_functional(Dirac(), f), xi) - apply(f, xi)))
        r = max(r, abs(apply(convolve_functional(DiracDerivative(k), f), xi)
                       - apply(derivative_functional(f, k), xi)))
        out.append((r, f"k={k}; {xi.label}"))
    return out


@_register("conv", "def-4.1-consistency", "Def 4.1",
           "(f0 * xi)(x) = f0(xi(x + .))", 20, 1e-9)
def _def41(ctx):
    f0 = _f0()
    as_f = f0.as_functional()
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        lo, hi = xi.support
        x = float(ctx.rng.uniform(lo - 1, hi + 1))
        out.append((abs(evaluate(convolve_test(f0, xi), x) - apply(as_f, translate(xi, x))), f"x={x:.6g}; {xi.label}"))
    return out


P_EXCHANGE = DiffOperator(((2.0, 0), (3.0, 2)))


def _exchange(ctx, side):
    f = abs_regular(1, ctx.cfg)
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        r = side(P_EXCHANGE, _f0(), xi) if side is exchange_test_side else side(P_EXCHANGE, _f0(), f, xi)
        out.append((r, xi.label))
    return out


@_register("conv", "thm-4.1", "Th 4.1", "(P(D) f0) * xi = sum a_k (-1)^k f0 * D^k xi, P = 2 + 3D^2", 10, 1e-8)
def _thm41(ctx):
    return _exchange(ctx, exchange_test_side)


@_register("conv", "thm-4.3", "Th 4.3", "D^k(f0 * f) = (D^k f0) * f = f0 * D^k f", 10, 1e-8)
def _thm43(ctx):
    return _exchange(ctx, exchange_derivative_side)


@_register("conv", "cor-4.2", "Cor 4.2", "P(D)(f0 * f) = f0 * P(D) f", 10, 1e-8)
def _cor42(ctx):
    return _exchange(ctx, exchange_operator_side)


@_register("conv", "def-4.2-compose-exchange", "Def 4.2 / Example 4.1(2)",
           "f0 * (h o f) = h o (f0 * f)", 10, 1e-10)
def _compose_exchange(ctx):
    f0 = _f0()
    f = regular(gaussian(0.0, 1.0), ctx.cfg)
    left = convolve_functional(f0, compose(SIN_ABS, f))
    right = compose(SIN_ABS, convolve_functional(f0, f))
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        out.append((abs(apply(left, xi) - apply(right, xi)), xi.label))
    return out


@_register("conv", "lemma-4.2-scalars", "Lemma 4.2",
           "t(f0 * xi) = (t f0) * xi, t(f0 * f) = f0 * (t f)", 10, 1e-9)
def _scalars(ctx):
    f0 = _f0()
    out = []
    for _ in range(ctx.n):
        xi = _compact(ctx.rng)
        t = random_scalar(ctx.rng)
        res = scalar_compat_check(f0, abs_regular(1, ctx.cfg), t, xi)
        out.append((max(v for v in res.values() if v is not None), f"t={t:.6g}; {xi.label}"))
    return out


# --------------------------------------------------------------------------
# support


def _support_residual(intervals, must_cover, allowed, max_width=None, single=False):
    r = 0.0
    if single and len(intervals) != 1:
        return 1.0
    if not intervals:
        return 1.0 if must_cover is not None else 0.0
    if must_cover is not None and not any(a <= must_cover[0] and b >= must_cover[1] for a, b in intervals):
        r = max(r, 1.0)
    for a, b in intervals:
        r = max(r, allowed[0] - a, b - allowed[1])
        if max_width is not None:
            r = max(r, (b - a) - max_width)
    return max(r, 0.0)


@_register("support", "def-1.4-dirac", "Def 1.4 / Th 1.9", "supp delta is one interval around 0 of width <= 0.5",
           1, 0.0)
def _support_dirac(ctx):
    out = []
    for i in range(ctx.n):
        ivs = estimate_support(dirac(), (-1.0, 1.0), 0.05)
        out.append((_support_residual(ivs, (0.0, 0.0), (-0.25, 0.25), 0.5, True), str(ivs)))
    return out


@_register("support", "def-1.4-plateau", "Def 1.4",
           "supp regular(g) covers [2, 3] and stays inside [1.5, 3.5]", 1, 0.0)
def _support_plateau(ctx):
    g = make_plateau(2.0, 3.0, 0.2, ctx.cfg)
    out = []
    for i in range(ctx.n):
        ivs = estimate_support(regular(g, ctx.cfg), (0.0, 5.0), 0.05)
        out.append((_support_residual(ivs, (2.0, 3.0), (1.5, 3.5)), str(ivs)))
    return out


@_register("support", "cor-1.4-zero", "Cor 1.4", "supp 0 is empty", 1, 0.0)
def _support_zero(ctx):
    return [(float(len(estimate_support(regular(0), (0.0, 5.0), 0.05))), "regular(0)") for _ in range(ctx.n)]


# --------------------------------------------------------------------------
# convergence


def _family_B(n):
    base = [make_bump(0.2, 0.8), make_bump(-0.3, 0.5, 0.8), scale(0.5, make_bump(0.5, 1.2))]
    return [base[i % len(base)] if i < len(base) else translate(base[i % len(base)], 0.05 * i) for i in range(n)]


def _convergence_rows(gaps_by_xi, ks, k0=5):
    """One residual per xi: final gap, or 1.0 if the sup sequence is not monotone after k0."""
    sup = np.max(np.array(gaps_by_xi), axis=0)
    tail = [g for k, g in zip(ks, sup) if k >= k0]
    mono = all(b <= a * (1 + 1e-9) + 1e-15 for a, b in zip(tail, tail[1:]))
    rows = []
    for i, gaps in enumerate(gaps_by_xi):
        rows.append((float(gaps[-1]) if mono else 1.0, f"B[{i}] final gap; sup monotone after k={k0}: {mono}"))
    return rows


def _per_xi(seq, lim, B, ks):
    return [sample_w_star_uniformity(seq, lim, [xi], ks=ks).gaps for xi in B]


@_register("convergence", "thm-1.7-linear-family", "Th 1.7",
           "regular(g (1 + 1/k^2)) -> regular(g)", 3, 1e-4)
def _conv_linear(ctx):
    g = gaussian(0.0, 1.0)
    seq = [regular(scale(1 + 1 / k**2, g), ctx.cfg) for k in CONVERGENCE_KS]
    return _convergence_rows(_per_xi(seq, regular(g, ctx.cfg), _family_B(ctx.n), CONVERGENCE_KS), CONVERGENCE_KS)


@_register("convergence", "thm-1.7-sin-family", "Th 1.7",
           "sin|regular(g (1 + 1/k^2))| -> sin|regular(g)|", 3, 1e-4)
def _conv_sin(ctx):
    g = gaussian(0.0, 1.0)
    seq = [compose(SIN_ABS, regular(scale(1 + 1 / k**2, g), ctx.cfg)) for k in CONVERGENCE_KS]
    lim = compose(SIN_ABS, regular(g, ctx.cfg))
    return _convergence_rows(_per_xi(seq, lim, _family_B(ctx.n), CONVERGENCE_KS), CONVERGENCE_KS)


@_register("convergence", "thm-4.4-mollifier", "Th 4.4",
           "(rho_k * g)(xi) -> (delta * g)(xi) for mollifiers rho_k", 3, 1e-4)
def _conv_moll(ctx):
    gl = compose(SIN_ABS, regular(gaussian(0.0, 1.0), ctx.cfg))
    B = _family_B(ctx.n)
    rows = []
    for xi in B:
        rep = convolution_continuity_check(lambda k: mollifier(k, ctx.cfg), Dirac(), [gl], gl, [xi],
                                           CONVERGENCE_KS, [1])
        rows.append([r[0] for r in rep.grid])
    return _convergence_rows(rows, CONVERGENCE_KS)


@_register("convergence", "thm-4.6-grid", "Th 4.6 / Cor 4.1",
           "(rho_k * g_m)(xi) -> (delta * g)(xi) over a (k, m) grid", 3, 1e-4)
def _conv_grid(ctx):
    g = gaussian(0.0, 1.0)
    gl = compose(SIN_ABS, regular(g, ctx.cfg))
    # positive samples where g'' > 0, so the mollifier and the 1/m^2 family push |f(xi)| the same way
    base = [make_bump(1.5, 0.6), make_bump(-1.4, 0.5, 0.8), scale(0.5, make_bump(2.0, 1.0))]
    B = [translate(base[i % 3], 0.05 * (i // 3)) for i in range(ctx.n)]
    rep = convolution_continuity_check(lambda k: mollifier(k, ctx.cfg), Dirac(),
                                       lambda m: compose(SIN_ABS, regular(scale(1 + 1 / m**2, g), ctx.cfg)), gl,
                                       B, GRID_KS)
    grid = np.array(rep.grid)
    idx = [i for i, k in enumerate(GRID_KS) if k >= 5]
    sub = grid[np.ix_(idx, idx)]
    mono = bool(np.all(np.diff(sub, axis=0) <= 1e-15 + 1e-9 * sub[:-1]) and
                np.all(np.diff(sub, axis=1) <= 1e-15 + 1e-9 * sub[:, :-1]))
    final = float(grid[-1, -1])
    return [(final if mono else 1.0, f"grid corner gap over B; monotone in k and m after 5: {mono}")]
