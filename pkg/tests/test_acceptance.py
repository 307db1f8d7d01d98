"""Acceptance criteria 1-9, each at its stated tolerance with one summary line."""
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from demicalc.calculus import (
    derivative_functional,
    estimate_support,
    general_solution,
    invariance_check_E1,
    normalize,
    primitive_T,
    projection_A,
    solve_homogeneous,
    solve_inhomogeneous,
)
from demicalc.convolution import (
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
)
from demicalc.calculus import DiffOperator
from demicalc.demidist import (
    ABS,
    SIN,
    SIN_ABS,
    abs_regular,
    apply,
    check_demi_linearity,
    compose,
    dirac,
    exp_abs,
    random_test_function,
    random_triple,
    regular,
    sample_w_star_uniformity,
    sin_abs,
)
from demicalc.fourier import fourier_functional, fourier_test, null_identity_check, sine_of_mean
from demicalc.testfn import (
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
    scale,
)

from conftest import I0

XI0 = make_bump(0.0, 1.0)
KS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 30, 50, 70, 100)


def _rng(n):
    return np.random.default_rng(1000 + n)


def _compact(rng):
    return random_test_function(rng, COMPACT_UNION)


def _sup(a, b, xs):
    return float(np.max(np.abs(evaluate(a, xs) - evaluate(b, xs))))


def _monotone_after(ks, gaps, k0=5):
    tail = [g for k, g in zip(ks, gaps) if k >= k0]
    return all(b <= a for a, b in zip(tail, tail[1:]))


def test_criterion_1_demi_linearity_feasibility(acceptance_line):
    rng = _rng(1)
    fs = [abs_regular(1), sin_abs(), exp_abs(), compose(ABS, regular(gaussian(0.0, 1.0)))]
    start = time.perf_counter()
    worst, failures = 0.0, 0
    for f in fs:
        for _ in range(100):
            xi, eta, t = random_triple(f, rng)
            rep = check_demi_linearity(f, xi, eta, t, slack=1e-8)
            worst = max(worst, rep.lhs_gap - rep.bound)
            failures += not rep.feasible
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 60
    acceptance_line(1, ok, f"400 triples, {failures} infeasible, worst gap-bound {worst:.2e}, {elapsed:.1f}s (< 60s)")
    assert ok


def test_criterion_2_nonlinearity_exhibit(acceptance_line):
    f = solve_homogeneous(abs_regular(1), XI0)
    zero_side = abs(apply(f, XI0 - XI0))
    total = apply(f, XI0) + apply(f, scale(-1.0, XI0))
    ok = zero_side <= 1e-8 and abs(total - 2 * I0**2) <= 1e-8 and total.real > 0.3
    acceptance_line(2, ok, f"f(xi0-xi0)={zero_side:.1e}, f(xi0)+f(-xi0)={total.real:.15f} vs 2 I0^2={2 * I0**2:.15f}")
    assert ok


def test_criterion_3_ode_suite(acceptance_line):
    rng = _rng(3)
    zeta_n = normalize(make_bump(-0.2, 0.8))
    ys = [solve_homogeneous(abs_regular(1), XI0), solve_homogeneous(compose(SIN, dirac()), make_bump(0.3, 0.9))]
    r_a = 0.0
    for _ in range(20):
        a = projection_A(_compact(rng), zeta_n)
        a = TestFunction(a.expr, a.support, a.label)
        r_a = max(r_a, max(abs(apply(y, a)) for y in ys))

    f = abs_regular(1)
    sols = [solve_inhomogeneous(f, z) for z in (make_bump(0.1, 0.5), scale(2.0, make_bump(-0.4, 1.2)))]
    r_b = 0.0
    for _ in range(20):
        xi = _compact(rng)
        r_b = max(r_b, max(abs(apply(y, scale(-1.0, derivative(xi, 1))) - apply(f, xi)) for y in sols))

    r_c, pairs = 0.0, 0
    while pairs < 10:
        xi, eta = _compact(rng), _compact(rng)
        if min(abs(integrate(xi)), abs(integrate(eta))) < 0.05:
            continue
        r_c = max(r_c, invariance_check_E1(ys[0], xi, eta, normalize_inputs=True))
        pairs += 1

    g = general_solution(f, abs_regular(1), XI0, make_bump(0.1, 0.5))
    dg = derivative_functional(g, 1)
    r_d = max(abs(apply(dg, xi) - apply(f, xi)) for xi in (_compact(rng) for _ in range(10)))

    ok = r_a <= 1e-8 and r_b <= 1e-7 and r_c <= 1e-7 and r_d <= 1e-7
    acceptance_line(3, ok, f"(a) {r_a:.1e} <= 1e-8  (b) {r_b:.1e} <= 1e-7  (c) {r_c:.1e} <= 1e-7  (d) {r_d:.1e} <= 1e-7")
    assert ok


def test_criterion_4_operator_identities(acceptance_line):
    rng = _rng(4)
    zeta = normalize(make_bump(0.2, 0.6))
    r_mean = r_T = r_fix = 0.0
    for _ in range(20):
        xi = _compact(rng)
        a = projection_A(xi, zeta)
        r_mean = max(r_mean, abs(integrate(TestFunction(a.expr, a.support, a.label))))
        xs = np.linspace(*xi.support, 401)
        r_T = max(r_T, _sup(primitive_T(derivative(xi, 1), zeta), xi, xs))
        for k in (1, 2, 3):
            dk = derivative(xi, k)
            r_fix = max(r_fix, _sup(projection_A(dk, zeta), dk, xs))
    ok = r_mean <= 1e-9 and r_T <= 1e-7 and r_fix == 0.0
    acceptance_line(4, ok, f"int A(xi) {r_mean:.1e} <= 1e-9, T(xi') - xi {r_T:.1e} <= 1e-7, A(xi^(k)) - xi^(k) = {r_fix}")
    assert ok


def test_criterion_5_fourier_suite(acceptance_line):
    rng = _rng(5)
    builtins = [dirac(), abs_regular(1), exp_abs(), regular(gaussian(0.0, 1.0)), sine_of_mean()]
    sa = sin_abs()
    r_dual = 0.0
    for _ in range(20):
        xi = random_test_function(rng, SCHWARTZ)
        zeta = fourier_test(xi)
        r_dual = max(r_dual, max(abs(apply(fourier_functional(f), zeta) - 2 * math.pi * apply(f, xi))
                                 for f in builtins))
        xr = random_test_function(rng, CompactA(1.0), real=True)
        r_dual = max(r_dual, abs(apply(fourier_functional(sa), fourier_test(xr)) - 2 * math.pi * apply(sa, xr)))

    Ff = fourier_functional(sine_of_mean())
    r_closed = 0.0
    for _ in range(20):
        xi = random_test_function(rng, SCHWARTZ)
        ref = 2 * math.pi * np.sin(math.exp(-1) * integrate(xi))
        r_closed = max(r_closed, abs(apply(Ff, fourier_test(xi)) - ref))

    r_null = max(null_identity_check(Ff, fourier_test(random_test_function(rng, SCHWARTZ))) for _ in range(10))

    sig = np.linspace(-8.0, 8.0, 50)
    F = fourier_test(gaussian(0.0, math.sqrt(2.0)))
    r_gauss = float(np.max(np.abs(F(sig) - math.sqrt(2 * math.pi) * np.exp(-sig**2 / 2))))

    ok = r_dual <= 1e-6 and r_closed <= 1e-6 and r_null <= 1e-6 and r_gauss <= 1e-7
    acceptance_line(5, ok, f"duality {r_dual:.1e}, closed form {r_closed:.1e}, null {r_null:.1e} (<= 1e-6); "
                           f"gaussian {r_gauss:.1e} (<= 1e-7)")
    assert ok


def test_criterion_6_convolution_suite(acceptance_line):
    rng = _rng(6)
    f0 = CompactRegular(XI0)
    f = abs_regular(1)
    P = DiffOperator(((2.0, 0), (3.0, 2)))
    r_dirac = 0.0
    r41 = r43 = r42 = r_comp = 0.0
    inner = regular(gaussian(0.0, 1.0))
    left = convolve_functional(f0, compose(SIN_ABS, inner))
    right = compose(SIN_ABS, convolve_functional(f0, inner))
    for _ in range(10):
        xi = _compact(rng)
        xs = np.linspace(*xi.support, 201)
        r_dirac = max(r_dirac, _sup(convolve_test(Dirac(), xi), xi, xs))
        for k in (1, 2, 3):
            r_dirac = max(r_dirac, _sup(convolve_test(DiracDerivative(k), xi), scale((-1) ** k, derivative(xi, k)), xs))
        r41 = max(r41, exchange_test_side(P, f0, xi))
        r43 = max(r43, exchange_derivative_side(P, f0, f, xi))
        r42 = max(r42, exchange_operator_side(P, f0, f, xi))
        r_comp = max(r_comp, abs(apply(left, xi) - apply(right, xi)))
    ok = r_dirac == 0.0 and max(r41, r43, r42) <= 1e-8 and r_comp <= 1e-10
    acceptance_line(6, ok, f"delta identities {r_dirac}, exchange {r41:.1e}/{r43:.1e}/{r42:.1e} (<= 1e-8), "
                           f"composition {r_comp:.1e} (<= 1e-10)")
    assert ok


def test_criterion_7_convergence(acceptance_line):
    g = gaussian(0.0, 1.0)
    B = [make_bump(0.2, 0.8), make_bump(-0.3, 0.5, 0.8), scale(0.5, make_bump(0.5, 1.2))]
    results = {}

    lin = sample_w_star_uniformity([regular(scale(1 + 1 / k**2, g)) for k in KS], regular(g), B, ks=KS)
    results["linear"] = (lin.monotone_after(5, rtol=0.0), lin.gap_at(100))

    lim = compose(SIN_ABS, regular(g))
    sinf = sample_w_star_uniformity([compose(SIN_ABS, regular(scale(1 + 1 / k**2, g))) for k in KS], lim, B, ks=KS)
    results["sin"] = (sinf.monotone_after(5, rtol=0.0), sinf.gap_at(100))

    moll = convolution_continuity_check(lambda k: mollifier(k), Dirac(), [lim], lim, B, KS, [1])
    col = [r[0] for r in moll.grid]
    results["mollifier"] = (_monotone_after(KS, col), col[-1])

    grid_ks = (1, 2, 3, 5, 7, 10, 20, 50, 100)
    Bg = [make_bump(1.5, 0.6), make_bump(-1.4, 0.5, 0.8), scale(0.5, make_bump(2.0, 1.0))]
    rep = convolution_continuity_check(lambda k: mollifier(k), Dirac(),
                                       lambda m: compose(SIN_ABS, regular(scale(1 + 1 / m**2, g))), lim, Bg, grid_ks)
    grid = np.array(rep.grid)
    idx = [i for i, k in enumerate(grid_ks) if k >= 5]
    sub = grid[np.ix_(idx, idx)]
    mono = bool(np.all(np.diff(sub, axis=0) <= 0) and np.all(np.diff(sub, axis=1) <= 0))
    results["grid"] = (mono, float(grid[-1, -1]))

    ok = all(m and gap < 1e-4 for m, gap in results.values())
    detail = ", ".join(f"{name}: monotone={m} gap@100={gap:.1e}" for name, (m, gap) in results.items())
    acceptance_line(7, ok, detail)
    assert ok


def test_criterion_8_support_probing(acceptance_line):
    ivs = estimate_support(dirac(), (-1.0, 1.0), 0.05)
    ok_dirac = len(ivs) == 1 and ivs[0][0] <= 0 <= ivs[0][1] and ivs[0][1] - ivs[0][0] <= 0.5
    plateau = estimate_support(regular(make_plateau(2.0, 3.0, 0.2)), (0.0, 5.0), 0.05)
    ok_plateau = (any(a <= 2.0 and b >= 3.0 for a, b in plateau)
                  and all(a >= 1.5 and b <= 3.5 for a, b in plateau))
    ok = ok_dirac and ok_plateau
    acceptance_line(8, ok, f"supp delta ~ {ivs}, supp regular(plateau[2,3]) ~ {plateau}")
    assert ok


@pytest.mark.slow
def test_criterion_9_determinism(acceptance_line, tmp_path):
    reports = []
    for run in ("a", "b"):
        out = tmp_path / run
        proc = subprocess.run([sys.executable, "-m", "demicalc", "run", "--seed", "7", "--samples", "2",
                               "--jobs", "4", "--out", str(out)], capture_output=True, text=True)
        assert proc.returncode in (0, 1), proc.stderr
        reports.append(((out / "report.json").read_bytes(), (out / "residuals.csv").read_bytes()))
    ok = reports[0] == reports[1]
    acceptance_line(9, ok, f"two full runs (seed 7, 2 samples/check): report.json byte-identical={reports[0][0] == reports[1][0]}, "
                           f"residuals.csv identical={reports[0][1] == reports[1][1]}")
    assert ok
