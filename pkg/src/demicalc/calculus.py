"""Dual differentiation, multipliers and the first-order equations y' = 0 and y' = f.

Everything here is a precomposition ``xi -> f(M xi)`` with a linear map ``M``
on test functions, so the class and gamma of ``f`` carry over unchanged and
only the neighborhood is pulled back.

The two operators behind the solution formulas, for a fixed normalised zeta:

    A(xi)    = xi - (int xi) zeta
    T(xi)(x) = int_{-inf}^{x} A(xi)(tau) dtau

T(xi) is again compactly supported, its derivative is A(xi) exactly, and
T(xi') = xi.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .demidist import (
    DemiDistribution,
    ScalarMap,
    SpanElement,
    apply,
    compose,
    map_functional,
    precompose,
    random_test_function,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .testfn import (
    COMPACT_UNION,
    SCHWARTZ,
    Multiplier,
    Primitive,
    TestFunction,
    combine,
    constant,
    derivative,
    integrate,
    make_bump,
    make_test_function,
    product,
    scale,
    zero,
)


@dataclass(frozen=True)
class DiffOperator:
    """P(D) = sum_k a_k D^k as ``((a_k, k), ...)``."""

    terms: tuple

    def __post_init__(self):
        orders = [k for _, k in self.terms]
        if len(set(orders)) != len(orders):
            raise ValueError("orders in a DiffOperator must be distinct")
        if any(k < 0 for k in orders):
            raise ValueError("orders must be non-negative")

    def on_test(self, xi: TestFunction) -> TestFunction:
        out = zero()
        for a, k in self.terms:
            out = combine(1.0, out, a, derivative(xi, k))
        return out

    def on_functional(self, f) -> SpanElement:
        """sum_k a_k D^k f as a span."""
        terms = []
        for a, k in self.terms:
            dk = derivative_functional(f, k)
            if isinstance(dk, SpanElement):
                terms.extend((a * c, g) for c, g in dk.terms)
            else:
                terms.append((a, dk))
        return SpanElement(tuple(terms))

    def to_dict(self) -> list:
        return [{"coef": [complex(a).real, complex(a).imag], "order": k} for a, k in self.terms]


def derivative_functional(f, k: int):
    """(D^k f)(xi) = f((-1)^k xi^(k)); termwise over spans."""
    if k < 0:
        raise ValueError("order must be non-negative")
    if k == 0:
        return f
    sign = (-1) ** k

    def mapping(xi):
        return scale(sign, derivative(xi, k))

    def build(g):
        out = precompose(g, mapping, f"(-1)^{k} D^{k}", derivative_order=k,
                         descriptor={"kind": "derivative", "k": k, "f": g.label})
        return DemiDistribution(out.fn, out.class_tag, out.gamma, out.nbhd, out.space, f"D^{k} {g.label}",
                                out.descriptor, out.real_scalars, out.certified)

    return map_functional(f, build)


def compose_derivative_identity_check(h: ScalarMap, f: DemiDistribution, k: int,
                                      samples: Sequence[TestFunction] | None = None, seed: int = 0,
                                      n: int = 20) -> float:
    """max over samples of |D^k(h o f)(xi) - (h o D^k f)(xi)|."""
    if samples is None:
        rng = np.random.default_rng(seed)
        samples = [random_test_function(rng, f.space, f.real_scalars) for _ in range(n)]
    left = derivative_functional(compose(h, f), k)
    right = compose(h, derivative_functional(f, k))
    return max((abs(apply(left, xi) - apply(right, xi)) for xi in samples), default=0.0)


def multiply(zeta, f):
    """(zeta f)(xi) = f(zeta xi) for a test function or smooth multiplier zeta."""
    if np.isscalar(zeta):
        zeta = constant(zeta)
    if not isinstance(zeta, (TestFunction, Multiplier)):
        raise ValueError("multiplier must be a TestFunction or a Multiplier")

    def build(g):
        if isinstance(zeta, Multiplier) and g.space == SCHWARTZ and not zeta.polynomial_growth:
            raise ValueError("multipliers on S must have polynomial growth")
        space = g.space
        if isinstance(zeta, TestFunction) and zeta.is_compact and g.space.accepts(zeta.support):
            space = SCHWARTZ
        return precompose(g, lambda xi: product(xi, zeta), f"{zeta.label}*",
                          space=space, descriptor={"kind": "multiply", "zeta": zeta.label, "f": g.label})

    return map_functional(f, build)


def _check_normalized(zeta: TestFunction, cfg: QuadratureConfig, tol: float) -> None:
    if abs(integrate(zeta, cfg) - 1) > tol:
        raise ValueError("zeta must satisfy int zeta = 1; divide by its integral first")


def normalize(xi: TestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> TestFunction:
    """xi / int xi; rejects functions with (numerically) zero integral."""
    m = integrate(xi, cfg)
    if abs(m) <= 1e3 * cfg.abs_tol:
        raise ValueError("cannot normalise a function with zero integral")
    return scale(1.0 / m, xi)


def projection_A(xi: TestFunction, zeta: TestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG,
                 tol: float = 1e-8) -> TestFunction:
    """A(xi) = xi - (int xi) zeta.  Derivatives pass through unchanged."""
    _check_normalized(zeta, cfg, tol)
    if xi.mean_zero:
        return xi
    out = combine(1.0, xi, -integrate(xi, cfg), zeta)
    return TestFunction(out.expr, out.support, f"A({xi.label})", True)


def primitive_T(xi: TestFunction, zeta: TestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG,
                tol: float = 1e-8) -> TestFunction:
    """T(xi)(x) = int_{-inf}^x A(xi); compactly supported with T(xi)' = A(xi) exactly."""
    if not (xi.is_compact and zeta.is_compact):
        raise ValueError("primitive_T needs compactly supported xi and zeta")
    a = projection_A(xi, zeta, cfg, tol)
    if a.expr.is_zero:
        return zero()
    lo, hi = a.support
    return make_test_function(Primitive(a.expr, lo, hi, cfg), (lo, hi), f"T({xi.label})")


def solve_homogeneous(f0: DemiDistribution, xi0: TestFunction,
                      cfg: QuadratureConfig = DEFAULT_CONFIG) -> DemiDistribution:
    """y(xi) = f0((int xi) xi0), a solution of y' = 0."""
    if not f0.space.accepts(xi0.support):
        raise ValueError("xi0 is not in the domain of f0")

    def mapping(xi):
        return scale(integrate(xi, cfg), xi0)

    out = precompose(f0, mapping, f"(int .) {xi0.label}", space=SCHWARTZ,
                     descriptor={"kind": "homogeneous", "f0": f0.label, "xi0": xi0.label})
    return DemiDistribution(out.fn, out.class_tag, out.gamma, out.nbhd, out.space,
                            f"hom({f0.label}, {xi0.label})", out.descriptor, out.real_scalars, out.certified)


def solve_inhomogeneous(f, zeta: TestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """y_zeta(xi) = f(-T(xi)) with T built from zeta / int zeta; satisfies y' = f."""
    if not zeta.is_compact:
        raise ValueError("zeta must be compactly supported")
    m = integrate(zeta, cfg)
    if abs(m) <= 1e3 * cfg.abs_tol:
        raise ValueError("zeta must have nonzero integral")
    zn = scale(1.0 / m, zeta)

    def mapping(xi):
        return scale(-1.0, primitive_T(xi, zn, cfg))

    def build(g):
        space = g.space if g.space.kind == "compact_a" else COMPACT_UNION
        out = precompose(g, mapping, f"-T_{zeta.label}", space=space,
                         descriptor={"kind": "inhomogeneous", "f": g.label, "zeta": zeta.label})
        return DemiDistribution(out.fn, out.class_tag, out.gamma, out.nbhd, out.space,
                                f"y[{g.label}; {zeta.label}]", out.descriptor, out.real_scalars, out.certified)

    return map_functional(f, build)


def general_solution(f, f0: DemiDistribution, xi0: TestFunction, zeta: TestFunction,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> SpanElement:
    """g = hom(f0, xi0) + y_zeta, every solution shape of g' = f."""
    hom = solve_homogeneous(f0, xi0, cfg)
    inh = solve_inhomogeneous(f, zeta, cfg)
    inh_terms = inh.terms if isinstance(inh, SpanElement) else ((1.0, inh),)
    return SpanElement(((1.0, hom),) + tuple(inh_terms))


def invariance_check_E1(y, xi: TestFunction, eta: TestFunction, normalize_inputs: bool = False,
                        cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """|y(xi) - y(eta)| for xi, eta on the slice int = 1."""
    if normalize_inputs:
        xi, eta = normalize(xi, cfg), normalize(eta, cfg)
    return abs(apply(y, xi) - apply(y, eta))


DEFAULT_PROBE_SCALES = (0.5, 0.25, 0.125)


def estimate_support(f, window: tuple, resolution: float, probe_scales: Sequence[float] = DEFAULT_PROBE_SCALES,
                     tol: float = 1e-10) -> list:
    """Outer estimate of supp f by probing with bumps centred on a grid.

    A center counts as detected when |f(bump(c, h))| > tol.  Detections at the
    finest scale are kept; a coarser-scale detection is kept only if no finer
    scale detects anything within h of it (so wide probes cannot smear a point
    support).  Adjacent detected centers merge into closed intervals.
    Undetected regions are not certified to lie outside the support.
    """
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    lo, hi = window
    centers = np.arange(lo, hi + resolution / 2, resolution)
    space = f.space if isinstance(f, DemiDistribution) else SCHWARTZ
    scales = sorted(probe_scales)
    hits = {}
    for h in scales:
        found = np.zeros(centers.size, dtype=bool)
        for i, c in enumerate(centers):
            probe = make_bump(float(c), h)
            if isinstance(f, DemiDistribution) and not space.accepts(probe.support):
                continue
            found[i] = abs(apply(f, probe)) > tol
        hits[h] = found
    keep = hits[scales[0]].copy()
    finer = hits[scales[0]].copy()
    for h in scales[1:]:
        near = np.array([np.any(finer & (np.abs(centers - c) <= h)) for c in centers])
        keep |= hits[h] & ~near
        finer |= hits[h]
    intervals = []
    i = 0
    while i < centers.size:
        if keep[i]:
            j = i
            while j + 1 < centers.size and keep[j + 1]:
                j += 1
            intervals.append((float(centers[i]), float(centers[j])))
            i = j + 1
        else:
            i += 1
    return intervals
