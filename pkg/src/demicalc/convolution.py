"""Convolution multipliers acting on test functions and on demi-distributions.

For a multiplier f0 (a compactly supported distribution),

    (f0 * xi)(x) = f0(xi(x + .)),      (f0 * f)(xi) = f(f0 * xi).

Three kinds are represented: the Dirac delta, its derivatives, and regular
multipliers given by a smooth compactly supported density g.  The regular
convolution keeps its defining integral as an expression node, so every
derivative of f0 * xi is exact: D^k (f0 * xi) = f0 * D^k xi.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .calculus import DiffOperator, derivative_functional
from .demidist import (
    DemiDistribution,
    SpanElement,
    apply,
    dirac,
    dirac_derivative,
    map_functional,
    precompose,
    regular,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .testfn import (
    COMPACT_UNION,
    Convolved,
    TestFunction,
    bump_mass,
    derivative,
    make_bump,
    make_test_function,
    scale,
)

KINDS = ("dirac", "dirac_derivative", "regular")


@dataclass(frozen=True, eq=False)
class ConvolutionMultiplier:
    """coef * delta, coef * D^k delta, or coef * (regular density g)."""

    kind: str
    k: int = 0
    density: TestFunction | None = None
    coef: complex = 1.0
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.kind == "regular":
            if self.density is None or not self.density.is_compact:
                raise ValueError("regular multipliers need a compactly supported density")
        if self.k < 0:
            raise ValueError("derivative order must be non-negative")

    @property
    def support_bound(self) -> tuple:
        if self.kind == "regular":
            return self.density.support
        return (0.0, 0.0)

    def scaled(self, t: complex) -> "ConvolutionMultiplier":
        return ConvolutionMultiplier(self.kind, self.k, self.density, t * self.coef, f"{t}*{self.label}")

    def derivative(self, k: int) -> "ConvolutionMultiplier":
        """D^k f0 as a multiplier; a regular density is differentiated directly."""
        if k == 0:
            return self
        if self.kind == "regular":
            return ConvolutionMultiplier("regular", 0, derivative(self.density, k), self.coef,
                                         f"D^{k} {self.label}")
        return ConvolutionMultiplier("dirac_derivative", self.k + k, None, self.coef, f"D^{self.k + k} delta")

    def as_functional(self) -> "DemiDistribution | SpanElement":
        """f0 as an ordinary (linear) functional."""
        if self.kind == "regular":
            base = regular(self.density)
        elif self.kind == "dirac_derivative" and self.k > 0:
            base = dirac_derivative(self.k)
        else:
            base = dirac()
        return base if self.coef == 1 else SpanElement(((self.coef, base),))

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "coef": [complex(self.coef).real, complex(self.coef).imag]}
        if self.kind == "dirac_derivative":
            out["k"] = self.k
        if self.kind == "regular":
            out["density"] = self.density.label
            out["support"] = list(self.density.support)
        return out


def Dirac() -> ConvolutionMultiplier:
    return ConvolutionMultiplier("dirac", label="delta")


def DiracDerivative(k: int) -> ConvolutionMultiplier:
    if k == 0:
        return Dirac()
    return ConvolutionMultiplier("dirac_derivative", k, label=f"D^{k} delta")


def CompactRegular(g: TestFunction) -> ConvolutionMultiplier:
    return ConvolutionMultiplier("regular", 0, g, label=g.label or "g")


def mollifier(k: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> ConvolutionMultiplier:
    """k * bump(0, 1/k) / I0: unit mass, support [-1/k, 1/k]."""
    g = scale(k / bump_mass(cfg), make_bump(0.0, 1.0 / k))
    return ConvolutionMultiplier("regular", 0, g, label=f"mollifier({k:g})")


def convolve_test(f0: ConvolutionMultiplier, xi: TestFunction) -> TestFunction:
    """x -> f0(xi(x + .))."""
    if f0.kind == "dirac":
        return scale(f0.coef, xi)
    if f0.kind == "dirac_derivative":
        return scale(f0.coef * (-1) ** f0.k, derivative(xi, f0.k))
    g = f0.density
    glo, ghi = g.support
    sup = None if xi.support is None else (xi.support[0] - ghi, xi.support[1] - glo)
    expr = Convolved(g.expr, g.support, xi.expr, xi.support)
    out = make_test_function(expr, sup, f"{f0.label}*{xi.label}")
    out = TestFunction(out.expr, out.support, out.label, xi.mean_zero)
    return scale(f0.coef, out)


def convolve_functional(f0: ConvolutionMultiplier, f):
    """(f0 * f)(xi) = f(f0 * xi); termwise over spans."""
    def build(g: DemiDistribution) -> DemiDistribution:
        space = g.space if g.space.kind == "schwartz" else COMPACT_UNION
        out = precompose(g, lambda xi: convolve_test(f0, xi), f"{f0.label}*", space=space,
                         descriptor={"kind": "convolution", "f0": f0.to_dict(), "f": g.label})
        return DemiDistribution(out.fn, out.class_tag, out.gamma, out.nbhd, out.space,
                                f"{f0.label}*{g.label}", out.descriptor, out.real_scalars, out.certified)

    return map_functional(f, build)


def _probe_points(xi: TestFunction, f0: ConvolutionMultiplier, n: int = 41) -> np.ndarray:
    if xi.support is None:
        return np.linspace(-3.0, 3.0, n)
    lo = xi.support[0] - f0.support_bound[1]
    hi = xi.support[1] - f0.support_bound[0]
    return np.linspace(lo, hi, n)


def scalar_compat_check(f0: ConvolutionMultiplier, f, t: complex, xi: TestFunction) -> dict:
    """Residuals of t(f0*xi) = (t f0)*xi, t(f0*f) = f0*(t f) and, for linear f, t(f0*f) = (t f0)*f."""
    xs = _probe_points(xi, f0)
    lhs = t * convolve_test(f0, xi)(xs)
    rhs = convolve_test(f0.scaled(t), xi)(xs)
    r_test = float(np.max(np.abs(lhs - rhs)))
    conv_f = convolve_functional(f0, f)
    tf = SpanElement(((t, f),)) if isinstance(f, DemiDistribution) else f * t
    r_fun = abs(t * apply(conv_f, xi) - apply(convolve_functional(f0, tf), xi))
    linear = all(g.class_tag == "Linear" for _, g in
                 (f.terms if isinstance(f, SpanElement) else ((1, f),)))
    r_lin = abs(t * apply(conv_f, xi) - apply(convolve_functional(f0.scaled(t), f), xi)) if linear else None
    return {"test_side": r_test, "functional_side": float(r_fun),
            "multiplier_side": None if r_lin is None else float(r_lin)}


def exchange_test_side(P: DiffOperator, f0: ConvolutionMultiplier, xi: TestFunction) -> float:
    """sup_x |(sum a_k D^k f0) * xi - sum a_k (-1)^k f0 * D^k xi|."""
    xs = _probe_points(xi, f0)
    left = np.zeros(xs.size, dtype=complex)
    right = np.zeros(xs.size, dtype=complex)
    for a, k in P.terms:
        left += a * convolve_test(f0.derivative(k), xi)(xs)
        right += a * (-1) ** k * convolve_test(f0, derivative(xi, k))(xs)
    return float(np.max(np.abs(left - right)))


def exchange_derivative_side(P: DiffOperator, f0: ConvolutionMultiplier, f, xi: TestFunction) -> float:
    """Worst of |D^k(f0*f) - (D^k f0)*f| and |D^k(f0*f) - f0*(D^k f)| over the orders in P."""
    conv = convolve_functional(f0, f)
    r = 0.0
    for _, k in P.terms:
        a = apply(derivative_functional(conv, k), xi)
        b = apply(convolve_functional(f0.derivative(k), f), xi)
        c = apply(convolve_functional(f0, derivative_functional(f, k)), xi)
        r = max(r, abs(a - b), abs(a - c))
    return float(r)


def exchange_operator_side(P: DiffOperator, f0: ConvolutionMultiplier, f, xi: TestFunction) -> float:
    """|P(D)(f0*f) - f0*(P(D) f)| at xi."""
    conv = convolve_functional(f0, f)
    return float(abs(apply(P.on_functional(conv), xi) - apply(convolve_functional(f0, P.on_functional(f)), xi)))


def diffop_exchange_check(P: DiffOperator, f0: ConvolutionMultiplier, f, xi: TestFunction) -> dict:
    """All three exchange residuals between P(D) and convolution at xi."""
    return {"test_side": exchange_test_side(P, f0, xi),
            "derivative_side": exchange_derivative_side(P, f0, f, xi),
            "operator_side": exchange_operator_side(P, f0, f, xi)}


@dataclass(frozen=True)
class ContinuityReport:
    ks: tuple
    ms: tuple
    grid: tuple  # grid[i][j] = sup_B |(f_k_i * g_m_j)(xi) - (f * g)(xi)|

    @property
    def diagonal(self) -> tuple:
        n = min(len(self.ks), len(self.ms))
        return tuple(self.grid[i][i] for i in range(n))

    def to_dict(self) -> dict:
        return {"ks": list(self.ks), "ms": list(self.ms), "grid": [list(r) for r in self.grid]}


def _resolve(seq, idx):
    return [seq(k) for k in idx] if callable(seq) else list(seq)


def convolution_continuity_check(f_seq, f_lim: ConvolutionMultiplier, g_seq, g_lim,
                                 B: Sequence[TestFunction], ks: Sequence[int], ms: Sequence[int] | None = None,
                                 diagonal_only: bool = False) -> ContinuityReport:
    """Tabulate sup over B of |(f_k * g_m)(xi) - (f * g)(xi)|.

    ``f_seq``/``g_seq`` are lists aligned with ``ks``/``ms`` or callables of
    the index.  All multipliers must share a bounded support region.
    With ``diagonal_only`` only the k = m entries are filled (others NaN).
    """
    ms = list(ms) if ms is not None else list(ks)
    fs = _resolve(f_seq, ks)
    gs = _resolve(g_seq, ms)
    bounds = [f.support_bound for f in fs] + [f_lim.support_bound]
    lo, hi = min(b[0] for b in bounds), max(b[1] for b in bounds)
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise ValueError("multipliers need a common bounded support")
    targets = [apply(convolve_functional(f_lim, g_lim), xi) for xi in B]
    grid = []
    for i, fk in enumerate(fs):
        row = []
        for j, gm in enumerate(gs):
            if diagonal_only and i != j:
                row.append(float("nan"))
                continue
            conv = convolve_functional(fk, gm)
            row.append(max(abs(apply(conv, xi) - v) for xi, v in zip(B, targets)))
        grid.append(tuple(row))
    return ContinuityReport(tuple(ks), tuple(ms), tuple(grid))
