"""Test functions on the real line as differentiable expression trees.

A :class:`TestFunction` pairs an expression (:class:`Expr`) with a space tag
and a support bound.  Every expression node knows its own derivative in closed
form, so ``derivative(xi, k)`` never differences numerically.  Compactly
supported functions are masked to exactly zero outside their support.

Constructors::

    make_bump(c, h)                 exp(1 / (((x-c)/h)^2 - 1)) on |x-c| < h
    gaussian(c, w)                  exp(-((x-c)/w)^2)
    hermite_gaussian(c, w, coeffs)  P((x-c)/w) exp(-((x-c)/w)^2)
    make_plateau(lo, hi, ramp)      smooth cutoff, 1 on [lo+ramp, hi-ramp]
    polynomial(coeffs), trig(...)   smooth multipliers (not test functions)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy import optimize

from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    gauss_legendre_panels,
    integrate_adaptive,
)

Interval = tuple[float, float]


# --------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class SpaceTag:
    """Which test-function space a function or functional lives on.

    ``kind`` is ``"compact_a"`` (support inside ``[-a, a]``),
    ``"compact_union"`` (any compact support) or ``"schwartz"``.
    """

    kind: str
    a: float | None = None

    def __post_init__(self):
        if self.kind not in ("compact_a", "compact_union", "schwartz"):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind == "compact_a" and not (self.a is not None and self.a > 0):
            raise ValueError("CompactA(a) requires a > 0")

    @property
    def compact(self) -> bool:
        return self.kind != "schwartz"

    def accepts(self, support: Interval | None) -> bool:
        if self.kind == "schwartz":
            return True
        if support is None:
            return False
        if self.kind == "compact_union":
            return True
        slack = 1e-12 * max(1.0, self.a)
        return support[0] >= -self.a - slack and support[1] <= self.a + slack

    def describe(self) -> str:
        if self.kind == "compact_a":
            return f"D_{self.a:g}"
        return "D" if self.kind == "compact_union" else "S"


def CompactA(a: float) -> SpaceTag:
    return SpaceTag("compact_a", float(a))


COMPACT_UNION = SpaceTag("compact_union")
SCHWARTZ = SpaceTag("schwartz")


def _space_for(support: Interval | None) -> SpaceTag:
    if support is None:
        return SCHWARTZ
    a = max(abs(support[0]), abs(support[1]))
    return CompactA(a) if a > 0 else COMPACT_UNION


def _hull(s1: Interval | None, s2: Interval | None) -> Interval | None:
    if s1 is None or s2 is None:
        return None
    return (min(s1[0], s2[0]), max(s1[1], s2[1]))


def _intersect(s1: Interval | None, s2: Interval | None) -> Interval | None:
    if s1 is None:
        return s2
    if s2 is None:
        return s1
    lo, hi = max(s1[0], s2[0]), min(s1[1], s2[1])
    if hi < lo:
        return (lo, lo)
    return (lo, hi)


# --------------------------------------------------------------------------
# expression nodes


class Expr:
    """Base expression node.  ``ev`` is unmasked and fully vectorised."""

    def ev(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def d(self, k: int = 1) -> "Expr":
        if k < 0:
            raise ValueError("derivative order must be non-negative")
        if k == 0:
            return self
        return self._d(k)

    def _d(self, k: int) -> "Expr":
        raise NotImplementedError

    def shift(self, x0: float) -> "Expr":
        """Expression for tau -> self(tau + x0)."""
        if x0 == 0:
            return self
        return Shift(self, x0)

    @property
    def is_zero(self) -> bool:
        return False


class Zero(Expr):
    def ev(self, x):
        return np.zeros(np.shape(x), dtype=complex)

    def _d(self, k):
        return self

    def shift(self, x0):
        return self

    @property
    def is_zero(self):
        return True


ZERO = Zero()


@dataclass(frozen=True, eq=False)
class Poly(Expr):
    """Polynomial in x with (possibly complex) coefficients, lowest degree first."""

    coeffs: tuple

    def ev(self, x):
        return np.polynomial.polynomial.polyval(x, np.asarray(self.coeffs, dtype=complex))

    def _d(self, k):
        c = np.polynomial.polynomial.polyder(np.asarray(self.coeffs, dtype=complex), k)
        if not np.any(c):
            return ZERO
        return Poly(tuple(c))

    def shift(self, x0):
        c = np.asarray(self.coeffs, dtype=complex)
        p = Polynomial(c)(Polynomial([x0, 1.0]))
        return Poly(tuple(np.asarray(p.coef, dtype=complex)))

    @property
    def is_zero(self):
        return not np.any(self.coeffs)


@dataclass(frozen=True, eq=False)
class Trig(Expr):
    """amp * cos(omega * x + phase)."""

    omega: float
    phase: float = 0.0
    amp: complex = 1.0

    def ev(self, x):
        return self.amp * np.cos(self.omega * np.asarray(x) + self.phase) + 0j

    def _d(self, k):
        if self.omega == 0:
            return ZERO
        return Trig(self.omega, self.phase + k * math.pi / 2, self.amp * self.omega**k)

    def shift(self, x0):
        return Trig(self.omega, self.phase + self.omega * x0, self.amp)


@dataclass(frozen=True, eq=False)
class Bump(Expr):
    """scale * P(u) * (u^2-1)^(-m) * exp(1/(u^2-1)) for |u| < 1, u = (x-c)/h.

    Closed under differentiation: only ``P``, ``m`` and ``scale`` change.
    """

    c: float
    h: float
    poly: tuple = (1.0,)
    m: int = 0
    scale: complex = 1.0

    def ev(self, x):
        x = np.asarray(x, dtype=float)
        u = (x - self.c) / self.h
        out = np.zeros(x.shape, dtype=complex)
        inside = np.abs(u) < 1
        if not inside.any():
            return out
        ui = u[inside]
        w = ui * ui - 1.0  # negative inside
        with np.errstate(under="ignore", over="ignore"):
            mag = np.exp(1.0 / w - self.m * np.log(-w))
        sign = -1.0 if self.m % 2 else 1.0
        out[inside] = self.scale * sign * np.polynomial.polynomial.polyval(ui, np.asarray(self.poly)) * mag
        return out

    def _d1(self) -> "Bump":
        p = Polynomial(self.poly)
        q = Polynomial([-1.0, 0.0, 1.0])  # u^2 - 1
        u = Polynomial([0.0, 1.0])
        new = p.deriv() * q * q - 2 * self.m * u * p * q - 2 * u * p
        return Bump(self.c, self.h, tuple(new.coef), self.m + 2, self.scale / self.h)

    def _d(self, k):
        node = self
        for _ in range(k):
            node = node._d1()
        return node

    def shift(self, x0):
        return Bump(self.c - x0, self.h, self.poly, self.m, self.scale)


@dataclass(frozen=True, eq=False)
class GaussPoly(Expr):
    """scale * P(u) * exp(-u^2), u = (x-c)/w."""

    c: float
    w: float
    poly: tuple = (1.0,)
    scale: complex = 1.0

    def ev(self, x):
        u = (np.asarray(x, dtype=float) - self.c) / self.w
        with np.errstate(under="ignore"):
            g = np.exp(-u * u)
        return self.scale * np.polynomial.polynomial.polyval(u, np.asarray(self.poly, dtype=complex)) * g

    def _d(self, k):
        p = Polynomial(np.asarray(self.poly, dtype=complex))
        u = Polynomial([0.0, 1.0])
        for _ in range(k):
            p = p.deriv() - 2 * u * p
        return GaussPoly(self.c, self.w, tuple(p.coef), self.scale / self.w**k)

    def shift(self, x0):
        return GaussPoly(self.c - x0, self.w, self.poly, self.scale)


@dataclass(frozen=True, eq=False)
class LinComb(Expr):
    terms: tuple  # ((coef, Expr), ...)

    def ev(self, x):
        out = np.zeros(np.shape(x), dtype=complex)
        for c, e in self.terms:
            out = out + c * e.ev(x)
        return out

    def _d(self, k):
        return lincomb([(c, e.d(k)) for c, e in self.terms])

    def shift(self, x0):
        return lincomb([(c, e.shift(x0)) for c, e in self.terms])


def lincomb(terms) -> Expr:
    flat = []
    for c, e in terms:
        if c == 0 or e.is_zero:
            continue
        if isinstance(e, LinComb):
            flat.extend((c * ci, ei) for ci, ei in e.terms)
        else:
            flat.append((c, e))
    if not flat:
        return ZERO
    if len(flat) == 1 and flat[0][0] == 1:
        return flat[0][1]
    return LinComb(tuple(flat))


@dataclass(frozen=True, eq=False)
class Product(Expr):
    a: Expr
    b: Expr

    def ev(self, x):
        return self.a.ev(x) * self.b.ev(x)

    def _d(self, k):
        return lincomb([
            (math.comb(k, j), product_expr(self.a.d(j), self.b.d(k - j))) for j in range(k + 1)
        ])

    def shift(self, x0):
        return product_expr(self.a.shift(x0), self.b.shift(x0))


def product_expr(a: Expr, b: Expr) -> Expr:
    if a.is_zero or b.is_zero:
        return ZERO
    return Product(a, b)


@dataclass(frozen=True, eq=False)
class Shift(Expr):
    child: Expr
    x0: float

    def ev(self, x):
        return self.child.ev(np.asarray(x, dtype=float) + self.x0)

    def _d(self, k):
        return Shift(self.child.d(k), self.x0)

    def shift(self, x0):
        return Shift(self.child, self.x0 + x0)


@dataclass(frozen=True, eq=False)
class Masked(Expr):
    """Child restricted to the closed interval ``[lo, hi]``; zero elsewhere."""

    child: Expr
    lo: float
    hi: float

    def ev(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        out = np.zeros(x.shape, dtype=complex)
        if inside.any():
            out[inside] = self.child.ev(x[inside])
        return out

    def _d(self, k):
        return masked(self.child.d(k), (self.lo, self.hi))

    def shift(self, x0):
        return masked(self.child.shift(x0), (self.lo - x0, self.hi - x0))

    @property
    def is_zero(self):
        return self.child.is_zero or self.hi <= self.lo


def masked(e: Expr, support: Interval | None) -> Expr:
    if support is None or e.is_zero:
        return e
    if isinstance(e, Masked):
        lo, hi = max(e.lo, support[0]), min(e.hi, support[1])
        return Masked(e.child, lo, hi)
    return Masked(e, float(support[0]), float(support[1]))


@dataclass(frozen=True, eq=False)
class Primitive(Expr):
    """x -> integral of ``integrand`` from ``lo`` to x.

    The integrand is stored, so derivatives of every order are exact.  Values
    come from cached per-panel adaptive integrals plus a Gauss-Legendre rule
    on the partial panel containing x.
    """

    integrand: Expr
    lo: float
    hi: float
    cfg: QuadratureConfig = field(default=DEFAULT_CONFIG)

    @cached_property
    def _panels(self):
        width = self.hi - self.lo
        n = max(64, int(math.ceil(width / 0.02)))
        edges = np.linspace(self.lo, self.hi, n + 1)
        tol = QuadratureConfig(
            abs_tol=self.cfg.abs_tol / n,
            rel_tol=self.cfg.rel_tol,
            max_subdivisions=self.cfg.max_subdivisions,
            initial_pieces=1,
        )
        vals = [integrate_adaptive(self.integrand.ev, l, r, tol)[0] for l, r in zip(edges[:-1], edges[1:])]
        cum = np.concatenate([[0j], np.cumsum(vals)])
        return edges, cum

    def ev(self, x):
        x = np.asarray(x, dtype=float)
        shape = x.shape
        x = x.ravel()
        edges, cum = self._panels
        out = np.zeros(x.shape, dtype=complex)
        out[x >= self.hi] = cum[-1]
        mid = (x > self.lo) & (x < self.hi)
        if mid.any():
            xm = x[mid]
            j = np.clip(np.searchsorted(edges, xm, side="right") - 1, 0, edges.size - 2)
            nodes, weights = gauss_legendre_panels(edges[j], xm, panels=1, order=24)
            part = (self.integrand.ev(nodes.ravel()).reshape(nodes.shape) * weights).sum(axis=1)
            out[mid] = cum[j] + part
        return out.reshape(shape)

    def _d(self, k):
        return self.integrand.d(k - 1)


@dataclass(frozen=True, eq=False)
class Convolved(Expr):
    """x -> integral of density(tau) * inner(x + tau) dtau.

    ``density`` is supported on ``dens_support``; ``inner_support`` (possibly
    None) restricts the tau range further.  Derivatives act on ``inner`` only.
    """

    density: Expr
    dens_support: Interval
    inner: Expr
    inner_support: Interval | None
    panels: int = 64
    order: int = 24

    def ev(self, x):
        x = np.asarray(x, dtype=float)
        shape = x.shape
        x = x.ravel()
        lo = np.full(x.shape, self.dens_support[0])
        hi = np.full(x.shape, self.dens_support[1])
        if self.inner_support is not None:
            lo = np.maximum(lo, self.inner_support[0] - x)
            hi = np.minimum(hi, self.inner_support[1] - x)
        out = np.zeros(x.shape, dtype=complex)
        live = hi > lo
        if live.any():
            tau, w = gauss_legendre_panels(lo[live], hi[live], self.panels, self.order)
            g = self.density.ev(tau.ravel()).reshape(tau.shape)
            f = self.inner.ev((x[live][:, None] + tau).ravel()).reshape(tau.shape)
            out[live] = (g * f * w).sum(axis=1)
        return out.reshape(shape)

    def _d(self, k):
        return Convolved(self.density, self.dens_support, self.inner.d(k), self.inner_support,
                         self.panels, self.order)


# --------------------------------------------------------------------------
# test functions and multipliers


def _as_array_result(x, values):
    if np.ndim(x) == 0:
        return complex(values.reshape(-1)[0])
    return values


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A smooth test function: expression, space tag and support bound.

    ``support`` is a closed interval for compactly supported functions and
    ``None`` for rapidly decreasing ones.  Instances are immutable; arithmetic
    operators build new expression trees.
    """

    __test__ = False  # keep pytest from collecting this class

    expr: Expr
    support: Interval | None
    label: str = ""
    mean_zero: bool = False  # structurally a derivative, so its integral is exactly 0

    @property
    def space(self) -> SpaceTag:
        return _space_for(self.support)

    @property
    def is_compact(self) -> bool:
        return self.support is not None

    def __call__(self, x):
        return evaluate(self, x)

    def derivative(self, k: int = 1) -> "TestFunction":
        return derivative(self, k)

    def translate(self, x0: float) -> "TestFunction":
        return translate(self, x0)

    def window(self, cfg: QuadratureConfig = DEFAULT_CONFIG) -> Interval:
        """Interval carrying all of the function's mass."""
        if self.support is not None:
            return self.support
        return self._effective_window(cfg.schwartz_truncation_radius)

    def _effective_window(self, radius: float) -> Interval:
        cache = self.__dict__.setdefault("_window_cache", {})
        if radius not in cache:
            cache[radius] = self._scan_window(radius)
        return cache[radius]

    def _scan_window(self, radius: float) -> Interval:
        grid = np.linspace(-radius, radius, 16001)
        mag = np.abs(self.expr.ev(grid))
        alive = np.nonzero(mag > 1e-300)[0]
        if alive.size == 0:
            return (0.0, 0.0)
        step = grid[1] - grid[0]
        lo = max(-radius, grid[alive[0]] - step)
        hi = min(radius, grid[alive[-1]] + step)
        return (float(lo), float(hi))

    def __add__(self, other):
        if isinstance(other, TestFunction):
            return combine(1.0, self, 1.0, other)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, TestFunction):
            return combine(1.0, self, -1.0, other)
        return NotImplemented

    def __neg__(self):
        return scale(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, (TestFunction, Multiplier)):
            return product(self, other)
        if np.isscalar(other):
            return scale(other, self)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return scale(1.0 / other, self)
        return NotImplemented

    def __repr__(self):
        sup = "R" if self.support is None else f"[{self.support[0]:.6g}, {self.support[1]:.6g}]"
        return f"TestFunction({self.label or 'expr'}, support={sup})"


@dataclass(frozen=True, eq=False)
class Multiplier:
    """A smooth function of at most polynomial growth used as a multiplier."""

    expr: Expr
    label: str = ""
    polynomial_growth: bool = True

    def __call__(self, x):
        return _as_array_result(x, self.expr.ev(np.atleast_1d(np.asarray(x, dtype=float))))

    def derivative(self, k: int = 1) -> "Multiplier":
        return Multiplier(self.expr.d(k), f"D^{k} {self.label}", self.polynomial_growth)

    @property
    def support(self):
        return None

    def __mul__(self, other):
        if isinstance(other, TestFunction):
            return product(other, self)
        return NotImplemented

    __rmul__ = __mul__


def make_test_function(expr: Expr, support: Interval | None, label: str = "") -> TestFunction:
    if support is not None:
        support = (float(support[0]), float(support[1]))
        expr = masked(expr, support)
    return TestFunction(expr, support, label)


def zero(label: str = "0") -> TestFunction:
    return TestFunction(ZERO, (0.0, 0.0), label, True)


def make_bump(c: float, h: float, amplitude: complex = 1.0) -> TestFunction:
    """Smooth bump centred at ``c`` with half-width ``h``."""
    if not h > 0:
        raise ValueError("bump half-width must be positive")
    return make_test_function(Bump(float(c), float(h), scale=amplitude), (c - h, c + h), f"bump({c:g},{h:g})")


def gaussian(c: float = 0.0, w: float = 1.0, amplitude: complex = 1.0) -> TestFunction:
    if not w > 0:
        raise ValueError("gaussian width must be positive")
    return TestFunction(GaussPoly(float(c), float(w), scale=amplitude), None, f"gauss({c:g},{w:g})")


def hermite_gaussian(c: float, w: float, coeffs: Sequence[complex]) -> TestFunction:
    """P((x-c)/w) * exp(-((x-c)/w)^2) with P given by ``coeffs`` (low degree first)."""
    if not w > 0:
        raise ValueError("gaussian width must be positive")
    return TestFunction(GaussPoly(float(c), float(w), tuple(complex(a) for a in coeffs)), None,
                        f"hgauss({c:g},{w:g})")


def polynomial(coeffs: Sequence[complex], label: str | None = None) -> Multiplier:
    return Multiplier(Poly(tuple(complex(a) for a in coeffs)), label or f"poly{tuple(coeffs)}")


def constant(c: complex) -> Multiplier:
    return polynomial([c], label=f"{c}")


def trig(omega: float, phase: float = 0.0, amp: complex = 1.0) -> Multiplier:
    """amp * cos(omega x + phase); use ``phase=-pi/2`` for a sine."""
    return Multiplier(Trig(float(omega), float(phase), amp), f"{amp}*cos({omega}x+{phase})", True)


@lru_cache(maxsize=None)
def bump_mass(cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Integral of the unit bump exp(1/(x^2-1)) over [-1, 1]."""
    return integrate(make_bump(0.0, 1.0), cfg).real


def make_plateau(lo: float, hi: float, ramp: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> TestFunction:
    """Smooth cutoff supported on ``[lo, hi]`` and equal to 1 on ``[lo+ramp, hi-ramp]``."""
    if not (ramp > 0 and hi - lo >= 2 * ramp):
        raise ValueError("need ramp > 0 and hi - lo >= 2*ramp")
    half = ramp / 2
    norm = 1.0 / (bump_mass(cfg) * half)
    up = Bump(lo + half, half, scale=norm)
    down = Bump(hi - half, half, scale=norm)
    expr = Primitive(lincomb([(1.0, up), (-1.0, down)]), float(lo), float(hi), cfg)
    return make_test_function(expr, (lo, hi), f"plateau[{lo:g},{hi:g}]")


def evaluate(xi: TestFunction, x):
    """Value(s) of ``xi`` at ``x``; scalars in, complex out."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    vals = xi.expr.ev(arr)
    if xi.support is not None:
        vals = np.where((arr >= xi.support[0]) & (arr <= xi.support[1]), vals, 0j)
    return _as_array_result(x, vals)


def derivative(xi: TestFunction, k: int = 1) -> TestFunction:
    if k < 0:
        raise ValueError("derivative order must be non-negative")
    if k == 0:
        return xi
    return TestFunction(masked(xi.expr.d(k), xi.support), xi.support, f"D^{k} {xi.label}", True)


def translate(xi: TestFunction, x0: float) -> TestFunction:
    """tau -> xi(x0 + tau)."""
    if x0 == 0:
        return xi
    sup = None if xi.support is None else (xi.support[0] - x0, xi.support[1] - x0)
    return TestFunction(xi.expr.shift(float(x0)), sup, f"{xi.label}(.+{x0:g})", xi.mean_zero)


def scale(a: complex, xi: TestFunction) -> TestFunction:
    if a == 1:
        return xi
    if a == 0:
        return zero()
    return TestFunction(lincomb([(a, xi.expr)]), xi.support, f"{a}*{xi.label}", xi.mean_zero)


def combine(a: complex, xi: TestFunction, b: complex, eta: TestFunction) -> TestFunction:
    """a*xi + b*eta."""
    terms = [(a, xi.expr), (b, eta.expr)]
    sup_terms = [s for c, s in ((a, xi.support), (b, eta.support)) if c != 0]
    if any(s is None for s in sup_terms):
        sup = None
    elif sup_terms:
        sup = (min(s[0] for s in sup_terms), max(s[1] for s in sup_terms))
    else:
        sup = (0.0, 0.0)
    mz = (a == 0 or xi.mean_zero) and (b == 0 or eta.mean_zero)
    return TestFunction(masked(lincomb(terms), sup), sup, f"({a})*{xi.label}+({b})*{eta.label}", mz)


def product(xi: TestFunction, other: "TestFunction | Multiplier") -> TestFunction:
    """Pointwise product; the result's support is the intersection."""
    sup = _intersect(xi.support, other.support)
    return TestFunction(masked(product_expr(xi.expr, other.expr), sup), sup,
                        f"{xi.label}*{other.label}")


def integrate(xi: TestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """Integral over the support (Schwartz functions over their truncated window)."""
    if xi.expr.is_zero:
        return 0j
    lo, hi = xi.window(cfg)
    if hi <= lo:
        return 0j
    return integrate_adaptive(xi.expr.ev, lo, hi, cfg)[0]


def seminorm(xi: TestFunction, p: int, cfg: QuadratureConfig = DEFAULT_CONFIG, grid: int = 4001) -> float:
    """p-th seminorm: sup of |D^q xi| (compact) or |x^k D^q xi| (Schwartz), q, k <= p.

    Dense sampling followed by a golden-section refinement around the best
    sampled point; heuristic, accurate to the grid's resolving power.
    """
    if p < 0:
        raise ValueError("seminorm order must be non-negative")
    if xi.expr.is_zero:
        return 0.0
    lo, hi = xi.window(cfg)
    if hi <= lo:
        return 0.0
    xs = np.linspace(lo, hi, grid)
    weights = [0] if xi.support is not None else list(range(p + 1))
    best, best_fn, best_i = -1.0, None, 0
    for q in range(p + 1):
        dq = xi.expr.d(q)
        vals = np.abs(dq.ev(xs))
        if xi.support is not None:
            vals = np.where((xs >= xi.support[0]) & (xs <= xi.support[1]), vals, 0.0)
        for k in weights:
            w = vals * np.abs(xs) ** k
            i = int(np.argmax(w))
            if w[i] > best:
                best, best_i = float(w[i]), i
                best_fn = (dq, k)
    dq, k = best_fn
    a, b = xs[max(best_i - 1, 0)], xs[min(best_i + 1, grid - 1)]
    if b > a:
        res = optimize.minimize_scalar(lambda t: -abs(dq.ev(np.array([t]))[0]) * abs(t) ** k,
                                       bounds=(a, b), method="bounded", options={"xatol": 1e-12})
        best = max(best, float(-res.fun))
    return best
