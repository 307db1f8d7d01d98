"""Fourier transforms of test functions and of demi-distributions.

Conventions: F(xi)(sigma) = int xi(x) e^{i x sigma} dx, the inverse carries
(1/2pi) e^{-i x sigma}, and a functional transforms as

    F(f)(zeta) = 2pi f(F^{-1} zeta),   so   F(f)(F(xi)) = 2pi f(xi).

Both directions use the trapezoid rule.  For smooth integrands that are
negligible at the ends of the grid the rule is spectrally accurate: by
Poisson summation its only error is aliasing, F(sigma + 2pi m / dx) in the
forward direction and xi(x + 2pi m / dsigma) in the inverse, so step sizes are
chosen from the spectral radius and the spatial extent respectively.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .demidist import (
    DemiDistribution,
    apply,
    compose,
    dirac,
    SIN,
    map_functional,
)
from .calculus import solve_homogeneous
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, QuadratureError
from .testfn import (
    SCHWARTZ,
    Expr,
    TestFunction,
    combine,
    evaluate,
    make_bump,
    make_test_function,
    masked,
    product,
    polynomial,
    scale,
)

TWO_PI = 2.0 * math.pi
_DECAY_REL = 1e-13
_CHUNK = 4_000_000  # matrix entries per block


class FourierDecayError(QuadratureError):
    """A transform does not decay inside the declared or searched radius."""


def _trapezoid_transform(x: np.ndarray, wv: np.ndarray, sigma: np.ndarray, sign: float) -> np.ndarray:
    """sum_j wv_j exp(sign * i * x_j * sigma) for every sigma, in memory-bounded blocks."""
    sigma = np.asarray(sigma, dtype=float)
    flat = sigma.ravel()
    out = np.empty(flat.size, dtype=complex)
    step = max(1, _CHUNK // max(1, x.size))
    for i in range(0, flat.size, step):
        s = flat[i:i + step]
        out[i:i + step] = np.exp(sign * 1j * np.outer(s, x)) @ wv
    return out.reshape(sigma.shape)


def _fourier_window(xi: TestFunction, cfg: QuadratureConfig) -> tuple:
    """Where xi carries mass above 1e-18 of its peak (Schwartz) or its support."""
    if xi.support is not None:
        return xi.support
    cache = xi.__dict__.setdefault("_fourier_window_cache", {})
    r = cfg.schwartz_truncation_radius
    if r not in cache:
        grid = np.linspace(-r, r, 16001)
        mag = np.abs(xi.expr.ev(grid))
        peak = mag.max()
        if peak == 0:
            cache[r] = (0.0, 0.0)
        else:
            alive = np.nonzero(mag > 1e-18 * peak)[0]
            step = grid[1] - grid[0]
            cache[r] = (float(max(-r, grid[alive[0]] - step)), float(min(r, grid[alive[-1]] + step)))
    return cache[r]


def _scan_radius(fn: Callable[[np.ndarray], np.ndarray], width: float, cap: float,
                 block: int = 512) -> tuple[float, bool]:
    """Largest |sigma| <= cap where |fn| exceeds 1e-13 of its running peak.

    Returns ``(radius, decayed)``; ``decayed`` is False when the scan hit
    ``cap`` with the function still above threshold.
    """
    step = TWO_PI / (4.0 * max(width, 1e-3))
    peak = 0.0
    last = 0.0
    s = 0.0
    while s < cap:
        sig = s + step * np.arange(block)
        sig = sig[sig <= cap]
        vals = np.maximum(np.abs(fn(sig)), np.abs(fn(-sig)))
        peak = max(peak, float(vals.max()))
        above = np.nonzero(vals > _DECAY_REL * peak)[0]
        if above.size:
            last = float(sig[above[-1]])
        elif peak > 0:
            return last + step, True
        s = float(sig[-1]) + step
    return last + step, last + 2 * step < cap


def _source_grid(xi: TestFunction, dx_target: float, cfg: QuadratureConfig):
    lo, hi = _fourier_window(xi, cfg)
    n = max(64, int(math.ceil((hi - lo) / dx_target)))
    x = np.linspace(lo, hi, n + 1)
    w = np.full(x.size, (hi - lo) / n)
    w[0] = w[-1] = 0.5 * (hi - lo) / n
    return x, w * evaluate(xi, x)


def spectral_radius(xi: TestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG, cap: float = 64000.0) -> float:
    """Radius beyond which |F(xi)| stays below 1e-13 of its peak (cached on xi)."""
    cache = xi.__dict__.setdefault("_spectral_radius_cache", {})
    if cfg in cache:
        return cache[cfg]
    lo, hi = _fourier_window(xi, cfg)
    width = hi - lo
    s_cap = 64.0
    while True:
        x, wv = _source_grid(xi, TWO_PI / (2 * s_cap + 50.0), cfg)
        radius, decayed = _scan_radius(lambda s: _trapezoid_transform(x, wv, s, +1.0), width, s_cap)
        if decayed:
            break
        if s_cap >= cap:
            raise FourierDecayError(f"spectrum of {xi.label} does not decay below {cap}", radius, math.inf)
        s_cap *= 2
    cache[cfg] = radius
    return radius


@dataclass(frozen=True, eq=False)
class TransformFunction:
    """A function of sigma that is the Fourier transform of a test function.

    ``fn`` evaluates it on arrays.  ``support`` and ``window`` describe the
    spatial side (where the inverse transform lives); ``decay_radius`` bounds
    where |fn| is non-negligible.  ``source`` is kept for roundtrip metadata
    only: inversion always goes through ``fn`` numerically.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    support: tuple | None
    window: tuple
    decay_radius: float | None = None
    source: TestFunction | None = None
    label: str = ""
    cfg: QuadratureConfig = field(default=DEFAULT_CONFIG)

    def __call__(self, sigma):
        arr = np.atleast_1d(np.asarray(sigma, dtype=float))
        vals = self.fn(arr)
        return complex(vals.reshape(-1)[0]) if np.ndim(sigma) == 0 else vals

    @cached_property
    def radius(self) -> float:
        if self.decay_radius is not None:
            return self.decay_radius
        r, decayed = _scan_radius(self.fn, self.window[1] - self.window[0], 64000.0)
        if not decayed:
            raise FourierDecayError(f"{self.label} does not decay", r, math.inf)
        return r

    @property
    def is_compact(self) -> bool:
        return self.support is not None

    def _combine(self, a: complex, other: "TransformFunction", b: complex) -> "TransformFunction":
        fa, fb = self.fn, other.fn
        sup = None if (self.support is None or other.support is None) else (
            min(self.support[0], other.support[0]), max(self.support[1], other.support[1]))
        win = (min(self.window[0], other.window[0]), max(self.window[1], other.window[1]))
        dec = None if (self.decay_radius is None or other.decay_radius is None) else max(
            self.decay_radius, other.decay_radius)
        src = None
        if self.source is not None and other.source is not None:
            src = combine(a, self.source, b, other.source)
        return TransformFunction(lambda s: a * fa(s) + b * fb(s), sup, win, dec, src,
                                 f"({a}){self.label}+({b}){other.label}", self.cfg)

    def __add__(self, other):
        if isinstance(other, TransformFunction):
            return self._combine(1.0, other, 1.0)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, TransformFunction):
            return self._combine(1.0, other, -1.0)
        return NotImplemented

    def __mul__(self, c):
        if np.isscalar(c):
            f = self.fn
            src = None if self.source is None else scale(c, self.source)
            return TransformFunction(lambda s: c * f(s), self.support, self.window, self.decay_radius, src,
                                     f"{c}*{self.label}", self.cfg)
        return NotImplemented

    __rmul__ = __mul__

    def times_i_sigma(self) -> "TransformFunction":
        """sigma -> i sigma zeta(sigma), the transform of -zeta's inverse derivative."""
        f = self.fn
        # sigma^1 growth moves the 1e-13 cutoff out only slightly
        dec = None if self.decay_radius is None else 1.25 * self.decay_radius + 10.0
        return TransformFunction(lambda s: 1j * s * f(s), self.support, self.window, dec, None,
                                 f"i sigma {self.label}", self.cfg)

    def moment(self, k: int) -> "TransformFunction":
        """k-th sigma-derivative: the transform of (ix)^k xi, needs a source."""
        if self.source is None:
            raise ValueError("moments need a source test function")
        return fourier_test(scale(1j**k, product(self.source, polynomial([0] * k + [1]))), self.cfg)


def fourier_test(xi: TestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> TransformFunction:
    """sigma -> int xi(x) e^{i x sigma} dx by an aliasing-controlled trapezoid rule."""
    window = _fourier_window(xi, cfg)
    if xi.expr.is_zero or window[1] <= window[0]:
        return TransformFunction(lambda s: np.zeros(np.shape(s), dtype=complex), xi.support, (0.0, 0.0),
                                 0.0, xi, f"F({xi.label})", cfg)
    radius = spectral_radius(xi, cfg)

    def fn(sigma):
        sigma = np.asarray(sigma, dtype=float)
        smax = float(np.max(np.abs(sigma))) if sigma.size else 0.0
        x, wv = _source_grid(xi, TWO_PI / (smax + radius + 50.0), cfg)
        return _trapezoid_transform(x, wv, sigma, +1.0)

    return TransformFunction(fn, xi.support, window, radius, xi, f"F({xi.label})", cfg)


def transform_from_function(fn: Callable[[np.ndarray], np.ndarray], decay_radius: float,
                            spatial_radius: float = 40.0, label: str = "zeta",
                            cfg: QuadratureConfig = DEFAULT_CONFIG) -> TransformFunction:
    """Wrap a supplied transform-side function with a declared decay radius.

    Its inverse is taken to be a rapidly decreasing function living on
    [-spatial_radius, spatial_radius].
    """
    if not (decay_radius > 0 and spatial_radius > 0):
        raise ValueError("decay and spatial radii must be positive")
    return TransformFunction(lambda s: np.asarray(fn(np.asarray(s, dtype=float)), dtype=complex), None,
                             (-spatial_radius, spatial_radius), float(decay_radius), None, label, cfg)


@dataclass(frozen=True, eq=False)
class InverseFourier(Expr):
    """x -> sum_j c_j (-i sigma_j)^k e^{-i x sigma_j}: a trapezoid inverse transform."""

    sigma: np.ndarray
    coef: np.ndarray  # weights * zeta(sigma) / 2pi
    order: int = 0

    def ev(self, x):
        x = np.asarray(x, dtype=float)
        c = self.coef if self.order == 0 else self.coef * (-1j * self.sigma) ** self.order
        return _trapezoid_transform(self.sigma, c, x, -1.0)

    def _d(self, k):
        return InverseFourier(self.sigma, self.coef, self.order + k)

    @property
    def is_zero(self):
        return not np.any(self.coef)


def _check_decay(zeta: TransformFunction, radius: float) -> None:
    inner = np.linspace(-radius, radius, 257)
    outer = np.concatenate([np.linspace(radius, 1.2 * radius, 64), np.linspace(-1.2 * radius, -radius, 64)])
    peak = float(np.max(np.abs(zeta.fn(inner))))
    tail = float(np.max(np.abs(zeta.fn(outer))))
    if peak > 0 and tail > 1e-10 * peak:
        raise FourierDecayError(f"{zeta.label} is not negligible beyond |sigma| = {radius:g}", tail, tail)


def inverse_fourier_test(zeta: TransformFunction, cfg: QuadratureConfig | None = None) -> TestFunction:
    """x -> (1/2pi) int zeta(sigma) e^{-i x sigma} dsigma.

    The sigma step makes the aliasing period at least twice the spatial
    window, and the result inherits the spatial support of ``zeta``.
    """
    cfg = cfg or zeta.cfg
    radius = zeta.radius
    lo, hi = zeta.window
    if radius == 0 or hi <= lo:
        return make_test_function(InverseFourier(np.zeros(1), np.zeros(1, dtype=complex)),
                                  zeta.support if zeta.support is not None else (0.0, 0.0), f"F^-1({zeta.label})")
    if zeta.source is None:
        _check_decay(zeta, radius)
    period = 2.0 * (hi - lo) + 1.0
    if zeta.support is None:
        period = max(period, 4.0 * max(abs(lo), abs(hi)))
    dsig = TWO_PI / period
    n = int(math.ceil(radius / dsig))
    sigma = dsig * np.arange(-n, n + 1)
    coef = zeta.fn(sigma) * (dsig / TWO_PI)
    expr = InverseFourier(sigma, coef)
    if zeta.support is None:
        # the trapezoid inverse is periodic; keep one period around the window
        return TestFunction(masked(expr, (lo, hi)), None, f"F^-1({zeta.label})")
    return make_test_function(expr, zeta.support, f"F^-1({zeta.label})")


# --------------------------------------------------------------------------
# functionals


def fourier_functional(f):
    """F(f)(zeta) = 2pi f(F^{-1} zeta), acting on TransformFunction arguments.

    Class and gamma are unchanged; the neighborhood is pulled back through the
    inverse transform.
    """
    def build(g: DemiDistribution) -> DemiDistribution:
        def fn(zeta):
            if not isinstance(zeta, TransformFunction):
                raise ValueError("transformed functionals take TransformFunction arguments")
            return TWO_PI * apply(g, inverse_fourier_test(zeta))

        return DemiDistribution(fn, g.class_tag, g.gamma, g.nbhd.pullback(inverse_fourier_test, "F^-1"),
                                SCHWARTZ, f"F({g.label})", {"kind": "fourier", "f": g.label},
                                g.real_scalars, g.certified)

    return map_functional(f, build)


def sine_of_mean(cfg: QuadratureConfig = DEFAULT_CONFIG) -> DemiDistribution:
    """xi -> sin(e^{-1} int xi): the homogeneous solution built from sin(delta) and the unit bump."""
    return solve_homogeneous(compose(SIN, dirac()), make_bump(0.0, 1.0), cfg)


def null_identity_check(Ff, zeta: TransformFunction) -> float:
    """|F(f)(sigma -> i sigma zeta(sigma))|; vanishes when f' = 0."""
    return abs(apply(Ff, zeta.times_i_sigma()))


def delta_vs_transform_check(C: complex, xi: TestFunction, f: DemiDistribution | None = None,
                             cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[complex, complex]:
    """(C delta at F(xi), F(f) at F(xi)); f defaults to :func:`sine_of_mean`."""
    zeta = fourier_test(xi, cfg)
    f = f if f is not None else sine_of_mean(cfg)
    return C * zeta(0.0), apply(fourier_functional(f), zeta)
