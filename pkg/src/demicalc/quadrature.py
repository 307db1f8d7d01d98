"""Vectorised quadrature rules shared by every module.

``integrate_adaptive`` is a globally adaptive Gauss-Kronrod (G10/K21) scheme
that evaluates every live subinterval in a single call to the integrand, so the
expression trees in :mod:`demicalc.testfn` are evaluated on whole arrays rather
than point by point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

ArrayFn = Callable[[np.ndarray], np.ndarray]

# Kronrod abscissae on [0, 1); the rule is symmetric.
_XK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
])
_WK_HALF = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
])
_WK_CENTER = 0.149445554002916905664936468389821
# Gauss weights attach to the odd-indexed Kronrod nodes above.
_WG_HALF = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XK, [0.0], _XK[::-1]])
WK = np.concatenate([_WK_HALF, [_WK_CENTER], _WK_HALF[::-1]])
WG = np.zeros(21)
WG[1:10:2] = _WG_HALF
WG[11:20:2] = _WG_HALF[::-1]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 4000
    schwartz_truncation_radius: float = 40.0
    initial_pieces: int = 8

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.schwartz_truncation_radius <= 0:
            raise ValueError("truncation radius must be positive")

    def to_dict(self) -> dict:
        return {
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
            "max_subdivisions": self.max_subdivisions,
            "schwartz_truncation_radius": self.schwartz_truncation_radius,
            "initial_pieces": self.initial_pieces,
        }


DEFAULT_CONFIG = QuadratureConfig()


class QuadratureError(RuntimeError):
    """Adaptive quadrature ran out of subdivisions.

    ``estimate`` and ``error`` carry the best value reached.
    """

    def __init__(self, message: str, estimate: complex, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


def _gk21(f: ArrayFn, lo: np.ndarray, hi: np.ndarray):
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = center[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=complex).reshape(x.shape)
    kron = (fx @ WK) * half
    gauss = (fx @ WG) * half
    resabs = (np.abs(fx) @ WK) * np.abs(half)
    mean = kron / np.where(half == 0, 1.0, half) * 0.5
    resasc = (np.abs(fx - mean[:, None]) @ WK) * np.abs(half)
    err = np.abs(kron - gauss)
    # QUADPACK-style rescaling of the raw Kronrod-Gauss difference.
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    floor = 50.0 * _EPS * resabs
    err = np.maximum(err, floor)
    return kron, err


def integrate_adaptive(
    f: ArrayFn,
    a: float,
    b: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    breakpoints=(),
) -> tuple[complex, float]:
    """Integrate ``f`` over ``[a, b]``; returns ``(value, error_estimate)``.

    ``f`` must accept a 1-d float array and return values of the same shape.
    Raises :class:`QuadratureError` when ``cfg.max_subdivisions`` is exceeded.
    """
    if b < a:
        value, err = integrate_adaptive(f, b, a, cfg, breakpoints)
        return -value, err
    if a == b:
        return 0j, 0.0
    edges = np.unique(np.clip(np.concatenate([[a, b], np.asarray(breakpoints, float)]), a, b))
    pieces = max(1, cfg.initial_pieces)
    lo = np.concatenate([np.linspace(l, r, pieces + 1)[:-1] for l, r in zip(edges[:-1], edges[1:])])
    hi = np.concatenate([np.linspace(l, r, pieces + 1)[1:] for l, r in zip(edges[:-1], edges[1:])])
    length = b - a
    done_val = 0j
    done_err = 0.0
    n_intervals = lo.size
    while True:
        vals, errs = _gk21(f, lo, hi)
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(done_val + vals.sum()))
        ok = errs <= tol * (hi - lo) / length
        done_val += vals[ok].sum()
        done_err += float(errs[ok].sum())
        if ok.all():
            return complex(done_val), done_err
        lo, hi = lo[~ok], hi[~ok]
        if n_intervals + lo.size > cfg.max_subdivisions:
            raise QuadratureError(
                f"no convergence within {cfg.max_subdivisions} subintervals",
                complex(done_val + vals[~ok].sum()),
                done_err + float(errs[~ok].sum()),
            )
        n_intervals += lo.size
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])


def gauss_legendre_panels(lo, hi, panels: int = 24, order: int = 16):
    """Composite Gauss-Legendre nodes/weights for a batch of intervals.

    ``lo`` and ``hi`` are arrays of shape ``(n,)``; the result has shape
    ``(n, panels * order)`` for both nodes and weights.
    """
    lo = np.atleast_1d(np.asarray(lo, float))
    hi = np.atleast_1d(np.asarray(hi, float))
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    s = (edges[:-1, None] + (edges[1:, None] - edges[:-1, None]) * (t[None, :] + 1) / 2).ravel()
    ws = np.tile(w / 2.0, panels) / panels
    span = (hi - lo)[:, None]
    return lo[:, None] + span * s[None, :], span * ws[None, :]
