"""Demi-linear functionals on test-function spaces.

A :class:`DemiDistribution` is a continuous map from test functions to complex
numbers, tagged with a class (``"L"``, ``"K"`` or ``"Linear"``), a control
function :class:`GammaFn` and a :class:`Neighborhood` of zero on which the
demi-linearity bound is asserted.

For the L class the bound reads, for eta in U and |t| <= 1,

    f(xi + t eta) = r f(xi) + s f(eta),   |r - 1| <= |gamma(t)|,  |s| <= |gamma(t)|

and the K class fixes r = 1.  The set of reachable right-hand sides is a disk
around f(xi), so feasibility reduces to one inequality (see
:func:`check_demi_linearity`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_adaptive
from .testfn import (
    SCHWARTZ,
    CompactA,
    Multiplier,
    SpaceTag,
    TestFunction,
    derivative,
    evaluate,
    gaussian,
    hermite_gaussian,
    make_bump,
    combine,
    polynomial,
    product,
    scale,
    seminorm,
)

CLASSES = ("L", "K", "Linear")


# --------------------------------------------------------------------------
# control functions


@dataclass(frozen=True, eq=False)
class GammaFn:
    """Control function gamma; only |gamma(t)| enters the bounds."""

    kind: str
    c: float | None = None
    outer: "GammaFn | None" = None
    inner: "GammaFn | None" = None
    fn: Callable[[complex], complex] | None = None
    label: str = ""

    def __call__(self, t):
        if self.kind == "identity":
            return t
        if self.kind == "linear":
            return self.c * t
        if self.kind == "sqrt":
            return np.sqrt(np.abs(t))
        if self.kind == "composite":
            return self.outer(self.inner(t))
        return self.fn(t)

    def magnitude(self, t) -> float:
        return float(np.abs(self(t)))

    def to_dict(self) -> dict:
        if self.kind == "linear":
            return {"kind": "linear", "c": self.c}
        if self.kind == "composite":
            return {"kind": "composite", "outer": self.outer.to_dict(), "inner": self.inner.to_dict()}
        if self.kind == "custom":
            return {"kind": "custom", "label": self.label}
        return {"kind": self.kind}

    def check_admissible(self, n: int = 2000, seed: int = 0) -> bool:
        """Sampled check that |t| <= |gamma(t)| on the unit disk and gamma(t) -> 0 at 0."""
        rng = np.random.default_rng(seed)
        r = np.sqrt(rng.uniform(0, 1, n))
        t = r * np.exp(2j * np.pi * rng.uniform(0, 1, n))
        mags = np.abs(np.array([self(ti) for ti in t]))
        dominates = bool(np.all(np.abs(t) <= mags * (1 + 1e-12) + 1e-15))
        small = np.array([self.magnitude(10.0**-j) for j in range(2, 12)])
        return dominates and bool(small[-1] < 1e-3) and abs(self(0.0)) == 0


def gamma_identity() -> GammaFn:
    return GammaFn("identity", label="t")


def gamma_linear(c: float) -> GammaFn:
    return GammaFn("linear", c=float(c), label=f"{c:g}t")


def gamma_sqrt() -> GammaFn:
    return GammaFn("sqrt", label="sqrt|t|")


def gamma_composite(outer: GammaFn, inner: GammaFn) -> GammaFn:
    if inner.kind == "identity":
        return outer
    if outer.kind == "identity":
        return inner
    if outer.kind == "linear" and inner.kind == "linear":
        return gamma_linear(outer.c * inner.c)
    return GammaFn("composite", outer=outer, inner=inner, label=f"({outer.label})o({inner.label})")


def gamma_custom(fn: Callable[[complex], complex], label: str) -> GammaFn:
    return GammaFn("custom", fn=fn, label=label)


# --------------------------------------------------------------------------
# neighborhoods


Premap = Callable[[TestFunction], TestFunction]


def _chain(outer: Premap | None, inner: Premap) -> Premap:
    if outer is None:
        return inner
    return lambda eta: outer(inner(eta))


@dataclass(frozen=True, eq=False)
class NbhdBall:
    """{eta : seminorm(pre(eta), p) < eps}; ``pre`` defaults to the identity."""

    p: int
    eps: float
    space: SpaceTag = SCHWARTZ
    pre: Premap | None = None
    pre_label: str = ""

    def __post_init__(self):
        if self.p < 0 or not self.eps > 0:
            raise ValueError("ball needs p >= 0 and eps > 0")

    def size(self, eta: TestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
        arg = eta if self.pre is None else self.pre(eta)
        return seminorm(arg, self.p, cfg)

    def contains(self, eta: TestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> bool:
        return math.isinf(self.eps) or self.size(eta, cfg) < self.eps

    def to_dict(self) -> dict:
        out = {"type": "ball", "p": self.p, "eps": self.eps, "space": self.space.describe()}
        if self.pre_label:
            out["argument"] = self.pre_label
        return out


@dataclass(frozen=True, eq=False)
class FunctionalBound:
    """{eta : |g(pre(eta))| < eps} for a continuous functional g."""

    functional: "DemiDistribution"
    eps: float
    pre: Premap | None = None
    pre_label: str = ""

    def size(self, eta, cfg=DEFAULT_CONFIG) -> float:
        arg = eta if self.pre is None else self.pre(eta)
        return abs(apply(self.functional, arg))

    def contains(self, eta, cfg=DEFAULT_CONFIG) -> bool:
        return self.size(eta, cfg) < self.eps

    def to_dict(self) -> dict:
        out = {"type": "bound", "functional": self.functional.label, "eps": self.eps}
        if self.pre_label:
            out["argument"] = self.pre_label
        return out


@dataclass(frozen=True, eq=False)
class Neighborhood:
    """Intersection of seminorm balls and functional bounds; empty means everything."""

    balls: tuple = ()
    bounds: tuple = ()

    @property
    def is_whole_space(self) -> bool:
        return not self.balls and not self.bounds

    def contains(self, eta: TestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> bool:
        return all(b.contains(eta, cfg) for b in self.balls) and all(b.contains(eta, cfg) for b in self.bounds)

    def intersect(self, other: "Neighborhood") -> "Neighborhood":
        return Neighborhood(self.balls + other.balls, self.bounds + other.bounds)

    def pullback(self, mapping: Premap, label: str, derivative_order: int | None = None) -> "Neighborhood":
        """Neighborhood of eta such that ``mapping(eta)`` lies in self.

        When ``mapping`` is +-D^k, plain balls are widened to order p + k, which
        is the standard shift of seminorm index under differentiation.
        """
        balls = []
        for b in self.balls:
            if derivative_order is not None and b.pre is None:
                balls.append(NbhdBall(b.p + derivative_order, b.eps, b.space))
            else:
                balls.append(NbhdBall(b.p, b.eps, b.space, _chain(b.pre, mapping),
                                      _join_labels(b.pre_label, label)))
        bounds = [FunctionalBound(b.functional, b.eps, _chain(b.pre, mapping), _join_labels(b.pre_label, label))
                  for b in self.bounds]
        return Neighborhood(tuple(balls), tuple(bounds))

    def rescale_into(self, eta: TestFunction, cfg: QuadratureConfig = DEFAULT_CONFIG,
                     factor: float = 0.9, max_halvings: int = 60) -> TestFunction:
        """Scale ``eta`` by 0.9*eps/size for the tightest ball, then halve until inside."""
        if self.is_whole_space:
            return eta
        ratios = [factor * b.eps / s for b in self.balls + self.bounds
                  if not math.isinf(b.eps) and (s := b.size(eta, cfg)) > 0]
        lam = min(ratios, default=1.0)
        out = _scaled(lam, eta)
        for _ in range(max_halvings):
            if self.contains(out, cfg):
                return out
            lam /= 2
            out = _scaled(lam, eta)
        raise RuntimeError("could not rescale sample into the neighborhood")

    def to_dict(self) -> list:
        return [b.to_dict() for b in self.balls] + [b.to_dict() for b in self.bounds]


def _scaled(a: complex, arg):
    """a * arg for test functions and transform-side arguments alike."""
    return scale(a, arg) if isinstance(arg, TestFunction) else a * arg


def _axpy(xi, t: complex, eta):
    return combine(1.0, xi, t, eta) if isinstance(xi, TestFunction) else xi + t * eta


def _join_labels(outer: str, inner: str) -> str:
    return inner if not outer else f"{outer} o {inner}"


WHOLE_SPACE = Neighborhood()


# --------------------------------------------------------------------------
# functionals


@dataclass(frozen=True, eq=False)
class DemiDistribution:
    """A continuous demi-linear functional.

    ``real_scalars`` marks functionals whose bound is only asserted for real
    arguments and real t.  ``certified`` is False when the class parameters
    are a conservative guess rather than a proven composition rule.
    """

    fn: Callable[[TestFunction], complex]
    class_tag: str
    gamma: GammaFn
    nbhd: Neighborhood
    space: SpaceTag
    label: str
    descriptor: dict = field(default_factory=dict)
    real_scalars: bool = False
    certified: bool = True

    def __post_init__(self):
        if self.class_tag not in CLASSES:
            raise ValueError(f"class_tag must be one of {CLASSES}")

    def __call__(self, xi: TestFunction) -> complex:
        return apply(self, xi)

    def __add__(self, other):
        return SpanElement(((1.0, self),)) + other

    def __mul__(self, c):
        if np.isscalar(c):
            return SpanElement(((c, self),))
        return NotImplemented

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "kind": self.descriptor.get("kind", "custom"),
            "parameters": {k: v for k, v in self.descriptor.items() if k != "kind"},
            "class": self.class_tag,
            "gamma": self.gamma.to_dict(),
            "nbhd": self.nbhd.to_dict(),
            "space": self.space.describe(),
        }


@dataclass(frozen=True)
class SpanElement:
    """Finite combination sum_k c_k f_k of demi-distributions."""

    terms: tuple  # ((coef, DemiDistribution), ...)

    def __call__(self, xi: TestFunction) -> complex:
        return apply(self, xi)

    def __add__(self, other):
        if isinstance(other, DemiDistribution):
            other = SpanElement(((1.0, other),))
        if isinstance(other, SpanElement):
            return SpanElement(self.terms + other.terms)
        return NotImplemented

    def __mul__(self, c):
        if np.isscalar(c):
            return SpanElement(tuple((c * a, f) for a, f in self.terms))
        return NotImplemented

    __rmul__ = __mul__

    @property
    def label(self) -> str:
        return " + ".join(f"({a})*{f.label}" for a, f in self.terms)


def apply(f: "DemiDistribution | SpanElement", xi: TestFunction) -> complex:
    """Evaluate a functional (or a span of functionals) at ``xi``."""
    if isinstance(f, SpanElement):
        return complex(sum(a * apply(g, xi) for a, g in f.terms))
    if not f.space.accepts(xi.support):
        raise ValueError(f"{xi!r} is not in the domain {f.space.describe()} of {f.label}")
    return complex(f.fn(xi))


def precompose(f: DemiDistribution, mapping: Premap, label: str, *, space: SpaceTag | None = None,
               derivative_order: int | None = None, descriptor: dict | None = None,
               nbhd: Neighborhood | None = None) -> DemiDistribution:
    """xi -> f(mapping(xi)) for a linear ``mapping``; class and gamma carry over."""
    def fn(xi):
        return apply(f, mapping(xi))
    return DemiDistribution(
        fn, f.class_tag, f.gamma,
        nbhd if nbhd is not None else f.nbhd.pullback(mapping, label, derivative_order),
        space if space is not None else f.space,
        f"{f.label}[{label}]",
        descriptor if descriptor is not None else {"kind": "precomposed", "inner": f.label, "map": label},
        f.real_scalars, f.certified,
    )


def map_functional(f, build: Callable[[DemiDistribution], DemiDistribution]):
    """Apply a functional-level constructor to f, or termwise over a span."""
    if isinstance(f, SpanElement):
        return SpanElement(tuple((a, build(g)) for a, g in f.terms))
    return build(f)


# --------------------------------------------------------------------------
# densities and the classical embedding


@dataclass(frozen=True, eq=False)
class Density:
    """A locally integrable function given by a vectorised callable.

    ``support`` bounds where it may be nonzero; ``breakpoints`` mark kinks or
    jumps that quadrature should respect.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    support: tuple | None = None
    breakpoints: tuple = ()
    label: str = "g"
    polynomial_growth: bool = True

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=complex)


def indicator(lo: float, hi: float) -> Density:
    return Density(lambda x: ((x >= lo) & (x <= hi)).astype(float), (lo, hi), (lo, hi), f"1[{lo:g},{hi:g}]")


def _as_density(g) -> Density:
    if isinstance(g, Density):
        return g
    if isinstance(g, TestFunction):
        return Density(lambda x, g=g: evaluate(g, x), g.support, (), g.label or "g")
    if isinstance(g, Multiplier):
        return Density(g.expr.ev, None, (), g.label, g.polynomial_growth)
    if np.isscalar(g):
        c = complex(g)
        return Density(lambda x: np.full(np.shape(x), c), None, (), f"{g}")
    if callable(g):
        return Density(g, None, (), getattr(g, "__name__", "g"), False)
    raise TypeError(f"cannot interpret {g!r} as a density")


def _is_zero_density(g) -> bool:
    return np.isscalar(g) and g == 0


def _pair_integral(integrand, xi: TestFunction, dens: Density, cfg: QuadratureConfig) -> complex:
    lo, hi = xi.window(cfg)
    if dens.support is not None:
        lo, hi = max(lo, dens.support[0]), min(hi, dens.support[1])
    if hi <= lo:
        return 0j
    return integrate_adaptive(integrand, lo, hi, cfg, breakpoints=dens.breakpoints)[0]


def _density_space(dens: Density) -> SpaceTag:
    if dens.support is not None or dens.polynomial_growth:
        return SCHWARTZ
    from .testfn import COMPACT_UNION
    return COMPACT_UNION


def regular(g, cfg: QuadratureConfig = DEFAULT_CONFIG) -> DemiDistribution:
    """xi -> integral of g(x) xi(x); the classical embedding of a function."""
    if _is_zero_density(g):
        return DemiDistribution(lambda xi: 0j, "Linear", gamma_identity(), WHOLE_SPACE, SCHWARTZ,
                                "regular(0)", {"kind": "regular", "g": "0"})
    dens = _as_density(g)

    def fn(xi):
        return _pair_integral(lambda x: dens(x) * evaluate(xi, x), xi, dens, cfg)

    return DemiDistribution(fn, "Linear", gamma_identity(), WHOLE_SPACE, _density_space(dens),
                            f"regular({dens.label})", {"kind": "regular", "g": dens.label})


def abs_regular(g, cfg: QuadratureConfig = DEFAULT_CONFIG) -> DemiDistribution:
    """xi -> integral of |g(x) xi(x)|: K class with gamma(t) = t on the whole space."""
    if _is_zero_density(g):
        return DemiDistribution(lambda xi: 0j, "K", gamma_identity(), WHOLE_SPACE, SCHWARTZ,
                                "[0]", {"kind": "abs_regular", "g": "0"})
    dens = _as_density(g)

    def fn(xi):
        return _pair_integral(lambda x: np.abs(dens(x) * evaluate(xi, x)) + 0j, xi, dens, cfg)

    return DemiDistribution(fn, "K", gamma_identity(), WHOLE_SPACE, _density_space(dens),
                            f"[{dens.label}]", {"kind": "abs_regular", "g": dens.label})


def sin_abs(cfg: QuadratureConfig = DEFAULT_CONFIG) -> DemiDistribution:
    """xi -> integral over [-1, 1] of |sin xi(x)| on functions supported in [-1, 1].

    K class with gamma(t) = (pi/2) t for real t and real xi, eta with max|eta| < 1.
    """
    space = CompactA(1.0)

    def fn(xi):
        lo, hi = xi.window(cfg)
        if hi <= lo:
            return 0j
        return integrate_adaptive(lambda x: np.abs(np.sin(evaluate(xi, x))) + 0j, lo, hi, cfg)[0]

    nbhd = Neighborhood((NbhdBall(0, 1.0, space),))
    return DemiDistribution(fn, "K", gamma_linear(math.pi / 2), nbhd, space, "sin_abs",
                            {"kind": "sin_abs"}, real_scalars=True)


def exp_abs(cfg: QuadratureConfig = DEFAULT_CONFIG) -> DemiDistribution:
    """xi -> i * integral over [-1, 1] of (exp|xi(x)| - 1): L class, gamma(t) = e t, sup|eta| < 1."""

    def fn(xi):
        return 1j * integrate_adaptive(lambda x: np.expm1(np.abs(evaluate(xi, x))) + 0j, -1.0, 1.0, cfg)[0]

    nbhd = Neighborhood((NbhdBall(0, 1.0, SCHWARTZ),))
    return DemiDistribution(fn, "L", gamma_linear(math.e), nbhd, SCHWARTZ, "exp_abs", {"kind": "exp_abs"})


def dirac() -> DemiDistribution:
    return DemiDistribution(lambda xi: evaluate(xi, 0.0), "Linear", gamma_identity(), WHOLE_SPACE, SCHWARTZ,
                            "delta", {"kind": "dirac"})


def dirac_derivative(k: int) -> DemiDistribution:
    """xi -> (-1)^k xi^(k)(0)."""
    if k < 0:
        raise ValueError("order must be non-negative")
    if k == 0:
        return dirac()
    sign = (-1) ** k
    return DemiDistribution(lambda xi: sign * evaluate(derivative(xi, k), 0.0), "Linear", gamma_identity(),
                            WHOLE_SPACE, SCHWARTZ, f"D^{k} delta", {"kind": "dirac_derivative", "k": k})


def zero_functional() -> DemiDistribution:
    return regular(0)


# --------------------------------------------------------------------------
# scalar maps and composition


@dataclass(frozen=True, eq=False)
class ScalarMap:
    """A scalar demi-linear function h with class, gamma and validity radius eps.

    The bound h(z + t w) = r h(z) + s h(w) is asserted for |w| < eps, |t| <= 1.
    """

    fn: Callable[[complex], complex]
    class_tag: str
    gamma: GammaFn
    eps: float
    label: str
    real: bool = False

    def __call__(self, z):
        return self.fn(z)


ABS = ScalarMap(lambda z: abs(z) + 0j, "K", gamma_identity(), math.inf, "|z|")
SIN_ABS = ScalarMap(lambda z: complex(math.sin(abs(z))), "K", gamma_linear(math.pi / 2), 1.0, "sin|z|", real=True)
EXP_ABS_MINUS_ONE = ScalarMap(lambda z: complex(math.expm1(abs(z))), "L", gamma_linear(math.e**2), 1.0, "e^|z|-1")
SIN = ScalarMap(lambda z: complex(np.sin(z)), "K", gamma_linear(math.pi / 2), 1.0, "sin z", real=True)

BUILTIN_MAPS = {"abs": ABS, "sin_abs": SIN_ABS, "exp_abs_minus_one": EXP_ABS_MINUS_ONE, "sin": SIN}


def scalar_map(fn, class_tag: str, gamma: GammaFn, eps: float, label: str, real: bool = False) -> ScalarMap:
    """User hook: declare a scalar demi-linear map with its constants."""
    if class_tag not in ("L", "K"):
        raise ValueError("scalar maps are L or K class")
    return ScalarMap(fn, class_tag, gamma, float(eps), label, real)


def compose(h: ScalarMap, f: DemiDistribution) -> DemiDistribution:
    """xi -> h(f(xi)).

    Class rules: a linear f passes h's class and gamma through; a K-class f
    yields h's class with gamma_h o gamma_f; |z| after an L-class f stays L
    with gamma_f.  Other L-class inner maps get L with gamma_h o gamma_f and
    ``certified=False``.  The neighborhood gains the bound |f(eta)| < eps_h.
    """
    certified = f.certified
    if f.class_tag == "Linear":
        cls, gamma = h.class_tag, h.gamma
    elif f.class_tag == "K":
        cls, gamma = h.class_tag, gamma_composite(h.gamma, f.gamma)
    elif h is ABS:
        cls, gamma = "L", f.gamma
    else:
        cls, gamma = "L", gamma_composite(h.gamma, f.gamma)
        certified = False
    nbhd = f.nbhd
    if not math.isinf(h.eps):
        nbhd = nbhd.intersect(Neighborhood((), (FunctionalBound(f, h.eps),)))
    return DemiDistribution(
        lambda xi: h(apply(f, xi)), cls, gamma, nbhd, f.space, f"{h.label} o {f.label}",
        {"kind": "compose", "h": h.label, "f": f.label},
        real_scalars=f.real_scalars or h.real, certified=certified,
    )


# --------------------------------------------------------------------------
# the feasibility check


@dataclass(frozen=True)
class WitnessReport:
    lhs_gap: float
    bound: float
    feasible: bool
    class_used: str
    sample: tuple
    witness: tuple  # one admissible (r, s) pair, or None when infeasible

    def to_dict(self) -> dict:
        return {"lhs_gap": self.lhs_gap, "bound": self.bound, "feasible": self.feasible,
                "class_used": self.class_used, "sample": list(self.sample)}


def _witness(fx: complex, fe: complex, target: complex, radius_g: float, cls: str):
    """An explicit (r, s) with r fx + s fe = target inside the allowed disks."""
    delta = target - fx
    if cls == "K":
        if delta == 0:
            return (1.0, 0.0)
        return (1.0, delta / fe) if fe != 0 else None
    denom = abs(fx) + abs(fe)
    if denom == 0:
        return (1.0, 0.0) if delta == 0 else None
    lam = delta / denom
    r = 1 + lam * (np.conj(fx) / abs(fx) if fx != 0 else 0)
    s = lam * (np.conj(fe) / abs(fe) if fe != 0 else 0)
    return (complex(r), complex(s))


def check_demi_linearity(f: DemiDistribution, xi: TestFunction, eta: TestFunction, t: complex,
                         cls: str | None = None, *, slack: float | None = None,
                         cfg: QuadratureConfig = DEFAULT_CONFIG, check_membership: bool = True) -> WitnessReport:
    """Test the class inequality at one triple (xi, eta, t).

    L:  |f(xi + t eta) - f(xi)| <= |gamma(t)| (|f(xi)| + |f(eta)|) + slack
    K:  |f(xi + t eta) - f(xi)| <= |gamma(t)| |f(eta)| + slack

    Raises ``ValueError`` when eta is outside f's neighborhood or |t| > 1.
    """
    if cls is None:
        cls = "K" if f.class_tag in ("K", "Linear") else "L"
    if cls not in ("L", "K"):
        raise ValueError("cls must be 'L' or 'K'")
    if abs(t) > 1 + 1e-15:
        raise ValueError("demi-linearity is only asserted for |t| <= 1")
    if f.real_scalars and np.iscomplexobj(t) and np.imag(t) != 0:
        raise ValueError(f"{f.label} is only demi-linear for real t")
    if check_membership and not f.nbhd.contains(eta, cfg):
        raise ValueError("eta lies outside the functional's neighborhood")
    if slack is None:
        slack = 10 * cfg.abs_tol
    fx = apply(f, xi)
    fe = apply(f, eta)
    fxt = apply(f, _axpy(xi, t, eta))
    g = f.gamma.magnitude(t)
    gap = abs(fxt - fx)
    bound = g * (abs(fx) + abs(fe)) if cls == "L" else g * abs(fe)
    feasible = gap <= bound + slack
    wit = _witness(fx, fe, fxt, g, cls) if feasible else None
    return WitnessReport(float(gap), float(bound), bool(feasible), cls, (xi.label, eta.label, str(t)), wit)


# --------------------------------------------------------------------------
# sequences


@dataclass(frozen=True)
class ConvergenceReport:
    ks: tuple
    gaps: tuple

    def monotone_after(self, k0: int, rtol: float = 1e-12) -> bool:
        tail = [g for k, g in zip(self.ks, self.gaps) if k >= k0]
        return all(b <= a * (1 + rtol) + 1e-15 for a, b in zip(tail, tail[1:]))

    def gap_at(self, k: int) -> float:
        return self.gaps[self.ks.index(k)]

    @property
    def final_gap(self) -> float:
        return self.gaps[-1]

    def to_dict(self) -> dict:
        return {"ks": list(self.ks), "gaps": list(self.gaps)}


def sample_w_star_uniformity(f_seq: Sequence, f, B: Iterable[TestFunction], k_max: int | None = None,
                             ks: Sequence[int] | None = None) -> ConvergenceReport:
    """sup over B of |f_k(xi) - f(xi)| for each listed k.

    ``f_seq`` is a list of functionals, or a callable k -> f_k used with ``ks``.
    """
    B = list(B)
    if callable(f_seq) and not isinstance(f_seq, (DemiDistribution, SpanElement)):
        if ks is None:
            ks = list(range(1, (k_max or 10) + 1))
        seq = [f_seq(k) for k in ks]
    else:
        seq = list(f_seq)
        ks = list(ks) if ks is not None else list(range(1, len(seq) + 1))
    if k_max is not None:
        keep = [i for i, k in enumerate(ks) if k <= k_max]
        seq, ks = [seq[i] for i in keep], [ks[i] for i in keep]
    targets = [apply(f, xi) for xi in B]
    gaps = tuple(max((abs(apply(fk, xi) - v) for xi, v in zip(B, targets)), default=0.0) for fk in seq)
    return ConvergenceReport(tuple(ks), gaps)


# --------------------------------------------------------------------------
# random samples


def random_test_function(rng: np.random.Generator, space: SpaceTag = SCHWARTZ, real: bool = False,
                         family: str | None = None) -> TestFunction:
    """Draw from bumps, gaussians and Hermite-gaussians with random parameters.

    Compact spaces get bumps (possibly times a polynomial); CompactA(a) keeps
    the support inside [-a, a].
    """
    def amp():
        a = rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0])
        return a if real else a * np.exp(1j * rng.uniform(0, 2 * np.pi))

    if family is None:
        family = rng.choice(["bump", "bump_poly", "bump_pair"] if space.compact
                            else ["bump", "gaussian", "hermite"])
    reach = space.a if space.kind == "compact_a" else 3.0
    if family in ("bump", "bump_poly", "bump_pair"):
        c = rng.uniform(-0.5, 0.5) * reach
        h = rng.uniform(0.25, 1.0) * (reach - abs(c))
        xi = make_bump(c, h, amp())
        if family == "bump_poly":
            coeffs = rng.uniform(-1, 1, 3)
            xi = product(xi, polynomial(coeffs))
        elif family == "bump_pair":
            c2 = rng.uniform(-0.5, 0.5) * reach
            h2 = rng.uniform(0.25, 1.0) * (reach - abs(c2))
            xi = xi + make_bump(c2, h2, amp())
        return xi
    c = rng.uniform(-2, 2)
    w = rng.uniform(0.5, 2.0)
    if family == "gaussian":
        return gaussian(c, w, amp())
    coeffs = rng.uniform(-1, 1, int(rng.integers(1, 4)))
    coeffs = coeffs if real else coeffs * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return scale(amp(), hermite_gaussian(c, w, coeffs))


def random_scalar(rng: np.random.Generator, real: bool = False) -> complex:
    """t uniform in the unit disk, or in [-1, 1] when ``real``."""
    if real:
        return float(rng.uniform(-1, 1))
    r = math.sqrt(rng.uniform(0, 1))
    return complex(r * np.exp(2j * np.pi * rng.uniform(0, 1)))


def random_triple(f: DemiDistribution, rng: np.random.Generator, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """(xi, eta, t) with eta rescaled strictly inside f's neighborhood."""
    xi = random_test_function(rng, f.space, f.real_scalars)
    eta = f.nbhd.rescale_into(random_test_function(rng, f.space, f.real_scalars), cfg)
    return xi, eta, random_scalar(rng, f.real_scalars)


def functional_to_dict(f) -> dict | list:
    if isinstance(f, SpanElement):
        return [{"coef": [complex(a).real, complex(a).imag], "f": g.to_dict()} for a, g in f.terms]
    return f.to_dict()
