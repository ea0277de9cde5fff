"""Spaces of entire functions weighted by a structure function g.

A structure function dominates its own reflection in the upper half-plane:
|g(conj z)| < |g(z)| there.  The induced space carries the norm
int |f/g|^2 dt and a reproducing kernel built from g; with g(z) = exp(-iaz)
the whole construction collapses to the bandlimited machinery, which is the
main cross-check used in the tests.

Two regimes are handled: g of exponential type (affine composition
boundedness via the ratio sup test) and 1/g square-integrable (pull-back
bounds for the weighted measure dt/|g|^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import quad

from .errors import (
    AdmissibilityError,
    DivergingIntegralError,
    HypothesisViolatedError,
    MeasureGateError,
    NonMonotoneWarpError,
    StructureZeroError,
)
from .growth import DEFAULT_RADII, mean_type
from .paley_wiener import TimeSamples
from .warps import Warp, check_measure_bound, invert_monotone

KIND_EXPONENTIAL = "exponential"
KIND_POLY_EXP = "poly-exp"
KIND_CUSTOM = "custom"

_VALIDATION_SEED = 134
_VALIDATION_POINTS = 200
_HEIGHT_RANGE = (0.01, 10.0)
_REAL_PROBE = np.linspace(-100.0, 100.0, 4001)

GROWTH_RATIO_LIMIT = 1.05


@dataclass(frozen=True)
class StructureDescriptor:
    kind: str
    exp_rate: float | None = None
    poly: tuple[complex, ...] | None = None


@dataclass(eq=False)
class StructureFunction:
    """Entire g with upper-half-plane dominance, wrapped with its metadata.

    ``evaluator`` must accept complex scalars and arrays.  Admissibility is
    sampled at construction: 200 seeded random points of the upper half-plane
    must satisfy strict dominance, and g must not vanish on the real probe
    grid.  Sampling is a practical gate, not a proof.
    """

    evaluator: Callable
    descriptor: StructureDescriptor
    exponential_type: float | None = None

    def __call__(self, z):
        return self.evaluator(z)


def _validate_structure(s: StructureFunction) -> StructureFunction:
    rng = np.random.default_rng(_VALIDATION_SEED)
    x = rng.uniform(-30.0, 30.0, _VALIDATION_POINTS)
    y = np.exp(rng.uniform(math.log(_HEIGHT_RANGE[0]), math.log(_HEIGHT_RANGE[1]), _VALIDATION_POINTS))
    z = x + 1j * y
    upper = np.abs(np.asarray(s.evaluator(z), dtype=complex))
    lower = np.abs(np.asarray(s.evaluator(np.conj(z)), dtype=complex))
    if not np.all(np.isfinite(upper)) or not np.all(np.isfinite(lower)):
        raise AdmissibilityError("structure function overflowed at validation points")
    bad = int(np.sum(~(lower < upper)))
    if bad:
        raise AdmissibilityError(
            f"reflection dominance |g(conj z)| < |g(z)| failed at {bad}/{_VALIDATION_POINTS} points"
        )
    on_axis = np.abs(np.asarray(s.evaluator(_REAL_PROBE.astype(complex)), dtype=complex))
    if np.any(on_axis < 1e-300):
        raise StructureZeroError("structure function vanishes on the real probe grid")
    return s


def exponential_structure(rate: float, validate: bool = True) -> StructureFunction:
    """g(z) = exp(-i * rate * z), the structure function of band ``rate``."""
    if rate <= 0:
        raise ValueError("rate must be positive")
    s = StructureFunction(
        evaluator=lambda z: np.exp(-1j * rate * np.asarray(z, dtype=complex)),
        descriptor=StructureDescriptor(kind=KIND_EXPONENTIAL, exp_rate=rate),
        exponential_type=rate,
    )
    return _validate_structure(s) if validate else s


def poly_exp_structure(poly, rate: float = 0.0, validate: bool = True) -> StructureFunction:
    """g(z) = p(z) * exp(-i * rate * z) with complex polynomial coefficients."""
    coeffs = tuple(complex(c) for c in poly)

    def evaluator(z):
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, coeffs) * np.exp(-1j * rate * z)

    s = StructureFunction(
        evaluator=evaluator,
        descriptor=StructureDescriptor(kind=KIND_POLY_EXP, exp_rate=rate, poly=coeffs),
        exponential_type=rate,
    )
    return _validate_structure(s) if validate else s


def custom_structure(
    evaluator: Callable, exponential_type: float | None = None, validate: bool = True
) -> StructureFunction:
    s = StructureFunction(
        evaluator=evaluator,
        descriptor=StructureDescriptor(kind=KIND_CUSTOM),
        exponential_type=exponential_type,
    )
    return _validate_structure(s) if validate else s


_SINGULAR_THRESHOLD = 1e-6
_FD_STEP = 1e-4


def dbr_kernel(s: StructureFunction, z, w):
    """Reproducing kernel (i/2)(g(z)conj(g(w)) - conj(g(conj z)) g(conj w)) / (pi (z - conj w)).

    The numerator vanishes with the denominator at z = conj(w); there the
    kernel is the numerator's derivative over pi, taken by central finite
    difference (keeps arbitrary evaluators differentiation-free).
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    z, w = np.broadcast_arrays(z, w)
    scalar = z.ndim == 1 and z.size == 1

    def numerator(zz, ww):
        return s.evaluator(zz) * np.conj(s.evaluator(ww)) - np.conj(
            s.evaluator(np.conj(zz))
        ) * s.evaluator(np.conj(ww))

    delta = z - np.conj(w)
    small = np.abs(delta) < _SINGULAR_THRESHOLD
    safe = np.where(small, 1.0, delta)
    out = (0.5j) * numerator(z, w) / (np.pi * safe)
    if np.any(small):
        zs = np.conj(w[small])
        ws = w[small]
        dnum = (numerator(zs + _FD_STEP, ws) - numerator(zs - _FD_STEP, ws)) / (2 * _FD_STEP)
        out = np.asarray(out, dtype=complex)
        out[small] = (0.5j) * dnum / np.pi
    if scalar:
        return complex(out.ravel()[0])
    return out


def _nested_window_integrals(grid_t: np.ndarray, density: np.ndarray):
    t_max = min(abs(grid_t[0]), abs(grid_t[-1]))
    windows = [t_max / 8, t_max / 4, t_max / 2, t_max]
    integrals = []
    for lim in windows:
        mask = np.abs(grid_t) <= lim
        integrals.append(float(np.trapezoid(density[mask], grid_t[mask])))
    return windows, integrals


def hg_norm(f_samples: TimeSamples, s: StructureFunction) -> float:
    """Norm estimate sqrt(int |f(t)/g(t)|^2 dt) over the sample window.

    Divergence is detected by nested-window partials: if the integral keeps
    growing by more than 5% across the last three window doublings it cannot
    be converging on this window and the norm is refused.
    """
    t = f_samples.grid.points()
    gt = np.asarray(s.evaluator(t.astype(complex)), dtype=complex)
    if np.any(np.abs(gt) < 1e-300):
        raise StructureZeroError("structure function vanishes on the sample grid")
    density = np.abs(f_samples.values / gt) ** 2
    _, integrals = _nested_window_integrals(t, density)
    ratios = [
        (b / a) if a > 0 else 1.0 for a, b in zip(integrals, integrals[1:])
    ]
    if all(r > GROWTH_RATIO_LIMIT for r in ratios):
        raise DivergingIntegralError(
            f"partial integrals grow without flattening: ratios {ratios}"
        )
    return math.sqrt(max(integrals[-1], 0.0))


class AffineBoundednessReport(NamedTuple):
    bounded: bool
    c_estimate: float
    window_sups: tuple[float, ...]
    asymptotic_ok: bool | None


_SUP_WINDOWS = (25.0, 50.0, 100.0)
_SUP_SPACING = 0.01


def affine_boundedness_test(
    s: StructureFunction, a: float, b: complex, windows=_SUP_WINDOWS
) -> AffineBoundednessReport:
    """Sup of |g(at + b) / g(t)| over nested real windows.

    Composition with t -> at + b is bounded on the g-weighted space whenever
    this ratio is uniformly bounded; a finite probe cannot certify all of R,
    so ``bounded`` additionally requires the window sups to agree within 1%
    (no growth trend).  Affine parameters must satisfy 0 < |a| <= 1 with a
    real; b may be complex.
    """
    a_c = complex(a)
    if a_c.imag != 0.0 or not (0.0 < abs(a_c) <= 1.0):
        raise HypothesisViolatedError(f"need real a with 0 < |a| <= 1, got {a!r}")
    a_r = a_c.real
    b = complex(b)
    sups = []
    for lim in windows:
        n = 2 * int(round(lim / _SUP_SPACING)) + 1
        t = np.linspace(-lim, lim, n)
        gt = np.asarray(s.evaluator(t.astype(complex)), dtype=complex)
        if np.any(np.abs(gt) < 1e-300):
            raise StructureZeroError("structure function vanishes on the probe window")
        gat = np.asarray(s.evaluator(a_r * t + b), dtype=complex)
        sups.append(float(np.max(np.abs(gat) / np.abs(gt))))
    c_estimate = sups[-1]
    finite = all(math.isfinite(v) for v in sups)
    trend_ok = finite and (max(sups) - min(sups)) <= 0.01 * max(sups)
    if s.descriptor.kind in (KIND_EXPONENTIAL, KIND_POLY_EXP):
        # |exp(-i rate (at+b))| / |exp(-i rate t)| = exp(rate Im b) and the
        # polynomial ratio tends to |a|^deg: bounded on all of R
        asymptotic_ok = True
    else:
        asymptotic_ok = None
    bounded = trend_ok and asymptotic_ok is not False
    return AffineBoundednessReport(
        bounded=bounded, c_estimate=c_estimate, window_sups=tuple(sups), asymptotic_ok=asymptotic_ok
    )


@dataclass(eq=False)
class DbrMeasure:
    """Weighted measure lambda(E) = int_E dt / |g(t)|^2, gated on integrability.

    Construction refuses structure functions whose nested-window partials keep
    growing (1/g not square-integrable on the probe window).
    """

    structure: StructureFunction
    probe_halfwidth: float = 200.0

    def __post_init__(self):
        windows = [self.probe_halfwidth / 8, self.probe_halfwidth / 4,
                   self.probe_halfwidth / 2, self.probe_halfwidth]
        integrals = [self.measure(-lim, lim) for lim in windows]
        ratios = [(b / a) if a > 0 else 1.0 for a, b in zip(integrals, integrals[1:])]
        if all(r > GROWTH_RATIO_LIMIT for r in ratios):
            raise MeasureGateError(
                f"1/|g|^2 partial integrals grow without flattening: ratios {ratios}"
            )

    def density(self, t: float) -> float:
        g = complex(np.asarray(self.structure.evaluator(complex(t))))
        m = abs(g)
        if m < 1e-300:
            raise StructureZeroError(f"structure function vanishes at t={t}")
        return 1.0 / (m * m)

    def measure(self, lo: float, hi: float) -> float:
        if hi < lo:
            lo, hi = hi, lo
        val, _ = quad(self.density, lo, hi, epsabs=1e-10, epsrel=1e-10, limit=500)
        return float(val)


class MeasureBoundCheck(NamedTuple):
    c_estimate: float
    violations: int


def dbr_measure_bound_check(
    s: StructureFunction,
    w: Warp,
    intervals,
    cap: float | None = None,
    probe_halfwidth: float = 200.0,
) -> MeasureBoundCheck:
    """Max ratio lambda(phi^{-1} E) / lambda(E) over the given intervals.

    Pure measurement: ``violations`` counts intervals whose ratio exceeds the
    caller's cap, if one is given.  The warp must be monotone so interval
    pull-backs are intervals (computed by root bracketing).
    """
    measure = DbrMeasure(s, probe_halfwidth=probe_halfwidth)
    report = check_measure_bound(w)
    if not report.monotone:
        raise NonMonotoneWarpError("interval pull-backs require a monotone warp")
    worst = 0.0
    violations = 0
    for lo, hi in intervals:
        lo, hi = float(lo), float(hi)
        if hi <= lo:
            raise ValueError(f"degenerate interval [{lo}, {hi}]")
        lam = measure.measure(lo, hi)
        pre_lo = invert_monotone(w, lo)
        pre_hi = invert_monotone(w, hi)
        lam_pre = measure.measure(pre_lo, pre_hi)
        ratio = lam_pre / lam if lam > 0 else math.inf
        worst = max(worst, ratio)
        if cap is not None and ratio > cap:
            violations += 1
    return MeasureBoundCheck(c_estimate=worst, violations=violations)


class MeanTypeGate(NamedTuple):
    ratio_upper_ok: bool
    reflected_ok: bool
    value_upper: float
    value_reflected: float


def mean_type_gate(
    f_eval: Callable,
    s: StructureFunction,
    radii=DEFAULT_RADII,
    tol: float = 0.05,
) -> MeanTypeGate:
    """Check that f/g and conj(f(conj .))/g have nonpositive mean type above the axis.

    This is the membership gate for the g-weighted space (up to the norm
    condition); the finite largest radius makes it a surrogate, reported via
    the raw values alongside the flags.
    """
    ratio = lambda z: np.asarray(f_eval(z), dtype=complex) / np.asarray(
        s.evaluator(z), dtype=complex
    )
    reflected = lambda z: np.conj(np.asarray(f_eval(np.conj(z)), dtype=complex)) / np.asarray(
        s.evaluator(z), dtype=complex
    )
    up = mean_type(ratio, "upper", radii=radii)
    re = mean_type(reflected, "upper", radii=radii)
    return MeanTypeGate(
        ratio_upper_ok=up.value <= tol,
        reflected_ok=re.value <= tol,
        value_upper=up.value,
        value_reflected=re.value,
    )
