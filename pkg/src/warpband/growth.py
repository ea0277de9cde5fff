"""Growth estimation for entire functions.

Order and type are estimated from Maclaurin coefficients, mean type from
log-modulus arc integrals over half-plane arcs.  All estimators are finite
surrogates for limsups: they report the tail window they used so callers can
tighten it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AllZeroError,
    NonFiniteError,
    NonpositiveOrderError,
    WindowEmptyError,
)

MIN_TAIL_LENGTH = 8


class CoefficientSequence:
    """Finite Maclaurin coefficient list a_0 ... a_N.

    Growth formulas only ever consume log|a_n|, which is kept exactly:
    factorial-scale tails (say 1/400! ~ 1e-869) underflow any IEEE double, so
    sequences with extreme dynamic range must be built through
    :meth:`from_log_magnitudes`.  The ``coeffs`` view is then lossy (clamped to
    double range) but the estimators stay exact.
    """

    __slots__ = ("coeffs", "log_magnitudes")

    def __init__(self, coeffs):
        coeffs = tuple(complex(c) for c in coeffs)
        if not coeffs:
            raise AllZeroError("empty coefficient sequence")
        if all(c == 0 for c in coeffs):
            raise AllZeroError("all coefficients are zero")
        self.coeffs = coeffs
        mags = np.abs(np.asarray(coeffs))
        with np.errstate(divide="ignore"):
            self.log_magnitudes = np.where(mags > 0, np.log(np.maximum(mags, 1e-300)), -np.inf)

    @classmethod
    def from_log_magnitudes(cls, log_mags) -> "CoefficientSequence":
        """Build from log|a_n| directly (use -inf for exact zeros)."""
        log_mags = np.asarray(log_mags, dtype=float)
        if log_mags.ndim != 1 or log_mags.size == 0:
            raise AllZeroError("empty coefficient sequence")
        if np.all(np.isneginf(log_mags)):
            raise AllZeroError("all coefficients are zero")
        obj = cls.__new__(cls)
        with np.errstate(over="ignore"):
            obj.coeffs = tuple(np.exp(np.clip(log_mags, -745.0, 709.0)) * (log_mags > -np.inf))
        obj.log_magnitudes = log_mags.copy()
        return obj

    @property
    def n_max(self) -> int:
        return len(self.log_magnitudes) - 1


@dataclass(frozen=True)
class GrowthEstimate:
    """Order/type estimates plus the half-plane mean types, with window metadata."""

    order_rho: float
    type_sigma: float  # may be math.inf
    tail_window: tuple[int, int]
    mean_type_upper: float = math.nan
    mean_type_lower: float = math.nan


@dataclass(frozen=True)
class MeanTypeEstimate:
    value: float
    diagnostic: float  # |estimate at largest radius - estimate at previous radius|
    radius: float


def tail_window(n_max: int) -> tuple[int, int]:
    """Index window [n_max/2, n_max] used as the limsup surrogate."""
    return (int(math.ceil(n_max / 2)), n_max)


def estimate_order(c: CoefficientSequence, exact_polynomial: bool = False) -> float:
    """Order estimate from the coefficient decay rate.

    The raw ratio n log n / log(1/|a_n|) converges only like 1/log n, far too
    slowly for any usable window, so the estimator extrapolates.  For every
    sequence with log(1/|a_n|) = (n/rho) log n + b*n + kappa*log n + const
    (which covers powers of Gamma factors times geometric terms, by Stirling)
    the reciprocal ratio y_n = log(1/|a_n|) / (n log n) equals

        1/rho + b/log n + kappa/n + const/(n log n)

    exactly, and all regressors vanish as n -> infinity.  A least-squares fit
    over the tail window therefore recovers 1/rho as the intercept.

    ``exact_polynomial`` marks the input as a complete polynomial, whose order
    is 0 by definition (no tail estimation performed).
    """
    if exact_polynomial:
        return 0.0
    n_lo, n_hi = tail_window(c.n_max)
    if n_hi - n_lo + 1 < MIN_TAIL_LENGTH // 2 or c.n_max < MIN_TAIL_LENGTH:
        raise WindowEmptyError(
            f"n_max={c.n_max} leaves an unusable tail window; "
            "need at least 8 coefficients or the exact_polynomial flag"
        )
    logm = c.log_magnitudes
    ns, ys = [], []
    tail_has_nonzero = False
    for n in range(max(n_lo, 2), n_hi + 1):
        lm = logm[n]
        if lm == -math.inf:
            continue
        tail_has_nonzero = True
        if lm >= 0.0:
            # log(1/|a_n|) <= 0: the ratio is meaningless there; the limsup
            # surrogate ignores such indices (they cannot bound a finite order).
            continue
        ns.append(float(n))
        ys.append(-lm / (n * math.log(n)))
    if not ns:
        if not tail_has_nonzero:
            raise WindowEmptyError(
                "every tail coefficient vanishes; if this is a complete "
                "polynomial, pass exact_polynomial=True (order 0)"
            )
        raise WindowEmptyError("no tail coefficient below 1 in magnitude")
    ns = np.asarray(ns)
    ys = np.asarray(ys)
    logn = np.log(ns)
    if len(ns) >= 8:
        design = np.column_stack(
            [np.ones_like(ns), 1.0 / logn, 1.0 / ns, 1.0 / (ns * logn)]
        )
        coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
        intercept = float(coef[0])
    elif len(ns) >= 2:
        intercept = float(np.polyfit(1.0 / logn, ys, 1)[1])
    else:
        intercept = float(ys[0])
    if intercept <= 1e-12:
        return math.inf
    return max(1.0 / intercept, 0.0)


def estimate_type(c: CoefficientSequence, rho: float) -> float:
    """Type estimate (1/(rho e)) * max over the tail window of n |a_n|^(rho/n)."""
    if rho <= 0:
        raise NonpositiveOrderError(f"order must be positive, got {rho}")
    n_lo, n_hi = tail_window(c.n_max)
    if c.n_max < MIN_TAIL_LENGTH:
        raise WindowEmptyError(f"n_max={c.n_max} below the minimum of {MIN_TAIL_LENGTH}")
    logm = c.log_magnitudes
    best = None
    for n in range(max(n_lo, 1), n_hi + 1):
        lm = logm[n]
        if lm == -math.inf:
            continue
        log_term = math.log(n) + (rho / n) * lm
        if log_term > 700.0:
            return math.inf
        val = math.exp(log_term)
        if best is None or val > best:
            best = val
    if best is None:
        return 0.0
    return best / (rho * math.e)


def scale_coefficients(c: CoefficientSequence, scale: complex) -> CoefficientSequence:
    """Coefficients of f(scale * z): a_n -> a_n * scale^n (exact in log space)."""
    scale = complex(scale)
    n = np.arange(len(c.log_magnitudes))
    if scale == 0:
        logm = np.full(len(n), -np.inf)
        logm[0] = c.log_magnitudes[0]
        return CoefficientSequence.from_log_magnitudes(logm)
    return CoefficientSequence.from_log_magnitudes(
        c.log_magnitudes + n * math.log(abs(scale))
    )


DEFAULT_RADII = (25.0, 50.0, 100.0)
ARC_NODES = 2048
LOG_FLOOR = -1.0e3


def mean_type(
    f,
    half_plane: str = "upper",
    radii=DEFAULT_RADII,
    nodes: int = ARC_NODES,
    log_floor: float = LOG_FLOOR,
) -> MeanTypeEstimate:
    """Arc-integral mean type (2/(pi r)) * int_0^pi log|f(r e^{i theta})| sin(theta) dtheta.

    The lower half-plane uses the reflected arc r e^{-i theta}.  log|f| is
    clipped below at ``log_floor`` so isolated zeros on the arc contribute a
    bounded quadrature error.  Returns the estimate at the largest radius and
    the difference against the previous radius as a convergence diagnostic.
    """
    if half_plane not in ("upper", "lower"):
        raise ValueError(f"half_plane must be 'upper' or 'lower', got {half_plane!r}")
    radii = sorted(float(r) for r in radii)
    if not radii:
        raise ValueError("need at least one radius")
    theta = np.linspace(0.0, np.pi, nodes + 1)
    sign = 1.0 if half_plane == "upper" else -1.0
    estimates = []
    for r in radii:
        z = r * np.exp(sign * 1j * theta)
        vals = np.asarray(f(z), dtype=complex)
        mags = np.abs(vals)
        if not np.all(np.isfinite(mags)):
            raise NonFiniteError(f"evaluator overflowed on the arc at radius {r}")
        logmod = np.where(mags > 0, np.log(np.maximum(mags, 1e-300)), log_floor)
        logmod = np.maximum(logmod, log_floor)
        integral = _simpson(logmod * np.sin(theta), theta[1] - theta[0])
        estimates.append(2.0 / (np.pi * r) * integral)
    diag = abs(estimates[-1] - estimates[-2]) if len(estimates) > 1 else math.inf
    return MeanTypeEstimate(value=estimates[-1], diagnostic=diag, radius=radii[-1])


def _simpson(y: np.ndarray, h: float) -> float:
    n = len(y) - 1
    if n % 2 != 0:
        raise ValueError("Simpson rule needs an even panel count")
    return h / 3.0 * (y[0] + y[-1] + 4.0 * np.sum(y[1:-1:2]) + 2.0 * np.sum(y[2:-1:2]))


def estimate_growth(
    c: CoefficientSequence,
    evaluator=None,
    radii=DEFAULT_RADII,
) -> GrowthEstimate:
    """Combined order/type estimate, plus mean types when an evaluator is given."""
    rho = estimate_order(c)
    sigma = estimate_type(c, rho) if 0.0 < rho < math.inf else 0.0
    h_up = h_lo = math.nan
    if evaluator is not None:
        h_up = mean_type(evaluator, "upper", radii).value
        h_lo = mean_type(evaluator, "lower", radii).value
    return GrowthEstimate(
        order_rho=rho,
        type_sigma=sigma,
        tail_window=tail_window(c.n_max),
        mean_type_upper=h_up,
        mean_type_lower=h_lo,
    )


def maclaurin_coefficients(f, n_terms: int, radius: float = 20.0, samples: int = 512) -> CoefficientSequence:
    """Maclaurin coefficients by quadrature differentiation on a circle.

    The Cauchy integrals a_n = (1/2 pi) int f(R e^{i t}) e^{-i n t} dt / R^n are
    evaluated with the FFT of equispaced circle samples.  ``radius`` trades
    aliasing (from coefficients beyond ``samples``) against the dynamic range
    R^n; the default suits entire functions of exponential type around 1.
    """
    if n_terms >= samples // 4:
        raise ValueError("samples must exceed n_terms by a comfortable margin")
    t = 2.0 * np.pi * np.arange(samples) / samples
    vals = np.asarray(f(radius * np.exp(1j * t)), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("evaluator overflowed on the sampling circle")
    hat = np.fft.fft(vals) / samples
    # circle quadrature cannot resolve coefficients below the float noise of
    # the samples; zero them instead of reporting noise as data
    floor = 1e-13 * float(np.abs(vals).max())
    hat = np.where(np.abs(hat) < floor, 0.0, hat)
    coeffs = hat[: n_terms + 1] / radius ** np.arange(n_terms + 1)
    return CoefficientSequence(tuple(coeffs))
