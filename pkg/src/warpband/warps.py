"""Warp maps: classification, bandwidth transport, and measure certificates.

A warp is a real-coefficient polynomial acting on the real line (entire on C).
Composition preserves bandlimitedness only for affine maps; everything else
needs the range-space machinery, gated by the pull-back measure bound
certified here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq

from .errors import (
    ConstantWarpError,
    DegenerateLeadingError,
    EmptySupportError,
    NotPolynomialError,
)
from .paley_wiener import BandSpec

AFFINE = "affine"
POLYNOMIAL = "polynomial"

REASON_CONTRACTIVE = "affine_contractive"
REASON_EXPANSIVE = "affine_expansive"
REASON_NON_AFFINE = "non_affine"


@dataclass(frozen=True)
class Warp:
    """Real-coefficient polynomial map, coefficients in ascending degree."""

    kind: str
    coefficients: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in (AFFINE, POLYNOMIAL):
            raise ValueError(f"kind must be {AFFINE!r} or {POLYNOMIAL!r}")
        coeffs = [float(c) for c in self.coefficients]
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))
        if self.degree < 1:
            raise ConstantWarpError(f"warp {coeffs} is constant")
        if self.kind == AFFINE and self.degree != 1:
            raise ValueError("affine warp must have degree 1")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        return npoly.polyval(x, self.coefficients)

    def derivative_coefficients(self) -> tuple[float, ...]:
        return tuple(npoly.polyder(self.coefficients))

    def derivative(self, x):
        return npoly.polyval(x, self.derivative_coefficients())


def affine_warp(c: float, d: float = 0.0) -> Warp:
    return Warp(kind=AFFINE, coefficients=(d, c))


def identity_warp() -> Warp:
    return affine_warp(1.0, 0.0)


def polynomial_warp(coefficients) -> Warp:
    return Warp(kind=POLYNOMIAL, coefficients=tuple(coefficients))


def cubic_warp(a: float = 1.0, b: float = 0.0, c: float = 1.0, d: float = 0.0) -> Warp:
    """a x^3 + b x^2 + c x + d."""
    return Warp(kind=POLYNOMIAL, coefficients=(d, c, b, a))


@dataclass(frozen=True)
class WarpClassification:
    preserves_pw: bool
    target_band_factor: float | None
    reason: str


def classify(w: Warp) -> WarpClassification:
    """Boundedness classification of composition by w on bandlimited spaces.

    Affine maps with slope 0 < |c| <= 1 preserve the space; any nonzero real
    slope transports band a to band |c| a; non-affine polynomials admit no
    bandlimited target space at all.
    """
    if w.degree == 1:
        c = w.coefficients[1]
        return WarpClassification(
            preserves_pw=0.0 < abs(c) <= 1.0,
            target_band_factor=abs(c),
            reason=REASON_CONTRACTIVE if abs(c) <= 1.0 else REASON_EXPANSIVE,
        )
    return WarpClassification(
        preserves_pw=False, target_band_factor=None, reason=REASON_NON_AFFINE
    )


@dataclass(frozen=True)
class WeightedBandResult:
    """Target half-bandwidth for a smeared-and-warped signal.

    ``support`` is the raw convolution support [r - |c|a, s + |c|a]; ``band``
    is max(|r - |c|a|, |s + |c|a|).  The two differ whenever the support
    interval is lopsided, so both are returned.
    """

    band: BandSpec
    support: tuple[float, float]


def weighted_target_band(band, c: float, m_support: tuple[float, float]) -> WeightedBandResult:
    a = band.a if isinstance(band, BandSpec) else float(band)
    if c == 0:
        raise ValueError("affine slope c must be nonzero")
    r, s = float(m_support[0]), float(m_support[1])
    if r > s:
        raise EmptySupportError(f"support interval [{r}, {s}] is empty")
    ca = abs(c) * a
    big_a = max(abs(r - ca), abs(s + ca))
    return WeightedBandResult(band=BandSpec(big_a), support=(r - ca, s + ca))


@dataclass(frozen=True)
class MeasureBoundReport:
    """Certificate for the interval pull-back bound m(phi^{-1} E) <= c m(E).

    ``inf_derivative`` is the infimum of |phi'| over the whole real line
    (computed from critical points, not just the probe grid); ``bound_c`` is
    its reciprocal when positive.  Mutual absolute continuity of m and
    m o phi^{-1} holds exactly when the warp is monotone with
    inf |phi'| > 0.
    """

    monotone: bool
    inf_derivative: float
    bound_c: float | None
    mutual_abs_continuity: bool


def check_measure_bound(
    w: Warp,
    probe_window: tuple[float, float] = (-50.0, 50.0),
    grid_density: float = 1e-3,
) -> MeasureBoundReport:
    if not isinstance(w, Warp):
        raise NotPolynomialError(f"expected a polynomial Warp, got {type(w)!r}")
    dcoef = np.asarray(w.derivative_coefficients())
    ddeg = len(dcoef) - 1
    if ddeg == 0:
        inf_abs = abs(dcoef[0])
        return MeasureBoundReport(
            monotone=True,
            inf_derivative=inf_abs,
            bound_c=1.0 / inf_abs,
            mutual_abs_continuity=True,
        )
    scale = float(np.max(np.abs(dcoef)))
    tol = 1e-12 * max(scale, 1.0)
    if ddeg % 2 == 1:
        # odd-degree derivative: opposite signs at the two infinities
        return MeasureBoundReport(
            monotone=False, inf_derivative=0.0, bound_c=None, mutual_abs_continuity=False
        )
    lead_sign = math.copysign(1.0, dcoef[-1])
    if ddeg == 2:
        # cubic warp: derivative discriminant decides exactly
        c0, c1, c2 = dcoef
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc > 0.0:
            return MeasureBoundReport(
                monotone=False, inf_derivative=0.0, bound_c=None, mutual_abs_continuity=False
            )
        vertex = -c1 / (2.0 * c2)
        m = lead_sign * w.derivative(vertex)
    else:
        # global min of sign * phi' over critical points plus the probe grid;
        # critical points come from the (companion-matrix) roots of phi'',
        # which dominate the grid estimate outside the window as well
        grid = np.arange(probe_window[0], probe_window[1], max(grid_density, 1e-6))
        candidates = [grid]
        dd = npoly.polyder(tuple(dcoef))
        roots = np.roots(dd[::-1])
        real_roots = [r.real for r in roots if abs(r.imag) < 1e-9 * max(1.0, abs(r.real))]
        if real_roots:
            candidates.append(np.asarray(real_roots))
        vals = lead_sign * npoly.polyval(np.concatenate(candidates), dcoef)
        m = float(np.min(vals))
    if m < -tol:
        return MeasureBoundReport(
            monotone=False, inf_derivative=0.0, bound_c=None, mutual_abs_continuity=False
        )
    inf_abs = max(float(m), 0.0)
    return MeasureBoundReport(
        monotone=True,
        inf_derivative=inf_abs,
        bound_c=(1.0 / inf_abs) if inf_abs > 0 else None,
        mutual_abs_continuity=inf_abs > 0,
    )


def cubic_criterion(a: float, b: float, c: float) -> bool:
    """Monotonicity test b^2 < 3ac for the cubic a x^3 + b x^2 + c x + d."""
    if a == 0:
        raise DegenerateLeadingError("cubic criterion needs a nonzero leading coefficient")
    return b * b < 3.0 * a * c


def invert_monotone(w: Warp, y: float, initial_halfwidth: float = 1.0) -> float:
    """Solve w(x) = y for a monotone warp by bracket expansion and brentq."""
    lo, hi = -initial_halfwidth, initial_halfwidth
    f = lambda x: w(x) - y
    for _ in range(200):
        if f(lo) * f(hi) <= 0:
            return float(brentq(f, lo, hi, xtol=1e-13, rtol=1e-14))
        lo *= 2.0
        hi *= 2.0
    raise ValueError(f"could not bracket a root of warp = {y}")
