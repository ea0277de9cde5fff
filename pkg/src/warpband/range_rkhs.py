"""Hilbert-space structure of warped bandlimited signals.

Composition with a warp carries the sinc kernel along: the range of the
composition map reproduces against K(z, w) = pw_kernel(a, phi(z), phi(w)).
Finite sections over integer nodes give Gram systems for projection, range
inner products, and norm pull-back checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh

from . import _kernels
from .errors import (
    FactorizationError,
    HypothesisFailedError,
    IndistinguishableInputsError,
    NodeMismatchError,
)
from .paley_wiener import (
    BandSpec,
    BandlimitedSignal,
    RealGrid,
    TimeSamples,
    default_grid,
    l2_norm,
    pw_kernel,
    sample_on_grid,
    synthesize,
)
from .warps import Warp, check_measure_bound

DEFAULT_RIDGE = 1e-10

# Relative threshold separating "ill-conditioned but positive semidefinite"
# (eigenvalues clipped) from "genuinely indefinite" (refused).
INDEFINITE_REL = 1e-8
CLIP_REL = 1e-14


@dataclass(frozen=True)
class WarpedKernel:
    band: BandSpec
    warp: Warp


def warped_kernel_eval(k: WarpedKernel, z, w):
    """Kernel of the composition range: the sinc kernel at warped arguments.

    Shares the evaluation path (including the removable-singularity series)
    with pw_kernel by construction.
    """
    return pw_kernel(k.band, k.warp(z), k.warp(w))


@dataclass(eq=False)
class GramSystem:
    """Hermitian node-kernel matrix with cached factorization.

    Solving uses Cholesky on matrix + ridge*I; if that fails the matrix is
    re-factored by eigendecomposition with eigenvalues clipped at
    CLIP_REL * ||matrix||, refusing only when the spectrum is genuinely
    indefinite.  ``condition_estimate`` is populated on first solve.
    """

    nodes: np.ndarray
    matrix: np.ndarray
    ridge: float = DEFAULT_RIDGE
    condition_estimate: float | None = field(default=None, init=False)
    _cho: object = field(default=None, repr=False, init=False)
    _eig: object = field(default=None, repr=False, init=False)

    def __post_init__(self):
        self.nodes = np.ascontiguousarray(self.nodes, dtype=np.float64)
        self.matrix = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        n = self.nodes.size
        if self.matrix.shape != (n, n):
            raise NodeMismatchError(f"matrix shape {self.matrix.shape} vs {n} nodes")
        if self.ridge < 0:
            raise ValueError("ridge must be nonnegative")
        herm_defect = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if herm_defect > 1e-12 * max(1.0, float(np.max(np.abs(self.matrix)))):
            raise FactorizationError(f"matrix is not Hermitian (defect {herm_defect:.3g})")

    @property
    def size(self) -> int:
        return self.nodes.size

    def _ensure_factor(self):
        if self._cho is not None or self._eig is not None:
            return
        shifted = self.matrix + self.ridge * np.eye(self.size)
        try:
            self._cho = cho_factor(shifted, lower=True)
            diag = np.real(np.diag(self._cho[0]))
            self.condition_estimate = float((diag.max() / diag.min()) ** 2)
            return
        except np.linalg.LinAlgError:
            pass
        vals, vecs = eigh(shifted)
        scale = float(np.max(np.abs(vals))) if vals.size else 0.0
        if vals.min() < -INDEFINITE_REL * max(scale, 1.0):
            raise FactorizationError(
                f"matrix + ridge*I is indefinite: min eigenvalue {vals.min():.3e}"
            )
        clipped = np.maximum(vals, CLIP_REL * max(scale, 1e-300))
        self._eig = (clipped, vecs)
        self.condition_estimate = float(clipped.max() / clipped.min())

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        self._ensure_factor()
        rhs = np.asarray(rhs, dtype=np.complex128)
        if self._cho is not None:
            return cho_solve(self._cho, rhs)
        vals, vecs = self._eig
        return vecs @ ((vecs.conj().T @ rhs) / vals)


@dataclass(eq=False)
class ExpansionCoefficients:
    """Coefficients of F = sum_n c_n K(., node_n), plus the solver residual."""

    nodes: np.ndarray
    coeffs: np.ndarray
    residual: float | None = None

    def __post_init__(self):
        self.nodes = np.ascontiguousarray(self.nodes, dtype=np.float64)
        self.coeffs = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if self.nodes.shape != self.coeffs.shape:
            raise NodeMismatchError("nodes and coeffs must have equal length")


def integer_nodes(n: int) -> np.ndarray:
    return np.arange(-n, n + 1, dtype=float)


def build_gram(k: WarpedKernel, n: int, ridge: float = DEFAULT_RIDGE) -> GramSystem:
    """Kernel Gram matrix over the integer nodes -n..n.

    The warp is applied to the nodes once; the matrix is then a plain sinc
    kernel matrix at the warped (real) locations, symmetric by construction.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > 2000:
        raise ValueError("dense Gram budget is n <= 2000")
    nodes = integer_nodes(n)
    warped = np.asarray(k.warp(nodes), dtype=float)
    matrix = _kernels.sinc_gram(k.band.a, warped).astype(np.complex128)
    return GramSystem(nodes=nodes, matrix=matrix, ridge=ridge)


def range_inner_product(
    g: GramSystem, x: ExpansionCoefficients, y: ExpansionCoefficients
) -> complex:
    """Range-space pairing sum_{m,n} conj(y_m) x_n K(m, n)."""
    if not np.array_equal(g.nodes, x.nodes) or not np.array_equal(g.nodes, y.nodes):
        raise NodeMismatchError("coefficient nodes do not match the Gram nodes")
    return complex(np.vdot(y.coeffs, g.matrix @ x.coeffs))


def project_onto_kernels(g: GramSystem, target) -> ExpansionCoefficients:
    """Solve (matrix + ridge I) c = target for kernel-basis coefficients."""
    target = np.asarray(target, dtype=np.complex128)
    if target.shape != g.nodes.shape:
        raise NodeMismatchError(f"target length {target.shape} vs {g.nodes.shape} nodes")
    coeffs = g.solve(target)
    shifted = g.matrix @ coeffs + g.ridge * coeffs
    residual = float(np.linalg.norm(shifted - target))
    return ExpansionCoefficients(nodes=g.nodes, coeffs=coeffs, residual=residual)


def orthonormality_defect(g: GramSystem) -> float:
    """Frobenius distance of the Gram matrix from the identity.

    Diagnostic for how far the warped kernel sections at the nodes are from an
    orthonormal family; zero exactly in the unwarped case at bandwidth pi.
    """
    return float(np.linalg.norm(g.matrix - np.eye(g.size)))


class PullbackCheck(NamedTuple):
    range_norm: float
    source_norm: float


def pullback_norm_check(
    f: BandlimitedSignal,
    w: Warp,
    n: int,
    ridge: float = DEFAULT_RIDGE,
    grid: RealGrid | None = None,
) -> PullbackCheck:
    """Compare the node-expansion range norm of f(phi(.)) with ||f||.

    The composition is norm-preserving onto its range in the infinite-node
    limit; at finite n the two numbers are reported for comparison, with
    agreement guaranteed only as the node expansion captures the image.
    Requires the mutual-absolute-continuity certificate.
    """
    report = check_measure_bound(w)
    if not report.mutual_abs_continuity:
        raise HypothesisFailedError(
            "warp fails the mutual-absolute-continuity certificate"
        )
    gram = build_gram(WarpedKernel(band=f.band, warp=w), n, ridge=ridge)
    warped_nodes = np.asarray(w(gram.nodes), dtype=float)
    target = synthesize(f, warped_nodes.astype(np.complex128))
    coeffs = project_onto_kernels(gram, target)
    sq = range_inner_product(gram, coeffs, coeffs).real
    range_norm = math.sqrt(max(sq, 0.0))
    source_norm = l2_norm(sample_on_grid(f, grid if grid is not None else default_grid()))
    return PullbackCheck(range_norm=range_norm, source_norm=source_norm)


def injectivity_probe(
    w: Warp,
    f1: BandlimitedSignal,
    f2: BandlimitedSignal,
    grid: RealGrid,
) -> float:
    """L2 grid distance between the two warped signals.

    Refuses inputs that already coincide in L2 (distance below 1e-6): the
    probe then says nothing about injectivity.
    """
    s1 = sample_on_grid(f1, grid)
    s2 = sample_on_grid(f2, grid)
    base = TimeSamples(grid, s1.values - s2.values)
    base_dist = l2_norm(base)
    if base_dist <= 1e-6:
        raise IndistinguishableInputsError(
            f"inputs are L2-indistinguishable (distance {base_dist:.3g})"
        )
    phi_t = np.asarray(w(grid.points()), dtype=float).astype(np.complex128)
    d = synthesize(f1, phi_t) - synthesize(f2, phi_t)
    return l2_norm(TimeSamples(grid, d))
