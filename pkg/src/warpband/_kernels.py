"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is selected once at import time from the environment variable
``WARPBAND_BACKEND``:

* ``auto`` (default) -- numba if importable, else numpy;
* ``numba``          -- require numba, fail loudly if missing;
* ``numpy``          -- force the vectorized numpy path.

All kernels are deterministic: no threading, no reduction reordering, so a
fixed backend gives byte-identical results across runs.

The oscillatory integrals use an exact-on-linear-interpolant (Filon-type)
rule: on each panel the integrand ``interp(f)(w) * exp(-i z w)`` is integrated
in closed form.  The rule is exact for piecewise-linear spectra (in particular
for flat ones) and its error is O(h^2) *uniformly in z*, which matters because
warped signals are evaluated at arguments up to ~1e6 where sampled quadrature
rules alias.
"""

from __future__ import annotations

import os

import numpy as np

_FILON_SMALL = 0.5
_FILON_TERMS = 18


def _resolve_backend() -> str:
    choice = os.environ.get("WARPBAND_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"WARPBAND_BACKEND must be auto, numba or numpy, got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


_BACKEND = _resolve_backend()


def backend() -> str:
    """Name of the active kernel backend ('numba' or 'numpy')."""
    return _BACKEND


# ---------------------------------------------------------------------------
# loop-style implementations (compiled with numba when available)
# ---------------------------------------------------------------------------


def _filon_i01(theta):
    # I0 = int_0^1 (1-u) e^{-i theta u} du,  I1 = int_0^1 u e^{-i theta u} du.
    # Series branch avoids the 0/0 cancellation of the closed form.
    if abs(theta) < _FILON_SMALL:
        term = 1.0 + 0.0j
        i0 = 0.0 + 0.0j
        i1 = 0.0 + 0.0j
        for k in range(_FILON_TERMS):
            i0 += term / ((k + 1) * (k + 2))
            i1 += term / (k + 2)
            term *= (-1j * theta) / (k + 1)
        return i0, i1
    e = np.exp(-1j * theta)
    s = (1.0 - e) / (1j * theta)
    i1 = (s - e) / (1j * theta)
    return s - i1, i1


def _synth_loop(values, w0, dw, zs, out):
    # out[k] = integral over [w0, w0+(M-1)dw] of interp(values)(w) exp(-i z_k w) dw
    # Accumulates per-panel coefficients g_j = I0 f_j + I1 f_{j+1} so that the
    # total is sum_j g_j exp(-i z w_j): no rearrangement that could cancel when
    # exp(-izw) spans many orders of magnitude across the window.
    m = values.shape[0]
    for k in range(zs.shape[0]):
        z = zs[k]
        theta = z * dw
        i0, i1 = _filon_i01(theta)
        q = np.exp(-1j * theta)
        # Horner over panel coefficients, run in the decaying direction.
        if abs(q) <= 1.0:
            acc = i0 * values[m - 2] + i1 * values[m - 1]
            for j in range(m - 3, -1, -1):
                acc = (i0 * values[j] + i1 * values[j + 1]) + q * acc
            out[k] = dw * acc * np.exp(-1j * z * w0)
        else:
            qi = 1.0 / q
            acc = i0 * values[0] + i1 * values[1]
            for j in range(1, m - 1):
                acc = (i0 * values[j] + i1 * values[j + 1]) + qi * acc
            out[k] = dw * acc * np.exp(-1j * z * (w0 + (m - 2) * dw))


def _nudft_loop(values, t0, dt, omegas, out):
    # out[k] = dt * sum_j tau_j values[j] exp(i omega_k t_j), trapezoid tau.
    m = values.shape[0]
    for k in range(omegas.shape[0]):
        om = omegas[k]
        q = np.exp(1j * om * dt)
        acc = 0.5 * values[m - 1]
        for j in range(m - 2, 0, -1):
            acc = values[j] + q * acc
        acc = 0.5 * values[0] + q * acc
        out[k] = dt * acc * np.exp(1j * om * t0)


def _sinc_gram_loop(a, nodes, out):
    n = nodes.shape[0]
    for i in range(n):
        out[i, i] = a / np.pi
        for j in range(i + 1, n):
            d = nodes[i] - nodes[j]
            if abs(d) < 1e-6:
                x = a * d
                v = (a / np.pi) * (1.0 - x * x / 6.0 + x**4 / 120.0)
            else:
                v = np.sin(a * d) / (np.pi * d)
            out[i, j] = v
            out[j, i] = v


if _BACKEND == "numba":
    from numba import njit

    _filon_i01 = njit(cache=True)(_filon_i01)
    _synth_loop_impl = njit(cache=True)(_synth_loop)
    _nudft_loop_impl = njit(cache=True)(_nudft_loop)
    _sinc_gram_loop_impl = njit(cache=True)(_sinc_gram_loop)
else:
    _synth_loop_impl = _synth_loop
    _nudft_loop_impl = _nudft_loop
    _sinc_gram_loop_impl = _sinc_gram_loop


# ---------------------------------------------------------------------------
# vectorized numpy implementations
# ---------------------------------------------------------------------------

_CHUNK = 512


def _filon_i01_np(theta):
    theta = np.asarray(theta, dtype=np.complex128)
    i0 = np.empty_like(theta)
    i1 = np.empty_like(theta)
    small = np.abs(theta) < _FILON_SMALL
    if small.any():
        th = theta[small]
        term = np.ones_like(th)
        s0 = np.zeros_like(th)
        s1 = np.zeros_like(th)
        for k in range(_FILON_TERMS):
            s0 += term / ((k + 1) * (k + 2))
            s1 += term / (k + 2)
            term = term * (-1j * th) / (k + 1)
        i0[small] = s0
        i1[small] = s1
    big = ~small
    if big.any():
        th = theta[big]
        e = np.exp(-1j * th)
        s = (1.0 - e) / (1j * th)
        v1 = (s - e) / (1j * th)
        i0[big] = s - v1
        i1[big] = v1
    return i0, i1


def _synth_numpy(values, w0, dw, zs):
    m = values.shape[0]
    w = w0 + dw * np.arange(m)
    out = np.empty(zs.shape[0], dtype=np.complex128)
    for s in range(0, zs.shape[0], _CHUNK):
        z = zs[s : s + _CHUNK]
        theta = z * dw
        i0, i1 = _filon_i01_np(theta)
        # sum_j exp(-i z w_j) (I0 f_j + I1 f_{j+1}) over panels j = 0..m-2
        ep = np.exp(-1j * np.outer(z, w[:-1]))
        out[s : s + _CHUNK] = dw * (i0 * (ep @ values[:-1]) + i1 * (ep @ values[1:]))
    return out


def _nudft_numpy(values, t0, dt, omegas):
    m = values.shape[0]
    t = t0 + dt * np.arange(m)
    tau = np.ones(m)
    tau[0] = tau[-1] = 0.5
    weighted = tau * values
    out = np.empty(omegas.shape[0], dtype=np.complex128)
    for s in range(0, omegas.shape[0], _CHUNK):
        om = omegas[s : s + _CHUNK]
        out[s : s + _CHUNK] = dt * (np.exp(1j * np.outer(om, t)) @ weighted)
    return out


def _sinc_gram_numpy(a, nodes):
    d = nodes[:, None] - nodes[None, :]
    x = a * d
    small = np.abs(d) < 1e-6
    safe = np.where(small, 1.0, d)
    out = np.where(
        small,
        (a / np.pi) * (1.0 - x * x / 6.0 + x**4 / 120.0),
        np.sin(a * np.where(small, 1.0, d)) / (np.pi * safe),
    )
    return out


# ---------------------------------------------------------------------------
# public dispatchers
# ---------------------------------------------------------------------------


def synth_uniform(values, w0: float, dw: float, zs) -> np.ndarray:
    """Oscillatory integral of the linear interpolant of ``values``.

    Evaluates ``int interp(values)(w) exp(-i z w) dw`` over the uniform grid
    ``w0 + j*dw`` for every entry of ``zs`` (complex allowed).
    """
    values = np.ascontiguousarray(values, dtype=np.complex128)
    zs = np.ascontiguousarray(zs, dtype=np.complex128)
    if values.shape[0] < 2:
        raise ValueError("need at least two spectrum nodes")
    if _BACKEND == "numba":
        out = np.empty(zs.shape[0], dtype=np.complex128)
        _synth_loop_impl(values, float(w0), float(dw), zs, out)
        return out
    return _synth_numpy(values, float(w0), float(dw), zs)


def nudft(values, t0: float, dt: float, omegas) -> np.ndarray:
    """Trapezoid estimate of ``int x(t) exp(i omega t) dt`` on a uniform grid."""
    values = np.ascontiguousarray(values, dtype=np.complex128)
    omegas = np.ascontiguousarray(omegas, dtype=np.float64)
    if values.shape[0] < 2:
        raise ValueError("need at least two samples")
    if _BACKEND == "numba":
        out = np.empty(omegas.shape[0], dtype=np.complex128)
        _nudft_loop_impl(values, float(t0), float(dt), omegas, out)
        return out
    return _nudft_numpy(values, float(t0), float(dt), omegas)


def sinc_gram(a: float, nodes) -> np.ndarray:
    """Symmetric matrix sin(a(x_i - x_j)) / (pi (x_i - x_j)) over real nodes."""
    nodes = np.ascontiguousarray(nodes, dtype=np.float64)
    if _BACKEND == "numba":
        out = np.empty((nodes.shape[0], nodes.shape[0]), dtype=np.float64)
        _sinc_gram_loop_impl(float(a), nodes, out)
        return out
    return _sinc_gram_numpy(float(a), nodes)


def warm_up() -> None:
    """Trigger JIT compilation of all kernels (no-op on the numpy backend)."""
    v = np.array([1.0 + 0j, 0.5, 0.25])
    synth_uniform(v, -1.0, 1.0, np.array([0.3 + 0.1j, 40.0 + 0j]))
    nudft(v, -1.0, 1.0, np.array([0.3, 2.0]))
    sinc_gram(np.pi, np.array([0.0, 1.0, 2.0]))
