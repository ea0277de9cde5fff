"""Bandlimited-signal machinery against closed-form transform pairs."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from warpband.errors import (
    ExponentOverflowError,
    GridMismatchError,
    WindowTooShortError,
)
from warpband.growth import estimate_order, estimate_type, maclaurin_coefficients
from warpband.paley_wiener import (
    BandSpec,
    RealGrid,
    Spectrum,
    TimeSamples,
    default_grid,
    forward_transform,
    kernel_section,
    l2_inner,
    pw_kernel,
    random_signal,
    sample_on_grid,
    sinc_signal,
    synthesize,
)

GRID = default_grid()


class TestSynthesize:
    def test_normalized_sinc_at_zero(self):
        f = sinc_signal(np.pi)
        # int_{-pi}^{pi} (1/2pi) dw = 1
        assert abs(synthesize(f, 0.0) - 1.0) < 1e-12

    def test_sinc_zero_at_nonzero_integers(self):
        f = sinc_signal(np.pi)
        for z in (1.0, 2.0, -5.0):
            assert abs(synthesize(f, z)) < 1e-12

    def test_zero_spectrum_synthesizes_to_zero(self):
        spec = Spectrum(BandSpec(1.0), np.zeros(64, dtype=complex))
        vals = synthesize(spec, np.linspace(-3, 3, 11))
        assert np.max(np.abs(vals)) == 0.0

    def test_scalar_in_scalar_out(self):
        f = sinc_signal(1.0)
        assert isinstance(synthesize(f, 0.3), complex)

    def test_exponent_cap(self):
        f = sinc_signal(np.pi)
        with pytest.raises(ExponentOverflowError):
            synthesize(f, 0.0 + 300.0j)

    def test_batch_matches_pointwise_on_real_grid(self):
        f = random_signal(1.0, seed=3)
        grid = RealGrid(-5.0, 0.5, 21)
        batch = sample_on_grid(f, grid).values
        single = np.array([synthesize(f, t) for t in grid.points()])
        assert np.max(np.abs(batch - single)) < 1e-14


class TestPwKernel:
    def test_diagonal_removable_singularity(self):
        assert abs(pw_kernel(np.pi, 0.0, 0.0) - 1.0) < 1e-15

    def test_off_diagonal_value(self):
        # sin(1 * (1 - 0)) / (pi * 1)
        want = math.sin(1.0) / math.pi
        assert abs(pw_kernel(1.0, 1.0, 0.0) - want) < 1e-15

    def test_integer_nodes_vanish(self):
        for m, n in [(0, 1), (3, -2), (7, 7 - 4)]:
            assert abs(pw_kernel(np.pi, float(m), float(n))) < 1e-12

    def test_hermitian_symmetry_random_pairs(self):
        rng = np.random.default_rng(17)
        z = rng.standard_normal(100) + 1j * rng.standard_normal(100)
        w = rng.standard_normal(100) + 1j * rng.standard_normal(100)
        k_zw = pw_kernel(1.7, z, w)
        k_wz = pw_kernel(1.7, w, z)
        assert np.max(np.abs(k_zw - np.conj(k_wz))) < 1e-13

    @settings(max_examples=300, deadline=None)
    @given(
        a=st.floats(0.1, 5.0),
        zr=st.floats(-8.0, 8.0),
        zi=st.floats(-8.0, 8.0),
        wr=st.floats(-8.0, 8.0),
        wi=st.floats(-8.0, 8.0),
    )
    def test_hermitian_symmetry_property(self, a, zr, zi, wr, wi):
        z = complex(zr, zi)
        w = complex(wr, wi)
        k_zw = pw_kernel(a, z, w)
        k_wz = pw_kernel(a, w, z)
        scale = max(abs(k_zw), abs(k_wz), 1e-30)
        assert abs(k_zw - np.conj(k_wz)) <= 1e-12 * scale

    def test_positive_semidefinite_random_nodes(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            n = rng.integers(2, 21)
            nodes = np.sort(rng.uniform(-10, 10, n))
            mat = pw_kernel(np.pi, nodes[:, None], nodes[None, :])
            eigs = np.linalg.eigvalsh(mat.real)
            assert eigs.min() >= -1e-10


class TestL2Inner:
    def test_sinc_unit_norm(self):
        f = sample_on_grid(sinc_signal(np.pi), GRID)
        assert abs(l2_inner(f, f).real - 1.0) < 1e-3

    def test_zero_partner(self):
        f = sample_on_grid(sinc_signal(np.pi), GRID)
        zero = TimeSamples(GRID, np.zeros(GRID.count, dtype=complex))
        assert l2_inner(f, zero) == 0.0

    def test_shifted_sincs_orthogonal(self):
        # Shannon orthogonality of integer-shifted cardinal functions
        t = GRID.points()
        one = TimeSamples(GRID, pw_kernel(np.pi, t, 1.0))
        three = TimeSamples(GRID, pw_kernel(np.pi, t, 3.0))
        assert abs(l2_inner(one, three)) < 1e-3

    def test_grid_mismatch(self):
        a = TimeSamples(RealGrid(0.0, 0.1, 11), np.zeros(11, dtype=complex))
        b = TimeSamples(RealGrid(0.0, 0.2, 11), np.zeros(11, dtype=complex))
        with pytest.raises(GridMismatchError):
            l2_inner(a, b)


class TestForwardTransform:
    @pytest.mark.filterwarnings("ignore::warpband.errors.WindowDecayWarning")
    def test_flat_spectrum_recovered(self):
        x = sample_on_grid(sinc_signal(np.pi), GRID)
        spec = forward_transform(x, freq_halfwidth=2 * np.pi)
        w = spec.nodes()
        want = np.where(np.abs(w) < np.pi, 1.0 / (2 * np.pi), 0.0)
        inside = np.abs(np.abs(w) - np.pi) > 0.2  # away from the jump
        assert np.max(np.abs(spec.values - want)[inside]) < 1e-2

    def test_zero_signal(self):
        x = TimeSamples(GRID, np.zeros(GRID.count, dtype=complex))
        spec = forward_transform(x, freq_halfwidth=2.0)
        assert np.max(np.abs(spec.values)) == 0.0

    @pytest.mark.filterwarnings("ignore::warpband.errors.WindowDecayWarning")
    def test_round_trip_random_signal(self):
        f = random_signal(1.0, seed=9)
        x = sample_on_grid(f, GRID)
        spec = forward_transform(x, freq_halfwidth=4.0)
        back = synthesize(spec, GRID.points())
        assert np.max(np.abs(back - x.values)) < 1e-4

    def test_window_too_short_raises(self):
        grid = RealGrid(-3.0, 0.05, 121)
        x = sample_on_grid(sinc_signal(1.0), grid)  # 1/t decay: far from decayed
        with pytest.raises(WindowTooShortError):
            forward_transform(x, freq_halfwidth=4.0)

    def test_slow_decay_warns(self):
        x = sample_on_grid(sinc_signal(np.pi), GRID)  # ~1.6e-3 of peak at edges
        with pytest.warns(UserWarning):
            forward_transform(x, freq_halfwidth=4.0)


class TestReproducingProperty:
    @pytest.mark.parametrize("x0", [-3.0, 0.0, 1.7])
    def test_inner_product_against_kernel_section(self, x0):
        for seed in (1, 2):
            f = random_signal(1.0, seed=seed)
            fs = sample_on_grid(f, GRID)
            ks = kernel_section(BandSpec(1.0), x0, GRID)
            lhs = l2_inner(fs, ks)
            rhs = synthesize(f, x0)
            assert abs(lhs - rhs) < 1e-3


class TestPlancherel:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_time_energy_is_2pi_spectral_energy(self, seed):
        f = random_signal(1.0, seed=seed, normalize=False)
        time_energy = l2_inner(sample_on_grid(f, GRID), sample_on_grid(f, GRID)).real
        spectral = 2.0 * np.pi * f.spectrum.l2_mass()
        assert abs(time_energy - spectral) < 1e-3 * spectral


class TestGrowthConsistency:
    def test_synthesized_sinc_has_expected_order_and_type(self):
        # regular coefficient decay: the order extrapolation is reliable here
        a = 1.0
        f = sinc_signal(a)
        coeffs = maclaurin_coefficients(
            lambda z: synthesize(f, z), n_terms=40, radius=20.0, samples=512
        )
        rho = estimate_order(coeffs)
        assert 0.9 < rho < 1.1
        sigma = estimate_type(coeffs, 1.0)
        assert sigma <= a * 1.1

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_random_signal_type_bounded_by_bandwidth(self, seed):
        # random spectra give irregular coefficient magnitudes, so only the
        # type bound (not the order extrapolation) is asserted here
        a = 1.0
        f = random_signal(a, seed=seed)
        coeffs = maclaurin_coefficients(
            lambda z: synthesize(f, z), n_terms=40, radius=20.0, samples=512
        )
        sigma = estimate_type(coeffs, 1.0)
        assert sigma <= a * 1.1
