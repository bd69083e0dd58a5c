import numpy as np
import pytest

from ofdm_ranging.errors import DimensionError
from ofdm_ranging.linalg import RngStream, eigh_descending
from ofdm_ranging.spreading import (
    despread,
    guardband_selection,
    identity_spreading,
    pdpss_spreading,
)
from ofdm_ranging.waveform import (
    SubcarrierAllocation,
    band_submatrices,
    build_leakage_operator,
    dirichlet_kernel_matrix,
)


class TestIdentity:
    def test_is_identity(self):
        P = identity_spreading(4)
        assert np.array_equal(P.matrix, np.eye(4))
        assert P.eta == 1.0
        assert P.scheme == "identity"

    def test_rejects_empty(self):
        with pytest.raises(DimensionError):
            identity_spreading(0)


class TestGuardband:
    def test_32_at_09(self):
        P = guardband_selection(32, 0.9)
        assert P.cols == 28
        kept = [int(np.flatnonzero(P.matrix[:, j])[0]) for j in range(28)]
        assert kept == list(range(2, 30))

    def test_eta_one_is_identity(self):
        P = guardband_selection(8, 1.0)
        assert np.array_equal(P.matrix, np.eye(8))

    def test_odd_drop_goes_low(self):
        P = guardband_selection(8, 0.7)  # keep 5, drop 3: 2 low, 1 high
        kept = [int(np.flatnonzero(P.matrix[:, j])[0]) for j in range(5)]
        assert kept == [2, 3, 4, 5, 6]

    def test_exact_orthonormal(self):
        P = guardband_selection(32, 0.9)
        assert np.array_equal(P.matrix.conj().T @ P.matrix, np.eye(28))

    def test_empty_selection_rejected(self):
        with pytest.raises(ValueError):
            guardband_selection(5, 0.1)


class TestPdpss:
    def test_shape_and_orthonormality(self):
        alloc = SubcarrierAllocation(128, 32)
        P = pdpss_spreading(alloc, 1, 0.9)
        assert P.matrix.shape == (32, 28)
        assert np.abs(P.matrix.conj().T @ P.matrix - np.eye(28)).max() <= 1e-8
        # even samples of the kernel eigenvectors hold half their energy
        assert P.pre_orthonormal_dev == pytest.approx(0.5, abs=1e-6)

    def test_deterministic(self):
        alloc = SubcarrierAllocation(64, 16)
        a = pdpss_spreading(alloc, 2, 0.9)
        b = pdpss_spreading(alloc, 2, 0.9)
        assert np.array_equal(a.matrix, b.matrix)

    def test_kernel_eigenvalues_real_positive_in_retained_set(self):
        alloc = SubcarrierAllocation(64, 16)
        B = dirichlet_kernel_matrix(64)
        _, _, B1_in, _, B2_in, _ = band_submatrices(B, alloc)
        for block, band in ((B1_in, 16), (B2_in, 48)):
            values, _ = eigh_descending(block)
            assert np.abs(values.imag).max() == 0  # real symmetric input
            kept = values[: int(0.9 * band)]
            assert np.all(kept > 0)

    def test_beats_guardband_on_out_of_band_leakage(self):
        alloc = SubcarrierAllocation(128, 32)
        W_dpss = build_leakage_operator(alloc, 1, pdpss_spreading(alloc, 1, 0.9))
        W_guard = build_leakage_operator(alloc, 1, guardband_selection(32, 0.9))
        split = 2 * 32
        leak_dpss = W_dpss.row_power()[split:].sum()
        leak_guard = W_guard.row_power()[split:].sum()
        assert leak_dpss < leak_guard

    def test_eta_bounds(self):
        alloc = SubcarrierAllocation(16, 4)
        with pytest.raises(ValueError):
            pdpss_spreading(alloc, 1, 0.0)
        with pytest.raises(ValueError):
            pdpss_spreading(alloc, 1, 1.5)


class TestDespread:
    def test_flat_channel_roundtrip(self):
        alloc = SubcarrierAllocation(128, 32)
        P = pdpss_spreading(alloc, 1, 0.9)
        rng = np.random.default_rng(0)
        s = rng.normal(size=P.cols) + 1j * rng.normal(size=P.cols)
        recovered = despread(P, P.matrix @ s)
        assert np.abs(recovered - s).max() <= 1e-9

    def test_dimension_count(self):
        alloc = SubcarrierAllocation(128, 32)
        P = pdpss_spreading(alloc, 1, 0.9)
        assert P.cols == int(np.floor(0.9 * 32)) == 28

    def test_noise_variance_preserved(self):
        # white noise of variance sigma^2 per bin stays at sigma^2 per symbol
        alloc = SubcarrierAllocation(64, 16)
        P = pdpss_spreading(alloc, 1, 0.9)
        sigma2 = 0.3
        gen = RngStream(42).generator()
        trials = 4000
        noise = np.sqrt(sigma2 / 2) * (
            gen.standard_normal((trials, 16)) + 1j * gen.standard_normal((trials, 16))
        )
        out = despread(P, noise)
        per_symbol = np.mean(np.abs(out) ** 2, axis=0)
        stderr = sigma2 / np.sqrt(trials)
        assert np.abs(per_symbol - sigma2).max() < 4 * stderr

    def test_dimension_mismatch(self):
        P = identity_spreading(8)
        with pytest.raises(DimensionError):
            despread(P, np.zeros(9, dtype=complex))
