"""Correlation engines: direct and FFT-based aperiodic correlation, circular
correlation, and multi-symbol frame correlation.

Lag conventions
---------------
Double-sided profiles cover lags -(N-1)..N-1 in ascending order.  The value
at lag k >= 0 is sum_n conj(x[n]) * y[n+k]; negative lags use the mirrored
sum sum_n conj(x[n+|k|]) * y[n].

The FFT engines work on the 2N-point transforms of zero-padded inputs.  With
unitary transforms the inverse-transform output must be scaled by sqrt(2N)
(sqrt(N) in the circular case) to reproduce the lag-domain sums; this constant
was calibrated once against the shift-matrix definition and is frozen here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

NORM_RAW = "raw"
NORM_MAIN_LOBE = "normalized"  # divided by (M * symbols-per-OFDM-symbol)^2


@dataclass
class CorrelationProfile:
    """Per-lag correlation values, optionally with per-lag standard errors."""

    lags: np.ndarray
    values: np.ndarray
    normalization: str = NORM_RAW
    stderr: np.ndarray | None = None

    def __post_init__(self):
        if len(self.lags) != len(self.values):
            raise DimensionError("lags and values must have equal length")

    def value_at(self, lag: int):
        idx = np.flatnonzero(self.lags == lag)
        if idx.size != 1:
            raise KeyError(f"lag {lag} not present")
        return self.values[idx[0]]

    @property
    def zero_index(self) -> int:
        return int(np.flatnonzero(self.lags == 0)[0])


def double_sided_lags(N: int) -> np.ndarray:
    return np.arange(-(N - 1), N)


def aperiodic_corr_direct(x: np.ndarray, y: np.ndarray) -> CorrelationProfile:
    """Aperiodic (linear) correlation via the lag-domain sums; the reference engine."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError("x and y must be 1-D vectors of equal length")
    N = len(x)
    lags = double_sided_lags(N)
    values = np.empty(2 * N - 1, dtype=complex)
    for i, k in enumerate(lags):
        if k >= 0:
            values[i] = np.vdot(x[: N - k], y[k:])
        else:
            values[i] = np.vdot(x[-k:], y[: N + k])
    return CorrelationProfile(lags, values)


def periodic_corr(x: np.ndarray, y: np.ndarray) -> CorrelationProfile:
    """Circular correlation over lags 0..N-1, evaluated in the frequency domain."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError("x and y must be 1-D vectors of equal length")
    N = len(x)
    xf = np.fft.fft(x, norm="ortho")
    yf = np.fft.fft(y, norm="ortho")
    values = np.fft.ifft(np.conj(xf) * yf, norm="ortho") * np.sqrt(N)
    return CorrelationProfile(np.arange(N), values)


def _spectra_to_profile(prod: np.ndarray, N: int) -> np.ndarray:
    """Map a 2N-point cross-spectrum to the lag order -(N-1)..N-1."""
    c = np.fft.ifft(prod, norm="ortho") * np.sqrt(2 * N)
    out = np.empty(2 * N - 1, dtype=complex)
    out[N - 1 :] = c[:N]        # lags 0..N-1
    out[: N - 1] = c[N + 1 :]   # lags -(N-1)..-1
    return out


def aperiodic_corr_fft(x: np.ndarray, y: np.ndarray) -> CorrelationProfile:
    """Aperiodic correlation via zero-padding to 2N and pointwise spectral products."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError("x and y must be 1-D vectors of equal length")
    N = len(x)
    xf = np.fft.fft(x, n=2 * N, norm="ortho")
    yf = np.fft.fft(y, n=2 * N, norm="ortho")
    return CorrelationProfile(double_sided_lags(N), _spectra_to_profile(np.conj(xf) * yf, N))


def frame_corr(x_frame: np.ndarray, y_frame: np.ndarray) -> CorrelationProfile:
    """Correlation of M-symbol frames, restricted to lags |k| <= N-1.

    Equals the aperiodic correlation of the two concatenated M*N-sample
    sequences on that lag range: same-index symbol pairs contribute at lag k,
    adjacent-index pairs at lag -(N-k) (and mirrored on the negative half).
    """
    x_frame = np.atleast_2d(np.asarray(x_frame, dtype=complex))
    y_frame = np.atleast_2d(np.asarray(y_frame, dtype=complex))
    if x_frame.shape != y_frame.shape:
        raise DimensionError("frames must have identical (M, N) shapes")
    M, N = x_frame.shape
    xf = np.fft.fft(x_frame, n=2 * N, axis=1, norm="ortho")
    yf = np.fft.fft(y_frame, n=2 * N, axis=1, norm="ortho")
    same = (np.conj(xf) * yf).sum(axis=0)
    if M > 1:
        up = (np.conj(xf[:-1]) * yf[1:]).sum(axis=0)
        down = (np.conj(xf[1:]) * yf[:-1]).sum(axis=0)
    else:
        up = np.zeros(2 * N, dtype=complex)
        down = np.zeros(2 * N, dtype=complex)
    c_same = _spectra_to_profile(same, N)
    c_up = np.fft.ifft(up, norm="ortho") * np.sqrt(2 * N)
    c_down = np.fft.ifft(down, norm="ortho") * np.sqrt(2 * N)
    values = c_same.copy()
    # adjacent-symbol terms: lag k>=0 picks c_up[-(N-k)] (index N+k),
    # lag -m picks c_down[N-m]; index N is the zero-overlap lag +-N.
    values[N - 1 :] += c_up[N : 2 * N]
    values[: N - 1] += c_down[1:N]
    return CorrelationProfile(double_sided_lags(N), values)
