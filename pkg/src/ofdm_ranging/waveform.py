"""Constellations, subcarrier allocations, OFDM synthesis, and the leakage
operators that map per-user symbols to the zero-padded 2N-point spectrum.

Conventions
-----------
* User 1 occupies subcarriers ``[0, L-1]``, user 2 occupies ``[L, N-1]``.
* All DFTs are unitary.  The leakage operator is *defined* by the product

      W = F_2N @ [zero-pad N -> 2N] @ F_N^H @ [band embedding] @ P

  and is therefore an isometry whenever P has orthonormal columns.
* The same operator also factors through the Dirichlet interpolation kernel
  (diagonal phase x kernel block x upsampling x diagonal phase x P, up to one
  constant scalar).  ``build_leakage_operator`` computes both and refuses to
  return if they disagree, so the kernel route is continuously validated
  against the definitional one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InternalConsistencyError

FACTORED_MATCH_TOL = 1e-9
ISOMETRY_TOL = 1e-8

_QPSK_POINTS = (np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2)).astype(complex)


def _square_qam(levels: np.ndarray) -> np.ndarray:
    pts = np.array([a + 1j * b for a in levels for b in levels], dtype=complex)
    return pts / np.sqrt(np.mean(np.abs(pts) ** 2))


@dataclass(frozen=True)
class Constellation:
    """Unit-average-power, zero-mean symbol alphabet with its kurtosis."""

    name: str
    points: np.ndarray
    mu4: float

    def __post_init__(self):
        power = np.mean(np.abs(self.points) ** 2)
        mean = np.abs(np.mean(self.points))
        mu4 = np.mean(np.abs(self.points) ** 4) / power**2
        if abs(power - 1.0) > 1e-12 or mean > 1e-12 or abs(mu4 - self.mu4) > 1e-12:
            raise ValueError(f"inconsistent constellation '{self.name}'")


_CONSTELLATIONS = {
    "QPSK": _QPSK_POINTS,
    "QAM16": _square_qam(np.array([-3, -1, 1, 3])),
    "QAM64": _square_qam(np.array([-7, -5, -3, -1, 1, 3, 5, 7])),
}


def make_constellation(kind: str) -> Constellation:
    """Build a supported constellation; mu4 is computed by enumerating the alphabet."""
    key = kind.upper().replace("-", "").replace("_", "")
    if key in ("16QAM",):
        key = "QAM16"
    if key in ("64QAM",):
        key = "QAM64"
    if key not in _CONSTELLATIONS:
        raise ValueError(f"unsupported constellation '{kind}' (QPSK, QAM16, QAM64)")
    points = _CONSTELLATIONS[key]
    mu4 = float(np.mean(np.abs(points) ** 4) / np.mean(np.abs(points) ** 2) ** 2)
    return Constellation(key, points, mu4)


@dataclass(frozen=True)
class SubcarrierAllocation:
    """N total subcarriers split contiguously: user 1 gets [0, L-1], user 2 the rest."""

    N: int
    L: int

    def __post_init__(self):
        if not 0 < self.L < self.N:
            raise DimensionError(f"need 0 < L < N, got L={self.L}, N={self.N}")

    def band_size(self, user: int) -> int:
        if user == 1:
            return self.L
        if user == 2:
            return self.N - self.L
        raise ValueError(f"user must be 1 or 2, got {user}")

    def band_start(self, user: int) -> int:
        return 0 if user == 1 else self.L


@dataclass(frozen=True)
class SpreadingMatrix:
    """Orthonormal-column map from information symbols to subcarrier amplitudes."""

    matrix: np.ndarray
    scheme: str  # identity | guardband | pdpss
    eta: float
    pre_orthonormal_dev: float = 0.0  # deviation before re-orthonormalization, if any

    def __post_init__(self):
        dev = np.abs(self.matrix.conj().T @ self.matrix - np.eye(self.cols)).max()
        if dev > ISOMETRY_TOL:
            raise ValueError(f"spreading matrix not column-orthonormal: dev {dev:.3e}")

    @property
    def band(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class LeakageOperator:
    """2N x cols isometry from one user's symbols to the zero-padded spectrum."""

    matrix: np.ndarray
    owner: int
    alloc: SubcarrierAllocation
    factored_dev: float = field(default=0.0, compare=False)

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def row_power(self) -> np.ndarray:
        """Per-bin energy gains: squared row norms (length 2N, real)."""
        return (np.abs(self.matrix) ** 2).sum(axis=1)


def ofdm_modulate(
    alloc: SubcarrierAllocation,
    p1: SpreadingMatrix,
    s1: np.ndarray,
    p2: SpreadingMatrix,
    s2: np.ndarray,
) -> np.ndarray:
    """Time-domain OFDM symbol carrying both users' spread amplitudes.

    Returns the length-N inverse unitary DFT of the stacked spectrum
    ``[p1 @ s1 ; p2 @ s2]``.
    """
    if p1.band != alloc.L or p2.band != alloc.N - alloc.L:
        raise DimensionError("spreading matrices do not match the allocation bands")
    if len(s1) != p1.cols or len(s2) != p2.cols:
        raise DimensionError("symbol vector lengths do not match spreading columns")
    spectrum = np.zeros(alloc.N, dtype=complex)
    spectrum[: alloc.L] = p1.matrix @ s1
    spectrum[alloc.L :] = p2.matrix @ s2
    return np.fft.ifft(spectrum, norm="ortho")


def dirichlet_kernel_matrix(N: int) -> np.ndarray:
    """2N x 2N symmetric Toeplitz Dirichlet kernel on the double-density grid.

    Entry (k, k') is sin(N*d*pi/(2N)) / sin(d*pi/(2N)) with d = k - k'; the
    diagonal takes the limit value N.  Even nonzero offsets vanish exactly
    (the numerator is sin(d*pi/2)), so the zeros are set exactly rather than
    through floating-point sin evaluations.
    """
    if N < 2:
        raise DimensionError(f"kernel needs N >= 2, got {N}")
    offsets = np.arange(2 * N)
    col = np.zeros(2 * N)
    col[0] = N
    odd = offsets[1::2]
    col[1::2] = np.sin(N * odd * np.pi / (2 * N)) / np.sin(odd * np.pi / (2 * N))
    idx = np.abs(offsets[:, None] - offsets[None, :])
    return col[idx]


def band_submatrices(B: np.ndarray, alloc: SubcarrierAllocation):
    """Partition the Dirichlet kernel into per-user column blocks and their
    in-band / out-of-band row blocks.

    Returns ``(B1, B2, B1_in, B1_out, B2_in, B2_out)`` where B1/B2 hold the
    columns over each user's double-density band positions, ``*_in`` are the
    square symmetric in-band row blocks, and ``*_out`` the complementary rows
    that express leakage into the other band.
    """
    N, L = alloc.N, alloc.L
    if B.shape != (2 * N, 2 * N):
        raise DimensionError(f"kernel shape {B.shape} does not match N={N}")
    B1 = B[:, 0 : 2 * L - 1]
    B2 = B[:, 2 * L : 2 * N - 1]
    B1_in = B1[0 : 2 * L - 1, :]
    B1_out = B1[2 * L - 1 :, :]
    B2_in = B2[2 * L : 2 * N - 1, :]
    B2_out = B2[0 : 2 * L + 1, :]
    return B1, B2, B1_in, B1_out, B2_in, B2_out


def _definitional_operator(alloc: SubcarrierAllocation, user: int, P: np.ndarray) -> np.ndarray:
    embedded = np.zeros((alloc.N, P.shape[1]), dtype=complex)
    start = alloc.band_start(user)
    embedded[start : start + P.shape[0], :] = P
    time = np.fft.ifft(embedded, axis=0, norm="ortho")  # F_N^H
    padded = np.concatenate([time, np.zeros_like(time)], axis=0)
    return np.fft.fft(padded, axis=0, norm="ortho")  # F_2N


def _factored_operator(alloc: SubcarrierAllocation, user: int, P: np.ndarray) -> np.ndarray:
    """Dirichlet-kernel route, up to one constant scalar.

    The leading diagonal carries exp(-1j*pi*k*(N-1)/(2N)) on the 2N grid; the
    inner diagonal carries the conjugate phase sampled at the even (upsampled)
    band positions.  For user 2 the band offset contributes only a constant
    unit-modulus factor, absorbed by the fitted scalar.
    """
    N = alloc.N
    band = alloc.band_size(user)
    B = dirichlet_kernel_matrix(N)
    B1, B2, *_ = band_submatrices(B, alloc)
    cols = B1 if user == 1 else B2
    lead = np.exp(-1j * np.pi * np.arange(2 * N) * (N - 1) / (2 * N))
    inner = np.exp(1j * np.pi * 2 * np.arange(band) * (N - 1) / (2 * N))
    upsampled = cols[:, ::2]  # kernel columns at the even band positions
    return (lead[:, None] * upsampled) * inner[None, :] @ P


def build_leakage_operator(
    alloc: SubcarrierAllocation, user: int, P: SpreadingMatrix
) -> LeakageOperator:
    """Build a user's leakage operator and cross-validate its two constructions.

    The definitional DFT product is authoritative.  The Dirichlet-kernel
    factorization is computed alongside, a single complex scalar is fitted by
    least squares on the first column (it absorbs the 1/(sqrt(2)*N) kernel
    normalization and, for user 2, the constant band-offset phase), and the
    two must agree to ``FACTORED_MATCH_TOL`` in relative Frobenius norm.
    """
    if P.band != alloc.band_size(user):
        raise DimensionError(
            f"spreading band {P.band} does not match user-{user} band {alloc.band_size(user)}"
        )
    W = _definitional_operator(alloc, user, P.matrix)
    F = _factored_operator(alloc, user, P.matrix)
    scalar = np.vdot(F[:, 0], W[:, 0]) / np.vdot(F[:, 0], F[:, 0])
    dev = np.linalg.norm(scalar * F - W) / np.linalg.norm(W)
    if dev > FACTORED_MATCH_TOL:
        raise InternalConsistencyError(
            f"definitional vs kernel-factored operator mismatch: {dev:.3e} "
            f"(tol {FACTORED_MATCH_TOL:.0e})"
        )
    return LeakageOperator(W, user, alloc, factored_dev=float(dev))
