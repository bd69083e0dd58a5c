"""Complex linear-algebra substrate: DFT matrices, ordered eigendecomposition,
and counter-based random streams.

All DFT matrices here are unitary (1/sqrt(n) normalization); every quantity
downstream is defined in terms of these, so no hidden scale factors circulate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DimensionError

HERMITIAN_TOL = 1e-10
SIGN_PIVOT_TOL = 1e-12


def dft_matrix(n: int) -> np.ndarray:
    """Unitary n-point DFT matrix, entry (l, k) = exp(-2j*pi*l*k/n) / sqrt(n)."""
    if n < 1:
        raise DimensionError(f"DFT size must be >= 1, got {n}")
    idx = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)


def eigh_descending(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.

    The returned eigenvectors are column-orthonormal and sign-fixed: each
    column is rotated so that its first component with magnitude above
    ``SIGN_PIVOT_TOL`` is real and positive.  This makes the decomposition
    reproducible across runs for matrices with distinct eigenvalues.

    Raises
    ------
    ContractViolation
        If ``a`` deviates from Hermitian symmetry by more than 1e-10
        (relative to its largest entry).  Inputs are rejected rather than
        symmetrized silently.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    scale = max(np.abs(a).max(), 1.0)
    asym = np.abs(a - a.conj().T).max()
    if asym > HERMITIAN_TOL * scale:
        raise ContractViolation(
            f"matrix is not Hermitian: max asymmetry {asym:.3e} (tol {HERMITIAN_TOL:.0e})"
        )
    values, vectors = np.linalg.eigh(a)
    # stable descending order so ties keep their LAPACK positions
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        sig = np.flatnonzero(np.abs(col) > SIGN_PIVOT_TOL)
        if sig.size:
            pivot = col[sig[0]]
            vectors[:, j] = col * (np.conj(pivot) / np.abs(pivot))
    return values, vectors


@dataclass(frozen=True)
class RngStream:
    """A reproducible, independent random stream.

    Streams are counter-based (Philox keyed by ``(master_seed, stream_index)``):
    the same pair always yields the same draw sequence, and distinct stream
    indices yield statistically independent streams by construction.  Streams
    must not be shared between workers; each worker derives its own index.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if self.stream_index < 0:
            raise ValueError("stream_index must be non-negative")

    def generator(self) -> np.random.Generator:
        key = np.array(
            [int(self.master_seed) % (1 << 64), int(self.stream_index) % (1 << 64)],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, index: int) -> "RngStream":
        """Stream ``index`` under the same master seed."""
        return RngStream(self.master_seed, index)


def draw_symbols(stream: RngStream, constellation, count: int) -> np.ndarray:
    """Draw ``count`` i.i.d. uniform symbols from ``constellation.points``."""
    if count < 0:
        raise ValueError("count must be >= 0")
    points = np.asarray(constellation.points)
    if count == 0:
        return np.empty(0, dtype=complex)
    idx = stream.generator().integers(0, len(points), size=count)
    return points[idx]
