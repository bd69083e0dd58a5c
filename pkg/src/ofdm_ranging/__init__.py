"""Multi-user OFDM ranging analysis: aperiodic correlation of two-user OFDM
frames, closed-form expected squared autocorrelation and integrated sidelobe
level with inter-band interference, the Frobenius bound on inter-band energy,
and prolate (Dirichlet-kernel eigenvector) spreading that suppresses it.
Every closed form is cross-validated by a seeded Monte Carlo estimator.
"""

from .analytic import (
    EislReport,
    Scenario,
    avg_sq_acf,
    avg_sq_acf_limit,
    avg_sq_acf_matrix,
    eib_upper_bound,
    eisl,
    inter_band_energy,
    inter_band_energy_blocked,
    main_lobe_energy,
    make_scenario,
)
from .correlation import (
    CorrelationProfile,
    aperiodic_corr_direct,
    aperiodic_corr_fft,
    frame_corr,
    periodic_corr,
)
from .linalg import RngStream, dft_matrix, draw_symbols, eigh_descending
from .montecarlo import McEstimate, ValidationReport, estimate_acf, estimate_eisl, validate
from .spreading import (
    despread,
    guardband_selection,
    identity_spreading,
    make_spreading,
    pdpss_spreading,
)
from .waveform import (
    Constellation,
    LeakageOperator,
    SpreadingMatrix,
    SubcarrierAllocation,
    band_submatrices,
    build_leakage_operator,
    dirichlet_kernel_matrix,
    make_constellation,
    ofdm_modulate,
)

__all__ = [
    "Constellation",
    "CorrelationProfile",
    "EislReport",
    "LeakageOperator",
    "McEstimate",
    "RngStream",
    "Scenario",
    "SpreadingMatrix",
    "SubcarrierAllocation",
    "ValidationReport",
    "aperiodic_corr_direct",
    "aperiodic_corr_fft",
    "avg_sq_acf",
    "avg_sq_acf_limit",
    "avg_sq_acf_matrix",
    "band_submatrices",
    "build_leakage_operator",
    "despread",
    "dft_matrix",
    "dirichlet_kernel_matrix",
    "draw_symbols",
    "eib_upper_bound",
    "eigh_descending",
    "eisl",
    "estimate_acf",
    "estimate_eisl",
    "frame_corr",
    "guardband_selection",
    "identity_spreading",
    "inter_band_energy",
    "inter_band_energy_blocked",
    "main_lobe_energy",
    "make_constellation",
    "make_scenario",
    "make_spreading",
    "ofdm_modulate",
    "pdpss_spreading",
    "periodic_corr",
    "validate",
]

__version__ = "0.1.0"
