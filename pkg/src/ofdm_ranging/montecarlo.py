"""Monte Carlo estimation of the squared-correlation profile and EISL; the
independent oracle for every closed form in :mod:`ofdm_ranging.analytic`.

Determinism
-----------
Trial ``t`` always draws from the stream ``(scenario.seed, t)`` regardless of
how trials are distributed over workers.  Trials are processed in fixed
blocks of :data:`BLOCK_SIZE` (by trial index); each block is reduced with
numpy's pairwise summation and block results are combined in block order, so
the estimate is bit-identical for any worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import Scenario, avg_sq_acf, eisl as analytic_eisl
from .correlation import NORM_MAIN_LOBE, CorrelationProfile, double_sided_lags
from .linalg import RngStream

BLOCK_SIZE = 256
ZERO_VARIANCE_TOL = 1e-9


@dataclass
class McEstimate:
    """Sample mean profile with per-lag standard errors."""

    profile: CorrelationProfile
    trials: int
    elapsed: float


@dataclass
class ValidationReport:
    """Per-lag z-scores of the Monte Carlo estimate against the closed form."""

    scenario: Scenario
    trials: int
    sigma_band: float
    z: np.ndarray
    lags: np.ndarray
    eisl_z: float
    passed: bool

    @property
    def max_abs_z(self) -> float:
        return float(max(np.abs(self.z).max(), abs(self.eisl_z)))

    def failures(self):
        """Lags whose |z| exceeds the band (the EISL check reports lag 'eisl')."""
        bad = [(int(k), float(z)) for k, z in zip(self.lags, self.z) if abs(z) > self.sigma_band]
        if abs(self.eisl_z) > self.sigma_band:
            bad.append(("eisl", float(self.eisl_z)))
        return bad

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict} trials={self.trials} max|z|={self.max_abs_z:.2f} "
            f"band={self.sigma_band:g} lags_out={len(self.failures())}"
        )


def _block_stats(scn: Scenario, t0: int, t1: int) -> tuple[np.ndarray, ...]:
    """Accumulate one trial block: profile sums, squared sums, and EISL sums."""
    N, L, M = scn.N, scn.L, scn.M
    K1, K2 = scn.spread1.cols, scn.spread2.cols
    points = scn.constellation.points
    npts = len(points)
    count = t1 - t0

    idx1 = np.empty((count, M, K1), dtype=np.int64)
    idx2 = np.empty((count, M, K2), dtype=np.int64)
    for i, t in enumerate(range(t0, t1)):
        gen = RngStream(scn.seed, t).generator()
        idx1[i] = gen.integers(0, npts, size=(M, K1))
        idx2[i] = gen.integers(0, npts, size=(M, K2))
    s1 = points[idx1]
    s2 = points[idx2]

    # user-2 bins are still zero when x1 is synthesized; filling them
    # afterwards turns the same buffer into the received spectrum
    spec = np.zeros((count, M, N), dtype=complex)
    spec[:, :, :L] = s1 @ scn.spread1.matrix.T
    x1 = np.fft.ifft(spec, axis=2, norm="ortho")
    spec[:, :, L:] = scn.alpha * (s2 @ scn.spread2.matrix.T)
    y = np.fft.ifft(spec, axis=2, norm="ortho")

    xf = np.fft.fft(x1, n=2 * N, axis=2, norm="ortho")
    yf = np.fft.fft(y, n=2 * N, axis=2, norm="ortho")
    same = (np.conj(xf) * yf).sum(axis=1)
    c_same = np.fft.ifft(same, axis=1, norm="ortho") * np.sqrt(2 * N)
    prof = np.empty((count, 2 * N - 1), dtype=complex)
    prof[:, N - 1 :] = c_same[:, :N]
    prof[:, : N - 1] = c_same[:, N + 1 :]
    if M > 1:
        up = (np.conj(xf[:, :-1]) * yf[:, 1:]).sum(axis=1)
        down = (np.conj(xf[:, 1:]) * yf[:, :-1]).sum(axis=1)
        c_up = np.fft.ifft(up, axis=1, norm="ortho") * np.sqrt(2 * N)
        c_down = np.fft.ifft(down, axis=1, norm="ortho") * np.sqrt(2 * N)
        prof[:, N - 1 :] += c_up[:, N:]
        prof[:, : N - 1] += c_down[:, 1:N]

    sq = np.abs(prof) ** 2 / (M * K1) ** 2
    per_trial_eisl = sq.sum(axis=1) - sq[:, N - 1]
    return (
        sq.sum(axis=0),
        (sq**2).sum(axis=0),
        np.array([per_trial_eisl.sum(), (per_trial_eisl**2).sum()]),
    )


def _run_blocks(scn: Scenario, trials: int, workers: int):
    blocks = [(b * BLOCK_SIZE, min((b + 1) * BLOCK_SIZE, trials))
              for b in range((trials + BLOCK_SIZE - 1) // BLOCK_SIZE)]
    if workers <= 1:
        results = [_block_stats(scn, t0, t1) for t0, t1 in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_block_stats, scn, t0, t1) for t0, t1 in blocks]
            results = [f.result() for f in futures]
    # combine in block order: identical arithmetic for every worker count
    n_lags = 2 * scn.N - 1
    sums = np.zeros(n_lags)
    sumsq = np.zeros(n_lags)
    esums = np.zeros(2)
    for s, s2, e in results:
        sums += s
        sumsq += s2
        esums += e
    return sums, sumsq, esums


def _mean_stderr(total: np.ndarray, total_sq: np.ndarray, n: int):
    mean = total / n
    var = np.maximum(total_sq / n - mean**2, 0.0) * n / (n - 1)
    return mean, np.sqrt(var / n)


def _estimate(scn: Scenario, trials: int, workers: int):
    if trials < 2:
        raise ValueError("need at least 2 trials for a standard error")
    start = time.perf_counter()
    sums, sumsq, esums = _run_blocks(scn, trials, workers)
    elapsed = time.perf_counter() - start
    mean, stderr = _mean_stderr(sums, sumsq, trials)
    e_mean, e_stderr = _mean_stderr(esums[0], esums[1], trials)
    profile = CorrelationProfile(
        double_sided_lags(scn.N), mean, NORM_MAIN_LOBE, stderr=stderr
    )
    return McEstimate(profile, trials, elapsed), float(e_mean), float(e_stderr)


def estimate_acf(scn: Scenario, trials: int, workers: int = 1) -> McEstimate:
    """Sample mean of the normalized squared frame correlation per lag."""
    est, _, _ = _estimate(scn, trials, workers)
    return est


def estimate_eisl(scn: Scenario, trials: int, workers: int = 1) -> tuple[float, float]:
    """Sample mean and standard error of the per-trial integrated sidelobe sum."""
    _, e_mean, e_stderr = _estimate(scn, trials, workers)
    return e_mean, e_stderr


def _z_scores(mc: np.ndarray, stderr: np.ndarray, reference: np.ndarray) -> np.ndarray:
    diff = mc - reference
    scale = np.abs(reference).max()
    z = np.zeros_like(diff)
    # lags whose per-trial value is constant up to rounding (e.g. the
    # constant-modulus main lobe) carry only float noise; require an exact
    # match there instead of dividing noise by noise
    ok = stderr > 1e-12 * scale
    z[ok] = diff[ok] / stderr[ok]
    exact = ~ok
    z[exact] = np.where(np.abs(diff[exact]) <= ZERO_VARIANCE_TOL * scale, 0.0, np.inf)
    return z


def validate(
    scn: Scenario,
    trials: int,
    sigma_band: float,
    workers: int = 1,
    analytic_profile: CorrelationProfile | None = None,
) -> ValidationReport:
    """Compare Monte Carlo estimates against the closed forms.

    ``analytic_profile`` overrides the computed closed form (used by mutation
    tests to verify the comparison actually has teeth).
    """
    if trials < 100:
        raise ValueError("validation needs at least 100 trials")
    est, e_mean, e_stderr = _estimate(scn, trials, workers)
    if analytic_profile is None:
        analytic_profile = avg_sq_acf(scn)
    z = _z_scores(est.profile.values, est.profile.stderr, analytic_profile.values)
    ref_eisl = analytic_eisl(scn).eisl_normalized
    if e_stderr > 1e-12 * abs(ref_eisl):
        eisl_z = (e_mean - ref_eisl) / e_stderr
    else:
        eisl_z = 0.0 if abs(e_mean - ref_eisl) <= ZERO_VARIANCE_TOL * abs(ref_eisl) else np.inf
    passed = bool(np.all(np.abs(z) <= sigma_band) and abs(eisl_z) <= sigma_band)
    return ValidationReport(
        scenario=scn,
        trials=trials,
        sigma_band=sigma_band,
        z=z,
        lags=est.profile.lags,
        eisl_z=float(eisl_z),
        passed=passed,
    )
