"""Per-user energy detector: test statistic, threshold rule, and the
closed-form Gaussian-approximation performance expressions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import Hypothesis
from .errors import DomainError
from .numerics import q_function, q_inverse


@dataclass(frozen=True)
class DetectorConfig:
    """Energy detector parameters for one secondary user.

    ``n_samples`` is the time-bandwidth product 2WT.  ``bandwidth_hz`` and
    ``window_seconds`` are carried as metadata; when both are given they
    must be consistent with ``n_samples``.
    """

    n_samples: int
    noise_variance: float
    threshold: float | None = None
    bandwidth_hz: float | None = None
    window_seconds: float | None = None

    def __post_init__(self):
        if self.n_samples < 1:
            raise DomainError(f"n_samples must be >= 1, got {self.n_samples!r}")
        if not self.noise_variance > 0:
            raise DomainError(f"noise_variance must be positive, got {self.noise_variance!r}")
        if self.bandwidth_hz is not None and not self.bandwidth_hz > 0:
            raise DomainError(f"bandwidth_hz must be positive, got {self.bandwidth_hz!r}")
        if self.window_seconds is not None and not self.window_seconds > 0:
            raise DomainError(f"window_seconds must be positive, got {self.window_seconds!r}")
        if self.bandwidth_hz is not None and self.window_seconds is not None:
            implied = round(2.0 * self.bandwidth_hz * self.window_seconds)
            if implied != self.n_samples:
                raise DomainError(
                    f"n_samples={self.n_samples} inconsistent with 2*W*T={implied}"
                )

    def _require_threshold(self) -> float:
        if self.threshold is None:
            raise DomainError("this operation needs a detector threshold; none is set")
        return self.threshold


@dataclass(frozen=True)
class DetectorPerformance:
    """(false alarm, detection) operating point; miss is the complement."""

    p_false_alarm: float
    p_detection: float

    def __post_init__(self):
        for name, p in (("p_false_alarm", self.p_false_alarm), ("p_detection", self.p_detection)):
            if not (0.0 <= p <= 1.0):
                raise DomainError(f"{name} must lie in [0, 1], got {p!r}")

    @property
    def p_miss(self) -> float:
        return 1.0 - self.p_detection


def energy_statistic(samples) -> float:
    """Received energy over the sensing window: sum of |r(n)|^2."""
    arr = np.asarray(samples)
    if arr.size == 0:
        raise DomainError("energy_statistic requires a non-empty sample sequence")
    return float(np.sum(np.abs(arr) ** 2))


def statistic_moments(config: DetectorConfig, snr: float, hypothesis: Hypothesis) -> tuple[float, float]:
    """Mean and variance of the energy statistic under either hypothesis."""
    if snr < 0:
        raise DomainError(f"snr must be nonnegative, got {snr!r}")
    n = config.n_samples
    s2 = config.noise_variance
    if hypothesis is Hypothesis.H0:
        return n * s2, 2.0 * n * s2**2
    return n * s2 * (1.0 + snr), 2.0 * n * s2**2 * (1.0 + 2.0 * snr)


def pf_theoretical(config: DetectorConfig) -> float:
    """False-alarm probability of the threshold rule (Gaussian approximation)."""
    gamma = config._require_threshold()
    n = config.n_samples
    s2 = config.noise_variance
    return q_function((gamma - n * s2) / (s2 * math.sqrt(2.0 * n)))


def pd_theoretical(config: DetectorConfig, snr: float) -> float:
    """Detection probability at the configured threshold (Gaussian approximation)."""
    if snr < 0:
        raise DomainError(f"snr must be nonnegative, got {snr!r}")
    gamma = config._require_threshold()
    n = config.n_samples
    s2 = config.noise_variance
    return q_function((gamma - n * s2 * (1.0 + snr)) / (s2 * math.sqrt(2.0 * n * (1.0 + 2.0 * snr))))


def pd_from_pf(n_samples: int, snr: float, target_pf: float) -> float:
    """Detection probability as a function of the false-alarm target.

    Noise variance cancels, so only the sample count and SNR enter.  This
    is the self-consistent elimination of the threshold between the two
    closed forms above.
    """
    if n_samples < 1:
        raise DomainError(f"n_samples must be >= 1, got {n_samples!r}")
    if snr < 0:
        raise DomainError(f"snr must be nonnegative, got {snr!r}")
    if not (0.0 < target_pf < 1.0):
        raise DomainError(f"target_pf must lie in (0, 1), got {target_pf!r}")
    root_2n = math.sqrt(2.0 * n_samples)
    return q_function(
        (q_inverse(target_pf) * root_2n - n_samples * snr)
        / math.sqrt(2.0 * n_samples * (1.0 + 2.0 * snr))
    )


def threshold_for_pf(config: DetectorConfig, target_pf: float) -> float:
    """Threshold that sets the Gaussian-approximation false alarm to the target."""
    if not (0.0 < target_pf < 1.0):
        raise DomainError(f"target_pf must lie in (0, 1), got {target_pf!r}")
    n = config.n_samples
    s2 = config.noise_variance
    return s2 * (q_inverse(target_pf) * math.sqrt(2.0 * n) + n)


def decide(statistic: float, threshold: float) -> int:
    """Local hard decision; the comparison is inclusive at the threshold."""
    return 1 if statistic >= threshold else 0
