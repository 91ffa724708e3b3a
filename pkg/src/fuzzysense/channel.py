"""Physical-layer randomness of one sensing window: the primary signal as
seen by each secondary user, and the corruption applied to reports on the
way to the fusion center."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import TrialStreams, RngStream, gaussian_from, rayleigh_gain_from


class Hypothesis(enum.IntEnum):
    H0 = 0  # primary user absent
    H1 = 1  # primary user present


class SensingModel(str, enum.Enum):
    AWGN = "awgn"
    RAYLEIGH_FLAT = "rayleigh_flat"


class ReportingModel(str, enum.Enum):
    IDEAL = "ideal"
    AWGN = "awgn"
    RAYLEIGH_AWGN = "rayleigh_awgn"


@dataclass(frozen=True)
class SensingChannelConfig:
    """Link between the primary user and each secondary user.

    Under AWGN the gain magnitude is the constant implied by ``snr_db``;
    under flat Rayleigh fading the gain is redrawn each sensing window
    with E[gain^2] = ``fading_mean_square`` and ``snr_db`` giving the
    average SNR.
    """

    model: SensingModel = SensingModel.AWGN
    snr_db: float = 5.0
    noise_variance: float = 1.0
    fading_mean_square: float = 1.0

    def __post_init__(self):
        if not self.noise_variance > 0:
            raise DomainError(f"noise_variance must be positive, got {self.noise_variance!r}")
        if not self.fading_mean_square > 0:
            raise DomainError(f"fading_mean_square must be positive, got {self.fading_mean_square!r}")

    @property
    def snr_linear(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)


@dataclass(frozen=True)
class ReportingChannelConfig:
    """Link between each secondary user and the fusion center."""

    model: ReportingModel = ReportingModel.IDEAL
    noise_variance: float = 0.0
    fading_mean_square: float = 1.0

    def __post_init__(self):
        if self.noise_variance < 0:
            raise DomainError(f"noise_variance must be nonnegative, got {self.noise_variance!r}")
        if not self.fading_mean_square > 0:
            raise DomainError(f"fading_mean_square must be positive, got {self.fading_mean_square!r}")


@dataclass(frozen=True)
class ChannelRealization:
    """Everything random about one sensing window, for all users."""

    hypothesis: Hypothesis
    sensing_gains: np.ndarray      # (n_users,) gain magnitudes |h|
    received_samples: np.ndarray   # (n_users, n_samples) complex
    reporting_gains: np.ndarray    # (n_users,) gain magnitudes |g| (ones unless faded reporting)


def signal_amplitudes(config: SensingChannelConfig, gains: np.ndarray) -> np.ndarray:
    """Per-user received signal amplitude giving the configured SNR.

    Per-sample SNR is amplitude^2 / noise_variance.  Under AWGN the gain
    itself carries the SNR (unit-power signal); under Rayleigh the signal
    power is scaled so the configured SNR holds on average over fades.
    """
    if config.model is SensingModel.AWGN:
        return gains.astype(float)
    scale = math.sqrt(config.snr_linear * config.noise_variance / config.fading_mean_square)
    return gains * scale


def realize_sensing(
    config: SensingChannelConfig,
    hypothesis: Hypothesis,
    n_samples: int,
    n_users: int,
    streams: TrialStreams,
    reporting: ReportingChannelConfig | None = None,
) -> ChannelRealization:
    """Generate one sensing window's received samples for every user.

    Under H0 the samples are pure noise; under H1 a constant-envelope
    primary signal (random antipodal chips) rides on top, scaled so each
    user's energy statistic is an exact (non)central chi-square variate
    with ``n_samples`` degrees of freedom and the textbook moments.
    """
    if n_samples < 1:
        raise DomainError(f"n_samples must be >= 1, got {n_samples!r}")
    if n_users < 1:
        raise DomainError(f"n_users must be >= 1, got {n_users!r}")

    noise = gaussian_from(
        streams.sensing_noise.generator(), 0.0, config.noise_variance, (n_users, n_samples)
    )

    if config.model is SensingModel.AWGN:
        gains = np.full(n_users, math.sqrt(config.snr_linear * config.noise_variance))
    else:
        gains = rayleigh_gain_from(
            streams.sensing_fade.generator(), config.fading_mean_square, n_users
        )

    samples = noise
    if hypothesis is Hypothesis.H1:
        chips = streams.primary_signal.generator().integers(0, 2, size=(n_users, n_samples)) * 2 - 1
        samples = samples + signal_amplitudes(config, gains)[:, None] * chips

    reporting_gains = np.ones(n_users)
    if reporting is not None and reporting.model is ReportingModel.RAYLEIGH_AWGN:
        reporting_gains = rayleigh_gain_from(
            streams.report_fade.generator(), reporting.fading_mean_square, n_users
        )

    return ChannelRealization(
        hypothesis=hypothesis,
        sensing_gains=gains,
        received_samples=samples.astype(np.complex128),
        reporting_gains=reporting_gains,
    )


def transport_report(
    config: ReportingChannelConfig,
    payload: float,
    gain: float,
    noise_stream: RngStream,
) -> float:
    """Carry one report across the reporting channel.

    Ideal is the exact identity; AWGN adds real Gaussian noise; faded
    reporting scales by the gain magnitude before the noise is added.
    """
    if not math.isfinite(payload):
        raise DomainError(f"payload must be finite, got {payload!r}")
    if config.model is ReportingModel.IDEAL:
        return float(payload)
    eta = float(gaussian_from(noise_stream.generator(), 0.0, config.noise_variance))
    if config.model is ReportingModel.AWGN:
        return float(payload) + eta
    return float(gain) * float(payload) + eta


def transport_vector(
    config: ReportingChannelConfig,
    payloads: np.ndarray,
    gains: np.ndarray,
    noise: np.ndarray,
) -> np.ndarray:
    """Vectorised transport given pre-drawn noise (zeros for Ideal)."""
    if config.model is ReportingModel.IDEAL:
        return np.asarray(payloads, dtype=float)
    if config.model is ReportingModel.AWGN:
        return payloads + noise
    return gains * payloads + noise
