"""Deterministic numerical kernel: Gaussian tail probabilities and seeded,
splittable random streams for every distribution the simulator draws from."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_SQRT2 = math.sqrt(2.0)
_PDF_COEF = 1.0 / math.sqrt(2.0 * math.pi)


def q_function(x: float) -> float:
    """Standard Gaussian upper-tail probability Q(x) = P(Z > x).

    Backed by the C library erfc, which is accurate to a few ulp
    (well beyond the 1e-12 we rely on).
    """
    if not math.isfinite(x):
        raise DomainError(f"q_function requires a finite argument, got {x!r}")
    return 0.5 * math.erfc(x / _SQRT2)


def _gauss_pdf(x: float) -> float:
    return _PDF_COEF * math.exp(-0.5 * x * x)


def q_inverse(p: float) -> float:
    """Inverse of :func:`q_function` on the open interval (0, 1).

    Bracketed bisection narrows the root, then a few Newton steps polish
    it to machine precision; Q' is never zero so Newton is safe once the
    bracket is tight.
    """
    if not (0.0 < p < 1.0):
        raise DomainError(f"q_inverse requires 0 < p < 1, got {p!r}")
    lo, hi = -40.0, 40.0  # Q saturates double precision outside this range
    while hi - lo > 1e-2:
        mid = 0.5 * (lo + hi)
        if q_function(mid) > p:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(20):
        step = (q_function(x) - p) / _gauss_pdf(x)
        x += step
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    return x


class StreamRole(enum.IntEnum):
    """The independent randomness consumers within one Monte Carlo trial."""

    SENSING_NOISE = 0
    PRIMARY_SIGNAL = 1
    SENSING_FADE = 2
    REPORT_NOISE = 3
    REPORT_FADE = 4
    MALICE = 5


@dataclass(frozen=True)
class RngStream:
    """Address of one reproducible random substream.

    The (master_seed, trial_index, role) triple fully determines the
    sample sequence: generators are derived through numpy's SeedSequence
    spawn keys, so streams for different trials or roles never overlap
    and trial k can be generated without touching trial k-1.
    """

    master_seed: int
    trial_index: int
    role: StreamRole

    def __post_init__(self):
        if not (0 <= int(self.master_seed) < 2**64):
            raise DomainError(f"master_seed must be an unsigned 64-bit integer, got {self.master_seed!r}")
        if int(self.trial_index) < 0:
            raise DomainError(f"trial_index must be nonnegative, got {self.trial_index!r}")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(
            entropy=int(self.master_seed),
            spawn_key=(int(self.trial_index), int(self.role)),
        )
        return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class TrialStreams:
    """Bundle of the six role streams for one trial."""

    master_seed: int
    trial_index: int

    def stream(self, role: StreamRole) -> RngStream:
        return RngStream(self.master_seed, self.trial_index, role)

    @property
    def sensing_noise(self) -> RngStream:
        return self.stream(StreamRole.SENSING_NOISE)

    @property
    def primary_signal(self) -> RngStream:
        return self.stream(StreamRole.PRIMARY_SIGNAL)

    @property
    def sensing_fade(self) -> RngStream:
        return self.stream(StreamRole.SENSING_FADE)

    @property
    def report_noise(self) -> RngStream:
        return self.stream(StreamRole.REPORT_NOISE)

    @property
    def report_fade(self) -> RngStream:
        return self.stream(StreamRole.REPORT_FADE)

    @property
    def malice(self) -> RngStream:
        return self.stream(StreamRole.MALICE)


def gaussian_from(gen: np.random.Generator, mean: float, variance: float, count=None):
    """Real Gaussian draws from an existing generator."""
    if variance < 0:
        raise DomainError(f"variance must be nonnegative, got {variance!r}")
    return mean + math.sqrt(variance) * gen.standard_normal(count)


def complex_gaussian_from(gen: np.random.Generator, variance: float, count=None):
    """Circularly symmetric complex Gaussian draws, CN(0, variance)."""
    if variance < 0:
        raise DomainError(f"variance must be nonnegative, got {variance!r}")
    shape = (2,) if count is None else (2, count)
    z = gen.standard_normal(shape)
    scale = math.sqrt(variance / 2.0)
    out = scale * (z[0] + 1j * z[1])
    return complex(out) if count is None else out


def rayleigh_gain_from(gen: np.random.Generator, mean_square: float, count=None):
    """Rayleigh channel-gain magnitudes g with E[g^2] = mean_square."""
    if mean_square < 0:
        raise DomainError(f"mean_square must be nonnegative, got {mean_square!r}")
    out = gen.rayleigh(scale=math.sqrt(mean_square / 2.0), size=count)
    return float(out) if count is None else out


def sample_gaussian(stream: RngStream, mean: float, variance: float, count: int) -> np.ndarray:
    """Reproducible real Gaussian samples for a stream triple."""
    return gaussian_from(stream.generator(), mean, variance, count)


def sample_complex_gaussian(stream: RngStream, variance: float, count: int) -> np.ndarray:
    """Reproducible circularly symmetric complex Gaussian samples."""
    return complex_gaussian_from(stream.generator(), variance, count)


def sample_rayleigh_gain(stream: RngStream, mean_square: float, count: int | None = None):
    """Reproducible Rayleigh gain draws; scalar when count is omitted."""
    return rayleigh_gain_from(stream.generator(), mean_square, count)
