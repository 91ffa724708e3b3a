"""Fusion-center decision logic: hard k-out-of-n combining, the fuzzy
fusion wiring for both strategies, and malicious-reporter corruption."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .channel import Hypothesis
from .detector import DetectorConfig, statistic_moments
from .errors import ConfigError, DomainError
from .fuzzy import FuzzySystem, evaluate
from .numerics import RngStream, gaussian_from


class StrategyKind(str, enum.Enum):
    HARD_AND = "and"
    HARD_OR = "or"
    HARD_MAJORITY = "majority"
    HARD_K_OF_N = "k_of_n"
    FUZZY_INFORMATION = "fuzzy_information"
    FUZZY_DECISION = "fuzzy_decision"


_HARD_KINDS = {
    StrategyKind.HARD_AND,
    StrategyKind.HARD_OR,
    StrategyKind.HARD_MAJORITY,
    StrategyKind.HARD_K_OF_N,
}


@dataclass(frozen=True)
class FusionStrategy:
    """How the fusion center combines the reports it receives."""

    kind: StrategyKind
    k: int | None = None
    fuzzy_threshold: float = 0.5

    def __post_init__(self):
        if self.kind is StrategyKind.HARD_K_OF_N:
            if self.k is None or self.k < 1:
                raise DomainError(f"k_of_n requires k >= 1, got {self.k!r}")
        if not (0.0 < self.fuzzy_threshold < 1.0):
            raise DomainError(f"fuzzy_threshold must lie in (0, 1), got {self.fuzzy_threshold!r}")

    @property
    def is_hard(self) -> bool:
        return self.kind in _HARD_KINDS

    @property
    def is_fuzzy(self) -> bool:
        return not self.is_hard

    @property
    def fuzzy_mode(self) -> str:
        if self.kind is StrategyKind.FUZZY_INFORMATION:
            return "information"
        if self.kind is StrategyKind.FUZZY_DECISION:
            return "decision"
        raise DomainError(f"{self.kind.value} is not a fuzzy strategy")


def required_votes(strategy: FusionStrategy, n_users: int) -> int:
    """The k in the equivalent k-out-of-n rule."""
    if n_users < 1:
        raise DomainError(f"n_users must be >= 1, got {n_users!r}")
    if strategy.kind is StrategyKind.HARD_OR:
        return 1
    if strategy.kind is StrategyKind.HARD_AND:
        return n_users
    if strategy.kind is StrategyKind.HARD_MAJORITY:
        return math.ceil((n_users + 1) / 2)
    if strategy.kind is StrategyKind.HARD_K_OF_N:
        if strategy.k > n_users:
            raise DomainError(f"k={strategy.k} exceeds n_users={n_users}")
        return strategy.k
    raise DomainError(f"{strategy.kind.value} is not a hard strategy")


def fuse_hard(decisions, strategy: FusionStrategy) -> int:
    """Global decision of a hard rule over local one-bit decisions."""
    if not strategy.is_hard:
        raise DomainError(f"fuse_hard got fuzzy strategy {strategy.kind.value}")
    decisions = list(decisions)
    if not decisions:
        raise DomainError("fuse_hard requires at least one decision")
    k = required_votes(strategy, len(decisions))
    return 1 if sum(1 for d in decisions if d) >= k else 0


def kofn_pd_closed_form(n: int, k: int, per_user_pd: float) -> float:
    """Binomial tail: probability that at least k of n i.i.d. detectors fire.

    The same expression with a per-user false-alarm probability gives the
    system false-alarm rate.
    """
    if n < 1 or not (1 <= k <= n):
        raise DomainError(f"need 1 <= k <= n, got k={k!r}, n={n!r}")
    if not (0.0 <= per_user_pd <= 1.0):
        raise DomainError(f"per_user_pd must lie in [0, 1], got {per_user_pd!r}")
    p = per_user_pd
    return float(sum(math.comb(n, j) * p**j * (1.0 - p) ** (n - j) for j in range(k, n + 1)))


class MaliceMode(str, enum.Enum):
    FLIP_DECISION = "flip_decision"
    ALWAYS_PRESENT = "always_present"
    ALWAYS_ABSENT = "always_absent"
    STATISTIC_SWAP = "statistic_swap"


_DECISION_MODES = {MaliceMode.FLIP_DECISION, MaliceMode.ALWAYS_PRESENT, MaliceMode.ALWAYS_ABSENT}


@dataclass(frozen=True)
class MaliceModel:
    """One misbehaving reporter and how it lies."""

    user_index: int
    mode: MaliceMode

    def __post_init__(self):
        if self.user_index < 0:
            raise DomainError(f"user_index must be nonnegative, got {self.user_index!r}")


def antipodal(decision: int) -> float:
    """Map a hard decision bit to the transmitted antipodal level 2d - 1."""
    return 2.0 * (1 if decision else 0) - 1.0


@dataclass(frozen=True)
class FusionReport:
    """What one user sends and what the fusion center receives."""

    user_index: int
    transmitted: float
    received: float
    local_decision: int


def apply_malice(
    report: FusionReport,
    model: MaliceModel,
    stream: RngStream,
    *,
    information_fusion: bool,
    hypothesis: Hypothesis | None = None,
    detector: DetectorConfig | None = None,
    snr: float | None = None,
) -> FusionReport:
    """Corrupt a report before transport, per the malice mode.

    Statistic swapping redraws the energy statistic from the opposite
    hypothesis's Gaussian-approximation law (clipped at zero, since energy
    is nonnegative); it therefore needs the detector parameters and the
    true hypothesis.  Flip/always modes rewrite the decision payload.
    """
    if model.mode is MaliceMode.STATISTIC_SWAP:
        if not information_fusion:
            raise DomainError("statistic_swap malice applies only to information fusion")
        if hypothesis is None or detector is None or snr is None:
            raise DomainError("statistic_swap needs hypothesis, detector config, and snr")
        opposite = Hypothesis.H0 if hypothesis is Hypothesis.H1 else Hypothesis.H1
        mean, var = statistic_moments(detector, snr, opposite)
        draw = float(gaussian_from(stream.generator(), mean, var))
        return replace(report, transmitted=max(0.0, draw))
    if model.mode in _DECISION_MODES and information_fusion:
        raise DomainError(f"{model.mode.value} malice applies only to decision payloads")
    if model.mode is MaliceMode.FLIP_DECISION:
        flipped = 1 - (1 if report.local_decision else 0)
        return replace(report, local_decision=flipped, transmitted=antipodal(flipped))
    if model.mode is MaliceMode.ALWAYS_PRESENT:
        return replace(report, local_decision=1, transmitted=antipodal(1))
    return replace(report, local_decision=0, transmitted=antipodal(0))


def fuse_fuzzy(reports, system: FuzzySystem, strategy: FusionStrategy) -> tuple[float, int]:
    """Crisp fusion value and the binary verdict it implies."""
    if not strategy.is_fuzzy:
        raise DomainError(f"fuse_fuzzy got hard strategy {strategy.kind.value}")
    reports = list(reports)
    if len(reports) != 3:
        raise DomainError(f"the fuzzy fusion center takes exactly three reports, got {len(reports)}")
    if system.mode != strategy.fuzzy_mode:
        raise ConfigError(
            [f"fuzzy system mode {system.mode!r} does not match strategy {strategy.kind.value!r}"]
        )
    crisp = evaluate(system, [r.received for r in reports])
    return crisp, 1 if crisp >= strategy.fuzzy_threshold else 0
