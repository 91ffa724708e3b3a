"""Experiment configuration: the YAML file schema, invariant validation,
and construction of the per-module config objects."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .channel import ReportingChannelConfig, ReportingModel, SensingChannelConfig, SensingModel
from .detector import DetectorConfig
from .errors import ConfigError
from .fusion import FusionStrategy, MaliceMode, MaliceModel, StrategyKind
from .fuzzy import Defuzzifier, FuzzySystem, build_system

_TOP_LEVEL_KEYS = {
    "users", "samples", "noise_variance", "snr_db", "prior_h1", "sensing",
    "reporting", "strategy", "malice", "fuzzy", "trials", "seed", "metadata",
}


@dataclass(frozen=True)
class FuzzyOptions:
    """Fusion-center fuzzy system knobs loadable from the config file."""

    defuzzifier: Defuzzifier = Defuzzifier.CENTROID
    universe: tuple[float, float] | None = None
    membership: dict | None = None


@dataclass
class ExperimentConfig:
    """Everything one Monte Carlo experiment needs.

    ``metadata`` is a free-form block carrying physical-layer parameters
    that do not enter the flat per-window model (bit rate, Doppler,
    delay/gain profiles, ...).
    """

    n_users: int = 3
    n_samples: int = 10
    noise_variance: float = 1.0
    snr_db: float = 5.0
    prior_h1: float = 0.5
    sensing: SensingChannelConfig = field(default_factory=SensingChannelConfig)
    reporting: ReportingChannelConfig = field(default_factory=ReportingChannelConfig)
    strategy: FusionStrategy = field(default_factory=lambda: FusionStrategy(StrategyKind.HARD_OR))
    malice: tuple[MaliceModel, ...] = ()
    fuzzy: FuzzyOptions = field(default_factory=FuzzyOptions)
    trials: int = 1000
    master_seed: int = 0
    metadata: dict = field(default_factory=dict)

    def violations(self) -> list[str]:
        """All violated invariants, empty when the config is sound."""
        bad: list[str] = []
        if self.n_users < 1:
            bad.append(f"users must be >= 1, got {self.n_users}")
        if self.n_samples < 1:
            bad.append(f"samples must be >= 1, got {self.n_samples}")
        if not self.noise_variance > 0:
            bad.append(f"noise_variance must be positive, got {self.noise_variance}")
        if not (0.0 < self.prior_h1 < 1.0):
            bad.append(f"prior_h1 must lie in (0, 1), got {self.prior_h1}")
        if self.trials < 1:
            bad.append(f"trials must be >= 1, got {self.trials}")
        if not (0 <= self.master_seed < 2**64):
            bad.append(f"seed must be an unsigned 64-bit integer, got {self.master_seed}")
        if self.strategy.is_fuzzy and self.n_users != 3:
            bad.append(f"fuzzy strategies require exactly 3 users, got {self.n_users}")
        if self.strategy.kind is StrategyKind.HARD_K_OF_N and self.strategy.k is not None:
            if self.strategy.k > self.n_users:
                bad.append(f"strategy k={self.strategy.k} exceeds users={self.n_users}")
        info = self.strategy.kind is StrategyKind.FUZZY_INFORMATION
        for model in self.malice:
            if not (0 <= model.user_index < self.n_users):
                bad.append(f"malice user {model.user_index} outside 0..{self.n_users - 1}")
            if model.mode is MaliceMode.STATISTIC_SWAP and not info:
                bad.append("statistic_swap malice requires the fuzzy_information strategy")
            if model.mode is not MaliceMode.STATISTIC_SWAP and info:
                bad.append(f"{model.mode.value} malice applies to decision payloads, not information fusion")
        return bad

    def validate(self) -> "ExperimentConfig":
        bad = self.violations()
        if bad:
            raise ConfigError(bad)
        return self

    def detector_config(self, threshold: float | None = None) -> DetectorConfig:
        return DetectorConfig(
            n_samples=self.n_samples,
            noise_variance=self.noise_variance,
            threshold=threshold,
        )

    def fuzzy_system(self) -> FuzzySystem | None:
        """The fusion-center fuzzy system, or None for hard strategies."""
        if not self.strategy.is_fuzzy:
            return None
        return build_system(
            mode=self.strategy.fuzzy_mode,
            defuzzifier=self.fuzzy.defuzzifier,
            universe=self.fuzzy.universe,
            membership_overrides=self.fuzzy.membership,
        )

    @property
    def snr_linear(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)


def _as_pair(value) -> tuple[float, float]:
    lo, hi = value
    return float(lo), float(hi)


def config_from_mapping(raw: dict) -> ExperimentConfig:
    """Build and validate an ExperimentConfig from parsed YAML."""
    problems: list[str] = []
    unknown = set(raw) - _TOP_LEVEL_KEYS
    if unknown:
        problems.append(f"unknown top-level keys: {sorted(unknown)}")

    sensing_raw = dict(raw.get("sensing") or {})
    reporting_raw = dict(raw.get("reporting") or {})
    strategy_raw = dict(raw.get("strategy") or {})
    fuzzy_raw = dict(raw.get("fuzzy") or {})
    malice_raw = list(raw.get("malice") or [])

    noise_variance = float(raw.get("noise_variance", 1.0))
    snr_db = float(raw.get("snr_db", 5.0))

    try:
        sensing = SensingChannelConfig(
            model=SensingModel(str(sensing_raw.get("model", "awgn")).lower()),
            snr_db=snr_db,
            noise_variance=noise_variance,
            fading_mean_square=float(sensing_raw.get("fading_mean_square", 1.0)),
        )
    except ValueError as exc:
        problems.append(f"sensing: {exc}")
        sensing = SensingChannelConfig(snr_db=snr_db)

    try:
        reporting = ReportingChannelConfig(
            model=ReportingModel(str(reporting_raw.get("model", "ideal")).lower()),
            noise_variance=float(reporting_raw.get("noise_variance", 0.0)),
            fading_mean_square=float(reporting_raw.get("fading_mean_square", 1.0)),
        )
    except ValueError as exc:
        problems.append(f"reporting: {exc}")
        reporting = ReportingChannelConfig()

    try:
        kind = StrategyKind(str(strategy_raw.get("kind", "or")).lower())
        k = strategy_raw.get("k")
        strategy = FusionStrategy(
            kind=kind,
            k=None if k is None else int(k),
            fuzzy_threshold=float(strategy_raw.get("fuzzy_threshold", 0.5)),
        )
    except ValueError as exc:
        problems.append(f"strategy: {exc}")
        strategy = FusionStrategy(StrategyKind.HARD_OR)

    malice: list[MaliceModel] = []
    for entry in malice_raw:
        try:
            malice.append(
                MaliceModel(
                    user_index=int(entry["user"]),
                    mode=MaliceMode(str(entry["mode"]).lower()),
                )
            )
        except (KeyError, ValueError) as exc:
            problems.append(f"malice entry {entry!r}: {exc}")

    try:
        universe = fuzzy_raw.get("universe")
        fuzzy = FuzzyOptions(
            defuzzifier=Defuzzifier(str(fuzzy_raw.get("defuzzifier", "centroid")).lower()),
            universe=None if universe is None else _as_pair(universe),
            membership=fuzzy_raw.get("membership"),
        )
    except ValueError as exc:
        problems.append(f"fuzzy: {exc}")
        fuzzy = FuzzyOptions()

    config = ExperimentConfig(
        n_users=int(raw.get("users", 3)),
        n_samples=int(raw.get("samples", 10)),
        noise_variance=noise_variance,
        snr_db=snr_db,
        prior_h1=float(raw.get("prior_h1", 0.5)),
        sensing=sensing,
        reporting=reporting,
        strategy=strategy,
        malice=tuple(malice),
        fuzzy=fuzzy,
        trials=int(raw.get("trials", 1000)),
        master_seed=int(raw.get("seed", 0)),
        metadata=dict(raw.get("metadata") or {}),
    )
    problems.extend(config.violations())
    if problems:
        raise ConfigError(problems)
    return config


def load_config(path) -> ExperimentConfig:
    """Load and validate a YAML experiment config."""
    text = Path(path).read_text()
    raw = yaml.safe_load(text)
    if not isinstance(raw, dict):
        raise ConfigError([f"config file {path} must contain a mapping at the top level"])
    return config_from_mapping(raw)
