"""Cooperative spectrum sensing simulator.

Per-user energy detection, noisy reporting channels, hard k-out-of-n
combining, and a Mamdani fuzzy fusion center, with a Monte Carlo harness
for ROC curves, decision surfaces, and theory-versus-simulation tables.
"""

from .channel import (
    ChannelRealization,
    Hypothesis,
    ReportingChannelConfig,
    ReportingModel,
    SensingChannelConfig,
    SensingModel,
    realize_sensing,
    transport_report,
)
from .config import ExperimentConfig, FuzzyOptions, config_from_mapping, load_config
from .detector import (
    DetectorConfig,
    DetectorPerformance,
    decide,
    energy_statistic,
    pd_from_pf,
    pd_theoretical,
    pf_theoretical,
    statistic_moments,
    threshold_for_pf,
)
from .errors import ConfigError, DomainError, FuzzySenseError
from .fusion import (
    FusionReport,
    FusionStrategy,
    MaliceMode,
    MaliceModel,
    StrategyKind,
    antipodal,
    apply_malice,
    fuse_fuzzy,
    fuse_hard,
    kofn_pd_closed_form,
    required_votes,
)
from .fuzzy import (
    AggregateSet,
    Defuzzifier,
    FuzzyRule,
    FuzzySystem,
    Level,
    LinguisticVariable,
    TriangularMf,
    Verdict,
    build_rule_base,
    build_system,
    decision_fusion_system,
    defuzzify,
    evaluate,
    fuzzify,
    infer,
    information_fusion_system,
    membership,
)
from .harness import (
    RocPoint,
    TrialRecord,
    ValidationRow,
    decision_surface,
    hypothesis_schedule,
    replay_decision,
    roc_sweep,
    run_trials,
    simulate_ensemble,
    validate_theory,
)
from .numerics import (
    RngStream,
    StreamRole,
    TrialStreams,
    q_function,
    q_inverse,
    sample_complex_gaussian,
    sample_gaussian,
    sample_rayleigh_gain,
)

__version__ = "0.1.0"
