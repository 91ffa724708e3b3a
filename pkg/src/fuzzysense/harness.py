"""Monte Carlo experiment engine: runs trials, sweeps operating points into
ROC curves, rasterises fuzzy decision surfaces, and tabulates theory versus
simulation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    Hypothesis,
    ReportingModel,
    realize_sensing,
    transport_vector,
)
from .config import ExperimentConfig
from .detector import decide, energy_statistic, pd_from_pf, statistic_moments, threshold_for_pf
from .errors import DomainError
from .fusion import (
    FusionReport,
    MaliceMode,
    StrategyKind,
    antipodal,
    apply_malice,
    fuse_fuzzy,
    fuse_hard,
    required_votes,
)
from .fuzzy import FuzzySystem, evaluate, evaluate_batch
from .numerics import TrialStreams, gaussian_from

DEFAULT_TARGET_PF = 0.1


@dataclass(frozen=True)
class TrialRecord:
    """One trial's ground truth, per-user observables, and the fused verdict."""

    trial_index: int
    ground_truth: Hypothesis
    statistics: tuple[float, ...]
    local_decisions: tuple[int, ...]
    transmitted: tuple[float, ...]
    received: tuple[float, ...]
    crisp_value: float | None
    decision: int


@dataclass(frozen=True)
class RocPoint:
    """One operating point of a receiver operating characteristic sweep."""

    operating_parameter: float
    empirical_pf: float
    empirical_pd: float
    n_h0: int
    n_h1: int


@dataclass(frozen=True)
class ValidationRow:
    target_pf: float
    threshold: float
    empirical_pf: float
    theoretical_pd: float
    empirical_pd: float
    abs_error: float
    pf_bound: float

    def passes(self, tolerance: float) -> bool:
        return self.abs_error <= tolerance and abs(self.empirical_pf - self.target_pf) <= self.pf_bound


def hypothesis_schedule(prior_h1: float, trial_index: int) -> Hypothesis:
    """Deterministic interleaved allocation of ground truth.

    Trial k is H1 exactly when floor((k+1)p) - floor(kp) = 1, so any
    prefix of T trials contains floor(T*p) H1 trials: the configured
    prior is an exact fraction, independent of the seed.
    """
    k = trial_index
    p = prior_h1
    return Hypothesis.H1 if math.floor((k + 1) * p) - math.floor(k * p) >= 1 else Hypothesis.H0


@dataclass
class TrialEnsemble:
    """Column-wise arrays over a block of trials (users along axis 1)."""

    trial_indices: np.ndarray   # (T,)
    hypotheses: np.ndarray      # (T,) int, 1 for H1
    statistics: np.ndarray      # (T, M)
    sensing_gains: np.ndarray   # (T, M)
    report_gains: np.ndarray    # (T, M)
    report_noise: np.ndarray    # (T, M)
    malice_swaps: dict          # user_index -> (T,) replacement statistics

    @property
    def n_trials(self) -> int:
        return len(self.trial_indices)


def simulate_ensemble(
    config: ExperimentConfig,
    *,
    trials: int | None = None,
    force_hypothesis: Hypothesis | None = None,
    trial_offset: int = 0,
) -> TrialEnsemble:
    """Generate every trial's randomness once.

    The operating point (detector threshold, fuzzy cut) is applied later,
    so one ensemble supports a whole ROC sweep.  Trial k draws only from
    streams keyed by (seed, trial_offset + k, role).
    """
    config.validate()
    n_trials = config.trials if trials is None else int(trials)
    m = config.n_users
    n = config.n_samples

    swap_users = [
        model.user_index for model in config.malice if model.mode is MaliceMode.STATISTIC_SWAP
    ]
    det = config.detector_config()
    needs_report_noise = config.reporting.model is not ReportingModel.IDEAL

    indices = np.arange(trial_offset, trial_offset + n_trials)
    hyps = np.empty(n_trials, dtype=np.int64)
    stats = np.empty((n_trials, m))
    sens_gains = np.empty((n_trials, m))
    rep_gains = np.ones((n_trials, m))
    rep_noise = np.zeros((n_trials, m))
    swaps = {u: np.empty(n_trials) for u in swap_users}

    for row, k in enumerate(indices):
        streams = TrialStreams(config.master_seed, int(k))
        hyp = force_hypothesis
        if hyp is None:
            hyp = hypothesis_schedule(config.prior_h1, int(k))
        realization = realize_sensing(config.sensing, hyp, n, m, streams, config.reporting)
        hyps[row] = int(hyp)
        stats[row] = np.sum(np.abs(realization.received_samples) ** 2, axis=1).real
        sens_gains[row] = realization.sensing_gains
        rep_gains[row] = realization.reporting_gains
        if needs_report_noise:
            rep_noise[row] = gaussian_from(
                streams.report_noise.generator(), 0.0, config.reporting.noise_variance, m
            )
        if swap_users:
            gen = streams.malice.generator()
            opposite = Hypothesis.H0 if hyp is Hypothesis.H1 else Hypothesis.H1
            mean, var = statistic_moments(det, config.snr_linear, opposite)
            for u in swap_users:
                swaps[u][row] = max(0.0, float(gaussian_from(gen, mean, var)))

    return TrialEnsemble(
        trial_indices=indices,
        hypotheses=hyps,
        statistics=stats,
        sensing_gains=sens_gains,
        report_gains=rep_gains,
        report_noise=rep_noise,
        malice_swaps=swaps,
    )


def _apply_malice_columns(config: ExperimentConfig, local: np.ndarray, ensemble: TrialEnsemble):
    """Per-user decision bits and transmitted payloads after malice."""
    decisions = local.copy()
    information = config.strategy.kind is StrategyKind.FUZZY_INFORMATION
    if information:
        payload = ensemble.statistics.copy()
        for model in config.malice:
            if model.mode is MaliceMode.STATISTIC_SWAP:
                payload[:, model.user_index] = ensemble.malice_swaps[model.user_index]
        return decisions, payload
    for model in config.malice:
        col = model.user_index
        if model.mode is MaliceMode.FLIP_DECISION:
            decisions[:, col] = 1 - decisions[:, col]
        elif model.mode is MaliceMode.ALWAYS_PRESENT:
            decisions[:, col] = 1
        elif model.mode is MaliceMode.ALWAYS_ABSENT:
            decisions[:, col] = 0
    payload = 2.0 * decisions - 1.0
    return decisions, payload


def ensemble_received(
    config: ExperimentConfig, ensemble: TrialEnsemble, threshold: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(local decisions, transmitted payloads, received values) at a threshold."""
    local = (ensemble.statistics >= threshold).astype(np.int64)
    decisions, payload = _apply_malice_columns(config, local, ensemble)
    received = transport_vector(config.reporting, payload, ensemble.report_gains, ensemble.report_noise)
    return decisions, payload, received


def fuse_ensemble(
    config: ExperimentConfig,
    ensemble: TrialEnsemble,
    *,
    threshold: float,
    system: FuzzySystem | None = None,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Fused decisions (T,) plus crisp values for fuzzy strategies.

    Fuzzy decisions use the strategy's configured ``fuzzy_threshold``; for
    a sweep, cut the returned crisp values at other thresholds directly.
    """
    _, _, received = ensemble_received(config, ensemble, threshold)
    if config.strategy.is_hard:
        bits = (received >= 0.0).astype(np.int64)
        k = required_votes(config.strategy, config.n_users)
        return (bits.sum(axis=1) >= k).astype(np.int64), None
    if system is None:
        system = config.fuzzy_system()
    crisp = evaluate_batch(system, received)
    decisions = (crisp >= config.strategy.fuzzy_threshold).astype(np.int64)
    return decisions, crisp


def empirical_rates(decisions: np.ndarray, hypotheses: np.ndarray) -> tuple[float, float, int, int]:
    """(pf, pd, n_h0, n_h1) from fused decisions and ground truth."""
    h1 = hypotheses == int(Hypothesis.H1)
    n_h1 = int(h1.sum())
    n_h0 = int(len(hypotheses) - n_h1)
    pf = float(decisions[~h1].mean()) if n_h0 else 0.0
    pd = float(decisions[h1].mean()) if n_h1 else 0.0
    return pf, pd, n_h0, n_h1


def run_trials(
    config: ExperimentConfig,
    *,
    target_pf: float = DEFAULT_TARGET_PF,
    threshold: float | None = None,
    force_hypothesis: Hypothesis | None = None,
    trials: int | None = None,
) -> list[TrialRecord]:
    """Run trials and keep full per-trial records.

    ``target_pf`` sets the per-user detector threshold through the
    closed-form inversion unless an explicit ``threshold`` is given.
    Deterministic given the config seed.
    """
    config.validate()
    n_trials = config.trials if trials is None else int(trials)
    if threshold is None:
        gamma = threshold_for_pf(config.detector_config(), target_pf)
    else:
        gamma = float(threshold)

    system = config.fuzzy_system()
    det = config.detector_config()
    info = config.strategy.kind is StrategyKind.FUZZY_INFORMATION
    malice_by_user = {model.user_index: model for model in config.malice}

    records: list[TrialRecord] = []
    for k in range(n_trials):
        streams = TrialStreams(config.master_seed, k)
        hyp = force_hypothesis if force_hypothesis is not None else hypothesis_schedule(config.prior_h1, k)
        realization = realize_sensing(config.sensing, hyp, config.n_samples, config.n_users, streams, config.reporting)
        stats = [energy_statistic(realization.received_samples[i]) for i in range(config.n_users)]
        local = [decide(s, gamma) for s in stats]

        reports = []
        for i in range(config.n_users):
            payload = stats[i] if info else antipodal(local[i])
            report = FusionReport(i, transmitted=payload, received=payload, local_decision=local[i])
            model = malice_by_user.get(i)
            if model is not None:
                report = apply_malice(
                    report,
                    model,
                    streams.malice,
                    information_fusion=info,
                    hypothesis=hyp,
                    detector=det,
                    snr=config.snr_linear,
                )
            reports.append(report)

        payloads = np.array([r.transmitted for r in reports])
        noise = np.zeros(config.n_users)
        if config.reporting.model is not ReportingModel.IDEAL:
            noise = gaussian_from(streams.report_noise.generator(), 0.0, config.reporting.noise_variance, config.n_users)
        received = transport_vector(config.reporting, payloads, realization.reporting_gains, noise)
        reports = [
            FusionReport(r.user_index, r.transmitted, float(y), r.local_decision)
            for r, y in zip(reports, received)
        ]

        if config.strategy.is_hard:
            bits = [1 if y >= 0.0 else 0 for y in received]
            decision = fuse_hard(bits, config.strategy)
            crisp = None
        else:
            crisp, decision = fuse_fuzzy(reports, system, config.strategy)

        records.append(
            TrialRecord(
                trial_index=k,
                ground_truth=hyp,
                statistics=tuple(stats),
                local_decisions=tuple(r.local_decision for r in reports),
                transmitted=tuple(r.transmitted for r in reports),
                received=tuple(r.received for r in reports),
                crisp_value=crisp,
                decision=decision,
            )
        )
    return records


def replay_decision(config: ExperimentConfig, record: TrialRecord) -> int:
    """Recompute the fused decision from a record's received values."""
    if config.strategy.is_hard:
        bits = [1 if y >= 0.0 else 0 for y in record.received]
        return fuse_hard(bits, config.strategy)
    crisp = evaluate(config.fuzzy_system(), record.received)
    return 1 if crisp >= config.strategy.fuzzy_threshold else 0


def roc_sweep(config: ExperimentConfig, grid) -> list[RocPoint]:
    """One RocPoint per operating parameter.

    Hard rules sweep the per-user false-alarm target (thresholds from the
    closed-form inversion); fuzzy strategies sweep the crisp decision cut
    with the per-user detector pinned at the config default.
    """
    config.validate()
    grid = [float(g) for g in grid]
    ensemble = simulate_ensemble(config)
    points: list[RocPoint] = []
    if config.strategy.is_hard:
        det = config.detector_config()
        for param in grid:
            gamma = threshold_for_pf(det, param)
            decisions, _ = fuse_ensemble(config, ensemble, threshold=gamma)
            pf, pd, n_h0, n_h1 = empirical_rates(decisions, ensemble.hypotheses)
            points.append(RocPoint(param, pf, pd, n_h0, n_h1))
        return points

    gamma = threshold_for_pf(config.detector_config(), DEFAULT_TARGET_PF)
    system = config.fuzzy_system()
    _, crisp = fuse_ensemble(config, ensemble, threshold=gamma, system=system)
    for param in grid:
        if not (0.0 <= param <= 1.0):
            raise DomainError(f"fuzzy sweep parameters must lie in [0, 1], got {param!r}")
        decisions = (crisp >= param).astype(np.int64)
        pf, pd, n_h0, n_h1 = empirical_rates(decisions, ensemble.hypotheses)
        points.append(RocPoint(param, pf, pd, n_h0, n_h1))
    return points


def decision_surface(
    system: FuzzySystem, fixed_index: int, fixed_value: float, resolution: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Crisp fusion output over a grid of two inputs with the third fixed.

    Returns (xs, ys, values) with values[i, j] evaluated at y=ys[i],
    x=xs[j]; the moving inputs fill the non-fixed slots in index order.
    """
    if fixed_index not in (0, 1, 2):
        raise DomainError(f"fixed_index must be 0, 1, or 2, got {fixed_index!r}")
    if resolution < 2:
        raise DomainError(f"resolution must be >= 2, got {resolution!r}")
    lo, hi = system.input_variables[0].universe
    xs = np.linspace(lo, hi, resolution)
    ys = np.linspace(lo, hi, resolution)
    values = np.empty((resolution, resolution))
    moving = [i for i in range(3) if i != fixed_index]
    inputs = [0.0, 0.0, 0.0]
    inputs[fixed_index] = float(fixed_value)
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            inputs[moving[0]] = x
            inputs[moving[1]] = y
            values[i, j] = evaluate(system, inputs)
    return xs, ys, values


def validate_theory(
    config: ExperimentConfig, pf_grid, *, tolerance: float = 0.02
) -> tuple[list[ValidationRow], bool]:
    """Theory-versus-simulation table for the per-user detector.

    For each target false-alarm rate the threshold is calibrated on an
    independent block of signal-free trials (empirical quantile of the
    pooled statistics), so the measured false-alarm rate tests only Monte
    Carlo consistency; the detection comparison against the closed form
    then isolates the Gaussian-approximation error, which carries the
    stated absolute tolerance.
    """
    config.validate()
    pf_grid = [float(p) for p in pf_grid]
    if not pf_grid:
        return [], True
    for p in pf_grid:
        if not (0.0 < p < 1.0):
            raise DomainError(f"pf grid values must lie in (0, 1), got {p!r}")

    main = simulate_ensemble(config)
    calibration = simulate_ensemble(
        config, force_hypothesis=Hypothesis.H0, trial_offset=config.trials
    )
    cal_pool = np.sort(calibration.statistics.ravel())

    h1 = main.hypotheses == int(Hypothesis.H1)
    stats_h0 = main.statistics[~h1].ravel()
    stats_h1 = main.statistics[h1].ravel()
    n0, n1, ncal = stats_h0.size, stats_h1.size, cal_pool.size

    rows: list[ValidationRow] = []
    all_ok = True
    for p in pf_grid:
        gamma = float(np.quantile(cal_pool, 1.0 - p))
        emp_pf = float((stats_h0 >= gamma).mean()) if n0 else 0.0
        emp_pd = float((stats_h1 >= gamma).mean()) if n1 else 0.0
        theo_pd = pd_from_pf(config.n_samples, config.snr_linear, p)
        err = abs(emp_pd - theo_pd)
        # both the evaluation sample and the calibrated threshold carry
        # Monte Carlo error; the bound combines the two at three sigma
        se = math.sqrt(p * (1.0 - p) * (1.0 / max(n0, 1) + 1.0 / ncal))
        row = ValidationRow(
            target_pf=p,
            threshold=gamma,
            empirical_pf=emp_pf,
            theoretical_pd=theo_pd,
            empirical_pd=emp_pd,
            abs_error=err,
            pf_bound=3.0 * se,
        )
        rows.append(row)
        all_ok = all_ok and row.passes(tolerance)
    return rows, all_ok
