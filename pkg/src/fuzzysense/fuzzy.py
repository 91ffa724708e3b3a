"""Mamdani fuzzy inference engine: triangular membership functions, the
27-rule base over three reporters, max-min composition, and five
defuzzification methods."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DomainError

DEFAULT_GRID_POINTS = 1001
_PLATEAU_RTOL = 1e-9

INFORMATION_UNIVERSE = (0.0, 150.0)
DECISION_UNIVERSE = (-3.0, 3.0)


class Level(enum.Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class Verdict(enum.Enum):
    ABSENT = "absent"
    PRESENT = "present"


class Defuzzifier(str, enum.Enum):
    CENTROID = "centroid"
    BISECTOR = "bisector"
    SOM = "som"  # smallest of maximum
    MOM = "mom"  # middle of maximum
    LOM = "lom"  # largest of maximum


@dataclass(frozen=True)
class TriangularMf:
    """Triangular membership function with feet at ``left_foot`` and
    ``right_foot`` and apex at ``peak``; degenerate shoulders (foot equal
    to peak) give half-triangles."""

    left_foot: float
    peak: float
    right_foot: float

    def __post_init__(self):
        if not (self.left_foot <= self.peak <= self.right_foot):
            raise DomainError(
                f"triangle parameters must satisfy left <= peak <= right, got "
                f"({self.left_foot}, {self.peak}, {self.right_foot})"
            )


def membership(mf: TriangularMf, x) -> float | np.ndarray:
    """Piecewise-linear membership degree of x in the triangle."""
    a, c, b = mf.left_foot, mf.peak, mf.right_foot
    arr = np.asarray(x, dtype=float)
    out = np.zeros_like(arr)
    if c > a:
        rising = (arr >= a) & (arr < c)
        out[rising] = (arr[rising] - a) / (c - a)
    if b > c:
        falling = (arr > c) & (arr <= b)
        out[falling] = (b - arr[falling]) / (b - c)
    out[arr == c] = 1.0
    return float(out) if np.isscalar(x) else out


@dataclass(frozen=True)
class LinguisticVariable:
    """A named variable over a closed universe with labelled triangular terms."""

    name: str
    universe: tuple[float, float]
    terms: Mapping[enum.Enum, TriangularMf]

    def __post_init__(self):
        lo, hi = self.universe
        if not lo < hi:
            raise DomainError(f"universe must satisfy lo < hi, got {self.universe!r}")
        if not self.terms:
            raise DomainError("a linguistic variable needs at least one term")
        for label, mf in self.terms.items():
            if mf.left_foot < lo or mf.right_foot > hi:
                raise DomainError(
                    f"term {label} support [{mf.left_foot}, {mf.right_foot}] "
                    f"exceeds universe [{lo}, {hi}]"
                )
        # No gap of positive length may be uncovered; term feet touching at
        # isolated points (membership exactly zero there) are allowed.
        supports = sorted((mf.left_foot, mf.right_foot) for mf in self.terms.values())
        reach = supports[0][0]
        if reach > lo:
            raise DomainError(f"terms of {self.name!r} leave part of the universe uncovered")
        for a, b in supports:
            if a > reach:
                raise DomainError(f"terms of {self.name!r} leave part of the universe uncovered")
            reach = max(reach, b)
        if reach < hi:
            raise DomainError(f"terms of {self.name!r} leave part of the universe uncovered")

    def clamp(self, x: float) -> float:
        lo, hi = self.universe
        return min(max(float(x), lo), hi)


def fuzzify(variable: LinguisticVariable, x: float) -> dict:
    """Degrees of every term at x, after clamping x into the universe."""
    xc = variable.clamp(x)
    return {label: membership(mf, xc) for label, mf in variable.terms.items()}


@dataclass(frozen=True)
class FuzzyRule:
    antecedents: tuple[Level, Level, Level]
    consequent: Verdict

    def __post_init__(self):
        if len(self.antecedents) != 3:
            raise DomainError("rules take exactly three antecedent labels")


# Verdict per antecedent triple: PRESENT exactly when at least two of the
# three reporters are not LOW.
_RULE_TABLE: tuple[tuple[tuple[Level, Level, Level], Verdict], ...] = (
    ((Level.LOW, Level.LOW, Level.LOW), Verdict.ABSENT),
    ((Level.LOW, Level.LOW, Level.MEDIUM), Verdict.ABSENT),
    ((Level.LOW, Level.LOW, Level.HIGH), Verdict.ABSENT),
    ((Level.LOW, Level.MEDIUM, Level.LOW), Verdict.ABSENT),
    ((Level.LOW, Level.MEDIUM, Level.MEDIUM), Verdict.PRESENT),
    ((Level.LOW, Level.MEDIUM, Level.HIGH), Verdict.PRESENT),
    ((Level.LOW, Level.HIGH, Level.LOW), Verdict.ABSENT),
    ((Level.LOW, Level.HIGH, Level.MEDIUM), Verdict.PRESENT),
    ((Level.LOW, Level.HIGH, Level.HIGH), Verdict.PRESENT),
    ((Level.MEDIUM, Level.LOW, Level.LOW), Verdict.ABSENT),
    ((Level.MEDIUM, Level.LOW, Level.MEDIUM), Verdict.PRESENT),
    ((Level.MEDIUM, Level.LOW, Level.HIGH), Verdict.PRESENT),
    ((Level.MEDIUM, Level.MEDIUM, Level.LOW), Verdict.PRESENT),
    ((Level.MEDIUM, Level.MEDIUM, Level.MEDIUM), Verdict.PRESENT),
    ((Level.MEDIUM, Level.MEDIUM, Level.HIGH), Verdict.PRESENT),
    ((Level.MEDIUM, Level.HIGH, Level.LOW), Verdict.PRESENT),
    ((Level.MEDIUM, Level.HIGH, Level.MEDIUM), Verdict.PRESENT),
    ((Level.MEDIUM, Level.HIGH, Level.HIGH), Verdict.PRESENT),
    ((Level.HIGH, Level.LOW, Level.LOW), Verdict.ABSENT),
    ((Level.HIGH, Level.LOW, Level.MEDIUM), Verdict.PRESENT),
    ((Level.HIGH, Level.LOW, Level.HIGH), Verdict.PRESENT),
    ((Level.HIGH, Level.MEDIUM, Level.LOW), Verdict.PRESENT),
    ((Level.HIGH, Level.MEDIUM, Level.MEDIUM), Verdict.PRESENT),
    ((Level.HIGH, Level.MEDIUM, Level.HIGH), Verdict.PRESENT),
    ((Level.HIGH, Level.HIGH, Level.LOW), Verdict.PRESENT),
    ((Level.HIGH, Level.HIGH, Level.MEDIUM), Verdict.PRESENT),
    ((Level.HIGH, Level.HIGH, Level.HIGH), Verdict.PRESENT),
)


def build_rule_base() -> tuple[FuzzyRule, ...]:
    """The full 3^3 rule base, one rule per antecedent combination."""
    return tuple(FuzzyRule(ante, cons) for ante, cons in _RULE_TABLE)


@dataclass(frozen=True)
class AggregateSet:
    """Sampled membership curve of the aggregated consequent."""

    xs: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        if self.xs.shape != self.mu.shape or self.xs.ndim != 1:
            raise DomainError("aggregate grid and membership arrays must be 1-d and equal length")
        if np.any(self.mu < 0) or np.any(self.mu > 1):
            raise DomainError("aggregate membership values must lie in [0, 1]")


@dataclass
class FuzzySystem:
    """Three-input Mamdani system; immutable after construction.

    ``mode`` tags which fusion strategy the system serves ("information"
    for raw statistics on the wide universe, "decision" for antipodal
    report values) so wiring mismatches fail loudly.
    """

    input_variables: tuple[LinguisticVariable, LinguisticVariable, LinguisticVariable]
    output_variable: LinguisticVariable
    rules: tuple[FuzzyRule, ...]
    defuzzifier: Defuzzifier = Defuzzifier.CENTROID
    mode: str = "decision"
    grid_points: int = DEFAULT_GRID_POINTS
    _grid: np.ndarray = field(init=False, repr=False)
    _consequent_mu: dict = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.input_variables) != 3:
            raise DomainError("the rule base is defined for exactly three inputs")
        if self.grid_points < 3:
            raise DomainError(f"grid_points must be >= 3, got {self.grid_points!r}")
        seen = {}
        for rule in self.rules:
            if rule.antecedents in seen:
                raise DomainError(f"duplicate rule for antecedents {rule.antecedents}")
            seen[rule.antecedents] = rule.consequent
        expected = set(itertools.product(list(Level), repeat=3))
        if set(seen) != expected:
            raise DomainError(
                f"rule base must cover all {len(expected)} antecedent combinations exactly once"
            )
        lo, hi = self.output_variable.universe
        self._grid = np.linspace(lo, hi, self.grid_points)
        self._consequent_mu = {
            label: membership(mf, self._grid) for label, mf in self.output_variable.terms.items()
        }

    def clip_levels(self, inputs) -> dict:
        """Max-min firing strength per consequent label for crisp inputs."""
        degrees = [fuzzify(var, x) for var, x in zip(self.input_variables, inputs)]
        levels = {label: 0.0 for label in self.output_variable.terms}
        for rule in self.rules:
            strength = min(degrees[i][rule.antecedents[i]] for i in range(3))
            if strength > levels[rule.consequent]:
                levels[rule.consequent] = strength
        return levels


def infer(system: FuzzySystem, inputs) -> AggregateSet:
    """Mamdani max-min composition: clip each fired consequent at the rule
    strength and take the pointwise maximum."""
    inputs = tuple(float(x) for x in inputs)
    if len(inputs) != 3:
        raise DomainError(f"expected three inputs, got {len(inputs)}")
    if not all(np.isfinite(inputs)):
        raise DomainError(f"inputs must be finite, got {inputs!r}")
    levels = system.clip_levels(inputs)
    mu = np.zeros_like(system._grid)
    for label, level in levels.items():
        if level > 0.0:
            np.maximum(mu, np.minimum(level, system._consequent_mu[label]), out=mu)
    return AggregateSet(xs=system._grid, mu=mu)


def defuzzify(aggregate: AggregateSet, method: Defuzzifier) -> float:
    """Collapse an aggregate set to one crisp value."""
    mu = aggregate.mu
    xs = aggregate.xs
    total = float(mu.sum())
    if total <= 0.0:
        raise DomainError("cannot defuzzify: no rule fired (aggregate has zero area)")
    method = Defuzzifier(method)
    if method is Defuzzifier.CENTROID:
        return float((xs * mu).sum() / total)
    if method is Defuzzifier.BISECTOR:
        cumulative = np.cumsum(mu)
        idx = int(np.searchsorted(cumulative, 0.5 * total))
        return float(xs[min(idx, len(xs) - 1)])
    peak = float(mu.max())
    plateau = xs[mu >= peak * (1.0 - _PLATEAU_RTOL)]
    if method is Defuzzifier.SOM:
        return float(plateau[0])
    if method is Defuzzifier.LOM:
        return float(plateau[-1])
    return float(0.5 * (plateau[0] + plateau[-1]))  # MOM


def evaluate(system: FuzzySystem, inputs) -> float:
    """Infer then defuzzify with the system's configured method."""
    return defuzzify(infer(system, inputs), system.defuzzifier)


def evaluate_batch(system: FuzzySystem, inputs) -> np.ndarray:
    """Evaluate many input triples at once; row i equals evaluate(row i).

    Same max-min composition and grid defuzzification as the scalar path,
    just with trials vectorised (the aggregation grid is chunked to bound
    memory).
    """
    arr = np.asarray(inputs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DomainError(f"expected an array of shape (n, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("inputs must be finite")

    degrees = []
    for i, var in enumerate(system.input_variables):
        lo, hi = var.universe
        x = np.clip(arr[:, i], lo, hi)
        degrees.append({label: membership(mf, x) for label, mf in var.terms.items()})

    levels = {label: np.zeros(len(arr)) for label in system.output_variable.terms}
    for rule in system.rules:
        strength = np.minimum(
            np.minimum(degrees[0][rule.antecedents[0]], degrees[1][rule.antecedents[1]]),
            degrees[2][rule.antecedents[2]],
        )
        np.maximum(levels[rule.consequent], strength, out=levels[rule.consequent])

    xs = system._grid
    method = system.defuzzifier
    out = np.empty(len(arr))
    chunk = max(1, 4_000_000 // system.grid_points)
    for start in range(0, len(arr), chunk):
        end = min(start + chunk, len(arr))
        mu = np.zeros((end - start, system.grid_points))
        for label, curve in system._consequent_mu.items():
            np.maximum(mu, np.minimum(levels[label][start:end, None], curve[None, :]), out=mu)
        total = mu.sum(axis=1)
        if np.any(total <= 0.0):
            raise DomainError("cannot defuzzify: no rule fired for some input row")
        if method is Defuzzifier.CENTROID:
            out[start:end] = (xs * mu).sum(axis=1) / total
        elif method is Defuzzifier.BISECTOR:
            cumulative = np.cumsum(mu, axis=1)
            idx = np.minimum(
                (cumulative >= 0.5 * total[:, None]).argmax(axis=1), len(xs) - 1
            )
            out[start:end] = xs[idx]
        else:
            peak = mu.max(axis=1)
            mask = mu >= peak[:, None] * (1.0 - _PLATEAU_RTOL)
            first = mask.argmax(axis=1)
            last = mask.shape[1] - 1 - mask[:, ::-1].argmax(axis=1)
            if method is Defuzzifier.SOM:
                out[start:end] = xs[first]
            elif method is Defuzzifier.LOM:
                out[start:end] = xs[last]
            else:
                out[start:end] = 0.5 * (xs[first] + xs[last])
    return out


def default_input_variable(universe: tuple[float, float], name: str = "report") -> LinguisticVariable:
    """LOW / MEDIUM / HIGH triangles anchored at the universe edges and midpoint."""
    lo, hi = universe
    mid = 0.5 * (lo + hi)
    return LinguisticVariable(
        name=name,
        universe=(lo, hi),
        terms={
            Level.LOW: TriangularMf(lo, lo, mid),
            Level.MEDIUM: TriangularMf(lo, mid, hi),
            Level.HIGH: TriangularMf(mid, hi, hi),
        },
    )


def default_output_variable() -> LinguisticVariable:
    return LinguisticVariable(
        name="decision",
        universe=(0.0, 1.0),
        terms={
            Verdict.ABSENT: TriangularMf(0.0, 0.25, 0.5),
            Verdict.PRESENT: TriangularMf(0.5, 0.75, 1.0),
        },
    )


_INPUT_LABELS = {"low": Level.LOW, "medium": Level.MEDIUM, "high": Level.HIGH}
_OUTPUT_LABELS = {"absent": Verdict.ABSENT, "present": Verdict.PRESENT}


def _apply_overrides(variable: LinguisticVariable, overrides: Mapping[str, tuple], labels: Mapping) -> LinguisticVariable:
    terms = dict(variable.terms)
    for key, params in overrides.items():
        label = labels.get(str(key).lower())
        if label is None:
            continue
        a, c, b = (float(v) for v in params)
        terms[label] = TriangularMf(a, c, b)
    return LinguisticVariable(variable.name, variable.universe, terms)


def build_system(
    mode: str,
    defuzzifier: Defuzzifier = Defuzzifier.CENTROID,
    universe: tuple[float, float] | None = None,
    membership_overrides: Mapping[str, tuple] | None = None,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> FuzzySystem:
    """Assemble a fusion-center system for either strategy.

    ``mode`` is "information" (energy statistics, default universe
    [0, 150]) or "decision" (antipodal report values, default [-3, 3]).
    Membership overrides are keyed low/medium/high/absent/present.
    """
    if mode not in ("information", "decision"):
        raise DomainError(f"mode must be 'information' or 'decision', got {mode!r}")
    if universe is None:
        universe = INFORMATION_UNIVERSE if mode == "information" else DECISION_UNIVERSE
    in_var = default_input_variable(tuple(float(u) for u in universe))
    out_var = default_output_variable()
    if membership_overrides:
        in_var = _apply_overrides(in_var, membership_overrides, _INPUT_LABELS)
        out_var = _apply_overrides(out_var, membership_overrides, _OUTPUT_LABELS)
    return FuzzySystem(
        input_variables=(in_var, in_var, in_var),
        output_variable=out_var,
        rules=build_rule_base(),
        defuzzifier=Defuzzifier(defuzzifier),
        mode=mode,
        grid_points=grid_points,
    )


def information_fusion_system(**kwargs) -> FuzzySystem:
    return build_system("information", **kwargs)


def decision_fusion_system(**kwargs) -> FuzzySystem:
    return build_system("decision", **kwargs)
