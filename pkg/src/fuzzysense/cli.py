"""Command-line interface to the simulator."""

from __future__ import annotations

import dataclasses
import sys
from pathlib import Path

import click

from .channel import Hypothesis
from .config import load_config
from .fuzzy import Defuzzifier, build_system, evaluate
from .harness import decision_surface, roc_sweep, run_trials, validate_theory
from . import plotting, report

_DEFUZZ_CHOICES = ["centroid", "bisector", "som", "mom", "lom"]


def _parse_grid(spec: str) -> list[float]:
    """Either 'lo:hi:steps' or a comma-separated list of values."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise click.BadParameter(f"expected lo:hi:steps, got {spec!r}")
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
        if steps < 1:
            raise click.BadParameter("steps must be >= 1")
        if steps == 1:
            return [lo]
        return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
    return [float(v) for v in spec.split(",") if v.strip()]


def _plot_path(plot_opt: str | None, out_path: str) -> Path | None:
    if plot_opt is None:
        return None
    if plot_opt == "":
        return Path(out_path).with_suffix(".png")
    return Path(plot_opt)


@click.group()
def main():
    """Cooperative spectrum sensing simulator: energy detection with hard
    and fuzzy fusion at the fusion center."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--seed", required=True, type=int, help="Override the config seed.")
@click.option("--hypothesis", type=click.Choice(["h0", "h1"]), default=None)
def sense(config_path, seed, hypothesis):
    """Run a single sensing trial and print it as a row."""
    cfg = load_config(config_path)
    cfg = dataclasses.replace(cfg, master_seed=seed)
    forced = None if hypothesis is None else Hypothesis.H1 if hypothesis == "h1" else Hypothesis.H0
    record = run_trials(cfg, force_hypothesis=forced, trials=1)[0]
    click.echo(report.trial_record_header(cfg.n_users))
    click.echo(report.trial_record_row(record))


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--grid", required=True, help="Operating parameters as lo:hi:steps or a comma list.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--plot", "plot_opt", default=None, is_flag=False, flag_value="",
              help="Also render a figure (default: CSV path with .png).")
def roc(config_path, grid, out_path, plot_opt):
    """Sweep the operating parameter and write the ROC curve as CSV."""
    cfg = load_config(config_path)
    points = roc_sweep(cfg, _parse_grid(grid))
    report.write_text(out_path, report.roc_csv(points))
    click.echo(f"wrote {len(points)} operating points to {out_path}")
    fig = _plot_path(plot_opt, out_path)
    if fig is not None:
        plotting.save_roc_figure({cfg.strategy.kind.value: points}, fig)
        click.echo(f"wrote figure to {fig}")


@main.command("fuzzy-eval")
@click.option("--mode", required=True, type=click.Choice(["info", "decision"]))
@click.option("--inputs", required=True, help="Three comma-separated report values.")
@click.option("--defuzz", default="centroid", type=click.Choice(_DEFUZZ_CHOICES))
def fuzzy_eval(mode, inputs, defuzz):
    """Evaluate the fusion-center fuzzy system on three crisp inputs."""
    values = [float(v) for v in inputs.split(",") if v.strip()]
    if len(values) != 3:
        raise click.BadParameter(f"expected three inputs, got {len(values)}")
    system = build_system(
        "information" if mode == "info" else "decision",
        defuzzifier=Defuzzifier(defuzz),
    )
    click.echo(f"{evaluate(system, values):.4f}")


@main.command()
@click.option("--mode", required=True, type=click.Choice(["info", "decision"]))
@click.option("--fixed", required=True, help="idx=value for the held input (idx in 0..2).")
@click.option("--resolution", required=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--defuzz", default="centroid", type=click.Choice(_DEFUZZ_CHOICES))
@click.option("--plot", "plot_opt", default=None, is_flag=False, flag_value="",
              help="Also render a figure (default: CSV path with .png).")
def surface(mode, fixed, resolution, out_path, defuzz, plot_opt):
    """Rasterise the fuzzy decision surface for two moving inputs."""
    try:
        idx_str, val_str = fixed.split("=", 1)
        fixed_index, fixed_value = int(idx_str), float(val_str)
    except ValueError as exc:
        raise click.BadParameter(f"expected idx=value, got {fixed!r}") from exc
    system = build_system(
        "information" if mode == "info" else "decision",
        defuzzifier=Defuzzifier(defuzz),
    )
    xs, ys, values = decision_surface(system, fixed_index, fixed_value, resolution)
    report.write_text(out_path, report.surface_csv(xs, ys, values))
    click.echo(f"wrote {values.size} grid points to {out_path}")
    fig = _plot_path(plot_opt, out_path)
    if fig is not None:
        plotting.save_surface_figure(xs, ys, values, fig, f"input {fixed_index} fixed at {fixed_value}")
        click.echo(f"wrote figure to {fig}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--pf-grid", "pf_grid", required=True, help="Target false-alarm rates (comma list or lo:hi:steps).")
@click.option("--tolerance", default=0.02, show_default=True, type=float)
@click.option("--out", "out_path", default=None, type=click.Path(), help="Also write the table to a file.")
@click.option("--plot", "plot_opt", default=None, is_flag=False, flag_value="",
              help="Render a figure (needs --out for the default path).")
def validate(config_path, pf_grid, tolerance, out_path, plot_opt):
    """Compare simulated detector performance against the closed forms.

    Prints the table as CSV and exits nonzero if any grid point violates
    the tolerance.
    """
    cfg = load_config(config_path)
    rows, ok = validate_theory(cfg, _parse_grid(pf_grid), tolerance=tolerance)
    text = report.validation_csv(rows)
    click.echo(text, nl=False)
    if out_path:
        report.write_text(out_path, text)
    if plot_opt is not None and rows:
        fig = _plot_path(plot_opt, out_path or "validation.csv")
        plotting.save_validation_figure(rows, fig)
        click.echo(f"wrote figure to {fig}")
    if not ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
