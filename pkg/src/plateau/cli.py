from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Optional

import typer
from rich.console import Console
from rich.table import Table

from plateau.config import load_settings
from plateau.errors import (
    AcceptanceFailure,
    ConfigError,
    HorizonExceededError,
    IdentityViolation,
    PlateauError,
)
from plateau.experiments import COMMANDS, ExperimentRunner, RunOutcome
from plateau.storage import create_session_factory, default_ledger_url, init_db

# Every subcommand resolves settings, opens the run ledger and hands off to the runner.
app = typer.Typer(help="Tandem queue plateau process: simulation, scaling and limit-law checks")

EXIT_VALIDATION = 1
EXIT_ACCEPTANCE = 2

# Shared options; None means "not given" so YAML and env values are not overridden.
ConfigOption = typer.Option(None, "--config", help="YAML config file (sections per command)")
SeedOption = typer.Option(None, "--seed", help="Master seed; every output is a function of it")
WorkersOption = typer.Option(None, "--workers", help="Worker processes for replications")
OutDirOption = typer.Option(None, "--out-dir", help="Directory holding run folders and ledger")


@app.callback()
def configure_logging(verbose: bool = typer.Option(False, "--verbose", "-v")) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s %(message)s")


@app.command("simulate")
def simulate(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = WorkersOption,
    out_dir: Optional[Path] = OutDirOption,
    jobs: Optional[int] = typer.Option(None, help="Number of jobs (default 1000)"),
    arrival: Optional[str] = typer.Option(None, help="Interarrival law, e.g. exp:0.3226"),
    service: Optional[str] = typer.Option(None, help="Service law, e.g. pareto:1:1.5"),
    grid_step: Optional[float] = typer.Option(None, help="Extra uniform grid for continuous.csv"),
) -> None:
    """Simulate one tandem queue and export per-job and continuous-time trajectories."""
    _execute(
        "simulate",
        config,
        _common(seed, workers, out_dir)
        | {
            "simulate.jobs": jobs,
            "simulate.arrival": arrival,
            "simulate.service": service,
            "simulate.grid_step": grid_step,
        },
    )


@app.command("scale-sweep")
def scale_sweep(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = WorkersOption,
    out_dir: Optional[Path] = OutDirOption,
    alpha: Optional[float] = typer.Option(None, help="Tail index in (1, 2)"),
    gamma: Optional[float] = typer.Option(None, help="Heavy-traffic drift parameter"),
    r_values: Optional[str] = typer.Option(None, "--r-values", help="Comma list, e.g. 1e3,1e4"),
    replications: Optional[int] = typer.Option(None, help="Replications per r"),
    t: Optional[float] = typer.Option(None, "--t", help="Scaled time at which M is sampled"),
) -> None:
    """Sample the scaled plateau across a heavy-traffic family and report stabilisation."""
    _execute(
        "scale-sweep",
        config,
        _common(seed, workers, out_dir)
        | {
            "sweep.alpha": alpha,
            "sweep.gamma": gamma,
            "sweep.r_values": _floats(r_values),
            "sweep.replications": replications,
            "sweep.t": t,
        },
    )


@app.command("limit-sim")
def limit_sim(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = WorkersOption,
    out_dir: Optional[Path] = OutDirOption,
    alpha: Optional[float] = typer.Option(None, help="Tail index in (1, 2)"),
    eps: Optional[float] = typer.Option(None, help="Jump truncation level"),
    paths: Optional[int] = typer.Option(None, help="Number of limit paths"),
    v: Optional[str] = typer.Option(None, "--v", help="Comma list of local-time levels"),
    horizon: Optional[float] = typer.Option(None, help="Fixed horizon (default: auto-extend)"),
) -> None:
    """Simulate limit paths and collect Z(v) samples and excursion statistics."""
    overrides = _limit_overrides(seed, workers, out_dir, alpha, eps, paths, v, horizon)
    _execute("limit-sim", config, overrides)


@app.command("limit-law")
def limit_law(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = WorkersOption,
    out_dir: Optional[Path] = OutDirOption,
    alpha: Optional[float] = typer.Option(None, help="Tail index in (1, 2)"),
    q_grid: Optional[str] = typer.Option(None, "--q-grid", help="q_min:q_max:points"),
    v: Optional[str] = typer.Option(None, "--v", help="Comma list of local-time levels"),
    y_grid: Optional[str] = typer.Option(None, "--y-grid", help="Comma list of y values"),
    tol: Optional[float] = typer.Option(None, help="Root-finder residual tolerance"),
) -> None:
    """Tabulate kappa(q), h(q) and F_v(y)."""
    overrides: dict[str, Any] = _common(seed, workers, out_dir) | {
        "law.alpha": alpha,
        "law.v_values": _floats(v),
        "law.y_grid": _floats(y_grid),
        "law.tol": tol,
    }
    if q_grid:
        parts = q_grid.split(":")
        if len(parts) != 3:
            typer.echo("Configuration error: --q-grid expects q_min:q_max:points", err=True)
            raise typer.Exit(EXIT_VALIDATION)
        overrides |= {"law.q_min": parts[0], "law.q_max": parts[1], "law.q_points": parts[2]}
    _execute("limit-law", config, overrides)


@app.command("compare")
def compare(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = WorkersOption,
    out_dir: Optional[Path] = OutDirOption,
    sample_csv: Optional[Path] = typer.Option(None, "--sample-csv", help="CSV with v and Z"),
    alpha: Optional[float] = typer.Option(None, help="Tail index in (1, 2)"),
    threshold: Optional[float] = typer.Option(None, help="KS acceptance threshold"),
) -> None:
    """KS distance between a Z-sample CSV and the limit law; exit 2 above threshold."""
    _execute(
        "compare",
        config,
        _common(seed, workers, out_dir)
        | {
            "compare.sample_csv": sample_csv,
            "compare.alpha": alpha,
            "compare.threshold": threshold,
        },
    )


@app.command("verify")
def verify(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = WorkersOption,
    out_dir: Optional[Path] = OutDirOption,
    suites: Optional[str] = typer.Option(
        None, "--suites", help="Comma list of suites; an empty string selects none"
    ),
    instances: Optional[int] = typer.Option(None, help="Random tandem instances"),
    jobs: Optional[int] = typer.Option(None, help="Jobs per instance"),
    tol: Optional[float] = typer.Option(None, help="Maximum allowed deviation"),
    corrupt: Optional[str] = typer.Option(None, help="Flip a sign in the named suite"),
) -> None:
    """Check exact identities between independent representations; exit 1 on violation."""
    suite_list = None
    if suites is not None:
        suite_list = [name.strip() for name in suites.split(",") if name.strip()]
    _execute(
        "verify",
        config,
        _common(seed, workers, out_dir)
        | {
            "verify.suites": suite_list,
            "verify.instances": instances,
            "verify.jobs": jobs,
            "verify.tol": tol,
            "verify.corrupt": corrupt,
        },
    )


@app.command("limit-compare")
def limit_compare(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = WorkersOption,
    out_dir: Optional[Path] = OutDirOption,
    alpha: Optional[float] = typer.Option(None, help="Tail index in (1, 2)"),
    eps: Optional[float] = typer.Option(None, help="Jump truncation level"),
    paths: Optional[int] = typer.Option(None, help="Number of limit paths"),
    v: Optional[str] = typer.Option(None, "--v", help="Comma list of local-time levels"),
    horizon: Optional[float] = typer.Option(None, help="Fixed horizon (default: auto-extend)"),
    threshold: Optional[float] = typer.Option(None, help="KS acceptance threshold"),
) -> None:
    """Simulate Z(v) and compare with F_v; exit 2 when a KS distance exceeds the threshold."""
    overrides = _limit_overrides(seed, workers, out_dir, alpha, eps, paths, v, horizon)
    overrides["compare.threshold"] = threshold
    _execute("limit-compare", config, overrides)


def _common(seed: Optional[int], workers: Optional[int], out_dir: Optional[Path]) -> dict[str, Any]:
    return {"seed": seed, "workers": workers, "out_dir": out_dir}


def _limit_overrides(
    seed: Optional[int],
    workers: Optional[int],
    out_dir: Optional[Path],
    alpha: Optional[float],
    eps: Optional[float],
    paths: Optional[int],
    v: Optional[str],
    horizon: Optional[float],
) -> dict[str, Any]:
    return _common(seed, workers, out_dir) | {
        "limit.alpha": alpha,
        "limit.eps": eps,
        "limit.paths": paths,
        "limit.v_values": _floats(v),
        "limit.horizon": horizon,
    }


def _floats(value: Optional[str]) -> list[str] | None:
    """Split a comma list; the settings model does the numeric validation."""
    if value is None:
        return None
    return [part.strip() for part in value.split(",") if part.strip()]


def _execute(command: str, config: Optional[Path], overrides: dict[str, Any]) -> None:
    # Invalid settings exit before any run folder or ledger row exists
    try:
        settings = load_settings(config, overrides)
    except ConfigError as exc:
        typer.echo(f"Configuration error: {exc}", err=True)
        raise typer.Exit(EXIT_VALIDATION) from exc

    # --verbose wins over a quieter configured level
    logging.getLogger().setLevel(min(logging.getLogger().level, _level(settings.log_level)))
    out_dir = settings.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    # Ledger defaults to a SQLite file next to the run folders
    session_factory, engine = create_session_factory(
        settings.ledger_url or default_ledger_url(out_dir)
    )
    init_db(engine)

    fn, sections = COMMANDS[command]
    runner = ExperimentRunner(session_factory, out_dir)
    # Acceptance failures exit 2; everything the user can fix exits 1
    try:
        outcome = runner.run(command, settings, sections, fn)
    except AcceptanceFailure as exc:
        typer.echo(f"Acceptance failure: {exc}", err=True)
        raise typer.Exit(EXIT_ACCEPTANCE) from exc
    except HorizonExceededError as exc:
        hint = f" (try horizon >= {exc.suggested_horizon:.4g})" if exc.suggested_horizon else ""
        typer.echo(f"Horizon exceeded: {exc}{hint}", err=True)
        raise typer.Exit(EXIT_VALIDATION) from exc
    except (ConfigError, IdentityViolation) as exc:
        typer.echo(f"Validation failure: {exc}", err=True)
        raise typer.Exit(EXIT_VALIDATION) from exc
    except PlateauError as exc:
        typer.echo(f"Error: {exc}", err=True)
        raise typer.Exit(EXIT_VALIDATION) from exc

    _print_summary(command, outcome)


def _print_summary(command: str, outcome: RunOutcome) -> None:
    table = Table(title=f"{command} ({outcome.status})")
    table.add_column("key")
    table.add_column("value")
    table.add_row("run_dir", str(outcome.run_dir))
    for key, value in outcome.report.items():
        if isinstance(value, (str, int, float, bool)):
            table.add_row(key, f"{value:.6g}" if isinstance(value, float) else str(value))
    Console().print(table)


def _level(name: str) -> int:
    level = logging.getLevelName(name.upper())
    return level if isinstance(level, int) else logging.INFO


if __name__ == "__main__":
    app()
