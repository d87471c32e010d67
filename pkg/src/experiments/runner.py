"""
Execution des etudes de vitesse.
Pipeline par point de grille: construction -> tirages de W -> distance a
N(0,1) -> controle normal de meme taille.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Optional
import math

import pandas as pd
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn

from ..config import AppConfig, get_config
from ..distances import baseline_floor, distance_vs_normal
from ..export import CORE_COLUMNS
from ..models import EmpiricalSample
from ..rng import derive_seed, stream
from .config import ExperimentConfig
from .targets import RateTarget, build_target


console = Console()


@dataclass
class RunStats:
    """Statistiques d'une etude."""
    rows: int = 0
    failed_builds: int = 0
    failed_rows: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)  # (n, erreur)


def _row(config: ExperimentConfig, target: RateTarget, replicate: int) -> dict:
    row_seed = derive_seed(config.seed, "experiment", target.n, replicate)
    rng = stream(config.seed, "experiment", target.n, replicate)
    w = EmpiricalSample.from_values(
        target.draw(rng, config.samples),
        provenance=f"{target.model}:n={target.n}:r={replicate}",
    )
    return {
        "model": target.model,
        "n": target.n,
        "param": target.param,
        "replicate": replicate,
        "distance": distance_vs_normal(w, config.distance),
        "bound": target.bound,
        "baseline": baseline_floor(config.samples, config.distance, config.seed, target.n, replicate),
        "seed": row_seed,
        **target.extras,
    }


def _error_row(config: ExperimentConfig, n: int, replicate: int, error: Exception) -> dict:
    return {
        "model": config.model,
        "n": n,
        "param": "",
        "replicate": replicate,
        "distance": math.nan,
        "bound": math.nan,
        "baseline": math.nan,
        "seed": derive_seed(config.seed, "experiment", n, replicate),
        "error": f"{type(error).__name__}: {error}",
    }


def run_experiment(
    config: ExperimentConfig,
    app_config: Optional[AppConfig] = None,
    show_progress: bool = True,
) -> tuple[pd.DataFrame, RunStats]:
    """
    Execute l'etude et retourne la table triee par (n, replicate).

    Un echec de construction produit des lignes avec une colonne error;
    l'etude continue sur les autres points.

    Returns:
        (table, RunStats)
    """
    app_config = app_config or get_config()
    stats = RunStats()
    rows: list[dict] = []

    console.print(
        f"[cyan]Etude {config.model}: grille {list(config.grid)}, "
        f"R={config.replicates}, s={config.samples}, {config.distance}[/cyan]"
    )

    targets: list[RateTarget] = []
    for n in config.grid:
        try:
            targets.append(build_target(config.model, n, config.params, config.seed, app_config))
        except Exception as e:
            stats.failed_builds += 1
            stats.errors.append((n, str(e)))
            console.print(f"[red]n={n}: construction impossible: {e}[/red]")
            rows.extend(_error_row(config, n, r, e) for r in range(config.replicates))

    jobs = [(t, r) for t in targets for r in range(config.replicates)]

    def evaluate(job: tuple[RateTarget, int]) -> dict:
        target, replicate = job
        try:
            return _row(config, target, replicate)
        except Exception as e:
            return _error_row(config, target.n, replicate, e)

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        TimeElapsedColumn(),
        console=console,
        disable=not show_progress,
    ) as progress:
        task = progress.add_task(config.model, total=len(jobs))
        with ThreadPoolExecutor(max_workers=max(1, app_config.montecarlo.workers)) as executor:
            futures = [executor.submit(evaluate, job) for job in jobs]
            for future in as_completed(futures):
                row = future.result()
                if "error" in row:
                    stats.failed_rows += 1
                    console.print(f"[red]n={row['n']} r={row['replicate']}: {row['error']}[/red]")
                rows.append(row)
                progress.advance(task)

    rows.sort(key=lambda r: (r["n"], r["replicate"]))
    stats.rows = len(rows)
    table = pd.DataFrame(rows)
    extras = [c for c in table.columns if c not in CORE_COLUMNS]
    table = table.reindex(columns=CORE_COLUMNS + sorted(extras))

    console.print(f"[green]Etude terminee: {stats.rows} lignes, {stats.failed_rows + stats.failed_builds * config.replicates} en erreur[/green]")
    return table, stats
