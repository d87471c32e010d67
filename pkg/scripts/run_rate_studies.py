#!/usr/bin/env python3
"""
Etudes de vitesse longues (minutes a dizaines de minutes), lancees a la main
ou par cron. Ecrit une table CSV par etude et un resume JSON des pentes.

Etudes:
- mdep    MA(2) de bruit Rademacher, n = 2^8..2^13, R=20, s=2e4: pente W2 dans [-0.65, -0.35]
- ustat   noyau (x+y)/2 + 0.1 xy, base Rademacher, n = 2^5..2^9: pente W2 dans [-0.65, -0.35]
- erg     triangles, p = 0.3, n = 20..160, R=20, s=1e4: decroissance (une inversion admise)
          et pente dans [-1.4, -0.6]
- law     V_n de la loi a quatre points, beta = 0.2, 0.1, 0.05: W2 decroit avec beta,
          W2/|beta| dans une bande de facteur 10

Usage:
    python scripts/run_rate_studies.py [mdep ustat erg law] [--output-dir data/rates]
"""
import argparse
import json
import os
import sys
from datetime import datetime
from pathlib import Path

# Ajouter le dossier parent au path pour les imports
script_dir = os.path.dirname(os.path.abspath(__file__))
app_dir = os.path.dirname(script_dir)
sys.path.insert(0, app_dir)

from src.config import get_config
from src.errors import SteinLocalError
from src.experiments import ExperimentConfig, fit_rate, inversions, ratio_band, run_experiment
from src.export import emit


STUDIES = {
    "mdep": dict(
        model="mdep", grid=tuple(2 ** k for k in range(8, 14)), replicates=20, samples=20_000,
        params={"m": 2, "law": "rademacher"}, slope=(-0.65, -0.35),
    ),
    "ustat": dict(
        model="ustat", grid=tuple(2 ** k for k in range(5, 10)), replicates=20, samples=20_000,
        params={"a": "1/2", "b": "1/10", "c": 0, "law": "rademacher"}, slope=(-0.65, -0.35),
    ),
    "erg": dict(
        model="erg", grid=(20, 40, 80, 160), replicates=20, samples=10_000,
        params={"motif": "triangle", "p": "0.3"}, slope=(-1.4, -0.6), max_inversions=1,
    ),
}

LAW_BETAS = ("0.2", "0.1", "0.05")


def log(message: str):
    """Log avec timestamp."""
    print(f"[{datetime.now().strftime('%Y-%m-%d %H:%M:%S')}] {message}")


def run_slope_study(name: str, output_dir: Path, seed: int) -> dict:
    study = STUDIES[name]
    exp = ExperimentConfig(
        model=study["model"],
        grid=study["grid"],
        replicates=study["replicates"],
        samples=study["samples"],
        distance="w2",
        seed=seed,
        params=study["params"],
    )
    table, stats = run_experiment(exp)
    path = emit(table, output_dir / f"{name}.csv", "csv")
    log(f"{name}: {stats.rows} lignes -> {path}")

    fit = fit_rate(table)
    lo, hi = study["slope"]
    passed = lo <= fit.slope <= hi
    result = {**fit.as_dict(), "target": [lo, hi]}
    if "max_inversions" in study:
        count = inversions(table)
        result["inversions"] = count
        passed = passed and count <= study["max_inversions"]
    result["passed"] = passed
    log(f"{name}: pente {fit.slope:.4f} (r2 {fit.r_squared:.3f}) cible [{lo}, {hi}] -> {'OK' if passed else 'ECHEC'}")
    return result


def run_law_study(output_dir: Path, seed: int) -> dict:
    distances = {}
    for k, beta in enumerate(LAW_BETAS):
        exp = ExperimentConfig(
            model="law", grid=(1,), replicates=20, samples=20_000, distance="w2",
            seed=seed + k, params={"beta": beta},
        )
        table, _ = run_experiment(exp)
        emit(table, output_dir / f"law_beta_{beta}.csv", "csv")
        distances[beta] = float(table["distance"].mean())
        log(f"law beta={beta}: W2 moyen {distances[beta]:.5f}")

    values = [distances[b] for b in LAW_BETAS]
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    band = ratio_band([distances[b] / float(b) for b in LAW_BETAS])
    passed = decreasing and band <= 10.0
    log(f"law: decroissance {decreasing}, bande W2/beta {band:.2f} -> {'OK' if passed else 'ECHEC'}")
    return {"distances": distances, "decreasing": decreasing, "band": band, "passed": passed}


def main():
    """Point d'entree principal."""
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("studies", nargs="*", default=["mdep", "ustat", "erg", "law"])
    parser.add_argument("--output-dir", type=Path, default=Path("data/rates"))
    parser.add_argument("--seed", type=int, default=None)
    args = parser.parse_args()

    seed = get_config().experiment.seed if args.seed is None else args.seed
    args.output_dir.mkdir(parents=True, exist_ok=True)
    log(f"=== ETUDES DE VITESSE (seed {seed}) ===")

    summary = {}
    for name in args.studies:
        log(f"--- {name} ---")
        try:
            if name == "law":
                summary[name] = run_law_study(args.output_dir, seed)
            elif name in STUDIES:
                summary[name] = run_slope_study(name, args.output_dir, seed)
            else:
                log(f"etude inconnue: {name}")
                continue
        except SteinLocalError as e:
            log(f"{name}: ERREUR {e}")
            summary[name] = {"passed": False, "error": str(e)}

    with open(args.output_dir / "summary.json", "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2)

    failed = [name for name, result in summary.items() if not result.get("passed")]
    log(f"=== TERMINE: {len(summary) - len(failed)}/{len(summary)} etudes OK ===")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
