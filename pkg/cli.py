#!/usr/bin/env python3
"""
CLI de l'outil d'approximation normale sous dependance locale.

Commandes:
    bound        Termes beta/gamma (et R_m) d'un modele
    rate         Etude de vitesse (distance a N(0,1) en fonction de n) + pente
    stein-check  Verifications du solveur de Stein sur la bibliotheque de fonctions test
    law          Lois discretes d'appariement des cumulants
    wp           Distances sur des echantillons externes (un flottant par ligne)

Codes de sortie: 0 succes, 2 erreur de configuration, 3 echec numerique.
"""

import sys
from pathlib import Path

import click
import numpy as np
import yaml
from rich.console import Console
from rich.table import Table

# Ajouter src au path
sys.path.insert(0, str(Path(__file__).parent))

from src.config import get_config
from src.errors import ConfigError, NumericalError

console = Console()


class SteinLocalGroup(click.Group):
    """Groupe click qui traduit les erreurs du domaine en codes de sortie."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ConfigError as e:
            console.print(f"[red]Erreur de configuration: {e}[/red]")
            ctx.exit(2)
        except NumericalError as e:
            console.print(f"[red]Echec numerique: {e}[/red]")
            ctx.exit(3)


def _parse_params(pairs: tuple[str, ...]) -> dict:
    """key=value -> dict (valeurs lues en YAML: 0.3 -> float, '1/4' reste texte)."""
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ConfigError(f"parametre invalide: {pair!r} (key=value attendu)")
        params[key.strip()] = yaml.safe_load(value)
    return params


def _parse_grid(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as e:
        raise ConfigError(f"grille invalide: {text!r} (entiers separes par des virgules)") from e


@click.group(cls=SteinLocalGroup)
@click.option("--config", "-c", type=click.Path(exists=True), help="Chemin vers config.yaml")
@click.pass_context
def cli(ctx, config):
    """Bornes d'approximation normale pour sommes localement dependantes."""
    ctx.ensure_object(dict)
    if config:
        from src.config import reload_config
        ctx.obj["config"] = reload_config(Path(config))
    else:
        ctx.obj["config"] = get_config()


@cli.command()
@click.argument("model", type=click.Choice(["iid", "pairs", "mdep", "ustat", "erg", "law"]))
@click.option("--n", "n", type=int, default=8, help="Taille du modele (paires pour 'pairs')")
@click.option("--param", "-P", multiple=True, help="Parametre du modele key=value (m, law, motif, p, beta, ...)")
@click.option("--mode", type=click.Choice(["exact", "mc"]), default="exact", help="Mode d'estimation")
@click.option("--replicates", "-R", type=int, help="Replicats Monte Carlo")
@click.option("--seed", type=int, help="Graine")
@click.option("--r-order", "r_orders", type=int, multiple=True, help="Ordres m de R_m a calculer")
@click.option("--p-order", type=int, help="Fonctionnelle W_p conjecturale (p <= 4)")
@click.pass_context
def bound(ctx, model, n, param, mode, replicates, seed, r_orders, p_order):
    """Affiche les termes beta, gamma1..3 (et R_m) d'un modele."""
    from src.applications import build_model, graph_bound_functional, psi, get_motif
    from src.bounds import corollary1_functional, theorem1_terms

    config = ctx.obj["config"]
    seed = config.experiment.seed if seed is None else seed
    params = _parse_params(param)
    depth = max([3] + [m + 1 for m in r_orders] + ([p_order + 1] if p_order else []))

    console.print(f"[cyan]Construction du modele {model} (n={n})...[/cyan]")
    local_model = build_model(model, n, params, seed=seed, depth=depth, config=config)
    console.print(f"[dim]{local_model.size} indices, Var(W) = {local_model.variance_estimate}[/dim]")

    report = theorem1_terms(
        local_model, mode, seed=seed, replicates=replicates,
        r_orders=r_orders, p=p_order, config=config,
    )

    table = Table(title=f"{report.model_name} ({report.mode.value})")
    table.add_column("terme")
    table.add_column("valeur", justify="right")
    for name in ("beta", "gamma1", "gamma2", "gamma3"):
        table.add_row(name, str(getattr(report, name)))
    for m, est in sorted(report.r_m.items()):
        table.add_row(f"R{m}", str(est))
    table.add_row("|beta| + (sum gamma)^(1/2)", f"{report.functional_w2:.6g}")
    if report.functional_wp is not None:
        table.add_row(f"fonctionnelle W{report.p}", f"{report.functional_wp:.6g}")
    console.print(table)

    if model == "mdep":
        m = int(params.get("m", 2))
        if m >= 1:
            value = corollary1_functional(local_model, m, mode, seed=seed, replicates=replicates, config=config)
            console.print(f"  Fonctionnelle m-dependante: {value:.6g}")
    if model == "erg":
        motif = get_motif(params.get("motif", "triangle"))
        p = params.get("p", "0.5")
        console.print(f"  psi: {psi(n, p, motif):.6g}")
        console.print(f"  Borne du graphe: {graph_bound_functional(n, p, motif):.6g}")


@cli.command()
@click.option("--file", "-f", "exp_file", type=click.Path(exists=True), help="Fichier d'experience (YAML plat)")
@click.option("--model", type=click.Choice(["iid", "mdep", "ustat", "erg", "law"]), help="Modele")
@click.option("--grid", help="Valeurs de n separees par des virgules (ex: 256,512,1024)")
@click.option("--replicates", "-R", type=int, help="Replicats par n")
@click.option("--samples", "-s", type=int, help="Tirages de W par replicat")
@click.option("--distance", type=click.Choice(["w1", "w2", "w3", "kolmogorov", "zolotarev"]), help="Distance")
@click.option("--seed", type=int, help="Graine")
@click.option("--param", "-P", multiple=True, help="Parametre du modele key=value")
@click.option("--output", "-o", type=click.Path(), help="Fichier de sortie")
@click.option("--format", "output_format", type=click.Choice(["csv", "json"]), help="Format de sortie")
@click.option("--no-fit", is_flag=True, help="Ne pas ajuster la pente")
@click.pass_context
def rate(ctx, exp_file, model, grid, replicates, samples, distance, seed, param, output, output_format, no_fit):
    """Etude de vitesse: distance a N(0,1) sur une grille de n, puis pente log-log.

    Motifs (erg): edge, triangle, path3, square, ou un fichier d'aretes
    "u v" par ligne, sommets numerotes a partir de 0.
    """
    from src.experiments import ExperimentConfig, fit_rate, run_experiment
    from src.export import emit

    config = ctx.obj["config"]
    if exp_file:
        exp = ExperimentConfig.from_file(Path(exp_file))
        if model:
            exp = exp.with_overrides(model=model)
    else:
        if not model or not grid:
            raise ConfigError("--model et --grid requis sans --file")
        exp = ExperimentConfig.defaults(model, _parse_grid(grid))

    exp = exp.with_overrides(
        grid=_parse_grid(grid) if grid and exp_file else None,
        replicates=replicates,
        samples=samples,
        distance=distance,
        seed=seed,
        output=Path(output) if output else None,
        output_format=output_format,
        params=_parse_params(param),
    )

    table, stats = run_experiment(exp, config)

    output_path = exp.output or config.experiment.output_dir / f"{exp.model}_{exp.seed}.{exp.output_format}"
    emit(table, output_path, exp.output_format)
    console.print(f"[green]{stats.rows} lignes exportees vers {output_path}[/green]")

    summary = table.groupby("n")[["distance", "bound", "baseline"]].mean()
    for n, row in summary.iterrows():
        console.print(f"  n={n:>6}  distance={row['distance']:.4g}  borne={row['bound']:.4g}  plancher={row['baseline']:.4g}")

    if no_fit or len(exp.grid) < 3:
        return
    fit = fit_rate(table)
    if fit.excluded:
        console.print(f"[yellow]Points sous le plancher exclus: {list(fit.excluded)}[/yellow]")
    console.print(f"[green]Pente: {fit.slope:.4f} (r^2 = {fit.r_squared:.4f}, {len(fit.used)} points)[/green]")


@cli.command("stein-check")
@click.option("--function", "-h", "names", multiple=True, help="Fonctions test (defaut: toute la bibliotheque)")
@click.option("--grid-min", type=float, default=-4.0, help="Borne basse de la grille")
@click.option("--grid-max", type=float, default=4.0, help="Borne haute de la grille")
@click.option("--points", type=int, default=33, help="Points de la grille")
@click.option("--lipschitz", is_flag=True, help="Verifier aussi la regularite de f'' et f'''")
@click.pass_context
def stein_check(ctx, names, grid_min, grid_max, points, lipschitz):
    """Residus du solveur de Stein et constantes du developpement."""
    from src.stein import (
        LIBRARY,
        derivative_lipschitz_check,
        expansion_constants,
        get_test_function,
        solve_on_grid,
    )

    config = ctx.obj["config"].stein
    functions = [get_test_function(name) for name in names] if names else list(LIBRARY.values())
    grid = np.linspace(grid_min, grid_max, points)

    table = Table(title="Solveur de Stein")
    for column in ("h", "classes", "sup |f_h|", "residu max", "Nf''", "Nf'''", "Ng''"):
        table.add_column(column)
    for tf in functions:
        solution = solve_on_grid(tf, grid, config=config)
        residual = solution.residual(config=config)
        nf2, nf3, ng2 = expansion_constants(tf, config)
        classes = ",".join(f"L{p}" for p in sorted(tf.classes)) or "-"
        style = "green" if residual <= 1e-6 else "yellow"
        table.add_row(tf.name, classes, f"{solution.sup_norm:.4g}", f"[{style}]{residual:.2e}[/{style}]",
                      f"{nf2:.6g}", f"{nf3:.6g}", f"{ng2:.6g}")
    console.print(table)

    if lipschitz:
        for tf in functions:
            for order in (2, 3):
                check = derivative_lipschitz_check(tf, order, config=config)
                status = "[red]violation[/red]" if check.violation else "[green]ok[/green]"
                console.print(
                    f"  {tf.name} f^({order}): quotient {check.quotient:.4g} -> "
                    f"{check.refined_quotient:.4g} (x{check.ratio:.2f}) {status}"
                )


@cli.command()
@click.option("--beta", help="beta (loi a quatre points), rationnel ou decimal")
@click.option("--kappa3", help="kappa3 (loi a cinq points)")
@click.option("--kappa4", help="kappa4 (loi a cinq points)")
@click.option("--samples", "-s", type=int, default=0, help="Tirages de V_n pour estimer W2(V_n, N(0,1))")
@click.option("--seed", type=int, help="Graine")
@click.pass_context
def law(ctx, beta, kappa3, kappa4, samples, seed):
    """Construit une loi d'appariement des cumulants et verifie ses moments."""
    from src.distances import wp_vs_normal
    from src.matching import five_point_law, four_point_law, law_cumulants, lemma3_bound, sample_vn

    config = ctx.obj["config"]
    if beta is not None:
        built = four_point_law(beta, config.matching)
    elif kappa3 is not None or kappa4 is not None:
        built = five_point_law(kappa3 or 0, kappa4 or 0, config.matching)
    else:
        raise ConfigError("--beta ou --kappa3/--kappa4 requis")

    if built.shrink_steps:
        console.print(f"[yellow]c2' reduit {built.shrink_steps} fois (c2' = {built.c2})[/yellow]")

    table = Table(title=f"Loi {built.kind}")
    table.add_column("atome", justify="right")
    table.add_column("probabilite")
    table.add_column("~", justify="right")
    for atom, prob in zip(built.atoms, built.probs):
        table.add_row(str(atom), str(prob), f"{float(prob):.10f}")
    console.print(table)

    n_label = "degeneree (V_n ~ N(0,1))" if built.is_degenerate else str(built.n_selected)
    console.print(f"  n: {n_label}")
    mean, variance, k3, k4 = law_cumulants(built)
    console.print(f"  E xi = {mean}, Var xi = {variance}")
    console.print(f"  kappa3(xi) = {k3}")
    console.print(f"  kappa4(xi) = {k4}")
    console.print(f"  Borne i.i.d. de V_n: {lemma3_bound(built):.6g}")

    if samples:
        seed = config.experiment.seed if seed is None else seed
        vn = sample_vn(built, samples, seed)
        console.print(f"  W2(V_n, N(0,1)) ~ {wp_vs_normal(vn, 2):.6g} ({samples} tirages)")


@cli.command()
@click.argument("sample", type=click.Path(exists=True))
@click.argument("other", type=click.Path(exists=True), required=False)
@click.option("--p", "p", type=float, default=2.0, help="Ordre p de W_p")
@click.pass_context
def wp(ctx, sample, other, p):
    """Distances sur des fichiers d'echantillons (un flottant par ligne).

    Avec un fichier: W1, W2, W3 et Kolmogorov contre N(0,1).
    Avec deux fichiers de meme taille: W_p empirique entre les deux.
    """
    from src.distances import empirical_wp, kolmogorov_vs_normal, wp_vs_normal
    from src.models import EmpiricalSample

    first = EmpiricalSample.from_file(Path(sample))
    if other:
        second = EmpiricalSample.from_file(Path(other))
        console.print(f"W{p:g}({first.provenance}, {second.provenance}) = {empirical_wp(first, second, p):.10g}")
        return

    console.print(f"[cyan]{first.provenance}: {first.size} valeurs[/cyan]")
    for order in sorted({1.0, 2.0, 3.0, p}):
        console.print(f"  W{order:g} vs N(0,1): {wp_vs_normal(first, order):.10g}")
    console.print(f"  Kolmogorov vs N(0,1): {kolmogorov_vs_normal(first):.10g}")


if __name__ == "__main__":
    cli()
