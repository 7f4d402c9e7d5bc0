"""Command-line entry points: serve the quiz API, or run offline analyses.

Every flag of `serve` can also come from an environment variable
(CARBONPAIRS_*); an explicit flag wins.
"""

from __future__ import annotations

from pathlib import Path

import click
import uvicorn

from .catalog import build_prior, default_catalog_path, load_catalog
from .evaluation import (
    POLICIES,
    SyntheticRespondent,
    export_perception,
    fit_from_log,
    perception_rows,
    run_experiment,
    write_experiment_csv,
    write_json_mirror,
    write_perception_csv,
)
from .inference import posterior_from_dataset
from .service import ServiceConfig, create_app
from .store import read_triplet_log


@click.group()
def main():
    """Perceived-carbon-footprint estimation from pairwise comparisons."""


def _parse_bind(bind: str) -> tuple[str, int]:
    host, _, port = bind.rpartition(":")
    if not host or not port.isdigit():
        raise click.BadParameter(f"expected HOST:PORT, got {bind!r}")
    return host, int(port)


@main.command()
@click.option("--bind", envvar="CARBONPAIRS_BIND", default="127.0.0.1:8000", show_default=True,
              help="HOST:PORT to listen on.")
@click.option("--catalog", "catalog_path", envvar="CARBONPAIRS_CATALOG", type=click.Path(path_type=Path),
              default=None, help="Catalog JSON file (defaults to the shipped 18-action catalog).")
@click.option("--log", "log_path", envvar="CARBONPAIRS_LOG", type=click.Path(path_type=Path),
              default=Path("triplets.log"), show_default=True, help="Append-only triplet log file.")
@click.option("--sigma-n-sq", envvar="CARBONPAIRS_SIGMA_N_SQ", type=float, default=1.0, show_default=True,
              help="Observation noise variance.")
@click.option("--sigma-p-sq", envvar="CARBONPAIRS_SIGMA_P_SQ", type=float, default=10.0, show_default=True,
              help="Prior variance per action.")
@click.option("--cors-origin", "cors_origins", envvar="CARBONPAIRS_CORS_ORIGIN", multiple=True,
              help="Allowed CORS origin for the quiz UI (repeatable; default: any).")
@click.option("--rate-limit", envvar="CARBONPAIRS_RATE_LIMIT", type=float, default=5.0, show_default=True,
              help="Max answers per second per IP; 0 disables limiting.")
def serve(bind, catalog_path, log_path, sigma_n_sq, sigma_p_sq, cors_origins, rate_limit):
    """Run the quiz service."""
    host, port = _parse_bind(bind)
    kwargs = dict(
        host=host,
        port=port,
        log_path=log_path,
        sigma_n_sq=sigma_n_sq,
        sigma_p_sq=sigma_p_sq,
        cors_origins=cors_origins or ("*",),
        answers_per_second=rate_limit or None,
    )
    if catalog_path is not None:
        kwargs["catalog_path"] = catalog_path
    config = ServiceConfig(**kwargs)
    uvicorn.run(create_app(config), host=config.host, port=config.port)


@main.command()
@click.option("--policy", type=click.Choice(POLICIES), required=True)
@click.option("--n", "n_questions", type=int, default=200, show_default=True,
              help="Questions per simulated run.")
@click.option("--seeds", "n_seeds", type=int, default=20, show_default=True,
              help="Number of independent seeds.")
@click.option("--noise-sq", type=float, default=1.0, show_default=True,
              help="Respondent answer noise variance.")
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, path_type=Path), default=None,
              help="Catalog JSON file (defaults to the shipped 18-action catalog).")
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True,
              help="CSV output path; a JSON mirror lands next to it.")
@click.option("--sigma-n-sq", type=float, default=1.0, show_default=True)
@click.option("--sigma-p-sq", type=float, default=10.0, show_default=True)
def simulate(policy, n_questions, n_seeds, noise_sq, catalog_path, out_path, sigma_n_sq, sigma_p_sq):
    """Benchmark a question-selection policy on a synthetic population."""
    catalog = load_catalog(catalog_path or default_catalog_path())
    hyper = build_prior(catalog, sigma_p_sq, sigma_n_sq)
    respondent = SyntheticRespondent.from_catalog(catalog, response_noise_sq=noise_sq)
    report = run_experiment(policy, n_questions, n_seeds, respondent, hyper)
    csv_path = write_experiment_csv(report, out_path)
    json_path = write_json_mirror(report.to_dict(), csv_path)
    click.echo(f"policy={policy} seeds={n_seeds} questions={n_questions}")
    for idx, checkpoint in enumerate(report.checkpoints):
        click.echo(
            f"  n={checkpoint:>6}  rmse_raw={report.rmse_raw[idx]:.4f}"
            f"  rmse_centered={report.rmse_centered[idx]:.4f}"
            f"  mean_gain={report.mean_info_gain[idx]:.4f}"
        )
    click.echo(f"wrote {csv_path} and {json_path}")


@main.command()
@click.option("--log", "log_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--sigma-n-sq", type=float, default=1.0, show_default=True)
@click.option("--sigma-p-sq", type=float, default=10.0, show_default=True)
def fit(log_path, catalog_path, out_path, sigma_n_sq, sigma_p_sq):
    """Batch-fit the perception estimate from a triplet log."""
    report = fit_from_log(
        log_path,
        catalog_path or default_catalog_path(),
        sigma_n_sq=sigma_n_sq,
        sigma_p_sq=sigma_p_sq,
    )
    click.echo(f"{'id':>3}  {'perceived_kg':>14}  {'true_kg':>10}  {'log10_ratio':>11}  title")
    for row in report.rows:
        click.echo(
            f"{row.action_id:>3}  {row.perceived_kg:>14.2f}  {row.true_kg:>10.1f}"
            f"  {row.log10_ratio:>11.4f}  {row.title}"
        )
    click.echo(
        f"n_observations={report.n_observations}"
        f"  rmse_log_raw={report.rmse_log_raw:.4f}"
        f"  rmse_log_centered={report.rmse_log_centered:.4f}"
    )
    csv_path = write_perception_csv(report.rows, out_path)
    json_path = write_json_mirror(report.to_dict(), csv_path)
    click.echo(f"wrote {csv_path} and {json_path}")


@main.command()
@click.option("--log", "log_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--sigma-n-sq", type=float, default=1.0, show_default=True)
@click.option("--sigma-p-sq", type=float, default=10.0, show_default=True)
def export(log_path, catalog_path, out_path, sigma_n_sq, sigma_p_sq):
    """Export chart-ready perceived-vs-true data from a triplet log."""
    catalog = load_catalog(catalog_path or default_catalog_path())
    hyper = build_prior(catalog, sigma_p_sq, sigma_n_sq)
    records = read_triplet_log(log_path)
    posterior = posterior_from_dataset((r.as_triplet() for r in records), hyper)
    csv_path = export_perception(posterior, catalog, out_path)
    payload = {
        "n_observations": posterior.n_observations,
        "rows": [row.__dict__ for row in perception_rows(posterior, catalog)],
    }
    json_path = write_json_mirror(payload, csv_path)
    click.echo(f"wrote {csv_path} and {json_path}")


if __name__ == "__main__":
    main()
