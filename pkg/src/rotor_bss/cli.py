"""Command-line driver.

Exit codes: 0 success, 2 validation error, 1 any other failure.
"""
from __future__ import annotations

import sys

import click
import numpy as np

from . import io as sigio
from .autocorr import AutocorrConfig, denoise
from .config import load_config
from .errors import ValidationError
from .evaluation import match_sources
from .msnr import MsnrConfig, compute_demixing, separate
from .pipeline import EXPERIMENTS, reproduce, simulate
from .signals import measure_snr


@click.group()
def cli():
    """Blind separation of noisy rotor vibration mixtures."""


@cli.command("simulate")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="JSON run config.")
@click.option("--seed", type=click.IntRange(min=0), help="Override the config seed.")
@click.option("--out", "out_mixed", required=True, type=click.Path(dir_okay=False), help="Mixed-signal CSV.")
@click.option("--sources-out", type=click.Path(dir_okay=False), help="Clean-source CSV.")
def cmd_simulate(config_path, seed, out_mixed, sources_out):
    """Generate sources and the noisy mixture x = A(s + v)."""
    cfg = load_config(config_path)
    sources, mixed, noise = simulate(cfg, seed)
    snr = measure_snr(sources, sources.with_data(sources.data + noise.data))
    if sources_out:
        sigio.write_csv(sources, sources_out)
    sigio.write_csv(mixed, out_mixed)
    for i, value in enumerate(snr):
        click.echo(f"source {i}: measured SNR {value:.3f} dB")


@cli.command("denoise")
@click.argument("in_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_csv", required=True, type=click.Path(dir_okay=False))
@click.option("--max-lag", type=click.IntRange(min=1), help="Exclusive upper lag (default N/2).")
@click.option("--drop-lag", type=click.IntRange(min=0), default=AutocorrConfig().drop_lag, show_default=True)
def cmd_denoise(in_csv, out_csv, max_lag, drop_lag):
    """Autocorrelate each channel and keep lags [drop-lag, max-lag)."""
    signal = sigio.read_csv(in_csv)
    lagged = denoise(signal, AutocorrConfig(max_lag=max_lag, drop_lag=drop_lag))
    sigio.write_csv(lagged, out_csv)
    click.echo(f"wrote {lagged.lags} lags x {lagged.channels} channels (start lag {lagged.start_lag})")


@cli.command("separate")
@click.argument("in_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_csv", required=True, type=click.Path(dir_okay=False))
@click.option("--window", type=int, default=MsnrConfig().window, show_default=True, help="Odd moving-average length.")
@click.option("--dump-w", type=click.Path(dir_okay=False), help="Write W, eigenvalues and per-row cost as JSON.")
def cmd_separate(in_csv, out_csv, window, dump_w):
    """Estimate the MSNR demixing matrix and write y = W x."""
    cfg = MsnrConfig(window)
    infile = sigio.read_signal_file(in_csv)
    try:
        result = compute_demixing(infile.signal, cfg)
    except ArithmeticError as exc:
        exc.args = (f"{in_csv}: {exc}",)
        raise
    y = separate(infile.signal, result.W)
    extra = {k: v for k, v in infile.metadata.items() if k != "sample_rate"}
    sigio.write_csv(infile.signal.with_data(y), out_csv, metadata=extra)
    if dump_w:
        sigio.write_report(
            {
                "W": result.W,
                "eigenvalues": result.eigenvalues,
                "cost_per_row_db": result.cost_per_row,
                "window": cfg.window,
            },
            dump_w,
        )
    for i, cost in enumerate(result.cost_per_row):
        click.echo(f"row {i}: cost {cost:.3f} dB")


@cli.command("evaluate")
@click.argument("est_csv", type=click.Path(exists=True, dir_okay=False))
@click.argument("ref_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--report", "report_json", required=True, type=click.Path(dir_okay=False))
def cmd_evaluate(est_csv, ref_csv, report_json):
    """Score separated channels against references with the correlation coefficient."""
    est = sigio.read_csv(est_csv)
    ref = sigio.read_csv(ref_csv)
    report = match_sources(est, ref)
    sigio.write_report({"estimated": str(est_csv), "reference": str(ref_csv), **report.to_dict()}, report_json)
    click.echo("matched: " + ", ".join(f"{c:.4f}" for c in report.matched_coeffs))


@cli.command("reproduce")
@click.option("--experiment", type=click.Choice([str(e) for e in EXPERIMENTS]), required=True)
@click.option("--config", "config_path", type=click.Path(dir_okay=False))
@click.option("--seed", type=click.IntRange(min=0), help="First seed (default: config seed).")
@click.option("--seeds", "n_seeds", type=click.IntRange(min=1), default=1, show_default=True, help="Number of seeds.")
@click.option("--max-lag", type=click.IntRange(min=1))
@click.option("--drop-lag", type=click.IntRange(min=0))
@click.option("--window", type=int)
@click.option("--report", "report_json", required=True, type=click.Path(dir_okay=False))
def cmd_reproduce(experiment, config_path, seed, n_seeds, max_lag, drop_lag, window, report_json):
    """Run experiment 1 (direct MSNR) or 2 (denoise + MSNR) over one or more seeds."""
    cfg = load_config(config_path)
    if max_lag is not None or drop_lag is not None:
        cfg = cfg.replace(
            denoise=AutocorrConfig(
                max_lag=cfg.denoise.max_lag if max_lag is None else max_lag,
                drop_lag=cfg.denoise.drop_lag if drop_lag is None else drop_lag,
            )
        )
    if window is not None:
        cfg = cfg.replace(msnr=MsnrConfig(window))
    report = reproduce(cfg, int(experiment), n_seeds, seed)
    sigio.write_report(report, report_json)
    if "aggregate" in report:
        agg = report["aggregate"]
        click.echo(
            f"experiment {experiment}: {agg['n_seeds']} seeds, mean {agg['mean']:.4f}, "
            f"min {agg['min']:.4f}, max {agg['max']:.4f}, "
            f">= {agg['threshold']}: {agg['fraction_above_threshold']:.0%}"
        )
    else:
        coeffs = ", ".join(f"{c:.4f}" for c in np.asarray(report["matched_coeffs"]))
        click.echo(f"experiment {experiment}, seed {report['seed']}: matched {coeffs}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="rotor-bss", standalone_mode=False)
    except click.exceptions.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except (ArithmeticError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
