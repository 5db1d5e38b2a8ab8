"""
readsift CLI - Main entry point.

Each subcommand wires one stage of the pipeline to files:

    synth -> coverage -> prep -> heuristic -> train -> classify -> filter -> stats

plus the evaluation commands (eval, pr-curve, tsne) and SVG figures (plot).
Results go to the declared output files; status and the resolved settings go
to stderr, so stdout carries only machine-readable results.
"""

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any, Optional

import click
import numpy as np
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from readsift import __version__
from readsift.core.config import RunConfig, parse_overrides, resolve_config
from readsift.core.errors import DataError, NumericError, ReadsiftError
from readsift.core.labels import CLASSES, ReadClass
from readsift.core.log import configure_logging
from readsift.core.validation import InputValidator

app = typer.Typer(
    name="readsift",
    help="Semi-supervised classification of long reads from their coverage graphs",
    add_completion=False,
    no_args_is_help=True,
)
console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class PlotKind(str, Enum):
    coverage = "coverage"
    pr = "pr"
    tsne = "tsne"


# ============================================================================
# Shared plumbing
# ============================================================================


@contextmanager
def _reported() -> Iterator[None]:
    """Turn library errors into a one-line message and the matching exit code."""
    try:
        yield
    except typer.Exit:
        raise
    except ValidationError as e:
        err_console.print(f"[red]✗ Invalid settings:[/red] {escape(str(e))}")
        raise typer.Exit(EXIT_USAGE) from None
    except NumericError as e:
        err_console.print(f"[red]✗ Numeric failure:[/red] {escape(str(e))}")
        raise typer.Exit(EXIT_NUMERIC) from None
    except (DataError, OSError) as e:
        err_console.print(f"[red]✗ Error:[/red] {escape(str(e))}")
        raise typer.Exit(EXIT_DATA) from None
    except (ReadsiftError, ValueError) as e:
        err_console.print(f"[red]✗ Error:[/red] {escape(str(e))}")
        raise typer.Exit(EXIT_USAGE) from None


def _show(cfg: RunConfig) -> None:
    table = Table(title=f"readsift {cfg.command}", show_header=True, header_style="bold cyan")
    table.add_column("Setting", style="cyan", no_wrap=True)
    table.add_column("Value", style="green")
    for key, value in cfg.rows():
        table.add_row(key, value)
    err_console.print(table)


def _settings(
    ctx: typer.Context,
    command: str,
    inputs: dict[str, Optional[Path]],
    outputs: dict[str, Optional[Path]],
    overrides: Optional[list[str]] = None,
    sections: tuple[str, ...] = (),
    **flags: Any,
) -> RunConfig:
    """
    Validate declared paths, merge flags with the config file and print the result.

    Raises:
        DataError: If an input file is missing or unreadable
        ValueError: If an output path cannot be written
    """
    validator = InputValidator()
    checked_inputs: dict[str, Path] = {}
    for name, path in inputs.items():
        if path is None:
            continue
        try:
            checked_inputs[name] = validator.validate_input_path(path)
        except ValueError as e:
            raise DataError(str(e)) from None
    checked_outputs = {name: validator.validate_output_path(p) for name, p in outputs.items() if p is not None}

    nested = parse_overrides(overrides or [], sections)
    cfg = resolve_config(
        {"command": command, "inputs": checked_inputs, "outputs": checked_outputs, **nested, **flags},
        (ctx.obj or {}).get("config"),
    )
    _show(cfg)
    return cfg


def _done(message: str) -> None:
    err_console.print(f"[green]✓[/green] {message}")


@app.callback()
def main_callback(
    ctx: typer.Context,
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="-v for info, -vv for debug logging"),
    config: Optional[Path] = typer.Option(
        None, "--config", "-c", help="Settings file (key=value lines, or YAML for .yaml/.yml)"
    ),
) -> None:
    """readsift: classify long reads as chimeric, repeat or regular and filter overlaps."""
    configure_logging(verbose, err_console)
    ctx.obj = {"config": config}


@app.command()
def version() -> None:
    """Show readsift version information."""
    console.print(f"[bold cyan]readsift[/bold cyan] version [green]{__version__}[/green]")


# ============================================================================
# Read-level stages
# ============================================================================


@app.command()
def coverage(
    ctx: typer.Context,
    paf: Path = typer.Option(..., "--paf", help="Overlaps in PAF format"),
    out: Path = typer.Option(..., "--out", "-o", help="Coverage dump (read_id<TAB>d0,d1,...)"),
    min_mapq: Optional[int] = typer.Option(None, "--min-mapq", help="Ignore overlaps below this mapping quality"),
) -> None:
    """Build the per-base coverage graph of every read."""
    from readsift.genomics.coverage import build_coverage, save_coverage
    from readsift.genomics.overlaps import read_paf

    with _reported():
        cfg = _settings(ctx, "coverage", {"paf": paf}, {"out": out}, min_mapq=min_mapq)
        records, reads = read_paf(cfg.inputs["paf"])
        graphs = build_coverage(records, reads, cfg.min_mapq)
        save_coverage(graphs.values(), cfg.outputs["out"])
        _done(f"Coverage of {len(graphs)} reads written to [bold]{escape(str(out))}[/bold]")


@app.command()
def prep(
    ctx: typer.Context,
    coverage_file: Path = typer.Option(..., "--coverage", help="Coverage dump from 'readsift coverage'"),
    out: Path = typer.Option(..., "--out", "-o", help="Signals (read_id<TAB>v0,v1,...)"),
    model: Optional[str] = typer.Option(None, "--model", "-m", help="Model the signals are for; picks the default length"),
    length: Optional[int] = typer.Option(None, "--length", "-L", help="Signal length (default 100 for semigan, else 500)"),
    rejected: Optional[Path] = typer.Option(None, "--rejected", help="Write excluded reads and reasons here"),
) -> None:
    """Down-sample and normalize coverage graphs into fixed-length signals."""
    from readsift.genomics.coverage import load_coverage
    from readsift.genomics.signals import default_length, prepare_all, save_signals

    with _reported():
        cfg = _settings(
            ctx, "prep", {"coverage": coverage_file}, {"out": out, "rejected": rejected}, model=model, length=length
        )
        graphs = load_coverage(cfg.inputs["coverage"])
        signals, report = prepare_all(graphs.values(), cfg.length or default_length(cfg.model))
        save_signals(signals, cfg.outputs["out"])
        if "rejected" in cfg.outputs:
            with open(cfg.outputs["rejected"], "w", encoding="utf-8", newline="\n") as f:
                for read_id, reason in report.rejected.items():
                    f.write(f"{read_id}\t{reason}\n")
        _done(f"{len(signals)} signals written, {len(report)} reads excluded")


@app.command()
def heuristic(
    ctx: typer.Context,
    signals_file: Path = typer.Option(..., "--signals", help="Signals to label"),
    out: Path = typer.Option(..., "--out", "-o", help="Heuristic labels (read_id<TAB>label)"),
    pool: Optional[Path] = typer.Option(None, "--pool", help="Also write a class-balanced signal pool here"),
    per_class: int = typer.Option(0, "--per-class", min=0, help="Pool quota per heuristic class"),
    overrides: Optional[list[str]] = typer.Option(None, "--set", help="heuristic.KEY=VALUE override"),
) -> None:
    """Guess classes from signal shape (used to balance the unlabeled pool)."""
    from readsift.genomics.heuristic import HeuristicParams, balance_pool, heuristic_labels
    from readsift.genomics.signals import load_signals, save_labels, save_signals

    with _reported():
        cfg = _settings(
            ctx, "heuristic", {"signals": signals_file}, {"out": out, "pool": pool}, overrides, ("heuristic",)
        )
        params = HeuristicParams(**cfg.heuristic)
        signals = load_signals(cfg.inputs["signals"])
        labels = heuristic_labels(signals, params)
        save_labels(labels, cfg.outputs["out"])
        if "pool" in cfg.outputs:
            chosen = balance_pool(signals, params, {cls: per_class for cls in CLASSES}, cfg.seed)
            save_signals(chosen, cfg.outputs["pool"])
            _done(f"Balanced pool of {len(chosen)} signals written")
        counts = {cls: sum(1 for v in labels.values() if v is cls) for cls in CLASSES}
        _done("Labeled " + ", ".join(f"{cls.value}={n}" for cls, n in counts.items()))


@app.command()
def synth(
    ctx: typer.Context,
    out: Path = typer.Option(..., "--out", "-o", help="Signals file, or PAF with --pipeline"),
    labels_out: Path = typer.Option(..., "--labels", help="Truth labels (read_id<TAB>label)"),
    classes: int = typer.Option(4, "--classes", min=1, max=4, help="Generate the first K classes"),
    per_class: int = typer.Option(100, "--per-class", min=0, help="Signals per class"),
    noise: float = typer.Option(0.03, "--noise", min=0.0, help="Additive noise sigma"),
    model: Optional[str] = typer.Option(None, "--model", "-m", help="Model the signals are for; picks the default length"),
    length: Optional[int] = typer.Option(None, "--length", "-L", help="Signal length (default 100 for semigan, else 500)"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed (falls back to RSFT_SEED)"),
    pipeline: bool = typer.Option(False, "--pipeline", help="Simulate reads and overlaps instead of signals"),
    genome_length: int = typer.Option(200_000, "--genome-length", min=1, help="Pipeline: genome size"),
    n_reads: int = typer.Option(400, "--reads", min=0, help="Pipeline: number of reads"),
    chimera_rate: float = typer.Option(0.05, "--chimera-rate", min=0.0, max=1.0, help="Pipeline: fused-read share"),
    repeat: Optional[str] = typer.Option(
        None, "--repeat", help="Pipeline: START:LENGTH:COPY_START duplicated segment"
    ),
) -> None:
    """Generate labeled synthetic signals, or a synthetic overlap set."""
    from readsift.genomics.overlaps import save_paf
    from readsift.genomics.signals import default_length, save_labels, save_signals
    from readsift.genomics.synth import PipelineSpec, RepeatSpec, SynthConfig, synth_pipeline, synth_signals

    with _reported():
        cfg = _settings(
            ctx, "synth", {}, {"out": out, "labels": labels_out}, model=model, length=length, seed=seed
        )
        if pipeline:
            repeat_spec = None
            if repeat:
                try:
                    start, size, copy_start = (int(part) for part in repeat.split(":"))
                except ValueError:
                    raise ValueError(f"--repeat expects START:LENGTH:COPY_START, got {repeat!r}") from None
                repeat_spec = RepeatSpec(start=start, length=size, copy_start=copy_start)
            spec = PipelineSpec(
                genome_length=genome_length,
                n_reads=n_reads,
                chimera_rate=chimera_rate,
                repeat=repeat_spec,
                seed=cfg.seed,
            )
            reads, records, labels = synth_pipeline(spec)
            save_paf(records, cfg.outputs["out"])
            save_labels(labels, cfg.outputs["labels"])
            _done(f"{len(records)} overlaps over {len(reads)} reads written")
            return

        synth_cfg = SynthConfig(
            length=cfg.length or default_length(cfg.model),
            per_class={cls: per_class if cls.index < classes else 0 for cls in CLASSES},
            noise_sigma=noise,
            seed=cfg.seed,
        )
        signals, labels = synth_signals(synth_cfg)
        save_signals(signals, cfg.outputs["out"])
        save_labels(labels, cfg.outputs["labels"])
        _done(f"{len(signals)} synthetic signals written")


# ============================================================================
# Models
# ============================================================================


def _load_training_data(cfg: RunConfig) -> tuple[Any, Any]:
    """Labeled signals and the optional unlabeled pool named in ``cfg.inputs``."""
    from readsift.genomics.signals import load_labels, load_signals
    from readsift.training.data import LabeledSet, UnlabeledSet

    signals = load_signals(cfg.inputs["signals"])
    labels = load_labels(cfg.inputs["labels"])
    labeled = LabeledSet.from_signals([s for s in signals if s.read_id in labels], labels)
    if len(labeled) == 0:
        raise DataError("no signal has a label")
    unlabeled = None
    if "unlabeled" in cfg.inputs:
        unlabeled = UnlabeledSet.from_signals(load_signals(cfg.inputs["unlabeled"]))
    if cfg.length is not None and labeled.x.shape[1] != cfg.length:
        raise DataError(f"signals have length {labeled.x.shape[1]} but --length is {cfg.length}")
    return labeled, unlabeled


@app.command()
def train(
    ctx: typer.Context,
    model: Optional[str] = typer.Option(None, "--model", "-m", help="ff, m1m2 or semigan (default m1m2)"),
    signals_file: Path = typer.Option(..., "--signals", help="Signals; those with a label form the labeled set"),
    labels_file: Path = typer.Option(..., "--labels", help="Labels (read_id<TAB>label)"),
    unlabeled_file: Optional[Path] = typer.Option(
        None, "--unlabeled", help="Unlabeled pool (default: labeled signals left out of the sample)"
    ),
    labeled: Optional[int] = typer.Option(None, "--labeled", "-n", help="Labeled examples to sample (default 30)"),
    out: Path = typer.Option(..., "--out", "-o", help="Checkpoint file"),
    log_file: Optional[Path] = typer.Option(None, "--log", help="Per-epoch loss TSV"),
    resume: Optional[Path] = typer.Option(None, "--resume", help="Continue from a checkpoint of the same model"),
    length: Optional[int] = typer.Option(None, "--length", "-L", help="Expected signal length"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed (falls back to RSFT_SEED)"),
    overrides: Optional[list[str]] = typer.Option(None, "--set", help="train.KEY=VALUE override"),
) -> None:
    """Train a classifier on N class-stratified labeled signals."""
    from readsift.genomics.signals import default_length
    from readsift.models.base import ModelConfig
    from readsift.nn import checkpoint
    from readsift.training import TrainConfig, TrainerFactory
    from readsift.training.data import UnlabeledSet, stratified_sample

    with _reported():
        cfg = _settings(
            ctx,
            "train",
            {"signals": signals_file, "labels": labels_file, "unlabeled": unlabeled_file, "resume": resume},
            {"out": out, "log": log_file},
            overrides,
            ("train",),
            model=model,
            labeled=labeled,
            length=length,
            seed=seed,
        )
        pool, unlabeled = _load_training_data(cfg)
        if cfg.length is None and pool.x.shape[1] != default_length(cfg.model):
            logger.warning(
                "%s is laid out for L=%d; training at the signal length %d",
                cfg.model,
                default_length(cfg.model),
                pool.x.shape[1],
            )
        sample = stratified_sample(pool, cfg.labeled, np.random.default_rng([cfg.seed, cfg.labeled]))
        if unlabeled is None:
            chosen = set(sample.ids)
            rest = [i for i, read_id in enumerate(pool.ids) if read_id not in chosen]
            unlabeled = UnlabeledSet(tuple(pool.ids[i] for i in rest), pool.x[rest])

        train_config = TrainConfig.for_kind(cfg.model, **{**cfg.train, "seed": cfg.seed})
        total = train_config.epochs
        if cfg.model == "m1m2":
            total += train_config.m1_epochs if train_config.m1_epochs is not None else train_config.epochs

        with Progress(
            TextColumn("[bold cyan]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TextColumn("{task.fields[status]}"),
            TimeElapsedColumn(),
            console=err_console,
            transient=True,
        ) as progress:
            task = progress.add_task(f"training {cfg.model}", total=total, status="")

            def on_epoch(record: Any) -> None:
                first = next(iter(record.losses.items()), None)
                status = f"{first[0]}={first[1]:.4g}" if first else ""
                progress.update(task, advance=1, status=status)

            trainer = TrainerFactory.create(
                cfg.model,
                train_config,
                ModelConfig.for_kind(cfg.model, length=int(pool.x.shape[1])),
                on_epoch,
                checkpoint.load(cfg.inputs["resume"]) if "resume" in cfg.inputs else None,
            )
            result = trainer.fit(sample, unlabeled if len(unlabeled) else None)

        checkpoint.save(result.checkpoint, cfg.outputs["out"])
        if "log" in cfg.outputs:
            result.log.save(cfg.outputs["log"])
        best = f", best epoch {result.best_epoch}" if result.best_epoch is not None else ""
        _done(f"{cfg.model} trained on {len(sample)} labeled signals{best}; checkpoint [bold]{escape(str(out))}[/bold]")


@app.command()
def classify(
    ctx: typer.Context,
    checkpoint_file: Path = typer.Option(..., "--checkpoint", help="Checkpoint from 'readsift train'"),
    signals_file: Path = typer.Option(..., "--signals", help="Signals to classify"),
    out: Path = typer.Option(..., "--out", "-o", help="Classifications TSV"),
    truth: Optional[Path] = typer.Option(None, "--truth", help="True labels, enables --metrics and --report"),
    metrics: Optional[Path] = typer.Option(None, "--metrics", help="Macro-F and per-class F1 TSV"),
    report: Optional[Path] = typer.Option(None, "--report", help="Markdown evaluation report"),
) -> None:
    """Classify signals with a trained checkpoint."""
    from readsift.evaluation.classify import classify_checkpoint, save_classifications
    from readsift.genomics.signals import load_labels, load_signals
    from readsift.nn import checkpoint
    from readsift.utils.exporter import ReportExporter, metrics_table

    with _reported():
        if (metrics or report) and truth is None:
            raise ValueError("--metrics and --report need --truth")
        cfg = _settings(
            ctx,
            "classify",
            {"checkpoint": checkpoint_file, "signals": signals_file, "truth": truth},
            {"out": out, "metrics": metrics, "report": report},
        )
        ckpt = checkpoint.load(cfg.inputs["checkpoint"])
        results = classify_checkpoint(ckpt, load_signals(cfg.inputs["signals"]))
        save_classifications(results, cfg.outputs["out"])
        _done(f"{len(results)} reads classified with a '{ckpt.kind}' model")

        if "truth" in cfg.inputs:
            all_truth = load_labels(cfg.inputs["truth"])
            known = {c.read_id: all_truth[c.read_id] for c in results if c.read_id in all_truth}
            if "metrics" in cfg.outputs:
                cfg.outputs["metrics"].write_text(metrics_table(results, known), encoding="utf-8")
            if "report" in cfg.outputs:
                ReportExporter.export(cfg.outputs["report"], ckpt.kind, results, known)


@app.command(name="eval")
def evaluate(
    ctx: typer.Context,
    signals_file: Path = typer.Option(..., "--signals", help="Labeled signals (split into pool and test set)"),
    labels_file: Path = typer.Option(..., "--labels", help="Labels (read_id<TAB>label)"),
    unlabeled_file: Optional[Path] = typer.Option(None, "--unlabeled", help="Unlabeled pool"),
    models: Optional[str] = typer.Option(None, "--models", help="Comma list (default ff,m1m2,semigan)"),
    sizes: Optional[str] = typer.Option(None, "--labeled", help="Comma list of N (default 15,30,70)"),
    repeats: Optional[int] = typer.Option(None, "--repeats", help="Seeds per N (default 5)"),
    test_fraction: float = typer.Option(0.48, "--test-fraction", min=0.0, max=0.95, help="Per-class test share"),
    out: Path = typer.Option(..., "--out", "-o", help="Table: N<TAB>model columns"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed (falls back to RSFT_SEED)"),
    overrides: Optional[list[str]] = typer.Option(None, "--set", help="train.KEY=VALUE override"),
) -> None:
    """Mean macro-F of each model against the number of labeled examples."""
    from readsift.evaluation.benchmark import BenchmarkConfig, run_benchmark
    from readsift.training.data import split_validation

    with _reported():
        cfg = _settings(
            ctx,
            "eval",
            {"signals": signals_file, "labels": labels_file, "unlabeled": unlabeled_file},
            {"out": out},
            overrides,
            ("train",),
            models=models,
            labeled_sizes=sizes,
            repeats=repeats,
            seed=seed,
        )
        labeled, unlabeled = _load_training_data(cfg)
        pool, test = split_validation(labeled, test_fraction, np.random.default_rng([cfg.seed, 2]))
        if test is None:
            raise DataError("the test split is empty; raise --test-fraction or add labeled signals")

        bench = BenchmarkConfig(
            models=tuple(dict.fromkeys(cfg.models)),
            labeled_sizes=tuple(cfg.labeled_sizes),
            seeds=tuple(range(cfg.seed, cfg.seed + cfg.repeats)),
            train=dict(cfg.train),
        )
        runs = len(bench.models) * len(bench.labeled_sizes) * len(bench.seeds)
        with Progress(console=err_console, transient=True) as progress:
            task = progress.add_task("benchmark", total=runs)
            result = run_benchmark(bench, pool, test, unlabeled, lambda *_: progress.advance(task))
        result.save(cfg.outputs["out"])
        _done(f"{runs} training runs scored on {len(test)} test signals")


@app.command(name="pr-curve")
def pr_curve_command(
    ctx: typer.Context,
    classifications_file: Path = typer.Option(..., "--classifications", help="Output of 'readsift classify'"),
    truth: Path = typer.Option(..., "--truth", help="True labels"),
    target: str = typer.Option("chimeric", "--class", help="A class name, or 'mean' for the mean curve"),
    out: Path = typer.Option(..., "--out", "-o", help="Curve TSV (threshold<TAB>precision<TAB>recall)"),
) -> None:
    """Precision-recall curve of one class, or the mean over classes."""
    from readsift.evaluation.classify import load_classifications
    from readsift.evaluation.metrics import mean_pr_curve
    from readsift.genomics.signals import load_labels
    from readsift.utils.exporter import class_curves

    with _reported():
        valid = [c.value for c in CLASSES] + ["mean"]
        if target not in valid:
            raise ValueError(f"--class must be one of {', '.join(valid)}, got '{target}'")
        cfg = _settings(ctx, "pr-curve", {"classifications": classifications_file, "truth": truth}, {"out": out})
        results = load_classifications(cfg.inputs["classifications"])
        labels = load_labels(cfg.inputs["truth"])
        missing = [c.read_id for c in results if c.read_id not in labels]
        if missing:
            raise DataError(f"{len(missing)} classified reads have no true label (first: '{missing[0]}')")
        curves = class_curves(results, labels)
        if target == "mean":
            if not curves:
                raise DataError("no class has a positive example; the mean curve is undefined")
            curve = mean_pr_curve(list(curves.values()))
        else:
            cls = ReadClass(target)
            if cls not in curves:
                raise DataError(f"recall is undefined for class {cls}: no positive examples")
            curve = curves[cls]
        curve.save(cfg.outputs["out"])
        typer.echo(f"auc\t{curve.auc:.9g}")


@app.command()
def tsne(
    ctx: typer.Context,
    checkpoint_file: Path = typer.Option(..., "--checkpoint", help="m1, m1m2 or semigan checkpoint"),
    signals_file: Path = typer.Option(..., "--signals", help="Signals to embed"),
    labels_file: Optional[Path] = typer.Option(None, "--labels", help="Labels used to color points"),
    out: Path = typer.Option(..., "--out", "-o", help="Embedding TSV (read_id<TAB>x<TAB>y<TAB>label)"),
    perplexity: float = typer.Option(30.0, "--perplexity", help="Effective neighbor count"),
    iterations: int = typer.Option(1000, "--iterations", min=1, help="Gradient steps"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed (falls back to RSFT_SEED)"),
) -> None:
    """Embed the latent vectors of signals in 2D with exact t-SNE."""
    from readsift.evaluation.tsne import EmbedConfig, embed_signals
    from readsift.genomics.signals import load_labels, load_signals
    from readsift.nn import checkpoint

    with _reported():
        cfg = _settings(
            ctx,
            "tsne",
            {"checkpoint": checkpoint_file, "signals": signals_file, "labels": labels_file},
            {"out": out},
            seed=seed,
        )
        labels = load_labels(cfg.inputs["labels"]) if "labels" in cfg.inputs else {}
        embed_cfg = EmbedConfig(perplexity=perplexity, iterations=iterations, seed=cfg.seed)
        ckpt = checkpoint.load(cfg.inputs["checkpoint"])
        embedding = embed_signals(ckpt, load_signals(cfg.inputs["signals"]), labels, embed_cfg)
        embedding.save(cfg.outputs["out"])
        _done(f"{len(embedding.ids)} points embedded")


# ============================================================================
# Assembly preprocessing
# ============================================================================


@app.command(name="filter")
def filter_command(
    ctx: typer.Context,
    paf: Path = typer.Option(..., "--paf", help="Overlaps in PAF format"),
    classifications_file: Optional[Path] = typer.Option(None, "--classifications", help="Output of 'classify'"),
    labels_file: Optional[Path] = typer.Option(None, "--labels", help="Labels file instead of classifications"),
    out: Path = typer.Option(..., "--out", "-o", help="Kept overlaps (PAF)"),
    blacklist_file: Optional[Path] = typer.Option(None, "--blacklist", help="Write chimeric read ids here"),
) -> None:
    """Drop overlaps of chimeric reads and left/right repeat pairs."""
    from readsift.evaluation.classify import labels_of, load_classifications
    from readsift.genomics.assembly import blacklist, filter_overlaps, save_blacklist
    from readsift.genomics.overlaps import read_paf, save_paf
    from readsift.genomics.signals import load_labels

    with _reported():
        if (classifications_file is None) == (labels_file is None):
            raise ValueError("give exactly one of --classifications and --labels")
        cfg = _settings(
            ctx,
            "filter",
            {"paf": paf, "classifications": classifications_file, "labels": labels_file},
            {"out": out, "blacklist": blacklist_file},
        )
        if "classifications" in cfg.inputs:
            classes = labels_of(load_classifications(cfg.inputs["classifications"]))
        else:
            classes = load_labels(cfg.inputs["labels"])
        records, _ = read_paf(cfg.inputs["paf"])
        kept, report = filter_overlaps(records, classes)
        save_paf(kept, cfg.outputs["out"])
        if "blacklist" in cfg.outputs:
            save_blacklist(blacklist(classes), cfg.outputs["blacklist"])
        for key in ("reads_dropped", "overlaps_dropped_chimeric", "overlaps_dropped_repeat_pair", "overlaps_kept"):
            typer.echo(f"{key}\t{getattr(report, key)}")


@app.command()
def stats(
    ctx: typer.Context,
    contigs: Path = typer.Option(..., "--contigs", help="Contig FASTA or one length per line"),
    genome_length: int = typer.Option(..., "--genome-length", "-g", min=1, help="Reference genome size"),
) -> None:
    """Print the contig count and NG50 as 'n<TAB>ng50'."""
    from readsift.genomics.assembly import ng50, read_contig_lengths

    with _reported():
        cfg = _settings(ctx, "stats", {"contigs": contigs}, {})
        lengths = read_contig_lengths(cfg.inputs["contigs"])
        typer.echo(ng50(lengths, genome_length).to_line())


@app.command()
def plot(
    ctx: typer.Context,
    kind: PlotKind = typer.Argument(..., help="coverage, pr or tsne"),
    data: list[Path] = typer.Argument(..., help="Signals file, PR curve TSV(s) or embedding TSV"),
    out: Path = typer.Option(..., "--out", "-o", help="SVG file"),
    reads: Optional[list[str]] = typer.Option(None, "--read", help="Coverage plot: read ids to draw"),
    title: Optional[str] = typer.Option(None, "--title", help="Figure title"),
) -> None:
    """Render a figure as SVG."""
    from readsift.evaluation.metrics import load_pr_curve
    from readsift.evaluation.tsne import load_embedding
    from readsift.genomics.signals import load_signals
    from readsift.utils import svg

    with _reported():
        cfg = _settings(ctx, "plot", {f"data{i}": p for i, p in enumerate(data)}, {"out": out})
        paths = [cfg.inputs[f"data{i}"] for i in range(len(data))]
        if kind is PlotKind.coverage:
            signals = [s for path in paths for s in load_signals(path)]
            if reads:
                wanted = set(reads)
                signals = [s for s in signals if s.read_id in wanted]
            elif signals:
                signals = signals[:1]
            if not signals:
                raise ValueError("no signal to plot")
            document = svg.coverage_plot(signals, title or "Coverage signal")
        elif kind is PlotKind.pr:
            curves = [(path.stem, load_pr_curve(path)) for path in paths]
            document = svg.pr_plot(curves, title or "Precision-recall")
        else:
            if len(paths) != 1:
                raise ValueError("a t-SNE plot takes exactly one embedding file")
            document = svg.scatter_plot(load_embedding(paths[0]), title or "Latent space (t-SNE)")
        with open(cfg.outputs["out"], "w", encoding="utf-8", newline="\n") as f:
            f.write(document)
        _done(f"Figure written to [bold]{escape(str(out))}[/bold]")


def main() -> None:
    """Entry point for the CLI; click usage errors exit with 1 like every other usage error."""
    try:
        code = app(standalone_mode=False)
    except click.exceptions.Abort:
        err_console.print("\n[yellow]Aborted.[/yellow]")
        sys.exit(EXIT_USAGE)
    except click.exceptions.ClickException as e:
        e.show()
        sys.exit(EXIT_USAGE)
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == "__main__":
    main()
