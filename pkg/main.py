#!/usr/bin/env python3
"""
TV Sense - Main entry point.

Detects whether a TV is present from a phone's microphone recordings and
camera shots, offline and in batch. Every command reads and writes plain
files so the steps compose through files or pipes.

Usage:
    python main.py synth --audio tv=5,laptop=5,conversation=5 --seed 7 --out corpus/
    python main.py train --manifest corpus/train.csv --model tv.svm
    python main.py classify --model tv.svm --manifest corpus/test.csv --out acoustic.jsonl
    python main.py detect-video --manifest corpus/test.csv --out visual.jsonl
    python main.py fuse --acoustic acoustic.jsonl --visual visual.jsonl --out fused.jsonl
    python main.py eval --records fused.jsonl
    python main.py sweep rate --model tv.svm --manifest corpus/test.csv --rates 4000,8000,16000,44100
    python main.py sweep frames --manifest corpus/test.csv --counts 2,4,8

Exit codes: 0 success, 1 usage error, 2 data or processing error.
"""

import argparse
import sys
from datetime import datetime
from functools import partial
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn

from acoustic import Kernel, decision_values, load_model, save_model, write_feature_dump
from controller import (
    ControllerConfig,
    FusionRule,
    join_records,
    read_records,
    train_detector,
    window_features,
    write_records,
)
from core import TvSenseError, UndefinedRateError, setup_logging
from core import config
from core.errors import InvalidConfigurationError
from evaluation import (
    classify_clips,
    compare_modalities,
    comparison_rows,
    comparison_table,
    detect_shots,
    sweep_audio_rate,
    sweep_columns,
    sweep_frame_count,
    sweep_rows,
    sweep_table,
    write_table,
)
from evaluation.reports import METRIC_COLUMNS
from synth import (
    CorpusSpec,
    ManifestEntry,
    load_clips,
    load_shots,
    read_manifest,
    synth_corpus,
)
from visual import CenterMode, IntersectionMode

console = Console(stderr=True)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def print_banner():
    """Print application banner."""
    banner = """
╔══════════════════════════════════════════════════════════════╗
║                         TV SENSE                             ║
║        Acoustic and visual TV presence detection             ║
╚══════════════════════════════════════════════════════════════╝
    """
    console.print(Panel(banner.strip(), style="bold blue"))


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# Argument types
# ---------------------------------------------------------------------------

def class_counts(text: str) -> Dict[str, int]:
    """Parse 'tv=5,laptop=5' into a class -> count mapping."""
    counts = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sep, value = part.partition("=")
        if not sep or not value.strip().isdigit():
            raise argparse.ArgumentTypeError(f"expected class=count, got {part!r}")
        counts[name.strip()] = int(value)
    if not counts:
        raise argparse.ArgumentTypeError("no class counts given")
    return counts


def int_list(text: str) -> List[int]:
    """Parse '4000,8000,16000' into integers."""
    try:
        values = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def existing_path(text: str) -> Path:
    path = Path(text)
    if not path.exists():
        raise argparse.ArgumentTypeError(f"no such file or directory: {text}")
    return path


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def flag_groups() -> Dict[str, argparse.ArgumentParser]:
    """Parent parsers, one per settings concern; each command takes only the groups it reads."""
    base = argparse.ArgumentParser(add_help=False)
    base.add_argument("--log-level", default=None, help="Overrides TVSENSE_LOG")

    jobs = argparse.ArgumentParser(add_help=False)
    jobs.add_argument("--jobs", type=int, default=config.DEFAULT_JOBS, help="Worker processes")

    seed = argparse.ArgumentParser(add_help=False)
    seed.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="Seed for all randomness")

    audio = argparse.ArgumentParser(add_help=False)
    audio.add_argument("--rate", type=int, default=config.CAPTURE_RATE, help="Audio sample rate in Hz")

    svm = argparse.ArgumentParser(add_help=False)
    svm.add_argument("--kernel", choices=[k.value for k in Kernel], default=Kernel.RBF.value)
    svm.add_argument("--c", type=float, default=config.SVM_C, help="SVM box constraint")
    svm.add_argument("--gamma", type=float, default=None, help="RBF width (default 1/features)")
    svm.add_argument("--tol", type=float, default=config.SVM_TOL, help="SMO KKT tolerance")
    svm.add_argument("--features", default=None, help="Comma-separated feature subset, e.g. zcr,ste")

    camera = argparse.ArgumentParser(add_help=False)
    camera.add_argument("--frames-per-shot", type=int, default=config.FRAMES_PER_SHOT, help="Frames per camera shot")
    camera.add_argument(
        "--intersection-mode", choices=[m.value for m in IntersectionMode], default=IntersectionMode.CANDIDATE.value
    )
    camera.add_argument("--center-mode", choices=[m.value for m in CenterMode], default=CenterMode.COMPONENT.value)

    fusion = argparse.ArgumentParser(add_help=False)
    fusion.add_argument("--fusion", choices=[r.value for r in FusionRule], default=FusionRule.OR.value)

    return {"base": base, "jobs": jobs, "seed": seed, "audio": audio, "svm": svm, "camera": camera, "fusion": fusion}


def build_parser() -> CliParser:
    g = flag_groups()
    parser = CliParser(
        prog="main.py",
        description="TV presence detection from audio recordings and camera shots",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    p = commands.add_parser("synth", parents=[g["base"], g["jobs"], g["seed"]], help="Generate a synthetic corpus")
    p.add_argument("--audio", type=class_counts, help="Audio counts, e.g. tv=51,laptop=50,conversation=50")
    p.add_argument("--visual", type=class_counts, help="Shot counts, e.g. tv_screen=14,empty=4")
    p.add_argument("--paired", type=class_counts, help="Paired recording+shot counts by audio class")
    p.add_argument("--duration", type=float, default=30.0, help="Seconds per recording")
    p.add_argument("--frames", type=int, default=config.FRAMES_PER_SHOT, help="Frames per shot")
    p.add_argument("--out", type=Path, required=True, help="Corpus directory")

    p = commands.add_parser("features", parents=[g["base"], g["audio"]], help="Dump per-window features as CSV")
    p.add_argument("--manifest", type=existing_path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--model", type=existing_path, default=None, help="Append each window's decision value")

    p = commands.add_parser("train", parents=[g["base"], g["audio"], g["svm"]], help="Train the acoustic classifier")
    p.add_argument("--manifest", type=existing_path, required=True)
    p.add_argument("--model", type=Path, required=True)

    p = commands.add_parser("classify", parents=[g["base"], g["jobs"], g["audio"]], help="Acoustic verdict per recording")
    p.add_argument("--model", type=existing_path, required=True)
    p.add_argument("--manifest", type=existing_path, required=True)
    p.add_argument("--out", type=Path, default=None, help="JSONL output (default stdout)")

    p = commands.add_parser("detect-video", parents=[g["base"], g["jobs"], g["camera"]], help="Visual verdict per shot")
    p.add_argument("--manifest", type=existing_path, required=True)
    p.add_argument("--out", type=Path, default=None, help="JSONL output (default stdout)")

    p = commands.add_parser("fuse", parents=[g["base"], g["fusion"]], help="Join acoustic and visual records")
    p.add_argument("--acoustic", type=existing_path, required=True)
    p.add_argument("--visual", type=existing_path, required=True)
    p.add_argument("--out", type=Path, default=None, help="JSONL output (default stdout)")

    p = commands.add_parser("eval", parents=[g["base"]], help="Score detection records")
    p.add_argument("--records", type=existing_path, action="append", required=True)
    p.add_argument("--out", type=Path, default=None, help="CSV output (default stdout)")

    p = commands.add_parser("sweep", help="Sensing-rate sweeps")
    sweeps = p.add_subparsers(dest="sweep", required=True, parser_class=CliParser)

    s = sweeps.add_parser("rate", parents=[g["base"], g["jobs"], g["svm"]], help="Audio sample rate sweep")
    s.add_argument("--model", type=existing_path, required=True)
    s.add_argument("--manifest", type=existing_path, required=True)
    s.add_argument("--rates", type=int_list, required=True)
    s.add_argument("--train-manifest", type=existing_path, default=None, help="Retrain at every rate")
    s.add_argument("--out", type=Path, default=None, help="CSV output (default stdout)")

    s = sweeps.add_parser("frames", parents=[g["base"], g["jobs"], g["camera"]], help="Frames-per-shot sweep")
    s.add_argument("--manifest", type=existing_path, required=True)
    s.add_argument("--counts", type=int_list, required=True)
    s.add_argument("--out", type=Path, default=None, help="CSV output (default stdout)")

    return parser


# flag dest -> ControllerConfig field
SETTING_FLAGS = {
    "rate": "audio_sample_rate",
    "frames_per_shot": "frames_per_shot",
    "features": "feature_subset",
    "fusion": "fusion_rule",
    "intersection_mode": "intersection_mode",
    "center_mode": "center_mode",
    "kernel": "kernel",
    "c": "c",
    "gamma": "gamma",
    "tol": "tol",
}


def settings_from(args: argparse.Namespace) -> ControllerConfig:
    """Controller settings from the flags the command accepted; the rest keep their defaults.

    Raises:
        InvalidConfigurationError: A flag value violates a setting's constraint.
    """
    given = {field: getattr(args, dest) for dest, field in SETTING_FLAGS.items() if hasattr(args, dest)}
    try:
        return ControllerConfig(**given)
    except ValidationError as e:
        raise InvalidConfigurationError(_first_error(e), stage="settings") from e


def _first_error(e: ValidationError) -> str:
    err = e.errors()[0]
    where = ".".join(str(p) for p in err.get("loc", ()))
    return f"{where}: {err.get('msg')}" if where else str(err.get("msg"))


def _manifest(path: Path) -> List[ManifestEntry]:
    entries = read_manifest(path)
    if not entries:
        raise InvalidConfigurationError("manifest lists no entries", path=str(path), stage="manifest")
    return entries


def _spinner() -> Progress:
    return Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"), console=console)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_synth(args: argparse.Namespace) -> int:
    print_banner()
    start_time = datetime.now()
    if args.audio or args.visual or args.paired:
        counts = {"audio": args.audio or {}, "visual": args.visual or {}, "paired": args.paired or {}}
    else:
        counts = {
            "audio": CorpusSpec.default_audio().audio,
            "visual": CorpusSpec.default_visual().visual,
        }
        console.print("[blue]→[/blue] No counts given, using the default audio and visual corpora")
    try:
        spec = CorpusSpec(seed=args.seed, duration=args.duration, frames=args.frames, **counts)
    except ValidationError as e:
        raise InvalidConfigurationError(_first_error(e), stage="synth") from e

    with _spinner() as progress:
        task = progress.add_task("Rendering scenes...", total=None)
        summary = synth_corpus(
            spec,
            args.out,
            jobs=args.jobs,
            progress=lambda n: progress.update(task, description=f"Rendered {n} item(s)..."),
        )

    duration = datetime.now() - start_time
    console.print()
    console.print(Panel(
        f"""
[bold green]Corpus Written![/bold green]

Entries:   {summary.count()}
Train:     {summary.count("train")}
Test:      {summary.count("test")}
Digest:    {summary.digest[:12]}

Duration: {duration.total_seconds():.1f} seconds
Directory: {summary.root}
        """.strip(),
        title="Summary",
        style="green",
    ))
    return EXIT_OK


def cmd_features(args: argparse.Namespace) -> int:
    settings = settings_from(args)
    clips = load_clips(_manifest(args.manifest), args.manifest.parent)
    margins = partial(decision_values, load_model(args.model)) if args.model else None
    written = write_feature_dump(
        ((c.clip_id, window_features(c.clip, settings)) for c in clips), args.out, margins=margins
    )
    console.print(f"[green]✓[/green] Wrote {written} feature windows from {len(clips)} recordings to {args.out}")
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    settings = settings_from(args)
    clips = load_clips(_manifest(args.manifest), args.manifest.parent)
    console.print(f"[blue]→[/blue] Training on {len(clips)} recordings at {settings.audio_sample_rate} Hz")
    with _spinner() as progress:
        progress.add_task("Running SMO...", total=None)
        model = train_detector(((c.clip, c.label) for c in clips), settings)
    save_model(model, args.model)
    console.print(Panel(
        f"""
[bold green]Model Trained![/bold green]

Kernel:          {model.kernel.value}
Support vectors: {model.n_support}
Features:        {", ".join(model.feature_names)}

Model: {args.model}
        """.strip(),
        title="Summary",
        style="green",
    ))
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    settings = settings_from(args)
    model = load_model(args.model)
    clips = load_clips(_manifest(args.manifest), args.manifest.parent)
    records = classify_clips(clips, model, settings, jobs=args.jobs)
    write_records(records, args.out)
    tv = sum(1 for r in records if r.acoustic_verdict)
    console.print(f"[green]✓[/green] Classified {len(records)} recordings, {tv} as TV")
    return EXIT_OK


def cmd_detect_video(args: argparse.Namespace) -> int:
    settings = settings_from(args)
    shots = load_shots(_manifest(args.manifest), args.manifest.parent)
    records = detect_shots(shots, settings, jobs=args.jobs)
    write_records(records, args.out)
    tv = sum(1 for r in records if r.visual_verdict)
    console.print(f"[green]✓[/green] Checked {len(records)} shots, {tv} with a TV")
    return EXIT_OK


def cmd_fuse(args: argparse.Namespace) -> int:
    settings = settings_from(args)
    acoustic, visual = read_records(args.acoustic), read_records(args.visual)
    joined = join_records(acoustic, visual, settings.fusion_rule, settings.digest())
    write_records(joined, args.out)
    console.print(f"[green]✓[/green] Fused {len(joined)} clips with the {settings.fusion_rule.value} rule")
    skipped = len({r.clip_id for r in acoustic} | {r.clip_id for r in visual}) - len(joined)
    if skipped:
        console.print(f"[yellow]⚠[/yellow] Skipped {skipped} clips without the verdict the rule needs")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    records = [r for path in args.records for r in read_records(path)]
    results = compare_modalities(records)
    if all(m is None for m in results.values()):
        raise UndefinedRateError(
            "no modality has both positive and negative records", stage="eval"
        )
    write_table(comparison_rows(results), ["modality", *METRIC_COLUMNS], args.out)
    console.print(comparison_table(results))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    settings = settings_from(args)
    entries = _manifest(args.manifest)
    with _spinner() as progress:
        if args.sweep == "rate":
            model = load_model(args.model)
            clips = load_clips(entries, args.manifest.parent)
            train_clips = None
            if args.train_manifest:
                train_clips = load_clips(_manifest(args.train_manifest), args.train_manifest.parent)
            task = progress.add_task("Sweeping sample rates...", total=len(args.rates))
            rows = sweep_audio_rate(
                clips, model, args.rates, settings, train_clips=train_clips, jobs=args.jobs,
                progress=lambda n: progress.update(task, completed=n),
            )
            key, title = "rate", "Audio Sampling Rate Effect"
        else:
            shots = load_shots(entries, args.manifest.parent)
            task = progress.add_task("Sweeping frame counts...", total=len(args.counts))
            rows = sweep_frame_count(
                shots, args.counts, settings, jobs=args.jobs,
                progress=lambda n: progress.update(task, completed=n),
            )
            key, title = "frames", "Camera Frames Effect"

    write_table(sweep_rows(rows, key), sweep_columns(key), args.out)
    for row in rows:
        for note in row.notes[:5]:
            console.print(f"[yellow]⚠[/yellow] {escape(note)}")
    console.print(sweep_table(rows, key, title))
    return EXIT_OK


COMMANDS = {
    "synth": cmd_synth,
    "features": cmd_features,
    "train": cmd_train,
    "classify": cmd_classify,
    "detect-video": cmd_detect_video,
    "fuse": cmd_fuse,
    "eval": cmd_eval,
    "sweep": cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except TvSenseError as e:
        console.print(f"[red]✗[/red] {escape(e.describe())}")
        return EXIT_DATA
    except ValidationError as e:
        console.print(f"[red]✗[/red] {escape(f'[{args.command}] {_first_error(e)}')}")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
