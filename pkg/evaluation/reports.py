"""Metric tables: comma-separated files for machines, rich tables for people."""

import csv
import io
import logging
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

from rich.console import Console
from rich.table import Table

from controller.schemas import DetectionRecord, Modality
from core.errors import WriteError

from .metrics import Metrics, try_score
from .sweeps import SweepRow

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

METRIC_COLUMNS = ("fn_rate", "fp_rate", "precision", "recall", "f_measure", "tp", "fp", "tn", "fn", "excluded")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def format_table(rows: Iterable[dict], columns: Sequence[str]) -> str:
    """Render rows as CSV text with a header row and fixed float formatting."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buffer.getvalue()


def write_table(rows: Iterable[dict], columns: Sequence[str], path: Optional[PathLike] = None) -> None:
    """Write a CSV table to a file, or to stdout when path is None."""
    text = format_table(rows, columns)
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise WriteError(f"cannot write table: {e}", path=str(path), stage="report") from e


# ---------------------------------------------------------------------------
# Modality comparison
# ---------------------------------------------------------------------------

def compare_modalities(records: Sequence[DetectionRecord]) -> Dict[Modality, Optional[Metrics]]:
    """Score each modality over the records that carry its verdict.

    The fused column only counts records holding both modality verdicts, so
    single-modality streams contribute to their own column alone.
    """
    return {
        Modality.ACOUSTIC: try_score(
            [r for r in records if r.acoustic_verdict is not None], Modality.ACOUSTIC
        ),
        Modality.VISUAL: try_score(
            [r for r in records if r.visual_verdict is not None], Modality.VISUAL
        ),
        Modality.FUSED: try_score(
            [r for r in records if r.acoustic_verdict is not None and r.visual_verdict is not None],
            Modality.FUSED,
        ),
    }


def comparison_rows(results: Dict[Modality, Optional[Metrics]]) -> List[dict]:
    """One CSV row per modality that could be scored."""
    return [
        {"modality": modality.value, **metrics.as_row()}
        for modality, metrics in results.items()
        if metrics is not None
    ]


def comparison_table(results: Dict[Modality, Optional[Metrics]]) -> Table:
    """Rates as rows, modalities as columns."""
    table = Table(title="TV Detection Approaches")
    table.add_column("Metric", style="bold")
    for modality in results:
        table.add_column(modality.value.capitalize(), justify="right", style="cyan")

    def line(label: str, pick) -> None:
        table.add_row(label, *[pick(m) if m is not None else "-" for m in results.values()])

    line("False Negative Rate", lambda m: f"{m.fn_rate:.3f}")
    line("False Positive Rate", lambda m: f"{m.fp_rate:.3f}")
    line("Precision", lambda m: f"{m.precision:.3f}")
    line("F-measure", lambda m: f"{m.f_measure:.3f}")
    line("TP / FN", lambda m: f"{m.counts.tp} / {m.counts.fn}")
    line("FP / TN", lambda m: f"{m.counts.fp} / {m.counts.tn}")
    return table


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def sweep_rows(rows: Sequence[SweepRow], key: str) -> List[dict]:
    """Flatten sweep points; unscored points keep only the key and skip count."""
    flat = []
    for row in rows:
        entry = {key: row.value}
        if row.metrics is not None:
            entry.update(row.metrics.as_row())
        entry["skipped"] = row.skipped
        flat.append(entry)
    return flat


def sweep_columns(key: str) -> List[str]:
    return [key, *METRIC_COLUMNS, "skipped"]


def sweep_table(rows: Sequence[SweepRow], key: str, title: str) -> Table:
    table = Table(title=title)
    table.add_column(key.capitalize(), style="bold")
    table.add_column("FN rate", justify="right", style="cyan")
    table.add_column("FP rate", justify="right", style="cyan")
    table.add_column("F-measure", justify="right", style="green")
    table.add_column("Skipped", justify="right", style="dim")
    for row in rows:
        m = row.metrics
        table.add_row(
            str(row.value),
            f"{m.fn_rate:.3f}" if m else "-",
            f"{m.fp_rate:.3f}" if m else "-",
            f"{m.f_measure:.3f}" if m else "-",
            str(row.skipped),
        )
    return table


def print_table(table: Table, console: Optional[Console] = None) -> None:
    (console or Console(stderr=True)).print(table)
