"""Detection metrics, sensing-rate sweeps and report tables."""

from .metrics import ConfusionCounts, Metrics, score, try_score
from .reports import (
    METRIC_COLUMNS,
    compare_modalities,
    comparison_rows,
    comparison_table,
    format_table,
    print_table,
    sweep_columns,
    sweep_rows,
    sweep_table,
    write_table,
)
from .sweeps import (
    SweepRow,
    classify_clips,
    detect_shots,
    sweep_audio_rate,
    sweep_frame_count,
)

__all__ = [
    "ConfusionCounts",
    "Metrics",
    "score",
    "try_score",
    "METRIC_COLUMNS",
    "compare_modalities",
    "comparison_rows",
    "comparison_table",
    "format_table",
    "print_table",
    "sweep_columns",
    "sweep_rows",
    "sweep_table",
    "write_table",
    "SweepRow",
    "classify_clips",
    "detect_shots",
    "sweep_audio_rate",
    "sweep_frame_count",
]
