"""Detection metrics over labeled detection records."""

import logging
from typing import Iterable, Optional, Sequence

from pydantic import BaseModel, Field

from controller.schemas import DetectionRecord, Modality
from core.errors import InvalidConfigurationError, UndefinedRateError

logger = logging.getLogger(__name__)


class ConfusionCounts(BaseModel):
    """Binary confusion counts with TV as the positive class."""

    tp: int = Field(default=0, ge=0)
    fp: int = Field(default=0, ge=0)
    tn: int = Field(default=0, ge=0)
    fn: int = Field(default=0, ge=0)

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.fp + self.tn

    @property
    def total(self) -> int:
        return self.positives + self.negatives

    @classmethod
    def from_pairs(cls, predicted: Sequence[bool], actual: Sequence[bool]) -> "ConfusionCounts":
        if len(predicted) != len(actual):
            raise InvalidConfigurationError(
                f"{len(predicted)} predictions but {len(actual)} labels", stage="score"
            )
        counts = {"tp": 0, "fp": 0, "tn": 0, "fn": 0}
        for p, a in zip(predicted, actual):
            key = ("tp" if a else "fp") if p else ("fn" if a else "tn")
            counts[key] += 1
        return cls(**counts)


class Metrics(BaseModel):
    """Rates derived from one set of confusion counts."""

    counts: ConfusionCounts
    fn_rate: float
    fp_rate: float
    precision: float
    recall: float
    f_measure: float
    excluded: int = 0

    @classmethod
    def from_counts(cls, counts: ConfusionCounts, excluded: int = 0) -> "Metrics":
        """Derive rates from counts.

        fn_rate is taken over actual positives and fp_rate over actual
        negatives. Precision is 1.0 when nothing was predicted positive.

        Raises:
            UndefinedRateError: No positives or no negatives among the counts.
        """
        if counts.positives == 0 or counts.negatives == 0:
            raise UndefinedRateError(
                f"need both classes, got {counts.positives} positive and {counts.negatives} negative",
                stage="score",
            )
        fn_rate = counts.fn / counts.positives
        fp_rate = counts.fp / counts.negatives
        predicted = counts.tp + counts.fp
        precision = counts.tp / predicted if predicted else 1.0
        recall = 1.0 - fn_rate
        f = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        return cls(
            counts=counts,
            fn_rate=fn_rate,
            fp_rate=fp_rate,
            precision=precision,
            recall=recall,
            f_measure=f,
            excluded=excluded,
        )

    def as_row(self) -> dict:
        """Flat mapping used by the CSV tables."""
        return {
            "fn_rate": self.fn_rate,
            "fp_rate": self.fp_rate,
            "precision": self.precision,
            "recall": self.recall,
            "f_measure": self.f_measure,
            "tp": self.counts.tp,
            "fp": self.counts.fp,
            "tn": self.counts.tn,
            "fn": self.counts.fn,
            "excluded": self.excluded,
        }


def score(records: Iterable[DetectionRecord], modality: Modality = Modality.FUSED) -> Metrics:
    """Score one modality's verdicts against ground truth.

    Records without a verdict for the selected modality are skipped and
    counted in ``Metrics.excluded``.

    Raises:
        InvalidConfigurationError: A record has no ground truth.
        UndefinedRateError: Scored records hold a single class.
    """
    predicted, actual = [], []
    excluded = 0
    for record in records:
        if record.ground_truth is None:
            raise InvalidConfigurationError(
                f"record {record.clip_id!r} has no ground truth", stage="score"
            )
        verdict = record.verdict(modality)
        if verdict is None:
            excluded += 1
            continue
        predicted.append(verdict)
        actual.append(record.ground_truth)

    counts = ConfusionCounts.from_pairs(predicted, actual)
    logger.debug("Scored %s: %s (%d excluded)", modality.value, counts, excluded)
    return Metrics.from_counts(counts, excluded=excluded)


def try_score(records: Sequence[DetectionRecord], modality: Modality) -> Optional[Metrics]:
    """score(), or None when the records give that modality nothing to rate."""
    try:
        return score(records, modality)
    except UndefinedRateError as e:
        logger.info("No %s score: %s", modality.value, e.message)
        return None
