"""Line-delimited JSON storage of detection records."""

import logging
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Union

from pydantic import ValidationError

from core.errors import InvalidConfigurationError, NoEvidenceError, WriteError

from .fusion import fuse
from .schemas import DetectionRecord, FusionRule

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def dump_records(records: Iterable[DetectionRecord], stream: TextIO) -> int:
    """Write one compact JSON object per line. Returns the number written."""
    count = 0
    for record in records:
        stream.write(record.model_dump_json(exclude_none=True) + "\n")
        count += 1
    return count


def write_records(records: Iterable[DetectionRecord], path: Optional[PathLike] = None) -> int:
    """Write records to a file, or to stdout when path is None."""
    if path is None:
        return dump_records(records, sys.stdout)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as f:
            return dump_records(records, f)
    except OSError as e:
        raise WriteError(f"cannot write records: {e}", path=str(path), stage="records") from e


def read_records(path: PathLike) -> List[DetectionRecord]:
    """Parse a JSONL record file; blank lines are ignored.

    Raises:
        InvalidConfigurationError: A line is not a valid record.
    """
    path = Path(path)
    records = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise InvalidConfigurationError(f"cannot read records: {e}", path=str(path), stage="records") from e
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(DetectionRecord.model_validate_json(line))
        except ValidationError as e:
            raise InvalidConfigurationError(
                f"line {number}: invalid record ({e.error_count()} error(s))",
                path=str(path),
                stage="records",
            ) from e
    logger.debug("Read %d records from %s", len(records), path)
    return records


def join_records(
    acoustic: Iterable[DetectionRecord],
    visual: Iterable[DetectionRecord],
    rule: FusionRule = FusionRule.OR,
    config_digest: Optional[str] = None,
) -> List[DetectionRecord]:
    """Merge per-modality streams by clip id and fuse each pair.

    Output follows the acoustic stream's order, then clips seen only by the
    camera in their own order. A clip lacking the verdict a single-modality
    rule needs is logged and left out; the other clips are still fused.
    """
    merged: Dict[str, dict] = {}
    for record in acoustic:
        merged[record.clip_id] = {
            "clip_id": record.clip_id,
            "scene_class": record.scene_class,
            "acoustic_verdict": record.acoustic_verdict,
            "acoustic_score": record.acoustic_score,
            "ground_truth": record.ground_truth,
            "notes": list(record.notes),
        }
    for record in visual:
        entry = merged.setdefault(record.clip_id, {"clip_id": record.clip_id, "notes": []})
        entry["visual_verdict"] = record.visual_verdict
        entry["visual_region"] = record.visual_region
        entry["notes"].extend(record.notes)
        if entry.get("ground_truth") is None:
            entry["ground_truth"] = record.ground_truth
        if entry.get("scene_class") is None:
            entry["scene_class"] = record.scene_class

    joined = []
    for entry in merged.values():
        a, v = entry.get("acoustic_verdict"), entry.get("visual_verdict")
        if a is not None or v is not None:
            try:
                entry["fused_verdict"] = fuse(a, v, rule)
            except NoEvidenceError as e:
                logger.warning("%s: skipped under the %s rule: %s", entry["clip_id"], rule.value, e)
                continue
        entry["config_digest"] = config_digest
        joined.append(DetectionRecord(**entry))
    return joined
