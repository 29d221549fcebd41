"""On-disk synthetic corpora with train/test manifests."""

import csv
import hashlib
import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from acoustic.audio_io import read_wav, write_wav
from acoustic.validators import AudioClip, Label
from core.errors import InvalidConfigurationError, WriteError
from core.parallel import ordered_map
from visual.images import load_shot, write_shot
from visual.validators import GrayImage

from .audio_scenes import synth_audio
from .frame_scenes import synth_frames
from .rng import derive_seed
from .validators import AUDIO_CLASSES, VISUAL_CLASSES, CorpusSpec, ManifestEntry, SceneSpec

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

MANIFEST = "manifest.csv"
TRAIN_MANIFEST = "train.csv"
TEST_MANIFEST = "test.csv"

# negative shots paired with non-TV recordings, cycled in this order
PAIRED_NEGATIVE_SHOTS = ("picture_frame", "moving_blob", "empty")


class CorpusSummary(BaseModel):
    """What synth_corpus wrote."""

    root: str
    entries: List[ManifestEntry]
    digest: str

    def count(self, split: Optional[str] = None) -> int:
        return sum(1 for e in self.entries if split is None or e.split == split)


class _Item(BaseModel):
    """One scene to render, resolved to its files."""

    clip_id: str
    group: str
    scene_class: str
    split: str
    seed: int
    audio: bool
    visual_class: Optional[str] = None


def item_id(seed: int, scene_class: str, index: int) -> str:
    digest = hashlib.sha1(f"{seed}:{scene_class}:{index}".encode("utf-8")).hexdigest()[:10]
    return f"{scene_class}_{digest}"


def _split(ids: Sequence[str], test_fraction: float) -> Dict[str, str]:
    """First round(n * test_fraction) ids in sorted order are test, the rest train."""
    ordered = sorted(ids)
    n_test = int(round(len(ordered) * test_fraction))
    return {cid: ("test" if k < n_test else "train") for k, cid in enumerate(ordered)}


def plan_items(spec: CorpusSpec) -> List[_Item]:
    """Resolve counts into concrete items, ids and splits without touching disk."""
    items: List[_Item] = []

    for scene_class in AUDIO_CLASSES:
        count = spec.audio.get(scene_class, 0)
        ids = [item_id(spec.seed, scene_class, i) for i in range(count)]
        splits = _split(ids, spec.test_fraction)
        for cid in sorted(ids):
            items.append(_Item(
                clip_id=cid, group="audio", scene_class=scene_class, split=splits[cid],
                seed=derive_seed(spec.seed, "audio", cid), audio=True,
            ))

    for scene_class in VISUAL_CLASSES:
        count = spec.visual.get(scene_class, 0)
        for cid in sorted(item_id(spec.seed, scene_class, i) for i in range(count)):
            items.append(_Item(
                clip_id=cid, group="visual", scene_class=scene_class, split="test",
                seed=derive_seed(spec.seed, "visual", cid), audio=False, visual_class=scene_class,
            ))

    for scene_class in AUDIO_CLASSES:
        count = spec.paired.get(scene_class, 0)
        ids = [item_id(spec.seed, f"paired_{scene_class}", i) for i in range(count)]
        splits = _split(ids, spec.test_fraction)
        for k, cid in enumerate(sorted(ids)):
            if scene_class == "tv":
                shot = "tv_screen"
            else:
                shot = PAIRED_NEGATIVE_SHOTS[k % len(PAIRED_NEGATIVE_SHOTS)]
            items.append(_Item(
                clip_id=cid, group="paired", scene_class=scene_class, split=splits[cid],
                seed=derive_seed(spec.seed, "paired", cid), audio=True, visual_class=shot,
            ))
    return items


def _render(job: Tuple[str, dict, dict]) -> List[dict]:
    """Render one item into the corpus root. Runs in worker processes."""
    root, item_fields, spec_fields = job
    item = _Item(**item_fields)
    root_path = Path(root)
    written = []
    if item.audio:
        rel = f"{item.group}/{item.clip_id}.wav"
        clip = synth_audio(SceneSpec(
            scene_class=item.scene_class, seed=item.seed, duration=spec_fields["duration"],
        ))
        write_wav(clip, root_path / rel)
        written.append(ManifestEntry(path=rel, scene_class=item.scene_class, split=item.split).model_dump())
    if item.visual_class:
        rel = f"{item.group}/{item.clip_id}"
        frames = synth_frames(SceneSpec(
            scene_class=item.visual_class,
            seed=derive_seed(item.seed, "frames"),
            frames=spec_fields["frames"],
        ))
        write_shot(frames, root_path / rel)
        written.append(ManifestEntry(path=rel, scene_class=item.visual_class, split=item.split).model_dump())
    return written


def write_manifest(entries: Sequence[ManifestEntry], path: PathLike) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as f:
            csv.writer(f, lineterminator="\n").writerows(e.to_row() for e in entries)
    except OSError as e:
        raise WriteError(f"cannot write manifest: {e}", path=str(path), stage="synth_corpus") from e


def read_manifest(path: PathLike) -> List[ManifestEntry]:
    """Parse `relative_path,class[,split]` lines; a header line is skipped.

    Raises:
        InvalidConfigurationError: Unreadable file or a malformed line.
    """
    path = Path(path)
    try:
        with path.open(encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise InvalidConfigurationError(f"cannot read manifest: {e}", path=str(path), stage="manifest") from e

    entries = []
    for number, row in enumerate(rows, start=1):
        fields = [f.strip() for f in row]
        if not any(fields) or (number == 1 and fields[0] in ("relative_path", "path")):
            continue
        if len(fields) not in (2, 3) or not fields[0] or not fields[1]:
            raise InvalidConfigurationError(
                f"line {number}: expected 'path,class[,split]'", path=str(path), stage="manifest"
            )
        entries.append(ManifestEntry(
            path=fields[0], scene_class=fields[1], split=fields[2] if len(fields) == 3 else None,
        ))
    return entries


def manifest_digest(path: PathLike) -> str:
    """SHA-256 of a manifest file's bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def synth_corpus(
    spec: CorpusSpec,
    root: PathLike,
    jobs: int = 1,
    progress: Optional[Callable[[int], None]] = None,
) -> CorpusSummary:
    """Render every item of the spec and write manifest, train and test lists.

    Args:
        spec: Per-class counts and seed.
        root: Output directory.
        jobs: Worker processes used for rendering.
        progress: Called with the number of finished items after each one.

    Returns:
        Summary with all manifest entries and the manifest digest.
    """
    root = Path(root)
    items = plan_items(spec)
    if not items:
        raise InvalidConfigurationError("corpus counts request no items", stage="synth_corpus")

    settings = {"duration": spec.duration, "frames": spec.frames}
    job_args = [(str(root), item.model_dump(), settings) for item in items]

    entries: List[ManifestEntry] = []
    for done, written in enumerate(ordered_map(_render, job_args, jobs), start=1):
        entries.extend(ManifestEntry(**w) for w in written)
        if progress:
            progress(done)

    write_manifest(entries, root / MANIFEST)
    write_manifest([e for e in entries if e.split == "train"], root / TRAIN_MANIFEST)
    write_manifest([e for e in entries if e.split == "test"], root / TEST_MANIFEST)
    digest = manifest_digest(root / MANIFEST)
    logger.info("Wrote %d manifest entries to %s (digest %s)", len(entries), root, digest[:12])
    return CorpusSummary(root=str(root), entries=entries, digest=digest)


class LabeledClip(BaseModel):
    """A manifest recording loaded into memory."""

    clip_id: str
    scene_class: str
    clip: AudioClip

    @property
    def label(self) -> Label:
        return Label.from_class(self.scene_class)

    @property
    def is_tv(self) -> bool:
        return self.label is Label.TV


class LabeledShot(BaseModel):
    """A manifest shot loaded into memory."""

    clip_id: str
    scene_class: str
    frames: List[GrayImage]

    @property
    def is_tv(self) -> bool:
        return Label.from_class(self.scene_class) is Label.TV


def load_clips(entries: Sequence[ManifestEntry], root: PathLike) -> List[LabeledClip]:
    """Read every WAV entry, resolving paths against the manifest directory."""
    root = Path(root)
    return [
        LabeledClip(clip_id=e.clip_id, scene_class=e.scene_class, clip=read_wav(root / e.path))
        for e in entries
        if e.is_audio
    ]


def load_shots(entries: Sequence[ManifestEntry], root: PathLike) -> List[LabeledShot]:
    """Read every shot directory entry with all of its frames."""
    root = Path(root)
    return [
        LabeledShot(clip_id=e.clip_id, scene_class=e.scene_class, frames=load_shot(root / e.path))
        for e in entries
        if not e.is_audio
    ]
