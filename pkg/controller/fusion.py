"""Decision-level fusion of the acoustic and visual verdicts."""

from typing import Optional

from core.errors import NoEvidenceError

from .schemas import FusionRule


def fuse(
    acoustic: Optional[bool],
    visual: Optional[bool],
    rule: FusionRule = FusionRule.OR,
) -> bool:
    """Combine per-modality verdicts.

    Under ``or`` a missing modality counts as not detected, so any positive
    wins. Under ``and`` a missing modality is ignored and the present one
    decides. The single-modality rules use only their own verdict.

    Raises:
        NoEvidenceError: Both verdicts are absent, or the modality the rule needs is absent.
    """
    if acoustic is None and visual is None:
        raise NoEvidenceError("no modality verdict to fuse", stage="fuse")

    if rule is FusionRule.OR:
        return bool(acoustic) or bool(visual)
    if rule is FusionRule.AND:
        present = [v for v in (acoustic, visual) if v is not None]
        return all(present)
    if rule is FusionRule.ACOUSTIC_ONLY:
        if acoustic is None:
            raise NoEvidenceError("acoustic verdict missing", stage="fuse")
        return acoustic
    if visual is None:
        raise NoEvidenceError("visual verdict missing", stage="fuse")
    return visual
