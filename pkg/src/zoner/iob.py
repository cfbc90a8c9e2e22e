"""Token-level IOB tagging over the eight zones (16 tags total)."""

from dataclasses import dataclass

from .errors import UnlabeledSentence
from .zones import ZONES, Zone


@dataclass(frozen=True)
class IobTag:
    prefix: str  # "B" or "I"
    zone: Zone

    def __str__(self):
        return f"{self.prefix}-{self.zone.value}"


# canonical tag order: B-PI, I-PI, B-BS, I-BS, ...
TAGS = [IobTag(prefix, zone) for zone in ZONES for prefix in ("B", "I")]
TAG_INDEX = {tag: i for i, tag in enumerate(TAGS)}
N_TAGS = len(TAGS)


def tag_index(tag):
    return TAG_INDEX[tag]


def tag_of(index):
    return TAGS[index]


def to_iob(sentences):
    """One tag per token: B-zone on each sentence's first token, I-zone after."""
    offenders = [(getattr(s, "doc_id", "?"), s.index) for s in sentences if s.gold is None]
    if offenders:
        raise UnlabeledSentence(offenders)
    tags = []
    for sentence in sentences:
        for i, _ in enumerate(sentence.tokens):
            tags.append(IobTag("B" if i == 0 else "I", sentence.gold))
    return tags


def repair_iob(tags):
    """Rewrite any I-X that does not continue a B-X/I-X span into B-X."""
    repaired = []
    prev = None
    for tag in tags:
        if tag.prefix == "I" and (prev is None or prev.zone != tag.zone):
            tag = IobTag("B", tag.zone)
        repaired.append(tag)
        prev = tag
    return repaired


def majority_map(token_tags):
    """Dominant zone of a sentence's token tags; ties go to canonical order."""
    if not token_tags:
        raise ValueError("empty tag sequence")
    counts = {}
    for tag in token_tags:
        counts[tag.zone] = counts.get(tag.zone, 0) + 1
    best = None
    best_count = -1
    for zone in ZONES:
        count = counts.get(zone, 0)
        if count > best_count:
            best = zone
            best_count = count
    return best
