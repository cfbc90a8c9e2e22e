"""Rule-based sentence segmentation and tokenization.

Both are deterministic and versioned through the shipped abbreviation list so
that a corpus built from raw text is reproducible byte for byte.
"""

import re
from importlib import resources

from .errors import EmptyDocument

_BOUNDARY = re.compile(r"[.?!]+(?=\s+[\"'“‘(]?[A-Z0-9])")
_TRAILING_WORD = re.compile(r"([A-Za-z](?:\.?[A-Za-z])*)$")
_TOKEN = re.compile(r"\w+|[^\w\s]")


def _load_abbreviations():
    text = resources.files("zoner.data").joinpath("abbreviations.txt").read_text("utf-8")
    out = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.add(line.lower())
    return out


ABBREVIATIONS = _load_abbreviations()


def _suppressed(text, dot_pos):
    """True when the period at dot_pos does not end a sentence."""
    m = _TRAILING_WORD.search(text, 0, dot_pos)
    if not m:
        return False
    word = m.group(1)
    if len(word) == 1 and word.isupper():
        return True  # initials: "J. Doe"
    return word.lower() in ABBREVIATIONS


def segment_sentences(raw_text):
    """Split raw document text into an ordered list of trimmed sentences.

    Splits after `.?!` runs followed by whitespace and an uppercase letter,
    digit, or opening quote, except after known abbreviations and single
    capital initials.
    """
    if not raw_text or not raw_text.strip():
        raise EmptyDocument("document is empty or whitespace-only")
    cuts = []
    for m in _BOUNDARY.finditer(raw_text):
        if raw_text[m.start()] == "." and _suppressed(raw_text, m.start()):
            continue
        cuts.append(m.end())
    sentences = []
    start = 0
    for cut in cuts:
        piece = raw_text[start:cut].strip()
        if piece:
            sentences.append(piece)
        start = cut
    tail = raw_text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize(sentence):
    """Lowercase and split into word/punctuation tokens. Digits are kept."""
    return _TOKEN.findall(sentence.lower())
