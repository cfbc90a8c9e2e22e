"""Append-only annotation store with optimistic per-sentence revisions."""

import json
import threading
from datetime import datetime, timezone
from pathlib import Path

from .agreement import AnnotationRecord
from .errors import Conflict, NotFound, ParseError
from .zones import Zone


class AnnotationStore:
    """JSONL-backed log of label submissions, indexed by latest revision.

    The index is exactly the fold of the log, so a restart that replays the
    file reproduces the pre-crash state.
    """

    def __init__(self, log_path, corpus):
        self.log_path = Path(log_path)
        self.corpus = corpus
        self._index = {}
        self._lock = threading.Lock()
        if self.log_path.exists():
            self._replay()

    def _replay(self):
        with open(self.log_path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = AnnotationRecord.from_dict(json.loads(line))
                except (json.JSONDecodeError, KeyError) as exc:
                    raise ParseError(f"bad annotation log entry ({exc})",
                                     line=line_no) from None
                current = self._index.get(record.key())
                if current is None or record.rev > current.rev:
                    self._index[record.key()] = record

    def _sentence(self, doc_id, sentence_idx):
        try:
            obit = self.corpus.by_id(doc_id)
        except KeyError:
            raise NotFound(f"unknown document: {doc_id!r}") from None
        if not 0 <= sentence_idx < len(obit.sentences):
            raise NotFound(f"document {doc_id!r} has no sentence {sentence_idx}")
        return obit.sentences[sentence_idx]

    def submit(self, doc_id, sentence_idx, annotator, label, rev):
        """Accept the write iff rev is exactly one past the stored revision."""
        self._sentence(doc_id, sentence_idx)
        zone = label if isinstance(label, Zone) else Zone.parse(label)
        with self._lock:
            current = self._index.get((doc_id, sentence_idx, annotator))
            expected = (current.rev + 1) if current else 1
            if rev != expected:
                raise Conflict(
                    f"stale revision {rev} (expected {expected})", current=current
                )
            record = AnnotationRecord(
                doc_id=doc_id,
                sentence_idx=sentence_idx,
                annotator=annotator,
                label=zone,
                rev=rev,
                ts=datetime.now(timezone.utc).isoformat(),
            )
            with open(self.log_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record.to_dict()) + "\n")
                fh.flush()
            self._index[record.key()] = record
        return record

    def current(self, doc_id, sentence_idx, annotator):
        return self._index.get((doc_id, sentence_idx, annotator))

    def records(self):
        return list(self._index.values())

    def export(self):
        """Latest-rev records, sorted by (doc_id, sentence_idx, annotator)."""
        return sorted(
            self._index.values(),
            key=lambda r: (r.doc_id, r.sentence_idx, r.annotator),
        )

    def list_documents(self, annotator):
        out = []
        for obit in self.corpus:
            labeled = sum(
                1
                for s in obit.sentences
                if (obit.id, s.index, annotator) in self._index
            )
            out.append(
                {
                    "doc_id": obit.id,
                    "source": obit.source,
                    "n_sentences": len(obit.sentences),
                    "n_labeled_by_annotator": labeled,
                }
            )
        return out

    def document_view(self, doc_id, annotator):
        try:
            obit = self.corpus.by_id(doc_id)
        except KeyError:
            raise NotFound(f"unknown document: {doc_id!r}") from None
        sentences = []
        for s in obit.sentences:
            record = self._index.get((doc_id, s.index, annotator))
            sentences.append(
                {
                    "index": s.index,
                    "text": s.text,
                    "label": record.label.value if record else None,
                    "rev": record.rev if record else 0,
                }
            )
        return {"doc_id": obit.id, "source": obit.source, "sentences": sentences}
