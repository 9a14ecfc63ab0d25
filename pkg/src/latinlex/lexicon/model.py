"""Domain records of the four-level lexicon.

Entries are immutable; the store replaces records wholesale on mutation so
that readers always observe a consistent snapshot.  Every mutation is
journalled through an AuditRecord and, where corpora may be affected,
broadcast as a sync event.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

from .features import FeatureVector, PosTag


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True, slots=True)
class AuditRecord:
    author: str
    timestamp: datetime
    action: str  # create | update | merge | delete | double_check
    entity_id: str | None = None
    detail: str | None = None


@dataclass(frozen=True, slots=True)
class Superlemma:
    id: str
    form: str  # normalized citation spelling
    pos: PosTag


@dataclass(frozen=True, slots=True)
class Lemma:
    id: str
    superlemma_id: str
    form: str  # spelling-variant citation form
    double_checked: bool = False


@dataclass(frozen=True, slots=True)
class SyntacticWord:
    id: str
    lemma_id: str
    wordform: str
    features: FeatureVector
    corpus_frequency: int = 0

    def with_frequency(self, n: int) -> "SyntacticWord":
        return replace(self, corpus_frequency=n)


@dataclass(frozen=True, slots=True)
class MultiWordUnit:
    id: str
    superlemma_id: str
    component_forms: tuple[str, ...]  # order significant, length >= 2
    syntactic_word_id: str  # designated entry tokens link to


@dataclass(frozen=True, slots=True)
class LookupHit:
    syntactic_word: SyntacticWord
    lemma: Lemma
    superlemma: Superlemma


# ---------------------------------------------------------------------------
# Sync events consumed by the corpus store.

@dataclass(frozen=True, slots=True)
class MergeEvent:
    event_id: str
    kind: str = field(default="merge", init=False)
    survivor_lemma_id: str = ""
    absorbed_lemma_id: str = ""
    #: re-parented syntactic words (ids kept, lemma changed)
    moved_sw_ids: tuple[str, ...] = ()
    #: duplicates removed by the merge: absorbed id -> surviving equivalent
    remapped_sw_ids: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class DeleteEvent:
    event_id: str
    kind: str = field(default="delete", init=False)
    superlemma_ids: tuple[str, ...] = ()
    lemma_ids: tuple[str, ...] = ()
    sw_ids: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class RelabelEvent:
    event_id: str
    kind: str = field(default="relabel", init=False)
    entity_id: str = ""
    entity_kind: str = ""  # superlemma | lemma
    new_form: str = ""
    #: syntactic words whose display/sort keys changed
    affected_sw_ids: tuple[str, ...] = ()


SyncEvent = MergeEvent | DeleteEvent | RelabelEvent


# ---------------------------------------------------------------------------
# Operation reports.

@dataclass(frozen=True, slots=True)
class MergeReport:
    survivor_id: str
    absorbed_id: str
    moved: int
    deduplicated: int


@dataclass(frozen=True, slots=True)
class DeleteReport:
    superlemmata: int
    lemmata: int
    syntactic_words: int

    @property
    def total(self) -> int:
        return self.superlemmata + self.lemmata + self.syntactic_words


@dataclass(frozen=True, slots=True)
class RejectedRow:
    line: int
    reason: str


@dataclass(frozen=True, slots=True)
class ImportReport:
    superlemmata_created: int
    lemmata_created: int
    syntactic_words_created: int
    rejected: tuple[RejectedRow, ...]
