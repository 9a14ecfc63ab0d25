"""The four-level lexicon store.

Single writer, multiple readers: every mutation runs under one re-entrant
lock, appends exactly one audit record, and (when corpora can be affected)
emits one sync event to subscribers in mutation order.  Records are frozen
dataclasses, so readers never observe a torn hierarchy.

Identifiers are opaque, stable and never reused after deletion, so exports
and external links survive round trips.
"""

from __future__ import annotations

import itertools
import threading
from collections import defaultdict
from collections.abc import Callable, Iterable, Iterator

from ..errors import ConflictError, ConstraintError, NotFoundError, ValidationError
from .features import FeatureVector, PosTag, validate_features
from .model import (
    AuditRecord,
    DeleteEvent,
    DeleteReport,
    Lemma,
    LookupHit,
    MergeEvent,
    MergeReport,
    MultiWordUnit,
    RelabelEvent,
    Superlemma,
    SyncEvent,
    SyntacticWord,
    utc_now,
)
from .normalize import DEFAULT_FOLDS, normalize_form


class LexiconStore:
    def __init__(self, folds: dict[str, str] | None = None):
        self.folds = dict(DEFAULT_FOLDS if folds is None else folds)
        self._lock = threading.RLock()
        self._superlemmata: dict[str, Superlemma] = {}
        self._lemmata: dict[str, Lemma] = {}
        self._sws: dict[str, SyntacticWord] = {}
        self._mwus: dict[str, MultiWordUnit] = {}
        # secondary indices
        self._sl_by_form_pos: dict[tuple[str, PosTag], str] = {}
        self._lemmata_of: dict[str, set[str]] = defaultdict(set)
        self._sws_of: dict[str, set[str]] = defaultdict(set)
        self._mwus_of: dict[str, set[str]] = defaultdict(set)
        self._sw_by_key: dict[tuple[str, str, FeatureVector], str] = {}
        self._wordform_index: dict[str, set[str]] = defaultdict(set)
        self._mwu_by_first: dict[str, list[str]] = defaultdict(list)
        self._audit: list[AuditRecord] = []
        self._events: list[SyncEvent] = []
        self._subscribers: list[Callable[[SyncEvent], None]] = []
        self._counters = {"sl": 0, "lm": 0, "sw": 0, "mw": 0, "ev": 0}

    # -- plumbing -----------------------------------------------------------

    def normalize(self, raw: str) -> str:
        return normalize_form(raw, self.folds)

    def _next_id(self, prefix: str) -> str:
        while True:
            self._counters[prefix] += 1
            candidate = f"{prefix}-{self._counters[prefix]:06d}"
            if candidate not in self._all_ids():
                return candidate

    def _all_ids(self):
        # membership-only view across the four entry kinds
        class _View:
            def __contains__(_self, key):
                return (
                    key in self._superlemmata
                    or key in self._lemmata
                    or key in self._sws
                    or key in self._mwus
                )

        return _View()

    def _bump_counter(self, entry_id: str) -> None:
        prefix, _, suffix = entry_id.partition("-")
        if prefix in self._counters and suffix.isdigit():
            self._counters[prefix] = max(self._counters[prefix], int(suffix))

    def _record(self, author: str, action: str, entity_id: str | None, detail: str | None = None):
        self._audit.append(AuditRecord(author, utc_now(), action, entity_id, detail))

    def _emit(self, event: SyncEvent) -> None:
        self._events.append(event)
        for callback in self._subscribers:
            callback(event)

    def _next_event_id(self) -> str:
        self._counters["ev"] += 1
        return f"ev-{self._counters['ev']:06d}"

    def subscribe(self, callback: Callable[[SyncEvent], None]) -> None:
        """Register a consumer; events arrive synchronously in mutation order."""
        with self._lock:
            self._subscribers.append(callback)

    @property
    def audit_log(self) -> tuple[AuditRecord, ...]:
        with self._lock:
            return tuple(self._audit)

    @property
    def events(self) -> tuple[SyncEvent, ...]:
        with self._lock:
            return tuple(self._events)

    # -- accessors ----------------------------------------------------------

    def superlemma(self, sl_id: str) -> Superlemma:
        try:
            return self._superlemmata[sl_id]
        except KeyError:
            raise NotFoundError(f"superlemma {sl_id!r} does not exist") from None

    def lemma(self, lm_id: str) -> Lemma:
        try:
            return self._lemmata[lm_id]
        except KeyError:
            raise NotFoundError(f"lemma {lm_id!r} does not exist") from None

    def syntactic_word(self, sw_id: str) -> SyntacticWord:
        try:
            return self._sws[sw_id]
        except KeyError:
            raise NotFoundError(f"syntactic word {sw_id!r} does not exist") from None

    def has_syntactic_word(self, sw_id: str) -> bool:
        return sw_id in self._sws

    def superlemmata(self) -> Iterator[Superlemma]:
        return iter(list(self._superlemmata.values()))

    def lemmata(self) -> Iterator[Lemma]:
        return iter(list(self._lemmata.values()))

    def syntactic_words(self) -> Iterator[SyntacticWord]:
        return iter(list(self._sws.values()))

    def multi_word_units(self) -> Iterator[MultiWordUnit]:
        return iter(list(self._mwus.values()))

    def lemmata_of(self, sl_id: str) -> list[Lemma]:
        self.superlemma(sl_id)
        return [self._lemmata[i] for i in sorted(self._lemmata_of.get(sl_id, ()))]

    def sws_of(self, lm_id: str) -> list[SyntacticWord]:
        self.lemma(lm_id)
        return [self._sws[i] for i in sorted(self._sws_of.get(lm_id, ()))]

    def find_superlemma(self, form: str, pos: PosTag | None = None) -> list[Superlemma]:
        norm = self.normalize(form)
        with self._lock:
            if pos is not None:
                sl_id = self._sl_by_form_pos.get((norm, pos))
                return [self._superlemmata[sl_id]] if sl_id else []
            return sorted(
                (sl for sl in self._superlemmata.values() if sl.form == norm),
                key=lambda sl: (sl.pos.value, sl.id),
            )

    def find_lemmata_by_form(self, form: str) -> list[Lemma]:
        norm = self.normalize(form)
        with self._lock:
            return sorted(
                (lm for lm in self._lemmata.values() if self.normalize(lm.form) == norm),
                key=lambda lm: lm.id,
            )

    def counts(self) -> dict[str, int]:
        with self._lock:
            return {
                "superlemmata": len(self._superlemmata),
                "lemmata": len(self._lemmata),
                "syntactic_words": len(self._sws),
                "multi_word_units": len(self._mwus),
            }

    def parents_of_sw(self, sw_id: str) -> LookupHit:
        sw = self.syntactic_word(sw_id)
        lm = self.lemma(sw.lemma_id)
        return LookupHit(sw, lm, self.superlemma(lm.superlemma_id))

    # -- candidate ordering --------------------------------------------------

    def candidate_sort_key(self, sw_id: str):
        """Total order over syntactic words: superlemma form, pos, lemma form,
        feature serialization, wordform, id.  Lookup results and incremental
        index rewrites both use this key, which is what makes the incremental
        token index bit-compatible with a full re-index."""
        sw = self._sws[sw_id]
        lm = self._lemmata[sw.lemma_id]
        sl = self._superlemmata[lm.superlemma_id]
        return (sl.form, sl.pos.value, lm.form, sw.features.to_string(), sw.wordform, sw.id)

    def lookup_wordform(self, form: str) -> list[LookupHit]:
        """All syntactic words whose normalized wordform equals the normalized
        query; unknown forms yield an empty list (exact match, no substrings)."""
        norm = self.normalize(form)
        with self._lock:
            ids = sorted(self._wordform_index.get(norm, ()), key=self.candidate_sort_key)
            return [self.parents_of_sw(i) for i in ids]

    def lookup_candidate_ids(self, form: str) -> list[str]:
        norm = self.normalize(form)
        with self._lock:
            return sorted(self._wordform_index.get(norm, ()), key=self.candidate_sort_key)

    # -- mutations ------------------------------------------------------------

    def create_superlemma(
        self, form: str, pos: PosTag | str, author: str, *, entry_id: str | None = None
    ) -> Superlemma:
        pos = PosTag.parse(pos) if isinstance(pos, str) else pos
        if not form:
            raise ValidationError("superlemma form must be non-empty")
        if form != self.normalize(form):
            raise ValidationError(
                f"superlemma form must be normalized (got {form!r}, expected {self.normalize(form)!r})"
            )
        with self._lock:
            sl = self._insert_superlemma(form, pos, entry_id)
            self._record(author, "create", sl.id, f"superlemma {form}/{pos.value}")
            return sl

    def _insert_superlemma(self, form: str, pos: PosTag, entry_id: str | None) -> Superlemma:
        if (form, pos) in self._sl_by_form_pos:
            raise ConflictError(f"superlemma ({form!r}, {pos.value}) already exists")
        if entry_id is None:
            entry_id = self._next_id("sl")
        elif entry_id in self._all_ids():
            raise ConflictError(f"identifier {entry_id!r} already in use")
        else:
            self._bump_counter(entry_id)
        sl = Superlemma(entry_id, form, pos)
        self._superlemmata[entry_id] = sl
        self._sl_by_form_pos[(form, pos)] = entry_id
        return sl

    def create_lemma(
        self, superlemma_id: str, form: str, author: str, *, entry_id: str | None = None
    ) -> Lemma:
        with self._lock:
            lm = self._insert_lemma(superlemma_id, form, entry_id, False)
            self._record(author, "create", lm.id, f"lemma {form} under {superlemma_id}")
            return lm

    def _insert_lemma(
        self, superlemma_id: str, form: str, entry_id: str | None, double_checked: bool
    ) -> Lemma:
        self.superlemma(superlemma_id)
        if not form:
            raise ValidationError("lemma form must be non-empty")
        for sibling_id in self._lemmata_of.get(superlemma_id, ()):
            if self._lemmata[sibling_id].form == form:
                raise ConflictError(
                    f"superlemma {superlemma_id!r} already has a lemma {form!r}"
                )
        if entry_id is None:
            entry_id = self._next_id("lm")
        elif entry_id in self._all_ids():
            raise ConflictError(f"identifier {entry_id!r} already in use")
        else:
            self._bump_counter(entry_id)
        lm = Lemma(entry_id, superlemma_id, form, double_checked)
        self._lemmata[entry_id] = lm
        self._lemmata_of[superlemma_id].add(entry_id)
        return lm

    def add_syntactic_words(
        self,
        lemma_id: str,
        cells: Iterable[tuple[str, FeatureVector]],
        author: str,
        *,
        detail: str | None = None,
    ) -> list[SyntacticWord]:
        """Attach (wordform, features) cells to a lemma, skipping cells that
        already exist; one audit record per call, so re-expansion is idempotent
        both in content and in journal noise."""
        with self._lock:
            lm = self.lemma(lemma_id)
            pos = self.superlemma(lm.superlemma_id).pos
            created = []
            for wordform, features in cells:
                if not wordform:
                    raise ValidationError("wordform must be non-empty")
                validate_features(pos, features)
                key = (lemma_id, wordform, features)
                if key in self._sw_by_key:
                    continue
                sw_id = self._next_id("sw")
                sw = SyntacticWord(sw_id, lemma_id, wordform, features)
                self._sws[sw_id] = sw
                self._sws_of[lemma_id].add(sw_id)
                self._sw_by_key[key] = sw_id
                self._wordform_index[self.normalize(wordform)].add(sw_id)
                created.append(sw)
            self._record(author, "create", lemma_id, detail or f"{len(created)} syntactic words")
            return created

    def add_syntactic_word(
        self,
        lemma_id: str,
        wordform: str,
        features: FeatureVector,
        author: str,
        *,
        frequency: int = 0,
        entry_id: str | None = None,
    ) -> SyntacticWord:
        with self._lock:
            sw = self._insert_sw(lemma_id, wordform, features, frequency, entry_id)
            self._record(author, "create", sw.id, f"syntactic word {wordform}")
            return sw

    def _insert_sw(
        self,
        lemma_id: str,
        wordform: str,
        features: FeatureVector,
        frequency: int,
        entry_id: str | None,
    ) -> SyntacticWord:
        lm = self.lemma(lemma_id)
        pos = self.superlemma(lm.superlemma_id).pos
        if not wordform:
            raise ValidationError("wordform must be non-empty")
        if frequency < 0:
            raise ValidationError("corpus frequency must be non-negative")
        validate_features(pos, features)
        key = (lemma_id, wordform, features)
        if key in self._sw_by_key:
            raise ConflictError(
                f"lemma {lemma_id!r} already has syntactic word ({wordform!r}, {features.to_string()!r})"
            )
        if entry_id is None:
            entry_id = self._next_id("sw")
        elif entry_id in self._all_ids():
            raise ConflictError(f"identifier {entry_id!r} already in use")
        else:
            self._bump_counter(entry_id)
        sw = SyntacticWord(entry_id, lemma_id, wordform, features, frequency)
        self._sws[entry_id] = sw
        self._sws_of[lemma_id].add(entry_id)
        self._sw_by_key[key] = entry_id
        self._wordform_index[self.normalize(wordform)].add(entry_id)
        return sw

    def create_multi_word_unit(
        self, superlemma_id: str, component_forms: Iterable[str], author: str
    ) -> MultiWordUnit:
        components = tuple(component_forms)
        if len(components) < 2:
            raise ValidationError("a multi-word unit needs at least two components")
        with self._lock:
            sl = self.superlemma(superlemma_id)
            lemmata = self.lemmata_of(superlemma_id)
            if lemmata:
                lm = lemmata[0]
            else:
                lm = self._insert_lemma(superlemma_id, sl.form, None, False)
            joined = " ".join(components)
            key = (lm.id, joined, FeatureVector())
            if key in self._sw_by_key:
                sw_id = self._sw_by_key[key]
            else:
                sw_id = self._insert_sw(lm.id, joined, FeatureVector(), 0, None).id
            mwu_id = self._next_id("mw")
            mwu = MultiWordUnit(mwu_id, superlemma_id, components, sw_id)
            self._mwus[mwu_id] = mwu
            self._mwus_of[superlemma_id].add(mwu_id)
            self._mwu_by_first[self.normalize(components[0])].append(mwu_id)
            self._record(author, "create", mwu_id, f"multi-word unit {joined}")
            return mwu

    def multiword_matches(self, first_form: str) -> list[MultiWordUnit]:
        """MWUs whose first component matches, longest first (greedy linking)."""
        with self._lock:
            ids = self._mwu_by_first.get(self.normalize(first_form), ())
            units = [self._mwus[i] for i in ids]
            return sorted(units, key=lambda u: (-len(u.component_forms), u.id))

    def mark_double_checked(self, lemma_id: str, author: str) -> Lemma:
        with self._lock:
            lm = self.lemma(lemma_id)
            updated = Lemma(lm.id, lm.superlemma_id, lm.form, True)
            self._lemmata[lm.id] = updated
            self._record(author, "double_check", lm.id, None)
            return updated

    def apply_frequency_counts(self, counts: dict[str, int], author: str) -> int:
        """Bulk refresh of per-syntactic-word corpus frequencies (one audit
        record for the whole call).  Unknown ids are ignored."""
        with self._lock:
            touched = 0
            for sw_id, n in counts.items():
                sw = self._sws.get(sw_id)
                if sw is None or n < 0:
                    continue
                self._sws[sw_id] = sw.with_frequency(n)
                touched += 1
            self._record(author, "update", None, f"frequencies for {touched} syntactic words")
            return touched

    def update_form(self, entry_id: str, new_form: str, author: str):
        """Rename a superlemma or lemma citation form (a relabel: ids and
        wordforms are untouched, linked corpora refresh their display order)."""
        if not new_form:
            raise ValidationError("new form must be non-empty")
        with self._lock:
            if entry_id in self._superlemmata:
                sl = self._superlemmata[entry_id]
                norm = self.normalize(new_form)
                if norm != new_form:
                    raise ValidationError("superlemma forms must be normalized")
                if (norm, sl.pos) in self._sl_by_form_pos and self._sl_by_form_pos[(norm, sl.pos)] != entry_id:
                    raise ConflictError(f"superlemma ({norm!r}, {sl.pos.value}) already exists")
                del self._sl_by_form_pos[(sl.form, sl.pos)]
                updated = Superlemma(sl.id, norm, sl.pos)
                self._superlemmata[entry_id] = updated
                self._sl_by_form_pos[(norm, sl.pos)] = entry_id
                affected = tuple(
                    sorted(
                        itertools.chain.from_iterable(
                            self._sws_of.get(lm_id, ()) for lm_id in self._lemmata_of.get(entry_id, ())
                        )
                    )
                )
                kind = "superlemma"
                result = updated
            elif entry_id in self._lemmata:
                lm = self._lemmata[entry_id]
                for sibling_id in self._lemmata_of.get(lm.superlemma_id, ()):
                    if sibling_id != entry_id and self._lemmata[sibling_id].form == new_form:
                        raise ConflictError(
                            f"superlemma {lm.superlemma_id!r} already has a lemma {new_form!r}"
                        )
                updated = Lemma(lm.id, lm.superlemma_id, new_form, lm.double_checked)
                self._lemmata[entry_id] = updated
                affected = tuple(sorted(self._sws_of.get(entry_id, ())))
                kind = "lemma"
                result = updated
            else:
                raise NotFoundError(f"entry {entry_id!r} does not exist")
            self._record(author, "update", entry_id, f"form -> {new_form}")
            self._emit(
                RelabelEvent(
                    self._next_event_id(),
                    entity_id=entry_id,
                    entity_kind=kind,
                    new_form=new_form,
                    affected_sw_ids=affected,
                )
            )
            return result

    def merge_lemmata(self, survivor_id: str, absorbed_id: str, author: str) -> MergeReport:
        with self._lock:
            if survivor_id == absorbed_id:
                raise ValidationError("cannot merge a lemma into itself")
            survivor = self.lemma(survivor_id)
            absorbed = self.lemma(absorbed_id)
            pos_a = self.superlemma(survivor.superlemma_id).pos
            pos_b = self.superlemma(absorbed.superlemma_id).pos
            if pos_a != pos_b:
                raise ValidationError(
                    f"part-of-speech mismatch: {pos_a.value} vs {pos_b.value}"
                )
            moved: list[str] = []
            remapped: dict[str, str] = {}
            for sw_id in sorted(self._sws_of.get(absorbed_id, ())):
                sw = self._sws[sw_id]
                key = (survivor_id, sw.wordform, sw.features)
                existing = self._sw_by_key.get(key)
                if existing is not None:
                    # duplicate cell: drop the absorbed copy, remap links
                    remapped[sw_id] = existing
                    surviving = self._sws[existing]
                    if sw.corpus_frequency:
                        self._sws[existing] = surviving.with_frequency(
                            surviving.corpus_frequency + sw.corpus_frequency
                        )
                    del self._sws[sw_id]
                    del self._sw_by_key[(absorbed_id, sw.wordform, sw.features)]
                    self._wordform_index[self.normalize(sw.wordform)].discard(sw_id)
                else:
                    reparented = SyntacticWord(
                        sw.id, survivor_id, sw.wordform, sw.features, sw.corpus_frequency
                    )
                    self._sws[sw_id] = reparented
                    del self._sw_by_key[(absorbed_id, sw.wordform, sw.features)]
                    self._sw_by_key[key] = sw_id
                    self._sws_of[survivor_id].add(sw_id)
                    moved.append(sw_id)
            self._sws_of.pop(absorbed_id, None)
            self._lemmata_of[absorbed.superlemma_id].discard(absorbed_id)
            del self._lemmata[absorbed_id]
            self._record(author, "merge", survivor_id, f"absorbed {absorbed_id}")
            self._emit(
                MergeEvent(
                    self._next_event_id(),
                    survivor_lemma_id=survivor_id,
                    absorbed_lemma_id=absorbed_id,
                    moved_sw_ids=tuple(moved),
                    remapped_sw_ids=remapped,
                )
            )
            return MergeReport(survivor_id, absorbed_id, len(moved), len(remapped))

    def delete_entry(self, entry_id: str, cascade: bool, author: str) -> DeleteReport:
        with self._lock:
            if entry_id in self._superlemmata:
                children = self._lemmata_of.get(entry_id, set())
                mwus = self._mwus_of.get(entry_id, set())
                if (children or mwus) and not cascade:
                    raise ConstraintError(
                        f"superlemma {entry_id!r} still has children; use cascade"
                    )
                sl_ids, lm_ids, sw_ids = (entry_id,), tuple(sorted(children)), ()
                all_sws: list[str] = []
                for lm_id in lm_ids:
                    all_sws.extend(sorted(self._sws_of.get(lm_id, ())))
                sw_ids = tuple(all_sws)
            elif entry_id in self._lemmata:
                children = self._sws_of.get(entry_id, set())
                if children and not cascade:
                    raise ConstraintError(
                        f"lemma {entry_id!r} still has syntactic words; use cascade"
                    )
                sl_ids, lm_ids, sw_ids = (), (entry_id,), tuple(sorted(children))
            elif entry_id in self._sws:
                sl_ids, lm_ids, sw_ids = (), (), (entry_id,)
            else:
                raise NotFoundError(f"entry {entry_id!r} does not exist")

            for sw_id in sw_ids:
                sw = self._sws.pop(sw_id)
                del self._sw_by_key[(sw.lemma_id, sw.wordform, sw.features)]
                self._wordform_index[self.normalize(sw.wordform)].discard(sw_id)
                self._sws_of[sw.lemma_id].discard(sw_id)
            for lm_id in lm_ids:
                lm = self._lemmata.pop(lm_id)
                self._lemmata_of[lm.superlemma_id].discard(lm_id)
                self._sws_of.pop(lm_id, None)
            for sl_id in sl_ids:
                sl = self._superlemmata.pop(sl_id)
                del self._sl_by_form_pos[(sl.form, sl.pos)]
                self._lemmata_of.pop(sl_id, None)
                for mwu_id in sorted(self._mwus_of.pop(sl_id, set())):
                    mwu = self._mwus.pop(mwu_id)
                    self._mwu_by_first[self.normalize(mwu.component_forms[0])].remove(mwu_id)
            self._record(author, "delete", entry_id, f"cascade={cascade}")
            self._emit(
                DeleteEvent(
                    self._next_event_id(),
                    superlemma_ids=sl_ids,
                    lemma_ids=lm_ids,
                    sw_ids=sw_ids,
                )
            )
            return DeleteReport(len(sl_ids), len(lm_ids), len(sw_ids))

    # -- integrity -----------------------------------------------------------

    def verify_integrity(self) -> list[str]:
        """Full-scan referential check; returns human-readable violations."""
        problems = []
        with self._lock:
            for lm in self._lemmata.values():
                if lm.superlemma_id not in self._superlemmata:
                    problems.append(f"lemma {lm.id} references missing superlemma {lm.superlemma_id}")
            for sw in self._sws.values():
                if sw.lemma_id not in self._lemmata:
                    problems.append(f"syntactic word {sw.id} references missing lemma {sw.lemma_id}")
            for mwu in self._mwus.values():
                if mwu.superlemma_id not in self._superlemmata:
                    problems.append(f"mwu {mwu.id} references missing superlemma {mwu.superlemma_id}")
                if mwu.syntactic_word_id not in self._sws:
                    problems.append(f"mwu {mwu.id} references missing sw {mwu.syntactic_word_id}")
            for (form, pos), sl_id in self._sl_by_form_pos.items():
                sl = self._superlemmata.get(sl_id)
                if sl is None or sl.form != form or sl.pos != pos:
                    problems.append(f"form/pos index stale for {sl_id}")
        return problems
