"""Lexicon exchange formats.

TSV (UTF-8, header row): one row per syntactic word with its parents inlined,
features serialized ``key=value;key=value`` in fixed key order.  Parents
without children appear as rows with the child columns blank, so the round
trip export -> import -> export is byte-identical.  JSONL carries the same
rows as one JSON object per line with nested parent objects.

Malformed rows never abort an import; they are recorded with a reason and
skipped.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import ConflictError, NotFoundError, ValidationError, WorkbenchError
from .features import FeatureVector, PosTag
from .model import ImportReport, RejectedRow
from .store import LexiconStore

TSV_COLUMNS = (
    "superlemma_id",
    "superlemma",
    "pos",
    "lemma_id",
    "lemma",
    "double_checked",
    "sw_id",
    "wordform",
    "features",
    "frequency",
)


def _export_rows(store: LexiconStore) -> list[dict[str, str]]:
    rows = []
    lemma_seen: set[str] = set()
    sl_seen: set[str] = set()
    for sl in store.superlemmata():
        lemmata = store.lemmata_of(sl.id)
        if not lemmata:
            rows.append(
                {
                    "superlemma_id": sl.id,
                    "superlemma": sl.form,
                    "pos": sl.pos.value,
                    "lemma_id": "",
                    "lemma": "",
                    "double_checked": "",
                    "sw_id": "",
                    "wordform": "",
                    "features": "",
                    "frequency": "",
                }
            )
            continue
        sl_seen.add(sl.id)
        for lm in lemmata:
            sws = store.sws_of(lm.id)
            if not sws:
                rows.append(
                    {
                        "superlemma_id": sl.id,
                        "superlemma": sl.form,
                        "pos": sl.pos.value,
                        "lemma_id": lm.id,
                        "lemma": lm.form,
                        "double_checked": "1" if lm.double_checked else "0",
                        "sw_id": "",
                        "wordform": "",
                        "features": "",
                        "frequency": "",
                    }
                )
                continue
            lemma_seen.add(lm.id)
            for sw in sws:
                rows.append(
                    {
                        "superlemma_id": sl.id,
                        "superlemma": sl.form,
                        "pos": sl.pos.value,
                        "lemma_id": lm.id,
                        "lemma": lm.form,
                        "double_checked": "1" if lm.double_checked else "0",
                        "sw_id": sw.id,
                        "wordform": sw.wordform,
                        "features": sw.features.to_string(),
                        "frequency": str(sw.corpus_frequency),
                    }
                )
    rows.sort(
        key=lambda r: (
            r["superlemma"],
            r["pos"],
            r["superlemma_id"],
            r["lemma"],
            r["lemma_id"],
            r["wordform"],
            r["features"],
            r["sw_id"],
        )
    )
    return rows


def export_lexicon(store: LexiconStore, path: str | Path, format: str = "tsv") -> int:
    path = Path(path)
    rows = _export_rows(store)
    if format == "tsv":
        lines = ["\t".join(TSV_COLUMNS)]
        lines.extend("\t".join(row[c] for c in TSV_COLUMNS) for row in rows)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif format == "jsonl":
        lines = []
        for row in rows:
            obj = {
                "superlemma": {
                    "id": row["superlemma_id"],
                    "form": row["superlemma"],
                    "pos": row["pos"],
                },
                "lemma": None,
                "syntactic_word": None,
            }
            if row["lemma_id"]:
                obj["lemma"] = {
                    "id": row["lemma_id"],
                    "form": row["lemma"],
                    "double_checked": row["double_checked"] == "1",
                }
            if row["sw_id"]:
                obj["syntactic_word"] = {
                    "id": row["sw_id"],
                    "wordform": row["wordform"],
                    "features": row["features"],
                    "frequency": int(row["frequency"]),
                }
            lines.append(json.dumps(obj, ensure_ascii=False, sort_keys=True))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise ValidationError(f"unknown lexicon format: {format!r}")
    return len(rows)


def _rows_from_tsv(text: str):
    lines = text.splitlines()
    if not lines:
        return
    header = lines[0].split("\t")
    if header != list(TSV_COLUMNS):
        raise ValidationError(
            f"unexpected TSV header: {lines[0]!r}", location="line 1"
        )
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != len(TSV_COLUMNS):
            yield i, None, f"expected {len(TSV_COLUMNS)} columns, got {len(cells)}"
            continue
        yield i, dict(zip(TSV_COLUMNS, cells)), None


def _rows_from_jsonl(text: str):
    for i, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            yield i, None, f"invalid JSON: {exc.msg}"
            continue
        sl = obj.get("superlemma") or {}
        lm = obj.get("lemma")
        sw = obj.get("syntactic_word")
        row = {
            "superlemma_id": str(sl.get("id", "")),
            "superlemma": str(sl.get("form", "")),
            "pos": str(sl.get("pos", "")),
            "lemma_id": str(lm.get("id", "")) if lm else "",
            "lemma": str(lm.get("form", "")) if lm else "",
            "double_checked": ("1" if lm.get("double_checked") else "0") if lm else "",
            "sw_id": str(sw.get("id", "")) if sw else "",
            "wordform": str(sw.get("wordform", "")) if sw else "",
            "features": str(sw.get("features", "")) if sw else "",
            "frequency": str(sw.get("frequency", 0)) if sw else "",
        }
        yield i, row, None


def import_lexicon(store: LexiconStore, path: str | Path, format: str = "tsv") -> ImportReport:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if format == "tsv":
        row_iter = _rows_from_tsv(text)
    elif format == "jsonl":
        row_iter = _rows_from_jsonl(text)
    else:
        raise ValidationError(f"unknown lexicon format: {format!r}")

    created_sl = created_lm = created_sw = 0
    rejected: list[RejectedRow] = []
    # id -> created flag to distinguish continuation rows from redefinitions
    for line_no, row, err in row_iter:
        if err is not None:
            rejected.append(RejectedRow(line_no, err))
            continue
        try:
            created = _apply_row(store, row)
        except WorkbenchError as exc:
            rejected.append(RejectedRow(line_no, f"{exc.code}: {exc.message}"))
            continue
        created_sl += created[0]
        created_lm += created[1]
        created_sw += created[2]
    store._record("import", "create", None, f"import {path.name}: {created_sl}/{created_lm}/{created_sw}")
    return ImportReport(created_sl, created_lm, created_sw, tuple(rejected))


def _apply_row(store: LexiconStore, row: dict[str, str]) -> tuple[int, int, int]:
    new_sl = new_lm = new_sw = 0
    pos = PosTag.parse(row["pos"])
    form = row["superlemma"]
    sl_id = row["superlemma_id"] or None

    existing_sl = None
    if sl_id and sl_id in store._superlemmata:
        existing_sl = store.superlemma(sl_id)
        if existing_sl.form != form or existing_sl.pos != pos:
            raise ConflictError(
                f"superlemma id {sl_id!r} already bound to "
                f"({existing_sl.form!r}, {existing_sl.pos.value})"
            )
    else:
        match = store.find_superlemma(form, pos)
        if match:
            if sl_id and match[0].id != sl_id:
                raise ConflictError(
                    f"superlemma ({form!r}, {pos.value}) already exists with id {match[0].id!r}"
                )
            existing_sl = match[0]
    if existing_sl is None:
        existing_sl = store.create_superlemma(form, pos, "import", entry_id=sl_id)
        # imports must not multiply audit records per row
        store._audit.pop()
        new_sl = 1
    sl = existing_sl

    if not row["lemma_id"] and not row["lemma"]:
        return (new_sl, 0, 0)

    lm_id = row["lemma_id"] or None
    lemma_form = row["lemma"]
    existing_lm = None
    if lm_id and lm_id in store._lemmata:
        existing_lm = store.lemma(lm_id)
        if existing_lm.superlemma_id != sl.id or existing_lm.form != lemma_form:
            raise ConflictError(f"lemma id {lm_id!r} already bound elsewhere")
    else:
        for sibling in store.lemmata_of(sl.id):
            if sibling.form == lemma_form:
                if lm_id and sibling.id != lm_id:
                    raise ConflictError(
                        f"lemma {lemma_form!r} already exists under {sl.id!r}"
                    )
                existing_lm = sibling
                break
    if existing_lm is None:
        existing_lm = store._insert_lemma(sl.id, lemma_form, lm_id, row["double_checked"] == "1")
        new_lm = 1
    lm = existing_lm

    if not row["sw_id"] and not row["wordform"]:
        return (new_sl, new_lm, 0)

    features = FeatureVector.from_string(row["features"])
    frequency = int(row["frequency"]) if row["frequency"] else 0
    sw_id = row["sw_id"] or None
    if sw_id and sw_id in store._sws:
        raise ConflictError(f"syntactic word id {sw_id!r} already in use")
    store._insert_sw(lm.id, row["wordform"], features, frequency, sw_id)
    return (new_sl, new_lm, 1)
