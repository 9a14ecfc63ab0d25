import pytest

from latinlex.errors import (
    ConflictError,
    ConstraintError,
    NotFoundError,
    ValidationError,
)
from latinlex.lexicon import FeatureVector, LexiconStore, PosTag


def fv(s: str) -> FeatureVector:
    return FeatureVector.from_string(s)


# 12 first-declension cells, filled from the reference table by hand.
ROSA_CELLS = [
    ("rosa", fv("case=nom;number=sg")),
    ("rosae", fv("case=gen;number=sg")),
    ("rosae", fv("case=dat;number=sg")),
    ("rosam", fv("case=acc;number=sg")),
    ("rosa", fv("case=abl;number=sg")),
    ("rosa", fv("case=voc;number=sg")),
    ("rosae", fv("case=nom;number=pl")),
    ("rosarum", fv("case=gen;number=pl")),
    ("rosis", fv("case=dat;number=pl")),
    ("rosas", fv("case=acc;number=pl")),
    ("rosis", fv("case=abl;number=pl")),
    ("rosae", fv("case=voc;number=pl")),
]


@pytest.fixture
def store():
    return LexiconStore()


@pytest.fixture
def rosa(store):
    sl = store.create_superlemma("rosa", PosTag.NN, "alice")
    lm = store.create_lemma(sl.id, "rosa", "alice")
    store.add_syntactic_words(lm.id, ROSA_CELLS, "alice")
    return sl, lm


def test_create_superlemma_counts(store):
    before = store.counts()["superlemmata"]
    sl = store.create_superlemma("pater", PosTag.NN, "alice")
    assert sl.id
    assert store.counts()["superlemmata"] == before + 1


def test_duplicate_superlemma_conflicts(store):
    store.create_superlemma("pater", PosTag.NN, "alice")
    with pytest.raises(ConflictError):
        store.create_superlemma("pater", PosTag.NN, "alice")
    # same form under a different pos is fine
    store.create_superlemma("pater", PosTag.NP, "alice")


def test_superlemma_keeps_pos(store):
    sl = store.create_superlemma("excommunico", PosTag.V, "alice")
    assert sl.pos is PosTag.V


def test_superlemma_form_must_be_normalized(store):
    with pytest.raises(ValidationError):
        store.create_superlemma("Verbum", PosTag.NN, "alice")
    with pytest.raises(ValidationError):
        store.create_superlemma("pater", "VERBISH", "alice")


def test_lemma_variants_under_one_superlemma(store):
    sl = store.create_superlemma("excommunicatio", PosTag.NN, "alice")
    store.create_lemma(sl.id, "excommunicatio", "alice")
    store.create_lemma(sl.id, "excomunicatio", "alice")
    assert len(store.lemmata_of(sl.id)) == 2
    with pytest.raises(ConflictError):
        store.create_lemma(sl.id, "excomunicatio", "alice")
    with pytest.raises(NotFoundError):
        store.create_lemma("sl-999999", "x", "alice")


def test_lookup_rosae_candidates(store, rosa):
    hits = store.lookup_wordform("rosae")
    # gen sg, dat sg, nom pl, voc pl of the 12-cell table
    cells = {h.syntactic_word.features.to_string() for h in hits}
    assert cells == {
        "case=gen;number=sg",
        "case=dat;number=sg",
        "case=nom;number=pl",
        "case=voc;number=pl",
    }
    assert all(h.lemma.form == "rosa" for h in hits)


def test_lookup_unknown_and_exact_match(store, rosa):
    assert store.lookup_wordform("zzz") == []
    # no substring matching: "ros" finds nothing
    assert store.lookup_wordform("ros") == []


def test_lookup_is_normalization_equivalence(store, rosa):
    sl = store.superlemma(rosa[0].id)
    lm = store.create_lemma(sl.id, "rosa-v", "alice")
    store.add_syntactic_word(lm.id, "rosavrum", fv("case=gen;number=pl"), "alice")
    # brute-force scan oracle over every stored syntactic word
    for query in ("rosae", "ROSAE", "rosaurum", "rosavrum", "nescio"):
        expected = {
            sw.id
            for sw in store.syntactic_words()
            if store.normalize(sw.wordform) == store.normalize(query)
        }
        got = {h.syntactic_word.id for h in store.lookup_wordform(query)}
        assert got == expected


def test_lookup_order_deterministic(store):
    for form in ("beta", "alpha"):
        sl = store.create_superlemma(form, PosTag.NN, "a")
        lm = store.create_lemma(sl.id, form, "a")
        store.add_syntactic_word(lm.id, "idem", fv("case=nom;number=sg"), "a")
        store.add_syntactic_word(lm.id, "idem", fv("case=voc;number=sg"), "a")
    hits = store.lookup_wordform("idem")
    keys = [(h.superlemma.form, h.syntactic_word.features.to_string()) for h in hits]
    assert keys == sorted(keys)


def _twelve_cells(prefix):
    return [(f"{prefix}{i}", fv(f"case=nom;number=sg").merged()) for i in range(12)]


def test_merge_deduplicates_identical_cells(store):
    sl = store.create_superlemma("pax", PosTag.NN, "a")
    l1 = store.create_lemma(sl.id, "pax", "a")
    l2 = store.create_lemma(sl.id, "paxx", "a")
    store.add_syntactic_words(l1.id, ROSA_CELLS, "a")
    store.add_syntactic_words(l2.id, ROSA_CELLS, "a")
    report = store.merge_lemmata(l1.id, l2.id, "a")
    assert report.deduplicated == 12
    assert report.moved == 0
    assert len(store.sws_of(l1.id)) == 12
    with pytest.raises(NotFoundError):
        store.lemma(l2.id)


def test_merge_disjoint_union(store):
    sl = store.create_superlemma("unio", PosTag.NN, "a")
    l1 = store.create_lemma(sl.id, "unio", "a")
    l2 = store.create_lemma(sl.id, "vnio", "a")
    a_cells = [(f"unio{i}", fv("case=nom;number=sg")) for i in range(1)]
    store.add_syntactic_words(l1.id, [("unionis", fv("case=gen;number=sg"))], "a")
    store.add_syntactic_words(l2.id, [("vnionis", fv("case=gen;number=sg"))], "a")
    forms_before = {sw.wordform for sw in store.sws_of(l1.id)} | {
        sw.wordform for sw in store.sws_of(l2.id)
    }
    report = store.merge_lemmata(l1.id, l2.id, "a")
    assert report.moved == 1 and report.deduplicated == 0
    assert {sw.wordform for sw in store.sws_of(l1.id)} == forms_before
    del a_cells


def test_merge_preconditions(store):
    sl_n = store.create_superlemma("canis", PosTag.NN, "a")
    sl_v = store.create_superlemma("cano", PosTag.V, "a")
    ln = store.create_lemma(sl_n.id, "canis", "a")
    lv = store.create_lemma(sl_v.id, "cano", "a")
    with pytest.raises(ValidationError):
        store.merge_lemmata(ln.id, lv.id, "a")
    with pytest.raises(ValidationError):
        store.merge_lemmata(ln.id, ln.id, "a")


def test_merge_conserves_forms(store):
    sl = store.create_superlemma("mixtum", PosTag.NN, "a")
    l1 = store.create_lemma(sl.id, "mixtum", "a")
    l2 = store.create_lemma(sl.id, "mixtvm", "a")
    store.add_syntactic_words(
        l1.id,
        [("mixta", fv("case=nom;number=pl")), ("mixtum", fv("case=nom;number=sg"))],
        "a",
    )
    store.add_syntactic_words(
        l2.id,
        [("mixta", fv("case=nom;number=pl")), ("mixtorum", fv("case=gen;number=pl"))],
        "a",
    )
    union = {(sw.wordform, sw.features) for sw in store.sws_of(l1.id)} | {
        (sw.wordform, sw.features) for sw in store.sws_of(l2.id)
    }
    store.merge_lemmata(l1.id, l2.id, "a")
    assert {(sw.wordform, sw.features) for sw in store.sws_of(l1.id)} == union


def test_delete_leaf(store, rosa):
    sl, lm = rosa
    sw = store.sws_of(lm.id)[0]
    before = store.counts()["syntactic_words"]
    report = store.delete_entry(sw.id, cascade=False, author="a")
    assert report.syntactic_words == 1 and report.total == 1
    assert store.counts()["syntactic_words"] == before - 1


def test_delete_childful_requires_cascade(store, rosa):
    sl, _ = rosa
    with pytest.raises(ConstraintError):
        store.delete_entry(sl.id, cascade=False, author="a")


def test_cascade_delete_counts(store):
    sl = store.create_superlemma("arbor", PosTag.NN, "a")
    for variant in ("arbor", "arbos"):
        lm = store.create_lemma(sl.id, variant, "a")
        cells = [(f"{variant}{feat.to_string()}", feat) for _, feat in ROSA_CELLS]
        store.add_syntactic_words(lm.id, cells, "a")
    report = store.delete_entry(sl.id, cascade=True, author="a")
    assert report.total == 1 + 2 + 24
    assert store.verify_integrity() == []


def test_mark_double_checked_idempotent(store, rosa):
    _, lm = rosa
    audit_before = len(store.audit_log)
    first = store.mark_double_checked(lm.id, "bob")
    second = store.mark_double_checked(lm.id, "carol")
    assert first.double_checked and second.double_checked
    assert len(store.audit_log) == audit_before + 2
    with pytest.raises(NotFoundError):
        store.mark_double_checked("lm-424242", "bob")


def test_double_checked_fraction_reportable(store):
    sl = store.create_superlemma("res", PosTag.NN, "a")
    lemmata = [store.create_lemma(sl.id, f"res{i}", "a") for i in range(8)]
    for lm in lemmata[:3]:
        store.mark_double_checked(lm.id, "a")
    checked = sum(1 for lm in store.lemmata() if lm.double_checked)
    assert checked / store.counts()["lemmata"] == pytest.approx(0.375)


def test_audit_completeness(store):
    calls = 0
    sl = store.create_superlemma("uerbum", PosTag.NN, "a"); calls += 1
    lm = store.create_lemma(sl.id, "verbum", "a"); calls += 1
    store.add_syntactic_words(lm.id, ROSA_CELLS[:2], "a"); calls += 1
    store.add_syntactic_words(lm.id, ROSA_CELLS[:2], "a"); calls += 1  # idempotent, still 1 record
    store.mark_double_checked(lm.id, "a"); calls += 1
    store.update_form(lm.id, "uerbum alt", "a"); calls += 1
    assert len(store.audit_log) == calls
    actions = [r.action for r in store.audit_log]
    assert actions == ["create", "create", "create", "create", "double_check", "update"]


def test_referential_integrity_after_mixed_ops(store, rosa):
    sl, lm = rosa
    other = store.create_superlemma("rosetum", PosTag.NN, "a")
    lm2 = store.create_lemma(other.id, "rosetum", "a")
    store.add_syntactic_words(lm2.id, [("roseta", fv("case=nom;number=pl"))], "a")
    store.merge_lemmata(lm.id, lm2.id, "a")
    store.delete_entry(store.sws_of(lm.id)[0].id, cascade=False, author="a")
    assert store.verify_integrity() == []
    # counting identity when every parent is populated
    c = store.counts()
    assert c["syntactic_words"] >= c["lemmata"] or c["lemmata"] == 2


def test_counting_identity(store):
    for i in range(3):
        sl = store.create_superlemma(f"uox{i}", PosTag.NN, "a")
        for j in range(2):
            lm = store.create_lemma(sl.id, f"uox{i}v{j}", "a")
            store.add_syntactic_words(lm.id, [(f"uoces{i}{j}", fv("case=nom;number=pl"))], "a")
    c = store.counts()
    assert c["syntactic_words"] >= c["lemmata"] >= c["superlemmata"]


def test_ids_never_reused(store):
    sl = store.create_superlemma("primus", PosTag.NN, "a")
    first_id = sl.id
    store.delete_entry(first_id, cascade=False, author="a")
    sl2 = store.create_superlemma("secundus", PosTag.NN, "a")
    assert sl2.id != first_id


def test_feature_validation_on_add(store):
    sl = store.create_superlemma("mons", PosTag.NN, "a")
    lm = store.create_lemma(sl.id, "mons", "a")
    with pytest.raises(ValidationError):
        store.add_syntactic_word(lm.id, "montis", fv("tense=pres"), "a")
    with pytest.raises(ValidationError):
        store.add_syntactic_word(lm.id, "montis", fv("case=gen"), "a")  # number missing


def test_multi_word_unit(store):
    sl = store.create_superlemma("colonia agrippina", PosTag.NP, "a")
    mwu = store.create_multi_word_unit(sl.id, ["Colonia", "Agrippina"], "a")
    assert mwu.component_forms == ("Colonia", "Agrippina")
    assert store.has_syntactic_word(mwu.syntactic_word_id)
    matches = store.multiword_matches("colonia")
    assert [m.id for m in matches] == [mwu.id]
    with pytest.raises(ValidationError):
        store.create_multi_word_unit(sl.id, ["solum"], "a")
