from .features import EMPTY_FEATURES, FEATURE_KEYS, FeatureVector, PosTag, validate_features
from .io import export_lexicon, import_lexicon
from .model import (
    AuditRecord,
    DeleteEvent,
    DeleteReport,
    ImportReport,
    Lemma,
    LookupHit,
    MergeEvent,
    MergeReport,
    MultiWordUnit,
    RejectedRow,
    RelabelEvent,
    Superlemma,
    SyncEvent,
    SyntacticWord,
)
from .normalize import DEFAULT_FOLDS, normalize_form
from .store import LexiconStore

__all__ = [
    "AuditRecord",
    "DEFAULT_FOLDS",
    "DeleteEvent",
    "DeleteReport",
    "EMPTY_FEATURES",
    "FEATURE_KEYS",
    "FeatureVector",
    "ImportReport",
    "Lemma",
    "LexiconStore",
    "LookupHit",
    "MergeEvent",
    "MergeReport",
    "MultiWordUnit",
    "PosTag",
    "RejectedRow",
    "RelabelEvent",
    "Superlemma",
    "SyncEvent",
    "SyntacticWord",
    "export_lexicon",
    "import_lexicon",
    "normalize_form",
    "validate_features",
]
