"""Part-of-speech inventory and grammatical feature vectors.

A feature vector is the content plane of a syntactic word: a partial map
from a fixed key inventory (case, number, gender, person, tense, mood,
voice, degree) to closed value sets.  Which keys must be present depends on
the part of speech; verbs additionally depend on the mood of the cell.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping
from typing import Iterator

from ..errors import ValidationError


class PosTag(str, enum.Enum):
    ADJ = "ADJ"
    ADV = "ADV"
    AP = "AP"
    CON = "CON"
    DIST = "DIST"
    FM = "FM"
    ITJ = "ITJ"
    NE = "NE"
    NN = "NN"
    NP = "NP"
    NUM = "NUM"
    ORD = "ORD"
    PRO = "PRO"
    PTC = "PTC"
    V = "V"
    XY = "XY"

    @classmethod
    def parse(cls, raw: str) -> "PosTag":
        try:
            return cls(raw.strip().upper())
        except ValueError:
            raise ValidationError(f"unknown part-of-speech tag: {raw!r}") from None


#: Canonical key order, used for serialization and candidate ordering.
FEATURE_KEYS = ("case", "number", "gender", "person", "tense", "mood", "voice", "degree")

FEATURE_VALUES: dict[str, tuple[str, ...]] = {
    "case": ("nom", "gen", "dat", "acc", "abl", "voc"),
    "number": ("sg", "pl"),
    "gender": ("m", "f", "n"),
    "person": ("1", "2", "3"),
    "tense": ("pres", "impf", "fut", "perf", "plup", "futperf"),
    "mood": ("ind", "subj", "imp", "inf", "part", "ger", "gerundive", "supine"),
    "voice": ("act", "pass"),
    "degree": ("pos", "comp", "sup"),
}

_KEY_ORDER = {k: i for i, k in enumerate(FEATURE_KEYS)}


class FeatureVector(Mapping):
    """Immutable, hashable partial feature map in canonical key order."""

    __slots__ = ("_pairs", "_hash")

    def __init__(self, mapping: Mapping[str, str] | None = None, **kwargs: str):
        items: dict[str, str] = {}
        if mapping:
            items.update(mapping)
        items.update(kwargs)
        pairs = []
        for key in sorted(items, key=lambda k: _KEY_ORDER.get(k, 99)):
            value = str(items[key])
            if key not in FEATURE_VALUES:
                raise ValidationError(f"unknown feature key: {key!r}")
            if value not in FEATURE_VALUES[key]:
                raise ValidationError(f"invalid value {value!r} for feature {key!r}")
            pairs.append((key, value))
        object.__setattr__(self, "_pairs", tuple(pairs))
        object.__setattr__(self, "_hash", hash(self._pairs))

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("FeatureVector is immutable")

    def __getitem__(self, key: str) -> str:
        for k, v in self._pairs:
            if k == key:
                return v
        raise KeyError(key)

    def __iter__(self) -> Iterator[str]:
        return (k for k, _ in self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, FeatureVector):
            return self._pairs == other._pairs
        return NotImplemented

    def __repr__(self) -> str:
        return f"FeatureVector({self.to_string()!r})"

    def merged(self, **kwargs: str) -> "FeatureVector":
        d = dict(self._pairs)
        d.update(kwargs)
        return FeatureVector(d)

    def without(self, *keys: str) -> "FeatureVector":
        return FeatureVector({k: v for k, v in self._pairs if k not in keys})

    def to_string(self) -> str:
        """Serialize as ``key=value;key=value`` in canonical key order."""
        return ";".join(f"{k}={v}" for k, v in self._pairs)

    @classmethod
    def from_string(cls, raw: str) -> "FeatureVector":
        raw = raw.strip()
        if not raw:
            return cls()
        items = {}
        for chunk in raw.split(";"):
            if not chunk:
                continue
            if "=" not in chunk:
                raise ValidationError(f"malformed feature chunk: {chunk!r}")
            key, _, value = chunk.partition("=")
            items[key.strip()] = value.strip()
        return cls(items)


EMPTY_FEATURES = FeatureVector()

# Required / additionally-allowed keys per part of speech.  Verbs are
# validated per mood (see _VERB_RULES).
_NOMINAL = frozenset({"case", "number"})
_POS_RULES: dict[PosTag, tuple[frozenset, frozenset]] = {
    PosTag.NN: (_NOMINAL, frozenset({"gender"})),
    PosTag.NE: (_NOMINAL, frozenset({"gender"})),
    PosTag.NP: (_NOMINAL, frozenset({"gender"})),
    PosTag.ADJ: (frozenset({"case", "number", "gender", "degree"}), frozenset()),
    PosTag.ORD: (frozenset({"case", "number", "gender"}), frozenset()),
    PosTag.DIST: (frozenset({"case", "number", "gender"}), frozenset()),
    PosTag.NUM: (frozenset(), frozenset({"case", "number", "gender"})),
    PosTag.PRO: (_NOMINAL, frozenset({"gender", "person"})),
    PosTag.ADV: (frozenset(), frozenset({"degree"})),
    PosTag.AP: (frozenset(), frozenset()),
    PosTag.CON: (frozenset(), frozenset()),
    PosTag.ITJ: (frozenset(), frozenset()),
    PosTag.PTC: (frozenset(), frozenset()),
    PosTag.FM: (frozenset(), frozenset()),
    # XY collects unknown cases; any well-formed vector is accepted.
    PosTag.XY: (frozenset(), frozenset(FEATURE_KEYS)),
}

_VERB_RULES: dict[str, tuple[frozenset, frozenset]] = {
    "ind": (frozenset({"person", "number", "tense", "mood", "voice"}), frozenset()),
    "subj": (frozenset({"person", "number", "tense", "mood", "voice"}), frozenset()),
    "imp": (frozenset({"person", "number", "tense", "mood", "voice"}), frozenset()),
    "inf": (frozenset({"tense", "mood", "voice"}), frozenset()),
    "part": (
        frozenset({"tense", "mood", "voice", "case", "number", "gender"}),
        frozenset({"degree"}),
    ),
    "ger": (frozenset({"case", "mood"}), frozenset()),
    "gerundive": (frozenset({"case", "number", "gender", "mood"}), frozenset()),
    "supine": (frozenset({"case", "mood"}), frozenset()),
}


def validate_features(pos: PosTag, features: FeatureVector) -> None:
    """Raise ValidationError unless ``features`` is admissible for ``pos``.

    Indeclinables carry the empty vector; nominals require case+number;
    finite verbs require person+number+tense+mood+voice, and the non-finite
    moods each have their own key set.  The fully empty vector is admissible
    for every part of speech: entries collected from heterogeneous sources
    (and multi-word surfaces) legitimately arrive without an analysis.
    """
    if len(features) == 0:
        return
    if pos is PosTag.V:
        mood = features.get("mood")
        if mood is None:
            raise ValidationError("verb cells require a mood feature")
        required, extra = _VERB_RULES[mood]
    else:
        required, extra = _POS_RULES[pos]
    keys = frozenset(features.keys())
    missing = required - keys
    if missing:
        raise ValidationError(
            f"{pos.value} requires features {sorted(missing)} (got {features.to_string() or 'none'})"
        )
    surplus = keys - required - extra
    if surplus:
        raise ValidationError(
            f"features {sorted(surplus)} are not admissible for {pos.value}"
        )
