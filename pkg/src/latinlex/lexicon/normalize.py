"""Orthographic normalization.

Medieval Latin spelling varies freely between u/v and i/j; lookup therefore
runs over a folded, lowercased form.  The fold table is configurable per
lexicon; the default folds v->u and j->i.  Normalization is idempotent.
"""

from __future__ import annotations

import unicodedata

from ..errors import ValidationError

DEFAULT_FOLDS: dict[str, str] = {"v": "u", "j": "i"}


def normalize_form(raw: str, folds: dict[str, str] | None = None) -> str:
    """Lowercase, NFC-normalize and apply character folds to ``raw``."""
    if not isinstance(raw, str) or raw == "":
        raise ValidationError("cannot normalize an empty form")
    folds = DEFAULT_FOLDS if folds is None else folds
    text = unicodedata.normalize("NFC", raw).lower()
    if folds:
        text = "".join(folds.get(ch, ch) for ch in text)
    return text
