"""Exception hierarchy shared across the workbench.

Every domain error carries a short machine-readable ``code`` that the HTTP
facade maps onto its error payload and the CLI maps onto exit status 1.
"""


class WorkbenchError(Exception):
    """Base class for all domain errors."""

    code = "internal"

    def __init__(self, message: str, location: str | None = None):
        super().__init__(message)
        self.message = message
        self.location = location


class NotFoundError(WorkbenchError):
    code = "not_found"


class ConflictError(WorkbenchError):
    code = "conflict"


class ValidationError(WorkbenchError):
    code = "validation"


class ConstraintError(ConflictError):
    """A structural precondition failed (e.g. deleting an entry that still
    has children without ``cascade``)."""


class StaleViewError(WorkbenchError):
    code = "stale_view"


class ClassificationError(ValidationError):
    """No paradigm-class heuristic matched; the caller must pick manually."""


class ExpansionError(ValidationError):
    """Stem derivation or table application failed; names the failing rule."""


class IngestionError(ValidationError):
    """Document could not be ingested; ``location`` points at the offender."""


class SyncError(WorkbenchError):
    """A lexicon sync event could not be applied; the event is parked."""


class TrainingError(ValidationError):
    """Embedding training could not start or converge structurally."""


class FileFormatError(ValidationError):
    """A persisted artifact failed to parse; ``location`` is ``line N``."""


class UnauthorizedError(WorkbenchError):
    code = "unauthorized"
