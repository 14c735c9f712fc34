"""Exception hierarchy for scenario validation and analysis contracts.

Every error raised by this package derives from :class:`ValidationError`, so
callers (and the CLI) can map any contract violation to a single failure path
while still matching on the specific invariant that was broken.
"""


class ValidationError(Exception):
    """Base class for every scenario or analysis contract violation."""


class OutOfRangeError(ValidationError):
    """A probability is outside [0, 1] or is not a finite number."""


class NonSimplexError(ValidationError):
    """A probability vector does not sum to 1 within tolerance."""


class InconsistentJointError(ValidationError):
    """A joint response model contradicts the stated experimental marginals."""


class MissingAssignmentError(ValidationError):
    """A required field, label entry, or rule assignment is absent."""


class UnknownLabelError(ValidationError):
    """A label does not belong to the covariate or treatment space in use."""


class DuplicateLabelError(ValidationError):
    """Labels in a covariate or treatment space are not pairwise distinct."""


class SizeLimitError(ValidationError):
    """An enumeration would exceed its configured cap."""


class NotBinaryError(ValidationError):
    """The operation requires exactly two covariates and two treatments."""


class CaseMismatchError(ValidationError):
    """Inputs do not satisfy the ordering required by the given binary case."""


class InfeasibleError(ValidationError):
    """No response model satisfies the requested constraint."""


class ParseError(ValidationError):
    """A scenario document is malformed or structurally invalid."""
