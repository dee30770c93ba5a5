"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`SampflowError`, so callers (the CLI in particular) can separate
user-facing failures from programming errors.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourcePos:
    """1-based position inside a DSL document."""

    line: int
    column: int

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError(f"invalid source position {self.line}:{self.column}")

    def __str__(self):
        return f"{self.line}:{self.column}"


class SampflowError(Exception):
    """Base class for all package errors."""


# -- DSL -------------------------------------------------------------------


class ParseError(SampflowError):
    kind = "parse-error"

    def __init__(self, message: str, pos: SourcePos | None = None):
        super().__init__(f"{pos}: {message}" if pos is not None else message)
        self.message = message
        self.pos = pos


class DslSyntaxError(ParseError):
    kind = "syntax-error"

    def __init__(self, message: str, pos: SourcePos | None = None,
                 expected: frozenset[str] = frozenset()):
        if expected:
            message = f"{message} (expected {', '.join(sorted(expected))})"
        super().__init__(message, pos)
        self.expected = expected


class UnknownFieldError(ParseError):
    kind = "unknown-field"

    def __init__(self, name: str, pos: SourcePos | None = None):
        super().__init__(f"unknown field {name!r}", pos)
        self.name = name


class TypeMismatchError(ParseError):
    kind = "type-mismatch"


class DuplicateLabelError(ParseError):
    kind = "duplicate-branch-label"


class InvalidValueError(ParseError):
    """A syntactically valid count, label or declaration that cannot work."""

    kind = "invalid-value"


# -- loaders ---------------------------------------------------------------


class LoaderError(SampflowError):
    kind = "loader-error"


class MissingColumnError(LoaderError):
    kind = "missing-column"

    def __init__(self, column: str, path: str):
        super().__init__(f"{path}: missing column {column!r}")
        self.column = column


class UnparsableValueError(LoaderError):
    kind = "unparsable-value"

    def __init__(self, row: int, column: str, raw: object, reason: str = ""):
        msg = f"row {row}, column {column!r}: cannot parse {raw!r}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)
        self.row = row
        self.column = column
        self.raw = raw


class DuplicateKeyError(LoaderError):
    kind = "duplicate-key"

    def __init__(self, key: str):
        super().__init__(f"duplicate key value {key!r}")
        self.key = key


class NotAnArrayError(LoaderError):
    kind = "not-an-array"


class UnknownLoaderKindError(LoaderError):
    kind = "unknown-loader-kind"


class DuplicateRegistrationError(LoaderError):
    kind = "duplicate-registration"


# -- operators -------------------------------------------------------------


class OperatorError(SampflowError):
    kind = "operator-error"


class SampleTooLargeError(OperatorError):
    kind = "sample-too-large"

    def __init__(self, n: int, size: int):
        super().__init__(f"cannot draw {n} elements from a set of {size}")
        self.n = n
        self.size = size


class NonOrderableFieldError(OperatorError):
    kind = "non-orderable-field"


class NotAPartitionError(OperatorError):
    kind = "not-a-partition"

    def __init__(self, overlaps: list[str], uncovered: list[str]):
        parts = []
        if overlaps:
            parts.append(f"in several strata: {', '.join(overlaps)}")
        if uncovered:
            parts.append(f"in no stratum: {', '.join(uncovered)}")
        super().__init__("strata do not partition the input; " + "; ".join(parts))
        self.overlaps = overlaps
        self.uncovered = uncovered


class TooManyClustersError(OperatorError):
    kind = "too-many-clusters"


class IdOutsideStratumError(OperatorError):
    kind = "id-outside-stratum"

    def __init__(self, artifact_id: str, stratum: str):
        super().__init__(f"id {artifact_id!r} is not in stratum {stratum!r}")
        self.artifact_id = artifact_id
        self.stratum = stratum


class DuplicateJoinKeyError(OperatorError):
    kind = "duplicate-join-key"

    def __init__(self, key: str):
        super().__init__(f"join key {key!r} appears more than once in the right source")
        self.key = key


class DepthError(OperatorError):
    kind = "depth-mismatch"


# -- statistics ------------------------------------------------------------


class StatsError(SampflowError, ValueError):
    kind = "stats-error"


class DomainError(StatsError):
    kind = "domain-error"


class EmptySampleError(StatsError):
    kind = "empty-sample"


class DimensionMismatchError(StatsError):
    kind = "dimension-mismatch"


class NonPositiveExpectedError(StatsError):
    kind = "nonpositive-expected"


class EmptyFrameError(StatsError):
    kind = "empty-frame"
