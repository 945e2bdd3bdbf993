"""Exception hierarchy shared across the pipeline.

Each class maps to one documented CLI exit code (see paydev.cli).
"""


class PaydevError(Exception):
    """Base class; exit code 1 unless a subclass says otherwise."""

    exit_code = 1


class InputFileError(PaydevError):
    """Missing or unreadable input file."""

    exit_code = 2


class ParseError(PaydevError):
    """Malformed git-log export stream."""

    exit_code = 3

    def __init__(self, message, byte_offset=None, record_index=None):
        loc = []
        if record_index is not None:
            loc.append(f"record {record_index}")
        if byte_offset is not None:
            loc.append(f"byte {byte_offset}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.byte_offset = byte_offset
        self.record_index = record_index


class SchemaError(PaydevError):
    """File content violates a documented schema (canonical JSONL, CSVs,
    overrides, config)."""

    exit_code = 3

    def __init__(self, message, line=None):
        super().__init__(f"{message} (line {line})" if line is not None else message)
        self.line = line


class DuplicateShaError(SchemaError):
    """The same commit id appears twice in one dataset."""


class OverrideConflictError(SchemaError):
    """A key appears in conflicting identity override rules."""


class ColumnMismatchError(PaydevError):
    """Feature columns do not match the columns a model was trained on."""

    exit_code = 4

    def __init__(self, missing=(), extra=()):
        parts = []
        if missing:
            parts.append("missing: " + ", ".join(sorted(missing)))
        if extra:
            parts.append("extra: " + ", ".join(sorted(extra)))
        super().__init__("feature columns do not match model (" + "; ".join(parts) + ")")
        self.missing = tuple(sorted(missing))
        self.extra = tuple(sorted(extra))


class SingleClassError(PaydevError):
    """Training or evaluation requires both classes to be present."""

    exit_code = 5


class StratificationError(PaydevError):
    """k exceeds the size of the minority class."""

    exit_code = 6


class UnlabeledIdentityError(PaydevError):
    """An identity has neither a direct status nor employment periods."""

    exit_code = 5
