"""Exception hierarchy shared by every gccl module."""


class GcclError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GcclError, ValueError):
    """A context, schema, state or CSV file does not match its format.

    ``line`` is 1-based when known, ``offset`` is a byte offset when known.
    """

    def __init__(self, message, line=None, offset=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"byte {offset}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.offset = offset


class SchemaError(GcclError, ValueError):
    """A scaling schema is inconsistent (empty domain, name collision)."""


class DataError(GcclError, ValueError):
    """A data cell or increment row violates its declared domain or width."""


class GenerationError(GcclError):
    """Sets or concepts from different context generations were mixed."""


class BatchError(GcclError, ValueError):
    """An increment batch was rejected; the learning state is unchanged."""
