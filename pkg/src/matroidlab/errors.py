"""Exception hierarchy shared by every module.

Each class maps to one CLI exit code (see ``matroidlab.cli``).
"""


class MatroidLabError(Exception):
    """Base class for all library errors."""


class InvalidParameter(MatroidLabError, ValueError):
    """A caller-supplied argument violates a documented precondition."""


class ParseError(InvalidParameter):
    """A definition document does not match its schema.

    ``path`` is a JSON-pointer-like location of the offending node.
    """

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationError(InvalidParameter):
    """A well-formed definition describes something that is not a matroid."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceLimit(MatroidLabError):
    """A configured cap (bases, fiber nodes, search time) was exceeded."""

    def __init__(self, message: str, cap=None):
        super().__init__(message)
        self.cap = cap


class InternalConsistency(MatroidLabError, AssertionError):
    """An invariant guaranteed by matroid theory failed: the oracle is broken."""


class SwapInvalid(MatroidLabError):
    """A double swap produced a set that is not a basis.

    Raised routinely during search; not a crash.
    """

    def __init__(self, failing_set: int):
        super().__init__(f"swap result {failing_set:#x} is not a basis")
        self.failing_set = failing_set


class NotStronglyBaseOrderable(MatroidLabError):
    """No exchange bijection exists for a pair of bases."""

    def __init__(self, pair):
        super().__init__(f"no strongly-base-orderable bijection for bases {pair!r}")
        self.pair = pair


class FalsificationError(MatroidLabError):
    """A check of a proven theorem failed on concrete data.

    Expected never to fire; if it does, either the input oracle or this
    library is wrong and the event must be reported.
    """
