"""Error taxonomy shared by all modules.

InputError covers malformed input and domain violations (CLI exit 2),
InternalError signals a broken internal invariant (CLI exit 3) and is
never raised for merely unlucky input.
"""


class InputError(ValueError):
    """Bad input: wrong shape, out-of-domain argument, unparsable payload."""


class ResourceError(InputError):
    """Exhaustive enumeration requested above the configured desk-scale cap."""


class InternalError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""
