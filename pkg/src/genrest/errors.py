class GenrestError(Exception):
    """Base class for errors raised by genrest."""


class StructureError(GenrestError):
    """A structural identity of a group or subgroup failed."""


class VerificationError(GenrestError):
    """A computed quantity is not what the mathematics forces (signals a bug)."""
