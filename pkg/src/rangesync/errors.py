"""Exception types shared across the package.

Plain ``ValueError`` / ``IndexError`` are raised for caller mistakes (bad
widths, out-of-range ranks, misuse of a completed session).  The types below
cover configuration problems and misbehaving peers.
"""


class ConfigError(ValueError):
    """Invalid configuration: unknown scheme or hash, bad parameter values."""


class ProtocolError(Exception):
    """The peer violated the reconciliation protocol; the session aborts."""


class DecodeError(ProtocolError):
    """Malformed bytes on the wire.  ``offset`` is where parsing failed."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset
