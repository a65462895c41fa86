"""Triple graph grammar engine and step debugger."""

from ._core import (
    PROTOCOL_VERSION,
    DebugServer,
    RuleSet,
    Session,
    TggError,
    replay,
)

__all__ = ["PROTOCOL_VERSION", "DebugServer", "RuleSet", "Session", "TggError", "replay", "error_code"]


def error_code(err):
    """Error code string of a TggError, e.g. "STALE_MATCH"."""
    return err.args[1]
