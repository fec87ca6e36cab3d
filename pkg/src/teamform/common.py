from typing import Any, Dict, Optional


class TeamformError(Exception):
    """Base exception for every failure raised by teamform."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class NetworkError(TeamformError):
    """Invalid network construction or generation."""


class ParseError(TeamformError):
    """Malformed text input (network, matching or config files)."""

    def __init__(self, message: str, line: Optional[int] = None, details: Optional[Dict[str, Any]] = None):
        details = dict(details or {})
        if line is not None:
            details["line"] = line
            message = f"line {line}: {message}"
        super().__init__(message, details)
        self.line = line


class MatchingError(TeamformError):
    """Invalid matching, path or matching pair."""


class EnumerationLimitError(TeamformError):
    """Brute-force enumeration exceeded its configured limit."""


class DynamicsError(TeamformError):
    """A protocol invariant was violated during a run."""


class ConfigError(TeamformError):
    """Bad settings, experiment specs or argument ranges."""
