"""Exception types raised across the package."""


class PQGameError(Exception):
    """Base class for all errors raised by pqgames."""


class DomainError(PQGameError, ValueError):
    """An argument lies outside the domain of an operation."""


class ResourceError(PQGameError):
    """A computation would exceed a configured size cap."""


class GameFileError(DomainError):
    """A game definition document is malformed.

    ``location`` names the offending JSON field path (and line, when the
    document could not be decoded at all).
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
