"""Error types shared by all finlat modules.

Every error carries a stable ``code`` (its class name) so the command-line
front end can report it as machine-readable JSON.
"""


class FinlatError(Exception):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class UnknownPoint(FinlatError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InvalidPoset(FinlatError, ValueError):
    pass


class NotT0(FinlatError, ValueError):
    pass


class UnknownName(FinlatError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InvalidSize(FinlatError, ValueError):
    pass


class EmptyCovering(FinlatError, ValueError):
    pass


class CoverageGap(FinlatError, ValueError):
    pass


class NotARefinement(FinlatError, ValueError):
    def __init__(self, level, witness, reason):
        self.level = level
        self.witness = witness
        self.reason = reason
        super().__init__(
            f"covering {level + 1} does not refine covering {level}: {reason} "
            f"(samples {witness[0]} and {witness[1]})"
        )

    def to_dict(self) -> dict:
        d = super().to_dict()
        d.update(level=self.level, witness=list(self.witness))
        return d


class DepthMismatch(FinlatError, ValueError):
    pass


class TooLarge(FinlatError, ValueError):
    pass


class ShapeMismatch(FinlatError, ValueError):
    pass


class LevelOutOfRange(FinlatError, IndexError):
    pass


class LengthMismatch(FinlatError, ValueError):
    pass


class NotGaugeTrivial(FinlatError, ValueError):
    pass


class EigensolverFailure(FinlatError, RuntimeError):
    pass


class FormatError(FinlatError, ValueError):
    """Malformed input document (JSON schema violations and the like)."""


class InvalidParameter(FinlatError, ValueError):
    pass
