"""Exception types shared across the package."""


class VeroneseError(Exception):
    """Base class. ``kind`` is the machine-readable error name."""

    kind = "Error"

    def __init__(self, detail="", witness=None):
        super().__init__(detail)
        self.detail = detail
        self.witness = witness


class InvalidInput(VeroneseError):
    kind = "InvalidInput"


class RankDeficient(VeroneseError):
    kind = "RankDeficient"


class NotAcyclic(VeroneseError):
    """A nonzero nonnegative kernel vector exists; ``witness`` holds it."""

    kind = "NotAcyclic"


class DegenerateMap(VeroneseError):
    """Some boundary lattice point of the zonotope has a full-dimensional fiber."""

    kind = "DegenerateMap"


class EmptyInterior(VeroneseError):
    kind = "EmptyInterior"


class SizeLimit(VeroneseError):
    kind = "SizeLimit"


class Limits:
    """Size caps read at call time; the command line may raise or lower them."""

    term = 10**6  # polynomial terms
    box = 10**7  # lattice points in an enumeration box


LIMITS = Limits()
