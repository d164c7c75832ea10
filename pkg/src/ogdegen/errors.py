"""Exceptions raised across the package."""


class OgdegenError(Exception):
    pass


class SingularSystem(OgdegenError):
    pass


class PoleAtZero(OgdegenError):
    pass


class NotAllowed(OgdegenError):
    pass


class SaturatedPair(OgdegenError):
    pass


class NotNice(OgdegenError):
    """A solver system for some row is singular or inconsistent.

    ``row`` is the 1-based row whose star system failed, ``unknowns`` the
    number of star entries in that row and ``rank`` the rank found.
    """

    def __init__(self, msg, row=None, unknowns=None, rank=None):
        super().__init__(msg)
        self.row = row
        self.unknowns = unknowns
        self.rank = rank


class NotInCell(OgdegenError):
    pass


class SingularReduction(OgdegenError):
    pass


class DimensionTooLarge(OgdegenError):
    pass


class BoundaryPoint(OgdegenError):
    pass


class VerificationFailure(OgdegenError):
    pass
