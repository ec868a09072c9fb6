"""Error types shared across the package.

Every exactness contract in the library fails loudly through one of these;
nothing is ever rounded, truncated silently, or coerced to floating point.
"""


class K3PairsError(Exception):
    """Base class for all library errors."""


class NonUnitLeading(K3PairsError):
    """Series inversion requires an invertible leading coefficient."""


class BadConstantTerm(K3PairsError):
    """log needs constant term 1; exp needs constant term 0."""


class NotDivisible(K3PairsError):
    """An exact polynomial/series division left a remainder."""


class InternalNonExactDivision(K3PairsError):
    """A closed-form matrix entry failed its guaranteed exact division.

    This indicates a bug or an out-of-contract index, never user input.
    """


class NonExactDivision(K3PairsError):
    """A closed-form partition-function term failed its exact division."""


class NegativeDim(K3PairsError):
    """The moduli space is empty (expected dimension < 0)."""


class UnsupportedRank(K3PairsError):
    """Section-space dimension exceeding the sheaf data (r > n) is undefined."""


class Mismatch(K3PairsError):
    """Two routes to the same series disagree.

    Carries the first differing location as a dict of exponents, e.g.
    ``{"q": 3, "y": -1, "u": 2}``.
    """

    def __init__(self, message, location=None):
        super().__init__(message if location is None
                         else f"{message} at {location}")
        self.location = dict(location) if location else None


class NoSolution(K3PairsError):
    """The exact linear fit has no solution in the allowed basis."""


class ValidationFailure(K3PairsError):
    """A fit matched the fitting window but failed beyond it."""
