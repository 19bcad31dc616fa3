"""Exception types shared across the package."""


class LittlewoodError(Exception):
    """Base class for all domain errors raised by this package."""


class PerfectSquare(LittlewoodError):
    """The radicand is a perfect square; the value is rational, use Fraction."""


class ZeroDenominator(LittlewoodError):
    """A surd was given denominator 0."""


class StreamExhausted(LittlewoodError):
    """A finite word ended before enough letters were available."""


class HorizonTooSmall(LittlewoodError):
    """The requested window is too short for the computation."""


class NotEnoughReturns(LittlewoodError):
    """Fewer prefix return times than the pigeonhole construction needs."""


class DegenerateQ(LittlewoodError):
    """Witness integer came out zero; the determinant identity forbids this."""


class VerificationFailed(LittlewoodError):
    """An identity or certified inequality failed an exact re-check."""


class PAdicDenominator(LittlewoodError):
    """The prime divides a denominator the construction requires to be a unit."""


class TieAtHalf(LittlewoodError):
    """q*alpha landed exactly on a half integer (only possible for rational alpha)."""


class DigitCapExceeded(LittlewoodError):
    """An integer grew past the configured decimal-digit cap."""
