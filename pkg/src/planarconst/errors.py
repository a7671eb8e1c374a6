"""Exception hierarchy shared by every layer of the package."""


class PlanarConstError(Exception):
    """Base class for all errors raised by planarconst."""


class ParseError(PlanarConstError, ValueError):
    """A decimal or rational literal could not be parsed.

    ``position`` is the 0-based index of the first offending character.
    """

    def __init__(self, text: str, position: int, reason: str = "unexpected character"):
        self.text = text
        self.position = position
        self.reason = reason
        shown = repr(text[position]) if position < len(text) else "end of input"
        super().__init__(f"{reason} at position {position} ({shown}) in {text!r}")


class DomainError(PlanarConstError, ValueError):
    """An operation was applied outside the set where it is defined or validated."""


class PoleError(DomainError):
    """A denominator enclosure contains zero."""

    def __init__(self, factor: str, where: str):
        self.factor = factor
        super().__init__(f"{factor} vanishes on {where}")


class IndeterminateSignError(PlanarConstError):
    """Polynomial sign could not be certified within the allowed subdivision depth."""


class NoSignChangeError(PlanarConstError):
    """Seed bracket endpoints do not straddle the target value."""


class PrecisionError(PlanarConstError):
    """Enclosures were too wide to decide a comparison."""


class CertificateError(PlanarConstError):
    """Evidence failed to replay, or a certificate is malformed."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")
