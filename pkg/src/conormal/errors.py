"""Exception hierarchy. The CLI maps these to exit codes."""


class ConormalError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ConormalError, ValueError):
    """An argument lies outside the domain of an operation."""


class BlowUpError(ConormalError):
    """The integrator left the region where the Hamiltonian is supported."""

    def __init__(self, message, seed_index=None):
        super().__init__(message)
        self.seed_index = seed_index


class OracleUnavailableError(ConormalError):
    """The flowed zero section is not graphical, so no spectral value exists here."""


class UnsupportedCombinationError(ConormalError, ValueError):
    """Target/class-label pairing that the oracle does not expose."""


class PartialSequenceError(OracleUnavailableError):
    """The oracle failed at iterate ``n`` while building a sequence."""

    def __init__(self, n, cause):
        super().__init__(f"oracle unavailable at n={n}: {cause}")
        self.n = n
        self.cause = cause


class NotSubadditiveError(ConormalError):
    """A sequence handed to the Fekete estimate is not subadditive."""

    def __init__(self, m, n, margin):
        super().__init__(f"b[{m + n}] > b[{m}] + b[{n}] (margin {margin:.3e})")
        self.witness = (m, n)
        self.margin = margin


class OracleMismatchError(ConormalError):
    """Oracle value and closed form disagree beyond tolerance."""


class ConfigError(ConormalError, ValueError):
    """Invalid experiment configuration."""
