"""Exception hierarchy shared by every module."""


class QBCNError(Exception):
    """Base class for all library errors."""


class ZeroArgumentError(QBCNError, ValueError):
    """A coordinate or parameter that must be nonzero was zero."""


class PoleError(QBCNError, ZeroDivisionError):
    """A denominator q-Pochhammer or theta factor vanished."""


class DomainError(QBCNError, ValueError):
    """Parameters lie outside the region where a formula is valid."""


class DivergentSeriesError(DomainError):
    """A bilateral series was requested outside its convergence strip."""


class NonGenericError(QBCNError, ValueError):
    """Parameters are too close to a degenerate (non-generic) configuration."""


class DegenerateZError(QBCNError, ValueError):
    """The Weyl denominator at z is too small to divide by."""


class UnconvergedError(QBCNError, RuntimeError):
    """A lattice sum did not reach its shell-decay target within the radius."""


class ConfigError(QBCNError, ValueError):
    """Invalid harness configuration."""
