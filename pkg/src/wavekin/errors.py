"""Exception types shared across the package."""


class WavekinError(Exception):
    """Base class for all package errors."""


class ConfigError(WavekinError, ValueError):
    """A configuration or hypothesis check failed before any numerics ran."""


class DomainError(WavekinError, ValueError):
    """An argument lies outside the domain of an operation (poles, off-grid supports)."""


class UnsupportedOrderError(DomainError):
    """Requested a Sobolev order the local formulas do not cover."""


class NumericalAbort(WavekinError, RuntimeError):
    """A computation was stopped because its numerical monitors tripped."""


class QuadratureError(NumericalAbort):
    """Quadrature did not reach the requested tolerance.

    Attributes
    ----------
    estimate : float or ndarray
        The achieved error estimate (scalar, per node or per mode).
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ContractError(WavekinError, ValueError):
    """Arrays do not match the grid they are attached to."""
