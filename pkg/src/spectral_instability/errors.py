"""Exception hierarchy shared by all modules.

The split mirrors the two failure classes the command line distinguishes:
invalid inputs (``DomainError``, exit code 1) and computations that ran but
did not reach the promised accuracy (``AccuracyError``, exit code 2).
"""


class SpectralInstabilityError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SpectralInstabilityError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(DomainError):
    """A configuration object violates one of its invariants."""


class BranchCutError(DomainError):
    """A square-root branch cannot be selected (point on or near a cut)."""


class AccuracyError(SpectralInstabilityError):
    """A numerical result failed its accuracy contract."""


class ConvergenceError(AccuracyError):
    """An iterative scheme exhausted its budget.

    Carries the best estimate obtained so far in ``best_estimate`` so a
    caller can decide whether the partial result is still usable.
    """

    def __init__(self, msg, best_estimate=None):
        super().__init__(msg)
        self.best_estimate = best_estimate


class RefusalError(SpectralInstabilityError):
    """An operation was requested in a regime where its output is undefined
    (e.g. summing a series where it does not converge)."""
