"""Domain errors raised across the package."""


class DomainError(Exception):
    """Base class for failures that are a property of the model, not of usage."""


class ExceptionalPointError(DomainError, ValueError):
    """k = +-1: the Ising and Cubic lines run off to infinity."""


class DegenerateRootError(DomainError, ArithmeticError):
    """The leading-order system has a singular or collapsed root structure."""


class ConvergenceError(DomainError, RuntimeError):
    """Newton iteration did not reach the requested residual."""
