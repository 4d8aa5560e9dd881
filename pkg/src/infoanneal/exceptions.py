"""Semantic exceptions raised by the solvers and loaders."""


class InfoAnnealError(Exception):
    """Base class for all package errors."""


class DataFormatError(InfoAnnealError, ValueError):
    """A joint-distribution file or array violates the format contract."""


class DimensionMismatchError(InfoAnnealError, ValueError):
    """Joint distribution and quantizer shapes are incompatible."""


class NonConvergenceError(InfoAnnealError, RuntimeError):
    """A solver stopped before reaching its tolerance.

    Carries the last residual so callers can decide whether to retry
    with a smaller continuation step.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class InfeasibleTargetError(InfoAnnealError, ValueError):
    """The requested information level exceeds what any quantizer can attain."""


class DegenerateKernelError(InfoAnnealError, ValueError):
    """The constraint gradient vanishes, so the constrained kernel is not defined.

    Happens at the uniform quantizer, where the gradient of I(X;Y_N) is
    identically zero.
    """
