"""Error codes and exceptions raised while stepping a cluster"""
from enum import IntEnum


__all__ = ['ErrorCode', 'StepError', 'DegenerateSimplexError', 'PicardConvergenceError',
           'SingularSystemError', 'UnsupportedConfigurationError', 'ClusterValidationError',
           'ConfigError']


class ErrorCode(IntEnum):
    """Outcome of a command; the values double as process exit codes"""
    Success = 0
    ConfigError = 1
    SolverFailure = 2


class StepError(RuntimeError):
    """General time-step failure with optional custom message"""

    def __init__(self, msg=None, step=None, time=None, dt=None):
        self.step = step
        self.time = time
        self.dt = dt
        message = "Time step failed"
        if step is not None:
            message += " at step %d" % step
        if time is not None:
            message += "\nTime: %s,\ttimestep dt: %s" % (time, dt)
        if msg:
            message += "\n" + msg
        super(StepError, self).__init__(message)


class DegenerateSimplexError(StepError):
    """An element of the cluster collapsed to zero measure"""

    def __init__(self, surface=None, element=None, measure=None, **kwargs):
        msg = "degenerate simplex"
        if surface is not None:
            msg += " (surface %d, element %d, measure %g)" % (surface, element, measure)
        super(DegenerateSimplexError, self).__init__(msg, **kwargs)


class PicardConvergenceError(StepError):
    """The lagged Picard iteration did not reach its tolerance"""

    def __init__(self, iterations, displacement, tol, **kwargs):
        msg = ("Picard iteration did not converge in %d iterations "
               "(last update %g > tol %g). Try a smaller time step dt" % (iterations, displacement, tol))
        super(PicardConvergenceError, self).__init__(msg, **kwargs)


class SingularSystemError(StepError):
    """The assembled linear system could not be factorised"""

    def __init__(self, reason=None, **kwargs):
        msg = "singular linear system"
        if reason:
            msg += ": %s" % reason
        super(SingularSystemError, self).__init__(msg, **kwargs)


class UnsupportedConfigurationError(RuntimeError):
    """Configuration the discretisation or a generator cannot represent"""
    pass


class ClusterValidationError(ValueError):
    """A cluster failed validation; carries the report"""

    def __init__(self, report):
        self.report = report
        super(ClusterValidationError, self).__init__(
            "Invalid cluster:\n" + "\n".join(report.violations))


class ConfigError(ValueError):
    """Malformed simulation configuration"""
    pass
