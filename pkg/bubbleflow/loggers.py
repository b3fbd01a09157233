"""Package `logger` for bubbleflow, with a `warning_once` level for
conditions that recur every time step"""
import logging

__all__ = ['logger', 'set_verbosity', 'reset_warnings']

warning_once_level = 25


class OnceFilter(object):
    """Drops `warning_once` records whose message was already emitted"""

    def __init__(self):
        self.seen = set()

    def filter(self, record):
        if record.levelno != warning_once_level:
            return True
        msg = record.getMessage()
        if msg in self.seen:
            return False
        self.seen.add(msg)
        return True


def warning_once(self, message, *args, **kws):
    if self.isEnabledFor(warning_once_level):
        self._log(warning_once_level, message, args, **kws)


def set_verbosity(verbose=False):
    """Switch the package logger between INFO and DEBUG output"""
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)


def reset_warnings():
    """Forget the `warning_once` messages shown so far, e.g. at the start of a run"""
    once_filter.seen.clear()


def _make_logger(name):
    log = logging.getLogger(name)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(fmt="%(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO)
    return log


logging.addLevelName(warning_once_level, "WARNING")
logging.Logger.warning_once = warning_once

logger = _make_logger('bubbleflow')
once_filter = OnceFilter()
logger.addFilter(once_filter)
