"""Hierarchical wall-clock timers for the assembly/solve pipeline"""
import datetime
import time

from bubbleflow.loggers import logger

__all__ = ['Timer']


class Timer(object):
    """Accumulating timer that can be nested under a parent timer.

    :param name: Label used in reports
    :param parent: Optional parent :class:`Timer`; the parent must be running
                   whenever this timer is started
    :param start: Start the timer immediately
    """

    def __init__(self, name, parent=None, start=True):
        self._start = None
        self._t = 0.
        self._name = name
        self._children = []
        self._parent = parent
        if self._parent:
            self._parent._children.append(self)
        if start:
            self.start()

    @property
    def name(self):
        return self._name

    @property
    def running(self):
        return self._start is not None

    def start(self):
        if self._parent:
            assert self._parent.running, ("Timer '%s' cannot be started. Its parent timer does not run" % self._name)
        self._start = time.time()

    def stop(self):
        assert self.running, ("Timer '%s' was stopped before being started" % self._name)
        self._t += time.time() - self._start
        self._start = None

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, *exc):
        self.stop()
        return False

    def local_time(self):
        return self._t + time.time() - self._start if self.running else self._t

    def report(self, step=0, root_time=0, parent_time=0):
        """Return the timer tree as a list of formatted lines"""
        total = self.local_time()
        if step == 0:
            root_time = total
        share = total / root_time * 100 if root_time > 0 else 100.
        line = '(%3d%%)' % round(share) + '  ' * (step + 1)
        if step > 0:
            line += '(%3d%%) ' % round(total / parent_time * 100 if parent_time > 0 else 100.)
        t_str = '%1.3e s' % total if root_time < 300 else str(datetime.timedelta(seconds=total))
        line += "Timer %s: %s" % (self._name.ljust(20 - 2*step + 7*(step == 0)), t_str)
        lines = [line]
        for child in self._children:
            lines += child.report(step + 1, root_time, total)
        return lines

    def log_tree(self):
        for line in self.report():
            logger.info(line)
