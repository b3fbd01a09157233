from .anisotropy import *  # noqa
from .error import *  # noqa
from .geometry import *  # noqa
