from bubbleflow.cluster import *  # noqa
from bubbleflow.kernels import *  # noqa
from bubbleflow.discretization import *  # noqa
from bubbleflow.solver import *  # noqa
from bubbleflow.diagnostics import *  # noqa
from bubbleflow.scenarios import *  # noqa
from bubbleflow.clusterfile import *  # noqa
from bubbleflow.config import *  # noqa
from bubbleflow.scripts import *  # noqa
from bubbleflow.tools import *  # noqa
