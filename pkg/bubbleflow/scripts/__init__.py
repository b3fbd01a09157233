from .run_cluster import *  # NOQA
