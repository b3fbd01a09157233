from . import timer  # noqa
