"""Exact q-series engine for the multiparameter Bailey pair family identities."""
from .errors import QSeriesError
from .series import BiSeries, PochSpec, INF, poch, invert, triple_product, theta_sum

__version__ = "0.1.0"
