"""Hurst exponent estimation from quantiles and trimmed means of discretely
filtered sample paths of locally self-similar Gaussian processes."""

from ._hurstq import *  # noqa: F401,F403
from ._hurstq import __doc__  # noqa: F401

__version__ = "0.1.0"
