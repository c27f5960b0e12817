"""Threshold call admission control performance lab (Python bindings)."""

from ._cacperf import *  # noqa: F401,F403
from ._cacperf import __doc__  # noqa: F401

__version__ = "0.3.0"
