"""Closed vortex filament dynamics on the periodic continuous Heisenberg spin chain."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
