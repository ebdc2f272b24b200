"""Throughput solvers for harvest-then-transmit networks."""

from ._wpcn import *  # noqa: F401,F403
from ._wpcn import __version__  # noqa: F401
