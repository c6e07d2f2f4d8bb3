"""Capacity-region estimation and loss tomography for star-topology
entanglement switching networks."""

from ._core import *  # noqa: F401,F403
