"""Clustering toolkit for binary-response latent class models.

Thin wrapper around the compiled extension module.
"""

from _lcmclust import *  # noqa: F401,F403
from _lcmclust import __version__  # noqa: F401
