"""Spectra of diagonal comb graphs: builders, eigenvalue solvers, bounds."""

from ._combspec import *  # noqa: F401,F403
from ._combspec import __doc__  # noqa: F401
