"""Python bindings for the hullcap solvers.

Masks and fields are exchanged as NumPy arrays shaped like the grid
(axis 0 first); grids are opaque handles from ``box_grid`` or ``make_grid``.
"""

from ._hullcap import *  # noqa: F401,F403
from ._hullcap import __version__  # noqa: F401
