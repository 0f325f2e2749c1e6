"""Numerical verification lab for rigidity of spacelike hypersurfaces
in de Sitter space.

Subpackages by concern: ``symfun`` (symmetric functions and positivity
cones of shape operators), ``ambient`` (the de Sitter chart, isometries,
the radial conformal field), ``surfaces``/``geometry`` (graph surfaces
over the sphere and their pointwise geometry), ``transport`` (isometric
pairs via exact jet transport), ``integrals`` (integral identities and
the rigidity experiment), ``cli`` (verification harness).
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401
