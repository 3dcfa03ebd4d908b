"""planar-decomp - certified (2,1)-decompositions of plane graphs."""

__version__ = "0.1.0"
