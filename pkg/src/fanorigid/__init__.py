"""Exact verification toolkit for birational rigidity of singular Fano hypersurfaces."""

__version__ = "0.1.0"
