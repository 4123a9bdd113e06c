"""Unitals, their bipartite (non-)incidence graphs, and certified
vertex-isoperimetric bounds."""

__version__ = "0.1.0"
