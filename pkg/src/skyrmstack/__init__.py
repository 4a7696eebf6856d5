"""Reduced energy model for stacked magnetic skyrmions in ultrathin
ferromagnetic multilayers: interaction kernels, shape-function integrals,
the finite-dimensional stack energy and its minimization."""

__version__ = "0.1.0"
