"""Polynomial selection and small-scale NFS discrete logarithms in F_{p^n}."""

__version__ = "0.1.0"
