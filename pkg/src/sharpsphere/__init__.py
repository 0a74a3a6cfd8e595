"""Sharp sphere-extension constants, Funk-Hecke eigenvalues and numerical
verification of the associated inequalities."""

__version__ = "0.1.0"
