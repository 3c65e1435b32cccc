"""Exact mode algebra, Fock-space and certificate tools for the conformally
covariant derivatives of the chiral U(1) current."""

__version__ = "0.1.0"
