"""Exact local and global formulas for modular heights of unitary Shimura varieties."""

__version__ = "0.1.0"
