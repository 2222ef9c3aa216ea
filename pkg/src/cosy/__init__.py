"""Exact cosymplectic geometry on Lie-algebra models of solvmanifolds and flat tori."""

__version__ = "0.1.0"
