"""Framed quiver representations, theta-stability and matrix pencils in exact arithmetic."""

__version__ = "0.1.0"
