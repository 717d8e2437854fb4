"""Paranatural transformations, difunctors and their applications over finite categories."""

__version__ = "0.1.0"
