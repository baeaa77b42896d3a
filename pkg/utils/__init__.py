"""Utility modules for the nsym-bessel toolkit."""

from .formatting import Artifact, Formatter

__all__ = ["Artifact", "Formatter"]
