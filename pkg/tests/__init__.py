"""Test package for the nsym-bessel toolkit."""
