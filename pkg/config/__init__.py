"""Configuration package for the nsym-bessel toolkit."""
