"""Noncommutative symmetric functions, Bessel functions and theta-specializations."""
