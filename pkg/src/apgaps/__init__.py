"""Admissible-tuple sieve machinery for primes in arithmetic progressions."""

__version__ = "0.1.0"
