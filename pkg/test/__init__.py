"""
Test suite for the semi-harmonic well toolkit

Unit tests for the numerics, the configuration layer and the command line.
"""

__version__ = "1.0.0"
