"""
Semi-harmonic well toolkit - Main Package
"""

__version__ = "1.0.0"
__author__ = "Semi-harmonic well toolkit developers"
