"""Enumeration and limit laws for graph classes closed under minors."""

import mpmath

mpmath.mp.dps = 30

__version__ = "0.1.0"
