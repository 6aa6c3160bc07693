"""Octode - calculus and differential equations over Cayley-Dickson algebras"""

__version__ = "0.1.0"
