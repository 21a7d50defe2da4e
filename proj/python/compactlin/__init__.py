"""Compact linearization of binary quadratic programs with assignment constraints."""

from ._compactlin import *  # noqa: F401,F403
from ._compactlin import __doc__  # noqa: F401

__version__ = "0.1.0"
