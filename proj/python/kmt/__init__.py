# SPDX-License-Identifier: MIT
"""Kleene algebra modulo theories: equivalence, emptiness, and normal forms
for KAT terms over pluggable client theories."""

try:
    from ._kmt import (
        FuelExhausted,
        ParseError,
        Session,
        TheoryError,
        theories,
    )
except ImportError:  # in-tree builds put _kmt next to the package on sys.path
    from _kmt import (
        FuelExhausted,
        ParseError,
        Session,
        TheoryError,
        theories,
    )

__all__ = ["Session", "theories", "ParseError", "TheoryError", "FuelExhausted"]
__version__ = "0.1.0"
