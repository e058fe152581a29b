"""Limits of translation-length functions along rational curves of SL2(C) representations.

Three engines: exact valuations of trace functions, exact tree geometry on
limit metrics, and double-precision hyperbolic geometry in upper half-space.
"""
from .curve import End, RepCurve, curve_from_strings, load_curve_spec, parse_curve_spec
from .limits import (blows_up, irreducibility_probe, limit_length, limit_metric,
                     numeric_length_samples, orbit_limit_length)
from .words import Alphabet, Word, enumerate_ball, parse_word

__all__ = [
    "End", "RepCurve", "curve_from_strings", "load_curve_spec", "parse_curve_spec",
    "blows_up", "irreducibility_probe", "limit_length", "limit_metric",
    "numeric_length_samples", "orbit_limit_length",
    "Alphabet", "Word", "enumerate_ball", "parse_word",
]
