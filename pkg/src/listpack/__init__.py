"""Multiple-packing bounds and list-decoding error exponents."""

__version__ = "0.1.0"
