"""Hypertree posets, cyclic hypertrees and PreLie-flavoured characters, computed exactly."""

__version__ = "0.1.0"
