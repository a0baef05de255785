"""Numeric layer for hyperelliptic curves."""
