"""Sublinear-time property testing for sparse graphs."""
