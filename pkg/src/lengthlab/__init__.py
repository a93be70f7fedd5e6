"""Executable theory of length functions on finitely generated groups."""
