"""Exact homological toolkit for diagram algebras."""
