"""Tor of trivial modules over diagram algebras and their group quotients."""
