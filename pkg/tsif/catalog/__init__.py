"""Signatures, catalog patterns, the brute-force oracle and upper bounds."""
