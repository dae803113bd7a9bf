"""Numerical building blocks: Cauchy-type integrals, resolvent functions,
zero finding in rectangles and continuation in the coupling."""
