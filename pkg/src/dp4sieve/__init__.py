"""Exact-arithmetic workbench for counting rational curves on a split
quartic del Pezzo surface over F_q(t) and checking sieve / Euler-product
predictions against brute-force truth."""

__version__ = "0.1.0"
