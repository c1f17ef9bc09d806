"""Desingularized multiple zeta values: word algebra, renormalization, Li-combinations, numerics."""
