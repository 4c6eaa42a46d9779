"""Exact rational Lie algebra computations: linear algebra, structure constants, reductions, invariants."""
