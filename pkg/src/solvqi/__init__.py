"""
Solvable QI

Exact rational computations on completely solvable Lie algebras: the rho1 and
rho-infinity reductions, Heintze invariants, catalog matching and certified
quasiisometry verdicts.
"""

__version__ = '0.1.0'
