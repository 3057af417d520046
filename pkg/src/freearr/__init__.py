"""Exact analysis of central rank-3 hyperplane arrangements.

Subpackages: scalars (exact fields), arrangement (lattices and invariants),
freeness (Saito certificates), induction (inductive/recursive freeness),
moduli (one-parameter families), cli (command-line front end).
"""

__version__ = "0.1.0"
