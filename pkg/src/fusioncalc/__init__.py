"""Workbench for a concurrent-realizability calculus.

Processes with fusions (pi-terms paired with symbolic equivalence
relations on names), their binding/composition/reduction operators,
extraction of linear-logic realizers as fusion combinators, and
finite-scale checkers for the pole semantics and conjunctive algebras.
"""

__version__ = "0.1.0"
