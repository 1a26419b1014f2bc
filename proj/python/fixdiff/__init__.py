"""Exact semiring fixpoint solver with differentiation."""

try:
    from ._fixdiff import solve, solve_grammar, laws, derivative, star
except ImportError:  # in-tree builds put the extension on PYTHONPATH directly
    from _fixdiff import solve, solve_grammar, laws, derivative, star

__all__ = ["solve", "solve_grammar", "laws", "derivative", "star"]
