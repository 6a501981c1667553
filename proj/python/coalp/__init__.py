"""Python interface to the parallel coinductive derivation engine."""

try:
    from ._coalp import ModeError, generate, ground_provable, solve
except ImportError:  # in-tree builds put the extension on sys.path directly
    from _coalp import ModeError, generate, ground_provable, solve

__all__ = ["ModeError", "generate", "ground_provable", "solve"]
