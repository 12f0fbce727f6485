"""Panel rendering for the lattice-simulator CSV/JSON outputs.

This package never computes physics: every figure is a pure function of
the CSV files produced by the ``qelat`` command-line tool.
"""

__version__ = "0.1.0"
