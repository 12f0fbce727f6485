"""Steady-state optical response of driven two-level emitter lattices."""

__version__ = "0.1.0"

from .config import DriveConfig, LatticeConfig, load_config, natural_units

__all__ = [
    "DriveConfig",
    "LatticeConfig",
    "load_config",
    "natural_units",
    "__version__",
]
