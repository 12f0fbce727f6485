"""Configuration types and the reduced-unit conventions shared by all modules.

Units: every rate is expressed in units of the single-emitter decay rate
gamma0 and every length in units of the emitter natural wavelength
lambda0, so k0 = 2*pi.  With these conventions the collective dispersion
of a Bloch state reads

    delta_k = delta + (3/2) * Re(Gbar),
    gamma_k = 1 + 3 * Im(Gbar),

where Gbar = lambda0 * G(k_par, omega0) is the dimensionless projected
lattice sum (see :mod:`qelattice.greens`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

TWO_PI = 2.0 * np.pi


class ConfigError(ValueError):
    """Invalid configuration value."""


@dataclass(frozen=True)
class LatticeConfig:
    """Square-lattice geometry and emitter constants.

    period_l           lattice period in units of lambda0
    dipole_orientation unit 3-vector of the transition dipole (in-plane x by default)
    omega0_over_gamma0 ratio of the natural frequency to the decay rate
    """

    period_l: float = 0.5
    dipole_orientation: tuple = (1.0, 0.0, 0.0)
    omega0_over_gamma0: float = 1e6
    lattice_kind: str = "square"

    def __post_init__(self):
        if self.period_l <= 0:
            raise ConfigError(f"period_l must be positive, got {self.period_l}")
        if self.omega0_over_gamma0 <= 0:
            raise ConfigError("omega0_over_gamma0 must be positive")
        if self.lattice_kind != "square":
            raise ConfigError(f"unsupported lattice_kind {self.lattice_kind!r}")
        mu = np.asarray(self.dipole_orientation, dtype=float)
        if mu.shape != (3,) or abs(np.linalg.norm(mu) - 1.0) > 1e-12:
            raise ConfigError("dipole_orientation must be a unit 3-vector (|mu|=1 within 1e-12)")
        object.__setattr__(self, "dipole_orientation", tuple(mu))

    @property
    def mu_hat(self) -> np.ndarray:
        return np.asarray(self.dipole_orientation)


@dataclass(frozen=True)
class DriveConfig:
    """Coherent plane-wave drive: rate omega (gamma0), detuning delta (gamma0),
    in-plane laser wavevector in units of 2*pi/lambda0."""

    omega: complex = 1.0
    delta: float = 0.0
    k_laser_par: tuple = (0.0, 0.0)

    def __post_init__(self):
        kl = np.asarray(self.k_laser_par, dtype=float)
        if kl.shape != (2,):
            raise ConfigError("k_laser_par must be a 2-vector")
        # plane-wave drive must be propagating: |k_L,par| <= k0
        if np.linalg.norm(kl) > 1.0 + 1e-12:
            raise ConfigError("k_laser_par lies outside the light circle (|k| > 2*pi/lambda0)")
        object.__setattr__(self, "k_laser_par", tuple(kl))

    @property
    def k_par(self) -> np.ndarray:
        """Laser in-plane wavevector in absolute reduced units (1/lambda0)."""
        return np.asarray(self.k_laser_par) * TWO_PI


@dataclass(frozen=True)
class UnitContext:
    """Derived constants of the reduced-unit system."""

    k0: float
    omega0: float            # in gamma0
    mu_sq: float             # in eps0*hbar*gamma0*lambda0^3
    coupling_prefactor: float  # (3/2): delta_k = delta + prefactor*Re(Gbar)

    @property
    def wavelength(self) -> float:
        return 1.0


def natural_units(cfg: LatticeConfig) -> UnitContext:
    """Reduced-unit constants for a lattice configuration.

    gamma0 = omega0^3 mu^2 / (3 eps0 hbar pi c^3) fixes
    mu^2 = 3/(8 pi^2) in units of eps0*hbar*gamma0*lambda0^3, and
    omega0^2 mu^2/(hbar eps0 c^2) = (3/2) gamma0 lambda0, which is the
    prefactor multiplying the dimensionless lattice sum everywhere.
    """
    return UnitContext(
        k0=TWO_PI,
        omega0=cfg.omega0_over_gamma0,
        mu_sq=3.0 / (8.0 * np.pi**2),
        coupling_prefactor=1.5,
    )


# ---------------------------------------------------------------------------
# config-file (de)serialization
#
# Schema (all keys optional, flat JSON or YAML mapping):
#   period_l:            float        lattice period / lambda0
#   dipole_orientation:  [x, y, z]    unit vector
#   omega0_over_gamma0:  float
#   omega:               float or [re, im]   drive rate / gamma0
#   delta:               float        detuning / gamma0
#   k_laser_par:         [kx, ky]     in units of 2*pi/lambda0
# ---------------------------------------------------------------------------

_LATTICE_KEYS = {"period_l", "dipole_orientation", "omega0_over_gamma0", "lattice_kind"}
_DRIVE_KEYS = {"omega", "delta", "k_laser_par"}


def _coerce_complex(v):
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(v[0], v[1])
    return complex(v)


def read_mapping(path) -> dict:
    """Parse a JSON or YAML config file into a plain mapping."""
    path = Path(path)
    text = path.read_text()
    if path.suffix in (".yaml", ".yml"):
        import yaml

        raw = yaml.safe_load(text) or {}
    else:
        raw = json.loads(text) if text.strip() else {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be a mapping, got {type(raw).__name__}")
    return raw


def load_config(path) -> tuple[LatticeConfig, DriveConfig, dict]:
    """Read a config file into (LatticeConfig, DriveConfig, resolved dict).

    Unknown keys are rejected; missing keys take the documented defaults.
    """
    return config_from_mapping(read_mapping(path))


def config_from_mapping(raw) -> tuple[LatticeConfig, DriveConfig, dict]:
    unknown = set(raw) - _LATTICE_KEYS - _DRIVE_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    lat_kwargs = {k: raw[k] for k in _LATTICE_KEYS if k in raw}
    if "dipole_orientation" in lat_kwargs:
        lat_kwargs["dipole_orientation"] = tuple(lat_kwargs["dipole_orientation"])
    drv_kwargs = {k: raw[k] for k in _DRIVE_KEYS if k in raw}
    if "omega" in drv_kwargs:
        drv_kwargs["omega"] = _coerce_complex(drv_kwargs["omega"])
    if "k_laser_par" in drv_kwargs:
        drv_kwargs["k_laser_par"] = tuple(drv_kwargs["k_laser_par"])
    lattice = LatticeConfig(**lat_kwargs)
    drive = DriveConfig(**drv_kwargs)
    resolved = {
        "period_l": lattice.period_l,
        "dipole_orientation": list(lattice.dipole_orientation),
        "omega0_over_gamma0": lattice.omega0_over_gamma0,
        "lattice_kind": lattice.lattice_kind,
        "omega": [drive.omega.real, drive.omega.imag],
        "delta": drive.delta,
        "k_laser_par": list(drive.k_laser_par),
    }
    return lattice, drive, resolved
