"""Physical constants and unit systems.

CODATA 2018 values, rounded to 7 significant digits.
"""
from dataclasses import dataclass

HBAR = 1.054572e-34  # J s
C_LIGHT = 2.997925e8  # m / s
E_CHARGE = 1.602177e-19  # C
EPSILON_0 = 8.854188e-12  # F / m
MU_0 = 1.256637e-6  # N / A^2
M_ELECTRON = 9.109384e-31  # kg
M_PROTON = 1.672622e-27  # kg
K_BOLTZMANN = 1.380649e-23  # J / K


@dataclass(frozen=True)
class UnitSystem:
    name: str
    hbar: float
    c: float
    epsilon0: float
    electron_mass: float


NATURAL = UnitSystem("natural", hbar=1.0, c=1.0, epsilon0=1.0, electron_mass=1.0)
SI = UnitSystem("si", hbar=HBAR, c=C_LIGHT, epsilon0=EPSILON_0, electron_mass=M_ELECTRON)

UNIT_SYSTEMS = {"natural": NATURAL, "si": SI}


def unit_system(name: str) -> UnitSystem:
    try:
        return UNIT_SYSTEMS[name]
    except KeyError:
        raise ValueError(f"unknown unit system {name!r}; expected one of {sorted(UNIT_SYSTEMS)}") from None
