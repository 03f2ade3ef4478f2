"""Cross sections, mean free paths and the coherence scales they set.

All quantities are SI.  The Coulomb cross section uses ``m v^2 = f k T``
with ``f = kinetic_factor``; the default ``f = 3`` is the mean thermal
kinetic energy ``(1/2) m <v^2> = (3/2) k T``.
"""
from dataclasses import dataclass
import math

from .constants import C_LIGHT, E_CHARGE, EPSILON_0, HBAR, K_BOLTZMANN, M_ELECTRON

MIN_TEMPERATURE = 1.0  # K; the Coulomb cross section diverges as T -> 0
DEFAULT_KINETIC_FACTOR = 3.0


@dataclass(frozen=True)
class MediumSpec:
    """Number densities (m^-3), temperature (K) and Coulomb logarithm."""

    n_e: float = 4e17
    n_p: float = 4e17
    n_gamma: float = 4e26
    temperature: float = 3000.0
    coulomb_log: float = 10.0

    def __post_init__(self):
        if min(self.n_e, self.n_p, self.n_gamma) < 0:
            raise ValueError("densities must be non-negative")
        if not self.temperature > 0:
            raise ValueError("temperature must be positive")
        if self.coulomb_log < 0:
            raise ValueError("coulomb_log must be non-negative")


@dataclass(frozen=True)
class CoherenceReport:
    l: float
    gamma_packet: float
    delta_p: float
    delta_e: float
    tau: float

    def identity_errors(self, hbar: float = HBAR) -> dict:
        """Relative deviations of the defining identities."""
        return {
            "gamma": abs(self.gamma_packet * math.sqrt(2) / self.l - 1),
            "delta_p_l": abs(self.delta_p * self.l / hbar - 1),
            "delta_e_tau": abs(self.delta_e * self.tau / hbar - 1),
        }


def classical_electron_radius(charge=E_CHARGE, mass=M_ELECTRON, epsilon0=EPSILON_0, c=C_LIGHT) -> float:
    return charge**2 / (4 * math.pi * epsilon0 * mass * c**2)


def sigma_thomson(charge=E_CHARGE, mass=M_ELECTRON, epsilon0=EPSILON_0, c=C_LIGHT) -> float:
    """``8 pi r_e^2 / 3``."""
    r = classical_electron_radius(charge, mass, epsilon0, c)
    return 8 * math.pi * r * r / 3


def sigma_rutherford(temperature: float, coulomb_log: float, kinetic_factor: float = DEFAULT_KINETIC_FACTOR,
                     charge=E_CHARGE, epsilon0=EPSILON_0) -> float:
    """``4 pi (e^2 / (4 pi eps0 m v^2))^2 log(Lambda)`` with ``m v^2 = f k T``."""
    if not temperature >= MIN_TEMPERATURE:
        raise ValueError(f"temperature must be at least {MIN_TEMPERATURE} K")
    if coulomb_log < 0:
        raise ValueError("coulomb_log must be non-negative")
    if not kinetic_factor > 0:
        raise ValueError("kinetic_factor must be positive")
    mv2 = kinetic_factor * K_BOLTZMANN * temperature
    b = charge**2 / (4 * math.pi * epsilon0 * mv2)
    return 4 * math.pi * b * b * coulomb_log


def mean_free_path(sigma: float, n: float) -> float:
    """``l = 1 / (sigma n)``."""
    if not (sigma > 0 and n > 0):
        raise ValueError("sigma and n must be positive")
    return 1.0 / (sigma * n)


def thermal_speed(temperature: float, mass: float = M_ELECTRON,
                  kinetic_factor: float = DEFAULT_KINETIC_FACTOR) -> float:
    """Speed with ``m v^2 = f k T``."""
    if not (temperature > 0 and mass > 0):
        raise ValueError("temperature and mass must be positive")
    return math.sqrt(kinetic_factor * K_BOLTZMANN * temperature / mass)


def coherence_from_path(l: float, v: float, hbar: float = HBAR) -> CoherenceReport:
    """Packet size and uncertainties set by a mean free path ``l``.

    ``delta_p = hbar / l``, ``delta_E = v delta_p``, ``gamma = l / sqrt(2)``
    and ``tau = l / v`` so that ``delta_E tau = hbar``.
    """
    if not (l > 0 and v > 0 and hbar > 0):
        raise ValueError("l, v and hbar must be positive")
    dp = hbar / l
    return CoherenceReport(l=l, gamma_packet=l / math.sqrt(2), delta_p=dp, delta_e=v * dp, tau=l / v)


def collision_ratio(l_th: float, l_ru: float) -> float:
    """Mean number of Coulomb collisions per Thomson scattering."""
    if not (l_th > 0 and l_ru > 0):
        raise ValueError("path lengths must be positive")
    return l_th / l_ru


@dataclass(frozen=True)
class MediumReport:
    sigma_thomson: float
    sigma_rutherford: float
    l_thomson: float
    l_rutherford: float
    n_collisions: float
    electron_speed: float
    rutherford: CoherenceReport
    thomson: CoherenceReport


def analyse(medium: MediumSpec, kinetic_factor: float = DEFAULT_KINETIC_FACTOR) -> MediumReport:
    """Cross sections, paths and coherence scales of a thermal electron."""
    s_th = sigma_thomson()
    s_ru = sigma_rutherford(medium.temperature, medium.coulomb_log, kinetic_factor)
    l_th = mean_free_path(s_th, medium.n_gamma)
    l_ru = mean_free_path(s_ru, medium.n_p)
    v = thermal_speed(medium.temperature, kinetic_factor=kinetic_factor)
    return MediumReport(
        sigma_thomson=s_th,
        sigma_rutherford=s_ru,
        l_thomson=l_th,
        l_rutherford=l_ru,
        n_collisions=collision_ratio(l_th, l_ru),
        electron_speed=v,
        rutherford=coherence_from_path(l_ru, v),
        thomson=coherence_from_path(l_th, v),
    )
