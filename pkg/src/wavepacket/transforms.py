"""Width transformation rules for wave packets.

Every map acts on a :class:`WidthState` and returns a new one.  Momentum
widths follow from differentiating the central-momentum relation of each
transformation; position widths follow from the rule
``delta_x' = delta_x * delta_p / delta_p'`` per axis, so every map keeps
``delta_x * delta_p`` fixed.
"""
from dataclasses import dataclass, replace
import math

from .constants import EPSILON_0
from .errors import DomainError

INTERFACE_KINDS = ("electron_metal", "light_dielectric", "light_absorbing")


@dataclass(frozen=True)
class WidthState:
    """Central longitudinal momentum and the four widths of a packet.

    ``energy`` is the local free energy ``sqrt(p^2 c^2 + m^2 c^4)``; the
    potential energy the packet sits in is kept separately in ``offset``.
    """

    p0_l: float
    delta_p_l: float
    delta_p_t: float
    delta_x_l: float
    delta_x_t: float
    mass: float = 1.0
    energy: float | None = None
    offset: float = 0.0
    hbar: float = 1.0
    c: float = 1.0
    physical: bool = True

    def __post_init__(self):
        widths = (self.delta_p_l, self.delta_p_t, self.delta_x_l, self.delta_x_t)
        if not all(math.isfinite(w) and w > 0 for w in widths):
            raise ValueError("all widths must be positive and finite")
        if not (math.isfinite(self.p0_l) and self.mass >= 0 and self.hbar > 0 and self.c > 0):
            raise ValueError("p0_l must be finite, mass >= 0, hbar and c > 0")
        if self.energy is None:
            object.__setattr__(self, "energy", _free_energy(self.p0_l, self.mass, self.c))
        rest = self.mass * self.c**2
        if self.energy < rest * (1 - 1e-12):
            raise ValueError("energy below the rest energy")
        if self.physical:
            bound = 0.5 * self.hbar * (1 - 1e-12)
            if self.delta_x_l * self.delta_p_l < bound or self.delta_x_t * self.delta_p_t < bound:
                raise ValueError("physical state violates delta_x * delta_p >= hbar / 2")

    @classmethod
    def minimum(cls, p0_l: float, delta_p_l: float, delta_p_t: float | None = None, **kw) -> "WidthState":
        """Minimum-uncertainty state: ``delta_x = hbar / (2 delta_p)`` per axis."""
        hbar = kw.get("hbar", 1.0)
        if delta_p_t is None:
            delta_p_t = delta_p_l
        return cls(p0_l, delta_p_l, delta_p_t, hbar / (2 * delta_p_l), hbar / (2 * delta_p_t), **kw)

    @property
    def velocity(self) -> float:
        return self.p0_l * self.c**2 / self.energy

    @property
    def total_energy(self) -> float:
        return self.energy + self.offset

    def products(self) -> tuple[float, float]:
        return self.delta_x_l * self.delta_p_l, self.delta_x_t * self.delta_p_t


@dataclass(frozen=True)
class InterfaceSpec:
    """Material interface crossed at normal incidence.

    ``mu`` and ``eps`` are relative to vacuum; ``rho`` is the resistivity.
    """

    kind: str
    work_function: float = 0.0
    m_eff: float = 1.0
    mu: float = 1.0
    eps: float = 1.0
    rho: float | None = None
    epsilon0: float = EPSILON_0

    def __post_init__(self):
        if self.kind not in INTERFACE_KINDS:
            raise ValueError(f"kind must be one of {INTERFACE_KINDS}")
        if not self.m_eff > 0:
            raise ValueError("m_eff must be positive")
        if not (self.mu > 0 and self.eps > 0 and self.epsilon0 > 0):
            raise ValueError("mu, eps and epsilon0 must be positive")
        if self.kind == "light_absorbing" and not (self.rho is not None and self.rho > 0):
            raise ValueError("rho must be positive for an absorbing medium")


@dataclass(frozen=True)
class InterfaceResult:
    state: WidthState
    lifetime: float | None = None
    energy_width: float | None = None


def _free_energy(p, mass, c):
    return math.hypot(p * c, mass * c * c)


def _rescale(state: WidthState, p0_l, dp_l, dp_t=None, **kw) -> WidthState:
    if dp_t is None:
        dp_t = state.delta_p_t
    if not (dp_l > 0 and dp_t > 0):
        raise DomainError("transformation collapses a momentum width to zero")
    mass = kw.pop("mass", state.mass)
    return replace(
        state,
        p0_l=p0_l,
        delta_p_l=dp_l,
        delta_p_t=dp_t,
        delta_x_l=state.delta_x_l * state.delta_p_l / dp_l,
        delta_x_t=state.delta_x_t * state.delta_p_t / dp_t,
        mass=mass,
        energy=kw.pop("energy", _free_energy(p0_l, mass, state.c)),
        **kw,
    )


def lorentz_boost(state: WidthState, beta: float) -> WidthState:
    """Boost along the longitudinal axis with velocity ``beta * c``.

    ``(E, p)`` and ``(delta_E, delta_p)`` go through the same boost matrix
    with ``delta_E = v delta_p`` at the central momentum.
    """
    if not abs(beta) < 1:
        raise DomainError("|beta| must be below 1")
    if state.offset != 0:
        raise DomainError("boosts apply to free states (offset must be 0)")
    c = state.c
    g = 1.0 / math.sqrt(1.0 - beta * beta)
    e, p = state.energy, state.p0_l
    e_new = g * (e - beta * c * p)
    p_new = g * (p - beta * e / c)
    de = state.velocity * state.delta_p_l
    dp_new = g * abs(state.delta_p_l - beta * de / c)
    return _rescale(state, p_new, dp_new, energy=e_new)


def add_potential_nonrel(state: WidthState, v0: float) -> WidthState:
    """Enter a region where the potential is lower by ``v0``.

    ``p2^2 = p1^2 + 2 m v0`` and ``p1 dp1 = p2 dp2``.
    """
    if state.mass <= 0:
        raise DomainError("the nonrelativistic rule needs a massive state")
    p2sq = state.p0_l**2 + 2 * state.mass * v0
    if not p2sq > 0:
        raise DomainError("classically forbidden: final momentum is imaginary")
    sign = 1.0 if state.p0_l >= 0 else -1.0
    p2 = sign * math.sqrt(p2sq)
    if state.p0_l == 0:
        raise DomainError("momentum-width rule is singular at p0 = 0")
    dp2 = state.delta_p_l * abs(state.p0_l / p2)
    return _rescale(state, p2, dp2, offset=state.offset - v0)


def add_potential_rel(state: WidthState, v0: float) -> WidthState:
    """Relativistic version of :func:`add_potential_nonrel`.

    ``E2 = E1 + v0`` with ``E = sqrt(p^2 c^2 + m^2 c^4)`` and
    ``(p1 / E1) dp1 = (p2 / E2) dp2``.
    """
    c = state.c
    e1 = state.energy
    e2 = e1 + v0
    rest = state.mass * c * c
    if not e2 > rest:
        raise DomainError("final energy does not exceed the rest energy")
    if state.p0_l == 0:
        raise DomainError("momentum-width rule is singular at p0 = 0")
    sign = 1.0 if state.p0_l >= 0 else -1.0
    # kinetic part formed without subtracting the rest energy (p << m c)
    kinetic2 = (state.p0_l * c) ** 2 / (e1 + rest) + v0
    if not kinetic2 > 0:
        raise DomainError("final energy does not exceed the rest energy")
    p2 = sign * math.sqrt(kinetic2 * (e2 + rest)) / c
    dp2 = state.delta_p_l * abs((state.p0_l / e1) / (p2 / e2))
    return _rescale(state, p2, dp2, energy=e2, offset=state.offset - v0)


def scale_transform(state: WidthState, lam: float) -> WidthState:
    """Multiply every momentum by ``lam`` (massless packets only)."""
    if state.mass != 0:
        raise DomainError("scale transformation applies to massless particles only")
    if not lam > 0:
        raise DomainError("lambda must be positive")
    return _rescale(state, lam * state.p0_l, lam * state.delta_p_l, lam * state.delta_p_t)


def cross_interface(state: WidthState, spec: InterfaceSpec) -> InterfaceResult:
    """Carry a packet across a material surface at normal incidence.

    electron_metal
        ``state`` is inside the metal with effective mass ``m_eff``; the
        result is the free electron of mass ``state.mass`` outside.
    light_dielectric, light_absorbing
        ``state`` is a photon in vacuum entering the medium; momenta scale
        by ``1 / sqrt(mu * eps)``.  The absorbing case also reports the
        lifetime ``eps * epsilon0 * rho`` and the energy width ``hbar / tau``.
    """
    if spec.kind == "electron_metal":
        m0, me = state.mass, spec.m_eff
        if m0 <= 0:
            raise DomainError("electron crossing needs a massive state")
        kinetic = spec.work_function + state.p0_l**2 / (2 * me)
        if not kinetic > 0:
            raise DomainError("electron cannot leave the metal: E0 + p^2 / 2 m_eff <= 0")
        if state.p0_l == 0:
            raise DomainError("momentum-width rule is singular at p0 = 0")
        sign = 1.0 if state.p0_l >= 0 else -1.0
        p2 = sign * math.sqrt(2 * m0 * kinetic)
        dp_l = state.delta_p_l * abs(state.p0_l / p2) * m0 / me
        dp_t = state.delta_p_t * math.sqrt(m0 / me)
        return InterfaceResult(_rescale(state, p2, dp_l, dp_t))

    if state.mass != 0:
        raise DomainError("light interfaces need a massless state")
    factor = 1.0 / math.sqrt(spec.mu * spec.eps)
    # photon energy is unchanged; only the momentum feels the medium
    out = _rescale(state, state.p0_l * factor, state.delta_p_l * factor, energy=state.energy)
    if spec.kind == "light_dielectric":
        return InterfaceResult(out)
    tau = spec.eps * spec.epsilon0 * spec.rho
    return InterfaceResult(out, lifetime=tau, energy_width=state.hbar / tau)
