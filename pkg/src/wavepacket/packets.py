"""Gaussian wave packets: construction, free evolution and moments.

Packets use the convention

    psi(x, 0) = N * H_m((x - x0) / gamma) * exp(i p0 (x - x0) / hbar - (x - x0)**2 / (2 gamma**2))

so that a minimum packet (m = 0) has ``delta_x = gamma / sqrt(2)`` and
``delta_p = hbar / (sqrt(2) gamma)``.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.special import erf

from .errors import CoverageError, EmptyBranchError
from .quadrature import derivative, odd, simpson, simpson_weights

MAX_HERMITE_ORDER = 8
EMPTY_BRANCH_FRACTION = 1e-6


@dataclass(frozen=True)
class PacketSpec:
    x0: float = 0.0
    p0: float = 0.0
    gamma: float = 1.0
    m_order: int = 0
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("x0", "p0", "gamma", "mass", "hbar"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if int(self.m_order) != self.m_order or self.m_order < 0:
            raise ValueError("m_order must be a non-negative integer")

    @property
    def k0(self) -> float:
        return self.p0 / self.hbar

    @property
    def normalization(self) -> float:
        m = int(self.m_order)
        return (math.pi * self.gamma**2) ** -0.25 / math.sqrt(2.0**m * math.factorial(m))

    def velocity(self) -> float:
        return self.p0 / self.mass


@dataclass(frozen=True, eq=False)
class SampledWave:
    """Complex amplitudes on a uniform position grid at one instant."""

    grid: np.ndarray
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or grid.size < 3 or values.shape != grid.shape:
            raise ValueError("grid and values must be 1D arrays of equal length (>= 3)")
        steps = np.diff(grid)
        if np.any(steps <= 0):
            raise ValueError("grid must be strictly increasing")
        h = (grid[-1] - grid[0]) / (grid.size - 1)
        # coordinate rounding contributes ~eps * |x| per sample
        tol = max(1e-12 * h, 8 * np.finfo(float).eps * np.max(np.abs(grid)))
        if np.max(np.abs(steps - h)) > tol:
            raise ValueError("grid must be uniformly spaced")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        n = self.norm()
        if not (math.isfinite(n) and n > 0):
            raise ValueError("wave must have a finite, positive squared norm")

    @property
    def spacing(self) -> float:
        return (self.grid[-1] - self.grid[0]) / (self.grid.size - 1)

    def norm(self) -> float:
        return float(simpson(np.abs(self.values) ** 2, self.spacing))


@dataclass(frozen=True)
class MomentReport:
    mean_x: float
    mean_p: float
    delta_x: float
    delta_p: float
    product: float
    norm: float


def _hermite(m: int, s):
    coeffs = np.zeros(m + 1)
    coeffs[m] = 1.0
    return np.polynomial.hermite.hermval(s, coeffs)


def momentum_amplitude(spec: PacketSpec, k) -> np.ndarray:
    """Momentum-space amplitude ``phi(k)`` with ``psi(x) = (2 pi)^-1/2 int phi(k) e^{ik(x-x0)} dk``."""
    m = int(spec.m_order)
    q = (np.asarray(k, dtype=float) - spec.k0) * spec.gamma
    scale = (spec.gamma**2 / math.pi) ** 0.25 / math.sqrt(2.0**m * math.factorial(m))
    return (-1j) ** m * scale * _hermite(m, q) * np.exp(-0.5 * q * q)


def _closed_form(spec: PacketSpec, x: np.ndarray) -> np.ndarray:
    u = x - spec.x0
    s = u / spec.gamma
    return (
        spec.normalization
        * _hermite(int(spec.m_order), s)
        * np.exp(1j * spec.k0 * u - 0.5 * s * s)
    )


def _free_quadrature(spec: PacketSpec, x: np.ndarray, t: float, rtol: float, max_doublings: int = 8):
    v = spec.hbar / spec.mass
    half = (8.0 + 2.0 * math.sqrt(spec.m_order + 1)) / spec.gamma
    k_lo, k_hi = spec.k0 - half, spec.k0 + half
    # largest phase slope d/dk [k (x - x0) - v k^2 t / 2] over the band
    reach = np.max(np.abs(x - spec.x0)) + v * max(abs(k_lo), abs(k_hi)) * abs(t) + 10 * spec.gamma
    n = odd(max(65, int(math.ceil(2 * half * reach / math.pi)) + 1))
    previous = None
    for _ in range(max_doublings + 1):
        k = np.linspace(k_lo, k_hi, n)
        weights = simpson_weights(n, k[1] - k[0]) * momentum_amplitude(spec, k)
        weights = weights * np.exp(-0.5j * v * k * k * t) / math.sqrt(2 * math.pi)
        out = np.empty(x.shape, dtype=complex)
        chunk = max(1, 2_000_000 // n)
        for start in range(0, x.size, chunk):
            xs = x[start : start + chunk] - spec.x0
            out[start : start + chunk] = np.exp(1j * np.outer(xs, k)) @ weights
        if previous is not None:
            scale = max(np.max(np.abs(out)), 1e-300)
            if np.max(np.abs(out - previous)) <= rtol * scale:
                return out
        previous = out
        n = 2 * n - 1
    return previous


def evaluate_packet(spec: PacketSpec, x, t: float = 0.0, rtol: float = 1e-10):
    """Amplitude of the freely evolving packet at positions ``x`` and time ``t``.

    At ``t = 0`` the closed form is used; otherwise the momentum-space
    integral over ``exp(i k x - i E(k) t / hbar)`` is evaluated by composite
    Simpson quadrature, doubling the grid until successive results agree to
    ``rtol`` relative to the peak amplitude.
    """
    t = float(t)
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)) or not math.isfinite(t):
        raise ValueError("x and t must be finite")
    flat = np.atleast_1d(xa).ravel()
    if t == 0.0:
        out = _closed_form(spec, flat)
    else:
        out = _free_quadrature(spec, flat, t, rtol)
    return out.reshape(xa.shape) if xa.ndim else complex(out[0])


def free_variance_x(spec: PacketSpec, t: float) -> float:
    """Exact position variance of a freely evolving minimum packet."""
    return spec.gamma**2 / 2 + (spec.hbar * t) ** 2 / (2 * spec.mass**2 * spec.gamma**2)


def sample_packet(spec: PacketSpec, t: float = 0.0, n: int = 2001, span: float | None = None) -> SampledWave:
    """Sample a packet on a grid centred on its classical position."""
    if span is None:
        width = math.sqrt(free_variance_x(spec, t)) * math.sqrt(2 * spec.m_order + 1)
        span = 12.0 * width + 4.0 * math.sqrt(spec.m_order + 1) * spec.gamma
    centre = spec.x0 + spec.velocity() * t
    x = np.linspace(centre - span, centre + span, n)
    return SampledWave(x, evaluate_packet(spec, x, t), t)


def _carrier(psi: np.ndarray, h: float) -> float:
    return float(np.angle(np.sum(np.conj(psi[:-1]) * psi[1:]))) / h


def compute_moments(wave: SampledWave, window=None, hbar: float = 1.0) -> MomentReport:
    """Position and momentum moments of a sampled wave inside ``window``.

    Position moments are Simpson quadratures.  Momentum moments use an
    8th-order centred derivative of the wave after removing its dominant
    carrier ``exp(i k_c x)``; the variance is invariant under that shift
    and the mean is restored afterwards.  ``<p^2>`` is evaluated as
    ``hbar^2 int |psi'|^2``, which assumes the wave is negligible at the
    window edges.
    """
    x, psi, h = wave.grid, wave.values, wave.spacing
    if window is None:
        sel = np.ones(x.size, dtype=bool)
    else:
        lo, hi = window
        sel = (x >= lo) & (x <= hi)
    if np.count_nonzero(sel) < 3:
        raise EmptyBranchError("window does not intersect the grid")
    dens = np.abs(psi) ** 2
    total = simpson(dens, h)
    norm = simpson(dens[sel], h)
    if not norm > EMPTY_BRANCH_FRACTION * total:
        raise EmptyBranchError(f"window holds {norm / total if total else 0:.3e} of the norm")

    xs = x[sel]
    mean_x = simpson(xs * dens[sel], h) / norm
    var_x = simpson((xs - mean_x) ** 2 * dens[sel], h) / norm

    kc = _carrier(psi, h)
    phi = psi * np.exp(-1j * kc * x)
    dphi = derivative(phi, h)
    shift = simpson(np.imag(np.conj(phi) * dphi)[sel], h) / norm
    k2 = simpson(np.abs(dphi[sel]) ** 2, h) / norm
    var_k = max(k2 - shift**2, 0.0)

    delta_x = math.sqrt(max(var_x, 0.0))
    delta_p = hbar * math.sqrt(var_k)
    return MomentReport(
        mean_x=float(mean_x),
        mean_p=float(hbar * (kc + shift)),
        delta_x=delta_x,
        delta_p=delta_p,
        product=delta_x * delta_p,
        norm=float(norm),
    )


def hermite_uncertainty_product(m_order: int, gamma: float = 1.0, hbar: float = 1.0, n: int = 4001) -> float:
    """Numerically computed ``delta_x * delta_p`` of an order-m Hermite-modulated packet."""
    if int(m_order) != m_order or not 0 <= m_order <= MAX_HERMITE_ORDER:
        raise ValueError(f"m_order must be an integer in [0, {MAX_HERMITE_ORDER}]")
    spec = PacketSpec(gamma=gamma, m_order=int(m_order), hbar=hbar)
    span = (10.0 + math.sqrt(2 * m_order + 1)) * gamma
    x = np.linspace(-span, span, n)
    return compute_moments(SampledWave(x, evaluate_packet(spec, x)), hbar=hbar).product


@dataclass(frozen=True)
class PhaseGrid:
    """Quadrature over coherent-state labels (P0, X0)."""

    x_min: float
    x_max: float
    n_x: int
    p_min: float
    p_max: float
    n_p: int
    gamma: float = 1.0

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValueError("phase grid ranges must be non-empty")
        if self.n_x < 5 or self.n_p < 5:
            raise ValueError("phase grid needs at least 5 points per axis")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")

    def refined(self, factor: int = 2) -> "PhaseGrid":
        return PhaseGrid(
            self.x_min, self.x_max, factor * (self.n_x - 1) + 1,
            self.p_min, self.p_max, factor * (self.n_p - 1) + 1, self.gamma,
        )


def _coverage_deficit(wave: SampledWave, pg: PhaseGrid, hbar: float) -> tuple[float, float]:
    x, h = wave.grid, wave.spacing
    dens = np.abs(wave.values) ** 2
    norm = simpson(dens, h)
    # fraction of the coherent-state weight exp(-(x-X)^2/g^2)/(sqrt(pi) g) captured by [x_min, x_max]
    g = pg.gamma
    kx = 0.5 * (erf((pg.x_max - x) / g) - erf((pg.x_min - x) / g))
    deficit_x = simpson(dens * (1 - kx), h) / norm

    n = x.size
    p = 2 * np.pi * hbar * np.fft.fftfreq(n, d=h)
    pdens = np.abs(np.fft.fft(wave.values)) ** 2
    gp = hbar / g
    kp = 0.5 * (erf((pg.p_max - p) / gp) - erf((pg.p_min - p) / gp))
    deficit_p = float(np.sum(pdens * (1 - kp)) / np.sum(pdens))
    return float(deficit_x), deficit_p


def _coherent_overlaps(wave: SampledWave, pg: PhaseGrid, hbar: float):
    """<P0, X0 | wave> on the phase grid, shape (n_p, n_x)."""
    x, h = wave.grid, wave.spacing
    X = np.linspace(pg.x_min, pg.x_max, pg.n_x)
    P = np.linspace(pg.p_min, pg.p_max, pg.n_p)
    norm = (math.pi * pg.gamma**2) ** -0.25
    w = simpson_weights(x.size, h) * wave.values
    envelope = np.exp(-((x[:, None] - X[None, :]) ** 2) / (2 * pg.gamma**2)) * w[:, None]
    fourier = np.exp(-1j * np.outer(P, x) / hbar)
    return norm * np.exp(1j * np.outer(P, X) / hbar) * (fourier @ envelope), P, X


def completeness_residual(f: SampledWave, g: SampledWave, phase_grid: PhaseGrid, hbar: float = 1.0,
                          coverage_tol: float = 1e-8) -> complex:
    """Resolution-of-identity residual for a pair of states.

    Returns ``int dP0 dX0 / (2 pi hbar) <f|P0,X0><P0,X0|g> - <f|g>``.
    """
    if f.grid.shape != g.grid.shape or not np.allclose(f.grid, g.grid, rtol=0, atol=1e-12 * f.spacing):
        raise ValueError("f and g must share a grid")
    for name, wave in (("f", f), ("g", g)):
        dx, dp = _coverage_deficit(wave, phase_grid, hbar)
        if dx > coverage_tol or dp > coverage_tol:
            raise CoverageError(
                f"phase grid does not cover {name}: position deficit {dx:.2e}, momentum deficit {dp:.2e}"
            )
    of, P, X = _coherent_overlaps(f, phase_grid, hbar)
    og, _, _ = _coherent_overlaps(g, phase_grid, hbar)
    wp = simpson_weights(P.size, P[1] - P[0])
    wx = simpson_weights(X.size, X[1] - X[0])
    resolved = wp @ (np.conj(of) * og) @ wx / (2 * math.pi * hbar)
    direct = simpson(np.conj(f.values) * g.values, f.spacing)
    return complex(resolved - direct)
