"""Momentum correlation functions of wave-packet sources.

Gaussian momentum profiles use the convention
``F(p) ~ exp(-(p - c)^2 / (2 sigma^2))`` per axis, so the overlap
``int F(p) F*(p - delta)`` falls off as ``exp(-delta^2 / (4 sigma^2))``.
Fitted widths of sampled curves are reported in the same convention:
``C(delta) ~ exp(-delta^2 / (4 w^2))``.

Thermal quantities are dimensionless: momenta and energies in units of
``k_B T`` (with ``c = 1``).
"""
from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .constants import C_LIGHT, K_BOLTZMANN, M_ELECTRON
from .errors import ResolutionError
from .quadrature import gauss_legendre

STATISTICS = ("bose_einstein", "fermi_dirac")
DISPERSIONS = ("massless", "nonrelativistic")
FIT_AGREEMENT = 0.05


class FitQualityWarning(UserWarning):
    pass


# ---------------------------------------------------------------- sources

@dataclass(frozen=True)
class WeightFn:
    """Separable Gaussian momentum profile, normalised to ``int |F|^2 = 1``.

    ``x_center`` puts the packet at a spatial position through the phase
    ``exp(-i p.x_center / hbar)``.
    """

    center: tuple
    sigma: tuple
    x_center: tuple | None = None
    hbar: float = 1.0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        s = np.atleast_1d(np.asarray(self.sigma, dtype=float))
        if s.size == 1 and c.size > 1:
            s = np.full(c.size, s[0])
        if not 1 <= c.size <= 3 or s.size != c.size:
            raise ValueError("center and sigma must have matching dimension 1-3")
        if not np.all(s > 0) or not np.all(np.isfinite(s)) or not np.all(np.isfinite(c)):
            raise ValueError("sigma must be positive and finite")
        x = np.zeros_like(c) if self.x_center is None else np.atleast_1d(np.asarray(self.x_center, dtype=float))
        if x.size != c.size:
            raise ValueError("x_center must match the dimension")
        object.__setattr__(self, "center", tuple(c))
        object.__setattr__(self, "sigma", tuple(s))
        object.__setattr__(self, "x_center", tuple(x))

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def normalization(self) -> float:
        return float(np.prod((math.pi * np.asarray(self.sigma) ** 2) ** -0.25))

    def axis(self, i: int, p) -> np.ndarray:
        """One-axis factor; the full profile is the product over axes."""
        p = np.asarray(p, dtype=float)
        c, s, x = self.center[i], self.sigma[i], self.x_center[i]
        amp = (math.pi * s * s) ** -0.25 * np.exp(-((p - c) ** 2) / (2 * s * s))
        if x == 0.0:
            return amp.astype(complex)
        return amp * np.exp(-1j * p * x / self.hbar)

    def __call__(self, p) -> np.ndarray:
        """Evaluate at points ``p`` of shape ``(..., dim)``."""
        p = np.asarray(p, dtype=float)
        if p.shape[-1] != self.dim:
            raise ValueError(f"expected momenta with trailing dimension {self.dim}")
        out = np.ones(p.shape[:-1], dtype=complex)
        for i in range(self.dim):
            out = out * self.axis(i, p[..., i])
        return out


def _vec(v, dim: int) -> np.ndarray:
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if v.size == 1 and dim > 1:
        v = np.full(dim, v[0])
    if v.size != dim:
        raise ValueError(f"expected a {dim}-vector")
    return v


def packet_correlation(f: WeightFn, p1, p2) -> complex:
    """``C(p1, p2) = F*(p1) F(p2)``."""
    p1, p2 = _vec(p1, f.dim), _vec(p2, f.dim)
    return complex(np.conj(f(p1)) * f(p2))


# ---------------------------------------------------------------- decays

def _overlap_axis(f: WeightFn, g: WeightFn, i: int, delta: float, n: int) -> complex:
    """``int dp f_i(p) g_i*(p - delta)`` by Gauss-Legendre around the product's peak."""
    sf, sg = f.sigma[i], g.sigma[i]
    # product of the two Gaussians peaks between the centres
    w = 1.0 / sf**2 + 1.0 / sg**2
    mid = (f.center[i] / sf**2 + (g.center[i] + delta) / sg**2) / w
    half = 9.0 / math.sqrt(w)
    p, wt = gauss_legendre(n, mid - half, mid + half)
    return complex(np.sum(wt * f.axis(i, p) * np.conj(g.axis(i, p - delta))))


@dataclass(frozen=True)
class DecayKinematics:
    """Nonrelativistic two-body decay ``A -> 1 + C`` with energy release ``q_value``.

    ``p1`` is the measured momentum of particle 1.
    """

    mass_a: float = 2.0
    mass_1: float = 1.0
    mass_c: float = 1.0
    q_value: float = 0.0
    p1: tuple = (0.0,)

    def __post_init__(self):
        if min(self.mass_a, self.mass_1, self.mass_c) <= 0:
            raise ValueError("masses must be positive")

    def mismatch(self, p_a, p_1) -> np.ndarray:
        """``E_A - E_1 - E_C`` with ``p_C = p_A - p_1``."""
        pc = p_a - p_1
        ea = np.sum(p_a**2, axis=-1) / (2 * self.mass_a)
        e1 = np.sum(p_1**2, axis=-1) / (2 * self.mass_1)
        ec = np.sum(pc**2, axis=-1) / (2 * self.mass_c)
        return self.q_value + ea - e1 - ec

    def mismatch_gradient(self, p_a, p_1) -> np.ndarray:
        return p_a / self.mass_a - (p_a - p_1) / self.mass_c


def _gaussian_delta(e, eps):
    return np.exp(-0.5 * (e / eps) ** 2) / (math.sqrt(2 * math.pi) * eps)


def decay_correlation_2body(f: WeightFn, delta, eps_e: float = math.inf,
                            kinematics: DecayKinematics | None = None, n: int = 64) -> complex:
    """Correlation of particle 1 from the decay of a packet ``F``.

    ``C(delta) = int dp_A F(p_A) F*(p_A - delta) g(E) g(E')`` with
    ``delta = p_1 - p_2``.  The energy deltas ``g`` are Gaussians of width
    ``eps_e``; with ``eps_e = inf`` they drop out and the result equals
    :func:`decay_correlation_3body`.
    """
    delta = _vec(delta, f.dim)
    if math.isinf(eps_e):
        return decay_correlation_3body(f, delta, n=n)
    if not eps_e > 0:
        raise ValueError("eps_e must be positive (or inf to switch the regulator off)")
    kin = kinematics or DecayKinematics(p1=tuple(np.zeros(f.dim)))
    p1 = _vec(kin.p1, f.dim)
    p2 = p1 - delta

    # tensor Gauss-Legendre grid on the support of F(p) F*(p - delta)
    axes, weights = [], []
    for i in range(f.dim):
        mid = f.center[i] + 0.5 * delta[i]
        half = 10.0 * f.sigma[i]
        x, w = gauss_legendre(n, mid - half, mid + half)
        axes.append(x)
        weights.append(w)
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    wt = weights[0]
    for w in weights[1:]:
        wt = np.multiply.outer(wt, w)

    # the energy shell must be resolved by the grid
    spacing = np.array([np.max(np.diff(x)) for x in axes])
    slope = np.max(np.abs(kin.mismatch_gradient(mesh, p1)) @ spacing)
    if slope > eps_e:
        raise ResolutionError(
            f"energy regulator {eps_e:.3g} is narrower than the grid resolves ({slope:.3g}); raise n"
        )
    g1 = _gaussian_delta(kin.mismatch(mesh, p1), eps_e)
    g2 = _gaussian_delta(kin.mismatch(mesh - delta, p2), eps_e)
    integrand = f(mesh) * np.conj(f(mesh - delta)) * g1 * g2
    return complex(np.sum(wt * integrand))


def decay_correlation_3body(f: WeightFn, delta, n: int = 64) -> complex:
    """``C(delta) = int dp_A F(p_A) F*(p_A - delta)``, separable per axis."""
    delta = _vec(delta, f.dim)
    out = 1.0 + 0j
    for i in range(f.dim):
        out *= _overlap_axis(f, f, i, float(delta[i]), n)
    return out


def collision_correlation(fa: WeightFn, fb: WeightFn, delta, n: int = 64) -> complex:
    """Correlation of one product of the collision of packets ``A`` and ``B``.

    Momentum conservation ties the four initial momenta so that
    ``C(delta) = int dP G(P) G*(P - delta)`` with ``G = F_A * F_B`` the
    convolution over the total initial momentum ``P``.
    """
    if fa.dim != fb.dim:
        raise ValueError("sources must share a dimension")
    delta = _vec(delta, fa.dim)
    out = 1.0 + 0j
    for i in range(fa.dim):
        out *= _collision_axis(fa, fb, i, float(delta[i]), n)
    return out


def _convolution_axis(fa: WeightFn, fb: WeightFn, i: int, total: np.ndarray, n: int) -> np.ndarray:
    sa, sb = fa.sigma[i], fb.sigma[i]
    w = 1.0 / sa**2 + 1.0 / sb**2
    half = 9.0 / math.sqrt(w)
    x, wt = np.polynomial.legendre.leggauss(n)
    out = np.empty(total.shape, dtype=complex)
    for j, big_p in enumerate(total):
        mid = (fa.center[i] / sa**2 + (big_p - fb.center[i]) / sb**2) / w
        p = mid + half * x
        out[j] = half * np.sum(wt * fa.axis(i, p) * fb.axis(i, big_p - p))
    return out


def _collision_axis(fa: WeightFn, fb: WeightFn, i: int, delta: float, n: int) -> complex:
    s_tot = math.hypot(fa.sigma[i], fb.sigma[i])
    mid = fa.center[i] + fb.center[i] + 0.5 * delta
    half = 9.0 * s_tot / math.sqrt(2.0)
    big_p, wt = gauss_legendre(n, mid - half, mid + half)
    g = _convolution_axis(fa, fb, i, big_p, n)
    g_shift = _convolution_axis(fa, fb, i, big_p - delta, n)
    return complex(np.sum(wt * g * np.conj(g_shift)))


# ---------------------------------------------------------------- thermal model

@dataclass(frozen=True)
class ThermalState:
    """Occupation statistics of one species at temperature ``temperature`` (K).

    ``mu`` is in units of ``k_B T``.  ``mass`` (kg) is used only by the
    nonrelativistic dispersion, where the kinetic energy is ``q^2 / (2 m)``
    in units of ``k_B T`` with ``m`` expressed as ``m c^2 / k_B T``.
    """

    temperature: float
    statistics: str
    mu: float = 0.0
    dispersion: str = "massless"
    mass: float = M_ELECTRON

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError("temperature must be positive")
        if self.statistics not in STATISTICS:
            raise ValueError(f"statistics must be one of {STATISTICS}")
        if self.dispersion not in DISPERSIONS:
            raise ValueError(f"dispersion must be one of {DISPERSIONS}")
        if self.statistics == "bose_einstein" and self.mu > 0:
            raise ValueError("Bose-Einstein occupancy needs mu <= 0 (energies start at 0)")
        if self.dispersion == "nonrelativistic" and not self.mass > 0:
            raise ValueError("mass must be positive")

    def energy(self, q) -> np.ndarray:
        q = np.abs(np.asarray(q, dtype=float))
        if self.dispersion == "massless":
            return q
        m = self.mass * C_LIGHT**2 / (K_BOLTZMANN * self.temperature)
        return q * q / (2 * m)

    def occupancy(self, q) -> np.ndarray:
        x = self.energy(q) - self.mu
        if self.statistics == "fermi_dirac":
            return 0.5 * (1.0 - np.tanh(0.5 * x))
        with np.errstate(divide="ignore"):
            return 1.0 / np.expm1(x)


def photon_state(temperature: float) -> ThermalState:
    return ThermalState(temperature, "bose_einstein")


def electron_state(temperature: float, dispersion: str = "massless") -> ThermalState:
    return ThermalState(temperature, "fermi_dirac", dispersion=dispersion)


def thermal_kernel(p_total, photon: ThermalState, electron: ThermalState,
                   cutoff: float = 20.0, n_radial: int = 48, n_polar: int = 32) -> float:
    """``G(P) = int d^3k sqrt(N_BE(k)) sqrt(N_FD(P - k))``.

    Isotropy reduces the angular integral to a one-dimensional integral over
    ``q = |P - k|``; the radial variable is ``k = s^2``, which removes the
    ``1 / sqrt(k)`` behaviour of the Bose-Einstein factor at ``k = 0``.
    The radial range is ``[0, |P| + cutoff]``, split at ``k = |P|``.
    """
    big_p = float(np.linalg.norm(np.atleast_1d(np.asarray(p_total, dtype=float))))
    k_max = big_p + cutoff
    pieces = [(0.0, math.sqrt(big_p)), (math.sqrt(big_p), math.sqrt(k_max))] if big_p > 0 else [(0.0, math.sqrt(k_max))]
    xq, wq = np.polynomial.legendre.leggauss(n_polar)
    total = 0.0
    for lo, hi in pieces:
        s, ws = gauss_legendre(n_radial, lo, hi)
        k = s * s
        wk = ws * 2 * s
        radial = wk * k * k * np.sqrt(photon.occupancy(k))
        if big_p < 1e-12:
            angular = 4 * math.pi * np.sqrt(electron.occupancy(k))
        else:
            a = np.abs(big_p - k)
            b = big_p + k
            q = 0.5 * (b - a)[:, None] * (xq + 1) + a[:, None]
            wqk = 0.5 * (b - a)[:, None] * wq
            inner = np.sum(wqk * q * np.sqrt(electron.occupancy(q)), axis=1)
            angular = 2 * math.pi * inner / (big_p * k)
        total += float(np.sum(radial * angular))
    return total


@dataclass(frozen=True)
class CorrelationCurve:
    delta_values: np.ndarray
    c_values: np.ndarray
    fitted_width: float
    fit_residual: float
    lsq_width: float = math.nan
    diagnostics: dict = field(default_factory=dict)


def fit_gaussian_width(delta, c) -> tuple[float, float, float]:
    """Width ``w`` of ``C ~ exp(-delta^2 / (4 w^2))``.

    Returns the second-moment estimate, the weighted least-squares estimate
    on ``log C`` and the rms residual of the second-moment Gaussian.
    """
    delta = np.asarray(delta, dtype=float)
    c = np.asarray(c, dtype=float)
    order = np.argsort(delta)
    d, v = delta[order], c[order]
    m0 = np.trapezoid(v, d)
    if not m0 > 0:
        raise ValueError("curve has no positive mass")
    m1 = np.trapezoid(d * v, d) / m0
    m2 = np.trapezoid((d - m1) ** 2 * v, d) / m0
    w_moment = math.sqrt(m2 / 2)
    ok = (v > 0) & (d != 0)
    wts = v[ok] ** 2
    a = -np.sum(wts * d[ok] ** 2 * np.log(v[ok])) / np.sum(wts * d[ok] ** 4)
    w_lsq = 1.0 / (2 * math.sqrt(a)) if a > 0 else math.nan
    model = np.exp(-(d**2) / (4 * w_moment**2))
    residual = float(np.sqrt(np.mean((v - model) ** 2)))
    return w_moment, w_lsq, residual


def default_thermal_deltas(n: int = 57, delta_max: float = 14.0) -> np.ndarray:
    return np.linspace(-delta_max, delta_max, n)


def photon_correlation_curve(temperature: float, p1=(0.0, 0.0, 0.0), deltas=None,
                             direction=(1.0, 0.0, 0.0), k_center=(0.0, 0.0, 0.0),
                             electron: ThermalState | None = None, cutoff: float = 20.0,
                             n_radial: int = 48, n_polar: int = 32, map_fn=map) -> CorrelationCurve:
    """Photon momentum correlation from the final thermal Thomson scattering.

    ``C(k1, k1') = G(p1 + k1) G(p1 + k1')`` with ``k1 = k_c - delta n / 2``
    and ``k1' = k_c + delta n / 2``, normalised to ``C(0) = 1``.  ``map_fn``
    may be an ordered parallel map.
    """
    deltas = default_thermal_deltas() if deltas is None else np.asarray(deltas, dtype=float)
    photon = photon_state(temperature)
    electron = electron or electron_state(temperature)
    n_hat = np.asarray(direction, dtype=float)
    n_hat = n_hat / np.linalg.norm(n_hat)
    base = np.asarray(p1, dtype=float) + np.asarray(k_center, dtype=float)

    def kernel(vec):
        return thermal_kernel(vec, photon, electron, cutoff, n_radial, n_polar)

    def point(d):
        return kernel(base - 0.5 * d * n_hat) * kernel(base + 0.5 * d * n_hat)

    g0 = kernel(base)
    c = np.array(list(map_fn(point, deltas))) / (g0 * g0)
    w_m, w_lsq, residual = fit_gaussian_width(deltas, c)
    agree = abs(w_m - w_lsq) / w_m if math.isfinite(w_lsq) else math.inf
    if agree > FIT_AGREEMENT:
        warnings.warn(f"second-moment and least-squares widths differ by {agree:.1%}", FitQualityWarning)
    diag = {"lsq_relative_difference": agree, "g0": g0, "cutoff": cutoff}
    return CorrelationCurve(deltas, c, w_m, residual, w_lsq, diag)


def statistical_weight(p, state: ThermalState, x=None, hbar: float = 1.0) -> complex:
    """Coherent-state weight ``sqrt(n(p)) exp(-i p.x / hbar)``."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    x = np.zeros_like(p) if x is None else np.atleast_1d(np.asarray(x, dtype=float))
    amp = math.sqrt(float(state.occupancy(np.linalg.norm(p))))
    return amp * complex(np.exp(-1j * float(np.dot(p, x)) / hbar))


# ---------------------------------------------------------------- N-particle spread

def total_momentum_spread(sigmas) -> float:
    """``sqrt(sum sigma_i^2)``, exact for equal widths and order independent."""
    s = np.abs(np.asarray(sigmas, dtype=float).ravel())
    if s.size == 0:
        raise ValueError("need at least one width")
    if not np.all(np.isfinite(s)) or np.any(s <= 0):
        raise ValueError("widths must be positive and finite")
    top = float(np.max(s))
    return top * math.sqrt(math.fsum((s / top) ** 2))


def marginal_total_variance(sigmas) -> float:
    """Variance of ``P = sum p_i`` for independent Gaussians, by change of variables.

    The joint precision matrix is rewritten in coordinates
    ``(P, r_1, ..., r_{N-1})`` with ``p_i = P / N + r_i`` (``r_N = -sum r``)
    and the relative coordinates are integrated out through the Schur
    complement.
    """
    s = np.asarray(sigmas, dtype=float).ravel()
    n = s.size
    prec = np.diag(1.0 / s**2)
    m = np.zeros((n, n))
    m[:, 0] = 1.0 / n
    for j in range(1, n):
        m[j - 1, j] = 1.0
        m[n - 1, j] = -1.0
    lam = m.T @ prec @ m
    if n == 1:
        return float(1.0 / lam[0, 0])
    schur = lam[0, 0] - lam[0, 1:] @ np.linalg.solve(lam[1:, 1:], lam[1:, 0])
    return float(1.0 / schur)
