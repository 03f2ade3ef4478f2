"""Wave-packet scattering off a potential step and a square well/barrier.

Stationary amplitudes come from solving the boundary-matching equations;
packets are superpositions of those stationary states weighted by a
Gaussian ``N(k)``.  The time origin is the instant at which the incident
packet would reach its waist at ``x = 0``, so every branch is a free packet
whose waist sits near ``t = 0``.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
import math

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import EmptyBranchError, NumericalError
from .packets import MomentReport, PacketSpec, SampledWave, compute_moments, evaluate_packet, sample_packet
from .quadrature import matvec, odd, simpson_weights

BRANCHES = ("incident", "reflected", "transmitted")
EVANESCENT_WEIGHT_LIMIT = 1e-8
RESIDUAL_LIMIT = 1e-10
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
MAX_K_REFINEMENTS = 4
EDGE_TOL = 1e-14
WINDOW_WIDTHS = 12.0


@dataclass(frozen=True)
class StepPotential:
    """``U(x) = v0`` for ``x <= 0`` and ``0`` for ``x > 0``."""

    v0: float

    def __post_init__(self):
        if not math.isfinite(self.v0):
            raise ValueError("v0 must be finite")


@dataclass(frozen=True)
class BarrierPotential:
    """``U(x) = -v0`` on ``0 <= x <= a``, zero elsewhere (``v0 > 0`` is a well)."""

    v0: float
    a: float

    def __post_init__(self):
        if not (math.isfinite(self.v0) and math.isfinite(self.a)):
            raise ValueError("v0 and a must be finite")
        if self.a < 0:
            raise ValueError("a must be non-negative")


@dataclass(frozen=True, eq=False)
class ScatterSolution:
    k: np.ndarray
    k_prime: np.ndarray
    b_minus: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray
    c_plus: np.ndarray
    residual: float

    def flux_error(self, kind: str) -> np.ndarray:
        """Deviation from probability-flux conservation."""
        r = np.abs(self.b_minus) ** 2
        if kind == "step":
            t = np.real(self.k_prime) / self.k * np.abs(self.c_plus) ** 2
        else:
            t = np.abs(self.c_plus) ** 2
        return np.abs(r + t - 1.0)


def _as_k(k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)) or np.any(k <= 0):
        raise ValueError("k must be positive and finite")
    return k


def _interior_k(k, v0, mass, hbar):
    # principal complex root: evanescent branches get Im(k') > 0
    return np.sqrt((k * k + 2.0 * mass * v0 / hbar**2).astype(complex))


def step_amplitudes(k, potential: StepPotential, mass: float = 1.0, hbar: float = 1.0) -> ScatterSolution:
    """Reflection and transmission amplitudes of a potential step."""
    k = _as_k(k)
    kp = _interior_k(k, potential.v0, mass, hbar)
    b = (k - kp) / (k + kp)
    c = 2 * k / (k + kp)
    res = max(
        float(np.max(np.abs(1 + b - c))),
        float(np.max(np.abs(k * (1 - b) - kp * c) / k)),
    )
    nan = np.full(k.shape, np.nan + 0j)
    return ScatterSolution(k, kp, b, nan, nan, c, res)


def _barrier_solve(k, kp, a):
    """Solve for (B, A+, A-, C) with the A- unknown rescaled by exp(-i k' a).

    The rescaling keeps every matrix entry bounded for evanescent interiors.
    """
    n = k.size
    ep = np.exp(1j * kp * a)
    ek = np.exp(1j * k * a)
    m = np.zeros((n, 4, 4), dtype=complex)
    rhs = np.zeros((n, 4), dtype=complex)
    # psi(0-) = psi(0+)
    m[:, 0, 0], m[:, 0, 1], m[:, 0, 2] = 1, -1, -ep
    rhs[:, 0] = -1
    # psi'(0-) = psi'(0+), divided by i
    m[:, 1, 0], m[:, 1, 1], m[:, 1, 2] = -k, -kp, kp * ep
    rhs[:, 1] = -k
    # psi(a-) = psi(a+)
    m[:, 2, 1], m[:, 2, 2], m[:, 2, 3] = ep, 1, -ek
    # psi'(a-) = psi'(a+), divided by i
    m[:, 3, 1], m[:, 3, 2], m[:, 3, 3] = kp * ep, -kp, -k * ek
    cond = np.linalg.cond(m)
    if np.any(~np.isfinite(cond)) or np.any(cond > 1e12):
        raise NumericalError("boundary-matching system is singular (interior wavenumber ~ 0)")
    sol = np.linalg.solve(m, rhs[..., None])[..., 0]
    b, ap, am_scaled, c = sol.T
    am = am_scaled * ep
    return b, ap, am, am_scaled, c


def barrier_amplitudes(energy, potential: BarrierPotential, mass: float = 1.0, hbar: float = 1.0) -> ScatterSolution:
    """Amplitudes for a square well/barrier from the boundary-matching system.

    ``psi = e^{ikx} + B e^{-ikx}`` left of 0, ``A+ e^{ik'x} + A- e^{-ik'x}``
    inside, ``C e^{ikx}`` right of ``a``.
    """
    energy = np.asarray(energy, dtype=float)
    if not np.all(np.isfinite(energy)) or np.any(energy <= 0):
        raise ValueError("energy must be positive and finite")
    k = np.atleast_1d(np.sqrt(2 * mass * energy) / hbar)
    kp = _interior_k(k, potential.v0, mass, hbar)
    a = potential.a
    b, ap, am, am_scaled, c = _barrier_solve(k, kp, a)
    ep, ek = np.exp(1j * kp * a), np.exp(1j * k * a)
    res = np.stack([
        np.abs(1 + b - ap - am),
        np.abs(k * (1 - b) - kp * (ap - am)) / k,
        np.abs(ap * ep + am_scaled - c * ek),
        np.abs(kp * (ap * ep - am_scaled) - k * c * ek) / k,
    ])
    shape = energy.shape
    out = [v.reshape(shape) if shape else v[0] for v in (k, kp, b, ap, am, c)]
    return ScatterSolution(*out, residual=float(np.max(res)))


def barrier_closed_form(energy, potential: BarrierPotential, mass: float = 1.0, hbar: float = 1.0):
    """Textbook closed forms for (A+, A-, B, C) of the square well.

    The transmission expression is only valid where ``exp(i k' a) = 1``;
    it is kept as a cross-check of the matching solve, not as the source
    of truth.
    """
    energy = np.asarray(energy, dtype=float)
    s = np.sqrt((1 + potential.v0 / energy).astype(complex))
    k = np.sqrt(2 * mass * energy) / hbar
    kp = s * k
    a = potential.a
    e1 = np.exp(1j * kp * a)
    e2 = e1 * e1
    d = (1 + s) ** 2 - (1 - s) ** 2 * e2
    ap = 2 * (1 + s) / d
    am = 2 * (s - 1) * e2 / d
    b = 1 - 2 * ((s + s * s) + (s - s * s) * e2) / d
    c = 2 * ((1 + s) + (s - 1) * e1) / d * np.exp(1j * (kp - k) * a)
    return ap, am, b, c


@dataclass(frozen=True)
class KGrid:
    """Gaussian momentum distribution of the incident packet.

    ``sigma_k`` is the standard deviation of ``|N(k)|^2``; the packet
    parameter is ``gamma = 1 / (sqrt(2) sigma_k)``.
    """

    k0: float
    sigma_k: float
    n_points: int = 257
    cutoff_sigmas: float = 8.0
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.sigma_k > 0 and self.mass > 0 and self.hbar > 0):
            raise ValueError("sigma_k, mass and hbar must be positive")
        if self.n_points < 64:
            raise ValueError("n_points must be at least 64")
        if self.cutoff_sigmas <= 0:
            raise ValueError("cutoff_sigmas must be positive")
        if self.k0 - self.cutoff_sigmas * self.sigma_k <= 0:
            raise ValueError("k grid must be wholly right-moving: k0 > cutoff_sigmas * sigma_k")

    @classmethod
    def from_packet(cls, gamma: float, k0_over_sigma: float = 10.0, **kw) -> "KGrid":
        sigma = 1.0 / (math.sqrt(2.0) * gamma)
        return cls(k0=k0_over_sigma * sigma, sigma_k=sigma, **kw)

    @property
    def gamma(self) -> float:
        return 1.0 / (math.sqrt(2.0) * self.sigma_k)

    @property
    def e0(self) -> float:
        return (self.hbar * self.k0) ** 2 / (2 * self.mass)

    @property
    def x0(self) -> float:
        """Starting position of the incident packet (ten packet widths left of the boundary)."""
        return -10.0 * self.gamma

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        n = odd(self.n_points)
        half = self.cutoff_sigmas * self.sigma_k
        k = np.linspace(self.k0 - half, self.k0 + half, n)
        return k, simpson_weights(n, k[1] - k[0])

    def amplitude(self, k) -> np.ndarray:
        """``N(k)``, normalised so that ``int |N|^2 dk = 1``."""
        k = np.asarray(k, dtype=float)
        return (2 * math.pi * self.sigma_k**2) ** -0.25 * np.exp(-((k - self.k0) ** 2) / (4 * self.sigma_k**2))

    def incident_packet(self) -> PacketSpec:
        """The free minimum packet the incident branch reproduces, waist at x = 0, t = 0."""
        return PacketSpec(x0=0.0, p0=self.hbar * self.k0, gamma=self.gamma, mass=self.mass, hbar=self.hbar)


@dataclass(frozen=True, eq=False)
class BranchSpectrum:
    """Discrete momentum content of one branch.

    ``psi(x, t) = (2 pi)^-1/2 sum_j coeff_j exp(i kappa_j x - i E_j t / hbar)``,
    with quadrature weights already folded into ``coeff``.
    """

    kappa: np.ndarray
    coeff: np.ndarray
    energy: np.ndarray
    density: np.ndarray  # probability per node in the outgoing momentum variable
    hbar: float
    mass: float
    boundary: float

    def momentum_stats(self) -> tuple[float, float, float]:
        w = self.density
        norm = float(np.sum(w))
        if norm <= 0:
            return 0.0, 0.0, 0.0
        mean = float(np.sum(w * self.kappa) / norm)
        var = float(np.sum(w * (self.kappa - mean) ** 2) / norm)
        return norm, mean, math.sqrt(max(var, 0.0))

    def phases(self, x_shift: float, t: float) -> np.ndarray:
        return self.coeff * np.exp(1j * self.kappa * x_shift - 1j * self.energy * t / self.hbar)


def _branch_spectrum(grid: KGrid, potential, branch: str) -> BranchSpectrum:
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}")
    k, w = grid.nodes()
    n = grid.amplitude(k)
    hb, m = grid.hbar, grid.mass
    kinetic = (hb * k) ** 2 / (2 * m)
    if isinstance(potential, StepPotential):
        sol = step_amplitudes(k, potential, m, hb)
        energy = kinetic + potential.v0
        boundary = 0.0
    elif isinstance(potential, BarrierPotential):
        sol = barrier_amplitudes(kinetic / 1.0, potential, m, hb) if kinetic.size else None
        energy = kinetic
        boundary = potential.a
    else:
        raise TypeError("potential must be a StepPotential or BarrierPotential")

    if branch == "incident":
        kappa, amp, jac = k, np.ones_like(k, dtype=complex), np.ones_like(k)
    elif branch == "reflected":
        kappa, amp, jac = -k, sol.b_minus, np.ones_like(k)
    else:
        if isinstance(potential, StepPotential):
            kp = sol.k_prime
            evanescent = np.abs(kp.imag) > 0
            weight = float(np.sum(w * n**2 * evanescent))
            if weight > EVANESCENT_WEIGHT_LIMIT:
                raise ValueError(
                    f"{weight:.2e} of the packet weight is evanescent on the transmitted side; "
                    "raise k0 or narrow sigma_k"
                )
            kappa = np.where(evanescent, 0.0, kp.real)
            amp = np.where(evanescent, 0.0, sol.c_plus)
            jac = np.where(evanescent, 0.0, kappa / k)
        else:
            kappa, amp, jac = k, sol.c_plus, np.ones_like(k)
    coeff = w * n * amp
    density = w * np.abs(n * amp) ** 2 * jac
    return BranchSpectrum(kappa, coeff, energy, density, hb, m, boundary)


def _sample(spec: BranchSpectrum, x: np.ndarray, t: float) -> np.ndarray:
    phase = np.exp(1j * np.outer(x, spec.kappa))
    return matvec(phase, spec.phases(0.0, t)) / math.sqrt(2 * math.pi)


def _grid_step(spec: BranchSpectrum, carrier: float) -> float:
    live = spec.density > 1e-30 * np.max(spec.density)
    kmax = float(np.max(np.abs(spec.kappa[live])))
    band = float(np.max(np.abs(spec.kappa[live] - carrier)))
    return min(0.9 * math.pi / kmax, math.pi / (4 * max(band, 1e-300)))


def _alias_period(spec: BranchSpectrum) -> float:
    # a discrete k-sum is periodic in x with this period
    return 2 * math.pi / float(np.max(np.abs(np.diff(spec.kappa))))


def _spectrum_covering(grid: KGrid, potential, branch: str, width: float) -> BranchSpectrum:
    """Branch spectrum on a k-grid fine enough that an x-window of ``width`` sees no alias."""
    g = grid
    for _ in range(MAX_K_REFINEMENTS + 1):
        spec = _branch_spectrum(g, potential, branch)
        if width <= 0.9 * _alias_period(spec):
            return spec
        g = replace(g, n_points=2 * g.n_points - 1)
    raise NumericalError(
        f"x-window {width:.3g} exceeds the alias period even with {g.n_points} k-nodes; "
        "the branch is too extended"
    )


def _edges_empty(dens: np.ndarray, tol: float = EDGE_TOL) -> bool:
    peak = np.max(dens)
    return bool(peak > 0 and max(np.max(dens[:8]), np.max(dens[-8:])) <= tol * peak)


def _auto_grid(grid: KGrid, potential, branch: str, t: float, centre=None, spread=None,
               n_max: int = 20001) -> tuple[np.ndarray, np.ndarray]:
    """Uniform x-grid and samples covering the branch at time ``t``; widened until the edges are empty."""
    spec = _branch_spectrum(grid, potential, branch)
    norm, mean_k, std_k = spec.momentum_stats()
    if norm <= 0:
        raise EmptyBranchError("branch carries no probability")
    v = spec.hbar * mean_k / spec.mass
    dv = spec.hbar * std_k / spec.mass
    if centre is None:
        centre = v * t + 0.5 * spec.boundary
    if spread is None:
        spread = 1.0 / (2 * max(std_k, 1e-300)) + dv * abs(t) + spec.boundary
    h = _grid_step(spec, mean_k)
    half = 14.0 * spread
    for _ in range(12):
        npts = odd(int(math.ceil(2 * half / h)) + 1)
        if npts > n_max:
            raise NumericalError(f"branch too extended for an x-grid of {n_max} points")
        fine = _spectrum_covering(grid, potential, branch, 2 * half)
        x = np.linspace(centre - half, centre + half, npts)
        psi = _sample(fine, x, t)
        dens = np.abs(psi) ** 2
        if _edges_empty(dens):
            return x, psi
        # recentre on the density and widen
        centre = float(np.sum(x * dens) / np.sum(dens))
        half *= 1.6
    raise NumericalError("could not find an x-grid containing the branch")


def assemble_branch(grid: KGrid, potential, branch: str, t: float, x=None) -> SampledWave:
    """Sample one branch of the scattered packet at time ``t``.

    Each branch is evaluated as a free wave over the whole line (the
    physical wave coincides with it on the branch's side of the potential
    once the packet has left the interaction region).  The k-grid is
    refined internally when the x-window would otherwise see alias copies.
    """
    spec = _branch_spectrum(grid, potential, branch)
    if spec.momentum_stats()[0] <= 1e-24:
        raise EmptyBranchError(f"{branch} branch is empty")
    if x is None:
        x, psi = _auto_grid(grid, potential, branch, t)
        return SampledWave(x, psi, t)
    x = np.asarray(x, dtype=float)
    fine = _spectrum_covering(grid, potential, branch, float(x.max() - x.min()))
    return SampledWave(x, _sample(fine, x, t), t)


@dataclass(frozen=True)
class BranchProduct:
    branch: str
    delta_x: float
    delta_p: float
    product: float
    waist_time: float
    mode: str = "waist"
    diagnostics: dict = field(default_factory=dict, compare=False)


class _Comoving:
    """Samples a branch on a grid that travels with its centroid."""

    def __init__(self, spec: BranchSpectrum, x_centroid0: float, v: float, half: float, h: float):
        self.spec, self.xc0, self.v = spec, x_centroid0, v
        n = odd(int(math.ceil(2 * half / h)) + 1)
        self.xi = np.linspace(-half, half, n)
        self.phase = np.exp(1j * np.outer(self.xi, spec.kappa))
        self.evaluations = 0

    def wave(self, t: float) -> SampledWave:
        self.evaluations += 1
        xc = self.xc0 + self.v * t
        vals = matvec(self.phase, self.spec.phases(xc, t)) / math.sqrt(2 * math.pi)
        return SampledWave(self.xi + xc, vals, t)

    def moments(self, t: float) -> MomentReport:
        return compute_moments(self.wave(t), hbar=self.spec.hbar)

    def edges_empty(self, t: float) -> bool:
        return _edges_empty(np.abs(self.wave(t).values) ** 2)


def branch_uncertainty_product(grid: KGrid, potential, branch: str, mode: str = "waist",
                               distance: float | None = None, t_tol: float = 1e-7) -> BranchProduct:
    """``delta_x * delta_p`` of one scattered branch.

    ``delta_p`` comes from the branch's momentum-space weights.  In
    ``"waist"`` mode ``delta_x`` is the minimum over time of the sampled
    branch width, found by bounded scalar minimisation; in ``"fixed"`` mode it is
    measured on the branch's side of the potential when the centroid is
    ``distance`` away from the boundary.
    """
    if mode not in ("waist", "fixed"):
        raise ValueError("mode must be 'waist' or 'fixed'")
    spec = _branch_spectrum(grid, potential, branch)
    norm, mean_k, std_k = spec.momentum_stats()
    if norm <= 1e-20:
        raise EmptyBranchError(f"{branch} branch is empty")
    delta_p = spec.hbar * std_k
    v = spec.hbar * mean_k / spec.mass
    dv = spec.hbar * std_k / spec.mass

    x, psi = _auto_grid(grid, potential, branch, 0.0)
    start = compute_moments(SampledWave(x, psi, 0.0), hbar=spec.hbar)
    dx0 = start.delta_x
    h = _grid_step(spec, mean_k)

    if mode == "fixed":
        if distance is None or distance <= 0:
            raise ValueError("fixed mode needs a positive distance")
        if branch == "transmitted":
            target, window = spec.boundary + distance, (spec.boundary, math.inf)
        else:
            target, window = -distance, (-math.inf, 0.0)
        t = (target - start.mean_x) / v
        xs, psi = _auto_grid(grid, potential, branch, t, centre=target, spread=dx0 + dv * abs(t))
        rep = compute_moments(SampledWave(xs, psi, t), window=window, hbar=spec.hbar)
        return BranchProduct(branch, rep.delta_x, delta_p, rep.delta_x * delta_p, t, "fixed",
                             {"centroid": rep.mean_x})

    # Var x(t) is quadratic in t with |Cov(x, v)| <= dx0 dv, so the waist lies
    # within |t| <= dx0 / dv; the bracket only grows if that bound fails numerically
    span = 1.5 * dx0 / max(dv, 1e-300)
    lo, hi = -span, span
    widen = 1.0
    for _ in range(30):
        reach = dx0 + dv * max(abs(lo), abs(hi))
        half = WINDOW_WIDTHS * widen * reach
        fine = _spectrum_covering(grid, potential, branch, 2 * half)
        cm = _Comoving(fine, start.mean_x, v, half, h)
        if not (cm.edges_empty(lo) and cm.edges_empty(hi)):
            widen *= 1.5
            continue
        width = lambda t: cm.moments(t).delta_x
        mid = lo + (1 - GOLDEN) * (hi - lo)
        f_lo, f_mid, f_hi = width(lo), width(mid), width(hi)
        if f_mid < f_lo and f_mid < f_hi:
            break
        step = hi - lo
        if f_lo <= f_mid:
            lo -= step
        if f_hi <= f_mid:
            hi += step
    else:
        raise NumericalError(
            f"waist search not bracketed for {branch} branch within [{lo:.3e}, {hi:.3e}]"
        )
    found = minimize_scalar(width, bounds=(lo, hi), method="bounded",
                            options={"xatol": t_tol * (hi - lo), "maxiter": 500})
    t_w = float(found.x)
    rep = cm.moments(t_w)
    diag = {"evaluations": cm.evaluations, "bracket": (lo, hi), "delta_p_sampled": rep.delta_p,
            "norm": norm, "k_nodes": fine.kappa.size}
    return BranchProduct(branch, rep.delta_x, delta_p, rep.delta_x * delta_p, t_w, "waist", diag)


@dataclass(frozen=True, eq=False)
class SweepTable:
    columns: tuple
    rows: list
    diagnostics: list = field(default_factory=list)


def _products(grid, potential, mode="waist", distance=None):
    """Branch products (reflected, transmitted) plus per-branch waist times; NaN for empty branches."""
    out, diag = [], {}
    for branch in ("reflected", "transmitted"):
        try:
            bp = branch_uncertainty_product(grid, potential, branch, mode=mode, distance=distance)
        except EmptyBranchError:
            out.append(math.nan)
            diag[f"{branch}_time"] = math.nan
            continue
        out.append(bp.product)
        diag[f"{branch}_time"] = bp.waist_time
    return out, diag


def _run_ordered(fn, items, threads: int):
    if threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def default_cliff_ratios(n: int = 40) -> np.ndarray:
    return np.geomspace(0.02, 50.0, n)


def sweep_step_depth(grid: KGrid, v0_over_e0=None, threads: int = 1, mode: str = "waist",
                     distance: float | None = None) -> SweepTable:
    """Reflected and transmitted products (in units of hbar/2) versus step depth."""
    ratios = default_cliff_ratios() if v0_over_e0 is None else np.asarray(v0_over_e0, dtype=float)
    unit = grid.hbar / 2
    e0 = grid.e0

    def point(r):
        (pr, pt), diag = _products(grid, StepPotential(r * e0), mode, distance)
        return (float(r), pr / unit, pt / unit), diag

    results = _run_ordered(point, list(ratios), threads)
    return SweepTable(("v0_over_e0", "product_reflected", "product_transmitted"),
                      [r for r, _ in results], [d for _, d in results])


def sweep_barrier_width(grid: KGrid, v0: float, widths, threads: int = 1, mode: str = "waist",
                        distance: float | None = None) -> SweepTable:
    """Reflected and transmitted products (in units of hbar/2) versus well width."""
    unit = grid.hbar / 2

    def point(a):
        (pr, pt), diag = _products(grid, BarrierPotential(v0, a), mode, distance)
        return (a, pr / unit, pt / unit), diag

    results = _run_ordered(point, [float(a) for a in widths], threads)
    return SweepTable(("a", "product_reflected", "product_transmitted"),
                      [r for r, _ in results], [d for _, d in results])


@dataclass(frozen=True)
class Wave3D:
    """Product-form packet: free transverse packets times a 1D scattering branch."""

    transverse: tuple
    grid: KGrid
    potential: object
    branch: str
    t: float

    def moments(self) -> dict:
        out = {}
        for axis, spec in zip(("x", "y"), self.transverse):
            w = _sample_free(spec, self.t)
            out[axis] = compute_moments(w, hbar=spec.hbar)
        out["z"] = compute_moments(assemble_branch(self.grid, self.potential, self.branch, self.t),
                                   hbar=self.grid.hbar)
        return out

    def longitudinal_product(self) -> BranchProduct:
        return branch_uncertainty_product(self.grid, self.potential, self.branch)

    def evaluate(self, x, y, z) -> np.ndarray:
        """Amplitude on the tensor grid ``x * y * z``."""
        fx = evaluate_packet(self.transverse[0], np.asarray(x, dtype=float), self.t)
        fy = evaluate_packet(self.transverse[1], np.asarray(y, dtype=float), self.t)
        fz = assemble_branch(self.grid, self.potential, self.branch, self.t, x=z).values
        return fx[:, None, None] * fy[None, :, None] * fz[None, None, :]


def _sample_free(spec: PacketSpec, t: float) -> SampledWave:
    return sample_packet(spec, t)


def assemble_3d(transverse, grid: KGrid, potential, branch: str = "transmitted", t: float = 0.0) -> Wave3D:
    if len(transverse) != 2:
        raise ValueError("need exactly two transverse packets")
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}")
    return Wave3D(tuple(transverse), grid, potential, branch, float(t))
