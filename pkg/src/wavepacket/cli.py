"""Command-line front end.

Every subcommand resolves its parameters from built-in defaults, then an
optional ``key = value`` config file (one section per subcommand), then
command-line flags.  Results go out as CSV (12 significant digits) or as a
JSON envelope ``{version, config, data, diagnostics}``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""
import argparse
from concurrent.futures import ThreadPoolExecutor
import configparser
import csv
from dataclasses import dataclass, field
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .constants import unit_system
from .correlations import (
    WeightFn,
    collision_correlation,
    decay_correlation_2body,
    decay_correlation_3body,
    fit_gaussian_width,
    photon_correlation_curve,
)
from .errors import NumericalError
from .medium import MediumSpec, analyse
from .packets import PacketSpec, compute_moments, sample_packet
from .scattering1d import (
    BarrierPotential,
    KGrid,
    StepPotential,
    barrier_amplitudes,
    branch_uncertainty_product,
    step_amplitudes,
    sweep_barrier_width,
    sweep_step_depth,
)
from .transforms import (
    InterfaceSpec,
    WidthState,
    add_potential_nonrel,
    add_potential_rel,
    cross_interface,
    lorentz_boost,
    scale_transform,
)

CONFIG_ENV = "WAVEPACKET_CONFIG"
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
GLOBAL_KEYS = ("units", "format", "out")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- parameters

def _positive(v):
    return None if v > 0 else "must be positive"


def _non_negative(v):
    return None if v >= 0 else "must be non-negative"


def _finite(v):
    return None if math.isfinite(v) else "must be finite"


def _at_least(n):
    return lambda v: None if v >= n else f"must be at least {n}"


def _open_unit(v):
    return None if abs(v) < 1 else "must satisfy |beta| < 1"


def _float_list(text):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).split(",") if v.strip()]


@dataclass(frozen=True)
class Param:
    name: str
    kind: type | object = float
    default: object = None
    check: object = None
    choices: tuple | None = None
    help: str = ""
    si_default: object = None

    def parse(self, raw):
        if raw is None:
            return None
        try:
            if self.kind is list:
                value = _float_list(raw)
            elif self.kind is int:
                f = float(raw)
                if f != int(f):
                    raise ValueError
                value = int(f)
            elif self.kind is float:
                value = float(raw)
            else:
                value = str(raw)
        except (TypeError, ValueError):
            raise ConfigError(f"{self.name}: cannot parse {raw!r} as {getattr(self.kind, '__name__', self.kind)}") from None
        if self.choices is not None and value not in self.choices:
            raise ConfigError(f"{self.name}: {value!r} is not one of {', '.join(self.choices)}")
        values = value if isinstance(value, list) else [value]
        if self.kind is list and not values:
            raise ConfigError(f"{self.name}: empty list")
        if self.check is not None:
            for v in values:
                msg = self.check(v)
                if msg:
                    raise ConfigError(f"{self.name}: {msg} (got {v!r})")
        return value


P = Param
COMMANDS = {
    "packet": [
        P("gamma", float, 1.0, _positive, help="packet size parameter"),
        P("p0", float, 0.0, _finite, help="central momentum"),
        P("x0", float, 0.0, _finite, help="central position"),
        P("order", int, 0, _non_negative, help="Hermite order m"),
        P("mass", float, None, _positive, help="particle mass (default: unit-system electron mass)"),
        P("t", float, 0.0, _finite, help="evaluation time"),
        P("n", int, 2001, _at_least(65), help="position samples"),
    ],
    "step": [
        P("k", float, 1.0, _positive, help="incident wavenumber"),
        P("v0", float, 1.5, _finite, help="step offset (positive accelerates the transmitted wave)"),
        P("mass", float, None, _positive),
    ],
    "barrier": [
        P("energy", float, 1.0, _positive, help="incident kinetic energy"),
        P("v0", float, 1.0, _finite, help="well depth (negative for a barrier)"),
        P("a", float, 1.0, _non_negative, help="well width"),
        P("mass", float, None, _positive),
    ],
    "sweep-cliff": [
        P("gamma", float, 1.0, _positive, si_default=8e-10 * math.sqrt(2), help="incident packet size"),
        P("k0_over_sigma", float, 10.0, _positive),
        P("n_k", int, 257, _at_least(64), help="momentum nodes"),
        P("cutoff_sigmas", float, 8.0, _positive),
        P("n_ratios", int, 40, _at_least(2)),
        P("ratio_min", float, 0.02, _positive),
        P("ratio_max", float, 50.0, _positive),
        P("mode", str, "waist", choices=("waist", "fixed")),
        P("distance", float, None, _positive, help="centroid distance for fixed mode"),
        P("mass", float, None, _positive),
    ],
    "sweep-well": [
        P("delta_x1", float, 1.0, _positive, si_default=8e-10, help="incident position width"),
        P("k0_over_sigma", float, 10.0, _positive),
        P("n_k", int, 257, _at_least(64)),
        P("cutoff_sigmas", float, 8.0, _positive),
        P("v0_over_e0", list, [0.5, 1.0, 1.5], _finite, help="comma-separated depths"),
        P("n_widths", int, 40, _at_least(2)),
        P("width_max", float, 1.5, _positive, help="largest width in units of delta_x1"),
        P("mode", str, "waist", choices=("waist", "fixed")),
        P("distance", float, None, _positive),
        P("mass", float, None, _positive),
    ],
    "mfp": [
        P("T", float, 3000.0, _at_least(1.0), help="temperature (K)"),
        P("log_lambda", float, 10.0, _non_negative, help="Coulomb logarithm"),
        P("n", float, 4e17, _positive, help="electron and proton density (m^-3)"),
        P("n_gamma", float, None, _positive, help="photon density (default 1e9 n)"),
        P("kinetic_factor", float, 3.0, _positive, help="m v^2 = f k T"),
    ],
    "transform": [
        P("op", str, "boost", choices=("boost", "potential-nonrel", "potential-rel", "scale", "interface")),
        P("p0", float, 1.0, _finite),
        P("dp_l", float, 0.1, _positive),
        P("dp_t", float, None, _positive),
        P("dx_l", float, None, _positive),
        P("dx_t", float, None, _positive),
        P("mass", float, None, _non_negative),
        P("beta", float, 0.0, _open_unit),
        P("v0", float, 0.0, _finite),
        P("lam", float, 1.0, _positive),
        P("kind", str, "electron_metal", choices=("electron_metal", "light_dielectric", "light_absorbing")),
        P("work_function", float, 0.0, _finite),
        P("m_eff", float, None, _positive),
        P("mu", float, 1.0, _positive),
        P("eps", float, 1.0, _positive),
        P("rho", float, None, _positive),
    ],
    "correlate": [
        P("mode", str, "thermal", choices=("decay2", "decay3", "collision", "thermal")),
        P("sigma_a", float, 1.0, _positive),
        P("sigma_b", float, 1.0, _positive),
        P("dim", int, 3, lambda v: None if 1 <= v <= 3 else "must be 1, 2 or 3"),
        P("eps_e", float, math.inf, _positive, help="energy regulator (inf = off)"),
        P("delta_max", float, None, _positive, help="largest |delta| (default 14 k_BT or 6 sigma)"),
        P("n_delta", int, 57, _at_least(5)),
        P("T", float, 3500.0, _positive, help="temperature (K), thermal mode"),
        P("p1", float, 0.0, _finite, help="electron final momentum along the sampling axis (k_BT)"),
    ],
}


@dataclass
class RunConfig:
    subcommand: str
    units: str = "natural"
    output_path: str | None = None
    output_format: str = "csv"
    threads: int = 1
    params: dict = field(default_factory=dict)

    def echo(self) -> dict:
        # the parallelism degree is left out so the envelope does not depend on it
        return {"subcommand": self.subcommand, "units": self.units, **self.params}


# ---------------------------------------------------------------- parsing

def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    glob = argparse.ArgumentParser(add_help=False)
    g = glob.add_argument_group("global options")
    g.add_argument("--units", choices=("natural", "si"), default=argparse.SUPPRESS)
    g.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")
    g.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    g.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    g.add_argument("--config", default=argparse.SUPPRESS, help=f"config file (default ${CONFIG_ENV})")

    parser = argparse.ArgumentParser(prog="wavepacket", parents=[glob],
                                     description="Wave-packet uncertainty and coherence calculations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, params in COMMANDS.items():
        sp = sub.add_parser(name, parents=[glob])
        for p in params:
            # raw strings: parsing and range checks happen after merging with the config file
            sp.add_argument(_flag(p.name), dest=p.name, default=None, help=p.help or None)
    return parser


def _read_config_file(path: str, subcommand: str) -> dict:
    if not os.path.isfile(path):
        raise ConfigError(f"config: file {path!r} not found")
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",), inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"config: {exc}") from None
    for section in cp.sections():
        if section not in COMMANDS:
            raise ConfigError(f"config: unknown section [{section}]")
        known = {p.name for p in COMMANDS[section]} | set(GLOBAL_KEYS) | {"threads"}
        for key in cp[section]:
            if key.replace("-", "_") not in known:
                raise ConfigError(f"{key}: unknown key in section [{section}]")
    if subcommand not in cp:
        return {}
    return {k.replace("-", "_"): v for k, v in cp[subcommand].items()}


def parse_config(argv=None) -> RunConfig:
    """Resolve defaults, config file and flags into a validated :class:`RunConfig`."""
    parser = build_parser()
    ns = vars(parser.parse_args(argv))
    name = ns["subcommand"]
    path = ns.get("config") or os.environ.get(CONFIG_ENV)
    from_file = _read_config_file(path, name) if path else {}

    def pick(key, default):
        if ns.get(key) is not None:
            return ns[key]
        return from_file.get(key, default)

    units = pick("units", "natural")
    if units not in ("natural", "si"):
        raise ConfigError(f"units: {units!r} is not one of natural, si")
    fmt = pick("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format: {fmt!r} is not one of csv, json")
    threads = Param("threads", int, 1, _at_least(1)).parse(pick("threads", 1))

    params = {}
    for p in COMMANDS[name]:
        default = p.si_default if (units == "si" and p.si_default is not None) else p.default
        raw = pick(p.name, None)
        params[p.name] = default if raw is None else p.parse(raw)
    cfg = RunConfig(name, units, pick("out", None), fmt, threads, params)
    _cross_validate(cfg)
    _materialize(cfg)
    return cfg


def _materialize(cfg: RunConfig):
    """Replace unit- or parameter-dependent defaults by their resolved values."""
    p, u = cfg.params, unit_system(cfg.units)
    if "mass" in p and p["mass"] is None:
        p["mass"] = u.electron_mass
    name = cfg.subcommand
    if name == "mfp" and p["n_gamma"] is None:
        p["n_gamma"] = 1e9 * p["n"]
    if name == "transform":
        if p["dp_t"] is None:
            p["dp_t"] = p["dp_l"]
        if p["dx_l"] is None:
            p["dx_l"] = u.hbar / (2 * p["dp_l"])
        if p["dx_t"] is None:
            p["dx_t"] = u.hbar / (2 * p["dp_t"])
        if p["m_eff"] is None:
            p["m_eff"] = p["mass"] if p["mass"] > 0 else u.electron_mass
    if name == "correlate" and p["delta_max"] is None:
        if p["mode"] == "thermal":
            p["delta_max"] = 14.0
        elif p["mode"] == "collision":
            p["delta_max"] = 6.0 * math.hypot(p["sigma_a"], p["sigma_b"])
        else:
            p["delta_max"] = 6.0 * p["sigma_a"]


def _cross_validate(cfg: RunConfig):
    p = cfg.params
    if p.get("mode") == "fixed" and p.get("distance") is None:
        raise ConfigError("distance: required when mode = fixed")
    if cfg.subcommand == "sweep-cliff" and p["ratio_min"] >= p["ratio_max"]:
        raise ConfigError("ratio_min: must be below ratio_max")
    if cfg.subcommand == "packet" and p["order"] > 8:
        raise ConfigError("order: must be at most 8")
    if cfg.subcommand == "transform" and p["op"] == "interface" and p["kind"] == "light_absorbing" and p["rho"] is None:
        raise ConfigError("rho: required for kind = light_absorbing")


# ---------------------------------------------------------------- runners

@dataclass
class Result:
    columns: tuple
    rows: list
    diagnostics: dict = field(default_factory=dict)
    sidecar: dict | None = None


def _ordered_map(cfg: RunConfig):
    if cfg.threads <= 1:
        return map, None
    pool = ThreadPoolExecutor(max_workers=cfg.threads)
    return pool.map, pool


def run_packet(cfg: RunConfig) -> Result:
    p, u = cfg.params, unit_system(cfg.units)
    spec = PacketSpec(x0=p["x0"], p0=p["p0"], gamma=p["gamma"], m_order=p["order"],
                      mass=p["mass"], hbar=u.hbar)
    rep = compute_moments(sample_packet(spec, p["t"], n=p["n"]), hbar=u.hbar)
    fine = compute_moments(sample_packet(spec, p["t"], n=2 * p["n"] - 1), hbar=u.hbar)
    cols = ("mean_x", "mean_p", "delta_x", "delta_p", "product", "product_over_half_hbar")
    row = (rep.mean_x, rep.mean_p, rep.delta_x, rep.delta_p, rep.product, rep.product / (u.hbar / 2))
    return Result(cols, [row], {"refinement_delta_product": abs(fine.product - rep.product) / (u.hbar / 2),
                                "norm": rep.norm})


def _amplitude_row(sol, kind):
    def c(z):
        z = complex(np.asarray(z).ravel()[0])
        return z.real, z.imag

    k = float(np.asarray(sol.k).ravel()[0])
    kp = c(sol.k_prime)
    b, cc = c(sol.b_minus), c(sol.c_plus)
    refl = b[0] ** 2 + b[1] ** 2
    trans = (kp[0] / k if kind == "step" else 1.0) * (cc[0] ** 2 + cc[1] ** 2)
    row = [k, *kp, *b, *cc]
    cols = ["k", "k_prime_re", "k_prime_im", "b_minus_re", "b_minus_im", "c_plus_re", "c_plus_im"]
    if kind == "barrier":
        row += [*c(sol.a_plus), *c(sol.a_minus)]
        cols += ["a_plus_re", "a_plus_im", "a_minus_re", "a_minus_im"]
    row += [refl, trans]
    cols += ["reflection", "transmission"]
    return tuple(cols), tuple(row)


def run_step(cfg: RunConfig) -> Result:
    p, u = cfg.params, unit_system(cfg.units)
    sol = step_amplitudes(p["k"], StepPotential(p["v0"]), p["mass"], u.hbar)
    cols, row = _amplitude_row(sol, "step")
    return Result(cols, [row], {"flux_error": float(np.max(sol.flux_error("step"))), "residual": sol.residual})


def run_barrier(cfg: RunConfig) -> Result:
    p, u = cfg.params, unit_system(cfg.units)
    sol = barrier_amplitudes(p["energy"], BarrierPotential(p["v0"], p["a"]), p["mass"], u.hbar)
    cols, row = _amplitude_row(sol, "barrier")
    return Result(cols, [row], {"flux_error": float(np.max(sol.flux_error("barrier"))), "residual": sol.residual})


def _kgrid(cfg: RunConfig, gamma: float, n_k=None) -> KGrid:
    p, u = cfg.params, unit_system(cfg.units)
    return KGrid.from_packet(gamma, p["k0_over_sigma"], n_points=n_k or p["n_k"],
                             cutoff_sigmas=p["cutoff_sigmas"], mass=p["mass"], hbar=u.hbar)


def _refinement(grid_fine: KGrid, potentials, ref_rows, cfg) -> float:
    """Largest change of the reported products when the k-grid is refined."""
    worst = 0.0
    unit = grid_fine.hbar / 2
    for pot, row in zip(potentials, ref_rows):
        for branch, old in zip(("reflected", "transmitted"), row[-2:]):
            if not math.isfinite(old):
                continue
            new = branch_uncertainty_product(grid_fine, pot, branch, mode=cfg.params["mode"],
                                             distance=cfg.params["distance"]).product / unit
            worst = max(worst, abs(new - old))
    return worst


def run_sweep_cliff(cfg: RunConfig) -> Result:
    p = cfg.params
    grid = _kgrid(cfg, p["gamma"])
    ratios = np.geomspace(p["ratio_min"], p["ratio_max"], p["n_ratios"])
    table = sweep_step_depth(grid, ratios, threads=cfg.threads, mode=p["mode"], distance=p["distance"])
    fine = _kgrid(cfg, p["gamma"], 2 * p["n_k"] - 1)
    ends = [table.rows[0], table.rows[-1]]
    delta = _refinement(fine, [StepPotential(r[0] * grid.e0) for r in ends], ends, cfg)
    diag = {"e0": grid.e0, "sigma_k": grid.sigma_k, "k0": grid.k0, "refinement_delta_product": delta,
            "waist_times": table.diagnostics}
    return Result(table.columns, table.rows, diag)


def run_sweep_well(cfg: RunConfig) -> Result:
    p = cfg.params
    dx1 = p["delta_x1"]
    grid = _kgrid(cfg, dx1 * math.sqrt(2))
    widths = np.linspace(0.0, p["width_max"] * dx1, p["n_widths"])
    rows, times, ends = [], [], []
    for ratio in p["v0_over_e0"]:
        v0 = ratio * grid.e0
        table = sweep_barrier_width(grid, v0, widths, threads=cfg.threads, mode=p["mode"], distance=p["distance"])
        rows += [(ratio, *r) for r in table.rows]
        times += table.diagnostics
        ends.append((BarrierPotential(v0, table.rows[-1][0]), table.rows[-1]))
    fine = _kgrid(cfg, dx1 * math.sqrt(2), 2 * p["n_k"] - 1)
    delta = _refinement(fine, [e[0] for e in ends], [e[1] for e in ends], cfg)
    diag = {"e0": grid.e0, "sigma_k": grid.sigma_k, "k0": grid.k0, "refinement_delta_product": delta,
            "waist_times": times}
    return Result(("v0_over_e0", "a", "product_reflected", "product_transmitted"), rows, diag)


def run_mfp(cfg: RunConfig) -> Result:
    p = cfg.params
    medium = MediumSpec(n_e=p["n"], n_p=p["n"], n_gamma=p["n_gamma"], temperature=p["T"], coulomb_log=p["log_lambda"])
    rep = analyse(medium, kinetic_factor=p["kinetic_factor"])
    cols = ("process", "sigma_m2", "density_m3", "l_m", "gamma_packet_m", "delta_p", "delta_e_j", "tau_s",
            "n_collisions")
    rows = []
    for name, sigma, n, coh in (("rutherford", rep.sigma_rutherford, medium.n_p, rep.rutherford),
                                ("thomson", rep.sigma_thomson, medium.n_gamma, rep.thomson)):
        rows.append((name, sigma, n, coh.l, coh.gamma_packet, coh.delta_p, coh.delta_e, coh.tau, rep.n_collisions))
    identity = max(max(r.identity_errors().values()) for r in (rep.rutherford, rep.thomson))
    return Result(cols, rows, {"electron_speed": rep.electron_speed, "identity_error": identity,
                               "units_note": "mfp always reports SI"})


def run_transform(cfg: RunConfig) -> Result:
    p, u = cfg.params, unit_system(cfg.units)
    mass = p["mass"]
    state = WidthState(p["p0"], p["dp_l"], p["dp_t"], p["dx_l"], p["dx_t"], mass=mass, hbar=u.hbar, c=u.c)
    lifetime = energy_width = math.nan
    op = p["op"]
    if op == "boost":
        out = lorentz_boost(state, p["beta"])
    elif op == "potential-nonrel":
        out = add_potential_nonrel(state, p["v0"])
    elif op == "potential-rel":
        out = add_potential_rel(state, p["v0"])
    elif op == "scale":
        out = scale_transform(state, p["lam"])
    else:
        spec = InterfaceSpec(p["kind"], work_function=p["work_function"],
                             m_eff=p["m_eff"],
                             mu=p["mu"], eps=p["eps"], rho=p["rho"], epsilon0=u.epsilon0)
        res = cross_interface(state, spec)
        out = res.state
        if res.lifetime is not None:
            lifetime, energy_width = res.lifetime, res.energy_width
    cols = ("stage", "p0_l", "delta_p_l", "delta_p_t", "delta_x_l", "delta_x_t", "mass", "energy", "offset",
            "product_l", "product_t", "lifetime", "energy_width")
    rows = []
    for stage, s, lt, ew in (("in", state, math.nan, math.nan), ("out", out, lifetime, energy_width)):
        pl, pt = s.products()
        rows.append((stage, s.p0_l, s.delta_p_l, s.delta_p_t, s.delta_x_l, s.delta_x_t, s.mass, s.energy,
                     s.offset, pl, pt, lt, ew))
    return Result(cols, rows, {"product_change_l": abs(rows[1][9] - rows[0][9])})


def run_correlate(cfg: RunConfig) -> Result:
    p = cfg.params
    mode = p["mode"]
    mapper, pool = _ordered_map(cfg)
    try:
        if mode == "thermal":
            dmax = p["delta_max"]
            deltas = np.linspace(-dmax, dmax, p["n_delta"])
            curve = photon_correlation_curve(p["T"], p1=(p["p1"], 0.0, 0.0), deltas=deltas, map_fn=mapper)
            c = curve.c_values
            w_m, w_lsq, resid = curve.fitted_width, curve.lsq_width, curve.fit_residual
            unit = "k_BT"
        else:
            dim = p["dim"]
            fa = WeightFn(tuple(np.zeros(dim)), tuple(np.full(dim, p["sigma_a"])))
            fb = WeightFn(tuple(np.zeros(dim)), tuple(np.full(dim, p["sigma_b"])))
            dmax = p["delta_max"]
            deltas = np.linspace(-dmax, dmax, p["n_delta"])

            def value(d):
                vec = np.zeros(dim)
                vec[0] = d
                if mode == "decay2":
                    return decay_correlation_2body(fa, vec, eps_e=p["eps_e"])
                if mode == "decay3":
                    return decay_correlation_3body(fa, vec)
                return collision_correlation(fa, fb, vec)

            raw = np.array(list(mapper(value, deltas)))
            peak = value(0.0)
            c = np.real(raw / peak)
            w_m, w_lsq, resid = fit_gaussian_width(deltas, c)
            unit = "momentum"
    finally:
        if pool is not None:
            pool.shutdown()
    summary = {"fitted_width": w_m, "lsq_width": w_lsq, "fit_residual": resid, "width_unit": unit,
               "width_convention": "C = exp(-delta^2 / (4 w^2))"}
    return Result(("delta", "c_value"), list(zip(deltas.tolist(), c.tolist())), summary, sidecar=summary)


RUNNERS = {
    "packet": run_packet,
    "step": run_step,
    "barrier": run_barrier,
    "sweep-cliff": run_sweep_cliff,
    "sweep-well": run_sweep_well,
    "mfp": run_mfp,
    "transform": run_transform,
    "correlate": run_correlate,
}


def run(cfg: RunConfig) -> Result:
    return RUNNERS[cfg.subcommand](cfg)


# ---------------------------------------------------------------- output

def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    return "%.12g" % float(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def to_csv(result: Result) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(result.columns)
    for row in result.rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _echo_value(v):
    # keep non-finite settings (e.g. a switched-off regulator) legible
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def envelope(cfg: RunConfig, data, diagnostics: dict) -> dict:
    echo = {k: _echo_value(v) for k, v in cfg.echo().items()}
    return {"version": __version__, "config": _jsonable(echo), "data": _jsonable(data),
            "diagnostics": _jsonable(diagnostics)}


def to_json(cfg: RunConfig, result: Result) -> str:
    data = [dict(zip(result.columns, row)) for row in result.rows]
    return json.dumps(envelope(cfg, data, result.diagnostics), indent=2, allow_nan=False) + "\n"


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"wavepacket: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # argparse: --help, --version or a usage error
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        result = run(cfg)
    except NumericalError as exc:
        env = envelope(cfg, None, {"error": str(exc), "error_type": type(exc).__name__})
        print(json.dumps(env, indent=2, allow_nan=False), file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, ZeroDivisionError) as exc:
        print(f"wavepacket: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.output_format == "json":
        _write(cfg.output_path, to_json(cfg, result))
    else:
        _write(cfg.output_path, to_csv(result))
        if result.sidecar is not None:
            side = json.dumps(envelope(cfg, None, result.sidecar), indent=2, allow_nan=False) + "\n"
            if cfg.output_path is None:
                sys.stderr.write(side)
            else:
                _write(cfg.output_path + ".summary.json", side)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
