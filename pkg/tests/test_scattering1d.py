import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import step_branch_amplitude, waist_product_kspace, well_branch_amplitude
from wavepacket.errors import EmptyBranchError, NumericalError
from wavepacket.packets import compute_moments, evaluate_packet
from wavepacket.scattering1d import (
    BarrierPotential,
    KGrid,
    StepPotential,
    assemble_3d,
    assemble_branch,
    barrier_amplitudes,
    barrier_closed_form,
    branch_uncertainty_product,
    step_amplitudes,
    sweep_barrier_width,
    sweep_step_depth,
)
from wavepacket.packets import PacketSpec

GRID = KGrid.from_packet(1.0, 10.0)


def test_step_example():
    sol = step_amplitudes([1.0], StepPotential(1.5))
    assert sol.b_minus[0] == pytest.approx(-1 / 3, abs=1e-15)
    assert sol.c_plus[0] == pytest.approx(2 / 3, abs=1e-15)


def test_step_evanescent_total_reflection():
    sol = step_amplitudes(np.linspace(0.1, 0.9, 9), StepPotential(-0.5))
    assert np.allclose(np.abs(sol.b_minus), 1.0, atol=1e-14)
    assert np.max(sol.flux_error("step")) < 1e-14


@given(st.floats(0.05, 20), st.floats(-50, 50))
def test_step_flux(k, v0):
    sol = step_amplitudes([k], StepPotential(v0))
    assert sol.flux_error("step")[0] < 1e-12
    assert sol.residual < 1e-12


@settings(max_examples=200)
@given(st.floats(0.01, 50), st.floats(-60, 60), st.floats(0, 8))
def test_barrier_flux(energy, v0, a):
    k2 = 2 * (energy + v0)
    if abs(k2) * a * a < 1e-10 and a > 0:
        return
    try:
        sol = barrier_amplitudes(energy, BarrierPotential(v0, a))
    except NumericalError:
        # only raised when the interior wavenumber vanishes
        assert abs(k2) < 1e-6
        return
    assert sol.flux_error("barrier") < 1e-10
    assert sol.residual < 1e-10


def test_zero_width_is_transparent():
    sol = barrier_amplitudes(np.array([0.3, 2.0]), BarrierPotential(1.7, 0.0))
    assert np.allclose(sol.b_minus, 0, atol=1e-15)
    assert np.allclose(sol.c_plus, 1, atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_transmission_resonance(n):
    # k' a = n pi makes the well transparent
    v0, energy = 1.0, 1.0
    kp = math.sqrt(2 * (energy + v0))
    sol = barrier_amplitudes(energy, BarrierPotential(v0, n * math.pi / kp))
    assert abs(sol.b_minus) < 1e-13


def test_textbook_coefficients():
    energy = np.linspace(0.2, 5, 25)
    for v0, a in [(1.0, 0.7), (-0.5, 2.0), (3.0, 2.3)]:
        sol = barrier_amplitudes(energy, BarrierPotential(v0, a))
        ap, am, b, _ = barrier_closed_form(energy, BarrierPotential(v0, a))
        assert np.allclose(sol.b_minus, b, rtol=0, atol=1e-12)
        assert np.allclose(sol.a_plus, ap, rtol=0, atol=1e-12)
        assert np.allclose(sol.a_minus, am, rtol=0, atol=1e-12)


def test_transmission_against_transfer_matrix():
    energy = np.linspace(0.2, 5, 25)
    k = np.sqrt(2 * energy)
    for v0, a in [(1.0, 0.7), (-0.5, 2.0), (3.0, 2.3)]:
        sol = barrier_amplitudes(energy, BarrierPotential(v0, a))
        kp = np.sqrt((k * k + 2 * v0).astype(complex))
        s = kp / k
        denom = np.cos(kp * a) - 0.5j * (s + 1 / s) * np.sin(kp * a)
        assert np.allclose(sol.c_plus, np.exp(-1j * k * a) / denom, rtol=0, atol=1e-12)
        assert np.allclose(sol.b_minus, 0.5j * (s - 1 / s) * np.sin(kp * a) / denom, rtol=0, atol=1e-12)


def test_kgrid_validation():
    with pytest.raises(ValueError):
        KGrid(k0=1.0, sigma_k=1.0)
    with pytest.raises(ValueError):
        KGrid(k0=20.0, sigma_k=1.0, n_points=10)


def test_incident_branch_is_free_packet():
    t = -3.0
    x = np.linspace(-35, -7, 301)
    wave = assemble_branch(GRID, StepPotential(1.0), "incident", t, x=x)
    # the incident side sits at potential v0 = 1, a global phase exp(-i v0 t)
    ref = evaluate_packet(GRID.incident_packet(), x, t) * np.exp(-1j * t)
    assert np.max(np.abs(wave.values - ref)) < 1e-6


@pytest.mark.parametrize("pot", [StepPotential(0.5 * GRID.e0), BarrierPotential(GRID.e0, 1.3)])
def test_branch_norms_sum_to_one(pot):
    t = 2.0
    norms = [compute_moments(assemble_branch(GRID, pot, b, t)).norm for b in ("reflected", "transmitted")]
    assert sum(norms) == pytest.approx(1.0, abs=1e-9)


def test_evanescent_contamination_rejected():
    with pytest.raises(ValueError, match="evanescent"):
        branch_uncertainty_product(GRID, StepPotential(-0.95 * GRID.e0), "transmitted")


def test_empty_branch():
    with pytest.raises(EmptyBranchError):
        branch_uncertainty_product(GRID, BarrierPotential(GRID.e0, 0.0), "reflected")


def _oracle(pot, branch):
    k0, s = GRID.k0, GRID.sigma_k
    lo, hi = k0 - 8 * s, k0 + 8 * s
    if isinstance(pot, StepPotential):
        amp = step_branch_amplitude(branch, k0, s, pot.v0)
        if branch == "reflected":
            return waist_product_kspace(amp, -hi, -lo)
        q = 2 * pot.v0
        return waist_product_kspace(amp, math.sqrt(lo * lo + q), math.sqrt(hi * hi + q))
    amp = well_branch_amplitude(branch, k0, s, pot.v0, pot.a)
    return waist_product_kspace(amp, -hi, -lo) if branch == "reflected" else waist_product_kspace(amp, lo, hi)


CASES = [StepPotential(r * GRID.e0) for r in (0.02, 1.0, 50.0)] + [
    BarrierPotential(GRID.e0, a) for a in (0.3, 1.0, 2.2, math.pi / 10)
]


@pytest.mark.parametrize("pot", CASES, ids=repr)
@pytest.mark.parametrize("branch", ["reflected", "transmitted"])
def test_branch_product_against_kspace_oracle(pot, branch):
    bp = branch_uncertainty_product(GRID, pot, branch)
    assert bp.product == pytest.approx(_oracle(pot, branch), rel=1e-7)
    assert bp.product >= 0.5 * (1 - 1e-9)


def test_alias_refinement():
    # a long-delayed reflection needs a finer k-grid than the default
    bp = branch_uncertainty_product(GRID, BarrierPotential(GRID.e0, 2.2), "reflected")
    assert bp.diagnostics["k_nodes"] > GRID.n_points


def test_resonant_reflection_resembles_first_hermite():
    # r(k) vanishes at the carrier: the reflected packet looks like k * Gaussian
    a = math.pi / math.sqrt(GRID.k0**2 + 2 * GRID.e0)
    bp = branch_uncertainty_product(GRID, BarrierPotential(GRID.e0, a), "reflected")
    assert 1.3 < bp.product < 1.5


def test_fixed_mode_is_not_below_waist():
    pot = StepPotential(5 * GRID.e0)
    waist = branch_uncertainty_product(GRID, pot, "transmitted")
    fixed = branch_uncertainty_product(GRID, pot, "transmitted", mode="fixed", distance=30.0)
    assert fixed.product >= waist.product * (1 - 1e-9)
    assert fixed.diagnostics["centroid"] == pytest.approx(30.0, rel=1e-3)
    with pytest.raises(ValueError):
        branch_uncertainty_product(GRID, pot, "transmitted", mode="fixed")


def test_sweeps_are_thread_independent():
    ratios = [0.02, 0.5, 3.0, 50.0]
    one = sweep_step_depth(GRID, ratios, threads=1)
    four = sweep_step_depth(GRID, ratios, threads=4)
    assert repr(one.rows) == repr(four.rows)
    widths = np.linspace(0, 1.5, 5)
    a = sweep_barrier_width(GRID, GRID.e0, widths, 1).rows
    assert repr(a) == repr(sweep_barrier_width(GRID, GRID.e0, widths, 4).rows)


def test_well_sweep_zero_width():
    rows = sweep_barrier_width(GRID, GRID.e0, [0.0]).rows
    assert math.isnan(rows[0][1])
    assert rows[0][2] == pytest.approx(1.0, rel=1e-9)


def test_assemble_3d():
    tr = (PacketSpec(gamma=1.5), PacketSpec(gamma=0.7, p0=0.4))
    w = assemble_3d(tr, GRID, StepPotential(GRID.e0), "transmitted", t=2.0)
    mom = w.moments()
    assert mom["x"].delta_x**2 == pytest.approx(1.5**2 / 2 + 4 / (2 * 1.5**2), rel=1e-9)
    assert mom["z"].norm == pytest.approx(compute_moments(assemble_branch(GRID, StepPotential(GRID.e0),
                                                                          "transmitted", 2.0)).norm)
    vals = w.evaluate(np.linspace(-2, 2, 5), np.linspace(-1, 1, 3), np.linspace(10, 20, 7))
    assert vals.shape == (5, 3, 7)
    with pytest.raises(ValueError):
        assemble_3d(tr[:1], GRID, StepPotential(1.0))


def test_no_step_transmits_free_packet():
    pot = StepPotential(0.0)
    with pytest.raises(EmptyBranchError):
        assemble_branch(GRID, pot, "reflected", 2.0)
    x = np.linspace(0, 30, 301)
    wave = assemble_branch(GRID, pot, "transmitted", 2.0, x=x)
    assert np.max(np.abs(wave.values - evaluate_packet(GRID.incident_packet(), x, 2.0))) < 1e-6


def test_incident_product():
    bp = branch_uncertainty_product(GRID, StepPotential(GRID.e0), "incident")
    assert bp.product == pytest.approx(0.5, rel=1e-6)
    assert bp.waist_time == pytest.approx(0.0, abs=1e-5)


def test_cliff_curve_smooth_and_monotone():
    rows = sweep_step_depth(GRID, np.geomspace(0.02, 50, 40), threads=4).rows
    trans = np.array([r[2] for r in rows])
    assert np.all(np.abs(np.diff(trans)) / trans[:-1] < 0.05)
    assert np.all(np.diff(trans) > -1e-9)


def test_3d_factorisation():
    tr = (PacketSpec(gamma=1.2), PacketSpec(gamma=0.6))
    pot = StepPotential(2 * GRID.e0)
    at0 = assemble_3d(tr, GRID, pot, "transmitted", 0.0)
    later = assemble_3d(tr, GRID, pot, "transmitted", 3.0)
    m0, m3 = at0.moments(), later.moments()
    for axis in ("x", "y"):
        assert m0[axis].product == pytest.approx(0.5, rel=1e-9)
        assert m3[axis].delta_p == pytest.approx(m0[axis].delta_p, rel=1e-9)
    assert later.longitudinal_product().product == branch_uncertainty_product(GRID, pot, "transmitted").product
