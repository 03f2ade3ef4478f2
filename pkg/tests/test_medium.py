import math

import pytest
from hypothesis import given, strategies as st

from wavepacket import medium
from wavepacket.constants import M_ELECTRON

# frozen from the constants module: f = 3, T = 3000 K, log Lambda = 10
SIGMA_RU = 4.331930e-16
L_RU = 5.771078e-3
SIGMA_TH = 6.652459e-29
L_TH = 37.58010


def test_thomson():
    assert medium.sigma_thomson() == pytest.approx(SIGMA_TH, rel=1e-6)
    assert medium.classical_electron_radius() == pytest.approx(2.8179403e-15, rel=1e-6)


def test_rutherford():
    assert medium.sigma_rutherford(3000.0, 10.0) == pytest.approx(SIGMA_RU, rel=1e-6)
    # sigma ~ 1 / T^2 and ~ 1 / f^2
    assert medium.sigma_rutherford(6000.0, 10.0) == pytest.approx(SIGMA_RU / 4, rel=1e-12)
    assert medium.sigma_rutherford(3000.0, 10.0, kinetic_factor=1.0) == pytest.approx(9 * SIGMA_RU, rel=1e-12)


def test_analyse_defaults():
    rep = medium.analyse(medium.MediumSpec())
    assert rep.l_rutherford == pytest.approx(L_RU, rel=1e-6)
    assert rep.l_thomson == pytest.approx(L_TH, rel=1e-6)
    assert rep.n_collisions == pytest.approx(L_TH / L_RU, rel=1e-6)
    assert rep.electron_speed == pytest.approx(math.sqrt(3 * 1.380649e-23 * 3000 / M_ELECTRON), rel=1e-12)


@given(st.floats(1e-12, 1e6), st.floats(1.0, 1e8), st.floats(1e-40, 1e-20))
def test_coherence_identities(l, v, hbar):
    rep = medium.coherence_from_path(l, v, hbar)
    assert max(rep.identity_errors(hbar).values()) < 1e-12


@pytest.mark.parametrize("call", [
    lambda: medium.sigma_rutherford(0.5, 10.0),
    lambda: medium.sigma_rutherford(3000.0, -1.0),
    lambda: medium.mean_free_path(0.0, 1.0),
    lambda: medium.coherence_from_path(-1.0, 1.0),
    lambda: medium.collision_ratio(1.0, 0.0),
    lambda: medium.MediumSpec(temperature=0.0),
    lambda: medium.MediumSpec(n_e=-1.0),
])
def test_invalid_inputs(call):
    with pytest.raises(ValueError):
        call()


def test_definitional_examples():
    r = medium.classical_electron_radius()
    assert medium.sigma_thomson() / r**2 == pytest.approx(8 * math.pi / 3, rel=1e-15)
    assert medium.sigma_rutherford(3000.0, 0.0) == 0.0
    assert medium.mean_free_path(2.0, 6.0) == pytest.approx(medium.mean_free_path(2.0, 3.0) / 2, rel=1e-15)
    assert medium.collision_ratio(5.0, 5.0) == 1.0
    assert medium.collision_ratio(5.0, 5.7e-3) == pytest.approx(877.19, rel=1e-4)
    rep = medium.coherence_from_path(1.0, 1.0, 1.0)
    assert (rep.delta_p, rep.delta_e, rep.tau) == (1.0, 1.0, 1.0)
    assert rep.gamma_packet == pytest.approx(1 / math.sqrt(2), rel=1e-15)


@given(st.floats(1e-35, 1e-10), st.floats(1e10, 1e30))
def test_path_consistency(sigma, n):
    assert medium.mean_free_path(sigma, n) * sigma * n == pytest.approx(1.0, rel=1e-12)
    assert medium.mean_free_path(sigma * 1.5, n) < medium.mean_free_path(sigma, n)
    assert medium.mean_free_path(sigma, n * 1.5) < medium.mean_free_path(sigma, n)


def test_paper_rounded_pipeline():
    # rounded cross sections 0.6e-28 and 4.4e-16 m^2 give N_T ~ 7.3e3
    l_th = medium.mean_free_path(0.6e-28, 4e26)
    l_ru = medium.mean_free_path(4.4e-16, 4e17)
    assert medium.collision_ratio(l_th, l_ru) == pytest.approx(7.33e3, rel=1e-3)
