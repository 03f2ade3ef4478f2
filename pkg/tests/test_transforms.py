import math

import pytest
from hypothesis import assume, given, strategies as st

from wavepacket.errors import DomainError
from wavepacket.transforms import (
    InterfaceSpec,
    WidthState,
    add_potential_nonrel,
    add_potential_rel,
    cross_interface,
    lorentz_boost,
    scale_transform,
)

momenta = st.floats(0.05, 50)
widths = st.floats(1e-3, 5)


def states(mass=st.floats(0.1, 10)):
    return st.builds(lambda p, dp, dpt, m, fl, ft: WidthState(p, dp, dpt, fl / dp, ft / dpt, mass=m),
                     momenta, widths, widths, mass, st.floats(0.5, 3), st.floats(0.5, 3))


def close(a: WidthState, b: WidthState, rel=1e-12):
    for name in ("p0_l", "delta_p_l", "delta_p_t", "delta_x_l", "delta_x_t", "energy"):
        assert getattr(a, name) == pytest.approx(getattr(b, name), rel=rel), name


def test_minimum_state():
    s = WidthState.minimum(1.0, 0.2, 0.4)
    assert s.products() == pytest.approx((0.5, 0.5))
    with pytest.raises(ValueError):
        WidthState(1.0, 0.2, 0.2, 1.0, 1.0)


@given(states())
def test_identities(s):
    close(lorentz_boost(s, 0.0), s)
    close(add_potential_nonrel(s, 0.0), s)
    close(add_potential_rel(s, 0.0), s)


@given(states(), st.floats(-0.95, 0.95))
def test_boost_keeps_transverse(s, beta):
    out = lorentz_boost(s, beta)
    assert out.delta_p_t == s.delta_p_t
    assert out.delta_x_t == s.delta_x_t


@given(states(), st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
def test_boost_composition(s, b1, b2):
    # velocity addition
    two = lorentz_boost(lorentz_boost(s, b1), b2)
    one = lorentz_boost(s, (b1 + b2) / (1 + b1 * b2))
    assert two.p0_l == pytest.approx(one.p0_l, rel=1e-12, abs=1e-12 * s.energy)
    assert two.energy == pytest.approx(one.energy, rel=1e-12)
    assert two.delta_p_l == pytest.approx(one.delta_p_l, rel=1e-10)


def test_boost_rejects():
    s = WidthState.minimum(1.0, 0.1)
    with pytest.raises(DomainError):
        lorentz_boost(s, 1.0)
    with pytest.raises(DomainError):
        lorentz_boost(add_potential_nonrel(s, 0.5), 0.1)


def test_nonrel_example():
    s = WidthState.minimum(1.0, 0.1)
    out = add_potential_nonrel(s, 1.5)
    assert out.p0_l == pytest.approx(2.0, rel=1e-15)
    assert out.delta_p_l == pytest.approx(s.delta_p_l / 2, rel=1e-15)
    assert out.delta_x_l == pytest.approx(2 * s.delta_x_l, rel=1e-15)


@given(states(), st.floats(-10, 10))
def test_adiabatic_invariant(s, v0):
    assume(s.p0_l**2 + 2 * s.mass * v0 > 1e-6)
    out = add_potential_nonrel(s, v0)
    assert out.delta_x_l * out.delta_p_l == pytest.approx(s.delta_x_l * s.delta_p_l, rel=1e-12)
    assert (out.delta_p_t, out.delta_x_t) == (s.delta_p_t, s.delta_x_t)
    kinetic = lambda st_: st_.p0_l**2 / (2 * st_.mass) + st_.offset
    assert kinetic(out) == pytest.approx(kinetic(s), rel=1e-12, abs=1e-12)


def test_nonrel_forbidden():
    with pytest.raises(DomainError):
        add_potential_nonrel(WidthState.minimum(1.0, 0.1), -1.0)


@given(states(), st.floats(-5, 5))
def test_rel_round_trip(s, v0):
    # away from threshold: both kinetic energies stay above 1% of |v0|
    kinetic = s.energy - s.mass
    assume(kinetic > 0.01 * abs(v0) and kinetic + v0 > 0.01 * abs(v0))
    back = add_potential_rel(add_potential_rel(s, v0), -v0)
    close(back, s, rel=1e-12)


@given(states(), st.floats(-5, 5))
def test_rel_keeps_transverse(s, v0):
    assume(s.energy + v0 > s.mass * (1 + 1e-6))
    out = add_potential_rel(s, v0)
    assert (out.delta_p_t, out.delta_x_t) == (s.delta_p_t, s.delta_x_t)


def test_rel_matches_nonrel_at_low_momentum():
    s = WidthState.minimum(1e-3, 1e-5)
    v0 = 5e-7
    rel, non = add_potential_rel(s, v0), add_potential_nonrel(s, v0)
    assert rel.p0_l == pytest.approx(non.p0_l, rel=1e-2)
    assert rel.delta_x_l == pytest.approx(non.delta_x_l, rel=1e-2)


def test_ultrarelativistic_sizes_equal():
    s = WidthState.minimum(1e3, 1.0)
    out = add_potential_rel(s, 300.0)
    assert abs(s.delta_x_l / out.delta_x_l - 1) < 1e-3


def test_rel_below_rest_energy():
    with pytest.raises(DomainError):
        add_potential_rel(WidthState.minimum(0.1, 0.01), -0.5)


@given(st.floats(0.01, 10), widths, st.floats(0.01, 100))
def test_scale(p, dp, lam):
    s = WidthState.minimum(p, dp, mass=0.0)
    out = scale_transform(s, lam)
    assert out.products() == pytest.approx(s.products(), rel=1e-12)
    assert out.delta_x_l == pytest.approx(s.delta_x_l / lam, rel=1e-12)


def test_scale_examples():
    s = WidthState.minimum(1.0, 0.1, mass=0.0)
    close(scale_transform(s, 1.0), s)
    assert scale_transform(s, 0.5).delta_x_l == pytest.approx(2 * s.delta_x_l)
    with pytest.raises(DomainError):
        scale_transform(WidthState.minimum(1.0, 0.1), 2.0)


def test_electron_identity_crossing():
    s = WidthState.minimum(0.3, 0.01)
    out = cross_interface(s, InterfaceSpec("electron_metal", work_function=0.0, m_eff=1.0)).state
    close(out, s)


def test_electron_crossing_rules():
    s = WidthState.minimum(0.3, 0.01, 0.02)
    spec = InterfaceSpec("electron_metal", work_function=-0.02, m_eff=0.5)
    out = cross_interface(s, spec).state
    assert out.p0_l**2 / 2 == pytest.approx(-0.02 + 0.3**2 / (2 * 0.5), rel=1e-14)
    assert 0.3 * 0.01 / 0.5 == pytest.approx(out.p0_l * out.delta_p_l, rel=1e-14)
    assert 0.02**2 / 0.5 == pytest.approx(out.delta_p_t**2, rel=1e-14)
    with pytest.raises(DomainError):
        cross_interface(s, InterfaceSpec("electron_metal", work_function=-1.0, m_eff=0.5))


def test_light_dielectric():
    s = WidthState.minimum(1.0, 0.1, mass=0.0)
    out = cross_interface(s, InterfaceSpec("light_dielectric", eps=4.0)).state
    assert out.p0_l == pytest.approx(0.5, rel=1e-15)
    assert out.energy == s.energy


def test_light_absorbing():
    s = WidthState.minimum(1.0, 0.1, mass=0.0)
    res = cross_interface(s, InterfaceSpec("light_absorbing", eps=2.5, rho=3.0, epsilon0=0.7))
    assert res.lifetime == pytest.approx(2.5 * 0.7 * 3.0, rel=1e-15)
    assert res.energy_width == s.hbar / res.lifetime
    with pytest.raises(ValueError):
        InterfaceSpec("light_absorbing", eps=2.0)


@pytest.mark.parametrize("kw", [dict(kind="glass"), dict(kind="electron_metal", m_eff=0.0),
                                dict(kind="light_dielectric", mu=-1.0)])
def test_interface_validation(kw):
    with pytest.raises(ValueError):
        InterfaceSpec(**kw)
