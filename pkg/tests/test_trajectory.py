import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from relcavity.bogoliubov import check_identities
from relcavity.modes import CavityConfig
from relcavity.trajectory import AccelerationProfile, evolve_fourier, evolve_segments, free_frequencies


def diff(x, y):
    if x.bogoliubov.fermionic:
        return float(np.max(np.abs(x.A - y.A)))
    return float(max(np.max(np.abs(x.alpha - y.alpha)), np.max(np.abs(x.beta - y.beta))))


# -- profiles ---------------------------------------------------------------------


def test_segment_fourier_against_direct_quadrature():
    p = AccelerationProfile.from_segments([(0.7, 0.02), (1.1, -0.03), (0.4, 0.0), (0.9, 0.01)])
    for nu in (0.0, 0.8, 3.3, 12.0):
        re = quad(lambda t: math.cos(nu * t) * float(p.acceleration(t)), 0, p.duration, points=[0.7, 1.8, 2.2], limit=200)[0]
        im = quad(lambda t: -math.sin(nu * t) * float(p.acceleration(t)), 0, p.duration, points=[0.7, 1.8, 2.2], limit=200)[0]
        assert p.fourier(nu) == pytest.approx(complex(re, im), abs=1e-12)


def test_sampled_gaussian_fourier_transform():
    A, sig = 0.05, 0.8
    c = 7 * sig
    tau = np.linspace(0.0, 2 * c, 801)
    p = AccelerationProfile.from_samples(tau, A * np.exp(-0.5 * ((tau - c) / sig) ** 2))
    for nu in (0.0, 1.0, 2.5, 4.0):
        exact = A * sig * math.sqrt(2 * math.pi) * np.exp(-1j * nu * c - 0.5 * (nu * sig) ** 2)
        assert abs(p.fourier(nu) - exact) < 1e-8


def test_resonant_drive_grows_linearly_in_time():
    nu = 2.0 * math.pi / 1.5
    out = []
    for periods in (4, 8):
        T = periods * 1.5
        tau = np.linspace(0.0, T, 40 * periods + 1)
        p = AccelerationProfile.from_samples(tau, 0.01 * np.sin(nu * tau))
        out.append(abs(p.fourier(nu)))
        assert out[-1] == pytest.approx(0.01 * T / 2, rel=1e-5)
    assert out[1] / out[0] == pytest.approx(2.0, rel=1e-5)


def test_json_round_trip_segments_and_samples():
    seg = AccelerationProfile.from_json({"segments": [{"duration_over_L": 2.0, "hL": 0.01}, {"duration_over_L": 1.0, "hL": -0.02}]}, L=2.0)
    np.testing.assert_allclose(seg.durations, [4.0, 2.0])
    np.testing.assert_allclose(seg.accelerations, [0.005, -0.01])
    again = AccelerationProfile.from_json(json.dumps(seg.to_json(L=2.0)), L=2.0)
    np.testing.assert_allclose(again.durations, seg.durations)
    smp = AccelerationProfile.from_json({"tau_over_L": [0, 1, 2, 3, 4], "aL": [0, 0.01, 0.02, 0.01, 0]})
    assert smp.kind == "sampled" and smp.duration == 4.0
    assert AccelerationProfile.from_json(smp.to_json()).to_json() == smp.to_json()


@pytest.mark.parametrize("bad", [{}, {"segments": [{"hL": 0.1}]}, [1, 2], {"tau_over_L": [0, 1, 2], "aL": [0, 1, 2]}])
def test_json_rejects_malformed(bad):
    with pytest.raises(ValueError):
        AccelerationProfile.from_json(bad)


def test_profile_validation():
    with pytest.raises(ValueError):
        AccelerationProfile.from_segments([(1.0, 0.1), (-1.0, 0.1)])
    with pytest.raises(ValueError):
        AccelerationProfile.from_samples([0, 1, 1, 2], [0, 0, 0, 0])
    p = AccelerationProfile.from_segments([(1.0, 2.5)])
    with pytest.raises(ValueError):
        evolve_fourier(CavityConfig(bc="dirichlet"), p, 3)
    with pytest.raises(ValueError):
        evolve_segments(CavityConfig(bc="dirichlet"), AccelerationProfile.from_samples([0, 1, 2, 3], [0, 0.1, 0.1, 0]), 3)


def test_acceleration_lookup_and_inverse():
    p = AccelerationProfile.from_segments([(1.0, 0.1), (2.0, -0.2)], tau0=1.0)
    np.testing.assert_allclose(p.acceleration([0.5, 1.5, 2.5, 3.9, 4.5]), [0, 0.1, -0.2, -0.2, 0])
    inv = p.inverse()
    assert inv.backward and list(inv.durations) == [-2.0, -1.0]
    with pytest.raises(ValueError):
        inv.fourier(1.0)


# -- evolution ------------------------------------------------------------------------


@pytest.mark.parametrize("bc,mass", [("dirichlet", 0.0), ("neumann", 1.0), ("dirac_mit", 1.0)])
def test_zero_profile_gives_free_phases(bc, mass):
    cfg = CavityConfig(bc=bc, mass=mass)
    T = 3.7
    w, _ = free_frequencies(cfg, 4)
    for res in (evolve_fourier(cfg, AccelerationProfile.zero(T), 4), evolve_segments(cfg, AccelerationProfile.zero(T), 4)):
        if cfg.fermionic:
            np.testing.assert_allclose(res.A, np.diag(np.exp(1j * w * T)), atol=1e-15)
        else:
            assert np.all(res.beta == 0)
            np.testing.assert_allclose(res.alpha, np.diag(np.exp(1j * w * T)), atol=1e-15)


@pytest.mark.parametrize("bc,mass", [("dirichlet", 1.0), ("dirac_mit", 1.0)])
def test_zero_duration_segment_is_identity(bc, mass):
    cfg = CavityConfig(bc=bc, mass=mass)
    res = evolve_segments(cfg, AccelerationProfile.from_segments([(0.0, 0.05)]), 4)
    if cfg.fermionic:
        np.testing.assert_allclose(res.A, np.eye(8), atol=1e-14)
    else:
        np.testing.assert_allclose(res.alpha, np.eye(4), atol=1e-14)
        np.testing.assert_allclose(res.beta, 0, atol=1e-14)


@pytest.mark.parametrize("bc,mass", [("dirichlet", 1.0), ("neumann", 1.0), ("dirac_mit", 1.0)])
def test_profile_then_inverse_is_identity(bc, mass):
    cfg = CavityConfig(bc=bc, mass=mass)
    p = AccelerationProfile.from_segments([(1.3, 0.03), (0.5, 0.0), (0.8, -0.02)])
    res = evolve_segments(cfg, p.then(p.inverse()), 4)
    if cfg.fermionic:
        np.testing.assert_allclose(res.A, np.eye(8), atol=1e-12)
    else:
        np.testing.assert_allclose(res.alpha, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(res.beta, 0, atol=1e-12)


@pytest.mark.parametrize("bc,mass", [("dirichlet", 1.0), ("neumann", 0.5), ("dirac_mit", 1.0)])
def test_top_hat_composition_matches_fourier(bc, mass):
    cfg = CavityConfig(bc=bc, mass=mass)
    d = []
    for h in (0.02, 0.01):
        p = AccelerationProfile.from_segments([(2.3, h)])
        d.append(diff(evolve_segments(cfg, p, 5), evolve_fourier(cfg, p, 5)))
    assert d[0] / d[1] == pytest.approx(4.0, rel=0.2)


def test_mirror_segments_coherent_sum():
    cfg = CavityConfig(bc="dirichlet", mass=1.0)
    d = []
    for h in (0.02, 0.01):
        p = AccelerationProfile.from_segments([(1.5, h), (1.5, -h)])
        comp, four = evolve_segments(cfg, p, 5), evolve_fourier(cfg, p, 5)
        d.append(float(np.max(np.abs(np.abs(comp.beta) - np.abs(four.beta)))))
    assert d[0] / d[1] == pytest.approx(4.0, rel=0.25)


def test_quadrature_segments_agree_with_perturbative():
    cfg = CavityConfig(bc="dirichlet", mass=1.0)
    d = []
    for h in (0.04, 0.02):
        p = AccelerationProfile.from_segments([(1.0, h), (0.5, -h)])
        d.append(diff(evolve_segments(cfg, p, 4, method="quadrature"), evolve_segments(cfg, p, 4)))
    assert d[0] < 0.1
    assert d[0] / d[1] == pytest.approx(4.0, rel=0.25)


def test_evolution_identity_residuals_within_budget():
    cfg = CavityConfig(bc="dirichlet", mass=1.0)
    p = AccelerationProfile.from_segments([(1.0, 0.01), (2.0, -0.01)])
    for res in (evolve_segments(cfg, p, 8), evolve_fourier(cfg, p, 8)):
        r = check_identities(res.bogoliubov)
        assert r.max_residual <= 50 * 0.01**2 * 3.0**2


segments = st.lists(st.tuples(st.floats(0.1, 3.0), st.floats(-0.05, 0.05)), min_size=1, max_size=4)


@settings(max_examples=8, deadline=None)
@given(segments, st.sampled_from([("dirichlet", 1.0), ("neumann", 1.0), ("dirac_mit", 1.0)]))
def test_random_profiles_composition_vs_fourier(seg, fam):
    hmax = max(abs(a) for _, a in seg)
    if hmax < 1e-3:
        return
    cfg = CavityConfig(bc=fam[0], mass=fam[1])
    d = []
    for scale in (1.0, 0.5):
        p = AccelerationProfile.from_segments([(t, scale * a) for t, a in seg])
        d.append(diff(evolve_segments(cfg, p, 4), evolve_fourier(cfg, p, 4)))
    T = sum(t for t, _ in seg)
    assert d[0] <= 20 * (hmax * (1 + T)) ** 2
    if d[0] > 1e-10:
        assert d[0] / d[1] == pytest.approx(4.0, rel=0.25)
