import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from relcavity.modes import (
    CavityConfig,
    FieldPoint,
    RootFindingError,
    _bessel_condition,
    dirac_minkowski_roots,
    evaluate_mode,
    maxwell_reduction,
    minkowski_spectrum,
    rindler_spectrum,
    to_standard_basis,
)

GL_X, GL_W = np.polynomial.legendre.leggauss(160)

# (U+, U-) basis: alpha3 = diag(1, -1), beta swaps U+ and U-
A3_U = np.diag([1.0, -1.0])
B_U = np.array([[0.0, 1.0], [1.0, 0.0]])
MIT_LEFT = np.eye(2) - 1j * B_U @ A3_U
MIT_RIGHT = np.eye(2) + 1j * B_U @ A3_U


def nodes(L):
    return 0.5 * L * (GL_X + 1.0), 0.5 * L * GL_W


def gram(spec):
    cfg = spec.config
    s, w = nodes(cfg.L)
    if cfg.fermionic:
        P = np.array([m.profile(s) for m in spec])  # (n, 2, q)
        return np.einsum("aiq,biq,q->ab", P.conj(), P, w)
    P = np.array([np.real(m.profile(s)) for m in spec])
    f = spec.frequencies
    if spec.frame == "minkowski":
        weight = w
    else:
        cs = cfg.chi0 if cfg.h > 0 else cfg.chi1
        weight = w / (cs + np.sign(cfg.h) * s)
    return (f[:, None] + f[None, :]) * np.einsum("aq,bq,q->ab", P, P, weight)


# -- inertial spectra ------------------------------------------------------------


def test_dirichlet_massless_frequencies():
    spec = minkowski_spectrum(CavityConfig(bc="dirichlet"), 4)
    assert spec.mode(3).frequency == pytest.approx(3 * math.pi, rel=1e-15)
    np.testing.assert_allclose(spec.frequencies, math.pi * np.arange(1, 5), rtol=1e-15)


def test_neumann_indices_start_at_zero():
    spec = minkowski_spectrum(CavityConfig(bc="neumann", mass=2.0), 3)
    assert list(spec.indices) == [0, 1, 2]
    np.testing.assert_allclose(spec.frequencies, np.hypot(2.0, math.pi * np.arange(3)))


def test_dirac_first_root_against_bisection_oracle():
    # root of tan x = -x in (pi/2, pi)
    oracle = brentq(lambda x: math.sin(x) + x * math.cos(x), math.pi / 2 + 1e-9, math.pi, xtol=1e-15)
    assert abs(oracle - 2.028757838110434) < 1e-12
    assert abs(dirac_minkowski_roots(1.0, 1)[0] - oracle) < 1e-12
    spec = minkowski_spectrum(CavityConfig(bc="dirac_mit", mass=1.0), 3)
    assert spec.mode(0).k == pytest.approx(oracle, abs=1e-12)


def test_dirac_massless_limit():
    roots = dirac_minkowski_roots(1e-4, 8)
    np.testing.assert_allclose(roots, math.pi * (np.arange(8) + 0.5), atol=1e-3)


@pytest.mark.parametrize("M", [1e-3, 0.5, 1.0, 7.0, 60.0])
def test_dirac_roots_solve_mit_condition(M):
    x = dirac_minkowski_roots(M, 12)
    np.testing.assert_allclose(np.tan(x) / x, -1.0 / M, rtol=1e-9, atol=1e-12)
    assert np.all(np.diff(x) > 0)


@pytest.mark.parametrize("M", [1e-3, 0.3, 1.0, 10.0])
def test_dirac_no_eigenvalue_below_mass_gap(M):
    # |omega| <= mu means imaginary k = i kappa; the condition becomes
    # tanh(kappa L)/(kappa L) = -1/M, whose left side is positive
    kap = np.linspace(1e-6, M, 2001)
    assert np.all(np.tanh(kap) / kap + 1.0 / M > 0)


def test_dirac_labels_and_charge_symmetry_minkowski():
    spec = minkowski_spectrum(CavityConfig(bc="dirac_mit", mass=1.0), 5)
    assert list(spec.indices) == list(range(-5, 5))
    f = spec.frequencies
    np.testing.assert_allclose(f[:5], -f[::-1][:5], rtol=0, atol=1e-10)
    assert np.all(f[5:] > 1.0)


@pytest.mark.parametrize("bc,mass", [("dirichlet", 0.0), ("dirichlet", 3.0), ("neumann", 0.5), ("dirac_mit", 1.0)])
def test_minkowski_orthonormality(bc, mass):
    spec = minkowski_spectrum(CavityConfig(bc=bc, mass=mass), 6)
    np.testing.assert_allclose(gram(spec), np.eye(len(spec)), atol=1e-10)


@pytest.mark.parametrize("bc,mass", [("dirichlet", 0.0), ("neumann", 0.5), ("dirac_mit", 2.0)])
def test_minkowski_boundary_residuals(bc, mass):
    spec = minkowski_spectrum(CavityConfig(bc=bc, mass=mass), 8)
    for m in spec:
        if bc == "dirichlet":
            assert abs(m.profile(0.0)) <= 1e-8 and abs(m.profile(1.0)) <= 1e-8
            assert m.dprofile(0.0) > 0
        elif bc == "neumann":
            assert abs(m.dprofile(0.0)) <= 1e-8 and abs(m.dprofile(1.0)) <= 1e-8
            assert m.profile(0.0) > 0
        else:
            assert np.max(np.abs(MIT_LEFT @ m.profile(0.0))) <= 1e-8
            assert np.max(np.abs(MIT_RIGHT @ m.profile(1.0))) <= 1e-8
            # positive multiple of U+ + iU- at the left wall
            v = m.profile(0.0)
            r = v / np.array([1.0, 1j])
            assert abs(r[0] - r[1]) < 1e-12 and r[0].real > 0 and abs(r[0].imag) < 1e-12


def test_neumann_zero_mode_is_constant():
    cfg = CavityConfig(bc="neumann", mass=0.7)
    spec = minkowski_spectrum(cfg, 2)
    w0 = 0.7
    for t in (0.0, 0.4, 2.5):
        for z in (0.0, 0.3, 1.0):
            v = evaluate_mode(spec, 0, FieldPoint(t, z)).value
            assert v == pytest.approx((2 * w0) ** -0.5 * np.exp(-1j * w0 * t), abs=1e-14)


def test_dirichlet_vanishes_on_walls_at_all_times():
    spec = minkowski_spectrum(CavityConfig(bc="dirichlet", mass=1.0), 4)
    for n in spec.indices:
        for t in (0.0, 1.3, 7.0):
            assert abs(evaluate_mode(spec, n, FieldPoint(t, 0.0)).value) < 1e-15
            assert abs(evaluate_mode(spec, n, FieldPoint(t, 1.0)).value) < 1e-14


def test_out_of_range_point_rejected():
    spec = minkowski_spectrum(CavityConfig(bc="dirichlet"), 2)
    with pytest.raises(ValueError):
        evaluate_mode(spec, 1, FieldPoint(0.0, 1.5))
    rs = rindler_spectrum(CavityConfig(bc="dirichlet", mass=1.0, h=0.5), 2)
    with pytest.raises(ValueError):
        evaluate_mode(rs, 1, FieldPoint(0.0, 0.5))


def test_spinor_values_have_two_components():
    spec = minkowski_spectrum(CavityConfig(bc="dirac_mit", mass=1.0), 2)
    v = evaluate_mode(spec, 0, FieldPoint(0.3, 0.2)).value
    assert v.shape == (2,)
    std = to_standard_basis(v)
    assert np.vdot(std, std).real == pytest.approx(np.vdot(v, v).real)


def test_invalid_configurations():
    with pytest.raises(ValueError):
        CavityConfig(bc="robin")
    with pytest.raises(ValueError):
        CavityConfig(bc="neumann", mass=0.0)
    with pytest.raises(ValueError):
        CavityConfig(bc="dirac_mit", mass=0.0)
    with pytest.raises(ValueError):
        CavityConfig(h=2.0)
    with pytest.raises(ValueError):
        minkowski_spectrum(CavityConfig(), 0)
    with pytest.raises(ValueError):
        rindler_spectrum(CavityConfig(mass=1.0), 3)


# -- accelerated spectra ------------------------------------------------------------


FAMILIES = [("dirichlet", 1.0), ("neumann", 1.0), ("dirac_mit", 1.0)]


@pytest.mark.parametrize("bc,mass", FAMILIES)
@pytest.mark.parametrize("h", [0.3, -0.3])
def test_rindler_orthonormality(bc, mass, h):
    spec = rindler_spectrum(CavityConfig(bc=bc, mass=mass, h=h), 5)
    np.testing.assert_allclose(gram(spec), np.eye(len(spec)), atol=1e-9)


@pytest.mark.parametrize("bc,mass", FAMILIES)
@pytest.mark.parametrize("h", [0.3, -0.3])
def test_rindler_boundary_residuals_and_phases(bc, mass, h):
    spec = rindler_spectrum(CavityConfig(bc=bc, mass=mass, h=h), 5)
    for m in spec:
        if bc == "dirichlet":
            assert abs(m.profile(0.0)) <= 1e-8 and abs(m.profile(1.0)) <= 1e-8
            assert m.dprofile(0.0) > 0
        elif bc == "neumann":
            assert abs(m.dprofile(0.0)) <= 1e-8 and abs(m.dprofile(1.0)) <= 1e-8
            assert m.profile(0.0) > 0
        else:
            assert np.max(np.abs(MIT_LEFT @ m.profile(0.0))) <= 1e-8
            assert np.max(np.abs(MIT_RIGHT @ m.profile(1.0))) <= 1e-8


@pytest.mark.parametrize("bc,mass", FAMILIES)
def test_rindler_direction_independence(bc, mass):
    a = rindler_spectrum(CavityConfig(bc=bc, mass=mass, h=0.1), 6)
    b = rindler_spectrum(CavityConfig(bc=bc, mass=mass, h=-0.1), 6)
    np.testing.assert_allclose(a.frequencies, b.frequencies, rtol=1e-12)


@pytest.mark.parametrize("bc,mass,h", [("dirichlet", 1.0, 0.3), ("neumann", 2.0, 0.3), ("dirac_mit", 1.0, 0.5),
                                       ("dirichlet", 0.5, 0.1), ("dirac_mit", 3.0, 0.2)])
def test_bessel_and_ode_routes_agree(bc, mass, h):
    a = rindler_spectrum(CavityConfig(bc=bc, mass=mass, h=h), 5, method="bessel")
    b = rindler_spectrum(CavityConfig(bc=bc, mass=mass, h=h), 5, method="ode")
    np.testing.assert_allclose(a.frequencies, b.frequencies, rtol=1e-10)
    s = np.linspace(0, 1, 7)
    for ma, mb in zip(a, b):
        np.testing.assert_allclose(ma.profile(s), mb.profile(s), atol=1e-8)


def test_dirichlet_small_h_relation_is_second_order():
    w1 = minkowski_spectrum(CavityConfig(bc="dirichlet", mass=1.0), 1).frequencies[0]
    dev = {}
    for h in (0.1, 0.05):
        Om = rindler_spectrum(CavityConfig(bc="dirichlet", mass=1.0, h=h), 1).frequencies[0]
        dev[h] = h * Om / w1 - 1.0
    assert abs(dev[0.1]) < 0.02
    assert dev[0.05] / dev[0.1] == pytest.approx(0.25, rel=0.05)


@pytest.mark.parametrize("h", [0.5, 0.2, -0.3])
def test_dirac_rindler_charge_symmetry(h):
    cfg = CavityConfig(bc="dirac_mit", mass=1.0, h=h)
    spec = rindler_spectrum(cfg, 5, method="bessel")
    f = spec.frequencies
    np.testing.assert_allclose(f[:5], -f[::-1][:5], rtol=0, atol=1e-10)
    cond = _bessel_condition(cfg)
    scale = max(abs(cond(x)) for x in np.linspace(0.5, f[-1], 50))
    for Om in f:
        assert abs(cond(Om)) <= 1e-9 * scale
        assert abs(cond(-Om)) <= 1e-9 * scale


@pytest.mark.parametrize("bc,mass", [("dirichlet", 1.0), ("neumann", 0.5)])
@pytest.mark.parametrize("h", [0.2, 0.1, 0.05])
def test_root_completeness(bc, mass, h):
    cfg = CavityConfig(bc=bc, mass=mass, h=h)
    spec = rindler_spectrum(cfg, 8)
    Om_max = spec.frequencies[-1] + 1e-9
    w = minkowski_spectrum(cfg, 30).frequencies
    n_mink = int(np.count_nonzero(w < h * Om_max / cfg.L))
    assert abs(len(spec) - n_mink) <= 1


def test_large_acceleration_spectrum():
    spec = rindler_spectrum(CavityConfig(bc="dirichlet", mass=1.0, h=1.9), 4)
    assert np.all(np.diff(spec.frequencies) > 0)
    np.testing.assert_allclose(gram(spec), np.eye(4), atol=1e-9)


def test_rindler_evaluate_uses_frame_coordinate():
    cfg = CavityConfig(bc="dirichlet", mass=1.0, h=0.5)
    spec = rindler_spectrum(cfg, 3)
    m = spec.mode(2)
    v = evaluate_mode(spec, 2, FieldPoint(0.7, cfg.chi0 + 0.25)).value
    assert v == pytest.approx(m.profile(0.25) * np.exp(-0.7j * m.frequency), abs=1e-14)
    left = CavityConfig(bc="dirichlet", mass=1.0, h=-0.5)
    ls = rindler_spectrum(left, 3)
    assert abs(evaluate_mode(ls, 1, FieldPoint(0.0, left.chi1)).value) < 1e-8


# -- Maxwell ---------------------------------------------------------------------------


def test_maxwell_reduction_masses():
    assert maxwell_reduction(1, 1, 1, 1, 0, "I").mass == pytest.approx(math.pi)
    c = maxwell_reduction(1, 1, 1, 1, 1, "II")
    assert c.mass == pytest.approx(math.pi * math.sqrt(2))
    assert c.bc == "neumann" and c.maxwell_pol == "II"
    assert maxwell_reduction(1, 1, 1, 0, 2, "I").bc == "dirichlet"


@pytest.mark.parametrize("m,n,pol", [(0, 0, "I"), (-1, 2, "I"), (0, 1, "II"), (1, 1, "III")])
def test_maxwell_reduction_rejects(m, n, pol):
    with pytest.raises(ValueError):
        maxwell_reduction(1, 1, 1, m, n, pol)


def test_maxwell_pol2_rindler_spectrum_equals_neumann():
    cfg = maxwell_reduction(1.0, 1.0, 1.0, 1, 1, "II", h=0.2)
    a = rindler_spectrum(cfg, 6).frequencies
    b = rindler_spectrum(CavityConfig(bc="neumann", mass=cfg.mass, h=0.2), 6).frequencies
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-10)


# -- properties ---------------------------------------------------------------


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(["dirichlet", "neumann", "dirac_mit"]), st.floats(0.2, 5.0), st.floats(0.05, 1.5))
def test_property_spectrum_direction_and_order(bc, mass, h):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        a = rindler_spectrum(CavityConfig(bc=bc, mass=mass, h=h), 4)
        b = rindler_spectrum(CavityConfig(bc=bc, mass=mass, h=-h), 4)
    np.testing.assert_allclose(a.frequencies, b.frequencies, rtol=1e-10)
    pos = a.frequencies[a.frequencies > 0]
    assert np.all(np.diff(pos) > 0)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["dirichlet", "neumann", "dirac_mit"]), st.floats(0.2, 5.0), st.floats(0.05, 1.0))
def test_property_orthonormal(bc, mass, h):
    spec = rindler_spectrum(CavityConfig(bc=bc, mass=mass, h=h), 3)
    np.testing.assert_allclose(gram(spec), np.eye(len(spec)), atol=1e-8)


def test_root_failure_type_is_runtime_error():
    assert issubclass(RootFindingError, RuntimeError)
