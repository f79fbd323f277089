r"""Field modes and eigenfrequency spectra of a rigid cavity.

Four field families are covered: the Dirichlet and Neumann real scalar,
the Dirac spinor with MIT bag walls and, through :func:`maxwell_reduction`,
the two Maxwell polarisation classes. Every family has an inertial
(``"minkowski"``) and a uniformly accelerated (``"rindler"``) frame.

Conventions
-----------
* Units are such that the cavity has proper length ``L``. Minkowski
  frequencies carry units of 1/length, Rindler frequencies are
  dimensionless (conjugate to the Rindler time ``eta``).
* Spinors are two-component vectors in the orthonormal basis
  ``(U+, U-)`` with ``alpha3 U± = ±U±`` and ``beta U± = U∓``. In the
  explicit representation ``alpha3 = [[0, 1], [1, 0]]``,
  ``beta = diag(1, -1)`` one has ``U± = (1, ±1)/sqrt(2)``; see
  :func:`to_standard_basis`.
* Mode profiles are exposed as functions of the cavity-local coordinate
  ``s = z - z0`` in ``[0, L]`` on the matching slice ``t = eta = 0``. For
  rightward acceleration (``h > 0``) ``chi = chi0 + s``; for leftward
  acceleration (``h < 0``) the reflected Rindler coordinate is
  ``chi~ = chi1 - s``.

Rindler modes are built in one of two ways. ``"bessel"`` uses the
cross-products of imaginary-order Bessel functions from
:mod:`relcavity.specfun`; it is limited to the range where the ascending
series is accurate (``|Omega| <= 80``, ``mu chi1 <= 120``). ``"ode"``
integrates the radial equation in the logarithmic coordinate
``rho = ln chi`` (scalar: ``y'' + (Omega^2 - mu^2 chi^2) y = 0``; spinor:
``w' = i alpha3 (Omega - mu chi beta) w`` with ``psi = chi^{-1/2} w``) and
has no restriction on the size of ``Omega``. ``"auto"`` picks ``"bessel"``
whenever the predicted spectrum fits its range.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from .specfun import MAX_ARGUMENT, MAX_IMAG_ORDER, AccuracyLossError, bessel_i, bessel_i_deriv

__all__ = [
    "BOUNDARY_CONDITIONS",
    "CavityConfig",
    "FieldPoint",
    "Mode",
    "ModeSpectrum",
    "ModeValue",
    "RootFindingError",
    "ALPHA3",
    "BETA",
    "U_PLUS",
    "U_MINUS",
    "dirac_minkowski_roots",
    "evaluate_mode",
    "maxwell_reduction",
    "minkowski_spectrum",
    "rindler_spectrum",
    "to_standard_basis",
]

BOUNDARY_CONDITIONS = ("dirichlet", "neumann", "dirac_mit", "maxwell_pol_I", "maxwell_pol_II")
MIN_NEUMANN_M = 1e-6

ALPHA3 = np.array([[0.0, 1.0], [1.0, 0.0]])
BETA = np.array([[1.0, 0.0], [0.0, -1.0]])
U_PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)
U_MINUS = np.array([1.0, -1.0]) / math.sqrt(2.0)

_ODE_RTOL = 1e-12
_ODE_ATOL = 1e-14


class RootFindingError(RuntimeError):
    """An eigenfrequency could not be bracketed, or a root appears to be missing."""


@dataclass(frozen=True)
class CavityConfig:
    """Geometry, field content and motion of the cavity.

    Parameters
    ----------
    L : float
        Proper length of the cavity.
    mass : float
        Field mass ``mu`` (1/length). For Maxwell reductions this is the
        transverse wavenumber ``k_perp``.
    h : float
        Dimensionless acceleration ``h = a L`` at the cavity centre.
        ``|h| < 2``; the sign gives the direction (positive towards
        increasing ``z``). ``h = 0`` is allowed for inertial-only use.
    bc : str
        One of :data:`BOUNDARY_CONDITIONS`. ``"maxwell_pol_I"`` and
        ``"maxwell_pol_II"`` are stored as ``"dirichlet"`` / ``"neumann"``
        with :attr:`maxwell_pol` set.
    z0 : float, optional
        Inertial position of the left wall. Defaults to the value that makes
        the cavity match the Rindler walls at ``t = 0``.
    """

    L: float = 1.0
    mass: float = 0.0
    h: float = 0.0
    bc: str = "dirichlet"
    z0: float | None = None
    maxwell_pol: str | None = None
    Lx: float | None = None
    Ly: float | None = None
    transverse: tuple[int, int] | None = None

    def __post_init__(self):
        if self.bc == "maxwell_pol_I":
            object.__setattr__(self, "bc", "dirichlet")
            object.__setattr__(self, "maxwell_pol", "I")
        elif self.bc == "maxwell_pol_II":
            object.__setattr__(self, "bc", "neumann")
            object.__setattr__(self, "maxwell_pol", "II")
        if self.bc not in ("dirichlet", "neumann", "dirac_mit"):
            raise ValueError(f"unknown boundary condition {self.bc!r}")
        if self.maxwell_pol not in (None, "I", "II"):
            raise ValueError(f"unknown Maxwell polarisation {self.maxwell_pol!r}")
        if self.maxwell_pol == "I" and self.bc != "dirichlet":
            raise ValueError("Maxwell polarisation I reduces to a Dirichlet scalar")
        if self.maxwell_pol == "II" and self.bc != "neumann":
            raise ValueError("Maxwell polarisation II reduces to a Neumann scalar")
        if not self.L > 0:
            raise ValueError("cavity length must be positive")
        if not self.mass >= 0:
            raise ValueError("mass must be non-negative")
        if not abs(self.h) < 2:
            raise ValueError("|h| must be below 2 for the wall accelerations to stay finite")
        if self.bc == "neumann" and self.mass * self.L < MIN_NEUMANN_M:
            raise ValueError(f"Neumann field needs M = mass*L >= {MIN_NEUMANN_M:g}")
        if self.bc == "dirac_mit" and not self.mass > 0:
            raise ValueError("the Dirac field needs a strictly positive mass")

    @property
    def M(self) -> float:
        """Dimensionless mass ``mu L``."""
        return self.mass * self.L

    @property
    def direction(self) -> int:
        return int(np.sign(self.h))

    @property
    def fermionic(self) -> bool:
        return self.bc == "dirac_mit"

    @property
    def chi0(self) -> float:
        """Rindler position of the wall nearer the horizon."""
        self._need_acceleration()
        return (1.0 / abs(self.h) - 0.5) * self.L

    @property
    def chi1(self) -> float:
        self._need_acceleration()
        return (1.0 / abs(self.h) + 0.5) * self.L

    @property
    def left_wall(self) -> float:
        """Inertial left-wall position ``z0``."""
        if self.z0 is not None:
            return self.z0
        if self.h > 0:
            return self.chi0
        if self.h < 0:
            return -self.chi1
        return 0.0

    def with_h(self, h: float) -> CavityConfig:
        return replace(self, h=h, z0=None if self.z0 is None else self.z0)

    def _need_acceleration(self):
        if self.h == 0:
            raise ValueError("accelerated-frame quantity requested with h = 0")


@dataclass(frozen=True)
class FieldPoint:
    """A spacetime point in the coordinates of a frame: ``(t, z)`` or ``(eta, chi)``."""

    time: float
    position: float


@dataclass(frozen=True)
class ModeValue:
    point: FieldPoint
    value: complex | np.ndarray


@dataclass(frozen=True)
class Mode:
    """One normalised mode.

    ``index`` is ``n`` for bosons and the signed label ``n_k`` for the
    spinor (``n_k >= 0`` positive frequency). ``frequency`` is ``omega``
    (Minkowski, signed for spinors) or ``Omega`` (Rindler).
    """

    index: int
    frequency: float
    normalization: complex
    phase_tag: str
    k: float | None = None
    phi: float | None = None
    C: float | None = None
    profile: Callable | None = field(default=None, repr=False, compare=False)
    dprofile: Callable | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class ModeSpectrum:
    config: CavityConfig
    frame: str
    modes: tuple[Mode, ...]
    method: str = "analytic"

    def __len__(self):
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([m.frequency for m in self.modes])

    @property
    def indices(self) -> np.ndarray:
        return np.array([m.index for m in self.modes])

    def mode(self, index: int) -> Mode:
        for m in self.modes:
            if m.index == index:
                return m
        raise KeyError(f"no mode with index {index}")


def to_standard_basis(value) -> np.ndarray:
    """Convert ``(U+, U-)`` components to the explicit representation."""
    v = np.asarray(value)
    return np.stack([(v[0] + v[1]) / math.sqrt(2.0), (v[0] - v[1]) / math.sqrt(2.0)])


# ---------------------------------------------------------------------------
# Inertial cavity


def _boson_indices(bc: str, count: int) -> np.ndarray:
    start = 1 if bc == "dirichlet" else 0
    return np.arange(start, start + count)


def boson_frequencies(config: CavityConfig, indices) -> np.ndarray:
    n = np.asarray(indices, dtype=float)
    return np.sqrt(config.mass**2 + (math.pi * n / config.L) ** 2)


def dirac_minkowski_roots(M: float, count: int) -> np.ndarray:
    """First ``count`` positive roots ``x = kL`` of ``tan(x)/x = -1/M``.

    Each root lies in ``((n + 1/2) pi, (n + 1) pi)``, where
    ``M sin x + x cos x`` changes sign exactly once. All brackets are
    bisected together down to adjacent floating-point numbers.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if not M > 0:
        raise ValueError("M must be positive")
    n = np.arange(count, dtype=float)
    lo, hi = (n + 0.5) * math.pi, (n + 1.0) * math.pi
    g = lambda x: M * np.sin(x) + x * np.cos(x)
    glo = g(lo)
    if np.any(glo * g(hi) > 0):
        bad = int(np.argmax(glo * g(hi) > 0))
        raise RootFindingError(f"no sign change of the MIT eigencondition on [{lo[bad]}, {hi[bad]}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        gm = g(mid)
        left = np.signbit(gm) == np.signbit(glo)
        lo = np.where(active & left, mid, lo)
        glo = np.where(active & left, gm, glo)
        hi = np.where(active & ~left, mid, hi)
    return 0.5 * (lo + hi)


def _dirac_label_order(count: int) -> np.ndarray:
    return np.arange(-count, count)


def _dirac_k_values(config: CavityConfig, count: int) -> np.ndarray:
    x = dirac_minkowski_roots(config.M, count) / config.L
    return np.concatenate([-x[::-1], x])


def minkowski_spectrum(config: CavityConfig, count: int) -> ModeSpectrum:
    """Normalised inertial modes.

    Bosons: ``omega_n = sqrt(mu^2 + (pi n / L)^2)`` with ``n >= 1``
    (Dirichlet) or ``n >= 0`` (Neumann). Spinor: ``count`` positive and
    ``count`` negative MIT roots, labelled ``n_k = -count .. count-1``.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    L, mu = config.L, config.mass
    modes = []
    if config.fermionic:
        for n, k in zip(_dirac_label_order(count), _dirac_k_values(config, count)):
            w = math.copysign(math.hypot(mu, k), k)
            phi = 0.5 * math.atan(mu / k)
            N = math.sqrt(w * w / (2 * L * (w * w + mu / L)))
            prof, dprof = _dirac_minkowski_profile(k, phi, N)
            modes.append(Mode(int(n), w, N, "psi(z0) ~ +(U+ + iU-)", k=k, phi=phi, C=w + k,
                              profile=prof, dprofile=dprof))
        return ModeSpectrum(config, "minkowski", tuple(modes))

    for n, w in zip(_boson_indices(config.bc, count), boson_frequencies(config, _boson_indices(config.bc, count))):
        n = int(n)
        if config.bc == "dirichlet":
            N = 1.0 / math.sqrt(w * L)
            tag = "d_z phi(z0) > 0"
        elif n == 0:
            N = 1.0 / math.sqrt(2 * w * L)
            tag = "phi(z0) > 0"
        else:
            N = 1.0 / math.sqrt(w * L)
            tag = "phi(z0) > 0"
        prof, dprof = _scalar_minkowski_profile(config.bc, n, L, N)
        modes.append(Mode(n, float(w), N, tag, profile=prof, dprofile=dprof))
    return ModeSpectrum(config, "minkowski", tuple(modes))


def _scalar_minkowski_profile(bc, n, L, N):
    kn = math.pi * n / L
    if bc == "dirichlet":
        return (lambda s: N * np.sin(kn * np.asarray(s, float)),
                lambda s: N * kn * np.cos(kn * np.asarray(s, float)))
    return (lambda s: N * np.cos(kn * np.asarray(s, float)),
            lambda s: -N * kn * np.sin(kn * np.asarray(s, float)))


def _dirac_minkowski_profile(k, phi, N):
    # components in (U+, U-) of cos(phi) U+ + sin(phi) U- and its partner
    cp = np.array([math.cos(phi), math.sin(phi)])
    cm = np.array([math.sin(phi), math.cos(phi)])
    e1 = N * np.exp(-1j * phi)
    e2 = N * 1j * np.exp(1j * phi)

    def prof(s):
        s = np.asarray(s, float)
        return (e1 * np.exp(1j * k * s))[None] * cp.reshape((2,) + (1,) * s.ndim) \
            + (e2 * np.exp(-1j * k * s))[None] * cm.reshape((2,) + (1,) * s.ndim)

    def dprof(s):
        s = np.asarray(s, float)
        return (1j * k * e1 * np.exp(1j * k * s))[None] * cp.reshape((2,) + (1,) * s.ndim) \
            + (-1j * k * e2 * np.exp(-1j * k * s))[None] * cm.reshape((2,) + (1,) * s.ndim)

    return prof, dprof


# ---------------------------------------------------------------------------
# Accelerated cavity: shared helpers


def _frame_chi(config: CavityConfig):
    """Return ``(chi_start, eps)`` with ``chi(s) = chi_start + eps*s``."""
    if config.h > 0:
        return config.chi0, 1.0
    return config.chi1, -1.0


def _predicted_rindler(config: CavityConfig, count: int) -> np.ndarray:
    """Small-h prediction ``Omega ~ L omega / |h|`` for the positive branch."""
    if config.fermionic:
        w = np.sqrt(config.mass**2 + (dirac_minkowski_roots(config.M, count) / config.L) ** 2)
    else:
        w = boson_frequencies(config, _boson_indices(config.bc, count))
    return config.L * w / abs(config.h)


def _scan_roots(g: Callable[[float], float], predicted: np.ndarray, count: int,
                lower: float, what: str) -> np.ndarray:
    # one segment per predicted root, bounded by midpoints; the step inside a
    # segment is a tenth of the local predicted spacing
    # ``predicted`` holds count + 1 values so every root has two neighbours
    gaps = np.diff(predicted)
    local = np.minimum(gaps, np.concatenate([gaps[:1], gaps[:-1]]))[:count]
    local = np.maximum(local, 1e-9 * np.maximum(1.0, predicted[:count]))
    bounds = np.concatenate([[lower], 0.5 * (predicted[:count - 1] + predicted[1:count]),
                             [predicted[count - 1] + 0.5 * gaps[count - 1]]])
    hi = bounds[-1]
    pieces = []
    for i in range(count):
        n = max(10, int(math.ceil((bounds[i + 1] - bounds[i]) / (0.1 * local[i]))))
        pieces.append(np.linspace(bounds[i], bounds[i + 1], n + 1)[:-1])
    # beyond the predicted window (large |h|) keep scanning at the last step
    tail = np.arange(hi, 4.0 * hi, 0.1 * local[-1])
    grid = np.concatenate(pieces + [tail])
    grid[0] = lower + 1e-3 * (grid[1] - grid[0])
    roots = []
    prev_x, prev_v = grid[0], g(grid[0])
    for x in grid[1:]:
        v = g(x)
        if prev_v == 0.0:
            roots.append(prev_x)
        elif prev_v * v < 0:
            roots.append(brentq(g, prev_x, x, xtol=1e-14 * max(1.0, x), rtol=1e-13, maxiter=200))
        if len(roots) >= count:
            break
        prev_x, prev_v = x, v
    if len(roots) < count:
        raise RootFindingError(
            f"{what}: found {len(roots)} of {count} eigenfrequencies below {grid[-1]:.6g}; "
            f"suspected gap near the predicted value {predicted[min(len(roots), count - 1)]:.6g}"
        )
    roots = np.array(roots[:count])
    gaps = np.diff(roots)
    if np.any(gaps < 1e-8 * np.maximum(1.0, roots[1:])):
        warnings.warn(f"{what}: near-degenerate eigenfrequencies detected", RuntimeWarning)
    return roots


def _check_against_prediction(roots, predicted, h, what):
    # the relative shift is O(h^2); anything near half the spacing is a missed root
    rel = roots / predicted - 1.0
    lim = 0.25 + 0.5 * h * h
    if abs(h) <= 0.5 and np.any(np.abs(rel) > lim):
        i = int(np.argmax(np.abs(rel) > lim))
        raise RootFindingError(
            f"{what}: root {i} at {roots[i]:.8g} is far from the predicted {predicted[i]:.8g}; "
            "suspected missed or spurious root"
        )


# ---------------------------------------------------------------------------
# ODE route


def _scalar_rhs(mu, Om, cs, eps):
    mu2, Om2 = mu * mu, Om * Om

    def rhs(s, y):
        chi = cs + eps * s
        return [eps * y[1] / chi, eps * (mu2 * chi * chi - Om2) * y[0] / chi]

    return rhs


def _scalar_initial(bc, cs, eps):
    # Dirichlet: y = 0, dy/ds = 1 (q = chi dy/drho); Neumann: y = 1, dy/ds = 0
    return [0.0, eps * cs] if bc == "dirichlet" else [1.0, 0.0]


def _dirac_rhs(mu, Om, cs, eps):
    # a = p + i q; the second spinor component is i conj(a)
    def rhs(s, y):
        chi = cs + eps * s
        return [-Om * y[1] / chi + mu * y[0], Om * y[0] / chi - mu * y[1]]

    return rhs


def _shoot(config: CavityConfig, Om: float, dense: bool = False):
    cs, eps = _frame_chi(config)
    if config.fermionic:
        rhs, y0 = _dirac_rhs(config.mass, Om, cs, eps), [1.0, 0.0]
    else:
        rhs, y0 = _scalar_rhs(config.mass, Om, cs, eps), _scalar_initial(config.bc, cs, eps)
    sol = solve_ivp(rhs, (0.0, config.L), y0, method="DOP853", rtol=_ODE_RTOL,
                    atol=_ODE_ATOL, dense_output=dense)
    if not sol.success:
        raise RootFindingError(f"radial integration failed at Omega={Om}: {sol.message}")
    return sol


def _ode_condition(config: CavityConfig):
    if config.fermionic or config.bc == "dirichlet":
        return lambda Om: _shoot(config, Om).y[0, -1]
    return lambda Om: _shoot(config, Om).y[1, -1]


def _ode_scalar_mode(config, n, Om):
    cs, eps = _frame_chi(config)
    sol = _shoot(config, Om, dense=True)
    chi = lambda s: cs + eps * np.asarray(s, float)
    raw = lambda s: sol.sol(np.asarray(s, float))[0]
    nrm, _ = quad(lambda s: raw(s) ** 2 / chi(s), 0.0, config.L, epsabs=1e-15, epsrel=1e-13, limit=400)
    c = 1.0 / math.sqrt(2.0 * Om * nrm)
    prof = lambda s: c * raw(s)
    dprof = lambda s: c * eps * sol.sol(np.asarray(s, float))[1] / chi(s)
    tag = "d_z phi(z0) > 0" if config.bc == "dirichlet" else "phi(z0) > 0"
    return Mode(int(n), float(Om), c, tag, profile=prof, dprofile=dprof)


def _ode_dirac_mode(config, n, Om):
    cs, eps = _frame_chi(config)
    sol = _shoot(config, Om, dense=True)
    chi = lambda s: cs + eps * np.asarray(s, float)

    def a_of(s):
        y = sol.sol(np.asarray(s, float))
        return y[0] + 1j * y[1]

    nrm, _ = quad(lambda s: 2.0 * abs(a_of(s)) ** 2 / chi(s), 0.0, config.L,
                  epsabs=1e-15, epsrel=1e-13, limit=400)
    c = 1.0 / math.sqrt(nrm)

    def prof(s):
        a = a_of(s)
        return c * np.stack([a, 1j * np.conj(a)]) / np.sqrt(chi(s))

    def dprof(s):
        s = np.asarray(s, float)
        a = a_of(s)
        x = chi(s)
        da = 1j * Om * a / x + config.mass * np.conj(a)
        w = np.stack([a, 1j * np.conj(a)])
        dw = np.stack([da, 1j * np.conj(da)])
        return c * (dw / np.sqrt(x) - 0.5 * eps * w / x**1.5)

    return Mode(int(n), float(Om), c, "psi(z0) ~ +(U+ + iU-)", profile=prof, dprofile=dprof)


# ---------------------------------------------------------------------------
# Bessel route


def _bessel_fits(config: CavityConfig, predicted_max: float) -> bool:
    if config.mass <= 0:
        return False
    return predicted_max * 1.3 <= MAX_IMAG_ORDER and config.mass * config.chi1 <= MAX_ARGUMENT


def _I(nr, Om, x):
    return bessel_i(nr, Om, x).value


def _dI(nr, Om, x):
    return bessel_i_deriv(nr, Om, x).value


def _bessel_condition(config: CavityConfig):
    a, b = config.mass * config.chi0, config.mass * config.chi1
    if config.bc == "dirichlet":
        return lambda Om: (_I(0, -Om, a) * _I(0, Om, b) - _I(0, Om, a) * _I(0, -Om, b)).imag
    if config.bc == "neumann":
        return lambda Om: (_dI(0, -Om, a) * _dI(0, Om, b) - _dI(0, Om, a) * _dI(0, -Om, b)).imag

    # MIT condition at chi1 applied to the two-term Bessel mode; the conjugate
    # on P+ is required for the roots to agree with direct integration
    def dirac(Om):
        pm = _I(-0.5, -Om, a) - _I(0.5, -Om, a)
        pp = _I(-0.5, -Om, b) + _I(0.5, -Om, b)
        return 2.0 * (pm * np.conj(pp)).real

    return dirac


def _bessel_scalar_mode(config, n, Om):
    mu, a = config.mass, config.mass * config.chi0
    cs, eps = _frame_chi(config)
    if config.bc == "dirichlet":
        cp, cm = _I(0, -Om, a), _I(0, Om, a)
    else:
        cp, cm = _dI(0, -Om, a), _dI(0, Om, a)
    # the products grow like exp(pi |Omega|); rescale before squaring
    sc = abs(cp) * abs(_I(0, Om, mu * (cs + eps * 0.5 * config.L)))
    cp, cm = cp / sc, cm / sc

    def g(s):
        x = mu * (cs + eps * np.asarray(s, float))
        return cp * _I(0, Om, x) - cm * _I(0, -Om, x)

    def dg(s):
        x = mu * (cs + eps * np.asarray(s, float))
        return eps * mu * (cp * _dI(0, Om, x) - cm * _dI(0, -Om, x))

    # g is purely imaginary on the real axis
    nrm, _ = quad(lambda s: abs(g(s)) ** 2 / (cs + eps * s), 0.0, config.L,
                  epsabs=0.0, epsrel=1e-13, limit=400)
    ref = dg(0.0) if config.bc == "dirichlet" else g(0.0)
    phase = ref / abs(ref)
    N = 1.0 / (phase * math.sqrt(2.0 * Om * nrm))
    prof = lambda s: (N * g(s)).real
    dprof = lambda s: (N * dg(s)).real
    tag = "d_z phi(z0) > 0" if config.bc == "dirichlet" else "phi(z0) > 0"
    return Mode(int(n), float(Om), complex(N), tag, profile=prof, dprofile=dprof)


def _bessel_dirac_mode(config, n, Om):
    mu, a = config.mass, config.mass * config.chi0
    cs, eps = _frame_chi(config)
    cplus = _I(-0.5, -Om, a) - _I(0.5, -Om, a)
    cminus = _I(-0.5, Om, a) - _I(0.5, Om, a)
    sc = abs(cplus) * abs(_I(-0.5, Om, mu * (cs + eps * 0.5 * config.L)))
    cplus, cminus = cplus / sc, cminus / sc

    def raw(s):
        x = mu * (cs + eps * np.asarray(s, float))
        up = cplus * _I(-0.5, Om, x) + cminus * _I(0.5, -Om, x)
        um = 1j * (cplus * _I(0.5, Om, x) + cminus * _I(-0.5, -Om, x))
        # leftward frame: U+ and U- exchange roles
        return np.stack([up, um]) if eps > 0 else np.stack([um, up])

    def draw(s):
        x = mu * (cs + eps * np.asarray(s, float))
        up = cplus * _dI(-0.5, Om, x) + cminus * _dI(0.5, -Om, x)
        um = 1j * (cplus * _dI(0.5, Om, x) + cminus * _dI(-0.5, -Om, x))
        out = eps * mu * (np.stack([up, um]) if eps > 0 else np.stack([um, up]))
        return out

    nrm, _ = quad(lambda s: float(np.sum(np.abs(raw(s)) ** 2)), 0.0, config.L,
                  epsabs=0.0, epsrel=1e-13, limit=400)
    ref = raw(0.0)[0]
    N = np.conj(ref) / abs(ref) / math.sqrt(nrm)
    return Mode(int(n), float(Om), complex(N), "psi(z0) ~ +(U+ + iU-)",
                profile=lambda s: N * raw(s), dprofile=lambda s: N * draw(s))


# ---------------------------------------------------------------------------


def rindler_spectrum(config: CavityConfig, count: int, method: str = "auto") -> ModeSpectrum:
    """Normalised modes of the uniformly accelerated cavity.

    Parameters
    ----------
    config : CavityConfig
        Needs ``0 < |h| < 2``. Negative ``h`` builds the leftward frame.
    count : int
        Number of bosonic modes, or number of positive-frequency spinor
        modes (the spinor spectrum then holds ``2*count`` entries).
    method : {"auto", "bessel", "ode"}

    Raises
    ------
    RootFindingError
        When a root cannot be bracketed or the found spectrum disagrees with
        the small-``h`` prediction ``Omega ~ L omega / |h|``.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if config.h == 0 or not abs(config.h) < 2:
        raise ValueError("rindler_spectrum needs 0 < |h| < 2")
    if method not in ("auto", "bessel", "ode"):
        raise ValueError(f"unknown method {method!r}")
    predicted = _predicted_rindler(config, count + 1)
    if method == "auto":
        method = "bessel" if _bessel_fits(config, predicted[-2]) else "ode"
        if method == "bessel":
            try:
                return _rindler_spectrum(config, count, "bessel", predicted)
            except AccuracyLossError:
                method = "ode"
    if method == "bessel" and config.mass <= 0:
        raise ValueError("the Bessel route needs a positive mass")
    return _rindler_spectrum(config, count, method, predicted)


def _rindler_spectrum(config, count, method, predicted):
    what = f"{config.bc} Rindler spectrum (h={config.h}, M={config.M})"
    cond = _bessel_condition(config) if method == "bessel" else _ode_condition(config)
    # for the scalar fields no eigenvalue lies below mu*chi0, where the
    # radial equation has no turning point
    lower = 0.0 if config.fermionic else config.mass * config.chi0
    roots = _scan_roots(cond, predicted, count, lower, what)
    _check_against_prediction(roots, predicted[:count], config.h, what)
    if config.fermionic:
        build = _bessel_dirac_mode if method == "bessel" else _ode_dirac_mode
        labels = _dirac_label_order(count)
        freqs = np.concatenate([-roots[::-1], roots])
        modes = tuple(build(config, n, Om) for n, Om in zip(labels, freqs))
    else:
        build = _bessel_scalar_mode if method == "bessel" else _ode_scalar_mode
        modes = tuple(build(config, n, Om) for n, Om in zip(_boson_indices(config.bc, count), roots))
        _check_nodes(config, modes, what)
    return ModeSpectrum(config, "rindler", modes, method)


def _check_nodes(config, modes, what):
    # Sturm oscillation: mode j (0-based) has j interior nodes
    s = np.linspace(0.0, config.L, 64 * (len(modes) + 4))[1:-1]
    for j, m in enumerate(modes):
        f = m.profile(s)
        nodes = int(np.count_nonzero(np.signbit(f[1:]) != np.signbit(f[:-1])))
        if nodes != j:
            raise RootFindingError(f"{what}: mode {m.index} has {nodes} nodes, expected {j}")


# ---------------------------------------------------------------------------


def evaluate_mode(spectrum: ModeSpectrum, index: int, point: FieldPoint) -> ModeValue:
    """Value of a normalised mode at a point given in the frame's coordinates.

    Minkowski points are ``(t, z)`` with ``z0 <= z <= z0 + L``. Rindler
    points are ``(eta, chi)`` with ``chi0 <= chi <= chi1`` in the frame of the
    spectrum (the reflected frame when ``h < 0``). Spinor values are returned
    in the ``(U+, U-)`` basis.
    """
    cfg = spectrum.config
    mode = spectrum.mode(index)
    tol = 1e-12 * cfg.L
    if spectrum.frame == "minkowski":
        s = point.position - cfg.left_wall
    else:
        if cfg.h > 0:
            s = point.position - cfg.chi0
        else:
            s = cfg.chi1 - point.position
    if s < -tol or s > cfg.L + tol:
        raise ValueError(f"point {point} lies outside the cavity")
    s = min(max(s, 0.0), cfg.L)
    phase = np.exp(-1j * mode.frequency * point.time)
    return ModeValue(point, mode.profile(np.asarray(s)) * phase)


def maxwell_reduction(Lx: float, Ly: float, Lz: float, m: int, n: int, pol: str,
                      h: float = 0.0) -> CavityConfig:
    """Scalar problem equivalent to the Maxwell modes with transverse numbers ``(m, n)``.

    Polarisation I reduces to a Dirichlet scalar, polarisation II to a
    Neumann scalar, both with mass ``k_perp = sqrt((pi m/Lx)^2 + (pi n/Ly)^2)``
    and length ``Lz``. The returned config records ``maxwell_pol`` so that
    the particle-creation sign rule of polarisation II can be applied.
    """
    if pol == "I":
        if m < 0 or n < 0 or (m == 0 and n == 0):
            raise ValueError("polarisation I needs m, n >= 0, not both zero")
        bc = "dirichlet"
    elif pol == "II":
        if m < 1 or n < 1:
            raise ValueError("polarisation II needs m, n >= 1")
        bc = "neumann"
    else:
        raise ValueError(f"unknown polarisation {pol!r}")
    kperp = math.hypot(math.pi * m / Lx, math.pi * n / Ly)
    return CavityConfig(L=Lz, mass=kperp, h=h, bc=bc, maxwell_pol=pol, Lx=Lx, Ly=Ly,
                        transverse=(int(m), int(n)))
