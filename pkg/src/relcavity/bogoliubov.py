r"""Bogoliubov coefficients between inertial and accelerated cavity modes.

Two independent routes are provided. :func:`coefficients_quadrature`
evaluates the inner products between the mode sets of
:mod:`relcavity.modes` on the matching slice ``t = eta = 0``;
:func:`coefficients_perturbative` fills in the closed forms linear in
``h``. Bosonic matrices are indexed ``[m, n]`` with the Rindler index ``m``
on rows and the Minkowski index ``n`` on columns, so that

    phi^R_m = sum_n (alpha_mn phi^M_n + beta_mn conj(phi^M_n)).

Spinor matrices ``A[k, l] = (psi_l, Psi_k)`` carry signed labels
``-N .. N-1`` on both axes (rows Rindler, columns Minkowski).

Notes
-----
The linear-order Neumann particle-creation coefficient is used with the
sign that follows from the Klein-Gordon inner product,

    beta_hat_mn = -(omega_m omega_n + M^2)(1 - (-1)^(m+n)) / ((omega_m + omega_n)^3 sqrt(omega_m omega_n)),

(times ``1/sqrt(2)`` when exactly one index is 0). Direct quadrature agrees
with this sign at every mass tested; the opposite sign is available through
``printed_neumann_sign=True`` for comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import quad_vec

from .modes import CavityConfig, ModeSpectrum, dirac_minkowski_roots, minkowski_spectrum, rindler_spectrum

__all__ = [
    "BogoliubovSet",
    "IdentityReport",
    "QuadratureError",
    "apply_maxwell_sign",
    "boson_linear_coefficients",
    "check_identities",
    "coefficients_perturbative",
    "coefficients_quadrature",
    "dirac_linear_coefficients",
    "dirac_signed_roots",
    "figure2_scan",
    "loglog_slope",
]

DEFAULT_QUAD_TOL = 1e-12
_TAIL_COLUMNS = 400


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


@dataclass(frozen=True)
class BogoliubovSet:
    """Truncated Bogoliubov matrices.

    Attributes
    ----------
    kind : {"bosonic", "fermionic"}
    method : str
        ``"quadrature"``, ``"perturbative_linear"``, ``"segment_composition"``
        or ``"fourier_linear"``.
    N : int
        Truncation. Bosons keep ``N`` modes; spinors keep ``N`` positive and
        ``N`` negative frequency modes, so ``A`` is ``2N x 2N``.
    labels : ndarray
        Mode labels along both axes.
    tail_estimate : float
        Largest row weight ``sum |coef|^2`` carried by columns beyond the
        truncation, estimated from the linear closed forms.
    """

    kind: str
    method: str
    h: float
    M: float
    bc: str
    N: int
    labels: np.ndarray
    alpha: np.ndarray | None = None
    beta: np.ndarray | None = None
    A: np.ndarray | None = None
    tail_estimate: float = 0.0
    maxwell_pol: str | None = None
    maxwell_sign_applied: bool = False
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def fermionic(self) -> bool:
        return self.kind == "fermionic"


@dataclass(frozen=True)
class IdentityReport:
    """Max-norm residuals of the Bogoliubov identities on the truncated block."""

    residuals: dict
    h: float
    N: int
    second_order_budget: float
    tail_budget: float

    @property
    def budget(self) -> float:
        return self.second_order_budget + self.tail_budget

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def within_budget(self, factor: float = 1.0) -> bool:
        return self.max_residual <= factor * self.budget + 1e-10


# ---------------------------------------------------------------------------
# Closed forms (dimensionless, L = 1)


def _boson_omega(M, n):
    return np.sqrt(M * M + (math.pi * np.asarray(n, float)) ** 2)


def boson_linear_coefficients(bc: str, M: float, m, n, *, printed_neumann_sign: bool = False):
    """Coefficients of ``h`` in ``alpha`` and ``beta`` (diagonal of alpha excluded).

    ``m`` and ``n`` broadcast against each other. Entries with ``m + n`` even
    are exactly zero.

    Returns
    -------
    alpha_hat, beta_hat : ndarray
    """
    m = np.asarray(m)
    n = np.asarray(n)
    m, n = np.broadcast_arrays(m, n)
    wm, wn = _boson_omega(M, m), _boson_omega(M, n)
    odd = (m + n) % 2 == 1
    root = np.sqrt(wm * wn)
    with np.errstate(divide="ignore", invalid="ignore"):
        if bc == "dirichlet":
            num_a = -2.0 * math.pi**2 * m * n
            num_b = 2.0 * math.pi**2 * m * n
            fac = 1.0
        elif bc == "neumann":
            num_a = -2.0 * (wm * wn - M * M)
            num_b = (2.0 if printed_neumann_sign else -2.0) * (wm * wn + M * M)
            fac = np.where((m == 0) != (n == 0), 1.0 / math.sqrt(2.0), 1.0)
        else:
            raise ValueError(f"no bosonic closed form for {bc!r}")
        a = np.where(odd & (m != n), fac * num_a / ((wm - wn) ** 3 * root), 0.0)
        b = np.where(odd, fac * num_b / ((wm + wn) ** 3 * root), 0.0)
    return a, b


def dirac_signed_roots(M: float, N: int):
    """Signed Minkowski wavenumbers ``kL`` and labels ``n_k`` for ``-N .. N-1``."""
    x = dirac_minkowski_roots(M, N)
    k = np.concatenate([-x[::-1], x])
    labels = np.arange(-N, N)
    return k, labels


def _dirac_C(M, k):
    # C = omega + k, written without cancellation for k < 0
    k = np.asarray(k, float)
    r = np.sqrt(M * M + k * k)
    return np.where(k > 0, r + k, -M * M / (r + np.abs(k)))


def dirac_linear_coefficients(M: float, k, nk, l, nl):
    """Coefficient of ``h`` in ``A_kl`` for ``k != l`` (``L = 1``).

    Arguments broadcast. ``k, l`` are signed wavenumbers and ``nk, nl``
    their labels. Diagonal entries (``k == l``) return 0.
    """
    k, nk, l, nl = np.broadcast_arrays(np.asarray(k, float), np.asarray(nk), np.asarray(l, float), np.asarray(nl))
    wk = np.sign(k) * np.sqrt(M * M + k * k)
    wl = np.sign(l) * np.sqrt(M * M + l * l)
    Ck, Cl = _dirac_C(M, k), _dirac_C(M, l)
    odd = (nk + nl) % 2 == 1
    # mirrored roots l = -k have C_k C_l + mu^2 = 0 exactly; branch instead
    # of relying on the rounded product
    off = (nk != nl) & (k != -l)
    d2 = Ck * Cl - M * M
    if np.any(off & odd & (d2 == 0)):
        raise ZeroDivisionError("C_k C_l = mu^2 for a pair of distinct modes")
    num = -4.0 * np.abs(k * l) * Ck**2 * Cl**2 * (Ck + Cl) * (Ck * Cl + M * M)
    with np.errstate(divide="ignore", invalid="ignore"):
        den = np.sqrt(wk * wk + M) * np.sqrt(wl * wl + M) * (Ck - Cl) ** 3 * d2**3
        out = np.where(off & odd, num / den, 0.0)
    return out


def _boson_labels(bc, N):
    start = 1 if bc == "dirichlet" else 0
    return np.arange(start, start + N)


def _boson_tail(bc, M, labels):
    cols = np.arange(labels[-1] + 1, labels[-1] + 1 + _TAIL_COLUMNS)
    a, b = boson_linear_coefficients(bc, M, labels[:, None], cols[None, :])
    return float(np.max(np.sum(a * a + b * b, axis=1)))


def _dirac_tail(M, N):
    k, lab = dirac_signed_roots(M, N + _TAIL_COLUMNS)
    inner = (lab >= -N) & (lab < N)
    A = dirac_linear_coefficients(M, k[inner][:, None], lab[inner][:, None], k[~inner][None, :], lab[~inner][None, :])
    return float(np.max(np.sum(A * A, axis=1)))


# ---------------------------------------------------------------------------


def coefficients_perturbative(config: CavityConfig, N: int, *, printed_neumann_sign: bool = False) -> BogoliubovSet:
    """Linear-in-``h`` Bogoliubov matrices from the closed forms.

    A negative ``h`` in ``config`` describes leftward acceleration; the
    formulas hold for both signs.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    h, M = config.h, config.M
    if config.fermionic:
        k, lab = dirac_signed_roots(M, N)
        Ahat = dirac_linear_coefficients(M, k[:, None], lab[:, None], k[None, :], lab[None, :])
        A = np.eye(2 * N, dtype=complex) + h * Ahat
        return BogoliubovSet("fermionic", "perturbative_linear", h, M, config.bc, N, lab, A=A,
                             tail_estimate=h * h * _dirac_tail(M, N))
    lab = _boson_labels(config.bc, N)
    a, b = boson_linear_coefficients(config.bc, M, lab[:, None], lab[None, :],
                                     printed_neumann_sign=printed_neumann_sign)
    return BogoliubovSet("bosonic", "perturbative_linear", h, M, config.bc, N, lab,
                         alpha=np.eye(N, dtype=complex) + h * a, beta=(h * b).astype(complex),
                         tail_estimate=h * h * _boson_tail(config.bc, M, lab),
                         maxwell_pol=config.maxwell_pol)


def _integrate(f, L, tol, what):
    res, err, info = quad_vec(f, 0.0, L, epsabs=tol, epsrel=0.0, norm="max", limit=2000, full_output=True)
    if not info.success or err > 10 * tol:
        raise QuadratureError(f"{what}: quadrature error {err:.3g} above tolerance {tol:.3g}")
    return res


def coefficients_quadrature(config: CavityConfig, N: int, *, method: str = "auto",
                            tol: float = DEFAULT_QUAD_TOL,
                            spectra: tuple[ModeSpectrum, ModeSpectrum] | None = None) -> BogoliubovSet:
    """Bogoliubov matrices by direct inner products on ``t = 0``.

    Parameters
    ----------
    config : CavityConfig
        ``0 < |h| < 2``. Leftward motion (``h < 0``) uses the reflected
        Rindler frame, so direction-dependent phases come out of the
        integrals.
    N : int
        Truncation (see :class:`BogoliubovSet`).
    method : {"auto", "bessel", "ode"}
        Rindler mode construction, passed to
        :func:`relcavity.modes.rindler_spectrum`.
    tol : float
        Absolute tolerance of the adaptive Gauss-Kronrod quadrature.
    spectra : (rindler, minkowski), optional
        Precomputed spectra to reuse.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if spectra is None:
        rs, ms = rindler_spectrum(config, N, method=method), minkowski_spectrum(config, N)
    else:
        rs, ms = spectra
        if len(ms) < (2 * N if config.fermionic else N) or len(rs) < len(ms):
            raise ValueError("spectrum truncation too small for the requested N")
    L = config.L
    h, M = config.h, config.M
    if config.fermionic:
        ms_modes = ms.modes[: 2 * N] if len(ms) == 2 * N else _centre(ms, N)
        rs_modes = rs.modes[: 2 * N] if len(rs) == 2 * N else _centre(rs, N)
        A = np.empty((2 * N, 2 * N), dtype=complex)

        def minkowski_block(s):
            return np.stack([m.profile(s) for m in ms_modes], axis=1)  # (2, 2N)

        for i, rm in enumerate(rs_modes):
            def f(s, rm=rm):
                return np.sum(np.conj(minkowski_block(s)) * rm.profile(s)[:, None], axis=0)

            A[i] = _integrate(f, L, tol, f"A row {rm.index}")
        lab = np.array([m.index for m in ms_modes])
        return BogoliubovSet("fermionic", "quadrature", h, M, config.bc, N, lab, A=A,
                             tail_estimate=h * h * _dirac_tail(M, N),
                             extra={"rindler_method": rs.method,
                                    "rindler_frequencies": np.array([m.frequency for m in rs_modes])})

    cs, eps = (config.chi0, 1.0) if h > 0 else (config.chi1, -1.0)
    w = ms.frequencies[:N]
    mink = ms.modes[:N]
    alpha = np.empty((N, N))
    beta = np.empty((N, N))
    for i, rm in enumerate(rs.modes[:N]):
        Om = rm.frequency

        def f(s, rm=rm, Om=Om):
            fr = rm.profile(s)
            u = np.array([m.profile(s) for m in mink])
            x = Om / (cs + eps * s)
            return np.concatenate([(w + x) * fr * u, (w - x) * fr * u])

        r = _integrate(f, L, tol, f"alpha/beta row {rm.index}")
        alpha[i], beta[i] = r[:N], r[N:]
    lab = ms.indices[:N]
    return BogoliubovSet("bosonic", "quadrature", h, M, config.bc, N, lab,
                         alpha=alpha.astype(complex), beta=beta.astype(complex),
                         tail_estimate=h * h * _boson_tail(config.bc, M, lab),
                         maxwell_pol=config.maxwell_pol,
                         extra={"rindler_method": rs.method, "rindler_frequencies": rs.frequencies[:N]})


def _centre(spectrum, N):
    keep = [m for m in spectrum.modes if -N <= m.index < N]
    return tuple(sorted(keep, key=lambda m: m.index))


def apply_maxwell_sign(bset: BogoliubovSet, pol: str | None = None) -> BogoliubovSet:
    """Apply the particle-creation sign rule of the Maxwell polarisation classes.

    Polarisation I is the Dirichlet scalar unchanged. Polarisation II is the
    Neumann scalar with ``beta -> -beta``. ``pol`` defaults to the flag
    stored on the set.
    """
    if bset.fermionic:
        raise ValueError("the Maxwell sign rule applies to bosonic sets only")
    pol = pol if pol is not None else bset.maxwell_pol
    if pol not in ("I", "II"):
        raise ValueError(f"unknown polarisation {pol!r}")
    if bset.maxwell_sign_applied:
        raise ValueError("the Maxwell sign rule has already been applied")
    if pol == "I":
        if bset.bc != "dirichlet":
            raise ValueError("polarisation I corresponds to a Dirichlet set")
        return replace(bset, maxwell_pol="I", maxwell_sign_applied=True)
    if bset.bc != "neumann":
        raise ValueError("polarisation II corresponds to a Neumann set")
    return replace(bset, beta=-bset.beta, maxwell_pol="II", maxwell_sign_applied=True)


def check_identities(bset: BogoliubovSet) -> IdentityReport:
    """Residuals of ``alpha alpha^dag - beta beta^dag = I``, ``alpha beta^T = beta alpha^T``
    (bosons) or ``A A^dag = I`` (spinors) over the truncated block.

    The report carries a budget: ``h^2`` times the size of the second-order
    terms generated by the linear closed forms, plus the truncation tail.
    """
    h = bset.h
    if bset.fermionic:
        A = bset.A
        res = {"AAdag_minus_I": float(np.max(np.abs(A @ A.conj().T - np.eye(A.shape[0]))))}
        k, lab = dirac_signed_roots(bset.M, bset.N)
        Ah = dirac_linear_coefficients(bset.M, k[:, None], lab[:, None], k[None, :], lab[None, :])
        second = h * h * float(np.max(np.abs(Ah @ Ah.T)))
    else:
        a, b = bset.alpha, bset.beta
        n = a.shape[0]
        res = {
            "aadag_minus_bbdag_minus_I": float(np.max(np.abs(a @ a.conj().T - b @ b.conj().T - np.eye(n)))),
            "abT_minus_baT": float(np.max(np.abs(a @ b.T - b @ a.T))),
        }
        ah, bh = boson_linear_coefficients(bset.bc, bset.M, bset.labels[:, None], bset.labels[None, :])
        second = h * h * float(np.max(np.abs(ah @ ah.T)) + np.max(np.abs(bh @ bh.T)) + np.max(np.abs(ah @ bh.T)))
    return IdentityReport(res, h, bset.N, second, bset.tail_estimate)


# ---------------------------------------------------------------------------
# Mass dependence of individual coefficients


def figure2_scan(M_values, pairs) -> np.ndarray:
    """``|A_hat_kl(M)|`` for label pairs ``(n_k, n_l)`` over a grid of masses.

    Returns an array of shape ``(len(M_values), len(pairs))``.
    """
    M_values = np.asarray(M_values, float)
    pairs = [(int(a), int(b)) for a, b in pairs]
    need = max(max(abs(a) + 1, abs(b) + 1) for a, b in pairs)
    out = np.empty((M_values.size, len(pairs)))
    for i, M in enumerate(M_values):
        k, lab = dirac_signed_roots(M, need)
        pos = {int(n): j for j, n in enumerate(lab)}
        for j, (a, b) in enumerate(pairs):
            out[i, j] = abs(dirac_linear_coefficients(M, k[pos[a]], a, k[pos[b]], b))
    return out


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if np.any(y <= 0):
        raise ValueError("log-log fit needs strictly positive values")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
