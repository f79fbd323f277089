r"""Bogoliubov transformations for cavities travelling on non-uniform trajectories.

An :class:`AccelerationProfile` gives the proper acceleration ``a(tau)``
at the cavity centre as a function of the centre's proper time, either as
piecewise-constant segments or as samples of a smooth function. Two routes
lead from a profile to the matrices ``(s_alpha, s_beta)`` (or ``s_A``)
connecting the initial and final inertial regions:

* :func:`evolve_fourier` applies the linear-order Fourier formulas,
  ``s_alpha_mn = i L (w_m - w_n) alpha_hat_mn e^{i w_m T} a~(w_m - w_n)``
  and ``s_beta_mn = i L (w_m + w_n) beta_hat_mn e^{i w_m T} a~(w_m + w_n)``
  with ``a~(nu) = int e^{-i nu (tau - tau0)} a(tau) dtau``.
* :func:`evolve_segments` multiplies one transformation per segment. An
  accelerated segment of duration ``dtau`` with ``h = a L`` contributes
  ``S^{-1} R(Omega eta) S`` where ``S`` is the constant-acceleration
  Bogoliubov block matrix, ``R`` the free Rindler phase rotation and
  ``eta = |h| dtau / L``; an inertial segment contributes ``R(omega dtau)``.

Bosonic segments use the block form ``S = [[alpha, beta], [conj(beta),
conj(alpha)]]`` and spinor segments ``A^{-1} R A``. This ordering is the one
for which a single segment reproduces the Fourier top-hat result at linear
order in ``h``. The inverse is taken numerically rather than through the
symplectic formula ``[[alpha^dag, -beta^T], [-beta^dag, alpha^T]]``: the two
agree up to ``O(h^2)`` for the linear-order matrices, and the numerical
inverse makes zero-duration segments and a profile followed by its
:meth:`AccelerationProfile.inverse` exactly trivial.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .bogoliubov import (
    BogoliubovSet,
    boson_linear_coefficients,
    coefficients_perturbative,
    coefficients_quadrature,
    dirac_linear_coefficients,
    dirac_signed_roots,
)
from .modes import CavityConfig

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)

__all__ = [
    "AccelerationProfile",
    "EvolutionResult",
    "evolve_fourier",
    "evolve_segments",
    "free_frequencies",
]


@dataclass(frozen=True)
class AccelerationProfile:
    """Proper acceleration of the cavity centre against its proper time.

    Use :meth:`from_segments` or :meth:`from_samples`. Times are lengths and
    accelerations inverse lengths (``c = 1``). The acceleration vanishes
    outside ``[tau0, tau_f]``.
    """

    kind: str
    durations: np.ndarray | None = None
    accelerations: np.ndarray | None = None
    tau: np.ndarray | None = None
    samples: np.ndarray | None = None
    tau0: float = 0.0
    backward: bool = False
    _spline: CubicSpline | None = field(default=None, repr=False, compare=False)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_segments(cls, segments, tau0: float = 0.0) -> AccelerationProfile:
        """``segments`` is a sequence of ``(duration, acceleration)`` pairs."""
        seg = np.asarray(segments, dtype=float).reshape(-1, 2)
        if seg.shape[0] == 0:
            raise ValueError("at least one segment is required")
        if np.any(seg[:, 0] < 0):
            raise ValueError("segment durations must be non-negative")
        if not np.all(np.isfinite(seg)):
            raise ValueError("segments must be finite")
        return cls("segments", durations=seg[:, 0].copy(), accelerations=seg[:, 1].copy(), tau0=float(tau0))

    @classmethod
    def from_samples(cls, tau, a) -> AccelerationProfile:
        """Samples of a smooth acceleration, interpolated by a cubic spline."""
        tau = np.asarray(tau, dtype=float)
        a = np.asarray(a, dtype=float)
        if tau.ndim != 1 or tau.shape != a.shape or tau.size < 4:
            raise ValueError("need matching one-dimensional tau and a arrays with at least 4 samples")
        if np.any(np.diff(tau) <= 0):
            raise ValueError("tau grid must be strictly increasing")
        if not np.all(np.isfinite(a)):
            raise ValueError("samples must be finite")
        return cls("sampled", tau=tau, samples=a, tau0=float(tau[0]), _spline=CubicSpline(tau, a))

    @classmethod
    def zero(cls, duration: float) -> AccelerationProfile:
        return cls.from_segments([(duration, 0.0)])

    @classmethod
    def from_json(cls, data, L: float = 1.0) -> AccelerationProfile:
        """Build from the dimensionless JSON format (units of ``L``).

        Either ``{"segments": [{"duration_over_L": .., "hL": ..}, ..]}`` or
        ``{"tau_over_L": [..], "aL": [..]}``.
        """
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        if not isinstance(data, dict):
            raise ValueError("profile must be a JSON object")
        if "segments" in data:
            try:
                seg = [(float(s["duration_over_L"]) * L, float(s["hL"]) / L) for s in data["segments"]]
            except (KeyError, TypeError) as exc:
                raise ValueError(f"malformed segment entry: {exc}") from None
            return cls.from_segments(seg)
        if "tau_over_L" in data and "aL" in data:
            return cls.from_samples(np.asarray(data["tau_over_L"], float) * L, np.asarray(data["aL"], float) / L)
        raise ValueError('profile needs "segments" or "tau_over_L" and "aL"')

    def to_json(self, L: float = 1.0) -> dict:
        if self.kind == "segments":
            return {"segments": [{"duration_over_L": d / L, "hL": a * L}
                                 for d, a in zip(self.durations, self.accelerations)]}
        return {"tau_over_L": (self.tau / L).tolist(), "aL": (self.samples * L).tolist()}

    # -- properties ---------------------------------------------------------

    @property
    def duration(self) -> float:
        if self.kind == "segments":
            return float(np.sum(self.durations))
        return float(self.tau[-1] - self.tau[0])

    @property
    def tau_f(self) -> float:
        return self.tau0 + self.duration

    def max_abs_acceleration(self) -> float:
        if self.kind == "segments":
            return float(np.max(np.abs(self.accelerations)))
        fine = np.linspace(self.tau[0], self.tau[-1], 8 * self.tau.size)
        return float(max(np.max(np.abs(self._spline(fine))), np.max(np.abs(self.samples))))

    def validate(self, L: float) -> None:
        """Raise ``ValueError`` if ``|a| L >= 2`` anywhere."""
        if not self.max_abs_acceleration() * L < 2:
            raise ValueError("profile violates the rigidity bound |a| L < 2")

    def acceleration(self, tau):
        tau = np.asarray(tau, dtype=float)
        if self.kind == "sampled":
            inside = (tau >= self.tau[0]) & (tau <= self.tau[-1])
            return np.where(inside, self._spline(np.clip(tau, self.tau[0], self.tau[-1])), 0.0)
        edges = self.tau0 + np.concatenate([[0.0], np.cumsum(self.durations)])
        idx = np.searchsorted(edges, tau, side="right") - 1
        inside = (idx >= 0) & (idx < self.durations.size)
        return np.where(inside, self.accelerations[np.clip(idx, 0, self.durations.size - 1)], 0.0)

    def inverse(self) -> AccelerationProfile:
        """Segment profile that undoes this one: reversed order, negated durations.

        Composing a profile with its inverse gives the identity
        transformation. Only :func:`evolve_segments` accepts the result.
        """
        if self.kind != "segments":
            raise ValueError("only segment profiles can be inverted")
        return AccelerationProfile("segments", durations=-self.durations[::-1].copy(),
                                   accelerations=self.accelerations[::-1].copy(),
                                   tau0=self.tau0, backward=not self.backward)

    def then(self, other: AccelerationProfile) -> AccelerationProfile:
        """Concatenate two segment profiles."""
        if self.kind != "segments" or other.kind != "segments":
            raise ValueError("only segment profiles can be concatenated")
        return AccelerationProfile("segments", durations=np.concatenate([self.durations, other.durations]),
                                   accelerations=np.concatenate([self.accelerations, other.accelerations]),
                                   tau0=self.tau0, backward=self.backward or other.backward)

    # -- Fourier transform --------------------------------------------------

    def fourier(self, nu) -> np.ndarray:
        """``int_{tau0}^{tau_f} exp(-i nu (tau - tau0)) a(tau) dtau`` for each ``nu``."""
        nu = np.asarray(nu, dtype=float)
        if self.kind == "segments":
            if self.backward:
                raise ValueError("the Fourier route needs a forward-in-time profile")
            start = np.concatenate([[0.0], np.cumsum(self.durations)[:-1]])
            end = start + self.durations
            out = np.zeros(nu.shape, dtype=complex)
            flat = nu.ravel()
            res = out.ravel()
            for j, v in enumerate(flat):
                if v == 0.0:
                    res[j] = np.sum(self.accelerations * self.durations)
                else:
                    res[j] = np.sum(self.accelerations * (np.exp(-1j * v * start) - np.exp(-1j * v * end))) / (1j * v)
            return res.reshape(nu.shape)
        flat = nu.ravel()
        res = np.empty(flat.shape, dtype=complex)
        cache = {}
        for j, v in enumerate(flat):
            key = float(v)
            if key not in cache:
                cache[key] = self._spline_fourier(key)
            res[j] = cache[key]
        return res.reshape(nu.shape)

    def _spline_fourier(self, nu: float) -> complex:
        # the spline is a cubic on each knot interval; split the intervals so
        # that the phase advances by at most one radian and use 8-point
        # Gauss-Legendre on each piece (exact up to ~1e-16 relative)
        t0 = self.tau[0]
        width = np.diff(self.tau)
        m = max(1, int(math.ceil(abs(nu) * float(np.max(width)))))
        left = (self.tau[:-1, None] + width[:, None] * (np.arange(m) / m)).ravel()
        half = np.repeat(width / (2 * m), m)
        t = (left + half)[:, None] + half[:, None] * _GL_X[None, :]
        vals = self._spline(t) * np.exp(-1j * nu * (t - t0))
        return complex(np.sum(half * (vals @ _GL_W)))


@dataclass(frozen=True)
class EvolutionResult:
    bogoliubov: BogoliubovSet
    method: str
    profile: AccelerationProfile = field(repr=False)

    @property
    def alpha(self):
        return self.bogoliubov.alpha

    @property
    def beta(self):
        return self.bogoliubov.beta

    @property
    def A(self):
        return self.bogoliubov.A


def free_frequencies(config: CavityConfig, N: int):
    """Inertial frequencies and labels used by the evolution routines (units 1/L)."""
    if config.fermionic:
        k, lab = dirac_signed_roots(config.M, N)
        return np.sign(k) * np.sqrt(config.M**2 + k * k) / config.L, lab
    start = 1 if config.bc == "dirichlet" else 0
    lab = np.arange(start, start + N)
    return np.sqrt(config.M**2 + (math.pi * lab) ** 2) / config.L, lab


def _peak_h(profile, L):
    return profile.max_abs_acceleration() * L


def evolve_fourier(config: CavityConfig, profile: AccelerationProfile, N: int) -> EvolutionResult:
    """Linear-order evolution through the Fourier transform of ``a(tau)``."""
    profile.validate(config.L)
    L = config.L
    w, lab = free_frequencies(config, N)
    T = profile.duration
    phase = np.exp(1j * w * T)
    if config.fermionic:
        k, _ = dirac_signed_roots(config.M, N)
        Ah = dirac_linear_coefficients(config.M, k[:, None], lab[:, None], k[None, :], lab[None, :])
        nu = w[:, None] - w[None, :]
        A = 1j * L * nu * Ah * phase[:, None] * profile.fourier(nu)
        A[np.diag_indices(2 * N)] = phase
        bset = BogoliubovSet("fermionic", "fourier_linear", _peak_h(profile, L), config.M, config.bc, N, lab, A=A)
        return EvolutionResult(bset, "fourier_linear", profile)
    ah, bh = boson_linear_coefficients(config.bc, config.M, lab[:, None], lab[None, :])
    dm = w[:, None] - w[None, :]
    sm = w[:, None] + w[None, :]
    alpha = 1j * L * dm * ah * phase[:, None] * profile.fourier(dm)
    alpha[np.diag_indices(N)] = phase
    beta = 1j * L * sm * bh * phase[:, None] * profile.fourier(sm)
    bset = BogoliubovSet("bosonic", "fourier_linear", _peak_h(profile, L), config.M, config.bc, N, lab,
                         alpha=alpha, beta=beta, maxwell_pol=config.maxwell_pol)
    return EvolutionResult(bset, "fourier_linear", profile)


def _boson_block(bset):
    a, b = bset.alpha, bset.beta
    return np.block([[a, b], [b.conj(), a.conj()]])


def evolve_segments(config: CavityConfig, profile: AccelerationProfile, N: int,
                    method: str = "perturbative", rindler_method: str = "auto") -> EvolutionResult:
    """Compose constant-acceleration segments.

    Parameters
    ----------
    method : {"perturbative", "quadrature"}
        Source of the per-segment constant-acceleration matrices. With
        ``"perturbative"`` the Rindler phase ``Omega eta`` is replaced by its
        small-``h`` value ``omega dtau``; with ``"quadrature"`` the computed
        Rindler spectrum is used.
    """
    if profile.kind != "segments":
        raise ValueError("evolve_segments needs a piecewise-constant profile")
    if method not in ("perturbative", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    profile.validate(config.L)
    L = config.L
    w, lab = free_frequencies(config, N)
    ferm = config.fermionic
    size = 2 * N if ferm else N
    cache = {}

    def constant(h):
        if h not in cache:
            cfg = config.with_h(h)
            if method == "perturbative":
                bset = coefficients_perturbative(cfg, N)
                # Omega eta -> omega dtau, written without Omega = L omega / |h|
                # so that tiny |h| cannot overflow
                rate = w
            else:
                bset = coefficients_quadrature(cfg, N, method=rindler_method)
                rate = np.asarray(bset.extra["rindler_frequencies"], float) * abs(h) / L
            cache[h] = (bset, np.asarray(rate, float))
        return cache[h]

    total = np.eye(size if ferm else 2 * N, dtype=complex)
    for dt, a in zip(profile.durations, profile.accelerations):
        h = float(a * L)
        if h == 0.0:
            if ferm:
                step = np.diag(np.exp(1j * w * dt))
            else:
                step = np.diag(np.concatenate([np.exp(1j * w * dt), np.exp(-1j * w * dt)]))
        else:
            # rate * dt is the Rindler phase Omega eta with eta = |h| dt / L
            bset, rate = constant(h)
            theta = rate * dt
            if ferm:
                A = bset.A
                step = np.linalg.solve(A, np.diag(np.exp(1j * theta)) @ A)
            else:
                R = np.diag(np.concatenate([np.exp(1j * theta), np.exp(-1j * theta)]))
                S = _boson_block(bset)
                step = np.linalg.solve(S, R @ S)
        total = step @ total
    hmax = _peak_h(profile, L)
    if ferm:
        bset = BogoliubovSet("fermionic", "segment_composition", hmax, config.M, config.bc, N, lab, A=total)
    else:
        bset = BogoliubovSet("bosonic", "segment_composition", hmax, config.M, config.bc, N, lab,
                             alpha=total[:N, :N], beta=total[:N, N:], maxwell_pol=config.maxwell_pol)
    return EvolutionResult(bset, "segment_composition", profile)
