r"""Hilbert-Schmidt diagnostics of the linear-order Bogoliubov transformation.

The sharp inertial-to-accelerated transition is unitarily implementable at
linear order when the particle-creation coefficients are square-summable:

* scalars: ``F(M) = sum_{m,n} |beta_hat_mn(M)|^2``;
* spinor: ``G(M) = sum_{k > 0 > l} |A_hat_kl(M)|^2``.

Both are finite for every ``M`` and fall off as ``M^-2``. The limits of
``M^2 F`` and ``M^2 G`` follow from reading the double sums as Riemann sums
(step ``pi/M``); :func:`appendix_constants` evaluates those integrals.
In ``d`` spatial dimensions the transverse momenta add to the mass, and the
criterion becomes the convergence of ``sum_{k_perp} F(L sqrt(mu0^2 + k_perp^2))``.
With ``M^2 F -> const`` that sum behaves like ``sum 1/k_perp^2``: convergent
for one transverse dimension, logarithmically divergent for two.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import dblquad, quad, trapezoid
from scipy.optimize import minimize_scalar

from .bogoliubov import boson_linear_coefficients, dirac_linear_coefficients, dirac_signed_roots
from .modes import CavityConfig
from .trajectory import AccelerationProfile, free_frequencies

__all__ = [
    "DIRICHLET_CONSTANT",
    "NEUMANN_CONSTANT",
    "DIRAC_CONSTANT",
    "HSResult",
    "SumResult",
    "TransverseVerdict",
    "UnitarityReport",
    "appendix_constants",
    "f_sum",
    "g_sum",
    "scaled_sum",
    "smooth_profile_hs",
    "transverse_verdict",
]

DIRICHLET_CONSTANT = 1.0 / (90.0 * math.pi**2)
NEUMANN_CONSTANT = 11.0 / (90.0 * math.pi**2)
DIRAC_CONSTANT = 7.0 / (45.0 * math.pi**2) - 1.0 / 64.0

_CONSTANTS = {"dirichlet": DIRICHLET_CONSTANT, "neumann": NEUMANN_CONSTANT, "dirac": DIRAC_CONSTANT}
_ROW_BLOCK = 256


@dataclass(frozen=True)
class SumResult:
    """Partial sum over indices up to ``cutoff`` with a bound on the remainder."""

    kind: str
    M: float
    cutoff: int
    value: float
    tail_bound: float

    @property
    def scaled(self) -> float:
        """``M^2`` times the partial sum."""
        return self.M**2 * self.value

    @property
    def constant(self) -> float:
        return _CONSTANTS[self.kind]

    @property
    def relative_to_constant(self) -> float:
        return self.scaled / self.constant


@dataclass(frozen=True)
class TransverseVerdict:
    dimension: int
    field: str
    counting: str
    verdict: str
    cutoffs: list
    partial_sums: list
    increments: list
    increment_ratio: float
    log_rate: float
    power_exponent: float
    note: str = ""


@dataclass(frozen=True)
class HSResult:
    """Hilbert-Schmidt sum of ``s_beta`` for a smooth profile."""

    total: float
    shells: np.ndarray
    shell_values: np.ndarray
    shell_frequencies: np.ndarray
    falloff_exponent: float
    fast_falloff: bool
    p: float
    resolved_shells: int = 0


@dataclass
class UnitarityReport:
    """Collected sums and verdicts, serialisable with :meth:`to_dict`."""

    sums: list = field(default_factory=list)
    transverse: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "sums": [dict(asdict(s), scaled=s.scaled, constant=s.constant,
                          relative_to_constant=s.relative_to_constant) for s in self.sums],
            "transverse": [asdict(t) for t in self.transverse],
            "constants": dict(self.constants),
        }


# ---------------------------------------------------------------------------
# Envelopes of the squared summands as smooth functions of the indices


def _boson_envelope(bc, M):
    def e(x, y):
        wx = np.sqrt(M * M + (math.pi * x) ** 2)
        wy = np.sqrt(M * M + (math.pi * y) ** 2)
        num = math.pi**2 * x * y if bc == "dirichlet" else wx * wy + M * M
        return 4.0 * num**2 / ((wx + wy) ** 6 * wx * wy)

    return e


def _dirac_envelope(M):
    # x = k > 0, y = |l| with l < 0; parity factor bounded by 2
    def e(x, y):
        return dirac_linear_coefficients(M, x, 0, -y, 1) ** 2

    return e


def _row_bound(e, x, spacing):
    """Bound on ``sum_j e(x, y_j)`` over points with spacing >= ``spacing``.

    ``e(x, .)`` is unimodal, so the sum is at most ``int/spacing + max``.
    """
    integral = quad(lambda y: e(x, y), 0.0, np.inf, limit=200, epsrel=1e-8)[0]
    grid = np.geomspace(1e-3, 1e3 * max(x, 1.0), 400)
    vals = e(x, grid)
    j = int(np.argmax(vals))
    lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, grid.size - 1)]
    peak = -minimize_scalar(lambda y: -e(x, y), bounds=(lo, hi), method="bounded").fun
    return integral / spacing + max(peak, float(vals[j]))


def _tail(e, start, spacing):
    """Bound on ``sum_{i: x_i >= start} sum_j e(x_i, y_j)`` for a decreasing row bound."""
    return quad(lambda x: _row_bound(e, x, spacing), start, np.inf, limit=200, epsrel=1e-6)[0] / spacing


# ---------------------------------------------------------------------------


def f_sum(M: float, bc: str = "dirichlet", cutoff: int = 400) -> SumResult:
    """``sum_{m,n <= cutoff} |beta_hat_mn(M)|^2`` and a bound on the remainder.

    The remainder over pairs with ``max(m, n) > cutoff`` is bounded by integral
    comparison on the smooth envelope of ``|beta_hat|^2`` (both index
    orderings counted).
    """
    if not M > 0:
        raise ValueError("M must be positive")
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    if bc not in ("dirichlet", "neumann"):
        raise ValueError(f"unknown boundary condition {bc!r}")
    start = 1 if bc == "dirichlet" else 0
    idx = np.arange(start, cutoff + 1)
    rows = []
    for i in range(0, idx.size, _ROW_BLOCK):
        _, b = boson_linear_coefficients(bc, M, idx[i:i + _ROW_BLOCK, None], idx[None, :])
        rows.append(np.sum(b * b, axis=1))
    value = float(np.sum(np.concatenate(rows)))
    tail = 2.0 * _tail(_boson_envelope(bc, M), cutoff, 1.0)
    return SumResult(bc, float(M), int(cutoff), value, float(tail))


def g_sum(M: float, cutoff: int = 2000, orientation: str = "k>0>l") -> SumResult:
    """``sum |A_hat_kl(M)|^2`` over opposite-sign pairs with ``|n| <= cutoff``.

    ``orientation`` selects rows of positive (``"k>0>l"``) or negative
    (``"l>0>k"``) frequency. The remainder bound uses the spacing ``pi/2``
    between consecutive roots of the MIT condition.
    """
    if not M > 0:
        raise ValueError("M must be positive")
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    if orientation not in ("k>0>l", "l>0>k"):
        raise ValueError(f"unknown orientation {orientation!r}")
    value = _g_value(M, cutoff, orientation)
    e = _dirac_envelope(M)
    et = lambda x, y: e(y, x)
    start = (cutoff + 0.5) * math.pi
    tail = _tail(e, start, 0.5 * math.pi) + _tail(et, start, 0.5 * math.pi)
    return SumResult("dirac", float(M), int(cutoff), value, float(tail))


def _g_value(M, cutoff, orientation="k>0>l"):
    k, lab = dirac_signed_roots(M, cutoff)
    pos, neg = lab >= 0, lab < 0
    if orientation == "k>0>l":
        rk, rl, nk, nl = k[pos], k[neg], lab[pos], lab[neg]
    else:
        rk, rl, nk, nl = k[neg], k[pos], lab[neg], lab[pos]
    rows = []
    for i in range(0, rk.size, _ROW_BLOCK):
        A = dirac_linear_coefficients(M, rk[i:i + _ROW_BLOCK, None], nk[i:i + _ROW_BLOCK, None],
                                      rl[None, :], nl[None, :])
        rows.append(np.sum(A * A, axis=1))
    return float(np.sum(np.concatenate(rows)))


def appendix_constants(epsrel: float = 1e-10) -> dict:
    """Large-``M`` limits of ``M^2 F`` and ``M^2 G`` by two-dimensional quadrature.

    Uses ``x = (u - 1/u)/2`` (so ``sqrt(1+x^2) = (u + 1/u)/2`` and
    ``sqrt(1+x^2) + x = u``) followed by ``u = 1/t``, which maps the
    quarter plane onto the unit square.

    Returns
    -------
    dict
        ``{"dirichlet": .., "neumann": .., "dirac": ..}``, each with the
        numerical value, quadrature error estimate, closed form and relative
        deviation.
    """

    def sub(t):
        u = 1.0 / t
        x = 0.5 * (u - t)
        S = 0.5 * (u + t)
        dx = 0.5 * (1.0 / (t * t) + 1.0)
        return u, x, S, dx

    def dirichlet(s, t):
        _, x, Sx, dx = sub(t)
        _, y, Sy, dy = sub(s)
        return 2 / math.pi**2 * x * x * y * y / (Sx * Sy * (Sx + Sy) ** 6) * dx * dy

    def neumann(s, t):
        _, x, Sx, dx = sub(t)
        _, y, Sy, dy = sub(s)
        return 2 / math.pi**2 * (Sx * Sy + 1) ** 2 / (Sx * Sy * (Sx + Sy) ** 6) * dx * dy

    def dirac(s, t):
        u, x, Sx, dx = sub(t)
        v, y, Sy, dy = sub(s)
        a = (u - v) ** 2 * (u * v - 1) ** 2 / ((u + v) ** 6 * (u * v + 1) ** 6)
        b = x * x * y * y * u**4 * v**4 / (Sx * Sx * Sy * Sy)
        return 8 / math.pi**2 * a * b * dx * dy

    out = {}
    for name, f in (("dirichlet", dirichlet), ("neumann", neumann), ("dirac", dirac)):
        val, err = dblquad(f, 0.0, 1.0, 0.0, 1.0, epsabs=0.0, epsrel=epsrel)
        exact = _CONSTANTS[name]
        out[name] = {"value": val, "error_estimate": err, "closed_form": exact,
                     "relative_deviation": abs(val - exact) / abs(exact)}
    return out


# ---------------------------------------------------------------------------
# Transverse sums


@lru_cache(maxsize=8)
def _scaled_table(field: str):
    """``M^2 F(M)`` (or ``M^2 G``) on a log grid, cutoffs scaled with ``M``."""
    if field == "dirac":
        Ms = np.geomspace(0.05, 60.0, 40)
        vals = [M * M * _g_value(M, int(max(200, 40 * M))) for M in Ms]
    else:
        Ms = np.geomspace(0.05, 200.0, 48)
        vals = [M * M * _fast_f(M, field, int(max(200, 8 * M))) for M in Ms]
    return Ms, np.array(vals)


def _fast_f(M, bc, cutoff):
    start = 1 if bc == "dirichlet" else 0
    idx = np.arange(start, cutoff + 1)
    total = 0.0
    for i in range(0, idx.size, _ROW_BLOCK):
        _, b = boson_linear_coefficients(bc, M, idx[i:i + _ROW_BLOCK, None], idx[None, :])
        total += float(np.sum(b * b))
    return total


def scaled_sum(M, field: str = "dirichlet") -> np.ndarray:
    """Interpolated ``M^2 F(M)`` or ``M^2 G(M)``; the large-``M`` constant beyond the table."""
    Ms, vals = _scaled_table(field)
    M = np.asarray(M, float)
    inside = np.interp(np.log(np.clip(M, Ms[0], Ms[-1])), np.log(Ms), vals)
    return np.where(M > Ms[-1], _CONSTANTS[field], inside)


def _lattice(dims, lengths, kmax, counting):
    axes = [np.arange(0 if counting == "pol_I" else 1, int(kmax * Li / math.pi) + 1) * math.pi / Li
            for Li in lengths[:dims]]
    grids = np.meshgrid(*axes, indexing="ij")
    k2 = sum(g * g for g in grids).ravel()
    keep = (k2 <= kmax * kmax) & (k2 > 0)
    return k2[keep]


def transverse_verdict(d: int, mu0: float, L: float = 1.0, transverse_lengths=None,
                       cutoff: float = 400.0, field: str = "dirichlet",
                       counting: str = "pol_I") -> TransverseVerdict:
    """Convergence of ``sum_{k_perp} F(L sqrt(mu0^2 + k_perp^2))`` in ``d`` spatial dimensions.

    Partial sums are taken over transverse momenta with ``|k_perp| <= K`` for
    ``K = cutoff/8, cutoff/4, cutoff/2, cutoff``. Each doubling of ``K`` adds an
    increment; convergent sums of ``1/k^2`` terms halve their increments,
    logarithmic divergence keeps them constant. The verdict is ``CONVERGES``
    when the last increment ratio is below 0.75, ``DIVERGES`` otherwise, and
    the log rate is the least-squares slope of the partial sum against
    ``ln K``.

    Any finite degeneracy factor per transverse mode (spin, polarisation)
    rescales every term equally and cannot change the verdict.
    """
    if d < 2:
        raise ValueError("need at least one transverse dimension (d >= 2)")
    if counting not in ("pol_I", "pol_II"):
        raise ValueError(f"unknown counting {counting!r}")
    if field not in ("dirichlet", "neumann", "dirac"):
        raise ValueError(f"unknown field {field!r}")
    lengths = list(transverse_lengths) if transverse_lengths is not None else [L] * (d - 1)
    if len(lengths) != d - 1:
        raise ValueError("need one transverse length per transverse dimension")
    cutoffs = [cutoff / 8, cutoff / 4, cutoff / 2, cutoff]
    k2 = _lattice(d - 1, lengths, cutoff, counting)
    if field != "dirichlet" and mu0 <= 0 and counting == "pol_I":
        raise ValueError("a zero transverse momentum needs mu0 > 0 for this field")
    Meff = L * np.sqrt(mu0 * mu0 + k2)
    terms = scaled_sum(Meff, field) / Meff**2
    order = np.argsort(k2, kind="stable")
    k_sorted, t_sorted = np.sqrt(k2[order]), terms[order]
    csum = np.cumsum(t_sorted)
    sums = [float(csum[np.searchsorted(k_sorted, K, side="right") - 1]) if np.any(k_sorted <= K) else 0.0
            for K in cutoffs]
    inc = np.diff(sums)
    ratio = float(inc[-1] / inc[-2]) if inc[-2] > 0 else 0.0
    rate = float(np.polyfit(np.log(cutoffs), sums, 1)[0])
    with np.errstate(divide="ignore"):
        p = float(-np.polyfit(np.log(cutoffs[1:]), np.log(np.maximum(inc, 1e-300)), 1)[0])
    verdict = "CONVERGES" if ratio < 0.75 else "DIVERGES"
    note = ("increments fall off with exponent %.3g" % p) if verdict == "CONVERGES" else \
        ("partial sums grow like %.4g ln(K)" % rate)
    return TransverseVerdict(d, field, counting, verdict, cutoffs, sums, inc.tolist(), ratio, rate, p, note)


# ---------------------------------------------------------------------------


def smooth_profile_hs(config: CavityConfig, profile: AccelerationProfile, cutoff: int = 40,
                      p: float = 8.0) -> HSResult:
    """``sum_{m,n} |s_beta_mn|^2`` for a profile, with a falloff diagnostic.

    Terms are grouped in shells ``m + n in {s, s+1}`` (one of the two parities
    always contributes). The falloff exponent is the log-log slope of the
    largest shell term against ``omega_m + omega_n`` over the upper half of
    the resolved shells; ``fast_falloff`` is true when it is steeper than
    ``-p``. A shell is resolved when its largest term lies above the
    round-off floor of the Fourier transform, taken as ``64 eps int |a|``
    in ``|a~|``; a profile whose spectrum sinks below that floor within
    the computed range counts as falling off fast.
    """
    if config.fermionic:
        raise ValueError("smooth_profile_hs covers the scalar fields")
    profile.validate(config.L)
    L = config.L
    w, lab = free_frequencies(config, cutoff)
    _, bh = boson_linear_coefficients(config.bc, config.M, lab[:, None], lab[None, :])
    sm = w[:, None] + w[None, :]
    nz = bh != 0
    vals = np.zeros_like(sm)
    if np.any(nz):
        nu = sm[nz]
        uniq, inv = np.unique(np.round(nu, 12), return_inverse=True)
        ft = profile.fourier(uniq)[inv]
        vals[nz] = (L * nu * bh[nz]) ** 2 * np.abs(ft) ** 2
    total = float(np.sum(vals))
    floor = (L * sm * bh * 64 * np.finfo(float).eps * _abs_integral(profile)) ** 2
    ssum = lab[:, None] + lab[None, :]
    first = int(ssum.min())
    shells = np.arange(first, int(ssum.max()), 2)
    in_shell = [(ssum == s) | (ssum == s + 1) for s in shells]
    shell_vals = np.array([vals[m].max() for m in in_shell])
    shell_floor = np.array([floor[m].max() for m in in_shell])
    shell_w = np.array([sm[m].mean() for m in in_shell])
    above = shell_vals > 10 * shell_floor
    # length of the leading run of resolved shells
    resolved = int(np.argmin(above)) if not np.all(above) else shells.size
    if total == 0.0 or resolved < shells.size:
        # the spectrum sinks into round-off inside the computed range
        exponent = -np.inf
    else:
        half = shells.size // 2
        exponent = float(np.polyfit(np.log(shell_w[half:]), np.log(shell_vals[half:]), 1)[0])
    return HSResult(total, shells, shell_vals, shell_w, exponent, bool(exponent < -p), p, resolved)


def _abs_integral(profile: AccelerationProfile) -> float:
    if profile.kind == "segments":
        return float(np.sum(np.abs(profile.accelerations * profile.durations)))
    t = np.linspace(profile.tau[0], profile.tau[-1], 16 * profile.tau.size)
    return float(trapezoid(np.abs(profile.acceleration(t)), t))
