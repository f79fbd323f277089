r"""Modified Bessel functions of the first kind for complex order.

Evaluates :math:`I_\nu(x)` for real :math:`x > 0` and complex
:math:`\nu = a + i b` by the ascending series

.. math::
    I_\nu(x) = \frac{(x/2)^\nu}{\Gamma(\nu + 1)}
    \sum_{k \ge 0} \frac{(x^2/4)^k}{k!\,(\nu + 1)_k},

with the prefactor carried in logarithmic form so that large imaginary
orders do not overflow intermediate quantities. Every evaluation returns a
rigorous-in-practice absolute error bound built from the truncation tail,
the accumulated rounding of the terms and the log-gamma error.

The series is only numerically useful while the largest term is not much
larger than the sum. In practice this means ``x <= 120`` and
``|Im nu| <= 80``; outside of that region the reported bound grows and an
:class:`AccuracyLossError` is raised when it exceeds the requested
tolerance.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AccuracyLossError",
    "BesselValue",
    "DEFAULT_TOL",
    "MAX_ARGUMENT",
    "MAX_IMAG_ORDER",
    "bessel_i",
    "bessel_i_deriv",
    "loggamma",
]

DEFAULT_TOL = 1e-12
MAX_ARGUMENT = 120.0
MAX_IMAG_ORDER = 80.0

_EPS = np.finfo(float).eps
# Lanczos approximation, g = 607/128, n = 15 (coefficients fitted at
# 60-digit precision; max relative error ~1.5e-14 for Re z >= 1/2).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_P = (
    0.999999999999981,
    57.15623566586286,
    -59.59796035546217,
    14.136097974041979,
    -0.49191380036086874,
    3.380482790171836e-05,
    4.7904605955694565e-05,
    -0.00010485782084382262,
    0.00017851347479140987,
    -0.00025427844699024547,
    0.00028244499134027346,
    -0.00022899151839553183,
    0.00012582582317068465,
    -4.1591957316092184e-05,
    6.2178536245112646e-06,
)
_LANCZOS_REL_ERR = 5e-14
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


class AccuracyLossError(ArithmeticError):
    """The error bound of a series evaluation exceeds the requested tolerance."""


@dataclass(frozen=True)
class BesselValue:
    """Value of a Bessel function together with an absolute error bound.

    ``value`` and ``abs_error_bound`` are scalars for scalar input and arrays
    of matching shape for array input.
    """

    value: complex | np.ndarray
    abs_error_bound: float | np.ndarray

    def __iter__(self):
        yield self.value
        yield self.abs_error_bound


def _log_sin_pi(z: complex) -> complex:
    # log(sin(pi z)) without overflow for large |Im z|; the real part is
    # reduced first so that sin stays accurate next to the integers
    j = math.floor(z.real + 0.5)
    w = math.pi * complex(z.real - j, z.imag)
    if j % 2:
        return _log_sin_pi_reduced(w) + 1j * math.pi
    return _log_sin_pi_reduced(w)


def _log_sin_pi_reduced(w: complex) -> complex:
    if abs(w.imag) < 20.0:
        return cmath.log(cmath.sin(w))
    if w.imag > 0:
        return -1j * w + cmath.log(1.0 - cmath.exp(2j * w)) + cmath.log(0.5j)
    return 1j * w + cmath.log(1.0 - cmath.exp(-2j * w)) - cmath.log(2j)


def loggamma(z: complex) -> complex:
    """Logarithm of the gamma function for complex argument.

    Lanczos approximation with the reflection formula for ``Re z < 1/2``.
    The branch is not the principal one of ``log(Gamma(z))``; only
    ``exp(loggamma(z))`` is meaningful.
    """
    z = complex(z)
    if z.real < 0.5:
        if z.imag == 0.0 and z.real == math.floor(z.real):
            raise ValueError(f"gamma has a pole at {z.real}")
        return math.log(math.pi) - _log_sin_pi(z) - loggamma(1.0 - z)
    z -= 1.0
    acc = _LANCZOS_P[0]
    for i in range(1, len(_LANCZOS_P)):
        acc += _LANCZOS_P[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def _series(nu: complex, x: np.ndarray, tol: float, k0: int = 0):
    """Compensated sum of the series from term ``k0`` on, normalised so that
    term ``k0`` equals one, and its error terms."""
    q = 0.25 * x * x
    term = np.ones_like(x, dtype=complex)
    total = np.ones_like(x, dtype=complex)
    comp = np.zeros_like(x, dtype=complex)
    # sum of |t_k| weighted by the number of roundings in t_k
    rounding = np.full(x.shape, 4.0)
    small_run = np.zeros(x.shape, dtype=int)
    tail = np.zeros(x.shape)
    k = k0
    kmax = 100000
    while True:
        k += 1
        denom = k * (nu + k)
        term = term * (q / denom)
        n_round = 2 * (k - k0) + 4
        # Kahan-Babuska accumulation
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        aterm = np.abs(term)
        rounding += n_round * aterm
        ratio = q / ((k + 1) * abs(nu + k + 1))
        small = (aterm <= tol * np.abs(total)) & (ratio < 0.5)
        small_run = np.where(small, small_run + 1, 0)
        if np.all(small_run >= 3) or k >= kmax:
            r = np.minimum(ratio, 0.5)
            tail = aterm * r / (1.0 - r)
            break
    return total, tail, rounding * _EPS


def _check_order(order_real: float, order_imag: float) -> tuple[float, bool]:
    # Negative integer real orders map onto I_{-n} = I_n.
    if order_imag == 0.0 and order_real < 0 and order_real == math.floor(order_real):
        return -order_real, True
    return order_real, False


def bessel_i(order_real: float, order_imag: float, x, tol: float | None = None,
             check: bool = True) -> BesselValue:
    r"""Modified Bessel function :math:`I_\nu(x)` with ``nu = order_real + 1j*order_imag``.

    Parameters
    ----------
    order_real, order_imag : float
        Real and imaginary part of the order.
    x : float or array_like
        Positive real argument(s).
    tol : float, optional
        Requested accuracy, absolute or relative whichever is looser.
        Defaults to ``DEFAULT_TOL``.
    check : bool
        Raise :class:`AccuracyLossError` when the error bound exceeds the
        tolerance. With ``check=False`` the bound is only reported.

    Returns
    -------
    BesselValue
    """
    tol = DEFAULT_TOL if tol is None else float(tol)
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise ValueError("bessel_i requires x > 0")
    order_real, _ = _check_order(float(order_real), float(order_imag))
    nu = complex(order_real, order_imag)
    xs = np.atleast_1d(xa)

    log_half = np.log(0.5 * xs)
    # Terms whose gamma argument nu + k + 1 has real part below 1/2 are
    # summed one by one: next to a negative integer order the normalised
    # recurrence would multiply a tiny prefactor by a huge sum.
    k0 = max(0, math.floor(0.5 - order_real))
    value = np.zeros(xs.shape, dtype=complex)
    bound = np.zeros(xs.shape)
    for k in range(k0):
        lg = loggamma(nu + k + 1.0) + math.lgamma(k + 1.0)
        t = np.exp((nu + 2 * k) * log_half - lg)
        value += t
        bound += np.abs(t) * (_LANCZOS_REL_ERR
                              + 4 * _EPS * (np.abs((nu + 2 * k) * log_half) + abs(lg) + 1.0))
    lg = loggamma(nu + k0 + 1.0) + math.lgamma(k0 + 1.0)
    log_pref = (nu + 2 * k0) * log_half - lg
    pref = np.exp(log_pref)
    total, tail, rnd = _series(nu, xs, min(tol, 1e-3) * 1e-2, k0)
    head = pref * total
    value += head
    apref = np.abs(pref)
    # log-gamma and prefactor rounding, relative to the series part
    rel_pref = _LANCZOS_REL_ERR + 4 * _EPS * (np.abs((nu + 2 * k0) * log_half) + abs(lg) + 1.0)
    bound += apref * (10.0 * tail + rnd) + np.abs(head) * rel_pref + 2 * _EPS * np.abs(value)

    if check:
        allowed = tol * np.maximum(1.0, np.abs(value))
        bad = bound > allowed
        if np.any(bad):
            i = int(np.argmax(bad))
            raise AccuracyLossError(
                f"I_nu(x) for nu={nu}, x={xs[i]:g}: error bound {bound[i]:.3g} "
                f"exceeds tolerance {allowed[i]:.3g}"
            )
    if xa.ndim == 0:
        return BesselValue(complex(value[0]), float(bound[0]))
    return BesselValue(value.reshape(xa.shape), bound.reshape(xa.shape))


def bessel_i_deriv(order_real: float, order_imag: float, x, tol: float | None = None,
                   check: bool = True) -> BesselValue:
    r"""Derivative :math:`I'_\nu(x)` from :math:`(I_{\nu-1} + I_{\nu+1})/2`."""
    lo = bessel_i(order_real - 1.0, order_imag, x, tol=tol, check=check)
    hi = bessel_i(order_real + 1.0, order_imag, x, tol=tol, check=check)
    return BesselValue(0.5 * (lo.value + hi.value),
                       0.5 * (lo.abs_error_bound + hi.abs_error_bound))
