"""Special functions underpinning the reduced multilayer-skyrmion model.

Seven functions are provided: J0, K0, K1, the complete elliptic integrals
K(m) and E(m), the lower real branch W_{-1} of the Lambert W function, and
sinh^{-1}.  They are implemented in-repo (exact power series, Chebyshev
expansions of the scaled tails, AGM iteration, Halley iteration) rather than
bound from an external library, so that the accuracy contract -- relative
error at or below 1e-12 against independent oracles -- is testable and stays
under this package's control.

All Bessel-type functions accept scalars or numpy arrays.  Elliptic integrals
use the parameter convention

    K(m) = int_0^{pi/2} dtheta / sqrt(1 - m sin^2 theta),

i.e. the argument is the squared modulus, and negative ``m`` is supported
through the imaginary-modulus transformation.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from . import _specfun_coeffs as _cf
from .errors import DomainError, NumericError

EULER_GAMMA = 0.5772156649015329

_INV_E = math.exp(-1.0)

# ---------------------------------------------------------------------------
# power-series coefficients for the small-argument branches (z = x^2/4)

_KMAX = 20
_HARMONIC = np.cumsum(np.concatenate(([0.0], 1.0 / np.arange(1, _KMAX + 2))))
_FACT = np.array([math.factorial(k) for k in range(_KMAX + 2)], dtype=float)

_I0_C = 1.0 / _FACT[: _KMAX + 1] ** 2
_I1_C = 1.0 / (_FACT[: _KMAX + 1] * _FACT[1 : _KMAX + 2])
_K0_C = _HARMONIC[: _KMAX + 1] * _I0_C
_K1_C = (_HARMONIC[: _KMAX + 1] + _HARMONIC[1 : _KMAX + 2] - 2.0 * EULER_GAMMA) * _I1_C
_J0_C = ((-1.0) ** np.arange(_KMAX + 1)) * _I0_C


def _polyval_z(coeffs: np.ndarray, z):
    """Horner evaluation of sum_k coeffs[k] * z^k (scalar or array z)."""
    acc = np.zeros_like(z) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def _clenshaw(coeffs: np.ndarray, t):
    b0 = np.zeros_like(t)
    b1 = np.zeros_like(t)
    for c in coeffs[:0:-1]:
        b0, b1 = c + 2.0 * t * b0 - b1, b0
    return coeffs[0] + t * b0 - b1


def _split(x, asarray=np.asarray):
    x = asarray(x, dtype=float)
    return x, x.ndim == 0


# ---------------------------------------------------------------------------
# Bessel functions


def bessel_j0(x):
    """Bessel function of the first kind J0, for any real argument."""
    x, scalar = _split(x)
    ax = np.abs(x)
    out = np.empty_like(ax)

    small = ax <= 5.0
    if np.any(small):
        xs = ax[small]
        out[small] = _polyval_z(_J0_C, 0.25 * xs * xs)
    big = ~small
    if np.any(big):
        xb = ax[big]
        t = 2.0 * (25.0 / (xb * xb)) - 1.0
        p = _clenshaw(_cf.J0_LARGE_P, t)
        q = _clenshaw(_cf.J0_LARGE_Q, t)
        chi = xb - 0.25 * np.pi
        out[big] = np.sqrt(2.0 / (np.pi * xb)) * (
            p * np.cos(chi) - (q / xb) * np.sin(chi)
        )
    return float(out) if scalar else out


def _bessel_k(x, order: int):
    x, scalar = _split(x)
    if np.any(x <= 0.0) or not np.all(np.isfinite(x)):
        raise DomainError(f"K{order} requires x > 0")
    out = np.empty_like(x)

    small = x <= 2.0
    if np.any(small):
        xs = x[small]
        z = 0.25 * xs * xs
        lg = np.log(0.5 * xs)
        if order == 0:
            i0 = _polyval_z(_I0_C, z)
            out[small] = -(lg + EULER_GAMMA) * i0 + _polyval_z(_K0_C, z)
        else:
            i1 = 0.5 * xs * _polyval_z(_I1_C, z)
            out[small] = 1.0 / xs + lg * i1 - 0.25 * xs * _polyval_z(_K1_C, z)
    big = ~small
    if np.any(big):
        xb = x[big]
        t = 2.0 * (2.0 / xb) - 1.0
        tail = _cf.K0_TAIL if order == 0 else _cf.K1_TAIL
        out[big] = np.exp(-xb) * _clenshaw(tail, t) / np.sqrt(xb)
    return float(out) if scalar else out


def bessel_k0(x):
    """Modified Bessel function of the second kind K0, for x > 0."""
    return _bessel_k(x, 0)


def bessel_k1(x):
    """Modified Bessel function of the second kind K1, for x > 0."""
    return _bessel_k(x, 1)


# ---------------------------------------------------------------------------
# complete elliptic integrals (parameter convention, AGM-based)


def _agm_k(m):
    """K(m) for array m in [0, 1) via the arithmetic-geometric mean."""
    a = np.ones_like(m)
    b = np.sqrt(1.0 - m)
    for _ in range(60):
        if np.all(np.abs(a - b) <= 1e-15 * a):
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    else:
        raise NumericError("AGM failed to converge", residual=float(np.max(a - b)))
    return 0.5 * np.pi / a


def _agm_ke(m):
    """(K(m), E(m)) for array m in [0, 1) via the AGM with the c-sum."""
    a = np.ones_like(m)
    b = np.sqrt(1.0 - m)
    s = 0.5 * m.copy()
    pow2 = 0.5
    for _ in range(60):
        if np.all(np.abs(a - b) <= 1e-15 * a):
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        pow2 *= 2.0
        s += pow2 * c * c
    else:
        raise NumericError("AGM failed to converge", residual=float(np.max(a - b)))
    k = 0.5 * np.pi / a
    return k, k * (1.0 - s)


def ellipk(m):
    """Complete elliptic integral of the first kind, K(m), for m < 1."""
    m, scalar = _split(m)
    if np.any(m >= 1.0) or not np.all(np.isfinite(m)):
        raise DomainError("K(m) requires m < 1")
    out = np.empty_like(m)
    neg = m < 0.0
    if np.any(neg):
        p = -m[neg]
        out[neg] = _agm_k(p / (1.0 + p)) / np.sqrt(1.0 + p)
    pos = ~neg
    if np.any(pos):
        out[pos] = _agm_k(m[pos])
    return float(out) if scalar else out


def ellipe(m):
    """Complete elliptic integral of the second kind, E(m), for m <= 1."""
    m, scalar = _split(m)
    if np.any(m > 1.0) or not np.all(np.isfinite(m)):
        raise DomainError("E(m) requires m <= 1")
    out = np.empty_like(m)
    one = m == 1.0
    out[one] = 1.0
    neg = m < 0.0
    if np.any(neg):
        p = -m[neg]
        out[neg] = np.sqrt(1.0 + p) * _agm_ke(p / (1.0 + p))[1]
    mid = ~(one | neg)
    if np.any(mid):
        out[mid] = _agm_ke(m[mid])[1]
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# Lambert W, lower real branch


def lambert_w_m1(x: float) -> float:
    """Lambert W on the W_{-1} branch: w <= -1 with w * e^w = x.

    Defined for -1/e <= x < 0.  The returned value satisfies the defining
    equation to a relative residual of about 1e-15 (Halley iteration from a
    branch-appropriate starting point).
    """
    x = float(x)
    if not (-_INV_E <= x < 0.0):
        # one ulp of slack at the branch point, where w = -1 exactly
        if -_INV_E - 1e-17 <= x < 0.0:
            return -1.0
        raise DomainError(f"lambert_w_m1 requires -1/e <= x < 0, got {x}")

    if x > -0.27:
        l1 = math.log(-x)
        l2 = math.log(-l1)
        w = l1 - l2 + l2 / l1 + l2 * (l2 - 2.0) / (2.0 * l1 * l1)
    else:
        p = -math.sqrt(2.0 * (1.0 + math.e * x))
        w = -1.0 + p - p * p / 3.0 + 11.0 * p**3 / 72.0 - 43.0 * p**4 / 540.0
    if w > -1.0:
        w = -1.0

    for _ in range(40):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= 1e-15 * abs(x):
            break
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= step
        if abs(step) <= 1e-16 * abs(w):
            break
    else:
        raise NumericError("lambert_w_m1 did not converge", x=x, w=w)
    return w


# ---------------------------------------------------------------------------
# inverse hyperbolic sine


def asinh(x):
    """sinh^{-1}(x) = log(x + sqrt(x^2 + 1)), guarded against overflow."""
    x, scalar = _split(x)
    ax = np.abs(x)
    out = np.empty_like(ax)

    big = ax > 1e8
    if np.any(big):
        # sqrt(x^2+1) ~ |x| to below double precision; avoids x^2 overflow
        out[big] = np.log(ax[big]) + math.log(2.0)
    rest = ~big
    if np.any(rest):
        xr = ax[rest]
        # log1p form is exact through the |x| -> 0 limit
        out[rest] = np.log1p(xr + xr * xr / (1.0 + np.sqrt(1.0 + xr * xr)))
    out *= np.sign(x)
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# tagged dispatch (used by the CLI table generator)


class SpecialFunctionId(enum.Enum):
    """Closed enumeration of the functions this module provides."""

    J0 = "J0"
    K0 = "K0"
    K1 = "K1"
    ELLIPTIC_K = "EllipticK"
    ELLIPTIC_E = "EllipticE"
    LAMBERT_W_M1 = "LambertWm1"
    ASINH = "Asinh"


_BESSEL = {
    SpecialFunctionId.J0: bessel_j0,
    SpecialFunctionId.K0: bessel_k0,
    SpecialFunctionId.K1: bessel_k1,
}

_ELLIPTIC = {
    SpecialFunctionId.ELLIPTIC_K: ellipk,
    SpecialFunctionId.ELLIPTIC_E: ellipe,
}


def bessel(fid: SpecialFunctionId, x):
    """Evaluate one of J0, K0, K1 (K0/K1 require x > 0)."""
    if fid not in _BESSEL:
        raise DomainError(f"{fid} is not a Bessel function id")
    return _BESSEL[fid](x)


def elliptic(fid: SpecialFunctionId, m):
    """Evaluate K(m) (m < 1) or E(m) (m <= 1)."""
    if fid not in _ELLIPTIC:
        raise DomainError(f"{fid} is not an elliptic integral id")
    return _ELLIPTIC[fid](m)


def evaluate(fid: SpecialFunctionId, x):
    """Evaluate any tagged function at x (CLI plumbing)."""
    if fid in _BESSEL:
        return _BESSEL[fid](x)
    if fid in _ELLIPTIC:
        return _ELLIPTIC[fid](x)
    if fid is SpecialFunctionId.LAMBERT_W_M1:
        return lambert_w_m1(x)
    return asinh(x)
