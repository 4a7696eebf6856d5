"""Compiled inner loop for the shape-function quadrature.

One fused scalar pass per node computes J0(lam*xi), K0/K1 at alpha*xi and
xi/alpha, and the four normalized integrand products.  The polynomial and
Chebyshev coefficients are the same frozen tables the numpy implementations
in :mod:`.specfun` use; tests assert the two paths agree to double precision.

Importing this module triggers (cached) JIT compilation; callers fall back to
the numpy path when numba is unavailable or disabled via the environment
variable SKYRMSTACK_NO_NUMBA.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from . import _specfun_coeffs as _cf
from .specfun import _I0_C, _I1_C, _J0_C, _K0_C, _K1_C, EULER_GAMMA

_J0P = np.ascontiguousarray(_cf.J0_LARGE_P)
_J0Q = np.ascontiguousarray(_cf.J0_LARGE_Q)
_K0T = np.ascontiguousarray(_cf.K0_TAIL)
_K1T = np.ascontiguousarray(_cf.K1_TAIL)

_NORM_VV = 32.0 / (3.0 * math.pi**2)
_NORM_SS = 32.0 / math.pi**2


@njit(cache=True, inline="always")
def _poly(coeffs, z):
    acc = coeffs[-1]
    for i in range(len(coeffs) - 2, -1, -1):
        acc = acc * z + coeffs[i]
    return acc


@njit(cache=True, inline="always")
def _cheb(coeffs, t):
    b0 = 0.0
    b1 = 0.0
    for i in range(len(coeffs) - 1, 0, -1):
        b0, b1 = coeffs[i] + 2.0 * t * b0 - b1, b0
    return coeffs[0] + t * b0 - b1


@njit(cache=True, inline="always")
def _j0(x):
    ax = abs(x)
    if ax <= 5.0:
        return _poly(_J0_C, 0.25 * ax * ax)
    t = 50.0 / (ax * ax) - 1.0
    p = _cheb(_J0P, t)
    q = _cheb(_J0Q, t)
    chi = ax - 0.25 * math.pi
    return math.sqrt(2.0 / (math.pi * ax)) * (p * math.cos(chi) - (q / ax) * math.sin(chi))


@njit(cache=True, inline="always")
def _k0k1(x):
    if x <= 2.0:
        z = 0.25 * x * x
        lg = math.log(0.5 * x)
        k0 = -(lg + EULER_GAMMA) * _poly(_I0_C, z) + _poly(_K0_C, z)
        i1 = 0.5 * x * _poly(_I1_C, z)
        k1 = 1.0 / x + lg * i1 - 0.25 * x * _poly(_K1_C, z)
        return k0, k1
    t = 4.0 / x - 1.0
    scale = math.exp(-x) / math.sqrt(x)
    return scale * _cheb(_K0T, t), scale * _cheb(_K1T, t)


@njit(cache=True)
def pair_integrands(xi, alpha, lam, out):
    """Fill out[0..3, :] with the vv, ss, vs, sv integrands at nodes xi."""
    inv_alpha = 1.0 / alpha
    for i in range(xi.shape[0]):
        x = xi[i]
        k0a, k1a = _k0k1(alpha * x)
        k0b, k1b = _k0k1(inv_alpha * x)
        common = x * x * (_j0(lam * x) if lam > 0.0 else 1.0)
        out[0, i] = _NORM_VV * common * k1a * k1b
        out[1, i] = _NORM_SS * common * k0a * k0b
        out[2, i] = 2.0 * common * k0a * k1b
        out[3, i] = 2.0 * common * k0b * k1a
    return out
