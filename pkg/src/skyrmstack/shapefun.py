"""Dimensionless pair-interaction shape functions.

Three functions of the radius ratio alpha and the scaled center separation
lambda enter the stack energy:

    F_vv(alpha, lambda) = 32/(3 pi^2) int_0^inf xi^2 J0(lambda xi) K1(alpha xi) K1(xi/alpha) dxi
    F_ss(alpha, lambda) = 32/pi^2    int_0^inf xi^2 J0(lambda xi) K0(alpha xi) K0(xi/alpha) dxi
    F_vs(alpha, lambda) = 2          int_0^inf xi^2 J0(lambda xi) K0(alpha xi) K1(xi/alpha) dxi

normalized so that all three equal 1 at (alpha, lambda) = (1, 0).  The
integrands carry an exponential envelope exp(-(alpha + 1/alpha) xi) from the
K-factors and one oscillatory factor J0(lambda xi), so the quadrature
partitions [0, inf) at the J0 zeros, applies Gauss-Legendre panels
(vectorized, with a 12-vs-24-point error estimate and panel bisection), and
switches to Euler summation of the alternating panel series when the
oscillation is much faster than the envelope decay.

Closed forms at lambda = 0 (complete elliptic integrals / logarithms) and at
alpha = 1 (elliptic integrals of 1/2 - sqrt(lambda^2+4)/4) are provided with
series branches across their removable singularities.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError
from .specfun import asinh, bessel_j0, bessel_k0, bessel_k1, ellipe, ellipk

try:
    if os.environ.get("SKYRMSTACK_NO_NUMBA"):
        raise ImportError
    from ._fastfun import pair_integrands as _pair_integrands_jit
except ImportError:  # pragma: no cover - exercised via SKYRMSTACK_NO_NUMBA
    _pair_integrands_jit = None

_NORM_VV = 32.0 / (3.0 * math.pi**2)
_NORM_SS = 32.0 / math.pi**2
_NORM_VS = 2.0

KINDS = ("vv", "ss", "vs", "sv")


@dataclass(frozen=True)
class ShapeArgs:
    """Arguments of the shape functions: radius ratio and scaled separation."""

    alpha: float
    lam: float = 0.0

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not (self.lam >= 0 and math.isfinite(self.lam)):
            raise DomainError(f"lambda must be >= 0, got {self.lam}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy knobs for the shape-function quadrature.

    With ``refine`` unset the fixed panel structure is integrated in a
    single Gauss pass with no error estimate (reported as NaN); optimizer
    interiors use this and re-verify their final point at full accuracy.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 0.0
    max_intervals: int = 4000
    xi_max: float | None = None  # tail cut; None picks it from the envelope
    refine: bool = True

    def __post_init__(self):
        if not (self.abs_tol > 0):
            raise DomainError("abs_tol must be > 0")
        if self.rel_tol < 0:
            raise DomainError("rel_tol must be >= 0")


DEFAULT_QUAD = QuadratureSpec()
#: Looser spec for inner optimization loops; final results get re-verified.
FAST_QUAD = QuadratureSpec(abs_tol=1e-8, refine=False)

# Gauss-Legendre nodes/weights on [0, 1], low and high order
_GL12 = np.polynomial.legendre.leggauss(12)
_GL24 = np.polynomial.legendre.leggauss(24)
_GL_X12, _GL_W12 = 0.5 * (_GL12[0] + 1.0), 0.5 * _GL12[1]
_GL_X24, _GL_W24 = 0.5 * (_GL24[0] + 1.0), 0.5 * _GL24[1]

_EULER_MIN_PANELS = 256  # direct-sum below this many half-wave panels


def _j0_zeros(n: int) -> np.ndarray:
    """First n positive zeros of J0 (McMahon expansion, ~1e-7 or better)."""
    k = np.arange(1, n + 1, dtype=float)
    b = (k - 0.25) * math.pi
    e = 1.0 / (8.0 * b)
    return b + e * (1.0 - e * e * (124.0 / 3.0 - e * e * 120928.0 / 15.0))


def _integrand_matrix(xi: np.ndarray, alpha: float, lam: float) -> np.ndarray:
    """Rows: normalized vv, ss, vs, sv integrands evaluated at xi."""
    if _pair_integrands_jit is not None:
        return _pair_integrands_jit(xi, alpha, lam, np.empty((4, xi.shape[0])))
    k0a = bessel_k0(alpha * xi)
    k1a = bessel_k1(alpha * xi)
    k0b = bessel_k0(xi / alpha)
    k1b = bessel_k1(xi / alpha)
    common = xi * xi * (bessel_j0(lam * xi) if lam > 0.0 else 1.0)
    return np.stack(
        [
            _NORM_VV * common * k1a * k1b,
            _NORM_SS * common * k0a * k0b,
            _NORM_VS * common * k0a * k1b,
            _NORM_VS * common * k0b * k1a,
        ]
    )


def _panel_sums(edges: np.ndarray, alpha: float, lam: float, estimate: bool = True):
    """GL24 panel integrals and |GL24-GL12| error estimates, vectorized.

    Returns (values[4, npanels], errs[npanels]); with ``estimate`` off the
    GL12 comparison pass is skipped and errs is None.
    """
    lo = edges[:-1]
    width = np.diff(edges)
    npan = len(lo)
    x24 = (lo[:, None] + width[:, None] * _GL_X24).ravel()
    if not estimate:
        f = _integrand_matrix(x24, alpha, lam)
        v24 = f.reshape(4, npan, 24) @ _GL_W24
        v24 *= width
        return v24, None
    nodes = np.concatenate(
        (x24, (lo[:, None] + width[:, None] * _GL_X12).ravel())
    )
    f = _integrand_matrix(nodes, alpha, lam)
    v24 = f[:, : 24 * npan].reshape(4, npan, 24) @ _GL_W24
    v24 *= width
    v12 = f[:, 24 * npan :].reshape(4, npan, 12) @ _GL_W12
    v12 *= width
    return v24, np.max(np.abs(v24 - v12), axis=0)


def _tail_cut(alpha: float, abs_tol: float) -> float:
    """Cut point past which the K-product envelope contributes < abs_tol/10.

    Probes the actual (J0-free) integrand on a geometric ladder: the
    envelope decays like exp(-s xi) with s = alpha + 1/alpha, so the tail
    beyond x is bounded by |f(x)| * (1/s) * (1 + 1/(s x)) up to the slowly
    varying prefactor.
    """
    s = alpha + 1.0 / alpha
    ladder = (4.0 / s) * 1.45 ** np.arange(24)
    env = np.max(np.abs(_integrand_matrix(ladder, alpha, 0.0)), axis=0)
    bounds = env * (1.2 / s) * (1.0 + 1.0 / (s * ladder))
    ok = np.where(bounds < 0.1 * abs_tol)[0]
    if len(ok):
        return float(ladder[ok[0]])
    x = float(ladder[-1])
    for _ in range(200):
        env = float(np.max(np.abs(_integrand_matrix(np.array([x]), alpha, 0.0))))
        if env * (1.2 / s) * (1.0 + 1.0 / (s * x)) < 0.1 * abs_tol:
            return x
        x *= 1.3
    return x


def _euler_sum(terms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Limit of sum_k terms[:, k] for alternating panel series (per row).

    Direct partial sums over the first quarter, then repeated averaging of
    the partial-sum sequence.  Returns (value, error_estimate) per row.
    """
    n_direct = max(4, terms.shape[1] // 4)
    head = terms[:, :n_direct].sum(axis=1)
    seq = np.cumsum(terms[:, n_direct:], axis=1)
    prev = seq[:, 0].copy()
    while seq.shape[1] > 1:
        prev = seq[:, 0].copy()
        seq = 0.5 * (seq[:, :-1] + seq[:, 1:])
    return head + seq[:, 0], np.abs(seq[:, 0] - prev)


def _integrate_pair(alpha: float, lam: float, quad: QuadratureSpec):
    """All four shape integrals at (alpha, lambda); returns (values[4], err)."""
    tol = quad.abs_tol
    xmax = quad.xi_max if quad.xi_max is not None else _tail_cut(alpha, tol)
    s = alpha + 1.0 / alpha
    m_big = max(alpha, 1.0 / alpha)

    # envelope-resolving edges; finer near the origin to track the K scales
    n_env = 16
    x0 = min(0.04 / m_big, xmax / 64.0)
    env_edges = np.concatenate(([0.0], np.geomspace(x0, xmax, n_env)))

    n_half_waves = int(lam * xmax / math.pi) + 1 if lam > 0 else 0

    if lam > 0 and n_half_waves > _EULER_MIN_PANELS and lam > 5.0 * s:
        # oscillation much faster than decay: alternating panel series
        n_terms = 160 if quad.refine else 96
        zeros = _j0_zeros(n_terms + 1) / lam
        head_edges = np.concatenate(([0.0], np.geomspace(min(x0, zeros[0] / 8.0), zeros[0], 8)))
        terms, _ = _panel_sums(zeros, alpha, lam, estimate=False)
        tail_val, tail_err = _euler_sum(terms)
        if not quad.refine:
            head_vals, _ = _panel_sums(head_edges, alpha, lam, estimate=False)
            return head_vals.sum(axis=1) + tail_val, math.nan
        head_vals, head_err = _refined_sum(head_edges, alpha, lam, 0.5 * tol, quad.max_intervals)
        values = head_vals + tail_val
        err = float(head_err + tail_err.max())
        if err > tol * 8 and quad.xi_max is None:
            raise NumericError(
                "shape-function Euler summation stalled",
                achieved=err,
                requested=tol,
                alpha=alpha,
                lam=lam,
            )
        return values, err

    if lam > 0:
        zeros = _j0_zeros(n_half_waves) / lam
        edges = np.unique(np.concatenate((env_edges, zeros[zeros < xmax])))
    else:
        edges = env_edges

    if not quad.refine:
        values, _ = _panel_sums(edges, alpha, lam, estimate=False)
        return values.sum(axis=1), math.nan
    values, total_err = _refined_sum(edges, alpha, lam, tol, quad.max_intervals)
    if total_err > tol:
        raise NumericError(
            "shape-function quadrature did not reach the requested tolerance",
            achieved=total_err,
            requested=tol,
            alpha=alpha,
            lam=lam,
        )
    return values, total_err


def _refined_sum(edges, alpha: float, lam: float, tol: float, max_intervals: int):
    """Panel sum with GL12/GL24 estimates and bisection of offending panels."""
    values, errs = _panel_sums(edges, alpha, lam)
    for _ in range(24):
        total_err = errs.sum()
        if total_err <= 0.5 * tol or len(edges) - 1 >= max_intervals:
            break
        bad = errs > tol / (4.0 * len(errs))
        if not np.any(bad):
            break
        lo, hi = edges[:-1][bad], edges[1:][bad]
        edges = np.unique(np.concatenate((edges, 0.5 * (lo + hi))))
        values, errs = _panel_sums(edges, alpha, lam)
    return values.sum(axis=1), float(errs.sum())


def pair_values(alpha: float, lam: float, quad: QuadratureSpec = DEFAULT_QUAD):
    """(F_vv, F_ss, F_vs(alpha), F_vs(1/alpha)) at one (alpha, lambda) point.

    One shared quadrature serves all four integrals; this is the fast path
    used by the stack-energy pair terms.
    """
    ShapeArgs(alpha, lam)
    vals, _ = _integrate_pair(alpha, lam, quad)
    return tuple(float(v) for v in vals)


def shape_value(kind: str, alpha: float, lam: float, quad: QuadratureSpec = DEFAULT_QUAD):
    """(value, error_estimate) of one shape function by quadrature."""
    if kind not in KINDS:
        raise DomainError(f"unknown shape-function kind {kind!r}")
    ShapeArgs(alpha, lam)
    vals, err = _integrate_pair(alpha, lam, quad)
    return float(vals[KINDS.index(kind)]), err


def f_vv(alpha: float, lam: float = 0.0, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Volume-volume shape function by quadrature."""
    return shape_value("vv", alpha, lam, quad)[0]


def f_ss(alpha: float, lam: float = 0.0, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Surface-surface shape function by quadrature."""
    return shape_value("ss", alpha, lam, quad)[0]


def f_vs(alpha: float, lam: float = 0.0, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Volume-surface shape function by quadrature."""
    return shape_value("vs", alpha, lam, quad)[0]


# ---------------------------------------------------------------------------
# closed forms at lambda = 0
#
# The (alpha^4 - 1)^2 denominators make alpha = 1 a removable singularity;
# inside |1 - alpha^4| < 0.01 the elliptic brackets are replaced by their
# series in t = 1 - alpha^4 (coefficients from the K/E Maclaurin series),
# which crosses over just as float cancellation in the direct forms reaches
# ~5e-11.

_T_SWITCH = 0.01
_VV_T_SERIES = (1.0, 1 / 4, 15 / 128, 35 / 512, 735 / 16384)
_SS_T_SERIES = (1.0, 3 / 4, 75 / 128, 245 / 512, 6615 / 16384)


def _check_alpha(alpha: float) -> float:
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be > 0, got {alpha}")
    return float(alpha)


def f_vv_lambda0(alpha: float) -> float:
    """Closed form of F_vv(alpha, 0)."""
    alpha = _check_alpha(alpha)
    if alpha > 1.0:
        alpha = 1.0 / alpha
    t = 1.0 - alpha**4
    if abs(t) < _T_SWITCH:
        acc = 0.0
        for c in reversed(_VV_T_SERIES):
            acc = acc * t + c
        return alpha * acc
    return (
        16.0
        * alpha
        * ((alpha**4 + 1.0) * ellipe(t) - 2.0 * alpha**4 * ellipk(t))
        / (3.0 * math.pi * t * t)
    )


def f_ss_lambda0(alpha: float) -> float:
    """Closed form of F_ss(alpha, 0)."""
    alpha = _check_alpha(alpha)
    if alpha > 1.0:
        alpha = 1.0 / alpha
    t = 1.0 - alpha**4
    if abs(t) < _T_SWITCH:
        acc = 0.0
        for c in reversed(_SS_T_SERIES):
            acc = acc * t + c
        return alpha**3 * acc
    return (
        16.0
        * alpha**3
        * ((alpha**4 + 1.0) * ellipk(t) - 2.0 * ellipe(t))
        / (math.pi * t * t)
    )


def f_vs_lambda0(alpha: float) -> float:
    """Closed form of F_vs(alpha, 0), continuous through alpha = 1."""
    alpha = _check_alpha(alpha)
    u = alpha**4 - 1.0
    if abs(u) < 0.04:
        # (u - log(1+u))/u^2 = sum_{k>=0} (-1)^k u^k / (k+2)
        acc = 0.0
        for k in range(14, -1, -1):
            acc = -acc * u + 1.0 / (k + 2.0)
        return 2.0 * alpha**3 * acc
    return 2.0 * alpha**3 * (u - math.log1p(u)) / (u * u)


# ---------------------------------------------------------------------------
# closed forms at alpha = 1 (elliptic argument m = 1/2 - sqrt(lambda^2+4)/4)

_LAM_SWITCH = 3e-3
_VV_L_SERIES = (1.0, -15 / 64, 525 / 8192)
_SS_L_SERIES = (1.0, -27 / 64, 1125 / 8192)
_VS_L_SERIES = (1.0, -1 / 3, 1 / 10)


def _check_lam(lam: float) -> float:
    if not (math.isfinite(lam) and lam >= 0):
        raise DomainError(f"lambda must be >= 0, got {lam}")
    return float(lam)


def _lam_series(coeffs, lam: float) -> float:
    l2 = lam * lam
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * l2 + c
    return acc


def f_vv_alpha1(lam: float) -> float:
    """Closed form of F_vv(1, lambda)."""
    lam = _check_lam(lam)
    if lam < _LAM_SWITCH:
        return _lam_series(_VV_L_SERIES, lam)
    l2 = lam * lam
    s = math.sqrt(l2 + 4.0)
    k = ellipk(0.5 - 0.25 * s)
    e = ellipe(0.5 - 0.25 * s)
    bracket = (
        (l2 * s + 4.0 * s + 8.0) * k * k
        - 4.0 * (l2 * s + 2.0 * s + 4.0) * k * e
        + 4.0 * (l2 + 2.0) * s * e * e
    )
    return 32.0 * bracket / (3.0 * math.pi**2 * l2 * s**3)


def f_ss_alpha1(lam: float) -> float:
    """Closed form of F_ss(1, lambda)."""
    lam = _check_lam(lam)
    if lam < _LAM_SWITCH:
        return _lam_series(_SS_L_SERIES, lam)
    l2 = lam * lam
    s = math.sqrt(l2 + 4.0)
    k = ellipk(0.5 - 0.25 * s)
    e = ellipe(0.5 - 0.25 * s)
    bracket = (
        ((s + 4.0) * l2 + 4.0 * (s + 2.0)) * k * k
        - 8.0 * (l2 + s + 2.0) * k * e
        + 8.0 * s * e * e
    )
    return -32.0 * bracket / (math.pi**2 * l2 * s**3)


def f_vs_alpha1(lam: float) -> float:
    """Closed form of F_vs(1, lambda)."""
    lam = _check_lam(lam)
    if lam < 1e-6:
        return _lam_series(_VS_L_SERIES, lam)
    l2p4 = lam * lam + 4.0
    return 2.0 * (1.0 / l2p4 + 4.0 * asinh(0.5 * lam) / (lam * l2p4**1.5))
