"""Finite-dimensional energy of a stack of one skyrmion per layer.

The stack energy (with the topological bound 8*pi*N already subtracted) is a
sum of per-layer terms -- exchange excess 4 pi/L^2, anisotropy, Zeeman, DMI,
and the layer's own stray-field terms -- plus pair terms coupling layers n<k
through the shape functions of radius ratio and scaled separation:

    vv:  (3 pi^3/4) db sqrt(rho_n rho_k) cos(th_n) cos(th_k) F_vv(a, l)
    ss:  -(pi^3/4)  db sqrt(rho_n rho_k) F_ss(a, l)
    vs:  -4 pi db sqrt(rho_n rho_k) [cos(th_n) F_vs(a, l) - cos(th_k) F_vs(1/a, l)]

with a = sqrt(rho_k/rho_n), l = |r_n - r_k| / sqrt(rho_n rho_k) and
db = delta_bar.  Two forms are provided: the full form with explicit
truncation parameters L_n, and the reduced form after the partial
minimization L_n = 1/rho_n that eliminates them.

Bilayer specializations used by the landscape machinery: the on-axis energy
per layer F(rho) of the antiparallel Neel pair, and the equal-radius energy
F_2^sym(rho, r) minimized in closed form over the two rotation angles.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import AdmissibilityError, InvalidInputError, UnsupportedRegimeError
from .shapefun import (
    DEFAULT_QUAD,
    QuadratureSpec,
    f_ss_alpha1,
    f_vs_alpha1,
    f_vv_alpha1,
    pair_values,
)
from .specfun import EULER_GAMMA
from .units import RescaledParams

_PI = math.pi
_PI3 = math.pi**3
#: e^(1+2*gamma), the constant inside the reduced radius logarithm
_E1P2G = math.exp(1.0 + 2.0 * EULER_GAMMA)


def wrap_angle(theta: float) -> float:
    """Normalize an angle to [-pi, pi)."""
    t = math.fmod(theta + _PI, 2.0 * _PI)
    if t < 0.0:
        t += 2.0 * _PI
    return t - _PI


@dataclass(frozen=True)
class SkyrmionLayerParams:
    """One layer's skyrmion: radius, rotation angle, center, optional L."""

    rho: float
    theta: float = 0.0
    center: tuple[float, float] = (0.0, 0.0)
    L: float | None = None

    def __post_init__(self):
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise InvalidInputError(f"rho must be > 0, got {self.rho}")
        if not math.isfinite(self.theta):
            raise InvalidInputError("theta must be finite")
        if self.L is not None and not (self.L > 1 and math.isfinite(self.L)):
            raise InvalidInputError(f"L must be > 1 when present, got {self.L}")
        object.__setattr__(self, "theta", wrap_angle(self.theta))
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))


@dataclass(frozen=True)
class SkyrmionStack:
    """Ordered layers, bottom to top.  Order matters: the vs pair term is
    antisymmetric under layer exchange."""

    layers: tuple[SkyrmionLayerParams, ...]

    def __init__(self, layers):
        object.__setattr__(self, "layers", tuple(layers))
        if len(self.layers) < 1:
            raise InvalidInputError("a stack needs at least one layer")

    def __len__(self) -> int:
        return len(self.layers)

    def with_reduced_truncation(self) -> "SkyrmionStack":
        """Copy with every L_n set to 1/rho_n (the partial minimizer)."""
        return SkyrmionStack(
            SkyrmionLayerParams(la.rho, la.theta, la.center, 1.0 / la.rho)
            for la in self.layers
        )


@dataclass(frozen=True)
class LayerTerms:
    exchange_excess: float
    anisotropy: float
    zeeman: float
    dmi: float
    self_vv: float
    self_ss: float

    @property
    def total(self) -> float:
        return (
            self.exchange_excess
            + self.anisotropy
            + self.zeeman
            + self.dmi
            + self.self_vv
            + self.self_ss
        )


@dataclass(frozen=True)
class PairTerms:
    vv: float
    ss: float
    vs: float

    @property
    def total(self) -> float:
        return self.vv + self.ss + self.vs


@dataclass(frozen=True)
class EnergyBreakdown:
    """Per-term decomposition; ``total`` is the sum of every component."""

    layers: tuple[LayerTerms, ...]
    pairs: dict = field(default_factory=dict)  # (n, k) -> PairTerms, 0-based n < k
    total: float = 0.0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "layers": [vars(t) | {"total": t.total} for t in self.layers],
            "pairs": {
                f"{n + 1}-{k + 1}": vars(p) | {"total": p.total}
                for (n, k), p in self.pairs.items()
            },
        }


def _layer_terms_full(la: SkyrmionLayerParams, p: RescaledParams) -> LayerTerms:
    L2 = la.L * la.L
    rho2 = la.rho * la.rho
    c = math.cos(la.theta)
    return LayerTerms(
        exchange_excess=4.0 * _PI / L2,
        anisotropy=4.0 * _PI * rho2 * math.log(4.0 * L2 / math.exp(2.0 + 2.0 * EULER_GAMMA)),
        zeeman=-4.0 * _PI * p.h_bar * rho2 * math.log(4.0 * L2 / _E1P2G),
        dmi=-8.0 * _PI * p.kappa_bar * la.rho * c,
        self_vv=p.delta_bar * (3.0 * _PI3 / 8.0) * la.rho * c * c,
        self_ss=-p.delta_bar * (_PI3 / 8.0) * la.rho,
    )


def _pair_terms(
    n_layer: SkyrmionLayerParams,
    k_layer: SkyrmionLayerParams,
    p: RescaledParams,
    quad: QuadratureSpec,
) -> PairTerms:
    beta = math.sqrt(n_layer.rho * k_layer.rho)
    alpha = math.sqrt(k_layer.rho / n_layer.rho)
    dx = n_layer.center[0] - k_layer.center[0]
    dy = n_layer.center[1] - k_layer.center[1]
    lam = math.hypot(dx, dy) / beta
    cn, ck = math.cos(n_layer.theta), math.cos(k_layer.theta)
    if alpha == 1.0:
        fvv, fss = f_vv_alpha1(lam), f_ss_alpha1(lam)
        fvs = fsv = f_vs_alpha1(lam)
    else:
        fvv, fss, fvs, fsv = pair_values(alpha, lam, quad)
    pref = p.delta_bar * beta
    return PairTerms(
        vv=(3.0 * _PI3 / 4.0) * pref * cn * ck * fvv,
        ss=-(_PI3 / 4.0) * pref * fss,
        vs=-4.0 * _PI * pref * (cn * fvs - ck * fsv),
    )


def _assemble(stack, p, quad, layer_fn) -> EnergyBreakdown:
    layers = tuple(layer_fn(la, p) for la in stack.layers)
    pairs = {}
    for n in range(len(stack.layers) - 1):
        for k in range(n + 1, len(stack.layers)):
            pairs[(n, k)] = _pair_terms(stack.layers[n], stack.layers[k], p, quad)
    total = sum(t.total for t in layers) + sum(t.total for t in pairs.values())
    return EnergyBreakdown(layers=layers, pairs=pairs, total=total)


def energy_full(
    stack: SkyrmionStack, p: RescaledParams, quad: QuadratureSpec = DEFAULT_QUAD
) -> EnergyBreakdown:
    """Stack energy in the full form; every layer must carry L >= L0."""
    for i, la in enumerate(stack.layers):
        if la.L is None:
            raise InvalidInputError(f"layer {i + 1}: L is required by the full form")
        if la.L < p.L0:
            raise InvalidInputError(
                f"layer {i + 1}: L = {la.L} below the truncation floor L0 = {p.L0}"
            )
    return _assemble(stack, p, quad, _layer_terms_full)


def energy_reduced(
    stack: SkyrmionStack, p: RescaledParams, quad: QuadratureSpec = DEFAULT_QUAD
) -> EnergyBreakdown:
    """Stack energy after eliminating L_n = 1/rho_n.

    Radii must be admissible: rho in (0, 1/L0).  Any L present on the input
    layers is ignored in favor of the reduced substitution.
    """
    for i, la in enumerate(stack.layers):
        if not 0.0 < la.rho < p.rho_max:
            raise AdmissibilityError(
                f"layer {i + 1}: rho = {la.rho} outside the admissible "
                f"interval (0, {p.rho_max})"
            )
    return _assemble(stack.with_reduced_truncation(), p, quad, _layer_terms_full)


def bilayer_F(rho: float, p: RescaledParams) -> float:
    """Per-layer energy F(rho) of the concentric antiparallel Neel pair.

    Only meaningful at kappa_bar = h_bar = 0; twice this value is the
    bilayer energy at the symmetric configuration (rho, rho), theta = (0, -pi),
    coincident centers.
    """
    _require_plain_bilayer(p)
    if not 0.0 < rho < p.rho_max:
        raise AdmissibilityError(f"rho = {rho} outside (0, {p.rho_max})")
    rho2 = rho * rho
    return (
        -4.0 * _PI * rho2 * math.log(_E1P2G * rho2 / 4.0)
        - p.delta_bar * (_PI3 / 4.0) * rho
        - 4.0 * _PI * p.delta_bar * rho
    )


def _require_plain_bilayer(p: RescaledParams):
    if p.kappa_bar != 0.0 or p.h_bar != 0.0:
        raise UnsupportedRegimeError(
            "bilayer landscape functions require kappa_bar = h_bar = 0"
        )


def bilayer_F2sym(rho: float, r: float, p: RescaledParams):
    """Equal-radius bilayer energy minimized over both rotation angles.

    Returns (energy, c1, c2) where c_i = cos(theta_i) at the minimum.  The
    angular dependence is a convex-for-lambda>0 quadratic on [-1,1]^2 and is
    minimized in closed form (interior stationary point when admissible,
    otherwise exhaustive edge minimization).
    """
    _require_plain_bilayer(p)
    if not 0.0 < rho < p.rho_max:
        raise AdmissibilityError(f"rho = {rho} outside (0, {p.rho_max})")
    if r < 0.0:
        raise InvalidInputError(f"separation r must be >= 0, got {r}")
    lam = r / rho
    fvv, fss, fvs = f_vv_alpha1(lam), f_ss_alpha1(lam), f_vs_alpha1(lam)
    rho2 = rho * rho
    const = (
        -8.0 * _PI * rho2 * math.log(_E1P2G * rho2 / 4.0)
        - p.delta_bar * (_PI3 / 4.0) * rho
        - p.delta_bar * (_PI3 / 4.0) * rho * fss
    )
    a = p.delta_bar * (3.0 * _PI3 / 8.0) * rho  # coefficient of c1^2 + c2^2
    b = p.delta_bar * (3.0 * _PI3 / 4.0) * rho * fvv  # coefficient of c1*c2
    d = -4.0 * _PI * p.delta_bar * rho * fvs  # coefficient of (c1 - c2)

    def value(c1, c2):
        return a * (c1 * c1 + c2 * c2) + b * c1 * c2 + d * (c1 - c2)

    best = None
    if abs(b) < 2.0 * a:  # positive-definite Hessian
        c1 = -d / (2.0 * a - b)
        if abs(c1) <= 1.0:
            best = (value(c1, -c1), c1, -c1)
    if best is None:
        best = (math.inf, 0.0, 0.0)
        for c1 in (-1.0, 1.0):
            c2 = min(1.0, max(-1.0, -(b * c1 - d) / (2.0 * a)))
            cand = (value(c1, c2), c1, c2)
            best = min(best, cand)
        for c2 in (-1.0, 1.0):
            c1 = min(1.0, max(-1.0, -(b * c2 + d) / (2.0 * a)))
            cand = (value(c1, c2), c1, c2)
            best = min(best, cand)
    return const + best[0], best[1], best[2]


def stack_from_arrays(rhos, thetas, centers) -> SkyrmionStack:
    """Build a reduced-form stack from coordinate arrays."""
    return SkyrmionStack(
        SkyrmionLayerParams(float(rho), float(th), (float(c[0]), float(c[1])))
        for rho, th, c in zip(rhos, thetas, centers)
    )


def energy_gradient_fd(
    stack: SkyrmionStack,
    p: RescaledParams,
    step: float = 1e-6,
    quad: QuadratureSpec = DEFAULT_QUAD,
):
    """Central-difference gradient of the reduced energy.

    Partial derivatives with respect to (rho_n, theta_n, x_n, y_n) for every
    layer, in that per-layer order.  ``step`` is relative for rho (scaled by
    the radius) and absolute for angles and centers.  Returns (gradient,
    meta) where meta flags steps too small for double precision.
    """
    n = len(stack.layers)
    grad = np.empty(4 * n)
    meta = {"step": step, "warnings": []}
    if step < 3e-8:
        # roundoff eps*|F|/h overtakes the h^2 truncation term around here
        meta["warnings"].append(
            f"step {step} is below the double-precision floor for central "
            "differences; expect noise-dominated partials"
        )

    def at(vec):
        return energy_reduced(
            stack_from_arrays(vec[0::4], vec[1::4], list(zip(vec[2::4], vec[3::4]))),
            p,
            quad,
        ).total

    x0 = np.empty(4 * n)
    for i, la in enumerate(stack.layers):
        x0[4 * i : 4 * i + 4] = (la.rho, la.theta, la.center[0], la.center[1])
    for j in range(4 * n):
        h = step * x0[j] if j % 4 == 0 else step
        if abs(h) < 1e-12:
            meta["warnings"].append(
                f"coordinate {j}: step {h} too small for double precision"
            )
            h = 1e-12
        hi, lo = x0.copy(), x0.copy()
        hi[j] += h
        lo[j] -= h
        if j % 4 == 0 and not (0.0 < lo[j] and hi[j] < p.rho_max):
            raise InvalidInputError(
                "stack must be strictly interior to the admissible box for "
                "finite differences"
            )
        grad[j] = (at(hi) - at(lo)) / (2.0 * h)
    return grad, meta
