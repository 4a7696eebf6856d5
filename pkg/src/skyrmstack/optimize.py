"""Minimization of the stack energy and the bilayer landscape machinery.

Three layers of machinery share this module:

* ``minimize_fixed_positions``: deterministic multi-start bounded
  Nelder-Mead over radii and rotation angles with the skyrmion centers held
  fixed.  Starts cover Neel/Bloch/antiparallel angle patterns and two radius
  scales; the best screened starts are polished to convergence and checked
  for criticality with finite differences.
* ``bilayer_radius`` / ``bilayer_global``: the closed-form equilibrium
  radius of the concentric antiparallel Neel pair through the W_{-1} branch
  of the Lambert function, optionally verified against an unconstrained
  six-parameter numeric minimization (radii, angles and relative center).
* ``separation_scan`` / ``landscape_grid``: the equal-radius bilayer energy
  as a function of radius and center separation.  The scan minimizes over
  the radius per separation, tracking both basins of the landscape (the
  wide small-separation valley and the narrow small-radius gorge) so the
  reported optimum is a genuine global comparison rather than hysteresis.

Everything is deterministic: fixed start grids, fixed refinement rules, no
stochastic search.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize as sp_opt

from .energy import (
    SkyrmionLayerParams,
    SkyrmionStack,
    bilayer_F,
    bilayer_F2sym,
    energy_gradient_fd,
    energy_reduced,
    stack_from_arrays,
    wrap_angle,
)
from .errors import (
    ConvergenceError,
    NumericError,
    UnsupportedRegimeError,
)
from .shapefun import DEFAULT_QUAD, FAST_QUAD, QuadratureSpec
from .specfun import EULER_GAMMA, lambert_w_m1
from .units import RescaledParams

RHO_FLOOR = 1e-6  # closed-box stand-in for the open admissible interval
BOX_MARGIN = 1e-6  # keep the ceiling strictly inside 1/L0
BOUNDARY_TOL = 1e-4  # radii this close to the box edges get flagged
GRAD_TOL = 1e-4  # scaled criticality threshold for convergence
SMALLNESS_GUARD = 0.5  # warn when delta_bar or |kappa_bar| exceed this

_PI = math.pi


@dataclass(frozen=True)
class MinimizeResult:
    """Outcome of a stack-energy minimization (reduced form, no L)."""

    stack: SkyrmionStack
    energy: float
    converged: bool
    iterations: int
    boundary_flags: tuple  # per layer: None, "collapse" or "burst"
    grad_norm: float  # scaled finite-difference criticality measure
    diagnostics: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class ScanRow:
    """One separation in a bilayer scan."""

    r: float
    energy: float
    rho_opt: float
    c1_opt: float
    c2_opt: float


@dataclass(frozen=True)
class LandscapeGrid:
    """Tabulated equal-radius bilayer energy over (rho, r)."""

    rho_values: np.ndarray
    r_values: np.ndarray
    energy: np.ndarray  # shape (len(rho_values), len(r_values))
    neglog_energy: np.ndarray  # -ln(-F) where F < 0, NaN elsewhere
    delta_bar: float
    L0: float


def _rho_box(p: RescaledParams) -> tuple[float, float]:
    return RHO_FLOOR, p.rho_max - BOX_MARGIN


def _boundary_flags(rhos, lo, hi):
    flags = []
    for rho in rhos:
        if rho - lo <= BOUNDARY_TOL:
            flags.append("collapse")
        elif hi - rho <= BOUNDARY_TOL:
            flags.append("burst")
        else:
            flags.append(None)
    return tuple(flags)


def _guard_params(p: RescaledParams, *, need_zero_kappa: bool):
    if p.h_bar != 0.0:
        raise UnsupportedRegimeError(
            "minimization is only supported at h_bar = 0 (bursting regime "
            "is out of scope)"
        )
    if need_zero_kappa and p.kappa_bar != 0.0:
        raise UnsupportedRegimeError("bilayer landscape requires kappa_bar = 0")
    if max(p.delta_bar, abs(p.kappa_bar)) > SMALLNESS_GUARD:
        warnings.warn(
            f"delta_bar = {p.delta_bar}, kappa_bar = {p.kappa_bar}: beyond "
            f"the smallness guard {SMALLNESS_GUARD}; the reduced model is "
            "asymptotic in these parameters",
            stacklevel=3,
        )


def _theta_patterns(n: int):
    pats = [[t] * n for t in (0.0, 0.5 * _PI, -_PI)]
    pats.append([0.0 if i % 2 == 0 else -_PI for i in range(n)])
    pats.append([0.5 * _PI if i % 2 == 0 else -0.5 * _PI for i in range(n)])
    return pats


def _decoupled_layer_optimum(p: RescaledParams, lo: float, hi: float):
    """Single-layer optimum (rho, theta) ignoring all pair terms.

    The per-layer angle dependence is a quadratic in cos(theta); the radius
    then follows from a bounded scalar minimization of the remaining
    per-layer energy (no quadrature involved).
    """
    if p.delta_bar > 0.0:
        c = min(1.0, max(-1.0, 32.0 * p.kappa_bar / (3.0 * _PI**2 * p.delta_bar)))
    else:
        c = math.copysign(1.0, p.kappa_bar) if p.kappa_bar else 0.0
    theta = math.acos(c)
    e12g = math.exp(1.0 + 2.0 * EULER_GAMMA)
    lin = (
        -8.0 * _PI * p.kappa_bar * c
        + p.delta_bar * (_PI**3 / 8.0) * (3.0 * c * c - 1.0)
    )

    def layer_energy(rho):
        return -4.0 * _PI * rho * rho * math.log(e12g * rho * rho / 4.0) + lin * rho

    res = sp_opt.minimize_scalar(
        layer_energy, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
    )
    return float(res.x), theta


def _nm(fun, x0, bounds, maxfev, xatol=1e-8, fatol=1e-13):
    return sp_opt.minimize(
        fun,
        x0,
        method="Nelder-Mead",
        bounds=sp_opt.Bounds(*map(np.asarray, zip(*bounds))),
        options={
            "maxfev": maxfev,
            "xatol": xatol,
            "fatol": fatol,
            "adaptive": True,
        },
    )


def minimize_fixed_positions(
    centers,
    p: RescaledParams,
    quad: QuadratureSpec = FAST_QUAD,
    screen_evals: int = 80,
    polish_evals: int = 600,
) -> MinimizeResult:
    """Minimize the reduced energy over all radii and angles, centers fixed.

    Multi-start (10 starts: five angle patterns at two radius scales), with
    every start screened briefly and the two best polished to convergence.
    Radii move in the closed box [RHO_FLOOR, 1/L0 - BOX_MARGIN]; ending on
    the box is reported through ``boundary_flags`` (collapse or bursting),
    never as convergence.
    """
    _guard_params(p, need_zero_kappa=False)
    centers = [(float(c[0]), float(c[1])) for c in centers]
    n = len(centers)
    lo, hi = _rho_box(p)
    numeric_failures = [0]

    def objective(x):
        try:
            return energy_reduced(
                stack_from_arrays(x[:n] * p.rho_max, x[n:], centers), p, quad
            ).total
        except NumericError:
            numeric_failures[0] += 1
            return 1e9

    bounds = [(lo / p.rho_max, hi / p.rho_max)] * n + [(-2.0 * _PI, 2.0 * _PI)] * n
    rho_dec, theta_dec = _decoupled_layer_optimum(p, lo, hi)
    starts = [np.array([rho_dec / p.rho_max] * n + [theta_dec] * n)]
    starts += [
        np.array([rho_frac] * n + pat)
        for rho_frac in (0.3, 0.7)
        for pat in _theta_patterns(n)
    ]

    screened = []
    nfev = 0
    for x0 in starts:
        res = _nm(objective, x0, bounds, screen_evals)
        nfev += res.nfev
        screened.append(res)
    screened.sort(key=lambda r: r.fun)

    polished = []
    for res in screened[:2]:
        out = _nm(objective, res.x, bounds, polish_evals)
        nfev += out.nfev
        polished.append(out)
    best = min(polished, key=lambda r: r.fun)
    # one fresh-simplex restart of the winner guards against premature
    # NM shrinkage
    out = _nm(objective, best.x, bounds, polish_evals)
    nfev += out.nfev
    if out.fun < best.fun:
        best = out

    if not np.isfinite(best.fun) or best.fun >= 1e9:
        raise ConvergenceError(
            "all starts failed",
            starts=[{"x0": list(s.x), "fun": s.fun, "msg": s.message} for s in screened],
            numeric_failures=numeric_failures[0],
        )

    rhos = best.x[:n] * p.rho_max
    thetas = [wrap_angle(t) for t in best.x[n:]]
    stack = stack_from_arrays(rhos, thetas, centers)
    flags = _boundary_flags(rhos, lo, hi)
    energy = energy_reduced(stack, p, DEFAULT_QUAD).total

    interior = all(f is None for f in flags)
    grad_norm = math.inf
    if interior:
        grad, _ = energy_gradient_fd(stack, p, 1e-6, DEFAULT_QUAD)
        scale = max(abs(energy), 1e-2)
        comps = [
            max(abs(grad[4 * i]) * p.rho_max, abs(grad[4 * i + 1])) / scale
            for i in range(n)
        ]
        grad_norm = max(comps)
    converged = interior and grad_norm < GRAD_TOL

    return MinimizeResult(
        stack=stack,
        energy=energy,
        converged=converged,
        iterations=nfev,
        boundary_flags=flags,
        grad_norm=grad_norm,
        diagnostics={
            "numeric_failures": numeric_failures[0],
            "screened_values": [r.fun for r in screened],
        },
    )


# ---------------------------------------------------------------------------
# bilayer: closed form and verification

_RADIUS_COEF = (16.0 + _PI**2) / 128.0


def bilayer_critical_delta_bar() -> float:
    """Largest delta_bar for which the closed-form radius is real."""
    return 1.0 / (_RADIUS_COEF * math.exp(2.0 + EULER_GAMMA))


def bilayer_radius(delta_bar: float) -> float:
    """Equilibrium radius of the concentric antiparallel Neel pair.

    rho = (16 + pi^2) delta_bar / (-64 W_{-1}(-(16+pi^2)/128 e^(1+gamma)
    delta_bar)).
    """
    if not delta_bar > 0:
        raise UnsupportedRegimeError(f"delta_bar must be > 0, got {delta_bar}")
    arg = -_RADIUS_COEF * math.exp(1.0 + EULER_GAMMA) * delta_bar
    if arg < -math.exp(-1.0):
        raise UnsupportedRegimeError(
            f"delta_bar = {delta_bar} exceeds the branch limit "
            f"{bilayer_critical_delta_bar():.6f} of the W_-1 radius formula"
        )
    return (16.0 + _PI**2) * delta_bar / (-64.0 * lambert_w_m1(arg))


def _bilayer_numeric(p: RescaledParams, quad: QuadratureSpec):
    """Unconstrained 6-parameter bilayer minimization.

    Variables: both radii (fractions of 1/L0), both angles, and the second
    center relative to the first (fixed at the origin; the energy only sees
    the difference).
    """
    lo, hi = _rho_box(p)

    def objective(x):
        try:
            return energy_reduced(
                stack_from_arrays(
                    x[:2] * p.rho_max, x[2:4], [(0.0, 0.0), (x[4], x[5])]
                ),
                p,
                quad,
            ).total
        except NumericError:
            return 1e9

    bounds = [(lo / p.rho_max, hi / p.rho_max)] * 2 + [(-2 * _PI, 2 * _PI)] * 2 + [
        (-0.5, 0.5)
    ] * 2
    starts = []
    for th in ((0.0, -_PI), (0.5 * _PI, -0.5 * _PI), (-_PI, 0.0), (0.25 * _PI, -2.0)):
        for rho_frac in (0.3, 0.7):
            for off in ((0.0, 0.0), (0.02, 0.01)):
                starts.append(np.array([rho_frac, rho_frac, *th, *off]))

    nfev = 0
    screened = []
    for x0 in starts:
        res = _nm(objective, x0, bounds, 120)
        nfev += res.nfev
        screened.append(res)
    screened.sort(key=lambda r: r.fun)
    best = None
    for res in screened[:2]:
        out = _nm(objective, res.x, bounds, 4000, xatol=1e-9, fatol=1e-14)
        nfev += out.nfev
        if best is None or out.fun < best.fun:
            best = out
    x = best.x
    return {
        "rho": (x[0] * p.rho_max, x[1] * p.rho_max),
        "theta": (wrap_angle(x[2]), wrap_angle(x[3])),
        "separation": math.hypot(x[4], x[5]),
        "energy": best.fun,
        "nfev": nfev,
    }


def _angle_dist(theta: float, target: float) -> float:
    return abs(wrap_angle(theta - target))


def bilayer_global(
    p: RescaledParams,
    verify_numeric: bool = True,
    quad: QuadratureSpec = FAST_QUAD,
) -> MinimizeResult:
    """Global bilayer minimizer: concentric antiparallel Neel pair.

    Returns the closed-form minimizer (coincident centers, theta = (0, -pi),
    equal radii from :func:`bilayer_radius`).  With ``verify_numeric`` the
    unconstrained six-parameter minimization must reproduce it to 1e-5 in
    radius and energy and 1e-3 in angles and separation, else a
    :class:`NumericError` is raised.
    """
    _guard_params(p, need_zero_kappa=True)
    rho = bilayer_radius(p.delta_bar)
    if not rho < _rho_box(p)[1]:
        raise UnsupportedRegimeError(
            f"equilibrium radius {rho:.4f} is not admissible for L0 = {p.L0}"
        )
    energy = 2.0 * bilayer_F(rho, p)
    stack = SkyrmionStack(
        [
            SkyrmionLayerParams(rho, 0.0, (0.0, 0.0)),
            SkyrmionLayerParams(rho, -_PI, (0.0, 0.0)),
        ]
    )
    grad, _ = energy_gradient_fd(stack, p, 1e-6, DEFAULT_QUAD)
    scale = max(abs(energy), 1e-2)
    grad_norm = max(
        max(abs(grad[4 * i]) * p.rho_max, abs(grad[4 * i + 1])) / scale
        for i in range(2)
    )
    diagnostics = {}
    nfev = 0
    if verify_numeric:
        num = _bilayer_numeric(p, quad)
        nfev = num["nfev"]
        diagnostics["numeric"] = num
        checks = [
            ("rho_1", abs(num["rho"][0] - rho), 1e-5),
            ("rho_2", abs(num["rho"][1] - rho), 1e-5),
            ("energy", abs(num["energy"] - energy), 1e-5),
            ("theta_1", _angle_dist(num["theta"][0], 0.0), 1e-3),
            ("theta_2", _angle_dist(num["theta"][1], -_PI), 1e-3),
            ("separation", num["separation"], 1e-3),
        ]
        bad = [(name, err, tol) for name, err, tol in checks if not err <= tol]
        if bad:
            raise NumericError(
                "six-parameter numeric minimization disagrees with the "
                "closed-form bilayer minimizer",
                mismatches=bad,
                numeric=num,
            )
    return MinimizeResult(
        stack=stack,
        energy=energy,
        converged=True,
        iterations=nfev,
        boundary_flags=(None, None),
        grad_norm=grad_norm,
        diagnostics=diagnostics,
    )


# ---------------------------------------------------------------------------
# equal-radius landscape over (rho, r)


def _f2sym_on_grid(rhos: np.ndarray, r: float, p: RescaledParams) -> np.ndarray:
    return np.array([bilayer_F2sym(float(rho), r, p)[0] for rho in rhos])


def _refine_minimum(r: float, p: RescaledParams, lo: float, mid: float, hi: float):
    res = sp_opt.minimize_scalar(
        lambda rho: bilayer_F2sym(rho, r, p)[0],
        bracket=None,
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(res.x), float(res.fun)


def separation_scan(
    p: RescaledParams,
    r_grid,
    n_coarse: int = 240,
) -> list[ScanRow]:
    """Globally minimize the equal-radius bilayer energy over rho per r.

    For every separation the radius axis is scanned on a log grid dense
    enough to expose both basins; each local basin (plus the previous row's
    optimum, re-refined) is polished with bounded scalar minimization and
    the lowest wins.
    """
    _guard_params(p, need_zero_kappa=True)
    lo, hi = RHO_FLOOR * 10.0, p.rho_max * (1.0 - 1e-9)
    rhos = np.geomspace(lo, hi, n_coarse)
    rows = []
    prev_opt = None
    for r in [float(v) for v in r_grid]:
        if r < 0:
            raise UnsupportedRegimeError(f"separation must be >= 0, got {r}")
        energies = _f2sym_on_grid(rhos, r, p)
        interior = np.where(
            (energies[1:-1] <= energies[:-2]) & (energies[1:-1] <= energies[2:])
        )[0] + 1
        candidates = list(interior)
        for edge in (0, n_coarse - 1):
            if edge not in candidates:
                candidates.append(edge)
        best = None
        for idx in candidates:
            b_lo = rhos[max(idx - 1, 0)]
            b_hi = rhos[min(idx + 1, n_coarse - 1)]
            rho_opt, e_opt = _refine_minimum(r, p, b_lo, rhos[idx], b_hi)
            if best is None or e_opt < best[1]:
                best = (rho_opt, e_opt)
        if prev_opt is not None:
            rho_opt, e_opt = _refine_minimum(
                r, p, max(lo, 0.5 * prev_opt), prev_opt, min(hi, 2.0 * prev_opt)
            )
            if e_opt < best[1]:
                best = (rho_opt, e_opt)
        prev_opt = best[0]
        energy, c1, c2 = bilayer_F2sym(best[0], r, p)
        rows.append(ScanRow(r=r, energy=energy, rho_opt=best[0], c1_opt=c1, c2_opt=c2))
    return rows


def landscape_grid(p: RescaledParams, rho_grid, r_grid) -> LandscapeGrid:
    """Tabulate the equal-radius bilayer energy over a (rho, r) grid."""
    _guard_params(p, need_zero_kappa=True)
    rho_values = np.asarray(list(rho_grid), dtype=float)
    r_values = np.asarray(list(r_grid), dtype=float)
    energy = np.empty((len(rho_values), len(r_values)))
    for j, r in enumerate(r_values):
        energy[:, j] = _f2sym_on_grid(rho_values, float(r), p)
    with np.errstate(invalid="ignore"):
        neglog = np.where(energy < 0.0, -np.log(-energy), np.nan)
    return LandscapeGrid(
        rho_values=rho_values,
        r_values=r_values,
        energy=energy,
        neglog_energy=neglog,
        delta_bar=p.delta_bar,
        L0=p.L0,
    )
