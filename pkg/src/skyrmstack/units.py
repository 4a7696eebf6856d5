"""Material parameters and their reduction to the model's dimensionless sets.

The pipeline is SI material constants -> dimensionless film parameters
(thickness delta, quality factors Q_*, DMI strengths kappa_*) -> the rescaled
parameters (delta_bar, h_bar, kappa_bar) that the reduced stack energy is
written in.  Lengths in the rescaled frame are measured in units of
ell_ex / sqrt(Q - 1); energies in units of A*d.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .errors import InvalidConfigError, InvalidInputError, UnsupportedRegimeError
from .specfun import EULER_GAMMA

MU_0 = 4.0e-7 * math.pi  # vacuum permeability, H/m

#: Convexity floor for the truncation parameter: L0 must exceed e^(2+gamma)/2
#: for the logarithmic radius term of the reduced energy to be strictly convex.
L0_BAR = 0.5 * math.exp(2.0 + EULER_GAMMA)

DEFAULT_L0 = 10.0


def _require(cond: bool, name: str, message: str):
    if not cond:
        raise InvalidInputError(f"{name}: {message}")


def _require_finite(value: float, name: str):
    if not math.isfinite(value):
        raise InvalidInputError(f"{name}: must be finite, got {value!r}")


@dataclass(frozen=True)
class MaterialParams:
    """Physical inputs in SI units for a stack of N identical layers."""

    exchange_stiffness: float  # A, J/m
    saturation_magnetization: float  # Ms, A/m
    bulk_anisotropy: float  # Ku, J/m^3
    layer_thickness: float  # d, m
    spacer_ratio: float = 2.0  # a: magnetic + spacer period is a*d, a > 1
    layer_count: int = 1  # N
    surface_anisotropy_top: float = 0.0  # Ks+, J/m^2
    surface_anisotropy_bottom: float = 0.0  # Ks-, J/m^2
    dmi_top: float = 0.0  # Ds+, J/m
    dmi_bottom: float = 0.0  # Ds-, J/m
    applied_field: float = 0.0  # Ha, A/m, signed out-of-plane component

    def __post_init__(self):
        for name in (
            "exchange_stiffness",
            "saturation_magnetization",
            "bulk_anisotropy",
            "layer_thickness",
            "spacer_ratio",
            "surface_anisotropy_top",
            "surface_anisotropy_bottom",
            "dmi_top",
            "dmi_bottom",
            "applied_field",
        ):
            _require_finite(float(getattr(self, name)), name)
        _require(self.exchange_stiffness > 0, "exchange_stiffness", "must be > 0")
        _require(self.saturation_magnetization > 0, "saturation_magnetization", "must be > 0")
        _require(self.bulk_anisotropy >= 0, "bulk_anisotropy", "must be >= 0")
        _require(self.layer_thickness > 0, "layer_thickness", "must be > 0")
        _require(self.spacer_ratio > 1, "spacer_ratio", "must be > 1")
        _require(self.surface_anisotropy_top >= 0, "surface_anisotropy_top", "must be >= 0")
        _require(self.surface_anisotropy_bottom >= 0, "surface_anisotropy_bottom", "must be >= 0")
        _require(
            isinstance(self.layer_count, int) and self.layer_count >= 1,
            "layer_count",
            "must be a positive integer",
        )


@dataclass(frozen=True)
class DimensionlessParams:
    """Dimensionless film parameters derived from :class:`MaterialParams`."""

    delta: float  # layer thickness in exchange lengths
    Qu: float  # bulk anisotropy quality factor
    Qs_plus: float  # top-surface anisotropy quality factor
    Qs_minus: float  # bottom-surface anisotropy quality factor
    kappa_plus: float  # top-surface DMI strength
    kappa_minus: float  # bottom-surface DMI strength
    Q: float  # total quality factor, Qu + Qs+ + Qs-
    kappa: float  # net DMI, kappa+ - kappa-
    h: float  # reduced applied field, Ha / Ms
    exchange_length: float  # sqrt(A / Kd), meters (for reporting)
    Kd: float  # stray-field energy scale mu0 Ms^2 / 2, J/m^3

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RescaledParams:
    """Parameters of the reduced stack energy after the sqrt(Q-1) rescaling."""

    delta_bar: float
    h_bar: float = 0.0
    kappa_bar: float = 0.0
    L0: float = DEFAULT_L0  # truncation floor; admissible radii lie in (0, 1/L0)
    length_rescale: float | None = field(default=None, compare=False)
    # 1/sqrt(Q-1): multiply by exchange_length to convert rescaled lengths to m

    def __post_init__(self):
        _require_finite(self.delta_bar, "delta_bar")
        # delta_bar = 0 is admitted as a degenerate limit (pure
        # exchange/anisotropy stacks in collapse studies)
        _require(self.delta_bar >= 0, "delta_bar", "must be >= 0")
        if not self.L0 > L0_BAR:
            raise InvalidConfigError(
                f"L0 must exceed e^(2+gamma)/2 = {L0_BAR:.6f} "
                f"(got {self.L0}); smaller values lose convexity of the "
                "radius term"
            )

    @property
    def rho_max(self) -> float:
        """Upper end of the admissible radius interval (0, 1/L0)."""
        return 1.0 / self.L0

    def to_dict(self) -> dict:
        return asdict(self)


def derive_dimensionless(m: MaterialParams) -> DimensionlessParams:
    """Convert SI material parameters to the dimensionless film parameters."""
    Kd = 0.5 * MU_0 * m.saturation_magnetization**2
    exchange_length = math.sqrt(m.exchange_stiffness / Kd)
    d = m.layer_thickness
    Qu = m.bulk_anisotropy / Kd
    Qs_plus = m.surface_anisotropy_top / (d * Kd)
    Qs_minus = m.surface_anisotropy_bottom / (d * Kd)
    dmi_scale = d * math.sqrt(m.exchange_stiffness * Kd)
    kappa_plus = m.dmi_top / dmi_scale
    kappa_minus = m.dmi_bottom / dmi_scale
    return DimensionlessParams(
        delta=d / exchange_length,
        Qu=Qu,
        Qs_plus=Qs_plus,
        Qs_minus=Qs_minus,
        kappa_plus=kappa_plus,
        kappa_minus=kappa_minus,
        Q=Qu + Qs_plus + Qs_minus,
        kappa=kappa_plus - kappa_minus,
        h=m.applied_field / m.saturation_magnetization,
        exchange_length=exchange_length,
        Kd=Kd,
    )


def rescale(p: DimensionlessParams, L0: float = DEFAULT_L0) -> RescaledParams:
    """Rescale the dimensionless parameters into the reduced-energy frame.

    Requires Q > 1 (perpendicular easy axis wins over shape anisotropy);
    outside that regime the reduced model does not apply.
    """
    if not p.Q > 1.0:
        raise UnsupportedRegimeError(
            f"reduced model requires quality factor Q > 1, got Q = {p.Q}"
        )
    root = math.sqrt(p.Q - 1.0)
    return RescaledParams(
        delta_bar=p.delta / root,
        h_bar=p.h / (p.Q - 1.0),
        kappa_bar=p.kappa / root,
        L0=L0,
        length_rescale=1.0 / root,
    )


def physical_length(rescaled_length: float, p: DimensionlessParams) -> float:
    """Convert a length in rescaled units back to meters."""
    if not p.Q > 1.0:
        raise UnsupportedRegimeError("physical_length requires Q > 1")
    return rescaled_length * p.exchange_length / math.sqrt(p.Q - 1.0)
