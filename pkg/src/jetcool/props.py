"""Material property catalog and dimensionless-number helpers.

Properties are constant (temperature independent). The built-in catalog is
loaded from ``data/fluids.csv`` / ``data/solids.csv`` which use the same CSV
schema accepted for user catalogs:

    name,density_kg_m3,viscosity_kg_ms,cp_J_kgK,k_W_mK,ref_temp_C
    name,k_W_mK
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import InvalidInputError

#: Prandtl number used when the predictive correlations were fitted
#: (representative DI-water value). The catalog water entry evaluates to
#: Pr = 9.09 instead; both are exposed, neither is substituted for the other.
PR_PAPER = 7.56


def _require_finite(**values: float) -> None:
    for name, val in values.items():
        if not math.isfinite(val):
            raise InvalidInputError(f"{name} must be finite, got {val!r}")


@dataclass(frozen=True)
class FluidProps:
    """Constant-property liquid coolant.

    density kg/m3, viscosity kg/(m.s), specific_heat J/(kg.K),
    conductivity W/(m.K), reference_temp degC.
    """

    name: str
    density: float
    viscosity: float
    specific_heat: float
    conductivity: float
    reference_temp: float

    def __post_init__(self) -> None:
        for field in ("density", "viscosity", "specific_heat",
                      "conductivity", "reference_temp"):
            val = getattr(self, field)
            _require_finite(**{field: val})
            if val <= 0:
                raise InvalidInputError(
                    f"fluid {self.name!r}: {field} must be > 0, got {val}")


@dataclass(frozen=True)
class SolidProps:
    """Isotropic solid with scalar conductivity W/(m.K)."""

    name: str
    conductivity: float

    def __post_init__(self) -> None:
        _require_finite(conductivity=self.conductivity)
        if self.conductivity <= 0:
            raise InvalidInputError(
                f"solid {self.name!r}: conductivity must be > 0")


def reynolds(fluid: FluidProps, d: float, v: float) -> float:
    """Nozzle Reynolds number rho*d*V/mu for diameter d [m], velocity v [m/s]."""
    _require_finite(d=d, v=v)
    if d <= 0:
        raise InvalidInputError(f"diameter must be > 0, got {d}")
    if v < 0:
        raise InvalidInputError(f"velocity must be >= 0, got {v}")
    return fluid.density * d * v / fluid.viscosity


def prandtl(fluid: FluidProps) -> float:
    """Prandtl number mu*Cp/k of the coolant."""
    return fluid.viscosity * fluid.specific_heat / fluid.conductivity


def biot(nu_f: float, t_c: float, d_i: float, k_f: float, k_s: float) -> float:
    """Conduction/convection Biot number Nu_f * (t_c/d_i) * (k_f/k_s).

    t_c is the chip thickness [m], d_i the nozzle diameter [m]; zero t_c or
    zero Nu_f give Bi = 0 (no conduction penalty).
    """
    _require_finite(nu_f=nu_f, t_c=t_c, d_i=d_i, k_f=k_f, k_s=k_s)
    if d_i <= 0:
        raise InvalidInputError(f"d_i must be > 0, got {d_i}")
    if k_s <= 0:
        raise InvalidInputError(f"k_s must be > 0, got {k_s}")
    if nu_f < 0 or t_c < 0:
        raise InvalidInputError("nu_f and t_c must be >= 0")
    return nu_f * (t_c / d_i) * (k_f / k_s)


# ---------------------------------------------------------------------------
# catalog loading

_FLUID_HEADER = ["name", "density_kg_m3", "viscosity_kg_ms", "cp_J_kgK",
                 "k_W_mK", "ref_temp_C"]
_SOLID_HEADER = ["name", "k_W_mK"]


def load_fluids(path: str | Path) -> dict[str, FluidProps]:
    """Load a fluid catalog CSV (schema in the module docstring)."""
    with open(path, newline="") as fh:
        return _parse_fluids(fh)


def _parse_fluids(fh) -> dict[str, FluidProps]:
    reader = csv.DictReader(fh)
    missing = set(_FLUID_HEADER) - set(reader.fieldnames or [])
    if missing:
        raise InvalidInputError(f"fluid catalog missing columns: {sorted(missing)}")
    out: dict[str, FluidProps] = {}
    for row in reader:
        out[row["name"]] = FluidProps(
            name=row["name"],
            density=float(row["density_kg_m3"]),
            viscosity=float(row["viscosity_kg_ms"]),
            specific_heat=float(row["cp_J_kgK"]),
            conductivity=float(row["k_W_mK"]),
            reference_temp=float(row["ref_temp_C"]),
        )
    return out


def load_solids(path: str | Path) -> dict[str, SolidProps]:
    """Load a solid catalog CSV with header ``name,k_W_mK``."""
    with open(path, newline="") as fh:
        return _parse_solids(fh)


def _parse_solids(fh) -> dict[str, SolidProps]:
    reader = csv.DictReader(fh)
    missing = set(_SOLID_HEADER) - set(reader.fieldnames or [])
    if missing:
        raise InvalidInputError(f"solid catalog missing columns: {sorted(missing)}")
    return {row["name"]: SolidProps(row["name"], float(row["k_W_mK"]))
            for row in reader}


def _builtin(name: str):
    return resources.files("jetcool").joinpath("data", name)


def builtin_fluids() -> dict[str, FluidProps]:
    """Built-in coolant catalog (CFD water plus the literature coolant survey)."""
    with _builtin("fluids.csv").open(newline="") as fh:
        return _parse_fluids(fh)


def builtin_solids() -> dict[str, SolidProps]:
    with _builtin("solids.csv").open(newline="") as fh:
        return _parse_solids(fh)


#: Default coolant: DI water at 10 degC as used for every thermal test.
def water() -> FluidProps:
    return builtin_fluids()["water"]


def silicon() -> SolidProps:
    return builtin_solids()["silicon"]
