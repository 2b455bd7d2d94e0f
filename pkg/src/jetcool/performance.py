"""Design-point evaluation: geometry + coolant + operating point -> report.

Chains the dimensionless predictors into engineering outputs (htc, thermal
resistance, pressure drop, pumping power, COP), decomposes the cell pressure
drop, models lidded-package series resistance, reduces multi-chip coupling
measurements and compares coolants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from . import correlations as corr
from . import props as pr
from .errors import (InvalidGeometryError, InvalidInputError, NoFlowError,
                     NonMeaningfulResistanceError)
from .geometry import CM2_PER_M2, CoolerArray, UnitCell, normalize, per_nozzle_flow

#: Default maximum allowed chip temperature increase for COP [K].
DT_MAX_ALLOW_DEFAULT = 60.0


@dataclass(frozen=True)
class OperatingPoint:
    flow_total: float          # m3/s
    inlet_temp: float = 10.0   # degC
    chip_power: float = 0.0    # W
    ambient_temp: float = 25.0  # degC

    def __post_init__(self) -> None:
        if self.flow_total < 0 or not math.isfinite(self.flow_total):
            raise InvalidInputError(f"flow_total must be >= 0, got {self.flow_total}")
        if self.chip_power < 0:
            raise InvalidInputError(f"chip_power must be >= 0, got {self.chip_power}")


@dataclass(frozen=True)
class PerformanceReport:
    re: float
    pr: float
    nu_f: float
    bi: float
    nu_j: float
    htc: float          # W/(m2.K)
    r_th: float         # K/W
    r_star: float       # K.cm2/W
    dT_avg: float       # K
    dp: float           # Pa
    w_p: float          # W
    cop: float
    v_nozzle: float     # mean nozzle velocity m/s
    flow_per_nozzle: float  # m3/s
    warnings: tuple[str, ...] = ()


def evaluate_design(array: CoolerArray, fluid: pr.FluidProps,
                    solid: pr.SolidProps, op: OperatingPoint,
                    dt_max_allow: float = DT_MAX_ALLOW_DEFAULT) -> PerformanceReport:
    """Full performance chain for one design point.

    Nozzle velocity -> Re -> Nu_f -> Biot-corrected Nu_j -> htc -> R_th, and
    pressure coefficient k -> dp = k * (1/2) rho V^2 -> W_p = V_dot * dp,
    COP = (dt_max_allow / R_th) / W_p. Validity warnings from the fitted
    correlations are carried through in the report.
    """
    if op.flow_total == 0:
        raise NoFlowError("flow_total is zero")
    cell = array.cell
    flow_pn = per_nozzle_flow(op.flow_total, array.n)
    v_bar = flow_pn / cell.nozzle_area
    re = pr.reynolds(fluid, cell.d_i, v_bar)
    inputs = corr.PredictiveInputs(di_over_L=cell.di_over_L,
                                   do_over_L=cell.do_over_L,
                                   H_over_L=cell.H_over_L,
                                   t_over_L=cell.t_over_L, re=re)
    nu_f, nu_warns = corr.nu_f_predict(inputs)
    bi = pr.biot(nu_f, cell.t_c, cell.d_i, fluid.conductivity,
                 solid.conductivity)
    nu_j = corr.biot_correct(nu_f, bi)
    htc = corr.nu_to_htc(nu_j, cell.d_i, fluid.conductivity)
    r_th = 1.0 / (htc * array.heated_area)
    friction = corr.friction_predict(inputs)
    dp = friction.k * 0.5 * fluid.density * v_bar ** 2
    w_p = op.flow_total * dp
    r_star, _, _ = normalize(r_th, w_p, op.flow_total, array.area)
    warns = tuple(dict.fromkeys(tuple(nu_warns) + tuple(friction.warnings)))
    return PerformanceReport(
        re=re, pr=pr.prandtl(fluid), nu_f=nu_f, bi=bi, nu_j=nu_j, htc=htc,
        r_th=r_th, r_star=r_star, dT_avg=op.chip_power * r_th, dp=dp, w_p=w_p,
        cop=(dt_max_allow / r_th) / w_p, v_nozzle=v_bar, flow_per_nozzle=flow_pn,
        warnings=warns)


# ---------------------------------------------------------------------------
# pressure decomposition

@dataclass(frozen=True)
class PressureBreakdown:
    """First-order split of the unit-cell pressure drop [Pa].

    The sum of the components is a first-order estimate, not asserted equal
    to the measured/correlated total; the jet turning/expansion share is not
    modeled and reported as zero with a flag.
    """

    dp_in_nozzle: float
    dp_out_nozzle: float
    dp_channel: float
    dp_jet_residual: float
    warnings: tuple[str, ...] = ("jet_residual_unmodeled",)

    @property
    def total_modeled(self) -> float:
        return (self.dp_in_nozzle + self.dp_out_nozzle + self.dp_channel
                + self.dp_jet_residual)


def pressure_decomposition(cell: UnitCell, fluid: pr.FluidProps,
                           v_nozzle: float) -> PressureBreakdown:
    """Hagen-Poiseuille nozzle losses plus a slab model of the cavity channel.

    v_nozzle is the volumetric flow per nozzle [m3/s]. The channel term uses
    a plane-Poiseuille slab of length (L - d_i)/2, width L and gap H:
    dp = 12 mu v (L - d_i) / (2 L H^3), realizing the ~L*V/H^4 cavity scaling
    per unit width with a standard laminar constant (first order only).
    """
    if v_nozzle < 0 or not math.isfinite(v_nozzle):
        raise InvalidInputError(f"v_nozzle must be >= 0, got {v_nozzle}")
    if cell.d_i <= 0 or cell.d_o <= 0:
        raise InvalidGeometryError("nozzle diameters must be > 0")
    mu = fluid.viscosity

    def hagen_poiseuille(d: float) -> float:
        return 8.0 * mu * cell.t * v_nozzle / (math.pi * (d / 2.0) ** 4)

    dp_channel = (12.0 * mu * v_nozzle * (cell.L - cell.d_i)
                  / (2.0 * cell.L * cell.H ** 3))
    return PressureBreakdown(dp_in_nozzle=hagen_poiseuille(cell.d_i),
                             dp_out_nozzle=hagen_poiseuille(cell.d_o),
                             dp_channel=dp_channel, dp_jet_residual=0.0)


# ---------------------------------------------------------------------------
# lidded packages

def lidded_series(r_star: float, tim_resistivity: float,
                  lid_resistivity: float) -> float:
    """1D series stack [K.cm2/W]: cooler + TIM + lid, no spreading."""
    for name, val in (("r_star", r_star), ("tim_resistivity", tim_resistivity),
                      ("lid_resistivity", lid_resistivity)):
        if val < 0 or not math.isfinite(val):
            raise InvalidInputError(f"{name} must be >= 0, got {val}")
    return r_star + tim_resistivity + lid_resistivity


def slab_resistivity(thickness: float, conductivity: float) -> float:
    """Area-normalized 1D slab resistance thickness/k, in K.cm2/W."""
    if thickness < 0 or conductivity <= 0:
        raise InvalidInputError("thickness >= 0 and conductivity > 0 required")
    return thickness / conductivity * CM2_PER_M2


# ---------------------------------------------------------------------------
# multi-chip coupling

@dataclass(frozen=True)
class CouplingMeasurement:
    """One single-source excitation: exactly one chip powered."""

    active_chip: str
    powers: Mapping[str, float]     # W per chip
    temps: Mapping[str, float]      # degC average per chip
    t_in: float                     # degC coolant inlet

    def __post_init__(self) -> None:
        active = [c for c, p in self.powers.items() if p != 0.0]
        if len(active) != 1:
            raise NonMeaningfulResistanceError(
                "thermal resistance requires exactly one powered chip, "
                f"got {len(active)} nonzero powers")
        if active[0] != self.active_chip:
            raise InvalidInputError(
                f"active_chip {self.active_chip!r} does not match the nonzero "
                f"power on {active[0]!r}")


class CouplingMatrix(NamedTuple):
    r: np.ndarray                   # K/W, r[i][j] = (T_i - T_in)/P_j
    labels: tuple[str, ...]
    coupling_ratio: dict[tuple[str, str], float]


def coupling(measurements: Sequence[CouplingMeasurement]) -> CouplingMatrix:
    """Thermal resistance matrix from single-source measurements.

    R_ij = (T_i - T_in)/P_j from the measurement powering chip j only;
    coupling_ratio[(passive, active)] = (T_passive - T_in)/(T_active - T_in).
    One measurement per chip is required.
    """
    if not measurements:
        raise InvalidInputError("no measurements")
    labels = tuple(sorted({c for m in measurements for c in m.temps}))
    seen: dict[str, CouplingMeasurement] = {}
    for m in measurements:
        if m.active_chip in seen:
            raise InvalidInputError(f"duplicate measurement for {m.active_chip!r}")
        seen[m.active_chip] = m
    missing = set(labels) - set(seen)
    if missing:
        raise InvalidInputError(f"no measurement powering chip(s): {sorted(missing)}")
    n = len(labels)
    r = np.zeros((n, n))
    ratios: dict[tuple[str, str], float] = {}
    for j, active in enumerate(labels):
        m = seen[active]
        p = m.powers[active]
        dt_active = m.temps[active] - m.t_in
        for i, chip in enumerate(labels):
            r[i, j] = (m.temps[chip] - m.t_in) / p
            if chip != active:
                ratios[(chip, active)] = (m.temps[chip] - m.t_in) / dt_active
    return CouplingMatrix(r=r, labels=labels, coupling_ratio=ratios)


# ---------------------------------------------------------------------------
# coolant comparison

class CoolantRating(NamedTuple):
    fluid: str
    relative_htc: float
    flow: float                     # m3/s actually used
    warnings: tuple[str, ...] = ()


def _htc_with_pr(array: CoolerArray, fluid: pr.FluidProps,
                 flow_total: float) -> tuple[float, tuple[str, ...]]:
    """Predicted htc with a Pr^(1/3) factor on the fixed-Pr correlation.

    The fitted Nu model holds at one Prandtl number; the multiplicative
    Pr^(1/3) follows the survey correlations and is a flagged approximation.
    """
    cell = array.cell
    v_bar = per_nozzle_flow(flow_total, array.n) / cell.nozzle_area
    re = pr.reynolds(fluid, cell.d_i, v_bar)
    inputs = corr.PredictiveInputs(cell.di_over_L, cell.do_over_L,
                                   cell.H_over_L, cell.t_over_L, re)
    nu_f, warns = corr.nu_f_predict(inputs)
    htc = corr.nu_to_htc(nu_f * pr.prandtl(fluid) ** (1.0 / 3.0),
                         cell.d_i, fluid.conductivity)
    return htc, warns


def _dp_of_flow(array: CoolerArray, fluid: pr.FluidProps, flow: float) -> float:
    cell = array.cell
    v_bar = per_nozzle_flow(flow, array.n) / cell.nozzle_area
    re = pr.reynolds(fluid, cell.d_i, v_bar)
    inputs = corr.PredictiveInputs(cell.di_over_L, cell.do_over_L,
                                   cell.H_over_L, cell.t_over_L, re)
    return corr.friction_predict(inputs).k * 0.5 * fluid.density * v_bar ** 2


def coolant_compare(coolants: Sequence[pr.FluidProps], reference: pr.FluidProps,
                    array: CoolerArray, op: OperatingPoint,
                    mode: str = "const_flow") -> list[CoolantRating]:
    """Relative heat transfer of each coolant against the reference.

    const_flow evaluates everything at op.flow_total; const_pump first solves
    each coolant's flow so that V*dp(V) matches the reference pumping power
    (bisection; dp is strictly increasing in V).
    """
    if mode not in ("const_flow", "const_pump"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    if op.flow_total <= 0:
        raise NoFlowError("flow_total must be > 0")
    htc_ref, _ = _htc_with_pr(array, reference, op.flow_total)
    w_ref = op.flow_total * _dp_of_flow(array, reference, op.flow_total)
    out = []
    for coolant in coolants:
        if mode == "const_flow":
            flow = op.flow_total
        else:
            flow = _solve_flow_for_pump(array, coolant, w_ref,
                                        guess=op.flow_total)
        htc, warns = _htc_with_pr(array, coolant, flow)
        out.append(CoolantRating(coolant.name, htc / htc_ref, flow, warns))
    return out


def _solve_flow_for_pump(array: CoolerArray, fluid: pr.FluidProps,
                         w_target: float, guess: float) -> float:
    from .roots import bisect_monotone
    return bisect_monotone(
        lambda v: v * _dp_of_flow(array, fluid, v), w_target, guess,
        what=f"pump power for {fluid.name}")
