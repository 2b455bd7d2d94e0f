"""Experimental data reduction, uncertainty propagation, grid convergence.

All temperatures are handled as increases relative to the power-off/inlet
reference, never as absolute readings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, NamedTuple

import numpy as np

from .errors import (InvalidInputError, NonMonotoneConvergenceError,
                     NonPhysicalReductionError)

#: diode sensitivity default [mV/degC] of the 32x32 sensor array
DIODE_SENSITIVITY_MV_C = -1.55
#: resistor temperature coefficient default [1/degC] at 25 degC reference
TCR_PER_C = 3553e-6
TCR_REF_TEMP_C = 25.0
#: three-grid-level safety factor for the convergence index
GCI_SAFETY_FACTOR = 1.25


class SensorModel(Enum):
    DIODE = "diode"
    TCR = "tcr"


@dataclass(frozen=True)
class SensorMap:
    """Grid of raw sensor readings plus the conversion model.

    diode: readings are voltages [V], sensitivity [V/degC].
    tcr: readings are resistances [Ohm], tcr [1/degC]; the reference map
    carries the per-cell R0 at the reference temperature.
    """

    readings: np.ndarray
    model: SensorModel
    sensitivity: float = DIODE_SENSITIVITY_MV_C * 1e-3
    tcr: float = TCR_PER_C
    ref_temp: float = TCR_REF_TEMP_C
    cell_pitch: float = 0.25e-3

    def __post_init__(self) -> None:
        object.__setattr__(self, "readings",
                           np.asarray(self.readings, dtype=float))
        if not np.all(np.isfinite(self.readings)):
            raise InvalidInputError("sensor readings must be finite")


def sensor_to_dT(sensor_map: SensorMap, reference_readings) -> np.ndarray:
    """Per-cell temperature increase [K] against the power-off reference.

    diode: dT = (V_on - V_off)/sigma; tcr: dT = (R - R0)/(R0 * TCR).
    """
    ref = np.asarray(reference_readings, dtype=float)
    if ref.shape != sensor_map.readings.shape:
        raise InvalidInputError(
            f"reference shape {ref.shape} != readings shape "
            f"{sensor_map.readings.shape}")
    if sensor_map.model is SensorModel.DIODE:
        if sensor_map.sensitivity == 0:
            raise InvalidInputError("diode sensitivity must be nonzero")
        return (sensor_map.readings - ref) / sensor_map.sensitivity
    if sensor_map.tcr == 0 or np.any(ref == 0):
        raise InvalidInputError("R0 and TCR must be nonzero")
    return (sensor_map.readings - ref) / (ref * sensor_map.tcr)


@dataclass(frozen=True)
class ChipStack:
    """Minimal chip description for the 1D reduction."""

    t_c: float          # chip thickness m
    k_s: float          # silicon conductivity W/(m.K)
    a_heater: float     # active heater area m2

    def __post_init__(self) -> None:
        for name in ("t_c", "k_s", "a_heater"):
            if getattr(self, name) <= 0:
                raise InvalidInputError(f"{name} must be > 0")


class Reduction(NamedTuple):
    r_th: float         # K/W, junction-side, losses included
    q_loss: float       # W escaping through the package
    t_s_avg: float      # degC average cooled-surface temperature
    htc: float          # W/(m2.K) area-averaged
    dT_avg: float       # K mean chip temperature increase


def reduce(dT_grid, power: float, t_amb: float, t_in: float, r_loss: float,
           chip: ChipStack) -> Reduction:
    """Reduce a temperature-increase map to R_th, heat loss and htc.

    The chip average temperature is t_in + mean(dT); the package loss path of
    resistance r_loss carries q_loss = (T_chip - t_amb)/r_loss; the remaining
    net power conducts 1D through the chip to the cooled surface, whose
    temperature then defines htc = net/(A*(t_s - t_in)). By construction
    htc*A*(t_s - t_in) + q_loss = power exactly.
    """
    if power <= 0:
        raise InvalidInputError(f"power must be > 0, got {power}")
    if r_loss <= 0:
        raise InvalidInputError(f"r_loss must be > 0, got {r_loss}")
    dT = np.asarray(dT_grid, dtype=float)
    dT_avg = float(dT.mean())
    t_chip = t_in + dT_avg
    r_th = dT_avg / power
    q_loss = (t_chip - t_amb) / r_loss
    net = power - q_loss
    t_s = t_chip - net * chip.t_c / (chip.a_heater * chip.k_s)
    if t_s <= t_in:
        raise NonPhysicalReductionError(
            f"cooled surface at {t_s:.3f} degC not above inlet {t_in:.3f} degC")
    htc = net / (chip.a_heater * (t_s - t_in))
    return Reduction(r_th=r_th, q_loss=q_loss, t_s_avg=t_s, htc=htc,
                     dT_avg=dT_avg)


def propagate(budget: Mapping[str, float]) -> float:
    """Root-sum-square of independent relative uncertainty components."""
    if not budget:
        raise InvalidInputError("empty uncertainty budget")
    comps = np.asarray(list(budget.values()), dtype=float)
    if np.any(comps < 0) or not np.all(np.isfinite(comps)):
        raise InvalidInputError("components must be finite and >= 0")
    return float(np.sqrt(np.sum(comps ** 2)))


class GciResult(NamedTuple):
    p: float                 # observed order of convergence
    gci12: float             # fine-pair index
    gci23: float             # coarse-pair index
    asymptotic_ratio: float  # gci23 / (r^p * gci12), ~1 in asymptotic range
    in_asymptotic_range: bool


def gci(f1_fine: float, f2: float, f3_coarse: float, r: float = 2.0,
        fs: float = GCI_SAFETY_FACTOR,
        asymptotic_tol: float = 0.05) -> GciResult:
    """Grid convergence index from three solutions at refinement ratio r.

    p = ln((f3-f2)/(f2-f1))/ln r; GCI_pair = fs*r^p/(r^p-1)*|relative change|.
    Differences must be same-signed and nonzero (oscillatory convergence is
    out of scope).
    """
    if r <= 1:
        raise InvalidInputError(f"refinement ratio must be > 1, got {r}")
    d32 = f3_coarse - f2
    d21 = f2 - f1_fine
    if d32 == 0 or d21 == 0 or (d32 > 0) != (d21 > 0):
        raise NonMonotoneConvergenceError(
            f"grid-level differences {d21:g}, {d32:g} must be nonzero and "
            "same-signed")
    p = math.log(d32 / d21) / math.log(r)
    amp = fs * r ** p / (r ** p - 1.0)
    gci23 = amp * abs(d32 / f2)
    gci12 = amp * abs(d21 / f1_fine)
    ratio = gci23 / (r ** p * gci12)
    return GciResult(p=p, gci12=gci12, gci23=gci23, asymptotic_ratio=ratio,
                     in_asymptotic_range=abs(ratio - 1.0) <= asymptotic_tol)
