"""Design-space sweeps under constraints, Pareto extraction, COP surfaces,
hotspot flow scaling and hotspot-targeted nozzle-array synthesis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from . import correlations as corr
from . import props as pr
from .errors import InfeasibleError, InvalidInputError
from .geometry import CoolerArray, array_from_ratios
from .performance import (DT_MAX_ALLOW_DEFAULT, OperatingPoint,
                          PerformanceReport, evaluate_design)
from .roots import bisect_monotone


@dataclass(frozen=True)
class DesignSpace:
    """Cartesian design grid; every combination becomes one sweep row."""

    n_values: tuple[int, ...]
    di_over_L: tuple[float, ...]
    H_over_L: tuple[float, ...]
    t_over_L: tuple[float, ...]
    chip_side: float
    t_c: float
    fluid: pr.FluidProps
    solid: pr.SolidProps
    do_over_L: tuple[float, ...] | None = None  # defaults to d_i/L per design
    heated_fraction: float = 0.75

    def designs(self):
        dos = self.do_over_L
        for n in self.n_values:
            for a in self.di_over_L:
                for do in (dos if dos is not None else (a,)):
                    for h in self.H_over_L:
                        for t in self.t_over_L:
                            yield n, a, do, h, t

    def build(self, n: int, a: float, do: float, h: float,
              t: float) -> CoolerArray:
        return array_from_ratios(self.chip_side, n, a, do, h, t, self.t_c,
                                 self.heated_fraction)


class ConstraintKind(Enum):
    CONST_FLOW = "const_flow"
    CONST_PRESSURE = "const_pressure"
    CONST_PUMP = "const_pump"


@dataclass(frozen=True)
class ConstraintMode:
    kind: ConstraintKind
    value: float          # m3/s, Pa or W depending on kind

    def __post_init__(self) -> None:
        if self.value <= 0 or not math.isfinite(self.value):
            raise InvalidInputError(f"constraint value must be > 0, got {self.value}")


@dataclass(frozen=True)
class SweepRow:
    n: int
    di_over_L: float
    do_over_L: float
    H_over_L: float
    t_over_L: float
    flow: float                       # m3/s actually evaluated (0 if infeasible)
    report: PerformanceReport | None
    status: str                       # "ok" | "infeasible"


def _dp_of_flow(space: DesignSpace, array: CoolerArray, flow: float) -> float:
    cell = array.cell
    v_bar = flow / array.nozzle_count / cell.nozzle_area
    re = pr.reynolds(space.fluid, cell.d_i, v_bar)
    inputs = corr.PredictiveInputs(cell.di_over_L, cell.do_over_L,
                                   cell.H_over_L, cell.t_over_L, re)
    return corr.friction_predict(inputs).k * 0.5 * space.fluid.density * v_bar ** 2


def sweep(space: DesignSpace, mode: ConstraintMode,
          dt_max_allow: float = DT_MAX_ALLOW_DEFAULT,
          inlet_temp: float = 10.0) -> list[SweepRow]:
    """Evaluate every design under the constraint.

    const_flow evaluates directly; const_pressure / const_pump invert the
    monotone dp(V) / V*dp(V) maps by bisection. Targets outside the
    achievable range flag the row infeasible instead of aborting the sweep.
    Row order follows the design-space enumeration order.
    """
    rows: list[SweepRow] = []
    for n, a, do, h, t in space.designs():
        array = space.build(n, a, do, h, t)
        try:
            if mode.kind is ConstraintKind.CONST_FLOW:
                flow = mode.value
            elif mode.kind is ConstraintKind.CONST_PRESSURE:
                flow = bisect_monotone(
                    lambda v: _dp_of_flow(space, array, v), mode.value,
                    guess=1e-5, what="pressure target")
            else:
                flow = bisect_monotone(
                    lambda v: v * _dp_of_flow(space, array, v), mode.value,
                    guess=1e-5, what="pump-power target")
            report = evaluate_design(
                array, space.fluid, space.solid,
                OperatingPoint(flow_total=flow, inlet_temp=inlet_temp),
                dt_max_allow=dt_max_allow)
            rows.append(SweepRow(n, a, do, h, t, flow, report, "ok"))
        except InfeasibleError:
            rows.append(SweepRow(n, a, do, h, t, 0.0, None, "infeasible"))
    return rows


def pareto_front(points: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    """Non-dominated subset under (minimize r_th, minimize w_p).

    Returned sorted by w_p ascending; exact duplicates keep their first
    occurrence only.
    """
    if not points:
        raise InvalidInputError("empty point set")
    order = sorted(range(len(points)),
                   key=lambda i: (points[i][1], points[i][0], i))
    front: list[tuple[float, float]] = []
    best_r = math.inf
    seen: set[tuple[float, float]] = set()
    for i in order:
        r, w = points[i]
        if (r, w) in seen:
            continue
        if r < best_r:
            front.append((r, w))
            best_r = r
            seen.add((r, w))
    return front


class CopGrid(NamedTuple):
    n_values: tuple[int, ...]
    H_over_L: tuple[float, ...]
    density_cm2: tuple[float, ...]
    cop: np.ndarray                 # shape (len(n_values), len(H_over_L))


def cop_surface(space: DesignSpace, flow: float,
                dt_max_allow: float = DT_MAX_ALLOW_DEFAULT) -> CopGrid:
    """COP over (nozzle density, cavity height) at a fixed total flow.

    Uses the first d_i/L and t/L of the space; one grid node per
    (n, H/L) pair.
    """
    if flow <= 0:
        raise InvalidInputError(f"flow must be > 0, got {flow}")
    a = space.di_over_L[0]
    t = space.t_over_L[0]
    cop = np.empty((len(space.n_values), len(space.H_over_L)))
    density = []
    for i, n in enumerate(space.n_values):
        array = None
        for j, h in enumerate(space.H_over_L):
            array = space.build(n, a, a, h, t)
            report = evaluate_design(array, space.fluid, space.solid,
                                     OperatingPoint(flow_total=flow),
                                     dt_max_allow=dt_max_allow)
            cop[i, j] = report.cop
        density.append(array.nozzle_density_cm2)
    return CopGrid(tuple(space.n_values), tuple(space.H_over_L),
                   tuple(density), cop)


# ---------------------------------------------------------------------------
# hotspot scaling (flow concentration at fixed total flow)

class HotspotScaling(NamedTuple):
    m: float            # concentration ratio N^2/M
    htc_star: float     # expected local htc of the targeted cooler
    flow_star: float    # per-nozzle flow of the targeted cooler
    dp_ratio: float     # expected pressure-drop multiplier


def hotspot_scale(base_htc: float, base_flow_per_nozzle: float, n_sq: int,
                  m_nozzles: int) -> HotspotScaling:
    """Unit-cell scaling when N^2 array nozzles concentrate into M nozzles.

    m = N^2/M (exact ratio, no rounding); htc* = m^0.67 htc, V* = m V,
    dp scales with m^2 at fixed total flow.
    """
    if m_nozzles < 1:
        raise InvalidInputError(f"m_nozzles must be >= 1, got {m_nozzles}")
    if n_sq < m_nozzles:
        raise InvalidInputError(
            f"n_sq {n_sq} must be >= m_nozzles {m_nozzles}")
    m = n_sq / m_nozzles
    return HotspotScaling(m=m, htc_star=m ** 0.67 * base_htc,
                          flow_star=m * base_flow_per_nozzle, dp_ratio=m * m)


# ---------------------------------------------------------------------------
# hotspot-targeted nozzle synthesis

M3S_PER_MLPM = 1e-6 / 60.0


@dataclass(frozen=True)
class PowerMap:
    """Cell power densities [W/cm2] on a square layout with the given pitch."""

    density_w_cm2: np.ndarray
    cell_pitch: float = 1e-3       # m

    def __post_init__(self) -> None:
        object.__setattr__(self, "density_w_cm2",
                           np.asarray(self.density_w_cm2, dtype=float))
        if np.any(self.density_w_cm2 < 0):
            raise InvalidInputError("power densities must be >= 0")

    @property
    def total_power(self) -> float:
        cell_area_cm2 = (self.cell_pitch * 100.0) ** 2
        return float(self.density_w_cm2.sum() * cell_area_cm2)


@dataclass(frozen=True)
class NozzlePlan:
    """Per-cell nozzle diameters [mm] (0 = no inlet nozzle, outlets only),
    the per-cell flows [mL/min] and achieved htc [W/(m2.K)], and the shared
    plenum pressure (units of the pressure fit)."""

    d_mm: np.ndarray
    m_nz_mlpm: np.ndarray
    htc: np.ndarray
    dp: float
    flow_total_mlpm: float
    infeasible_cells: tuple[tuple[int, int], ...] = ()
    warnings: tuple[str, ...] = ()


def hotspot_synthesize(power_map: PowerMap, flow_total: float,
                       dT_target: float, fluid: pr.FluidProps,
                       bounds: tuple[float, float] = (0.1, 0.9),
                       htc_model: corr.HotspotHtcModel | None = None,
                       dp_model: corr.NozzlePressureModel | None = None) -> NozzlePlan:
    """Choose per-cell nozzle diameters for a uniform target temperature rise.

    Every open nozzle shares one plenum pressure, which fixes its flow as a
    function of diameter; the diameter per cell is solved so the per-cell
    fitted htc meets htc_req = q''/dT_target, and the plenum pressure is
    bisected until the open-nozzle flows sum to flow_total [m3/s].
    Cells whose requirement is unreachable inside the diameter bounds are
    clamped to the nearest bound and flagged. The default fitted constants
    hold for 1 mm pitch cells with the reference coolant; other pitches or
    coolants require explicitly refitted models (fit_htc_model).
    """
    htc_model = htc_model if htc_model is not None else corr.HotspotHtcModel()
    dp_model = dp_model if dp_model is not None else corr.NozzlePressureModel()
    pitch_mm = power_map.cell_pitch * 1000.0
    if (abs(pitch_mm - htc_model.pitch_mm) > 1e-9
            or abs(pitch_mm - dp_model.pitch_mm) > 1e-9):
        raise InvalidInputError(
            f"fitted constants hold for {htc_model.pitch_mm} mm pitch; "
            f"map pitch is {pitch_mm} mm — supply refitted models")
    d_min, d_max = bounds
    if not 0 < d_min < d_max:
        raise InvalidInputError(f"bad diameter bounds {bounds}")
    if power_map.total_power <= 0:
        raise InvalidInputError("total map power must be > 0")
    if dT_target <= 0:
        raise InvalidInputError("dT_target must be > 0")
    flow_total_mlpm = flow_total / M3S_PER_MLPM

    density = power_map.density_w_cm2
    active = density > 0
    htc_req = np.zeros_like(density)
    htc_req[active] = density[active] * 1e4 / dT_target  # W/cm2 -> W/m2
    reqs = htc_req[active]

    def dp_needed(d: float, req: float) -> float:
        """Plenum pressure at which diameter d exactly meets req."""
        return dp_model.evaluate(d, htc_model.flow_for_htc(d, req))

    # At fixed plenum pressure the achieved htc rises with d while the flow
    # exponent is large, peaks, then falls as the exponent collapses; only
    # the rising branch is physically sensible (less flow, smaller nozzle
    # for the same cooling), so each cell solve is restricted to it.
    d_samples = np.geomspace(d_min, d_max, 160)

    def cell_state(dp: float, req: float) -> tuple[float, float, str]:
        """(diameter, flow, status) for one cell at plenum pressure dp."""
        achieved = np.array([htc_model.evaluate(d, dp_model.flow_for_dp(d, dp))
                             for d in d_samples])
        k_peak = int(achieved.argmax())
        if req > achieved[k_peak]:
            d = float(d_samples[k_peak])   # best effort, requirement missed
            return d, dp_model.flow_for_dp(d, dp), "unreachable"
        if req < achieved[0]:
            d = d_min                      # overshoots even at d_min
            return d, dp_model.flow_for_dp(d, dp), "exceeded"
        a, b = d_min, float(d_samples[k_peak])
        fa = achieved[0] - req
        d = 0.5 * (a + b)
        for _ in range(200):
            d = 0.5 * (a + b)
            fm = (htc_model.evaluate(d, dp_model.flow_for_dp(d, dp)) - req)
            if abs(fm) <= 1e-12 * req:
                break
            if fa * fm <= 0:
                b = d
            else:
                a, fa = d, fm
        return d, dp_model.flow_for_dp(d, dp), "ok"

    def total_flow(dp: float) -> float:
        return sum(cell_state(dp, req)[1] for req in reqs)

    # pressure band on which every cell is exactly solvable: total flow is
    # strictly decreasing there, so that root is preferred when it exists
    # (outside it, cells clamp and the total becomes non-monotone)
    dp_star = None
    try:
        band_lo = max(min(dp_needed(d, r) for d in d_samples) for r in reqs)
        band_hi = min(dp_needed(d_min, r) for r in reqs)
    except InvalidInputError:
        band_lo, band_hi = 1.0, 0.0
    if band_lo <= band_hi:
        t_lo, t_hi = total_flow(band_lo), total_flow(band_hi)
        if min(t_lo, t_hi) <= flow_total_mlpm <= max(t_lo, t_hi):
            a, b, fa = band_lo, band_hi, t_lo - flow_total_mlpm
            for _ in range(200):
                dp_star = 0.5 * (a + b)
                fm = total_flow(dp_star) - flow_total_mlpm
                if abs(fm) <= 1e-12 * flow_total_mlpm:
                    break
                if fa * fm <= 0:
                    b = dp_star
                else:
                    a, fa = dp_star, fm
    if dp_star is None:
        # target outside the fully-feasible range: with cells clamped at
        # their bounds the total is only piecewise monotone, so scan a wide
        # pressure range and prefer the bracket with the fewest flagged
        # cells (over-cooled plans beat under-cooled ones on a tie)
        dp_grid = np.geomspace(max(band_lo * 1e-6, 1e-9),
                               max(band_hi, band_lo, 1.0) * 1e6, 240)
        totals = np.array([total_flow(dp) for dp in dp_grid])
        resid = totals - flow_total_mlpm
        brackets = [k for k in range(len(dp_grid) - 1)
                    if resid[k] == 0.0 or resid[k] * resid[k + 1] <= 0.0]
        if not brackets:
            raise InfeasibleError(
                f"no plenum pressure delivers {flow_total_mlpm:g} mL/min "
                "within the diameter bounds")

        def badness(k: int) -> tuple[int, int, float]:
            mid = math.sqrt(dp_grid[k] * dp_grid[k + 1])
            states = [cell_state(mid, req)[2] for req in reqs]
            return (sum(s == "unreachable" for s in states),
                    sum(s != "ok" for s in states), dp_grid[k])

        k = min(brackets, key=badness)
        a, b = dp_grid[k], dp_grid[k + 1]
        fa = resid[k]
        for _ in range(200):
            dp_star = math.sqrt(a * b)
            fm = total_flow(dp_star) - flow_total_mlpm
            if abs(fm) <= 1e-9 * flow_total_mlpm:
                break
            if fa * fm <= 0:
                b = dp_star
            else:
                a, fa = dp_star, fm

    d_grid = np.zeros_like(density)
    m_grid = np.zeros_like(density)
    htc_grid = np.zeros_like(density)
    infeasible = []
    warns = []
    for idx in np.argwhere(active):
        i, j = int(idx[0]), int(idx[1])
        d, m_nz, status = cell_state(dp_star, htc_req[i, j])
        d_grid[i, j] = d
        m_grid[i, j] = m_nz
        htc_grid[i, j] = htc_model.evaluate(d, m_nz)
        if status != "ok":
            infeasible.append((i, j))
            warns.append(f"htc_{status}:{i},{j}")
    return NozzlePlan(d_mm=d_grid, m_nz_mlpm=m_grid, htc=htc_grid, dp=dp_star,
                      flow_total_mlpm=float(m_grid.sum()),
                      infeasible_cells=tuple(infeasible), warnings=tuple(warns))
