"""Command-line surface.

Commands: predict, explore, pareto, cop, hotspot, topo, reduce, gci,
benchmark. Configs are INI files with the units fixed at the boundary
(mm, mL/min, degC, W); everything is SI internally. Exit codes: 0 success,
2 input error, 3 infeasible/non-physical, 4 solver failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import explorer, metrology, performance, topo
from . import props as pr
from .errors import (InfeasibleError, InvalidInputError, NoFlowError,
                     NonMeaningfulResistanceError,
                     NonMonotoneConvergenceError, NonPhysicalReductionError,
                     SolverError)
from .geometry import CoolerArray, array_from_ratios

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_SOLVER = 4

MLPM = 1e-6 / 60.0   # m3/s per mL/min


class ConfigError(InvalidInputError):
    pass


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _read_config(path: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if not cp.read(path):
        raise ConfigError(f"cannot read config file {path!r}")
    return cp


def _section(cp: configparser.ConfigParser, name: str):
    if not cp.has_section(name):
        raise ConfigError(f"config is missing the [{name}] section")
    return cp[name]


def _load_fluid(cp) -> pr.FluidProps:
    sec = _section(cp, "fluid")
    catalog = pr.builtin_fluids()
    if "catalog" in sec:
        catalog.update(pr.load_fluids(sec["catalog"]))
    if "name" in sec:
        name = sec["name"]
        if name not in catalog:
            raise ConfigError(f"[fluid] unknown fluid {name!r}")
        return catalog[name]
    try:
        return pr.FluidProps(
            name=sec.get("label", "custom"),
            density=sec.getfloat("density_kg_m3"),
            viscosity=sec.getfloat("viscosity_kg_ms"),
            specific_heat=sec.getfloat("cp_J_kgK"),
            conductivity=sec.getfloat("k_W_mK"),
            reference_temp=sec.getfloat("ref_temp_C", 20.0))
    except TypeError as exc:
        raise ConfigError(f"[fluid] incomplete inline definition: {exc}")


def _load_solid(cp) -> pr.SolidProps:
    if not cp.has_section("solid"):
        return pr.silicon()
    sec = cp["solid"]
    if "name" in sec:
        catalog = pr.builtin_solids()
        if "catalog" in sec:
            catalog.update(pr.load_solids(sec["catalog"]))
        name = sec["name"]
        if name not in catalog:
            raise ConfigError(f"[solid] unknown solid {name!r}")
        return catalog[name]
    return pr.SolidProps("custom", sec.getfloat("k_W_mK"))


def _load_geometry(cp) -> CoolerArray:
    sec = _section(cp, "geometry")
    try:
        return array_from_ratios(
            chip_side=sec.getfloat("chip_side_mm") * 1e-3,
            n=sec.getint("n"),
            di_over_L=sec.getfloat("di_over_l"),
            do_over_L=sec.getfloat("do_over_l", sec.getfloat("di_over_l")),
            H_over_L=sec.getfloat("h_over_l"),
            t_over_L=sec.getfloat("t_over_l"),
            tc=sec.getfloat("tc_mm") * 1e-3,
            heated_fraction=sec.getfloat("heated_fraction", 0.75))
    except TypeError as exc:
        raise ConfigError(f"[geometry] incomplete: {exc}")


def _load_operating(cp) -> performance.OperatingPoint:
    sec = _section(cp, "operating")
    try:
        return performance.OperatingPoint(
            flow_total=sec.getfloat("flow_mlpm") * MLPM,
            inlet_temp=sec.getfloat("inlet_c", 10.0),
            chip_power=sec.getfloat("power_w", 0.0),
            ambient_temp=sec.getfloat("ambient_c", 25.0))
    except TypeError as exc:
        raise ConfigError(f"[operating] incomplete: {exc}")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_payload(args, payload: dict, stem: str) -> None:
    """Emit a report as JSON (default) or a flat key,value CSV."""
    out = _out_dir(args)
    if getattr(args, "format", "json") == "csv":
        lines = ["key,value"]
        for key, val in payload.items():
            if isinstance(val, dict):
                for sub, sval in val.items():
                    lines.append(f"{key}.{sub},{_csv_cell(sval)}")
            else:
                lines.append(f"{key},{_csv_cell(val)}")
        (out / f"{stem}.csv").write_text("\n".join(lines) + "\n")
    else:
        (out / f"{stem}.json").write_text(json.dumps(payload, indent=2) + "\n")


def _csv_cell(val) -> str:
    if isinstance(val, list):
        return ";".join(str(v) for v in val)
    return _fmt(val)


def _report_dict(report: performance.PerformanceReport) -> dict:
    return {
        "re": report.re, "pr": report.pr, "nu_f": report.nu_f,
        "bi": report.bi, "nu_j": report.nu_j, "htc_W_m2K": report.htc,
        "r_th_K_W": report.r_th, "r_star_Kcm2_W": report.r_star,
        "dT_avg_K": report.dT_avg, "dp_Pa": report.dp, "wp_W": report.w_p,
        "cop": report.cop, "v_nozzle_m_s": report.v_nozzle,
        "flow_per_nozzle_mlpm": report.flow_per_nozzle / MLPM,
        "warnings": list(report.warnings),
    }


# ---------------------------------------------------------------------------
# commands

def cmd_predict(args) -> int:
    cp = _read_config(args.config)
    array = _load_geometry(cp)
    fluid = _load_fluid(cp)
    solid = _load_solid(cp)
    op = _load_operating(cp)
    dt_max = cp["operating"].getfloat("dt_max_allow", 60.0)
    report = performance.evaluate_design(array, fluid, solid, op, dt_max)
    breakdown = performance.pressure_decomposition(
        array.cell, fluid, report.flow_per_nozzle)
    payload = _report_dict(report)
    payload["pressure_breakdown_Pa"] = {
        "dp_in_nozzle": breakdown.dp_in_nozzle,
        "dp_out_nozzle": breakdown.dp_out_nozzle,
        "dp_channel": breakdown.dp_channel,
        "dp_jet_residual": breakdown.dp_jet_residual,
        "warnings": list(breakdown.warnings),
    }
    payload["inputs"] = {
        "chip_side_mm": array.chip_side * 1e3, "n": array.n,
        "di_over_l": array.cell.di_over_L, "do_over_l": array.cell.do_over_L,
        "h_over_l": array.cell.H_over_L, "t_over_l": array.cell.t_over_L,
        "tc_mm": array.cell.t_c * 1e3, "fluid": fluid.name,
        "solid": solid.name, "flow_mlpm": op.flow_total / MLPM,
        "power_w": op.chip_power,
    }
    _write_payload(args, payload, "report")
    for key in ("re", "nu_f", "nu_j", "htc_W_m2K", "r_th_K_W",
                "r_star_Kcm2_W", "dp_Pa", "wp_W", "cop"):
        print(f"{key:>14}  {_fmt(payload[key])}")
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return EXIT_OK


SWEEP_HEADER = ("n,di_over_L,do_over_L,H_over_L,t_over_L,flow_mlpm,re,nu_f,"
                "nu_j,htc_W_m2K,r_th_K_W,r_star_Kcm2_W,dp_Pa,wp_W,cop,status,"
                "warnings")


def _floats(sec, key, fallback=None):
    if key not in sec:
        if fallback is None:
            raise ConfigError(f"missing key {key!r} in [{sec.name}]")
        return fallback
    return tuple(float(tok) for tok in sec[key].replace(",", " ").split())


def _build_space(cp) -> explorer.DesignSpace:
    sec = _section(cp, "sweep")
    geo = _section(cp, "geometry")
    return explorer.DesignSpace(
        n_values=tuple(int(v) for v in _floats(sec, "n")),
        di_over_L=_floats(sec, "di_over_l"),
        H_over_L=_floats(sec, "h_over_l"),
        t_over_L=_floats(sec, "t_over_l"),
        chip_side=geo.getfloat("chip_side_mm") * 1e-3,
        t_c=geo.getfloat("tc_mm") * 1e-3,
        fluid=_load_fluid(cp),
        solid=_load_solid(cp),
        heated_fraction=geo.getfloat("heated_fraction", 0.75))


def _build_mode(cp) -> explorer.ConstraintMode:
    sec = _section(cp, "constraint")
    mode = sec.get("mode", "const_flow")
    kinds = {
        "const_flow": (explorer.ConstraintKind.CONST_FLOW, "value_mlpm", MLPM),
        "const_pressure": (explorer.ConstraintKind.CONST_PRESSURE, "value_pa", 1.0),
        "const_pump": (explorer.ConstraintKind.CONST_PUMP, "value_w", 1.0),
    }
    if mode not in kinds:
        raise ConfigError(f"[constraint] unknown mode {mode!r}")
    kind, key, scale = kinds[mode]
    if key not in sec:
        raise ConfigError(f"[constraint] missing {key!r}")
    return explorer.ConstraintMode(kind, sec.getfloat(key) * scale)


def _write_sweep_csv(rows, path: Path) -> None:
    with open(path, "w") as fh:
        fh.write(SWEEP_HEADER + "\n")
        for row in rows:
            if row.report is None:
                base = [row.n, row.di_over_L, row.do_over_L, row.H_over_L,
                        row.t_over_L, 0.0] + [""] * 9
                fh.write(",".join(_fmt(v) for v in base[:6])
                         + "," + ",".join([""] * 9)
                         + f",{row.status},\n")
                continue
            r = row.report
            vals = [row.n, row.di_over_L, row.do_over_L, row.H_over_L,
                    row.t_over_L, row.flow / MLPM, r.re, r.nu_f, r.nu_j,
                    r.htc, r.r_th, r.r_star, r.dp, r.w_p, r.cop]
            warn = ";".join(r.warnings)
            fh.write(",".join(_fmt(v) for v in vals)
                     + f",{row.status},{warn}\n")


def cmd_explore(args) -> int:
    cp = _read_config(args.config)
    rows = explorer.sweep(_build_space(cp), _build_mode(cp))
    out = _out_dir(args)
    _write_sweep_csv(rows, out / "sweep.csv")
    print(f"wrote {len(rows)} rows to {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_pareto(args) -> int:
    src = args.input
    if src is None and args.config:
        cp = _read_config(args.config)
        src = _section(cp, "pareto").get("input")
    if src is None:
        raise ConfigError("pareto needs --input CSV (or [pareto] input=...)")
    points = []
    with open(src, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if "r_th_K_W" in fields and "wp_W" in fields:
            rk, wk = "r_th_K_W", "wp_W"
        elif "r_th" in fields and "w_p" in fields:
            rk, wk = "r_th", "w_p"
        else:
            raise ConfigError(
                f"{src}: need columns r_th_K_W/wp_W or r_th/w_p")
        for row in reader:
            if not row[rk]:
                continue   # infeasible sweep rows carry empty metrics
            points.append((float(row[rk]), float(row[wk])))
    if not points:
        raise ConfigError(f"{src}: no usable points")
    front = explorer.pareto_front(points)
    out = _out_dir(args)
    with open(out / "pareto.csv", "w") as fh:
        fh.write("r_th_K_W,wp_W\n")
        for r, w in front:
            fh.write(f"{_fmt(r)},{_fmt(w)}\n")
    print(f"{len(front)} non-dominated of {len(points)} points "
          f"-> {out / 'pareto.csv'}")
    return EXIT_OK


def cmd_cop(args) -> int:
    cp = _read_config(args.config)
    sec = _section(cp, "cop")
    geo = _section(cp, "geometry")
    space = explorer.DesignSpace(
        n_values=tuple(int(v) for v in _floats(sec, "n")),
        di_over_L=(sec.getfloat("di_over_l"),),
        H_over_L=_floats(sec, "h_over_l"),
        t_over_L=(sec.getfloat("t_over_l"),),
        chip_side=geo.getfloat("chip_side_mm") * 1e-3,
        t_c=geo.getfloat("tc_mm") * 1e-3,
        fluid=_load_fluid(cp), solid=_load_solid(cp))
    grid = explorer.cop_surface(space, sec.getfloat("flow_mlpm") * MLPM)
    out = _out_dir(args)
    with open(out / "cop.csv", "w") as fh:
        fh.write("n,density_cm2," + ",".join(
            f"H_over_L={_fmt(h)}" for h in grid.H_over_L) + "\n")
        for i, n in enumerate(grid.n_values):
            cells = ",".join(_fmt(grid.cop[i, j])
                             for j in range(len(grid.H_over_L)))
            fh.write(f"{n},{_fmt(grid.density_cm2[i])},{cells}\n")
    print(f"wrote {len(grid.n_values)}x{len(grid.H_over_L)} COP grid "
          f"-> {out / 'cop.csv'}")
    return EXIT_OK


def cmd_hotspot(args) -> int:
    cp = _read_config(args.config)
    out = _out_dir(args)
    if cp.has_section("scale"):
        sec = cp["scale"]
        result = explorer.hotspot_scale(
            base_htc=sec.getfloat("base_htc_w_m2k"),
            base_flow_per_nozzle=sec.getfloat("base_flow_mlpm") * MLPM,
            n_sq=sec.getint("n_total"),
            m_nozzles=sec.getint("m_nozzles"))
        payload = {"m": result.m, "htc_star_W_m2K": result.htc_star,
                   "flow_star_mlpm": result.flow_star / MLPM,
                   "dp_ratio": result.dp_ratio}
        (out / "hotspot_scale.json").write_text(
            json.dumps(payload, indent=2) + "\n")
        for key, val in payload.items():
            print(f"{key:>16}  {_fmt(val)}")
        return EXIT_OK

    sec = _section(cp, "map")
    density = np.loadtxt(sec["file"], delimiter=",", ndmin=2)
    power_map = explorer.PowerMap(density_w_cm2=density,
                                  cell_pitch=sec.getfloat("pitch_mm", 1.0) * 1e-3)
    plan = explorer.hotspot_synthesize(
        power_map, flow_total=sec.getfloat("flow_mlpm") * MLPM,
        dT_target=sec.getfloat("dt_target_k"), fluid=_load_fluid(cp),
        bounds=(sec.getfloat("d_min_mm", 0.1), sec.getfloat("d_max_mm", 0.9)))
    with open(out / "nozzle_plan.csv", "w") as fh:
        fh.write("row,col,power_W_cm2,d_mm,m_nz_mlpm,htc_W_m2K\n")
        nrow, ncol = plan.d_mm.shape
        for i in range(nrow):
            for j in range(ncol):
                fh.write(f"{i},{j},{_fmt(density[i, j])},{_fmt(plan.d_mm[i, j])},"
                         f"{_fmt(plan.m_nz_mlpm[i, j])},{_fmt(plan.htc[i, j])}\n")
    summary = {"dp": plan.dp, "flow_total_mlpm": plan.flow_total_mlpm,
               "infeasible_cells": [list(c) for c in plan.infeasible_cells],
               "warnings": list(plan.warnings)}
    (out / "hotspot_summary.json").write_text(
        json.dumps(summary, indent=2) + "\n")
    if plan.infeasible_cells:
        print(f"{len(plan.infeasible_cells)} cell(s) cannot reach the "
              "required htc within the diameter bounds", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"wrote plan for {int((density > 0).sum())} active cells "
          f"-> {out / 'nozzle_plan.csv'}")
    return EXIT_OK


def _topo_selftest() -> int:
    """Plane-channel analytic check: RMS error order vs the formal order 2."""
    from .props import water
    errs = []
    for ny in (8, 16, 32):
        nx = 4 * ny
        ly = 1e-3
        grid = topo.Grid2D(nx, ny, 4 * ly / nx, ly / ny, [
            topo.Segment("left", 0, ny, "inlet", "parabolic", 0.01),
            topo.Segment("right", 0, ny, "outlet_pressure")])
        sol = topo.solve_flow(grid, topo.DensityField.uniform(grid, 1.0),
                              water())
        y = (np.arange(ny) + 0.5) * grid.dy
        u_exact = 6 * 0.01 * y * (ly - y) / ly ** 2
        err = np.sqrt(((sol.u - u_exact[None, :]) ** 2).mean()) / u_exact.max()
        errs.append(err)
        print(f"ny={ny:3d}  rms_error={err:.4e}  "
              f"mass_imbalance={sol.mass_imbalance():.2e}")
    orders = [float(np.log2(errs[k] / errs[k + 1])) for k in range(len(errs) - 1)]
    print("measured orders:", ", ".join(f"{o:.3f}" for o in orders))
    if all(abs(o - 2.0) <= 0.3 for o in orders):
        print("selftest passed (formal order 2)")
        return EXIT_OK
    print("selftest FAILED: order drifted from 2", file=sys.stderr)
    return EXIT_SOLVER


def cmd_topo(args) -> int:
    if args.selftest:
        return _topo_selftest()
    if not args.config:
        raise ConfigError("topo needs --config PROBLEM_FILE (or --selftest)")
    problem, max_iters, q_schedule = topo.parse_problem_file(args.config)
    result = topo.optimize(problem, max_iters=max_iters,
                           q_schedule=q_schedule)
    out = _out_dir(args)
    topo.export_density(result.eps, out / "density.csv", out / "density.pgm")
    topo.write_history(result.history, out / "history.csv")
    solution = topo.solve_flow(
        problem.grid, result.eps, problem.fluid, q=problem.q,
        alpha_assignment=problem.alpha_assignment)
    topo.write_fields(solution, out / "fields.csv")
    flows = solution.outlet_flows()
    print(f"status={result.status} iterations={len(result.history) - 1} "
          f"J={_fmt(result.history[-1].J)}")
    print("outlet flow shares:", " ".join(
        _fmt(f / flows.sum()) for f in flows))
    return EXIT_OK


def _parse_dataset_header(path: str) -> dict:
    params = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            text = line[1:].strip()
            if "=" in text:
                key, val = text.split("=", 1)
                params[key.strip()] = val.strip()
    return params


def cmd_reduce(args) -> int:
    if not args.config:
        raise ConfigError("reduce needs --config DATASET_CSV")
    params = _parse_dataset_header(args.config)
    rows = []
    with open(args.config, newline="") as fh:
        reader = csv.DictReader(r for r in fh if not r.startswith("#"))
        for row in reader:
            rows.append(row)
    if not rows:
        raise ConfigError(f"{args.config}: empty dataset")
    required = {"row", "col", "reading_on", "reading_off"}
    if not required <= set(rows[0]):
        raise ConfigError(f"{args.config}: need columns {sorted(required)}")
    nrow = max(int(r["row"]) for r in rows) + 1
    ncol = max(int(r["col"]) for r in rows) + 1
    on = np.zeros((nrow, ncol))
    off = np.zeros((nrow, ncol))
    for r in rows:
        on[int(r["row"]), int(r["col"])] = float(r["reading_on"])
        off[int(r["row"]), int(r["col"])] = float(r["reading_off"])

    model = params.get("model", "diode")
    if model == "diode":
        sens = float(params.get("sensitivity_mv_per_c",
                                metrology.DIODE_SENSITIVITY_MV_C)) * 1e-3
        smap = metrology.SensorMap(on, metrology.SensorModel.DIODE,
                                   sensitivity=sens)
    elif model == "tcr":
        tcr = float(params.get("tcr_ppm_per_c",
                               metrology.TCR_PER_C * 1e6)) * 1e-6
        smap = metrology.SensorMap(on, metrology.SensorModel.TCR, tcr=tcr)
    else:
        raise ConfigError(f"unknown sensor model {model!r}")
    dT = metrology.sensor_to_dT(smap, off)

    def need(key):
        if key not in params:
            raise ConfigError(f"dataset header missing '# {key} = ...'")
        return float(params[key])

    chip = metrology.ChipStack(t_c=need("tc_mm") * 1e-3,
                               k_s=float(params.get("k_s_w_mk", 149.0)),
                               a_heater=need("heater_area_cm2") * 1e-4)
    red = metrology.reduce(dT, power=need("power_w"), t_amb=need("t_amb_c"),
                           t_in=need("t_in_c"), r_loss=need("r_loss_k_w"),
                           chip=chip)
    payload = {"r_th_K_W": red.r_th, "q_loss_W": red.q_loss,
               "t_s_avg_C": red.t_s_avg, "htc_W_m2K": red.htc,
               "dT_avg_K": red.dT_avg}
    _write_payload(args, payload, "reduction")
    for key, val in payload.items():
        print(f"{key:>12}  {_fmt(val)}")
    return EXIT_OK


def cmd_gci(args) -> int:
    cp = _read_config(args.config)
    sec = _section(cp, "gci")
    result = metrology.gci(
        f1_fine=sec.getfloat("f1"), f2=sec.getfloat("f2"),
        f3_coarse=sec.getfloat("f3"), r=sec.getfloat("r", 2.0),
        fs=sec.getfloat("fs", metrology.GCI_SAFETY_FACTOR))
    payload = {"p": result.p, "gci12": result.gci12, "gci23": result.gci23,
               "asymptotic_ratio": result.asymptotic_ratio,
               "in_asymptotic_range": result.in_asymptotic_range}
    _write_payload(args, payload, "gci")
    for key, val in payload.items():
        print(f"{key:>20}  {_fmt(val)}")
    return EXIT_OK


# benchmark fixture unit parsing -------------------------------------------

_FLOW_UNITS = {"ml/min": MLPM, "l/min": 1e-3 / 60.0}
_DP_UNITS = {"pa": 1.0, "kpa": 1e3, "bar": 1e5}


def _parse_quantity(text: str, units: dict) -> float | None:
    text = text.strip().lower()
    if not text:
        return None
    # longest suffix first so "kpa" is not eaten by "pa"
    for unit in sorted(units, key=len, reverse=True):
        if text.endswith(unit):
            try:
                return float(text[:-len(unit)].strip()) * units[unit]
            except ValueError:
                return None
    return None


def _benchmark_rows(fixture_path: str | None):
    if fixture_path is None:
        from importlib import resources
        src = resources.files("jetcool").joinpath("data", "benchmark_fixture.csv")
        fh = src.open(newline="")
    else:
        fh = open(fixture_path, newline="")
    with fh:
        return list(csv.DictReader(fh))


def cmd_benchmark(args) -> int:
    rows = _benchmark_rows(args.fixture)
    out = _out_dir(args)
    lines = ["label,material,r_star_Kcm2_W,w_star_W_cm2,warnings"]
    for row in rows:
        warnings = []
        label = f"{row['authors']} {row['year']}"
        area = float(row["chip_area_cm2"]) if row["chip_area_cm2"] else None
        metric = float(row["thermal_metric"]) if row["thermal_metric"] else None
        unit = row["thermal_metric_unit"]
        r_star = ""
        if metric is not None:
            if unit == "Kcm2/W":
                r_star = metric
            elif unit == "K/W" and area is not None:
                r_star = metric * area
            elif unit.startswith("W/cm2K"):
                r_star = 1.0 / metric   # R*A = 1/h for convective resistance
            else:
                warnings.append("metric_not_normalizable")
        pump = float(row["pump_w"]) if row["pump_w"] else None
        if pump is None:
            flow = _parse_quantity(row["flow"], _FLOW_UNITS)
            dp = _parse_quantity(row["dp"], _DP_UNITS)
            if flow is not None and dp is not None:
                pump = flow * dp
        w_star = ""
        if pump is not None and area is not None:
            w_star = pump / area
        else:
            warnings.append("no_pump_power")
        lines.append(f"{label},{row['material']},"
                     f"{_fmt(r_star) if r_star != '' else ''},"
                     f"{_fmt(w_star) if w_star != '' else ''},"
                     + ";".join(warnings))
    if args.user_r_star is not None:
        if args.user_pump_w is None or args.user_area_cm2 is None:
            raise ConfigError("user point needs --user-r-star, --user-pump-w "
                              "and --user-area-cm2")
        w_star = args.user_pump_w / args.user_area_cm2
        lines.append(f"{args.user_label},user,{_fmt(args.user_r_star)},"
                     f"{_fmt(w_star)},")
    text = "\n".join(lines) + "\n"
    (out / "benchmark.csv").write_text(text)
    print(f"wrote {len(lines) - 1} benchmark points -> {out / 'benchmark.csv'}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetcool",
        description="multi-jet impingement cooler design toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="INI config / problem / dataset file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="json",
                       help="format for report payloads (tabular artifacts "
                            "are always CSV)")

    for name, fn in (("predict", cmd_predict), ("explore", cmd_explore),
                     ("cop", cmd_cop), ("hotspot", cmd_hotspot),
                     ("reduce", cmd_reduce), ("gci", cmd_gci)):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("pareto")
    common(p)
    p.add_argument("--input", help="CSV of points (sweep output or r_th,w_p)")
    p.set_defaults(fn=cmd_pareto)

    p = sub.add_parser("topo")
    common(p)
    p.add_argument("--selftest", action="store_true",
                   help="run the analytic channel-flow convergence check")
    p.set_defaults(fn=cmd_topo)

    p = sub.add_parser("benchmark")
    common(p)
    p.add_argument("--fixture", help="alternative fixture CSV")
    p.add_argument("--user-r-star", type=float, default=None)
    p.add_argument("--user-pump-w", type=float, default=None)
    p.add_argument("--user-area-cm2", type=float, default=None)
    p.add_argument("--user-label", default="this-work")
    p.set_defaults(fn=cmd_benchmark)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, InvalidInputError, FileNotFoundError,
            configparser.Error, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NoFlowError, InfeasibleError, NonPhysicalReductionError,
            NonMonotoneConvergenceError, NonMeaningfulResistanceError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
