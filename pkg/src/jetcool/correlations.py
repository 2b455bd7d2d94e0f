"""Predictive Nu/f models, literature correlation catalog, Biot correction.

The predictors return a value together with machine-readable validity
warnings: design exploration legitimately probes outside the fitted ranges,
so out-of-range inputs are never clamped and never fatal.
"""

from __future__ import annotations

import csv
import math
import warnings as _warnings
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidInputError, UnderdeterminedFitError


class Basis(Enum):
    """Temperature reference the Nusselt number of a correlation is built on."""

    JUNCTION = "junction"
    FLUID_INTERFACE = "fluid_interface"
    STAGNATION = "stagnation"


class Prediction(NamedTuple):
    value: float
    warnings: tuple[str, ...] = ()


class FrictionPrediction(NamedTuple):
    f: float
    k: float
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class PredictiveInputs:
    """Dimensionless arguments of the fitted predictive models."""

    di_over_L: float
    do_over_L: float
    H_over_L: float
    t_over_L: float
    re: float

    def __post_init__(self) -> None:
        for name in ("di_over_L", "do_over_L", "H_over_L", "t_over_L"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise InvalidInputError(f"{name} must be > 0, got {val}")
        if not (math.isfinite(self.re) and self.re >= 0):
            raise InvalidInputError(f"re must be >= 0, got {self.re}")


def nu_f_predict(inputs: PredictiveInputs) -> Prediction:
    """Interface-temperature Nusselt number of a distributed-outlet array.

    Nu_f = (5.64 a^2 + 0.031 a - 0.000632) * (H/L)^-0.29 * Re^(0.48 a^-0.16)
    with a = d_i/L; the fit holds for d_o/L = d_i/L, a in [0.01, 0.4],
    H/L in [0.01, 0.4], Re in [32, 2048] (confidence +-25%).
    """
    a = inputs.di_over_L
    warns = []
    if not 0.01 <= a <= 0.4:
        warns.append(f"di_over_L_out_of_range:{a:g}")
    if not 0.01 <= inputs.H_over_L <= 0.4:
        warns.append(f"H_over_L_out_of_range:{inputs.H_over_L:g}")
    if not 32 <= inputs.re <= 2048:
        warns.append(f"re_out_of_range:{inputs.re:g}")
    if inputs.do_over_L < a:
        # fit condition d_o/L = d_i/L; smaller outlets raise the pressure drop
        # and can degrade heat transfer
        warns.append(f"do_smaller_than_di:{inputs.do_over_L:g}")
    coef = 5.64 * a * a + 0.031 * a - 0.000632
    value = coef * inputs.H_over_L ** -0.29 * inputs.re ** (0.48 * a ** -0.16)
    return Prediction(value, tuple(warns))


def friction_predict(inputs: PredictiveInputs) -> FrictionPrediction:
    """Friction factor f and pressure coefficient k = f * (t/d_i).

    f = ((21.2 a + 14.5) Re^-0.73 a^-0.26 (2.26 t/L + 0.89)
         (0.37 (H/L)^0.15 + 0.55) + 0.8) * (t/d_i)^-1
    valid for d_o/L = d_i/L, a in [0.05, 0.6], t/L >= 0.1, H/d_i >= 0.2,
    Re in [32, 2048] (confidence +-15%). k relates to the pressure drop via
    dp = k * (1/2) rho V^2.
    """
    a = inputs.di_over_L
    if inputs.t_over_L <= 0:
        raise InvalidInputError("t must be > 0 (t/d_i division)")
    warns = []
    if not 0.05 <= a <= 0.6:
        warns.append(f"di_over_L_out_of_range:{a:g}")
    if inputs.t_over_L < 0.1:
        warns.append(f"t_over_L_out_of_range:{inputs.t_over_L:g}")
    if inputs.H_over_L / a < 0.2:
        warns.append(f"H_over_di_out_of_range:{inputs.H_over_L / a:g}")
    if not 32 <= inputs.re <= 2048:
        warns.append(f"re_out_of_range:{inputs.re:g}")
    t_over_di = inputs.t_over_L / a
    core = ((21.2 * a + 14.5) * inputs.re ** -0.73 * a ** -0.26
            * (2.26 * inputs.t_over_L + 0.89)
            * (0.37 * inputs.H_over_L ** 0.15 + 0.55))
    f = (core + 0.8) / t_over_di
    return FrictionPrediction(f, f * t_over_di, tuple(warns))


def biot_correct(nu_f: float, bi: float) -> float:
    """Junction-temperature Nusselt number Nu_j = Nu_f / g(Bi).

    g(Bi) = 1 + Bi + (0.1 Bi + 1.1 Bi^2) folds 1D conduction and spreading in
    the die; g(0) = 1 so Nu_j -> Nu_f for a vanishing chip thickness.
    """
    if bi < 0 or not math.isfinite(bi):
        raise InvalidInputError(f"bi must be >= 0, got {bi}")
    return nu_f / g_bi(bi)


def g_bi(bi: float) -> float:
    return 1.0 + bi + (0.1 * bi + 1.1 * bi * bi)


def nu_to_htc(nu: float, d_i: float, k_f: float) -> float:
    """Heat transfer coefficient h = Nu * k_f / d_i [W/(m2.K)]."""
    if d_i <= 0 or not math.isfinite(d_i):
        raise InvalidInputError(f"d_i must be > 0, got {d_i}")
    return nu * k_f / d_i


# ---------------------------------------------------------------------------
# literature catalog

class ValidityWarning(UserWarning):
    """Raised (as a warning) when a fitted exponent is unusual."""


@dataclass(frozen=True)
class PowerLawCorrelation:
    """Nu = c * Re^m [* Pr^pr_exponent] [* (H/D)^..., (Xn/D)^...].

    re_min/re_max delimit the stated validity range (None = not stated).
    Extra geometric factors cover multi-factor literature forms.
    """

    label: str
    c: float
    m: float
    basis: Basis
    pr_exponent: float | None = None
    re_min: float | None = None
    re_max: float | None = None
    h_over_d_exponent: float | None = None
    xn_over_d_exponent: float | None = None

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise InvalidInputError(f"{self.label}: c must be > 0, got {self.c}")
        if not 0 < self.m < 1:
            raise InvalidInputError(
                f"{self.label}: Re exponent must be in (0, 1), got {self.m}")
        if not 0.45 <= self.m <= 0.85:
            _warnings.warn(
                f"{self.label}: Re exponent {self.m} outside the usual "
                "0.45-0.85 survey band", ValidityWarning, stacklevel=3)


def eval_catalog(entry: PowerLawCorrelation, re: float,
                 pr: float | None = None, h_over_d: float | None = None,
                 xn_over_d: float | None = None) -> Prediction:
    """Evaluate a catalog correlation at a Reynolds number.

    Pr (and the geometric ratios for multi-factor forms) are required exactly
    when the entry carries the matching exponent; a Re outside the stated
    validity range is flagged, not rejected.
    """
    if re <= 0 or not math.isfinite(re):
        raise InvalidInputError(f"re must be > 0, got {re}")
    warns = []
    if entry.re_min is not None and re < entry.re_min:
        warns.append(f"re_below_validity:{re:g}<{entry.re_min:g}")
    if entry.re_max is not None and re > entry.re_max:
        warns.append(f"re_above_validity:{re:g}>{entry.re_max:g}")
    value = entry.c * re ** entry.m
    for exponent, arg, name in ((entry.pr_exponent, pr, "pr"),
                                (entry.h_over_d_exponent, h_over_d, "h_over_d"),
                                (entry.xn_over_d_exponent, xn_over_d, "xn_over_d")):
        if exponent is None:
            continue
        if arg is None:
            raise InvalidInputError(f"{entry.label}: {name} required")
        value *= arg ** exponent
    return Prediction(value, tuple(warns))


_CATALOG_HEADER = ["label", "c", "m", "pr_exponent", "re_min", "re_max", "basis"]


def load_catalog(path: str | Path) -> dict[str, PowerLawCorrelation]:
    """Load a correlation catalog CSV.

    Header ``label,c,m,pr_exponent,re_min,re_max,basis``; multi-factor rows
    carry a ``form`` column naming the template (``power_law`` or
    ``power_law_hd_xn``) plus ``h_over_d_exponent``/``xn_over_d_exponent``.
    """
    with open(path, newline="") as fh:
        return _parse_catalog(fh)


def _parse_catalog(fh) -> dict[str, PowerLawCorrelation]:
    reader = csv.DictReader(fh)
    missing = set(_CATALOG_HEADER) - set(reader.fieldnames or [])
    if missing:
        raise InvalidInputError(f"catalog missing columns: {sorted(missing)}")

    def opt(row, key):
        raw = (row.get(key) or "").strip()
        return float(raw) if raw else None

    out: dict[str, PowerLawCorrelation] = {}
    for row in reader:
        out[row["label"]] = PowerLawCorrelation(
            label=row["label"],
            c=float(row["c"]),
            m=float(row["m"]),
            basis=Basis(row["basis"]),
            pr_exponent=opt(row, "pr_exponent"),
            re_min=opt(row, "re_min"),
            re_max=opt(row, "re_max"),
            h_over_d_exponent=opt(row, "h_over_d_exponent"),
            xn_over_d_exponent=opt(row, "xn_over_d_exponent"),
        )
    return out


def builtin_catalog() -> dict[str, PowerLawCorrelation]:
    """Correlations measured in this project plus the literature survey."""
    path = resources.files("jetcool").joinpath("data", "nu_catalog.csv")
    with path.open(newline="") as fh:
        return _parse_catalog(fh)


# ---------------------------------------------------------------------------
# fitting

class FitResult(NamedTuple):
    """Raw power-law fit: Nu = c * Re^m with log-space residual norm.

    The exponent is reported as fitted (a flat trend legitimately yields
    m = 0); converting to a catalog entry applies the catalog's exponent
    validation.
    """

    c: float
    m: float
    residual: float
    re_min: float
    re_max: float

    def correlation(self, label: str = "fit",
                    basis: Basis = Basis.JUNCTION) -> PowerLawCorrelation:
        return PowerLawCorrelation(label=label, c=self.c, m=self.m,
                                   basis=basis, re_min=self.re_min,
                                   re_max=self.re_max)


def fit_power_law(points: Sequence[tuple[float, float]]) -> FitResult:
    """Least-squares fit of ln(nu) = ln(c) + m*ln(re).

    Requires >= 2 points with distinct Re; all samples positive.
    """
    if len(points) < 2:
        raise UnderdeterminedFitError("need at least 2 points")
    re = np.asarray([p[0] for p in points], dtype=float)
    nu = np.asarray([p[1] for p in points], dtype=float)
    if np.any(re <= 0) or np.any(nu <= 0):
        raise InvalidInputError("all samples must be positive")
    if np.unique(re).size < 2:
        raise UnderdeterminedFitError("need at least 2 distinct Re values")
    A = np.column_stack([np.ones_like(re), np.log(re)])
    coef, *_ = np.linalg.lstsq(A, np.log(nu), rcond=None)
    resid = float(np.linalg.norm(A @ coef - np.log(nu)))
    return FitResult(c=float(np.exp(coef[0])), m=float(coef[1]),
                     residual=resid, re_min=float(re.min()),
                     re_max=float(re.max()))


# ---------------------------------------------------------------------------
# per-nozzle hotspot fits (1 mm pitch cells; d in mm, m_nz in mL/min)

@dataclass(frozen=True)
class HotspotHtcModel:
    """htc = c * d^d_exp * m_nz^(m_exp + m_exp_d * d)  [W/(m2.K)].

    Fitted per-cell heat transfer against nozzle diameter d [mm] and
    per-nozzle flow m_nz [mL/min]; the flow exponent itself varies with d.
    """

    c: float = 8440.0
    d_exp: float = -0.4157
    m_exp: float = 0.7843
    m_exp_d: float = -0.6624
    pitch_mm: float = 1.0

    def evaluate(self, d_mm: float, m_nz_mlpm: float) -> float:
        if d_mm <= 0 or m_nz_mlpm < 0:
            raise InvalidInputError("d must be > 0 and m_nz >= 0")
        return (self.c * d_mm ** self.d_exp
                * m_nz_mlpm ** (self.m_exp + self.m_exp_d * d_mm))

    def flow_for_htc(self, d_mm: float, htc: float) -> float:
        """Per-nozzle flow needed to reach htc at diameter d.

        Only defined while the flow exponent stays positive (d below
        -m_exp/m_exp_d); beyond that more flow does not raise htc.
        """
        if d_mm <= 0 or htc <= 0:
            raise InvalidInputError("d and htc must be > 0")
        exponent = self.m_exp + self.m_exp_d * d_mm
        if exponent <= 0:
            raise InvalidInputError(
                f"flow exponent {exponent:g} <= 0 at d = {d_mm} mm")
        return (htc / (self.c * d_mm ** self.d_exp)) ** (1.0 / exponent)


@dataclass(frozen=True)
class NozzlePressureModel:
    """dp = c * d^d_exp * m_nz^m_exp (same unit convention as the htc fit).

    Only ratios and equality constraints of this fit are load bearing; the
    absolute pressure unit is the one implicit in the fitted constant.
    """

    c: float = 0.655
    d_exp: float = -4.0
    m_exp: float = 1.76
    pitch_mm: float = 1.0

    def evaluate(self, d_mm: float, m_nz_mlpm: float) -> float:
        if d_mm <= 0 or m_nz_mlpm < 0:
            raise InvalidInputError("d must be > 0 and m_nz >= 0")
        return self.c * d_mm ** self.d_exp * m_nz_mlpm ** self.m_exp

    def flow_for_dp(self, d_mm: float, dp: float) -> float:
        """Invert the fit: per-nozzle flow driven through diameter d at dp."""
        if d_mm <= 0 or dp < 0:
            raise InvalidInputError("d must be > 0 and dp >= 0")
        return (dp / (self.c * d_mm ** self.d_exp)) ** (1.0 / self.m_exp)


def fit_htc_model(points: Sequence[tuple[float, float, float]],
                  pitch_mm: float = 1.0) -> HotspotHtcModel:
    """Fit the two-variable per-cell htc power law in log space.

    points are (d_mm, m_nz_mlpm, htc) samples; the model is linear in
    (1, ln d, ln m, d*ln m) after taking logs, so an ordinary least-squares
    solve recovers all four constants. Requires >= 4 samples spanning at
    least two diameters and two flows.
    """
    if len(points) < 4:
        raise UnderdeterminedFitError("need at least 4 points")
    d = np.asarray([p[0] for p in points], dtype=float)
    m = np.asarray([p[1] for p in points], dtype=float)
    htc = np.asarray([p[2] for p in points], dtype=float)
    if np.any(d <= 0) or np.any(m <= 0) or np.any(htc <= 0):
        raise InvalidInputError("all samples must be positive")
    if np.unique(d).size < 2 or np.unique(m).size < 2:
        raise UnderdeterminedFitError("need >= 2 distinct diameters and flows")
    A = np.column_stack([np.ones_like(d), np.log(d), np.log(m), d * np.log(m)])
    coef, *_ = np.linalg.lstsq(A, np.log(htc), rcond=None)
    return HotspotHtcModel(c=float(np.exp(coef[0])), d_exp=float(coef[1]),
                           m_exp=float(coef[2]), m_exp_d=float(coef[3]),
                           pitch_mm=pitch_mm)
