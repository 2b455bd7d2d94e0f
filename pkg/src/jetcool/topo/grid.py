"""Rectangular staggered grid with tagged boundary segments.

Cells are (nx, ny) with spacing (dx, dy); boundary segments live on the four
sides and are addressed in boundary-cell indices (j for left/right, i for
bottom/top). Any boundary face not covered by a segment is a no-slip wall.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError

SIDES = ("left", "right", "bottom", "top")
KINDS = ("wall", "inlet", "outlet_velocity", "outlet_pressure")
VELOCITY_KINDS = ("wall", "inlet", "outlet_velocity")


@dataclass(frozen=True)
class Segment:
    """One tagged boundary interval.

    ``value`` is the mean normal speed [m/s] (positive; the kind fixes the
    direction: inlets point into the domain, velocity outlets out of it).
    ``profile`` is "constant" or "parabolic" (zero at the segment edges,
    peak 1.5x mean at its center). Pressure outlets carry no profile.
    """

    side: str
    lo: int
    hi: int
    kind: str
    profile: str = "constant"
    value: float = 0.0

    def __post_init__(self) -> None:
        if self.side not in SIDES:
            raise InvalidInputError(f"unknown side {self.side!r}")
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown boundary kind {self.kind!r}")
        if self.hi <= self.lo or self.lo < 0:
            raise InvalidInputError(
                f"bad segment range [{self.lo}, {self.hi})")
        if self.profile not in ("constant", "parabolic"):
            raise InvalidInputError(f"unknown profile {self.profile!r}")
        if self.kind in ("inlet", "outlet_velocity") and self.value < 0:
            raise InvalidInputError("segment speed must be >= 0")

    def node_values(self) -> np.ndarray:
        """Normal speeds at the face midpoints of the segment."""
        n = self.hi - self.lo
        if self.kind in ("wall", "outlet_pressure"):
            return np.zeros(n)
        if self.profile == "constant":
            return np.full(n, self.value)
        xi = (np.arange(n) + 0.5) / n
        return 6.0 * self.value * xi * (1.0 - xi)


class Grid2D:
    """Staggered-grid domain: u on vertical faces, v on horizontal faces,
    p in cell centers."""

    def __init__(self, nx: int, ny: int, dx: float, dy: float,
                 segments: list[Segment] | tuple[Segment, ...] = ()):
        if nx < 1 or ny < 1:
            raise InvalidInputError("nx and ny must be >= 1")
        if dx <= 0 or dy <= 0:
            raise InvalidInputError("dx and dy must be > 0")
        self.nx, self.ny = int(nx), int(ny)
        self.dx, self.dy = float(dx), float(dy)
        self.segments = tuple(segments)

        side_len = {"left": ny, "right": ny, "bottom": nx, "top": nx}
        # per-side kind codes and normal-velocity component values
        self.side_kind = {s: np.zeros(side_len[s], dtype=int) for s in SIDES}
        self.side_value = {s: np.zeros(side_len[s]) for s in SIDES}
        covered = {s: np.zeros(side_len[s], dtype=bool) for s in SIDES}

        for seg in self.segments:
            if seg.hi > side_len[seg.side]:
                raise InvalidInputError(
                    f"segment [{seg.lo}, {seg.hi}) exceeds {seg.side} side "
                    f"length {side_len[seg.side]}")
            span = slice(seg.lo, seg.hi)
            if covered[seg.side][span].any():
                raise InvalidInputError(
                    f"overlapping segments on side {seg.side!r}")
            covered[seg.side][span] = True
            self.side_kind[seg.side][span] = KINDS.index(seg.kind)
            speeds = seg.node_values()
            # convert speed to the signed velocity component on that side
            into = seg.kind == "inlet"
            if seg.side == "left":
                comp = speeds if into else -speeds
            elif seg.side == "right":
                comp = -speeds if into else speeds
            elif seg.side == "bottom":
                comp = speeds if into else -speeds
            else:
                comp = -speeds if into else speeds
            self.side_value[seg.side][span] = comp

        kinds = [seg.kind for seg in self.segments]
        if "inlet" not in kinds:
            raise InvalidInputError("grid needs at least one inlet segment")
        if not ({"outlet_velocity", "outlet_pressure"} & set(kinds)):
            raise InvalidInputError("grid needs at least one outlet segment")

        if not self.has_pressure_boundary:
            flux = self.boundary_flux_imbalance()
            scale = max(abs(self.inlet_flux()), 1e-300)
            if abs(flux) > 1e-12 * scale:
                raise InvalidInputError(
                    "all-velocity boundaries must balance: net flux "
                    f"{flux:g} vs inlet {scale:g}")

    # -- geometry ----------------------------------------------------------

    @property
    def lx(self) -> float:
        return self.nx * self.dx

    @property
    def ly(self) -> float:
        return self.ny * self.dy

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def has_pressure_boundary(self) -> bool:
        return any(seg.kind == "outlet_pressure" for seg in self.segments)

    def face_length(self, side: str) -> float:
        return self.dy if side in ("left", "right") else self.dx

    # -- flux bookkeeping --------------------------------------------------

    def inlet_flux(self) -> float:
        """Total prescribed inflow [m2/s per unit depth]."""
        total = 0.0
        for seg in self.segments:
            if seg.kind != "inlet":
                continue
            total += seg.node_values().sum() * self.face_length(seg.side)
        return total

    def boundary_flux_imbalance(self) -> float:
        """Net prescribed inflow minus outflow over velocity segments."""
        total = 0.0
        for seg in self.segments:
            if seg.kind not in ("inlet", "outlet_velocity"):
                continue
            s = seg.node_values().sum() * self.face_length(seg.side)
            total += s if seg.kind == "inlet" else -s
        return total

    def outlet_segments(self) -> list[Segment]:
        return [s for s in self.segments
                if s.kind in ("outlet_velocity", "outlet_pressure")]


@dataclass(frozen=True)
class DensityField:
    """Design field: eps[i, j] in [0, 1] per cell (1 = fluid, 0 = solid)."""

    eps: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.eps, dtype=float)
        object.__setattr__(self, "eps", arr)
        if arr.ndim != 2:
            raise InvalidInputError("eps must be a 2D array")
        if np.any(arr < -1e-12) or np.any(arr > 1 + 1e-12):
            raise InvalidInputError("eps must lie in [0, 1]")

    @property
    def volume_fraction(self) -> float:
        return float(self.eps.mean())

    @staticmethod
    def uniform(grid: Grid2D, value: float) -> "DensityField":
        return DensityField(np.full((grid.nx, grid.ny), float(value)))
