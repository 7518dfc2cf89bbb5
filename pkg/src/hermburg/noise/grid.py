"""
Grids, Seeds and Field Samples

GridSpec is the uniform space-time lattice {k t_max / n_t} x {j L / n_x}^d.
SeedSpec maps (master_seed, stream_index, path) onto a numpy SeedSequence,
and FieldSample binds a realized array to the grid and seed that produced it.

Array layouts by kind:
    sheet:        vertex values, shape (n_t + 1, n_x + 1, ..., n_x + 1)
    white-noise:  cell increments, shape (n_t, n_x, ..., n_x)
    solution:     periodic profiles, shape (n_t + 1, n_x)   (d = 1)
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from hermburg.core.errors import GridMismatchError

if TYPE_CHECKING:
    from hermburg.kernels.params import HermiteParams

MAX_SEED = 2**64 - 1


class FieldKind(str, Enum):
    """What a FieldSample holds."""

    SHEET = "sheet"
    WHITE_NOISE = "white-noise"
    SOLUTION = "solution"


class GridSpec(BaseModel):
    """Uniform space-time lattice; all quantities dimensionless."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    t_max: float = Field(default=1.0, gt=0.0, description="Time horizon")
    n_t: int = Field(default=8, ge=1, description="Number of time steps")
    L: float = Field(default=1.0, gt=0.0, description="Spatial extent per dimension")
    n_x: int = Field(default=8, ge=1, description="Spatial steps per dimension")
    d: int = Field(default=1, ge=1, description="Spatial dimension")

    @property
    def dt(self) -> float:
        """Time step."""
        return self.t_max / self.n_t

    @property
    def dx(self) -> float:
        """Spatial step."""
        return self.L / self.n_x

    @property
    def axis_extents(self) -> tuple[float, ...]:
        """Extent of every coordinate, time first."""
        return (self.t_max,) + (self.L,) * self.d

    @property
    def axis_counts(self) -> tuple[int, ...]:
        """Number of cells along every coordinate, time first."""
        return (self.n_t,) + (self.n_x,) * self.d

    @property
    def axis_steps(self) -> tuple[float, ...]:
        """Cell width along every coordinate, time first."""
        return (self.dt,) + (self.dx,) * self.d

    @property
    def cell_volume(self) -> float:
        """Space-time volume of one cell."""
        return self.dt * self.dx**self.d

    def times(self) -> NDArray[np.float64]:
        """Time levels 0, dt, ..., t_max."""
        return np.arange(self.n_t + 1) * self.dt

    def space(self, periodic: bool = False) -> NDArray[np.float64]:
        """Spatial nodes; the closing node L is dropped on the torus."""
        count = self.n_x if periodic else self.n_x + 1
        return np.arange(count) * self.dx

    def axis_nodes(self, axis: int) -> NDArray[np.float64]:
        """Vertex coordinates along one axis (0 is time)."""
        return np.arange(self.axis_counts[axis] + 1) * self.axis_steps[axis]

    def extent(self, kind: FieldKind) -> tuple[int, ...]:
        """Array shape of a field of the given kind."""
        if kind == FieldKind.SHEET:
            return tuple(n + 1 for n in self.axis_counts)
        if kind == FieldKind.WHITE_NOISE:
            return self.axis_counts
        return (self.n_t + 1,) + (self.n_x,) * self.d

    def lattice_index(self, point: Sequence[float], tol: float = 1e-9) -> tuple[int, ...] | None:
        """Index of a lattice vertex at point, or None if point is off the lattice."""
        if len(point) != self.d + 1:
            return None
        index = []
        for coord, step, count in zip(point, self.axis_steps, self.axis_counts):
            k = round(coord / step)
            if abs(k * step - coord) > tol * max(1.0, abs(coord)) or not 0 <= k <= count:
                return None
            index.append(int(k))
        return tuple(index)

    def scaled(self, factors: Sequence[float]) -> GridSpec:
        """
        Grid with coordinates stretched by factors (time first).

        A single L is shared by all spatial axes, so spatial factors must agree.
        """
        if len(factors) != self.d + 1:
            raise ValueError(f"need {self.d + 1} scale factors, got {len(factors)}")
        spatial = set(factors[1:])
        if len(spatial) != 1:
            raise ValueError("spatial scale factors must be equal")
        if any(f <= 0 for f in factors):
            raise ValueError("scale factors must be positive")
        return self.model_copy(
            update={"t_max": self.t_max * factors[0], "L": self.L * factors[1]}
        )

    def require_same(self, other: GridSpec) -> None:
        """Raise GridMismatchError unless other describes the same lattice."""
        if self != other:
            raise GridMismatchError(f"grid mismatch: {self!r} vs {other!r}")


class SeedSpec(BaseModel):
    """
    Reproducible random stream.

    The generator is PCG64 seeded by
    SeedSequence(entropy=master_seed, spawn_key=(stream_index, *path)),
    which is injective in (stream_index, path) for a fixed master seed and
    is exactly what SeedSequence.spawn would produce.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    master_seed: int = Field(default=20240101, ge=0, le=MAX_SEED)
    stream_index: int = Field(default=0, ge=0, le=MAX_SEED)
    path: tuple[int, ...] = Field(default=(), description="Sub-stream path below the stream")

    def sequence(self) -> np.random.SeedSequence:
        """SeedSequence for this stream."""
        return np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=(self.stream_index, *self.path)
        )

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        return np.random.Generator(np.random.PCG64(self.sequence()))

    def spawn(self, index: int) -> SeedSpec:
        """Independent child stream number index."""
        if index < 0:
            raise ValueError("child index must be >= 0")
        return self.model_copy(update={"path": (*self.path, index)})


@dataclass
class FieldSample:
    """A realized field on a grid together with the seed that produced it."""

    grid: GridSpec
    values: NDArray[np.float64]
    seed: SeedSpec
    kind: FieldKind
    params: HermiteParams | None = None
    """Model that generated the field; recorded in the binary header."""

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        expected = self.grid.extent(self.kind)
        if self.values.shape != expected:
            raise GridMismatchError(
                f"{self.kind.value} field has shape {self.values.shape}, grid expects {expected}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    def at(self, point: Sequence[float]) -> float:
        """Value at a lattice vertex (sheet fields)."""
        index = self.grid.lattice_index(point)
        if index is None:
            raise ValueError(f"{tuple(point)} is not a lattice point")
        return float(self.values[index])

    def to_dict(self) -> dict:
        """Metadata for serialization (values are written separately)."""
        return {
            "kind": self.kind.value,
            "grid": self.grid.model_dump(),
            "seed": self.seed.model_dump(mode="json"),
            "shape": list(self.values.shape),
        }
