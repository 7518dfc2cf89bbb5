"""
Field Persistence

Binary format HBF1 (little endian):

    magic     4 bytes  b"HBF1"
    version   u16
    d         u16
    n_t       u32
    n_x       u32
    t_max     f64
    L         f64
    q         u16      (0 for white noise, which carries no model)
    H         (d + 1) x f64
    values    f64, row-major over (t, x_1, ..., x_d)

The field kind is not stored; it follows from the number of values, which
differs between sheet, white-noise and solution layouts on the same grid.

CSV export writes one row per lattice point: coordinates first, value last.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from hermburg.kernels.params import HermiteParams
from hermburg.noise.grid import FieldKind, FieldSample, GridSpec, SeedSpec

MAGIC = b"HBF1"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHHIIddH")


class FieldFormatError(ValueError):
    """A file is not a readable HBF1 field."""


def encode_field(sample: FieldSample) -> bytes:
    """Serialize a field to HBF1 bytes."""
    grid = sample.grid
    if sample.params is not None:
        q, hurst = sample.params.q, sample.params.hurst
    else:
        q, hurst = 0, (0.0,) * (grid.d + 1)
    header = _HEADER.pack(
        MAGIC, FORMAT_VERSION, grid.d, grid.n_t, grid.n_x, grid.t_max, grid.L, q
    )
    hurst_bytes = struct.pack(f"<{grid.d + 1}d", *hurst)
    body = np.ascontiguousarray(sample.values, dtype="<f8").tobytes(order="C")
    return header + hurst_bytes + body


def decode_field(
    data: bytes, seed: SeedSpec | None = None, nu: float | None = None
) -> FieldSample:
    """
    Parse HBF1 bytes.

    Args:
        data: File contents
        seed: Seed to attach (the format does not store it)
        nu: Viscosity of the recovered model; HBF1 does not store it, so
            callers pass the experiment's value (model default when None)

    Raises:
        FieldFormatError: bad magic or version, truncated payload, or a
            value count that fits no field layout
    """
    if len(data) < _HEADER.size or data[:4] != MAGIC:
        raise FieldFormatError("not an HBF1 field (bad magic)")
    magic, version, d, n_t, n_x, t_max, length, q = _HEADER.unpack_from(data)
    if version != FORMAT_VERSION:
        raise FieldFormatError(f"unsupported HBF1 version {version}")
    offset = _HEADER.size + 8 * (d + 1)
    if len(data) < offset:
        raise FieldFormatError(f"truncated HBF1 header: {len(data)} bytes")
    hurst = struct.unpack_from(f"<{d + 1}d", data, _HEADER.size)

    payload = len(data) - offset
    if payload % 8:
        raise FieldFormatError(f"truncated HBF1 payload: {payload} bytes")
    try:
        grid = GridSpec(t_max=t_max, n_t=n_t, L=length, n_x=n_x, d=d)
        model: dict[str, object] = {"q": q, "hurst": hurst, "d": d}
        if nu is not None:
            model["nu"] = nu
        params = HermiteParams(**model) if q > 0 else None
    except ValueError as e:
        raise FieldFormatError(f"invalid HBF1 header: {e}") from e
    kind = _infer_kind(grid, payload // 8)

    values = np.frombuffer(data, dtype="<f8", offset=offset).astype(np.float64)
    try:
        return FieldSample(
            grid=grid,
            values=values.reshape(grid.extent(kind)),
            seed=seed or SeedSpec(),
            kind=kind,
            params=params,
        )
    except ValueError as e:
        raise FieldFormatError(f"unreadable HBF1 values: {e}") from e


def _infer_kind(grid: GridSpec, count: int) -> FieldKind:
    for kind in (FieldKind.SHEET, FieldKind.SOLUTION, FieldKind.WHITE_NOISE):
        if int(np.prod(grid.extent(kind))) == count:
            return kind
    raise FieldFormatError(f"{count} values do not match any field layout on {grid}")


def write_field(sample: FieldSample, path: str | Path) -> Path:
    """Write a field in HBF1 format, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_field(sample))
    return path


def read_field(
    path: str | Path, seed: SeedSpec | None = None, nu: float | None = None
) -> FieldSample:
    """Read an HBF1 field."""
    return decode_field(Path(path).read_bytes(), seed=seed, nu=nu)


def field_coordinates(sample: FieldSample) -> NDArray[np.float64]:
    """Coordinates of every entry of sample.values, shape (size, d + 1)."""
    grid = sample.grid
    if sample.kind == FieldKind.SHEET:
        axes = [grid.axis_nodes(i) for i in range(grid.d + 1)]
    elif sample.kind == FieldKind.WHITE_NOISE:
        axes = [grid.axis_nodes(i)[:-1] for i in range(grid.d + 1)]
    else:
        axes = [grid.times()] + [grid.space(periodic=True)] * grid.d
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def write_field_csv(sample: FieldSample, path: str | Path) -> Path:
    """Write one CSV row per lattice point: t, x1, ..., xd, value."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = ["t"] + [f"x{i}" for i in range(1, sample.grid.d + 1)] + ["value"]
    table = np.column_stack((field_coordinates(sample), sample.values.ravel()))
    np.savetxt(path, table, delimiter=",", header=",".join(columns), comments="", fmt="%.17g")
    return path
