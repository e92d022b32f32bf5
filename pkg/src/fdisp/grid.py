"""Periodic computational grids.

A :class:`GridSpec` describes a centered periodic box in one or two
dimensions together with its DFT wavenumber lattice.  All fields in this
package are plain ``numpy`` arrays sampled row-major over the grid; the
grid object carries the geometry they are measured against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = ["GridSpec", "make_grid_1d", "make_grid_2d", "validate_field"]


@dataclass(frozen=True)
class GridSpec:
    """Centered periodic box with an even number of points per axis.

    Parameters
    ----------
    dim : int
        Spatial dimension, 1 or 2.
    npoints : tuple of int
        Points per axis; each entry even and >= 16.
    box_length : tuple of float
        Period per axis.  Coordinates run over ``[-L/2, L/2)``.
    """

    dim: int
    npoints: tuple[int, ...]
    box_length: tuple[float, ...]

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if len(self.npoints) != self.dim or len(self.box_length) != self.dim:
            raise ValueError("npoints/box_length length must equal dim")
        for n in self.npoints:
            if n < 16 or n % 2 != 0:
                raise ValueError(f"points per axis must be even and >= 16, got {n}")
        for L in self.box_length:
            if not (L > 0):
                raise ValueError(f"box_length must be positive, got {L}")

    @property
    def shape(self) -> tuple[int, ...]:
        return self.npoints

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(L / n for L, n in zip(self.box_length, self.npoints))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def num_points(self) -> int:
        return int(np.prod(self.npoints))

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        """Per-axis coordinates, measured from the box center."""
        return tuple(
            -L / 2 + d * np.arange(n)
            for L, d, n in zip(self.box_length, self.spacing, self.npoints)
        )

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays broadcast to the full grid shape (ij indexing)."""
        if self.dim == 1:
            return (self.axes[0],)
        return tuple(np.meshgrid(*self.axes, indexing="ij"))

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        """Per-axis wavenumber lattice k = 2*pi*m/L in DFT ordering."""
        return tuple(
            2.0 * np.pi * np.fft.fftfreq(n, d=d)
            for n, d in zip(self.npoints, self.spacing)
        )

    @cached_property
    def kgrid(self) -> tuple[np.ndarray, ...]:
        if self.dim == 1:
            return (self.wavenumbers[0],)
        return tuple(np.meshgrid(*self.wavenumbers, indexing="ij"))

    @cached_property
    def kmod(self) -> np.ndarray:
        """Pointwise |k| over the wavenumber lattice."""
        if self.dim == 1:
            return np.abs(self.kgrid[0])
        return np.hypot(self.kgrid[0], self.kgrid[1])

    @cached_property
    def radius(self) -> np.ndarray:
        """Pointwise |x| from the box center."""
        if self.dim == 1:
            return np.abs(self.coords[0])
        return np.hypot(self.coords[0], self.coords[1])

    @cached_property
    def nyquist_mask(self) -> tuple[np.ndarray, ...]:
        """Per-axis boolean masks selecting that axis' Nyquist plane."""
        masks = []
        for axis, n in enumerate(self.npoints):
            m = np.zeros(n, dtype=bool)
            m[n // 2] = True
            shape = [1] * self.dim
            shape[axis] = n
            masks.append(m.reshape(shape))
        return tuple(masks)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask: True on retained (low) modes."""
        keep = np.ones(self.shape, dtype=bool)
        for axis, n in enumerate(self.npoints):
            m = np.abs(np.fft.fftfreq(n) * n) < n / 3.0
            shape = [1] * self.dim
            shape[axis] = n
            keep &= m.reshape(shape)
        return keep

    def half_length(self) -> float:
        return min(L / 2 for L in self.box_length)

    def integrate(self, values: np.ndarray) -> float:
        """Box quadrature (trapezoid = Riemann sum on a periodic grid)."""
        return float(np.sum(values) * self.cell_volume)

    def inner(self, f: np.ndarray, g: np.ndarray) -> float:
        """Discrete L2 inner product."""
        return float(np.sum(f * g) * self.cell_volume)

    def norm2(self, f: np.ndarray) -> float:
        """Discrete L2 norm."""
        return float(np.sqrt(self.inner(f, f)))


def make_grid_1d(n: int = 4096, length: float = 512.0) -> GridSpec:
    return GridSpec(dim=1, npoints=(n,), box_length=(float(length),))


def make_grid_2d(n: int = 256, length: float = 96.0, ny: int | None = None,
                 ly: float | None = None) -> GridSpec:
    ny = n if ny is None else ny
    ly = length if ly is None else ly
    return GridSpec(dim=2, npoints=(n, ny), box_length=(float(length), float(ly)))


def validate_field(grid: GridSpec, values: np.ndarray) -> np.ndarray:
    """Check a real field against its grid; returns the array unchanged."""
    values = np.asarray(values)
    if values.shape != grid.shape:
        raise ValueError(f"field shape {values.shape} does not match grid {grid.shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError("field contains non-finite values")
    return values
