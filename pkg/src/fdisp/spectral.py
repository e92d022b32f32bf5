"""Fourier multiplier operators on a periodic box.

Conventions: forward transform is the unscaled DFT sum, the inverse
divides by the point count (numpy default).  Zero wavenumbers of
``|k|**-1``-type multipliers map to 0, and odd multipliers (``i*k_axis``)
zero the Nyquist plane of their axis so that real fields stay real.
"""

from __future__ import annotations

import numpy as np

from .grid import GridSpec, validate_field

__all__ = [
    "forward_transform",
    "inverse_transform",
    "apply_multiplier",
    "fractional_laplacian",
    "riesz_transform",
    "dispersion_apply",
    "partial_derivative",
    "inverse_modulus",
    "half_laplacian_power",
    "dealias",
    "sobolev_half_norm",
    "homogeneous_half_energy",
    "mean_value",
    "resample_scaled_shifted",
]


def forward_transform(grid: GridSpec, f: np.ndarray) -> np.ndarray:
    """DFT coefficients of a real field (complex array, Hermitian symmetric)."""
    validate_field(grid, f)
    return np.fft.fftn(f)


def inverse_transform(grid: GridSpec, fhat: np.ndarray) -> np.ndarray:
    """Real field from DFT coefficients (imaginary round-off discarded)."""
    return np.fft.ifftn(fhat).real


def apply_multiplier(grid: GridSpec, f: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    """Inverse DFT of ``symbol * fhat``; symbol shaped like the k-lattice."""
    return np.fft.ifftn(symbol * np.fft.fftn(f)).real


def _odd_axis_symbol(grid: GridSpec, axis: int, symbol: np.ndarray) -> np.ndarray:
    """Zero an odd multiplier on its axis' Nyquist plane (realness guard)."""
    out = symbol.copy()
    out = np.where(grid.nyquist_mask[axis], 0.0, out)
    return out


def fractional_laplacian(grid: GridSpec, f: np.ndarray, alpha: float) -> np.ndarray:
    """|nabla|^alpha f via the spectral multiplier |k|^alpha, alpha in [1, 2]."""
    if not 1.0 <= alpha <= 2.0:
        raise ValueError(f"alpha must lie in [1, 2], got {alpha}")
    validate_field(grid, f)
    return apply_multiplier(grid, f, grid.kmod ** alpha)


def half_laplacian_power(grid: GridSpec, f: np.ndarray, power: float) -> np.ndarray:
    """|nabla|^power f for any power >= 0 (no range guard; internal use)."""
    return apply_multiplier(grid, f, grid.kmod ** power)


def riesz_transform(grid: GridSpec, f: np.ndarray, axis: int = 0) -> np.ndarray:
    """Riesz transform along ``axis``: multiplier -i*k_axis/|k|, 0 at k=0."""
    validate_field(grid, f)
    kmod = grid.kmod
    with np.errstate(divide="ignore", invalid="ignore"):
        sym = np.where(kmod > 0, -1j * grid.kgrid[axis] / np.where(kmod > 0, kmod, 1.0), 0.0)
    sym = _odd_axis_symbol(grid, axis, sym)
    return apply_multiplier(grid, f, sym)


def dispersion_apply(grid: GridSpec, f: np.ndarray, alpha: float) -> np.ndarray:
    """d/dx1 |nabla|^alpha f: skew-symmetric dispersion operator."""
    if not 1.0 <= alpha <= 2.0:
        raise ValueError(f"alpha must lie in [1, 2], got {alpha}")
    validate_field(grid, f)
    sym = 1j * grid.kgrid[0] * grid.kmod ** alpha
    sym = _odd_axis_symbol(grid, 0, sym)
    return apply_multiplier(grid, f, sym)


def partial_derivative(grid: GridSpec, f: np.ndarray, axis: int = 0) -> np.ndarray:
    """Spectral d/dx_axis."""
    validate_field(grid, f)
    sym = _odd_axis_symbol(grid, axis, 1j * grid.kgrid[axis])
    return apply_multiplier(grid, f, sym)


def inverse_modulus(grid: GridSpec, f: np.ndarray) -> np.ndarray:
    """|nabla|^-1 f with the zero mode killed."""
    kmod = grid.kmod
    sym = np.where(kmod > 0, 1.0 / np.where(kmod > 0, kmod, 1.0), 0.0)
    return apply_multiplier(grid, f, sym)


def dealias(grid: GridSpec, f: np.ndarray) -> np.ndarray:
    """2/3-rule truncation; idempotent."""
    return inverse_transform(grid, forward_transform(grid, f) * grid.dealias_mask)


def _spectral_weight(grid: GridSpec) -> float:
    # Parseval: sum(f^2)*cellvol = sum(|fhat|^2)*cellvol/Npoints
    return grid.cell_volume / grid.num_points


def sobolev_half_norm(grid: GridSpec, f: np.ndarray) -> float:
    """H^{1/2} norm: sqrt( sum <k> |fhat|^2 * cellfactor )."""
    fhat = np.fft.fftn(f)
    bracket = np.sqrt(1.0 + grid.kmod ** 2)
    return float(np.sqrt(np.sum(bracket * np.abs(fhat) ** 2) * _spectral_weight(grid)))


def homogeneous_half_energy(grid: GridSpec, f: np.ndarray, alpha: float) -> float:
    """integral of | |nabla|^{alpha/2} f |^2."""
    fhat = np.fft.fftn(f)
    return float(np.sum(grid.kmod ** alpha * np.abs(fhat) ** 2) * _spectral_weight(grid))


def mean_value(grid: GridSpec, f: np.ndarray) -> float:
    return float(np.mean(f))


def spectral_upsample(grid: GridSpec, f: np.ndarray, factor: int = 2):
    """Zero-pad the spectrum to a ``factor``-times finer grid (same box).

    Returns ``(fine_grid, fine_f)``; exact for band-limited fields.
    """
    from .grid import GridSpec as _GS

    fine = _GS(dim=grid.dim, npoints=tuple(n * factor for n in grid.npoints),
               box_length=grid.box_length)
    fhat = np.fft.fftshift(np.fft.fftn(f))
    pad = []
    for n in grid.npoints:
        total = n * (factor - 1)
        pad.append((total // 2, total - total // 2))
    fhat = np.pad(fhat, pad)
    out = np.fft.ifftn(np.fft.ifftshift(fhat)).real * factor ** grid.dim
    return fine, out


def resample_scaled_shifted(grid: GridSpec, f: np.ndarray, lam: float,
                            shift: tuple[float, ...]) -> np.ndarray:
    """Evaluate the trigonometric interpolant of ``f`` at ``lam*x + shift``.

    Returns samples of x -> f_trig(lam*x + shift) on the same grid, where
    f_trig is the exact trigonometric interpolant of the periodic field.
    Shifts wrap periodically; lam > 1 samples the interpolant at compressed
    points (spectral content beyond the band of f is the caller's risk).
    """
    if lam <= 0:
        raise ValueError("scaling factor must be positive")
    validate_field(grid, f)
    fhat = np.fft.fftn(f)
    out = fhat
    # Separable evaluation matrices E[m, k] = exp(i k (lam*x_m + z - x_first)) / n;
    # the interpolant is anchored at the first sample point of each axis.
    for axis in range(grid.dim):
        k = grid.wavenumbers[axis]
        x = grid.axes[axis]
        e = np.exp(1j * np.outer(lam * x + shift[axis] - x[0], k)) / grid.npoints[axis]
        out = np.moveaxis(np.tensordot(e, out, axes=([1], [axis])), 0, axis)
    return out.real
