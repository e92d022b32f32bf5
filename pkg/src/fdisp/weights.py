"""Soliton-tail weight functions and related spatial fields.

The increasing weight ``varphi`` integrates the profile ``<s+omega>^(-2*gamma)``
up to ``sigma . x``; its companion ``phi_weight`` is ``<sigma.x+omega>^(-gamma)``,
so that ``d varphi / dx_j = sigma_j * phi_weight**2``.  Both accept a rescaling
``m_scale`` that evaluates them at ``x/m_scale``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, quad

from .grid import GridSpec, validate_field
from .spectral import partial_derivative

__all__ = [
    "WeightParams",
    "admissible_gamma_interval",
    "varphi",
    "phi_weight",
    "varphi_on_grid",
    "phi_on_grid",
    "cutoff_chi",
    "scaling_generator",
    "F_field",
    "f_decay_check",
]


def admissible_gamma_interval(alpha: float) -> tuple[float, float]:
    """Open-closed interval (1/2, (alpha+1)/2] of admissible gamma."""
    return 0.5, (alpha + 1.0) / 2.0


@dataclass(frozen=True)
class WeightParams:
    """Parameters (sigma, omega, gamma, m_scale) of the tail weights.

    ``sigma`` is the direction vector (length = grid dim), ``omega`` the
    shift inside the bracket, ``gamma`` the decay exponent and ``m_scale``
    the rescaling M >= 0 applied as x -> x/M.
    """

    sigma: tuple[float, ...]
    omega: float = 0.0
    gamma: float = 1.5
    m_scale: float = 1.0
    alpha: float | None = None  # when set, gamma is validated against it

    def __post_init__(self):
        if all(s == 0.0 for s in self.sigma):
            raise ValueError("sigma must not be the zero vector")
        if self.m_scale <= 0:
            raise ValueError("m_scale must be positive")
        if self.alpha is not None:
            lo, hi = admissible_gamma_interval(self.alpha)
            if not (lo < self.gamma <= hi):
                raise ValueError(
                    f"gamma={self.gamma} outside admissible interval "
                    f"({lo}, {hi}] for alpha={self.alpha}"
                )

    def projection(self, point) -> np.ndarray:
        """sigma . (x / m_scale) for a point or tuple of coordinate arrays."""
        comps = np.atleast_1d(np.asarray(point, dtype=object)) if isinstance(point, (tuple, list)) else None
        if comps is None:
            p = np.asarray(point, dtype=float)
            comps = [p[..., j] for j in range(len(self.sigma))] if p.ndim and p.shape[-1] == len(self.sigma) else [p]
        acc = 0.0
        for s, c in zip(self.sigma, comps):
            acc = acc + s * np.asarray(c, dtype=float)
        return acc / self.m_scale


_SQRTPI_TAIL_CACHE: dict[float, float] = {}


def _profile_integral(t: np.ndarray, gamma: float) -> np.ndarray:
    """G(t) = integral_{-inf}^{t} <s>^(-2*gamma) ds, vectorized in t."""
    t = np.asarray(t, dtype=float)
    if gamma == 1.0:
        return np.arctan(t) + np.pi / 2.0
    if gamma == 1.5:
        return t / np.sqrt(1.0 + t * t) + 1.0
    # general gamma: half-line total + odd part by adaptive quadrature
    if gamma not in _SQRTPI_TAIL_CACHE:
        total, _ = quad(lambda s: (1.0 + s * s) ** (-gamma), 0.0, np.inf,
                        epsabs=1e-13, epsrel=1e-12)
        _SQRTPI_TAIL_CACHE[gamma] = total
    half = _SQRTPI_TAIL_CACHE[gamma]

    def single(u: float) -> float:
        val, _ = quad(lambda s: (1.0 + s * s) ** (-gamma), 0.0, abs(u),
                      epsabs=1e-13, epsrel=1e-12)
        return half + math.copysign(val, u)

    return np.vectorize(single, otypes=[float])(t)


def varphi(point, w: WeightParams) -> np.ndarray | float:
    """Increasing tail weight: integral of <s+omega>^(-2*gamma) up to sigma.x/M."""
    t = w.projection(point) + w.omega
    out = _profile_integral(t, w.gamma)
    return float(out) if np.ndim(out) == 0 else out


def phi_weight(point, w: WeightParams) -> np.ndarray | float:
    """Decaying companion weight <sigma.x/M + omega>^(-gamma)."""
    t = w.projection(point) + w.omega
    out = (1.0 + t * t) ** (-w.gamma / 2.0)
    return float(out) if np.ndim(out) == 0 else out


def varphi_on_grid(grid: GridSpec, w: WeightParams) -> np.ndarray:
    return np.broadcast_to(varphi(grid.coords, w), grid.shape).copy()


def phi_on_grid(grid: GridSpec, w: WeightParams) -> np.ndarray:
    return np.broadcast_to(phi_weight(grid.coords, w), grid.shape).copy()


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    a = np.zeros_like(t)
    pos = t > 0
    a[pos] = np.exp(-1.0 / t[pos])
    b = np.zeros_like(t)
    neg = t < 1
    b[neg] = np.exp(-1.0 / (1.0 - t[neg]))
    return a / (a + b)


def cutoff_chi(radius, A: float = 1.0) -> np.ndarray | float:
    """Smooth radial cutoff: 1 on |x| <= A, 0 on |x| >= 2A.

    Built from the standard exp(-1/t) bump; accepts |x| values directly.
    """
    if A < 1.0:
        raise ValueError(f"cutoff scale A must be >= 1, got {A}")
    r = np.abs(np.asarray(radius, dtype=float)) / A
    out = 1.0 - _smooth_step(r - 1.0)
    return float(out) if np.ndim(out) == 0 else out


def scaling_generator(grid: GridSpec, f: np.ndarray) -> np.ndarray:
    """Scaling-symmetry generator: f + x . grad f, x from the box center."""
    validate_field(grid, f)
    out = f.copy()
    for axis in range(grid.dim):
        out += grid.coords[axis] * partial_derivative(grid, f, axis)
    return out


def F_field(grid: GridSpec, lam_q: np.ndarray, tail_tol: float = 1e-4) -> np.ndarray:
    """Antiderivative along x1 of ``lam_q`` (usually Lambda Q), from the left edge.

    Requires a 2D grid whose box is large enough that the integrand has
    decayed at the seam (checked against ``tail_tol``).
    """
    if grid.dim != 2:
        raise ValueError("F_field requires a 2D grid")
    validate_field(grid, lam_q)
    edge = max(np.max(np.abs(lam_q[0, :])), np.max(np.abs(lam_q[-1, :])))
    if edge > tail_tol:
        raise ValueError(
            f"integrand tail {edge:.3e} at the box edge exceeds {tail_tol:.1e}; "
            "box too small for the x1-antiderivative"
        )
    return cumulative_trapezoid(lam_q, dx=grid.spacing[0], axis=0, initial=0.0)


def f_decay_check(grid: GridSpec, F: np.ndarray, fit_lo_frac: float = 0.15,
                  fit_hi_frac: float = 0.45) -> dict:
    """Fit the decay in |x2| of sup_x1 |F|; returns exponent and profile.

    Log-log least squares over |x2| in [lo, hi] * half-length.
    """
    half = grid.box_length[1] / 2.0
    x2 = grid.axes[1]
    prof = np.max(np.abs(F), axis=0)
    lo, hi = fit_lo_frac * half, fit_hi_frac * half
    mask = (np.abs(x2) >= lo) & (np.abs(x2) <= hi) & (prof > 1e-14)
    slope, _ = np.polyfit(np.log(np.abs(x2[mask])), np.log(prof[mask]), 1)
    return {"exponent": float(-slope), "profile": prof, "fit_window": (lo, hi)}
