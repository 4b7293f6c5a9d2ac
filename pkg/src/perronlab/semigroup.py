"""Grid simulator for the coupled rotation/transport Markov semigroup on the
disjoint union of the unit circle and a compactified ray.

The time evolution is exact in t; only the space is discretized (M circle
angles, N+1 ray nodes on [0, L] plus an explicit infinity node)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "SemigroupGrid",
    "GridFunction",
    "grid_function",
    "constant_one",
    "mu_pairing",
    "semigroup_apply",
    "generator_residual",
    "boundary_defect",
]


@dataclass(frozen=True)
class SemigroupGrid:
    """M equispaced circle angles, N+1 ray nodes on [0, L], one infinity node.

    M must be divisible by 4 so that the coupling functional's sample points
    +-i are exact grid angles."""

    M: int
    N: int
    L: float

    def __post_init__(self):
        if self.M < 4 or self.M % 4 != 0:
            raise ValueError("M must be a positive multiple of 4")
        if self.N < 2:
            raise ValueError("N must be >= 2")
        if self.L <= 0:
            raise ValueError("L must be positive")

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.M) / self.M

    @property
    def ray(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.N + 1)


@dataclass(frozen=True)
class GridFunction:
    """Sampled function: values on the circle, on the ray, and at infinity."""

    circle: np.ndarray
    ray: np.ndarray
    infinity: complex
    grid: SemigroupGrid

    def __post_init__(self):
        c = np.array(self.circle, dtype=complex)
        r = np.array(self.ray, dtype=complex)
        if c.shape != (self.grid.M,):
            raise ValueError("circle values must have length M")
        if r.shape != (self.grid.N + 1,):
            raise ValueError("ray values must have length N+1")
        c.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "circle", c)
        object.__setattr__(self, "ray", r)
        object.__setattr__(self, "infinity", complex(self.infinity))

    def sup_norm(self) -> float:
        return float(
            max(
                np.abs(self.circle).max(),
                np.abs(self.ray).max(),
                abs(self.infinity),
            )
        )

    def sub(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(
            self.circle - other.circle,
            self.ray - other.ray,
            self.infinity - other.infinity,
            self.grid,
        )


def grid_function(grid: SemigroupGrid,
                  on_circle: Callable[[complex], complex],
                  on_ray: Callable[[float], complex],
                  at_infinity: complex | None = None) -> GridFunction:
    """Sample callables on the grid; infinity defaults to the last ray value
    (continuity at the compactification point)."""
    circle = np.array([on_circle(np.exp(1j * t)) for t in grid.angles])
    ray = np.array([on_ray(float(x)) for x in grid.ray])
    if at_infinity is None:
        at_infinity = ray[-1]
    return GridFunction(circle, ray, complex(at_infinity), grid)


def constant_one(grid: SemigroupGrid) -> GridFunction:
    return GridFunction(np.ones(grid.M), np.ones(grid.N + 1), 1.0, grid)


def _circle_eval(f: GridFunction, thetas: np.ndarray, interp: str) -> np.ndarray:
    """Values of the circle part at arbitrary angles.

    Linear interpolation keeps nonnegative weights (order-preserving);
    trigonometric interpolation is exact on harmonics x^m, |m| <= M/2 - 1."""
    M = f.grid.M
    t = np.asarray(thetas, dtype=float) % (2.0 * math.pi)
    if interp == "linear":
        pos = t / (2.0 * math.pi) * M
        i0 = np.floor(pos).astype(int) % M
        w = pos - np.floor(pos)
        i1 = (i0 + 1) % M
        return (1.0 - w) * f.circle[i0] + w * f.circle[i1]
    if interp == "trig":
        coeffs = np.fft.fft(f.circle) / M
        freqs = np.fft.fftfreq(M, d=1.0 / M)
        return np.array(
            [np.sum(coeffs * np.exp(1j * freqs * th)) for th in t]
        )
    raise ValueError("interp must be 'linear' or 'trig'")


def mu_pairing(f: GridFunction) -> complex:
    """The coupling functional: the mean of the circle values at +-i."""
    M = f.grid.M
    return 0.5 * (f.circle[M // 4] + f.circle[3 * M // 4])


def _ray_eval(f: GridFunction, xs: np.ndarray) -> np.ndarray:
    """Linear interpolation on the ray nodes (constant beyond L)."""
    xs = np.asarray(xs, dtype=float)
    re = np.interp(xs, f.grid.ray, f.ray.real)
    im = np.interp(xs, f.grid.ray, f.ray.imag)
    return re + 1j * im


def _memory_integral(f: GridFunction, u: float, interp: str) -> complex:
    """integral_0^u e^s <mu, R(s) f|circle> ds by composite trapezoid."""
    if u <= 0:
        return 0.0
    n = max(4, int(math.ceil(u * f.grid.M / (2.0 * math.pi))) * 2)
    s = np.linspace(0.0, u, n + 1)
    M = f.grid.M
    top = 2.0 * math.pi * (M // 4) / M
    bottom = 2.0 * math.pi * (3 * M // 4) / M
    vals_top = _circle_eval(f, top - s, interp)
    vals_bot = _circle_eval(f, bottom - s, interp)
    integrand = np.exp(s) * 0.5 * (vals_top + vals_bot)
    return complex(np.trapezoid(integrand, s))


def semigroup_apply(grid: SemigroupGrid, t: float, f: GridFunction,
                    interp: str = "linear") -> GridFunction:
    """Evaluate the three-branch evolution formula at time t:
    rotation on the circle, right transport on the ray, and the exponential
    memory of the circle coupling below the transport front."""
    if f.grid != grid:
        raise ValueError("grid mismatch")
    if t < 0:
        raise ValueError("t must be >= 0")
    if t > grid.L:
        raise ValueError("ray truncation exceeded (t > L)")
    circle = _circle_eval(f, grid.angles - t, interp)
    ray = np.empty(grid.N + 1, dtype=complex)
    for j, x in enumerate(grid.ray):
        if x >= t:
            ray[j] = _ray_eval(f, np.array([x - t]))[0]
        else:
            u = t - x
            ray[j] = math.exp(-u) * (f.ray[0] + _memory_integral(f, u, interp))
    return GridFunction(circle, ray, f.infinity, grid)


def generator_residual(grid: SemigroupGrid, f: GridFunction, lam: complex,
                       h: float, interp: str = "trig") -> float:
    """sup norm of (T(h)f - f)/h - lam*f away from the discretization
    boundary (the last ray node and the infinity node are excluded)."""
    if h <= 0:
        raise ValueError("h must be positive")
    g = semigroup_apply(grid, h, f, interp=interp)
    diff_circle = (g.circle - f.circle) / h - lam * f.circle
    diff_ray = (g.ray - f.ray) / h - lam * f.ray
    return float(
        max(np.abs(diff_circle).max(), np.abs(diff_ray[:-1]).max())
    )


def boundary_defect(grid: SemigroupGrid, f: GridFunction) -> float:
    """Defect in the generator-domain boundary relation
    f'(0) = f(0) - <mu, f|circle>, with f'(0) by one-sided difference."""
    dx = grid.ray[1] - grid.ray[0]
    fprime0 = (f.ray[1] - f.ray[0]) / dx
    return float(abs(fprime0 - (f.ray[0] - mu_pairing(f))))
