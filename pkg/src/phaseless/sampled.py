"""
Grid-sampled functions and a discretized STFT.

This is the path for windows without a closed form.  On a uniform grid
``t_n = origin + h n`` the STFT is approximated by the Riemann sum

    V_g f(x, w) ~ h^d sum_n f(t_n) conj(g(t_n - x)) exp(-2 pi i w.t_n)

which requires ``x`` to be a whole number of steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atoms import AtomSum
from .sequences import CoeffSeq

__all__ = [
    "SampledWindow",
    "sample",
    "symmetric_grid",
    "named_window",
    "stft_numeric",
    "numeric_pair",
    "reflect_sampled",
    "shift_sampled",
]


@dataclass(frozen=True, eq=False)
class SampledWindow:
    """Values of a function on ``origin + step * index``, index in ``[0, shape)``."""

    origin: np.ndarray
    step: float
    values: np.ndarray

    def __post_init__(self):
        origin = np.atleast_1d(np.asarray(self.origin, dtype=float))
        values = np.asarray(self.values, dtype=complex)
        if self.step <= 0:
            raise ValueError("grid step must be positive")
        if values.ndim != origin.shape[0]:
            raise ValueError("values array rank must equal the dimension")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "step", float(self.step))

    @property
    def dim(self) -> int:
        return self.origin.shape[0]

    @property
    def shape(self) -> tuple:
        return self.values.shape

    def axes(self):
        return [o + self.step * np.arange(n) for o, n in zip(self.origin, self.shape)]

    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def same_grid(self, other: "SampledWindow") -> bool:
        return (
            self.shape == other.shape
            and self.step == other.step
            and np.array_equal(self.origin, other.origin)
        )

    def with_values(self, values) -> "SampledWindow":
        return SampledWindow(self.origin, self.step, values)


def symmetric_grid(half_extent: float, step: float, dim: int):
    """Origin and shape of an odd grid symmetric about zero."""
    n = int(round(half_extent / step))
    return np.full(dim, -n * step), (2 * n + 1,) * dim


def sample(f: AtomSum, origin, step: float, shape) -> SampledWindow:
    """Sample an atom sum on a grid."""
    origin = np.atleast_1d(np.asarray(origin, dtype=float))
    axes = [o + step * np.arange(n) for o, n in zip(origin, shape)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    return SampledWindow(origin, step, f(pts).reshape(shape))


def _triangle(u):
    return np.clip(1 - np.abs(u), 0, None)


def _hann(u):
    return np.where(np.abs(u) < 1, np.cos(np.pi * u / 2) ** 2, 0.0)


def _box(u):
    return (np.abs(u) <= 1).astype(float)


def _gauss(u):
    return np.exp(-np.pi * u**2)


_PROFILES = {"triangle": _triangle, "hann": _hann, "box": _box, "gaussian": _gauss}


def named_window(name: str, dim: int, step: float, half_extent: float, scale: float = 1.0) -> SampledWindow:
    """Separable real window ``prod_j p(t_j / scale)`` on a symmetric grid."""
    try:
        profile = _PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown window {name!r}; choose from {sorted(_PROFILES)}") from None
    origin, shape = symmetric_grid(half_extent, step, dim)
    axis = origin[0] + step * np.arange(shape[0])
    vals = profile(axis / scale)
    out = vals
    for _ in range(dim - 1):
        out = np.multiply.outer(out, vals)
    return SampledWindow(origin, step, out)


def _index_shift(step: float, v, what: str) -> np.ndarray:
    k = np.atleast_1d(np.asarray(v, dtype=float)) / step
    kr = np.round(k)
    if np.max(np.abs(k - kr)) > 1e-9 * max(1.0, np.max(np.abs(k))):
        raise ValueError(f"{what} {v!r} is not a whole number of grid steps")
    return kr.astype(int)


def shift_sampled(f: SampledWindow, tau) -> SampledWindow:
    """``t -> f(t - tau)`` for grid-aligned ``tau``; zero fill at the edges."""
    s = _index_shift(f.step, tau, "shift")
    out = np.zeros_like(f.values)
    src, dst = [], []
    for k, n in zip(s, f.shape):
        if abs(k) >= n:
            return f.with_values(out)
        src.append(slice(max(0, -k), n - max(0, k)))
        dst.append(slice(max(0, k), n - max(0, -k)))
    out[tuple(dst)] = f.values[tuple(src)]
    return f.with_values(out)


def reflect_sampled(f: SampledWindow) -> SampledWindow:
    """``t -> f(-t)``; needs a grid symmetric about zero."""
    far = f.origin + f.step * (np.array(f.shape) - 1)
    if not np.allclose(far, -f.origin, rtol=0, atol=1e-12 * max(1.0, f.step)):
        raise ValueError("reflection needs a grid symmetric about zero")
    return f.with_values(f.values[(slice(None, None, -1),) * f.dim])


def stft_numeric(f: SampledWindow, g: SampledWindow, x, omegas) -> np.ndarray:
    """Riemann-sum STFT ``V_g f(x, w)`` for each ``w`` in ``omegas``.

    Uses an FFT when every frequency lies on the reciprocal grid
    ``k / (N h)``, direct summation otherwise.

    Parameters
    ----------
    f, g : SampledWindow
        Must share the grid.
    x : array_like, shape (d,)
        Whole number of grid steps.
    omegas : array_like, shape (m, d)
    """
    if not f.same_grid(g):
        raise ValueError("f and g must be sampled on the same grid")
    d = f.dim
    omegas = np.asarray(omegas, dtype=float).reshape(-1, d)
    prod = f.values * np.conj(shift_sampled(g, x).values)
    h = f.step
    N = np.array(f.shape)
    k = omegas * N * h
    kr = np.round(k)
    if np.all(np.abs(k - kr) <= 1e-9):
        spec = np.fft.fftn(prod)
        idx = tuple((kr.astype(int) % N).T)
        phase = np.exp(-2j * np.pi * omegas @ f.origin)
        return h**d * phase * spec[idx]
    axes = f.axes()
    facs = [np.exp(-2j * np.pi * np.outer(omegas[:, j], axes[j])) for j in range(d)]
    tmp = np.tensordot(facs[0], prod, axes=([1], [0]))
    for j in range(1, d):
        tmp = np.einsum("mn...,mn->m...", tmp, facs[j])
    return h**d * tmp


def numeric_pair(seq: CoeffSeq, window: SampledWindow):
    """Sampled ``sum c_k T_{lam_k} R g`` and its conjugate-sequence partner."""
    rg = reflect_sampled(window)
    f1 = np.zeros_like(window.values)
    f2 = np.zeros_like(window.values)
    for lam, c in seq.points():
        shifted = shift_sampled(rg, lam).values
        f1 = f1 + c * shifted
        f2 = f2 + np.conj(c) * shifted
    return window.with_values(f1), window.with_values(f2)
