"""
Numerical checks of spectrogram identities on atom-sum functions.

Everything here evaluates closed forms from :mod:`phaseless.atoms`; the
grid-sampled path lives in :mod:`phaseless.sampled`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import atoms
from .atoms import AtomSum, GaussAtom
from .lattice import Lattice, density, enumerate_points, fundamental_domain_grid

__all__ = [
    "GridSpec",
    "EqualityReport",
    "PeriodizationBounds",
    "spectrogram",
    "check_equality",
    "check_equality_on_set",
    "phase_distance",
    "qx_grid",
    "qx_points",
    "periodization",
    "periodization_bounds",
    "bargmann_transform",
    "bargmann_residual",
    "bargmann_window",
    "modulus_equal_on_grid",
    "is_real_on_grid",
    "probe_grid",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform tensor grid with ``num[j]`` points from ``start[j]`` to ``stop[j]``."""

    start: tuple
    stop: tuple
    num: tuple

    @classmethod
    def cube(cls, lo: float, hi: float, num: int, dim: int) -> "GridSpec":
        return cls((lo,) * dim, (hi,) * dim, (num,) * dim)

    @property
    def dim(self) -> int:
        return len(self.num)

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(a, b, n) for a, b, n in zip(self.start, self.stop, self.num)]

    def points(self) -> np.ndarray:
        """All grid points, shape ``(prod(num), dim)``, first axis slowest."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass(frozen=True)
class EqualityReport:
    n_points: int
    max_abs_diff: float
    max_rel_diff: float
    worst_point: np.ndarray
    reference_scale: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_rel_diff <= self.tol

    def to_dict(self) -> dict:
        return {
            "n_points": self.n_points,
            "max_abs_diff": self.max_abs_diff,
            "max_rel_diff": self.max_rel_diff,
            "worst_point": [float(v) for v in self.worst_point],
            "reference_scale": self.reference_scale,
            "tol": self.tol,
            "passed": self.passed,
        }


def _split(z, d: int):
    z = np.atleast_2d(np.asarray(z, dtype=float))
    if z.shape[-1] != 2 * d:
        raise ValueError(f"time-frequency points must have {2 * d} coordinates")
    return z[:, :d], z[:, d:]


def spectrogram(f: AtomSum, g: AtomSum, z) -> np.ndarray:
    """``|V_g f(x, omega)|`` at ``z = (x, omega)``; batched over leading axis."""
    x, w = _split(z, f.dim)
    out = np.abs(atoms.stft(f, g, x, w))
    return float(out[0]) if np.ndim(z) == 1 else out


def check_equality(f1: AtomSum, f2: AtomSum, g: AtomSum, points, tol: float = 1e-9) -> EqualityReport:
    """Compare ``|V_g f1|`` and ``|V_g f2|`` on a point set."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] == 0:
        raise ValueError("empty point set")
    s1 = spectrogram(f1, g, points)
    s2 = spectrogram(f2, g, points)
    diff = np.abs(s1 - s2)
    scale = float(max(np.max(s1), np.max(s2)))
    i = int(np.argmax(diff))
    max_abs = float(diff[i])
    rel = max_abs / scale if scale > 0 else max_abs
    return EqualityReport(len(points), max_abs, rel, points[i].copy(), scale, tol)


def check_equality_on_set(pair, points, tol: float = 1e-9) -> EqualityReport:
    """Spectrogram equality for a counterexample pair on the given points."""
    return check_equality(pair.f1, pair.f2, pair.window, points, tol)


def phase_distance(f1: AtomSum, f2: AtomSum) -> float:
    """``min_{|nu|=1} ||f1 - nu f2||^2 = ||f1||^2 + ||f2||^2 - 2 |<f1, f2>|``."""
    n1 = atoms.inner_product(f1, f1).real
    n2 = atoms.inner_product(f2, f2).real
    cross = abs(atoms.inner_product(f1, f2))
    return float(max(n1 + n2 - 2 * cross, 0.0))


def qx_grid(pair, x, omega_grid: GridSpec) -> np.ndarray:
    """``| |V_g f1(x, w)|^2 - |V_g f2(x, w)|^2 |`` over a frequency grid.

    Returns an array of shape ``omega_grid.num``.
    """
    return qx_points(pair, x, omega_grid.points()).reshape(omega_grid.num)


def qx_points(pair, x, omegas) -> np.ndarray:
    """``Q_x`` at arbitrary frequencies ``omegas`` of shape ``(m, d)``."""
    g = pair.window
    d = g.dim
    w = np.asarray(omegas, dtype=float).reshape(-1, d)
    xs = np.broadcast_to(np.asarray(x, dtype=float).reshape(d), w.shape)
    a = np.abs(atoms.stft(pair.f1, g, xs, w)) ** 2
    b = np.abs(atoms.stft(pair.f2, g, xs, w)) ** 2
    return np.abs(a - b)


# -- periodization -------------------------------------------------------------


class PeriodizationBounds(NamedTuple):
    lower: float
    upper: float
    radius: float

    def bounded_below(self, threshold: float = 1e-8) -> bool:
        return self.lower > threshold


def periodization(phi: AtomSum, lat: Lattice, t, radius: float) -> np.ndarray:
    """Truncated ``sum_{|t + lam| <= radius} |F phi(t + lam)|^2`` at points ``t``."""
    t = np.atleast_2d(np.asarray(t, dtype=float))
    F = atoms.fourier(phi)
    diam = float(np.sum(np.linalg.norm(lat.gen, axis=0)))
    lams = enumerate_points(lat, radius + diam)
    out = np.zeros(len(t))
    for i, ti in enumerate(t):
        pts = ti[None, :] + lams
        pts = pts[np.linalg.norm(pts, axis=1) <= radius]
        if len(pts):
            out[i] = np.sum(np.abs(atoms.evaluate(F, pts)) ** 2)
    return out


def _tail_bound(F: AtomSum, lat: Lattice, radius: float) -> float:
    """Upper bound for the periodization terms with ``|t + lam| > radius``.

    Shells of unit thickness; lattice points per shell are bounded by the
    density times the shell volume thickened by the cell diameter.
    """
    n = lat.dim
    diam = float(np.sum(np.linalg.norm(lat.gen, axis=0)))
    rho = density(lat)
    ball = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    terms = [
        (abs(a.amp), float(np.linalg.norm(a.center)), float(np.min(np.linalg.eigvalsh(a.width.real))))
        for a in F.atoms
    ]
    total = 0.0
    for k in range(4000):
        r = radius + k
        peak = sum(A * math.exp(-math.pi * mu * max(r - c, 0.0) ** 2) for A, c, mu in terms)
        count = rho * ball * ((r + 1 + diam) ** n - max(r - diam, 0.0) ** n) + 1
        contrib = count * peak**2
        total += contrib
        if k > 5 and contrib < 1e-30 * max(total, 1e-300):
            break
    return total


def periodization_bounds(
    phi: AtomSum, lat: Lattice, m: int = 16, radius: float | None = None, rel_tail: float = 1e-14
) -> PeriodizationBounds:
    """Min and max of the truncated periodization over a fundamental-domain grid.

    Parameters
    ----------
    phi : AtomSum
    lat : Lattice
        Lattice summed over (the reciprocal lattice in the Bessel criterion).
    m : int
        Grid points per axis of the fundamental domain, at least 8.
    radius : float, optional
        Truncation radius.  Chosen automatically when omitted.
    rel_tail : float
        Admissible tail bound relative to the largest partial sum.

    Raises
    ------
    ValueError
        If the tail beyond ``radius`` cannot be certified; the message names
        the radius that would suffice.
    """
    if m < 8:
        raise ValueError("m must be at least 8")
    F = atoms.fourier(phi)
    grid = fundamental_domain_grid(lat, m)

    def bounds_at(r):
        vals = periodization(phi, lat, grid, r)
        return float(vals.min()), float(vals.max())

    def required_radius():
        r = 1.0
        while True:
            lo, hi = bounds_at(r)
            if hi > 0 and _tail_bound(F, lat, r) < rel_tail * hi:
                return r
            r *= 1.5
            if r > 1e4:
                raise ValueError("periodization tail does not decay")

    if radius is None:
        radius = required_radius()
    lo, hi = bounds_at(radius)
    if not (hi > 0 and _tail_bound(F, lat, radius) < rel_tail * hi):
        raise ValueError(
            f"truncation radius {radius} too small; need at least {required_radius():.6g}"
        )
    return PeriodizationBounds(lo, hi, float(radius))


# -- Bargmann transform --------------------------------------------------------


def bargmann_window() -> AtomSum:
    """``2^{1/4} exp(-pi t^2)``, unit norm."""
    return AtomSum.gaussian(1.0, 1, amp=2**0.25)


def bargmann_transform(f: AtomSum, z) -> np.ndarray:
    """``B f(z) = 2^{1/4} int f(t) exp(2 pi t z - pi t^2 - pi z^2 / 2) dt``."""
    if f.dim != 1:
        raise ValueError("Bargmann transform is implemented for d = 1")
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    for a in f.atoms:
        M = a.width[0, 0]
        c, b = a.center[0], a.freq[0]
        w = M * c + 1j * b + z
        const = -np.pi * M * c * c - np.pi * z * z / 2
        out = out + a.amp * gaussian_1d(M + 1, w, const)
    return 2**0.25 * out


def gaussian_1d(K, w, const):
    return np.exp(np.pi * w * w / K + const) / np.sqrt(complex(K))


def bargmann_residual(f: AtomSum, points) -> float:
    """Max of ``| |V_phi f(x, -w)| - exp(-pi |z|^2 / 2) |B f(z)| |`` with ``z = x + i w``."""
    if f.dim != 1:
        raise ValueError("Bargmann cross-check is implemented for d = 1")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if len(f) == 0:
        return 0.0
    x, w = points[:, :1], points[:, 1:]
    lhs = np.abs(atoms.stft(f, bargmann_window(), x, -w))
    z = x[:, 0] + 1j * w[:, 0]
    rhs = np.exp(-np.pi * np.abs(z) ** 2 / 2) * np.abs(bargmann_transform(f, z))
    return float(np.max(np.abs(lhs - rhs)))


# -- pointwise checks ------------------------------------------------------------


def modulus_equal_on_grid(f1: AtomSum, f2: AtomSum, grid: GridSpec, tol: float = 1e-12) -> bool:
    t = grid.points()
    a, b = np.abs(f1(t)), np.abs(f2(t))
    return bool(np.max(np.abs(a - b)) <= tol * np.max(a))


def is_real_on_grid(f: AtomSum, grid: GridSpec, tol: float = 1e-10) -> bool:
    v = f(grid.points())
    return bool(np.max(np.abs(v.imag)) <= tol * np.max(np.abs(v)))


def probe_grid(f: AtomSum, num: int = 41, pad: float = 4.0) -> GridSpec:
    """Cube grid covering the atom centers with ``pad`` units of margin."""
    if len(f) == 0:
        return GridSpec.cube(-pad, pad, num, f.dim)
    reach = max(float(np.max(np.abs(a.center))) for a in f.atoms) + pad
    return GridSpec.cube(-reach, reach, num, f.dim)
