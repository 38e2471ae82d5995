"""
Closed-form function algebra of generalized Gaussians.

An atom is

    f(t) = c * exp(-pi (t - a)^T M (t - a)) * exp(2 pi i b . t)

with complex symmetric ``M`` whose real part is positive definite.  Finite
sums of atoms are closed under translation, modulation, reflection,
conjugation, dilation, chirp multiplication and the Fourier transform, and
their inner products and STFT values have closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GaussAtom",
    "AtomSum",
    "gaussian_integral",
    "sqrt_det",
    "translate",
    "modulate",
    "reflect",
    "fourier",
    "inverse_fourier",
    "dilate",
    "chirp",
    "conjugate",
    "inner_product",
    "norm",
    "stft",
    "evaluate",
    "standard_gaussian",
]

SYM_TOL = 1e-12
PD_TOL = 1e-12
COND_MAX = 1e12


def sqrt_det(M: np.ndarray) -> complex:
    """Square root of ``det M`` continued from the positive real axis.

    Valid for complex symmetric ``M`` with positive definite real part: the
    eigenvalues of ``Re M + s i Im M`` stay in the open right half-plane for
    ``s`` in [0, 1], so the product of principal square roots of the
    eigenvalues is the continuous branch.
    """
    eig = np.linalg.eigvals(np.asarray(M, dtype=complex))
    return complex(np.prod(np.sqrt(eig)))


def gaussian_integral(M: np.ndarray, w: np.ndarray, const=0.0):
    """``int exp(-pi t^T M t + 2 pi w . t + const) dt`` over R^d.

    ``w`` may carry a leading batch axis; ``const`` broadcasts against it.
    The result is ``det(M)^{-1/2} exp(pi w^T M^{-1} w + const)``.
    """
    M = np.asarray(M, dtype=complex)
    w = np.asarray(w, dtype=complex)
    Minv = np.linalg.inv(M)
    quad = np.einsum("...i,ij,...j->...", w, Minv, w)
    return np.exp(np.pi * quad + const) / sqrt_det(M)


@dataclass(frozen=True, eq=False)
class GaussAtom:
    """One generalized Gaussian ``amp * exp(-pi (t-center)^T width (t-center) + 2 pi i freq.t)``."""

    amp: complex
    center: np.ndarray
    freq: np.ndarray
    width: np.ndarray

    def __post_init__(self):
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        d = center.shape[0]
        freq = np.atleast_1d(np.asarray(self.freq, dtype=float))
        width = np.asarray(self.width, dtype=complex)
        if width.ndim == 0:
            width = width * np.eye(d)
        if freq.shape != (d,) or width.shape != (d, d):
            raise ValueError(
                f"inconsistent atom shapes: center {center.shape}, freq {freq.shape}, width {width.shape}"
            )
        scale = max(1.0, float(np.max(np.abs(width))))
        if np.max(np.abs(width - width.T)) > SYM_TOL * scale:
            raise ValueError("width matrix must be symmetric")
        if np.min(np.linalg.eigvalsh(width.real)) <= PD_TOL:
            raise ValueError("real part of the width matrix must be positive definite")
        for arr in (center, freq, width):
            arr.setflags(write=False)
        object.__setattr__(self, "amp", complex(self.amp))
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "freq", freq)
        object.__setattr__(self, "width", width)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        s = t - self.center
        quad = np.einsum("...i,ij,...j->...", s, self.width, s)
        return self.amp * np.exp(-np.pi * quad + 2j * np.pi * (t @ self.freq))

    def replace(self, **kw) -> "GaussAtom":
        fields = dict(amp=self.amp, center=self.center, freq=self.freq, width=self.width)
        fields.update(kw)
        return GaussAtom(**fields)

    def same_fields(self, other: "GaussAtom", tol: float = 0.0) -> bool:
        return (
            abs(self.amp - other.amp) <= tol
            and np.allclose(self.center, other.center, rtol=0, atol=tol)
            and np.allclose(self.freq, other.freq, rtol=0, atol=tol)
            and np.allclose(self.width, other.width, rtol=0, atol=tol)
        )


class AtomSum:
    """Finite sum of Gaussian atoms of a common dimension.

    The empty sum is the zero function of dimension ``dim``.
    """

    __slots__ = ("dim", "atoms")

    def __init__(self, atoms: Iterable[GaussAtom] = (), dim: int | None = None):
        atoms = tuple(atoms)
        if dim is None:
            if not atoms:
                raise ValueError("dimension required for an empty atom sum")
            dim = atoms[0].dim
        if any(a.dim != dim for a in atoms):
            raise ValueError("all atoms must share the dimension")
        self.dim = int(dim)
        self.atoms = atoms

    @classmethod
    def zero(cls, dim: int) -> "AtomSum":
        return cls((), dim)

    @classmethod
    def gaussian(cls, width=1.0, dim: int = 1, amp=1.0, center=None, freq=None) -> "AtomSum":
        """Single atom ``amp * exp(-pi width |t - center|^2) e^{2 pi i freq.t}``."""
        center = np.zeros(dim) if center is None else center
        freq = np.zeros(dim) if freq is None else freq
        return cls([GaussAtom(amp, center, freq, width)], dim)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __call__(self, t) -> np.ndarray:
        return evaluate(self, t)

    def __add__(self, other: "AtomSum") -> "AtomSum":
        _check_dims(self, other)
        return AtomSum(self.atoms + other.atoms, self.dim)

    def __mul__(self, scalar) -> "AtomSum":
        return AtomSum((a.replace(amp=a.amp * scalar) for a in self.atoms), self.dim)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def map(self, fn) -> "AtomSum":
        return AtomSum((fn(a) for a in self.atoms), self.dim)

    def same_fields(self, other: "AtomSum", tol: float = 0.0) -> bool:
        """Atom-by-atom equality of the stored parameters."""
        return (
            self.dim == other.dim
            and len(self) == len(other)
            and all(a.same_fields(b, tol) for a, b in zip(self.atoms, other.atoms))
        )

    def __repr__(self):
        return f"AtomSum(dim={self.dim}, atoms={len(self.atoms)})"


def standard_gaussian(dim: int = 1) -> AtomSum:
    """``exp(-pi |t|^2)``, a fixed point of the Fourier transform."""
    return AtomSum.gaussian(1.0, dim)


def _check_dims(f: AtomSum, g: AtomSum):
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")


def _vec(x, d: int) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (d,):
        raise ValueError(f"expected a vector of length {d}, got shape {x.shape}")
    return x


# -- operators ---------------------------------------------------------------


def translate(f: AtomSum, tau) -> AtomSum:
    """``t -> f(t - tau)``."""
    tau = _vec(tau, f.dim)
    return f.map(
        lambda a: a.replace(
            amp=a.amp * np.exp(-2j * np.pi * (a.freq @ tau)), center=a.center + tau
        )
    )


def modulate(f: AtomSum, nu) -> AtomSum:
    """``t -> exp(2 pi i nu.t) f(t)``."""
    nu = _vec(nu, f.dim)
    return f.map(lambda a: a.replace(freq=a.freq + nu))


def reflect(f: AtomSum) -> AtomSum:
    """``t -> f(-t)``."""
    return f.map(lambda a: a.replace(center=-a.center, freq=-a.freq))


def conjugate(f: AtomSum) -> AtomSum:
    """Pointwise complex conjugate."""
    return f.map(
        lambda a: a.replace(amp=np.conj(a.amp), freq=-a.freq, width=np.conj(a.width))
    )


def _fourier_atom(a: GaussAtom) -> GaussAtom:
    M = a.width
    if np.linalg.cond(M) > COND_MAX:
        raise ValueError("width matrix is numerically singular")
    Minv = np.linalg.inv(M)
    Minv = 0.5 * (Minv + Minv.T)
    amp = a.amp * np.exp(2j * np.pi * (a.freq @ a.center)) / sqrt_det(M)
    return GaussAtom(amp, a.freq, -a.center, Minv)


def fourier(f: AtomSum) -> AtomSum:
    """Unitary Fourier transform ``int f(t) exp(-2 pi i w.t) dt``."""
    return f.map(_fourier_atom)


def inverse_fourier(f: AtomSum) -> AtomSum:
    """Inverse Fourier transform, ``R F``."""
    return reflect(fourier(f))


def dilate(f: AtomSum, A) -> AtomSum:
    """``x -> |det A|^{-1/2} f(A^{-1} x)``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape != (f.dim, f.dim):
        raise ValueError(f"dilation matrix must be {f.dim}x{f.dim}")
    det = np.linalg.det(A)
    if abs(det) <= 1e-12:
        raise ValueError("dilation matrix is singular")
    Ainv = np.linalg.inv(A)
    scale = abs(det) ** -0.5

    def one(a: GaussAtom) -> GaussAtom:
        W = Ainv.T @ a.width @ Ainv
        return GaussAtom(a.amp * scale, A @ a.center, Ainv.T @ a.freq, 0.5 * (W + W.T))

    return f.map(one)


def chirp(f: AtomSum, C) -> AtomSum:
    """``x -> exp(pi i x^T C x) f(x)`` for real symmetric ``C``."""
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if C.shape != (f.dim, f.dim):
        raise ValueError(f"chirp matrix must be {f.dim}x{f.dim}")
    if np.max(np.abs(C - C.T)) > SYM_TOL * max(1.0, np.max(np.abs(C))):
        raise ValueError("chirp matrix must be symmetric")

    def one(a: GaussAtom) -> GaussAtom:
        # x^T C x = (x-a)^T C (x-a) + 2 (C a).x - a^T C a
        return GaussAtom(
            a.amp * np.exp(-1j * np.pi * (a.center @ C @ a.center)),
            a.center,
            a.freq + C @ a.center,
            a.width - 1j * C,
        )

    return f.map(one)


# -- evaluation and integrals --------------------------------------------------


def evaluate(f: AtomSum, t) -> np.ndarray:
    """Values of ``f`` at points ``t`` (shape ``(..., d)`` or ``(d,)``)."""
    t = np.asarray(t, dtype=float)
    if t.shape[-1:] != (f.dim,):
        if f.dim == 1 and t.ndim <= 1:
            t = t[..., None]
        else:
            raise ValueError(f"points of shape {t.shape} for a {f.dim}-dim function")
    out = np.zeros(t.shape[:-1], dtype=complex)
    for a in f.atoms:
        out = out + a(t)
    return out


def _pair_terms(p: GaussAtom, q: GaussAtom):
    # p(t) conj(q(t)) = exp(-pi t^T K t + 2 pi w.t + const)
    K = p.width + np.conj(q.width)
    w = p.width @ p.center + np.conj(q.width) @ q.center + 1j * (p.freq - q.freq)
    const = -np.pi * (
        p.center @ p.width @ p.center + q.center @ np.conj(q.width) @ q.center
    )
    return K, w, const


def inner_product(f: AtomSum, g: AtomSum) -> complex:
    """``<f, g> = int f conj(g)`` via the closed-form Gram double sum."""
    _check_dims(f, g)
    total = 0j
    for p in f.atoms:
        for q in g.atoms:
            K, w, const = _pair_terms(p, q)
            total += p.amp * np.conj(q.amp) * gaussian_integral(K, w, const)
    return complex(total)


def norm(f: AtomSum) -> float:
    return float(np.sqrt(max(inner_product(f, f).real, 0.0)))


def stft(f: AtomSum, g: AtomSum, x, omega) -> np.ndarray:
    """``V_g f(x, omega) = <f, M_omega T_x g>`` in closed form.

    ``x`` and ``omega`` are single points of shape ``(d,)`` or batches of
    shape ``(n, d)``; the return value is a scalar or an array of length n.
    """
    _check_dims(f, g)
    d = f.dim
    x = np.asarray(x, dtype=float)
    omega = np.asarray(omega, dtype=float)
    scalar = x.ndim <= 1 and omega.ndim <= 1
    x = x.reshape(-1, d)
    omega = omega.reshape(-1, d)
    x, omega = np.broadcast_arrays(x, omega)
    out = np.zeros(x.shape[0], dtype=complex)
    for p in f.atoms:
        for q in g.atoms:
            # window atom after T_x then M_omega:
            #   amp  q.amp * exp(-2 pi i q.freq . x), center q.center + x,
            #   freq q.freq + omega
            Mp, Mq = p.width, np.conj(q.width)
            K = Mp + Mq
            cq = q.center + x
            w = (Mp @ p.center)[None, :] + cq @ Mq.T + 1j * (p.freq - q.freq - omega)
            const = -np.pi * (
                p.center @ Mp @ p.center + np.einsum("ni,ij,nj->n", cq, Mq, cq)
            )
            amp = p.amp * np.conj(q.amp) * np.exp(2j * np.pi * (x @ q.freq))
            out += amp * gaussian_integral(K, w, const)
    return complex(out[0]) if scalar else out
