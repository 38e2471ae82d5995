"""
Full-rank lattices in R^n and the matrix factorizations used to build
phaseless-STFT counterexamples.

A lattice is stored through a generating matrix whose columns are basis
vectors, ``Lambda = A Z^n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = [
    "Lattice",
    "Rectangular",
    "Separable",
    "Symplectic",
    "General",
    "standard_symplectic",
    "is_symplectic",
    "is_symplectic_blocks",
    "reciprocal",
    "density",
    "contains",
    "enumerate_points",
    "classify",
    "classify_all",
    "sl2_normalize",
    "rational_envelope",
    "fundamental_domain_grid",
    "same_lattice",
]

DET_EPS = 1e-12
MEMBER_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Lattice:
    """Lattice ``gen @ Z^n`` in R^n.

    Parameters
    ----------
    gen : array_like, shape (n, n)
        Generating matrix, columns are basis vectors.
    """

    gen: np.ndarray

    def __post_init__(self):
        gen = np.array(self.gen, dtype=float)
        if gen.ndim == 0:
            gen = gen.reshape(1, 1)
        if gen.ndim != 2 or gen.shape[0] != gen.shape[1]:
            raise ValueError(f"generating matrix must be square, got shape {gen.shape}")
        if abs(np.linalg.det(gen)) <= DET_EPS:
            raise ValueError("generating matrix is singular")
        gen.setflags(write=False)
        object.__setattr__(self, "gen", gen)

    @property
    def dim(self) -> int:
        return self.gen.shape[0]

    @classmethod
    def scaled_integer(cls, scale: float, dim: int) -> "Lattice":
        """``scale * Z^dim``."""
        return cls(scale * np.eye(dim))

    def point(self, k) -> np.ndarray:
        """Lattice point with integer coordinates ``k``."""
        return self.gen @ np.asarray(k, dtype=float)

    def coordinates(self, x) -> np.ndarray:
        """Real coordinates of ``x`` in the lattice basis."""
        return np.linalg.solve(self.gen, np.asarray(x, dtype=float))

    def __repr__(self):
        return f"Lattice({self.gen.tolist()!r})"


# -- lattice classes --------------------------------------------------------


@dataclass(frozen=True)
class Rectangular:
    diagonal: np.ndarray = field(compare=False)

    name = "rectangular"


@dataclass(frozen=True)
class Separable:
    first: Lattice = field(compare=False)
    second: Lattice = field(compare=False)

    name = "separable"


@dataclass(frozen=True)
class Symplectic:
    alpha: float = field(compare=False)
    matrix: np.ndarray = field(compare=False)

    name = "symplectic"


@dataclass(frozen=True)
class General:
    name = "general"


# -- symplectic matrices ----------------------------------------------------


def standard_symplectic(d: int) -> np.ndarray:
    """The matrix ``J = [[0, -I], [I, 0]]`` of size 2d."""
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return np.block([[zero, -eye], [eye, zero]])


def _half_dim(S) -> tuple[np.ndarray, int]:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {S.shape}")
    if S.shape[0] % 2:
        raise ValueError(f"symplectic matrices have even size, got {S.shape[0]}")
    return S, S.shape[0] // 2


def is_symplectic(S, tol: float = 1e-10) -> bool:
    """True iff ``S^T J S = J`` entrywise within ``tol``."""
    S, d = _half_dim(S)
    J = standard_symplectic(d)
    return bool(np.max(np.abs(S.T @ J @ S - J)) <= tol)


def is_symplectic_blocks(S, tol: float = 1e-10) -> bool:
    """Block criterion for ``S = [[A, B], [C, D]]``.

    ``S`` is symplectic iff ``A^T C`` and ``B^T D`` are symmetric and
    ``A^T D - C^T B = I``.
    """
    S, d = _half_dim(S)
    A, B = S[:d, :d], S[:d, d:]
    C, D = S[d:, :d], S[d:, d:]
    errs = (
        A.T @ C - C.T @ A,
        B.T @ D - D.T @ B,
        A.T @ D - C.T @ B - np.eye(d),
    )
    return bool(max(np.max(np.abs(e)) for e in errs) <= tol)


# -- basic lattice operations -----------------------------------------------


def reciprocal(lat: Lattice) -> Lattice:
    """Reciprocal lattice generated by ``A^{-T}``."""
    return Lattice(np.linalg.inv(lat.gen).T)


def density(lat: Lattice) -> float:
    """Points per unit volume, ``|det A|^{-1}``."""
    return 1.0 / abs(np.linalg.det(lat.gen))


def contains(lat: Lattice, x, tol: float = MEMBER_TOL) -> bool:
    """Membership test on the integer-coordinate residual of ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (lat.dim,):
        raise ValueError(f"point of shape {x.shape} in a {lat.dim}-dim lattice")
    k = lat.coordinates(x)
    return bool(np.max(np.abs(k - np.round(k))) <= tol)


def same_lattice(a: Lattice, b: Lattice, tol: float = 1e-10) -> bool:
    """Double containment of the two generator column sets."""
    if a.dim != b.dim:
        return False
    return all(contains(b, col, tol) for col in a.gen.T) and all(
        contains(a, col, tol) for col in b.gen.T
    )


def _coordinate_box(lat: Lattice, radius: float) -> list[int]:
    # |k_i| = |(A^-1 x)_i| <= ||row_i(A^-1)|| * ||x||
    rows = np.linalg.norm(np.linalg.inv(lat.gen), axis=1)
    return [int(np.floor(radius * r + 1e-9)) for r in rows]


def enumerate_points(lat: Lattice, radius: float, *, with_index: bool = False):
    """All lattice points of Euclidean norm ``<= radius``.

    Points on the sphere are kept up to a relative slack of ``1e-12`` so that
    round-off never drops them.  Points come in lexicographic order of their
    integer coordinates.

    Parameters
    ----------
    lat : Lattice
    radius : float
        Non-negative search radius.
    with_index : bool
        Also return the integer coordinates.

    Returns
    -------
    points : ndarray, shape (m, n)
    index : ndarray of int, shape (m, n)
        Only when ``with_index`` is set.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    box = _coordinate_box(lat, radius)
    ranges = [range(-b, b + 1) for b in box]
    idx = np.array(list(itertools.product(*ranges)), dtype=int).reshape(-1, lat.dim)
    pts = idx @ lat.gen.T
    keep = np.linalg.norm(pts, axis=1) <= radius * (1 + 1e-12) + 1e-12
    if with_index:
        return pts[keep], idx[keep]
    return pts[keep]


def shortest_nonzero(lat: Lattice) -> tuple[np.ndarray, np.ndarray]:
    """Shortest nonzero vector and its coordinates.

    Ties are broken by the lexicographic order of the coordinates.
    """
    radius = float(np.min(np.linalg.norm(lat.gen, axis=0)))
    pts, idx = enumerate_points(lat, radius, with_index=True)
    norms = np.linalg.norm(pts, axis=1)
    nonzero = np.any(idx != 0, axis=1)
    best = np.min(norms[nonzero])
    # first (lexicographic) among the minimisers
    i = np.flatnonzero(nonzero & (norms <= best * (1 + 1e-12)))[0]
    return pts[i], idx[i]


def fundamental_domain_grid(lat: Lattice, m: int) -> np.ndarray:
    """Images under the generator of the ``m^n`` grid points of ``[0, 1)^n``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    ticks = np.arange(m) / m
    unit = np.array(list(itertools.product(ticks, repeat=lat.dim)))
    return unit @ lat.gen.T


# -- factorizations ---------------------------------------------------------


def sl2_normalize(L) -> tuple[float, np.ndarray]:
    """Write a planar lattice generator as ``alpha * S`` with ``det S = 1``.

    A negative determinant is fixed first by flipping the second column,
    which leaves the generated lattice unchanged.

    Returns
    -------
    alpha : float
        ``sqrt(|det L|)``.
    S : ndarray, shape (2, 2)
        Unimodular matrix with ``alpha * S Z^2 = L Z^2``.
    """
    L = np.asarray(L, dtype=float)
    if L.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {L.shape}")
    det = np.linalg.det(L)
    if abs(det) <= DET_EPS:
        raise ValueError("matrix is singular")
    if det < 0:
        L = L @ np.diag([1.0, -1.0])
        det = -det
    alpha = float(np.sqrt(det))
    return alpha, L / alpha


def _integer_column_basis(Z: np.ndarray) -> np.ndarray:
    """Basis of the subgroup of Z^n spanned by the integer columns of ``Z``.

    Column-style Euclidean elimination (a crude Hermite form).
    """
    cols = [np.array(c, dtype=object) for c in Z.T if np.any(c != 0)]
    n = Z.shape[0]
    basis = []
    for row in range(n):
        pivots = [c for c in cols if c[row] != 0]
        rest = [c for c in cols if c[row] == 0]
        while len(pivots) > 1:
            pivots.sort(key=lambda c: abs(c[row]))
            head = pivots[0]
            reduced = [head]
            for c in pivots[1:]:
                c = c - (c[row] // head[row]) * head
                if c[row] != 0:
                    reduced.append(c)
                elif np.any(c != 0):
                    rest.append(c)
            pivots = reduced
        if pivots:
            basis.append(pivots[0])
        cols = rest
    return np.array(basis, dtype=float).T


def _separable_split(lat: Lattice, tol: float) -> Separable | None:
    n = lat.dim
    if n % 2:
        return None
    d = n // 2
    firsts, seconds = [], []
    for col in lat.gen.T:
        u = np.concatenate([col[:d], np.zeros(d)])
        v = np.concatenate([np.zeros(d), col[d:]])
        if not (contains(lat, u, tol) and contains(lat, v, tol)):
            return None
        firsts.append(np.round(lat.coordinates(u)).astype(int))
        seconds.append(np.round(lat.coordinates(v)).astype(int))
    parts = []
    for coords, sl in ((firsts, slice(0, d)), (seconds, slice(d, n))):
        basis = _integer_column_basis(np.array(coords).T)
        if basis.shape[1] != d:
            return None
        parts.append(Lattice((lat.gen @ basis)[sl, :]))
    return Separable(*parts)


def _rectangular(lat: Lattice, tol: float) -> Rectangular | None:
    gen = lat.gen
    scale = np.max(np.abs(gen))
    nz = np.abs(gen) > tol * scale
    if not (np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)):
        return None
    # row i holds exactly one nonzero entry; that is the i-th diagonal entry
    diag = np.array([gen[i, np.flatnonzero(nz[i])[0]] for i in range(lat.dim)])
    return Rectangular(np.abs(diag))


def _symplectic(lat: Lattice, tol: float) -> Symplectic | None:
    n = lat.dim
    if n % 2:
        return None
    if n == 2:
        alpha, S = sl2_normalize(lat.gen)
        return Symplectic(alpha, S)
    alpha = abs(np.linalg.det(lat.gen)) ** (1.0 / n)
    S = lat.gen / alpha
    if is_symplectic(S, tol=1e-10):
        return Symplectic(float(alpha), S)
    return None


def classify_all(lat: Lattice, tol: float = 1e-12) -> list:
    """Every structural class the lattice belongs to, in priority order."""
    found = []
    for test in (_rectangular, _separable_split, _symplectic):
        tag = test(lat, tol) if test is _rectangular else test(lat, MEMBER_TOL)
        if tag is not None:
            found.append(tag)
    return found or [General()]


def classify(lat: Lattice, tol: float = 1e-12):
    """Highest-priority class: Rectangular > Separable > Symplectic > General."""
    return classify_all(lat, tol)[0]


def _as_fraction(entry) -> Fraction:
    if isinstance(entry, Fraction):
        return entry
    if isinstance(entry, (tuple, list)):
        num, den = entry
        if den == 0:
            raise ZeroDivisionError("zero denominator in rational matrix entry")
        return Fraction(int(num), int(den))
    if isinstance(entry, (int, np.integer)):
        return Fraction(int(entry))
    raise TypeError(f"rational entry must be a (num, den) pair or Fraction, got {entry!r}")


def rational_envelope(L: Sequence[Sequence]) -> Lattice:
    """Rectangular lattice ``D Z^n`` containing ``L Z^n`` for rational ``L``.

    ``D_ii`` is one over the product of the denominators in row ``i``; every
    row of ``L z`` is then ``D_ii`` times an integer.

    Parameters
    ----------
    L : nested sequence
        Rows of ``(numerator, denominator)`` pairs or ``Fraction`` objects.
    """
    rows = [[_as_fraction(e) for e in row] for row in L]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("rational generator must be square")
    diag = []
    for row in rows:
        den = 1
        for q in row:
            den *= q.denominator
        diag.append(1.0 / den)
    return Lattice(np.diag(diag))


def rational_matrix(L: Sequence[Sequence]) -> np.ndarray:
    """Float value of a rational generator given as pairs or Fractions."""
    return np.array([[float(_as_fraction(e)) for e in row] for row in L])
