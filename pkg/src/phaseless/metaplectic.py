"""
Metaplectic operators represented as words in three generators.

=================  =========================  ==============================
generator          matrix                     operator on L^2(R^d)
=================  =========================  ==============================
``Dilate(A)``      ``diag(A, A^{-T})``        ``|det A|^{-1/2} f(A^{-1} x)``
``FourierJ(-1)``   ``-J``                     Fourier transform
``FourierJ(+1)``   ``J``                      inverse Fourier transform
``Chirp(C)``       ``[[I, 0], [C, I]]``       ``exp(pi i x^T C x) f(x)``
=================  =========================  ==============================

A word ``(g_1, ..., g_k)`` has matrix ``G_1 G_2 ... G_k`` and acts as
``U_1 U_2 ... U_k``, so the last generator is applied first.  Fixing the
operator by the word (rather than by the matrix) removes the sign ambiguity
of the metaplectic representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import atoms
from .atoms import AtomSum
from .lattice import is_symplectic, standard_symplectic

__all__ = [
    "Dilate",
    "FourierJ",
    "Chirp",
    "SympWord",
    "matrix",
    "apply",
    "inverse_word",
    "s_shift",
    "word_for_sl2",
    "interaction_residual",
]


@dataclass(frozen=True, eq=False)
class Dilate:
    A: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        if A.shape[0] != A.shape[1] or abs(np.linalg.det(A)) <= 1e-12:
            raise ValueError("dilation needs an invertible square matrix")
        object.__setattr__(self, "A", A)

    @property
    def dim(self):
        return self.A.shape[0]

    def matrix(self):
        return np.block(
            [[self.A, np.zeros_like(self.A)], [np.zeros_like(self.A), np.linalg.inv(self.A).T]]
        )

    def inverse(self):
        return Dilate(np.linalg.inv(self.A))

    def act(self, f):
        return atoms.dilate(f, self.A)

    def to_dict(self):
        return {"dilate": self.A.tolist()}


@dataclass(frozen=True)
class FourierJ:
    """``sign = -1`` is ``mu(-J) = F``; ``sign = +1`` is ``mu(J) = F^{-1}``."""

    sign: int
    dim: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("FourierJ sign must be +1 or -1")

    def matrix(self):
        return self.sign * standard_symplectic(self.dim)

    def inverse(self):
        return FourierJ(-self.sign, self.dim)

    def act(self, f):
        return atoms.fourier(f) if self.sign == -1 else atoms.inverse_fourier(f)

    def to_dict(self):
        return {"fourier": self.sign}


@dataclass(frozen=True, eq=False)
class Chirp:
    C: np.ndarray

    def __post_init__(self):
        C = np.atleast_2d(np.asarray(self.C, dtype=float))
        if C.shape[0] != C.shape[1] or np.max(np.abs(C - C.T)) > 1e-12 * max(1.0, np.max(np.abs(C))):
            raise ValueError("chirp needs a symmetric square matrix")
        object.__setattr__(self, "C", C)

    @property
    def dim(self):
        return self.C.shape[0]

    def matrix(self):
        d = self.dim
        return np.block([[np.eye(d), np.zeros((d, d))], [self.C, np.eye(d)]])

    def inverse(self):
        return Chirp(-self.C)

    def act(self, f):
        return atoms.chirp(f, self.C)

    def to_dict(self):
        return {"chirp": self.C.tolist()}


Generator = Union[Dilate, FourierJ, Chirp]


class SympWord:
    """Ordered product of metaplectic generators acting on ``L^2(R^d)``."""

    __slots__ = ("dim", "factors")

    def __init__(self, factors: Sequence[Generator] = (), dim: int | None = None):
        factors = tuple(factors)
        if dim is None:
            if not factors:
                raise ValueError("dimension required for an empty word")
            dim = factors[0].dim
        for g in factors:
            if g.dim != dim:
                raise ValueError(f"generator of dimension {g.dim} in a {dim}-dim word")
        self.dim = int(dim)
        self.factors = factors

    @classmethod
    def identity(cls, dim: int) -> "SympWord":
        return cls((), dim)

    @classmethod
    def fourier(cls, dim: int) -> "SympWord":
        """The word for ``mu(-J) = F``."""
        return cls([FourierJ(-1, dim)], dim)

    def __add__(self, other: "SympWord") -> "SympWord":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return SympWord(self.factors + other.factors, self.dim)

    def __len__(self):
        return len(self.factors)

    def __repr__(self):
        names = ", ".join(type(g).__name__ for g in self.factors)
        return f"SympWord(dim={self.dim}, [{names}])"

    def to_list(self):
        return [g.to_dict() for g in self.factors]


def matrix(word: SympWord) -> np.ndarray:
    """Symplectic matrix ``G_1 ... G_k`` of the word."""
    out = np.eye(2 * word.dim)
    for g in word.factors:
        out = out @ g.matrix()
    return out


def apply(word: SympWord, f: AtomSum) -> AtomSum:
    """Apply ``U_1 ... U_k`` to ``f`` (rightmost generator first)."""
    if f.dim != word.dim:
        raise ValueError("dimension mismatch between word and function")
    for g in reversed(word.factors):
        f = g.act(f)
    return f


def inverse_word(word: SympWord) -> SympWord:
    return SympWord([g.inverse() for g in reversed(word.factors)], word.dim)


def s_shift(word: SympWord, lam, f: AtomSum) -> AtomSum:
    """``mu(S) T_lam mu(S)^{-1} f`` with ``mu(S)`` given by ``word``."""
    return apply(word, atoms.translate(apply(inverse_word(word), f), lam))


def word_for_sl2(S, tol: float = 1e-10) -> SympWord:
    """Factor a 2x2 matrix of determinant one into generators.

    With ``S = [[a, b], [c, d]]`` the pivot is the larger of ``|a|`` and
    ``|b|``, so no generator parameter exceeds ``|S| / max(|a|, |b|)``:

    * ``|a| >= |b|``: ``Chirp(c/a) Dilate(a) (-J) Chirp(-b/a) J``, i.e. lower
      shear, dilation and an upper shear written as a conjugated chirp;
    * ``|b| > |a|``: ``Chirp(d/b) Dilate(b) (-J) Chirp(a/b)``.
    """
    S = np.asarray(S, dtype=float)
    if S.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    if abs(np.linalg.det(S) - 1.0) > tol:
        raise ValueError(f"determinant must be 1, got {np.linalg.det(S)!r}")
    (a, b), (c, d) = S
    if abs(a) >= abs(b):
        factors = [Chirp(c / a), Dilate(a)]
        if b != 0.0:
            factors += [FourierJ(-1), Chirp(-b / a), FourierJ(1)]
    else:
        factors = [Chirp(d / b), Dilate(b), FourierJ(-1), Chirp(a / b)]
    factors = [
        g for g in factors
        if not (isinstance(g, Chirp) and g.C[0, 0] == 0.0)
        and not (isinstance(g, Dilate) and g.A[0, 0] == 1.0)
    ]
    return SympWord(factors, 1)


def interaction_residual(word: SympWord, f: AtomSum, g: AtomSum, z) -> float:
    """``| |V_g f(S z)| - |V_{mu(S)^{-1} g} (mu(S)^{-1} f)(z)| |``."""
    d = word.dim
    z = np.asarray(z, dtype=float)
    Sz = matrix(word) @ z
    inv = inverse_word(word)
    lhs = abs(atoms.stft(f, g, Sz[:d], Sz[d:]))
    rhs = abs(atoms.stft(apply(inv, f), apply(inv, g), z[:d], z[d:]))
    return float(abs(lhs - rhs))


def check_symplectic(word: SympWord, tol: float = 1e-10) -> bool:
    return is_symplectic(matrix(word), tol)
