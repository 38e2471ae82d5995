"""Finitely supported coefficient sequences on lattices."""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .atoms import AtomSum
from .lattice import Lattice
from .metaplectic import SympWord, s_shift

__all__ = ["CoeffSeq", "conjugate_seq", "is_on_line", "is_hermitian", "synthesize"]

SEQ_TOL = 1e-10


class CoeffSeq:
    """Map from integer coordinates ``k`` to complex ``c_k``.

    The lattice point attached to ``k`` is ``lattice.gen @ k``.  Zero
    entries are dropped.

    Parameters
    ----------
    lattice : Lattice
    entries : mapping
        ``{k: c}`` with ``k`` an integer tuple (or int for 1-dim lattices).
    """

    __slots__ = ("lattice", "entries")

    def __init__(self, lattice: Lattice, entries: Mapping = ()):
        self.lattice = lattice
        clean = {}
        for k, c in dict(entries).items():
            key = tuple(int(v) for v in np.atleast_1d(k))
            if len(key) != lattice.dim:
                raise ValueError(f"index {key} for a {lattice.dim}-dim lattice")
            c = complex(c)
            if c != 0:
                clean[key] = c
        self.entries = dict(sorted(clean.items()))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.items())

    def points(self):
        """Lattice points and coefficients, in sorted index order."""
        return [(self.lattice.point(k), c) for k, c in self.entries.items()]

    def values(self) -> np.ndarray:
        return np.array(list(self.entries.values()), dtype=complex)

    def scale(self, z) -> "CoeffSeq":
        return CoeffSeq(self.lattice, {k: z * c for k, c in self.entries.items()})

    __mul__ = scale
    __rmul__ = scale

    def __add__(self, other: "CoeffSeq") -> "CoeffSeq":
        if other.lattice is not self.lattice and not np.allclose(
            other.lattice.gen, self.lattice.gen
        ):
            raise ValueError("sequences live on different lattices")
        out = dict(self.entries)
        for k, c in other.entries.items():
            out[k] = out.get(k, 0) + c
        return CoeffSeq(self.lattice, out)

    def __repr__(self):
        return f"CoeffSeq({self.entries!r})"


def conjugate_seq(s: CoeffSeq) -> CoeffSeq:
    return CoeffSeq(s.lattice, {k: np.conj(c) for k, c in s.entries.items()})


def is_on_line(s: CoeffSeq, tol: float = SEQ_TOL) -> bool:
    """Do all values lie on one line through the origin of the complex plane?

    Pairwise test ``Im(c_j conj(c_k)) = 0``, relative to ``max |c|^2``.
    Sequences off every such line are exactly those whose synthesized
    function is not a global phase multiple of its conjugate-sequence
    partner.
    """
    c = s.values()
    if c.size < 2:
        return True
    scale = np.max(np.abs(c)) ** 2
    cross = np.imag(c[:, None] * np.conj(c[None, :]))
    return bool(np.max(np.abs(cross)) <= tol * scale)


def is_hermitian(s: CoeffSeq, tol: float = SEQ_TOL) -> bool:
    """``c_{-k} = conj(c_k)`` on the whole support."""
    if not s.entries:
        return True
    scale = max(abs(c) for c in s.entries.values())
    for k, c in s.entries.items():
        partner = s.entries.get(tuple(-v for v in k))
        if partner is None or abs(partner - np.conj(c)) > tol * scale:
            return False
    return True


def synthesize(s: CoeffSeq, word: SympWord, phi: AtomSum) -> AtomSum:
    """``sum_k c_k mu(S) T_{gen k} mu(S)^{-1} phi``."""
    if s.lattice.dim != phi.dim or word.dim != phi.dim:
        raise ValueError("sequence, word and generator dimensions differ")
    out = AtomSum.zero(phi.dim)
    for lam, c in s.points():
        out = out + c * s_shift(word, lam, phi)
    return out
