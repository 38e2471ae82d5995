"""
Constructive counterexamples to phaseless STFT uniqueness.

Each scenario describes a sampling set.  :func:`build` returns two functions
that are not global-phase multiples of each other but whose spectrograms
agree on that set, along with a description of the set and a
non-equivalence certificate.

The common recipe: pick a shift lattice ``Gamma`` whose reciprocal is the
discrete part of the sampling set, a symplectic word ``S``, a finitely
supported sequence ``c`` off every line through the origin, and put

    f1 = sum c_k    mu(S) T_{gamma_k} mu(S)^{-1} R g
    f2 = sum conj(c_k) mu(S) T_{gamma_k} mu(S)^{-1} R g

Then ``|V_g f1| = |V_g f2|`` on ``S (R^d x Gamma^*)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np
from scipy.linalg import block_diag
from scipy.stats import qmc

from . import atoms
from .atoms import AtomSum
from .lattice import (
    Lattice,
    contains,
    enumerate_points,
    rational_envelope,
    rational_matrix,
    reciprocal,
    same_lattice,
    shortest_nonzero,
    sl2_normalize,
)
from .metaplectic import SympWord, matrix, word_for_sl2
from .sequences import CoeffSeq, conjugate_seq, is_hermitian, is_on_line, synthesize
from .verify import phase_distance, probe_grid

__all__ = [
    "HypothesisError",
    "SemiDiscrete",
    "FactoredLattice",
    "AnyLattice2D",
    "PauliSeparable",
    "RealSign",
    "RationalLattice",
    "Shifted",
    "EqualitySet",
    "Certificate",
    "CounterexamplePair",
    "build",
    "default_sequence",
    "equality_points",
]

WINDOW_REAL_TOL = 1e-12


class HypothesisError(ValueError):
    """A builder precondition failed; ``hypothesis`` names which one."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        super().__init__(f"{hypothesis}: {detail}" if detail else hypothesis)


# -- scenarios -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SemiDiscrete:
    """Sampling set ``S (R^d x lattice)``."""

    word: SympWord
    lattice: Lattice


@dataclass(frozen=True, eq=False)
class FactoredLattice:
    """Sampling lattice ``S diag(A, B) Z^{2d}``."""

    word: SympWord
    A: np.ndarray
    B: np.ndarray


@dataclass(frozen=True, eq=False)
class AnyLattice2D:
    """Any lattice ``L Z^2`` in the time-frequency plane (d = 1)."""

    L: np.ndarray


@dataclass(frozen=True, eq=False)
class PauliSeparable:
    """Separable lattice ``A Z^d x B Z^d``; also forces ``|f1| = |f2|``."""

    A: np.ndarray
    B: np.ndarray


@dataclass(frozen=True, eq=False)
class RealSign:
    """Sampling set ``lattice x R^d`` with real-valued functions."""

    lattice: Lattice


@dataclass(frozen=True, eq=False)
class RationalLattice:
    """Lattice with a rational generator, entries as ``(num, den)`` pairs."""

    L: tuple


@dataclass(frozen=True, eq=False)
class Shifted:
    """``p + (sampling set of base)``."""

    base: object
    p: np.ndarray


Scenario = Union[SemiDiscrete, FactoredLattice, AnyLattice2D, PauliSeparable, RealSign, RationalLattice, Shifted]


# -- results ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EqualitySet:
    """Set on which spectrogram equality is guaranteed.

    ``kind == "semi-discrete"``: ``p + transform (R^d x lattice)``.
    ``kind == "lattice"``: ``p + lattice`` with ``lattice`` in R^{2d}.
    """

    kind: str
    lattice: Lattice
    shift: np.ndarray
    transform: np.ndarray | None = None

    def shifted(self, p) -> "EqualitySet":
        return EqualitySet(self.kind, self.lattice, self.shift + np.asarray(p, float), self.transform)

    def contains(self, z, tol: float = 1e-9) -> bool:
        z = np.asarray(z, dtype=float) - self.shift
        if self.kind == "lattice":
            return contains(self.lattice, z, tol)
        d = self.lattice.dim
        u = np.linalg.solve(self.transform, z)
        return contains(self.lattice, u[d:], tol)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "lattice": self.lattice.gen.tolist(), "shift": self.shift.tolist()}
        if self.transform is not None:
            out["transform"] = self.transform.tolist()
        return out


@dataclass(frozen=True)
class Certificate:
    seq_in_l2O: bool
    seq_hermitian: bool
    phase_distance: float
    norm_sq_sum: float

    def to_dict(self) -> dict:
        return dict(
            seq_in_l2O=self.seq_in_l2O,
            seq_hermitian=self.seq_hermitian,
            phase_distance=self.phase_distance,
            norm_sq_sum=self.norm_sq_sum,
        )


@dataclass(frozen=True, eq=False)
class CounterexamplePair:
    f1: AtomSum
    f2: AtomSum
    window: AtomSum
    equality_set: EqualitySet
    certificate: Certificate
    sequence: CoeffSeq
    word: SympWord
    scenario: object = field(repr=False)


# -- helpers -----------------------------------------------------------------------


def default_sequence(lat: Lattice) -> CoeffSeq:
    """Values ``1, i, 1+i`` on three lattice points.

    Indices ``0, e_1, e_2`` for ``d >= 2`` and ``-1, 0, 1`` for ``d = 1``.
    """
    d = lat.dim
    vals = (1, 1j, 1 + 1j)
    if d == 1:
        keys = [(-1,), (0,), (1,)]
    else:
        eye = np.eye(d, dtype=int)
        keys = [tuple([0] * d), tuple(eye[0]), tuple(eye[1])]
    return CoeffSeq(lat, dict(zip(keys, vals)))


def _hermitian_default(lat: Lattice) -> CoeffSeq:
    _, k = shortest_nonzero(lat)
    k = tuple(int(v) for v in k)
    return CoeffSeq(lat, {k: 1 + 2j, tuple(-v for v in k): 1 - 2j})


def _coerce_sequence(s, lat: Lattice) -> CoeffSeq:
    if isinstance(s, CoeffSeq):
        if not same_lattice(s.lattice, lat):
            raise HypothesisError(
                "dimension/lattice consistency",
                "sequence is indexed by a different lattice than the scenario's shift lattice",
            )
        return CoeffSeq(lat, s.entries)
    return CoeffSeq(lat, s)


def _require_real_window(g: AtomSum, theorem: str):
    vals = g(probe_grid(g).points())
    if np.max(np.abs(vals.imag)) > WINDOW_REAL_TOL:
        raise HypothesisError(f"real-valued window ({theorem})", "window has a non-zero imaginary part")


def _require_dim(n: int, g: AtomSum, what: str):
    if n != g.dim:
        raise HypothesisError("dimension consistency", f"{what} has dimension {n}, window has {g.dim}")


def _as_matrix(A, d: int | None = None) -> np.ndarray:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if d is not None and A.shape != (d, d):
        raise HypothesisError("dimension consistency", f"expected a {d}x{d} matrix, got {A.shape}")
    return A


def _finish(s: CoeffSeq, word: SympWord, g: AtomSum, eq: EqualitySet, scenario) -> CounterexamplePair:
    if is_on_line(s):
        raise HypothesisError(
            "coefficients off every line through the origin (ell^2_O)",
            "the sequence values lie on a line through 0, so f1 ~ f2",
        )
    phi = atoms.reflect(g)
    f1 = synthesize(s, word, phi)
    f2 = synthesize(conjugate_seq(s), word, phi)
    n1 = atoms.inner_product(f1, f1).real
    n2 = atoms.inner_product(f2, f2).real
    cert = Certificate(
        seq_in_l2O=not is_on_line(s),
        seq_hermitian=is_hermitian(s),
        phase_distance=phase_distance(f1, f2),
        norm_sq_sum=float(n1 + n2),
    )
    return CounterexamplePair(f1, f2, g, eq, cert, s, word, scenario)


# -- builder -------------------------------------------------------------------------


def build(sc, g: AtomSum, s: CoeffSeq | Mapping | None = None) -> CounterexamplePair:
    """Construct a counterexample pair for scenario ``sc`` and window ``g``.

    Parameters
    ----------
    sc : scenario
        One of the scenario classes of this module.
    g : AtomSum
        Window function.
    s : CoeffSeq or mapping, optional
        Defining sequence on the scenario's shift lattice (a mapping is
        read as ``{index: value}``).  A default is chosen when omitted.

    Raises
    ------
    HypothesisError
        When a hypothesis of the underlying theorem fails.
    """
    d = g.dim
    zero = np.zeros(2 * d)

    if isinstance(sc, SemiDiscrete):
        _require_dim(sc.word.dim, g, "word")
        _require_dim(sc.lattice.dim, g, "lattice")
        shift_lat = reciprocal(sc.lattice)
        seq = default_sequence(shift_lat) if s is None else _coerce_sequence(s, shift_lat)
        eq = EqualitySet("semi-discrete", sc.lattice, zero, matrix(sc.word))
        return _finish(seq, sc.word, g, eq, sc)

    if isinstance(sc, FactoredLattice):
        _require_dim(sc.word.dim, g, "word")
        A, B = _as_matrix(sc.A, d), _as_matrix(sc.B, d)
        shift_lat = reciprocal(Lattice(B))
        seq = default_sequence(shift_lat) if s is None else _coerce_sequence(s, shift_lat)
        eq = EqualitySet("lattice", Lattice(matrix(sc.word) @ block_diag(A, B)), zero)
        return _finish(seq, sc.word, g, eq, sc)

    if isinstance(sc, AnyLattice2D):
        if d != 1:
            raise HypothesisError("dimension consistency", "arbitrary planar lattices need d = 1")
        L = _as_matrix(sc.L, 2)
        alpha, S = sl2_normalize(L)
        word = word_for_sl2(S)
        shift_lat = Lattice([[1.0 / alpha]])
        seq = default_sequence(shift_lat) if s is None else _coerce_sequence(s, shift_lat)
        eq = EqualitySet("lattice", Lattice(L), zero)
        return _finish(seq, word, g, eq, sc)

    if isinstance(sc, PauliSeparable):
        _require_real_window(g, "Pauli-type theorem")
        A, B = _as_matrix(sc.A, d), _as_matrix(sc.B, d)
        shift_lat = reciprocal(Lattice(B))
        if s is None:
            _, k = shortest_nonzero(shift_lat)
            k = tuple(int(v) for v in k)
            seq = CoeffSeq(shift_lat, {tuple(-v for v in k): 1.0, k: 1j})
        else:
            seq = _coerce_sequence(s, shift_lat)
        eq = EqualitySet("lattice", Lattice(block_diag(A, B)), zero)
        return _finish(seq, SympWord.identity(d), g, eq, sc)

    if isinstance(sc, RealSign):
        _require_dim(sc.lattice.dim, g, "lattice")
        _require_real_window(g, "sign retrieval theorem")
        shift_lat = reciprocal(sc.lattice)
        seq = _hermitian_default(shift_lat) if s is None else _coerce_sequence(s, shift_lat)
        if not is_hermitian(seq):
            raise HypothesisError(
                "Hermitian coefficients (ell^2_H)", "c_{-k} must equal conj(c_k) for real-valued output"
            )
        word = SympWord.fourier(d)
        eq = EqualitySet("semi-discrete", sc.lattice, zero, matrix(word))
        return _finish(seq, word, g, eq, sc)

    if isinstance(sc, RationalLattice):
        L = rational_matrix(sc.L)
        if L.shape != (2 * d, 2 * d):
            raise HypothesisError("dimension consistency", f"rational generator must be {2 * d}x{2 * d}")
        D = rational_envelope(sc.L).gen
        DA, DB = D[:d, :d], D[d:, d:]
        real = True
        try:
            _require_real_window(g, "rational lattice corollary")
        except HypothesisError:
            real = False
        base = RealSign(Lattice(DA)) if real else FactoredLattice(SympWord.identity(d), DA, DB)
        pair = build(base, g, s)
        eq = EqualitySet("lattice", Lattice(L), zero)
        return CounterexamplePair(
            pair.f1, pair.f2, g, eq, pair.certificate, pair.sequence, pair.word, sc
        )

    if isinstance(sc, Shifted):
        p = np.asarray(sc.p, dtype=float).reshape(2 * d)
        base = build(sc.base, g, s)
        a, b = p[:d], p[d:]

        def move(h):
            return atoms.modulate(atoms.translate(h, a), b)

        return CounterexamplePair(
            move(base.f1),
            move(base.f2),
            g,
            base.equality_set.shifted(p),
            base.certificate,
            base.sequence,
            base.word,
            sc,
        )

    raise TypeError(f"unknown scenario {type(sc).__name__}")


# -- sampling the equality set -------------------------------------------------------


def _by_norm(pts: np.ndarray) -> np.ndarray:
    # stable: ties keep the lexicographic enumeration order
    order = np.argsort(np.round(np.linalg.norm(pts, axis=1), 12), kind="stable")
    return pts[order]


def equality_points(pair: CounterexamplePair, count: int, radius: float, seed: int = 0) -> np.ndarray:
    """Deterministic sample of ``count`` points from the pair's equality set.

    Lattice sets contribute their points of norm ``<= radius`` nearest the
    origin first.  Semi-discrete sets pair those discrete coordinates with a
    Halton sweep of the free coordinates over ``[-radius, radius]^d``.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    eq = pair.equality_set
    if eq.kind == "lattice":
        pts = _by_norm(enumerate_points(eq.lattice, radius))[:count]
        return pts + eq.shift
    d = eq.lattice.dim
    disc = _by_norm(enumerate_points(eq.lattice, radius))
    free = qmc.Halton(d, scramble=True, seed=seed).random(count)
    free = (2 * free - 1) * radius
    u = np.hstack([free, disc[np.arange(count) % len(disc)]])
    return u @ eq.transform.T + eq.shift
