"""
phaseless
=========

Counterexamples to phase retrieval from short-time Fourier transform
magnitudes on lattices, and numerical verification of the identities
behind them.

Submodules
----------
lattice      lattices, reciprocal lattices, classification
atoms        closed-form algebra of Gaussian atom sums
metaplectic  symplectic words and their metaplectic action
sequences    finitely supported coefficient sequences
factory      counterexample scenarios and the pair builder
verify       spectrogram checks, periodization bounds, Bargmann oracle
sampled      grid-sampled windows and a discrete STFT
config, cli  JSON run configs and the ``phaseless`` command
"""

from .atoms import AtomSum, GaussAtom, inner_product, norm, standard_gaussian, stft
from .factory import (
    AnyLattice2D,
    CounterexamplePair,
    FactoredLattice,
    HypothesisError,
    PauliSeparable,
    RationalLattice,
    RealSign,
    SemiDiscrete,
    Shifted,
    build,
    default_sequence,
    equality_points,
)
from .lattice import Lattice, classify, reciprocal
from .metaplectic import Chirp, Dilate, FourierJ, SympWord
from .sequences import CoeffSeq
from .verify import check_equality_on_set, phase_distance, qx_grid, spectrogram

__version__ = "0.1.0"
