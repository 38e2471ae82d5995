"""
Two stronger non-uniqueness statements.

Pauli-type: for a separable lattice and a real window, the pair additionally
satisfies |f1| = |f2| pointwise -- so even knowing |f| does not help.

Sign retrieval: for a Hermitian coefficient sequence both functions are
real-valued, and still they are not equal up to a sign.
"""

import numpy as np

from phaseless import AtomSum, Lattice, PauliSeparable, RealSign, build
from phaseless.factory import HypothesisError, equality_points
from phaseless.verify import (
    check_equality_on_set,
    is_real_on_grid,
    modulus_equal_on_grid,
    probe_grid,
)

g = AtomSum.gaussian(1 / np.pi, 2)

pauli = build(PauliSeparable(np.eye(2), np.eye(2) / 4), g)
print("Pauli-type pair on Z^2 x Z^2/4")
print("  sequence:", {tuple(k.tolist()): c for k, c in pauli.sequence.points()})
print("  spectrogram rel diff:", f"{check_equality_on_set(pauli, equality_points(pauli, 50, 3.0)).max_rel_diff:.1e}")
print("  |f1| = |f2| on 41^2 grid:", modulus_equal_on_grid(pauli.f1, pauli.f2, probe_grid(pauli.f1, 41)))
print(f"  phase distance: {pauli.certificate.phase_distance:.4f}")

sign = build(RealSign(Lattice(np.eye(2) / 4)), g)
grid = probe_grid(sign.f1)
print("\nSign-retrieval pair, equality on (Z^2/4) x R^2")
print("  Hermitian sequence:", sign.certificate.seq_hermitian)
print("  f1, f2 real:", is_real_on_grid(sign.f1, grid), is_real_on_grid(sign.f2, grid))
print("  spectrogram rel diff:", f"{check_equality_on_set(sign, equality_points(sign, 50, 3.0)).max_rel_diff:.1e}")
print(f"  phase distance: {sign.certificate.phase_distance:.4f}")

print("\nHypotheses are enforced:")
chirped = AtomSum.gaussian(1 / np.pi + 0.2j, 2)
try:
    build(PauliSeparable(np.eye(2), np.eye(2)), chirped)
except HypothesisError as exc:
    print("  ", exc)
