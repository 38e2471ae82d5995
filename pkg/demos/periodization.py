"""
Periodization bounds: when is sum_k |F phi(t + k)|^2 bounded above and below?

For the standard Gaussian on Z the sum is a Jacobi theta function with
minimum ~0.4158 (t = 1/2) and maximum ~1.0037 (t = 0).  On a coarse lattice
the Gaussian's Fourier transform cannot fill the gaps and the lower bound
collapses.
"""

import numpy as np

from phaseless import AtomSum, Lattice
from phaseless.verify import periodization_bounds

phi = AtomSum.gaussian(1.0, 1)
for step in (0.5, 1.0, 2.0, 4.0, 10.0):
    b = periodization_bounds(phi, Lattice([[step]]))
    print(f"lattice {step:>4}Z: A = {b.lower:.4e}, B = {b.upper:.4e}, bounded below: {b.bounded_below()}")

print()
for width in (0.25, 1.0, 4.0):
    b = periodization_bounds(AtomSum.gaussian(width, 2), Lattice(np.eye(2)), m=12)
    print(f"2-d Gaussian width {width}: A = {b.lower:.4e}, B = {b.upper:.4e}")

try:
    periodization_bounds(phi, Lattice([[1.0]]), radius=0.5)
except ValueError as exc:
    print("\n", exc)
