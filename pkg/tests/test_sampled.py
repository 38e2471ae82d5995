import numpy as np
import pytest

import oracles as O
from phaseless.atoms import AtomSum, GaussAtom, stft
from phaseless.lattice import Lattice
from phaseless.sampled import (
    SampledWindow,
    named_window,
    numeric_pair,
    reflect_sampled,
    sample,
    shift_sampled,
    stft_numeric,
    symmetric_grid,
)
from phaseless.sequences import CoeffSeq


def sampled(f: AtomSum, h: float, half: float = 8.0) -> SampledWindow:
    origin, shape = symmetric_grid(half, h, f.dim)
    return sample(f, origin, h, shape)


def brute_force(f: SampledWindow, g: SampledWindow, x, w):
    """Plain Riemann sum with ``g`` evaluated by index arithmetic (1-d only)."""
    t = f.axes()[0]
    k = int(round(x / f.step))
    gv = np.zeros_like(g.values)
    n = len(t)
    for i in range(n):
        j = i - k
        if 0 <= j < n:
            gv[i] = g.values[j]
    return f.step * np.sum(f.values * np.conj(gv) * np.exp(-2j * np.pi * w * t))


class TestSampledWindow:
    def test_validation(self):
        with pytest.raises(ValueError):
            SampledWindow([0.0], 0.0, np.zeros(3))
        with pytest.raises(ValueError):
            SampledWindow([0.0, 0.0], 0.1, np.zeros(3))

    def test_symmetric_grid(self):
        origin, shape = symmetric_grid(1.0, 0.25, 2)
        assert np.allclose(origin, [-1, -1]) and shape == (9, 9)

    def test_sample_matches_evaluate(self, rng):
        f = O.random_atom_sum(rng, 2)
        s = sampled(f, 0.5, 2.0)
        assert np.allclose(s.values.ravel(), f(s.points()))

    def test_named_windows(self):
        for name in ("triangle", "hann", "box", "gaussian"):
            w = named_window(name, 2, 0.125, 2.0)
            assert w.shape == (33, 33)
            assert w.values[16, 16] == pytest.approx(1.0)
            assert np.all(w.values.imag == 0)
        tri = named_window("triangle", 1, 0.25, 2.0, scale=1.0).values  # t = -2 .. 2
        assert tri[10] == 0.5 and tri[12] == 0 and tri[16] == 0
        with pytest.raises(ValueError, match="unknown window"):
            named_window("kaiser", 1, 0.1, 1.0)

    def test_shift_and_reflect(self):
        w = SampledWindow([-1.0], 0.5, np.array([1, 2, 3, 4, 5], dtype=complex))
        assert np.array_equal(shift_sampled(w, [0.5]).values, [0, 1, 2, 3, 4])
        assert np.array_equal(shift_sampled(w, [-1.0]).values, [3, 4, 5, 0, 0])
        assert np.array_equal(shift_sampled(w, [10.0]).values, np.zeros(5))
        assert np.array_equal(reflect_sampled(w).values, [5, 4, 3, 2, 1])
        with pytest.raises(ValueError, match="whole number"):
            shift_sampled(w, [0.3])
        with pytest.raises(ValueError, match="symmetric"):
            reflect_sampled(SampledWindow([0.0], 0.5, np.ones(4)))


class TestStftNumeric:
    @pytest.mark.parametrize("d", [1, 2])
    def test_gaussian_pair_at_origin(self, d):
        g = O.exp_gaussian(d)
        f = AtomSum([GaussAtom(1 + 0.5j, np.full(d, 0.25), np.full(d, 0.5), np.eye(d) / np.pi)])
        F, G = sampled(f, 1 / 64), sampled(g, 1 / 64)
        ws = np.array([np.zeros(d), np.full(d, 0.5), np.linspace(-1, 1, d)])
        ref = stft(f, g, np.zeros((3, d)), ws)
        got = stft_numeric(F, G, np.zeros(d), ws)
        assert np.max(np.abs(got - ref)) <= 1e-6 * np.max(np.abs(ref))

    def test_narrow_atoms_converge(self):
        # width 400: Riemann error is visible at h = 1/64 and drops by far more than 4x at 1/128
        f = AtomSum([GaussAtom(1 + 0.5j, [0.25], [1.5], 400.0)])
        g = AtomSum([GaussAtom(1.0, [0.0], [0.0], 400.0)])
        x = np.array([0.25])
        ws = np.array([[1.0], [1.5], [2.3]])
        ref = stft(f, g, np.repeat(x[None], 3, 0), ws)
        errs = []
        for h in (1 / 64, 1 / 128):
            got = stft_numeric(sampled(f, h, 2.0), sampled(g, h, 2.0), x, ws)
            errs.append(np.max(np.abs(got - ref)) / np.max(np.abs(ref)))
        assert errs[0] <= 1e-6
        assert errs[1] <= errs[0] / 4

    def test_zero_function(self):
        g = named_window("triangle", 1, 0.1, 3.0)
        z = g.with_values(np.zeros(g.shape))
        assert np.all(stft_numeric(z, g, [0.0], [[0.0], [0.7]]) == 0)

    def test_covariance_on_grid(self, rng):
        f = O.random_atom_sum(rng, 1)
        g = AtomSum.gaussian(1.0, 1)
        h = 1 / 32
        F, G = sampled(f, h, 10.0), sampled(g, h, 10.0)
        tau = 0.5
        FT = shift_sampled(F, [tau])
        ws = rng.uniform(-2, 2, (8, 1))
        for x in (0.0, 0.75, -1.25):
            a = np.abs(stft_numeric(FT, G, [x], ws))
            b = np.abs(stft_numeric(F, G, [x - tau], ws))
            assert np.max(np.abs(a - b)) <= 1e-8 * max(1.0, b.max())

    def test_errors(self):
        g = named_window("hann", 1, 0.1, 2.0)
        with pytest.raises(ValueError, match="whole number"):
            stft_numeric(g, g, [0.05], [[0.0]])
        other = named_window("hann", 1, 0.2, 2.0)
        with pytest.raises(ValueError, match="same grid"):
            stft_numeric(g, other, [0.0], [[0.0]])

    def test_fft_and_direct_paths_agree_with_brute_force(self):
        g = named_window("triangle", 1, 0.05, 3.0)
        f = g.with_values(g.values * np.exp(1j * g.axes()[0]))
        N, h = g.shape[0], g.step
        on_grid = np.array([[k / (N * h)] for k in (-7, 0, 3, 11)])
        off_grid = on_grid + 0.013
        for ws in (on_grid, off_grid):
            got = stft_numeric(f, g, [0.4], ws)
            ref = [brute_force(f, g, 0.4, w[0]) for w in ws]
            assert np.allclose(got, ref, rtol=1e-12, atol=1e-13)

    def test_two_dimensional_paths_agree(self):
        g = named_window("hann", 2, 0.1, 1.5)
        f = g.with_values(g.values * (1 + 0.3j))
        N, h = g.shape[0], g.step
        on_grid = np.array([[2 / (N * h), -1 / (N * h)], [0.0, 3 / (N * h)]])
        fft_path = stft_numeric(f, g, [0.2, -0.3], on_grid)
        direct = stft_numeric(f, g, [0.2, -0.3], on_grid + 1e-7)
        assert np.allclose(fft_path, direct, rtol=1e-5)


class TestNumericPair:
    def test_triangle_window_equality_on_dual(self):
        g = named_window("triangle", 1, 1 / 16, 12.0, scale=1.5)
        seq = CoeffSeq(Lattice([[2.0]]), {-1: 1, 0: 1j, 1: 1 + 1j})
        f1, f2 = numeric_pair(seq, g)
        # shifts on 2Z, so the spectrograms agree for frequencies on Z/2
        ws = np.array([[k / 2] for k in range(-6, 7)])
        for x in (0.0, 0.5, 1.0, 2.375):
            a = np.abs(stft_numeric(f1, g, [x], ws))
            b = np.abs(stft_numeric(f2, g, [x], ws))
            assert np.max(np.abs(a - b)) <= 1e-9 * a.max()
        off = np.array([[0.25]])
        a = np.abs(stft_numeric(f1, g, [1.0], off))
        b = np.abs(stft_numeric(f2, g, [1.0], off))
        assert abs(a - b)[0] > 1e-3 * a[0]

    def test_partner_is_not_a_phase_multiple(self):
        g = named_window("gaussian", 1, 0.05, 8.0)
        seq = CoeffSeq(Lattice([[2.0]]), {-1: 1, 0: 1j, 1: 1 + 1j})
        f1, f2 = numeric_pair(seq, g)
        ip = np.vdot(f2.values, f1.values)
        assert abs(ip) < 0.99 * np.linalg.norm(f1.values) * np.linalg.norm(f2.values)
