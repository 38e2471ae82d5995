from fractions import Fraction as F

import numpy as np
import pytest

import oracles as O
from phaseless import atoms
from phaseless.atoms import AtomSum, GaussAtom, conjugate
from phaseless.factory import (
    AnyLattice2D,
    EqualitySet,
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
from phaseless.lattice import Lattice, contains, reciprocal
from phaseless.metaplectic import Chirp, Dilate, FourierJ, SympWord
from phaseless.sequences import CoeffSeq, is_on_line
from phaseless.verify import check_equality_on_set, is_real_on_grid, modulus_equal_on_grid, probe_grid

EX1_SEQ = {(0, 0): 1, (1, 0): 1j, (0, 1): 1 + 1j}


def example_i():
    g = O.exp_gaussian()
    return build(SemiDiscrete(SympWord.identity(2), Lattice(np.eye(2) / 8)), g, EX1_SEQ)


def complex_window(d):
    return AtomSum([GaussAtom(1.0, np.zeros(d), 0.3 * np.ones(d), 0.8 * np.eye(d) + 0.2j * np.eye(d))])


def scenarios():
    """(id, scenario, window, extra checks) covering every builder branch."""
    out = []
    for d in (1, 2):
        g = AtomSum.gaussian(1 / np.pi, d)
        gc = complex_window(d)
        I = np.eye(d)
        out += [
            (f"semi-identity-d{d}", SemiDiscrete(SympWord.identity(d), Lattice(I / 4)), gc, ()),
            (f"semi-fourier-d{d}", SemiDiscrete(SympWord.fourier(d), Lattice(I / 3)), gc, ()),
            (
                f"semi-chirp-dilate-d{d}",
                SemiDiscrete(SympWord([Chirp(0.5 * I), Dilate(1.5 * I)], d), Lattice(I / 2)),
                g,
                (),
            ),
            (f"factored-d{d}", FactoredLattice(SympWord([Dilate(2 * I)], d), I, I / 4), gc, ()),
            (f"pauli-d{d}", PauliSeparable(I, I / 4), g, ("modulus",)),
            (f"real-sign-d{d}", RealSign(Lattice(I / 4)), g, ("real",)),
            (f"shifted-d{d}", Shifted(RealSign(Lattice(I / 4)), np.linspace(0.2, 1.1, 2 * d)), g, ()),
        ]
    g1 = AtomSum.gaussian(1 / np.pi, 1)
    out += [
        ("any-2d", AnyLattice2D(np.array([[1.0, 0.5], [0.2, 2.0]])), g1, ()),
        ("any-2d-negdet", AnyLattice2D(np.array([[0.5, 1.0], [1.0, -0.4]])), complex_window(1), ()),
        ("any-2d-lower", AnyLattice2D(np.array([[0.5, 0.0], [0.3, 0.7]])), g1, ()),
        ("rational-d1-real", RationalLattice(((F(1, 2), F(1, 3)), (0, F(1, 5)))), g1, ("real",)),
        ("rational-d1-complex", RationalLattice(((F(1, 2), F(1, 3)), (0, F(1, 5)))), complex_window(1), ()),
        (
            "rational-d2",
            RationalLattice(
                ((F(1, 2), F(1, 3), 0, 0), (0, F(1, 5), 0, 0), (0, 0, F(1, 2), 0), (F(1, 7), 0, 0, F(1, 3)))
            ),
            AtomSum.gaussian(1 / np.pi, 2),
            ("real",),
        ),
    ]
    return out


SCENARIOS = scenarios()
IDS = [s[0] for s in SCENARIOS]


class TestBuildInvariants:
    @pytest.mark.parametrize("name,sc,g,extra", SCENARIOS, ids=IDS)
    @pytest.mark.parametrize("kappa", [1.0, 0.5, 2.0, 10.0])
    def test_pair_contract(self, name, sc, g, extra, kappa):
        base = build(sc, g)
        pair = build(sc, g, base.sequence.scale(kappa)) if kappa != 1.0 else base
        cert = pair.certificate
        assert cert.seq_in_l2O
        assert cert.phase_distance > 1e-6 * cert.norm_sq_sum
        n1 = atoms.inner_product(pair.f1, pair.f1).real
        n2 = atoms.inner_product(pair.f2, pair.f2).real
        assert cert.norm_sq_sum == pytest.approx(n1 + n2, rel=1e-12)
        pts = equality_points(pair, 50, 3.0)
        assert all(pair.equality_set.contains(p) for p in pts)
        rep = check_equality_on_set(pair, pts, 1e-9)
        assert rep.passed, rep
        if "modulus" in extra:
            assert modulus_equal_on_grid(pair.f1, pair.f2, probe_grid(pair.f1, 41), 1e-12)
        if "real" in extra:
            grid = probe_grid(pair.f1)
            assert is_real_on_grid(pair.f1, grid, 1e-10)
            assert is_real_on_grid(pair.f2, grid, 1e-10)


class TestExampleI:
    def test_shifts_are_lattice_points(self):
        pair = example_i()
        shifts = [lam for lam, _ in pair.sequence.points()]
        assert {tuple(s) for s in shifts} == {(0, 0), (8, 0), (0, 8)}
        assert sorted(tuple(a.center) for a in pair.f1.atoms) == [(0, 0), (0, 8), (8, 0)]

    def test_equality_on_dual(self):
        pair = example_i()
        pts = equality_points(pair, 25, 10.0)
        assert len(pts) == 25
        assert all(contains(Lattice(np.eye(2) / 8), p[2:]) for p in pts)
        assert check_equality_on_set(pair, pts, 1e-9).passed

    def test_certificate(self):
        cert = example_i().certificate
        assert cert.seq_in_l2O and not cert.seq_hermitian
        assert cert.phase_distance > 1e-6 * cert.norm_sq_sum


class TestPauli:
    def test_partner_is_conjugate(self):
        pair = build(PauliSeparable(np.eye(1), np.eye(1)), AtomSum.gaussian(1.0, 1))
        assert pair.f2.same_fields(conjugate(pair.f1))

    def test_sequence_uses_shortest_dual_vector(self):
        pair = build(PauliSeparable(np.eye(2), np.diag([0.25, 0.5])), O.exp_gaussian())
        # reciprocal of diag(1/4, 1/2) is diag(4, 2): shortest vectors are (0, +-2);
        # the lexicographic tie-break picks lambda = (0, -2), so s = {-lambda: 1, lambda: i}
        pts = {tuple(lam): c for lam, c in pair.sequence.points()}
        assert pts == {(0.0, 2.0): 1, (0.0, -2.0): 1j}

    def test_complex_window_rejected(self):
        with pytest.raises(HypothesisError, match="real-valued"):
            build(PauliSeparable(np.eye(2), np.eye(2)), complex_window(2))


class TestRealSign:
    def test_default_sequence(self):
        pair = build(RealSign(Lattice(np.eye(1) / 4)), AtomSum.gaussian(1.0, 1))
        assert pair.sequence.entries == {(-1,): 1 + 2j, (1,): 1 - 2j}
        assert pair.certificate.seq_hermitian

    def test_non_hermitian_rejected(self):
        with pytest.raises(HypothesisError, match="Hermitian"):
            build(RealSign(Lattice(np.eye(1))), AtomSum.gaussian(1.0, 1), {1: 1j, -1: 1j})

    def test_complex_window_rejected(self):
        with pytest.raises(HypothesisError, match="real-valued"):
            build(RealSign(Lattice(np.eye(1))), complex_window(1))

    def test_equality_set_is_lattice_times_free(self):
        pair = build(RealSign(Lattice(np.eye(2) / 4)), O.exp_gaussian())
        eq = pair.equality_set
        assert eq.contains([0.25, -0.5, 0.123, 9.87])
        assert not eq.contains([0.1, 0.0, 0.0, 0.0])


class TestRational:
    def test_real_window_delegates_to_fourier_word(self):
        pair = build(RationalLattice(((F(1, 2), F(1, 3)), (0, F(1, 5)))), AtomSum.gaussian(1.0, 1))
        assert [type(g) for g in pair.word.factors] == [FourierJ]
        assert np.allclose(pair.sequence.lattice.gen, [[6.0]])

    def test_complex_window_delegates_to_factored(self):
        pair = build(RationalLattice(((F(1, 2), F(1, 3)), (0, F(1, 5)))), complex_window(1))
        assert len(pair.word) == 0
        assert np.allclose(pair.sequence.lattice.gen, [[5.0]])

    def test_equality_on_original_lattice(self):
        L = ((F(1, 2), F(1, 3)), (0, F(1, 5)))
        pair = build(RationalLattice(L), AtomSum.gaussian(1.0, 1))
        assert pair.equality_set.kind == "lattice"
        assert np.allclose(pair.equality_set.lattice.gen, [[0.5, 1 / 3], [0, 0.2]])

    def test_wrong_size(self):
        with pytest.raises(HypothesisError, match="dimension"):
            build(RationalLattice(((1, 0), (0, 1))), O.exp_gaussian())


class TestShifted:
    def test_zero_shift_is_identity(self):
        base = example_i()
        g = O.exp_gaussian()
        sh = build(Shifted(SemiDiscrete(SympWord.identity(2), Lattice(np.eye(2) / 8)), np.zeros(4)), g, EX1_SEQ)
        assert sh.f1.same_fields(base.f1) and sh.f2.same_fields(base.f2)

    def test_points_are_translated(self):
        g = O.exp_gaussian()
        p = np.array([0.3, -0.2, 0.05, 0.01])
        base_sc = SemiDiscrete(SympWord.identity(2), Lattice(np.eye(2) / 8))
        base = build(base_sc, g, EX1_SEQ)
        sh = build(Shifted(base_sc, p), g, EX1_SEQ)
        assert np.allclose(equality_points(sh, 20, 5.0), equality_points(base, 20, 5.0) + p)
        assert check_equality_on_set(sh, equality_points(sh, 20, 5.0)).passed


class TestDefaults:
    def test_d2(self):
        s = default_sequence(Lattice(8 * np.eye(2)))
        assert s.entries == {(0, 0): 1, (0, 1): 1 + 1j, (1, 0): 1j}
        assert not is_on_line(s)

    def test_d1(self):
        s = default_sequence(Lattice([[2.0]]))
        assert s.entries == {(-1,): 1, (0,): 1j, (1,): 1 + 1j}
        assert not is_on_line(s)

    def test_example_ii_four_point_variant(self):
        B = 5 * np.array([[1, 0], [-1 / np.sqrt(3), 2 / np.sqrt(3)]])
        s = CoeffSeq(Lattice(B), {**EX1_SEQ, (1, 1): 0.5 + 0.5j})
        assert not is_on_line(s)
        assert np.allclose(Lattice(B).point((1, 1)), B[:, 0] + B[:, 1])


class TestErrors:
    def test_sequence_on_line(self):
        with pytest.raises(HypothesisError, match="ell\\^2_O"):
            build(SemiDiscrete(SympWord.identity(2), Lattice(np.eye(2))), O.exp_gaussian(), {(0, 0): 1, (1, 0): -2})

    def test_dimension_mismatch(self):
        with pytest.raises(HypothesisError, match="dimension"):
            build(SemiDiscrete(SympWord.identity(1), Lattice(np.eye(1))), O.exp_gaussian())
        with pytest.raises(HypothesisError, match="dimension"):
            build(AnyLattice2D(np.eye(2)), O.exp_gaussian())
        with pytest.raises(HypothesisError, match="dimension"):
            build(PauliSeparable(np.eye(1), np.eye(1)), O.exp_gaussian())

    def test_sequence_on_wrong_lattice(self):
        with pytest.raises(HypothesisError):
            build(
                SemiDiscrete(SympWord.identity(2), Lattice(np.eye(2) / 8)),
                O.exp_gaussian(),
                default_sequence(Lattice(np.eye(2))),
            )

    def test_hypothesis_name_attribute(self):
        try:
            build(RealSign(Lattice(np.eye(1))), complex_window(1))
        except HypothesisError as exc:
            assert "real-valued window" in exc.hypothesis
        else:  # pragma: no cover
            pytest.fail("expected HypothesisError")


class TestEqualityPoints:
    def test_factored_subset(self):
        pair = build(FactoredLattice(SympWord.identity(2), 8 * np.eye(2), 8 * np.eye(2)), complex_window(2))
        pts = equality_points(pair, 100, 20.0)
        assert np.all(np.abs(pts / 8 - np.round(pts / 8)) < 1e-12)
        assert np.all(np.linalg.norm(pts, axis=1) <= 20 + 1e-9)

    def test_closest_first(self):
        pair = build(FactoredLattice(SympWord.identity(1), np.eye(1), np.eye(1)), complex_window(1))
        pts = equality_points(pair, 5, 3.0)
        assert np.allclose(np.linalg.norm(pts, axis=1), [0, 1, 1, 1, 1])

    def test_deterministic(self):
        pair = example_i()
        assert np.array_equal(equality_points(pair, 30, 10.0), equality_points(pair, 30, 10.0))

    def test_count_must_be_positive(self):
        with pytest.raises(ValueError):
            equality_points(example_i(), 0, 1.0)

    def test_equality_set_serialization(self):
        d = example_i().equality_set.to_dict()
        assert d["kind"] == "semi-discrete"
        assert np.allclose(d["transform"], np.eye(4))
        assert isinstance(EqualitySet("lattice", Lattice(np.eye(2)), np.zeros(2)).to_dict()["lattice"], list)

    def test_reciprocal_convention(self):
        # the scenario lattice is the sampling lattice; shifts live on its reciprocal
        pair = example_i()
        assert np.allclose(pair.sequence.lattice.gen, reciprocal(Lattice(np.eye(2) / 8)).gen)
