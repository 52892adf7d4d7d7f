import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modlab import (
    CapacityError,
    DualFunctional,
    Grid,
    NormTag,
    VectorField,
    bochner_integral,
    dual_ball_extreme_points,
    lp_norm,
    sampled_dual_functionals,
    scalarize,
    value_norm,
)
from modlab.vectorvalues import dual_norm, load_field_csv, save_field_csv

TAGS = [NormTag.L1, NormTag.L2, NormTag.LINF]


def make_field(grid, values, tag=NormTag.L2):
    return VectorField(grid=grid, values=values, norm=tag)


class TestValueNorm:
    def test_3_4_5(self):
        assert value_norm(np.array([3.0, 4.0]), NormTag.L2) == 5.0

    def test_linf_and_l1(self):
        v = np.array([3.0, 4.0])
        assert value_norm(v, NormTag.LINF) == 4.0
        assert value_norm(v, NormTag.L1) == 7.0

    def test_zero_vector(self):
        for tag in TAGS:
            assert value_norm(np.zeros(5), tag) == 0.0

    @given(st.integers(min_value=0, max_value=2**32 - 1), st.floats(min_value=-10, max_value=10))
    @settings(max_examples=50, deadline=None)
    def test_homogeneity(self, seed, c):
        v = np.random.default_rng(seed).normal(size=4)
        for tag in TAGS:
            assert value_norm(c * v, tag) == pytest.approx(abs(c) * value_norm(v, tag), rel=1e-12, abs=1e-12)


class TestBochnerIntegral:
    def test_constant_field_on_volume_two_box(self):
        g = Grid(box_min=[0.0], box_max=[2.0], resolution=[8])
        v = np.array([1.5, -0.5])
        f = make_field(g, np.tile(v, (8, 1)))
        assert np.allclose(bochner_integral(f), 2.0 * v)

    def test_two_cell_simple_function(self):
        # the simple-function integral: sum of measure(E_i) * v_i
        g = Grid(box_min=[0.0], box_max=[1.0], resolution=[2])
        v1, v2 = np.array([1.0, 2.0]), np.array([-3.0, 0.5])
        f = make_field(g, np.stack([v1, v2]))
        assert np.allclose(bochner_integral(f), 0.5 * v1 + 0.5 * v2)

    def test_pairing_identity(self, rng, unit_square_16):
        # <v*, integral f> = integral <v*, f>, relative 1e-9
        for tag in TAGS:
            f = make_field(unit_square_16, rng.normal(size=(unit_square_16.num_cells, 3)), tag)
            v = sampled_dual_functionals(tag, 3, 5, seed=11)[3]
            lhs = float(np.dot(v.coeffs, bochner_integral(f)))
            rhs = float(np.sum(scalarize(f, v).values) * unit_square_16.cell_volume)
            assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)

    def test_linearity(self, rng, unit_square_16):
        a = rng.normal(size=(unit_square_16.num_cells, 2))
        b = rng.normal(size=(unit_square_16.num_cells, 2))
        fa, fb = make_field(unit_square_16, a), make_field(unit_square_16, b)
        fab = make_field(unit_square_16, 2.0 * a - 3.0 * b)
        assert np.allclose(bochner_integral(fab), 2.0 * bochner_integral(fa) - 3.0 * bochner_integral(fb))

    def test_norm_of_integral_bounded_by_l1_norm(self, rng):
        g = Grid(box_min=[0.0, 0.0], box_max=[1.0, 1.0], resolution=[4, 4])
        for tag in TAGS:
            vals = rng.normal(size=(1000, g.num_cells, 3))
            worst = -np.inf
            for k in range(vals.shape[0]):
                f = make_field(g, vals[k], tag)
                excess = value_norm(bochner_integral(f), tag) - lp_norm(f, 1.0)
                worst = max(worst, excess)
            assert worst <= 1e-12


class TestLpNorm:
    def test_constant_on_unit_volume(self):
        g = Grid(box_min=[0.0], box_max=[1.0], resolution=[4])
        v = np.array([3.0, -4.0])
        f = make_field(g, np.tile(v, (4, 1)), NormTag.L2)
        for p in (1.0, 2.0, 3.5):
            assert lp_norm(f, p) == pytest.approx(5.0, rel=1e-12)

    def test_scaling_homogeneity(self, rng, unit_square_16):
        f = make_field(unit_square_16, rng.normal(size=(unit_square_16.num_cells, 2)))
        fc = make_field(unit_square_16, -2.5 * f.values)
        assert lp_norm(fc, 2.0) == pytest.approx(2.5 * lp_norm(f, 2.0), rel=1e-12)

    def test_p_below_one_rejected(self, unit_square_16):
        f = make_field(unit_square_16, np.zeros((unit_square_16.num_cells, 1)))
        with pytest.raises(ValueError):
            lp_norm(f, 0.5)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_minkowski_triangle_inequality(self, seed):
        r = np.random.default_rng(seed)
        g = Grid(box_min=[0.0], box_max=[1.0], resolution=[8])
        tag = TAGS[seed % 3]
        p = [1.0, 2.0, 3.0][seed % 3 - 1]
        a = r.normal(size=(8, 3))
        b = r.normal(size=(8, 3))
        fa, fb = make_field(g, a, tag), make_field(g, b, tag)
        fab = make_field(g, a + b, tag)
        lhs = lp_norm(fab, p)
        rhs = lp_norm(fa, p) + lp_norm(fb, p)
        assert lhs <= rhs * (1 + 1e-9) + 1e-12


class TestScalarize:
    def test_coordinate_functional_extracts_component(self, unit_square_16, rng):
        f = make_field(unit_square_16, rng.normal(size=(unit_square_16.num_cells, 3)), NormTag.LINF)
        e1 = DualFunctional(np.array([1.0, 0.0, 0.0]), NormTag.LINF)
        assert np.array_equal(scalarize(f, e1).values, f.values[:, 0])

    def test_zero_functional(self, unit_square_16, rng):
        f = make_field(unit_square_16, rng.normal(size=(unit_square_16.num_cells, 2)), NormTag.LINF)
        z = DualFunctional(np.zeros(2), NormTag.LINF)
        assert np.all(scalarize(f, z).values == 0.0)

    def test_dual_norm_violation_rejected(self):
        with pytest.raises(ValueError):
            DualFunctional(np.array([1.0, 1.0]), NormTag.LINF)  # l1 norm 2 > 1

    def test_tag_mismatch_rejected(self, unit_square_16, rng):
        f = make_field(unit_square_16, rng.normal(size=(unit_square_16.num_cells, 2)), NormTag.L1)
        v = DualFunctional(np.array([0.5, 0.5]), NormTag.LINF)
        with pytest.raises(ValueError):
            scalarize(f, v)

    def test_pairing_dominated_by_value_norm(self, unit_square_16, rng):
        for tag in TAGS:
            f = make_field(unit_square_16, rng.normal(size=(unit_square_16.num_cells, 4)), tag)
            for v in sampled_dual_functionals(tag, 4, 25, seed=3):
                assert np.all(np.abs(scalarize(f, v).values) <= f.norms() + 1e-12)


class TestDualBallExtremePoints:
    def test_linf_values_signed_coordinates(self):
        pts = dual_ball_extreme_points(NormTag.LINF, 2)
        assert len(pts) == 4
        coords = sorted(tuple(p.coeffs) for p in pts)
        assert coords == [(-1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (1.0, 0.0)]

    def test_l1_values_sign_vectors(self):
        pts = dual_ball_extreme_points(NormTag.L1, 2)
        assert sorted(tuple(p.coeffs) for p in pts) == [
            (-1.0, -1.0),
            (-1.0, 1.0),
            (1.0, -1.0),
            (1.0, 1.0),
        ]

    def test_l2_empty_marker(self):
        assert dual_ball_extreme_points(NormTag.L2, 3) == []

    def test_l1_capacity_error(self):
        with pytest.raises(CapacityError):
            dual_ball_extreme_points(NormTag.L1, 17)

    def test_extreme_point_sup_realizes_dual_pairing_norm(self, rng):
        # sup over the dual ball of <v, w> equals ||w|| by duality
        for tag in (NormTag.L1, NormTag.LINF):
            for _ in range(20):
                w = rng.normal(size=3)
                sup = max(float(np.dot(v.coeffs, w)) for v in dual_ball_extreme_points(tag, 3))
                assert sup == pytest.approx(value_norm(w, tag), rel=1e-12)

    def test_sampled_functionals_are_dual_feasible_and_nested(self):
        for tag in TAGS:
            short = sampled_dual_functionals(tag, 5, 8, seed=7)
            long = sampled_dual_functionals(tag, 5, 16, seed=7)
            for a, b in zip(short, long):
                assert np.array_equal(a.coeffs, b.coeffs)
            for v in long:
                assert dual_norm(v.coeffs, tag) <= 1.0 + 1e-12


class TestFieldIO:
    def test_round_trip(self, tmp_path, rng):
        g = Grid(box_min=[0.0, 0.0], box_max=[1.0, 2.0], resolution=[3, 4])
        f = make_field(g, rng.normal(size=(12, 2)), NormTag.LINF)
        save_field_csv(f, tmp_path / "f.csv")
        f2 = load_field_csv(tmp_path / "f.csv")
        assert f2.norm is NormTag.LINF
        assert np.array_equal(f2.values, f.values)
        assert np.array_equal(f2.grid.resolution, g.resolution)
