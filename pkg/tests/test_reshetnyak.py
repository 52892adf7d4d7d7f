import math

import numpy as np
import pytest

from modlab import (
    Grid,
    NormTag,
    Polyline,
    ScalarField,
    VectorField,
    ac_bound_check,
    finite_diff_gradient,
    lp_norm,
    norm_equivalence_check,
    r_norm,
    sampled_dual_functionals,
    sampled_upper_gradient,
    scalarize,
    upper_gradient_star,
    w_norm,
)
from modlab.reshetnyak import _spectral_norms
from modlab.sobolev import gradient_length


def square_grid(res):
    return Grid(box_min=[0.0, 0.0], box_max=[1.0, 1.0], resolution=[res, res])


def identity_field(res, tag):
    g = square_grid(res)
    return VectorField(grid=g, values=g.cell_centers().copy(), norm=tag)


class TestUpperGradientStar:
    def test_identity_map_linf_values(self):
        ub = upper_gradient_star(identity_field(16, NormTag.LINF))
        assert ub.exact
        assert ub.dual_set_descriptor == "exact-extreme-points"
        # sup over the signed coordinate functionals of |grad <e_n, f>| = 1
        assert np.allclose(ub.gstar.values, 1.0)

    def test_identity_map_l2_values_spectral(self):
        ub = upper_gradient_star(identity_field(16, NormTag.L2))
        assert ub.dual_set_descriptor == "spectral"
        assert np.allclose(ub.gstar.values, 1.0)

    def test_scalar_field_reduces_to_gradient_length(self, rng):
        g = square_grid(16)
        vals = rng.normal(size=(g.num_cells, 1))
        for tag in (NormTag.L1, NormTag.L2, NormTag.LINF):
            f = VectorField(grid=g, values=vals, norm=tag)
            ub = upper_gradient_star(f)
            gl = gradient_length(finite_diff_gradient(f))
            assert np.allclose(ub.gstar.values, gl.values, atol=1e-12)

    def test_l1_values_exact_via_sign_vectors(self, rng):
        g = square_grid(8)
        f = VectorField(grid=g, values=rng.normal(size=(g.num_cells, 3)), norm=NormTag.L1)
        ub = upper_gradient_star(f)
        assert ub.exact
        # brute-force sup over all 8 sign vectors as an oracle
        J = np.stack([c.values for c in finite_diff_gradient(f).components], axis=1)
        worst = np.zeros(g.num_cells)
        for s1 in (1.0, -1.0):
            for s2 in (1.0, -1.0):
                for s3 in (1.0, -1.0):
                    v = np.array([s1, s2, s3])
                    worst = np.maximum(worst, np.sqrt(np.sum((J @ v) ** 2, axis=1)))
        assert np.allclose(ub.gstar.values, worst, atol=1e-12)

    def test_l1_large_m_falls_back_to_sampled(self, rng):
        g = square_grid(4)
        f = VectorField(grid=g, values=rng.normal(size=(g.num_cells, 20)), norm=NormTag.L1)
        ub = upper_gradient_star(f, sample_count=32, seed=5)
        assert not ub.exact
        assert "sampled(count=32,seed=5)" in ub.dual_set_descriptor
        assert "warning" in ub.dual_set_descriptor

    def test_spectral_norm_matches_svd_oracle(self, rng):
        J = rng.normal(size=(50, 2, 4))
        mine = _spectral_norms(J)
        oracle = np.array([np.linalg.svd(j, compute_uv=False)[0] for j in J])
        assert np.allclose(mine, oracle, atol=1e-9)

    def test_domination_of_sampled_scalarizations(self, rng):
        # |grad <v, f>| <= g* pointwise for every dual functional, exact modes
        g = square_grid(12)
        for tag in (NormTag.L2, NormTag.LINF):
            f = VectorField(grid=g, values=rng.normal(size=(g.num_cells, 3)), norm=tag)
            ub = upper_gradient_star(f)
            for v in sampled_dual_functionals(tag, 3, 20, seed=2):
                s = scalarize(f, v)
                sg = gradient_length(finite_diff_gradient(VectorField(grid=g, values=s.values[:, None], norm=tag)))
                assert np.all(sg.values <= ub.gstar.values + 1e-10)

    def test_sampled_mode_monotone_under_enlargement(self, rng):
        g = square_grid(8)
        f = VectorField(grid=g, values=rng.normal(size=(g.num_cells, 20)), norm=NormTag.L1)
        small = sampled_upper_gradient(f, sample_count=16, seed=9)
        large = sampled_upper_gradient(f, sample_count=64, seed=9)
        assert np.all(large.gstar.values >= small.gstar.values - 1e-15)


class TestRNorm:
    def test_scalar_field_equals_w_norm(self, rng):
        g = square_grid(16)
        f = VectorField(grid=g, values=rng.normal(size=(g.num_cells, 1)), norm=NormTag.L2)
        for p in (1.0, 2.0):
            assert abs(r_norm(f, p) - w_norm(f, p)) <= 1e-9 * (1 + w_norm(f, p))

    def test_zero_field(self):
        g = square_grid(8)
        f = VectorField(grid=g, values=np.zeros((g.num_cells, 2)), norm=NormTag.LINF)
        assert r_norm(f, 2.0) == 0.0

    def test_identity_linf_strict_gap(self):
        # r = ||f||_2 + 1 while w = ||f||_2 + sqrt(2): the sqrt(N) gap is real
        f = identity_field(32, NormTag.LINF)
        lp = lp_norm(f, 2.0)
        r = r_norm(f, 2.0)
        w = w_norm(f, 2.0)
        assert r == pytest.approx(lp + 1.0, rel=1e-9)
        assert w == pytest.approx(lp + math.sqrt(2.0), rel=1e-9)
        assert r < w

    def test_p_below_one_rejected(self):
        f = identity_field(8, NormTag.L2)
        with pytest.raises(ValueError):
            r_norm(f, 0.99)


class TestNormEquivalence:
    def test_identity_linf_ratio_strictly_inside(self):
        report = norm_equivalence_check(identity_field(32, NormTag.LINF), 2.0)
        assert report.passed
        assert 1.0 < report.meta["ratio"] < math.sqrt(2.0)

    def test_scalar_ratio_is_one(self, rng):
        g = square_grid(12)
        f = VectorField(grid=g, values=rng.normal(size=(g.num_cells, 1)), norm=NormTag.L1)
        report = norm_equivalence_check(f, 2.0)
        assert report.passed
        assert report.meta["ratio"] == pytest.approx(1.0, abs=1e-9)

    def test_random_fields_all_tags(self, rng):
        g = square_grid(10)
        for tag in (NormTag.L1, NormTag.L2, NormTag.LINF):
            for M in (1, 2, 4):
                f = VectorField(grid=g, values=rng.normal(size=(g.num_cells, M)), norm=tag)
                for p in (1.0, 2.0):
                    report = norm_equivalence_check(f, p, tol=1e-9)
                    assert report.passed, (tag, M, p, report.meta)

    def test_sampled_mode_downgrades_to_one_sided(self, rng):
        g = square_grid(6)
        f = VectorField(grid=g, values=rng.normal(size=(g.num_cells, 20)), norm=NormTag.L1)
        report = norm_equivalence_check(f, 2.0)
        assert report.meta["one_sided"]
        names = [c.name for c in report.checks]
        assert "r_lower_le_w" in names
        assert "w_le_sqrtN_r" not in names


class TestAcBound:
    def test_lipschitz_field_with_unit_majorant(self, rng):
        g = square_grid(64)
        centers = g.cell_centers()
        f = VectorField(
            grid=g,
            values=np.stack([np.sin(centers[:, 0]), np.cos(centers[:, 1])], axis=-1),
            norm=NormTag.L2,
        )
        ones = ScalarField(grid=g, values=np.ones(g.num_cells))
        for _ in range(5):
            c = Polyline(rng.uniform(0.05, 0.95, size=(3, 2)))
            assert ac_bound_check(f, ones, c, tol=1e-3).passed

    def test_jump_field_fails_across_the_face(self):
        g = square_grid(64)
        centers = g.cell_centers()
        vals = np.zeros((g.num_cells, 2))
        vals[centers[:, 0] >= 0.5, 0] = 1.0
        f = VectorField(grid=g, values=vals, norm=NormTag.L2)
        ones = ScalarField(grid=g, values=np.ones(g.num_cells))
        c = Polyline([[0.3, 0.5], [0.7, 0.5]])
        report = ac_bound_check(f, ones, c, tol=1e-6)
        assert not report.passed

    def test_s_equals_t_is_trivially_bounded(self):
        g = square_grid(16)
        f = VectorField(grid=g, values=g.cell_centers().copy(), norm=NormTag.L2)
        zero = ScalarField(grid=g, values=np.zeros(g.num_cells))
        c = Polyline([[0.2, 0.2], [0.8, 0.8]])
        report = ac_bound_check(f, zero, c, tol=1e-12, num_params=2)
        trivial = [ck for ck in report.checks if ck.value == 0.0 and ck.bound <= 1e-12]
        assert trivial  # the s = t pairs give 0 <= 0

    def test_negative_majorant_rejected(self):
        g = square_grid(8)
        f = VectorField(grid=g, values=np.zeros((g.num_cells, 1)), norm=NormTag.L2)
        bad = ScalarField(grid=g, values=-np.ones(g.num_cells))
        with pytest.raises(ValueError):
            ac_bound_check(f, bad, Polyline([[0.2, 0.2], [0.8, 0.8]]), tol=1e-6)
