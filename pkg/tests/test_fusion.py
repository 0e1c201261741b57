import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poifair.fusion import (
    OBJECTIVE_MAX_ACC_UNF,
    PRODUCT,
    SUM,
    WEIGHTED_SUM,
    ContextScores,
    FusionWeights,
    fuse,
    fuse_arrays,
    normalize_scores,
    renormalize_weighted_sum,
    rule_weights,
    simplex_grid,
    weight_sweep,
)

scores_st = st.floats(min_value=0, max_value=1e6, allow_nan=False)


class TestRuleWeights:
    def test_product_preset(self):
        w = rule_weights(PRODUCT)
        assert w.as_tuple() == (0, 0, 0, 0, 0, 0, 1)

    def test_sum_preset(self):
        w = rule_weights(SUM)
        assert w.as_tuple() == (1, 1, 1, 0, 0, 0, 0)

    def test_weighted_sum_projection(self):
        w = rule_weights(WEIGHTED_SUM, (1.0, 0.0, 0.0))
        s = ContextScores(0.7, 0.2, 0.9)
        assert fuse(s, w) == pytest.approx(0.7)

    def test_invalid_simplex(self):
        with pytest.raises(ValueError):
            rule_weights(WEIGHTED_SUM, (0.5, 0.5, 0.5))
        with pytest.raises(ValueError):
            rule_weights(WEIGHTED_SUM, (-0.2, 0.6, 0.6))
        with pytest.raises(ValueError):
            rule_weights("mystery")


class TestFuse:
    def test_product_example(self):
        s = ContextScores(0.5, 0.4, 0.2)
        assert fuse(s, rule_weights(PRODUCT)) == pytest.approx(0.04, abs=1e-12)

    def test_sum_example(self):
        s = ContextScores(0.5, 0.4, 0.2)
        assert fuse(s, rule_weights(SUM)) == pytest.approx(1.1, abs=1e-12)

    def test_all_zero(self):
        s = ContextScores(0.0, 0.0, 0.0)
        for rule in (PRODUCT, SUM):
            assert fuse(s, rule_weights(rule)) == 0.0

    def test_full_polynomial(self):
        w = FusionWeights(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7)
        c1, c2, c3 = 2.0, 3.0, 5.0
        expected = (
            0.1 * c1 + 0.2 * c2 + 0.3 * c3
            + 0.4 * c1 * c2 + 0.5 * c1 * c3 + 0.6 * c2 * c3
            + 0.7 * c1 * c2 * c3
        )
        assert fuse(ContextScores(c1, c2, c3), w) == pytest.approx(expected, abs=1e-12)

    @given(c1=scores_st, c2=scores_st, c3=scores_st)
    @settings(max_examples=200)
    def test_product_equals_multiplication(self, c1, c2, c3):
        s = ContextScores(c1, c2, c3)
        assert fuse(s, rule_weights(PRODUCT)) == pytest.approx(c1 * c2 * c3, rel=1e-12, abs=1e-12)

    @given(c1=scores_st, c2=scores_st, c3=scores_st)
    @settings(max_examples=200)
    def test_sum_equals_addition(self, c1, c2, c3):
        s = ContextScores(c1, c2, c3)
        assert fuse(s, rule_weights(SUM)) == pytest.approx(c1 + c2 + c3, rel=1e-12, abs=1e-12)

    def test_disabled_context_product_neutral(self):
        s = ContextScores(0.5, 0.4, 0.0, enabled=(True, True, False))
        assert fuse(s, rule_weights(PRODUCT)) == pytest.approx(0.2)

    def test_disabled_context_sum_dropped(self):
        s = ContextScores(0.5, 0.4, 0.9, enabled=(True, True, False))
        assert fuse(s, rule_weights(SUM)) == pytest.approx(0.9)

    def test_array_fuse_matches_scalar(self):
        rng = np.random.default_rng(0)
        mat = rng.random((50, 3))
        w = FusionWeights(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7)
        batch = fuse_arrays(mat, w)
        for row, val in zip(mat, batch):
            assert val == pytest.approx(fuse(ContextScores(*row), w), abs=1e-12)


class TestRenormalize:
    def test_disabled_lambda_redistributed(self):
        lam = renormalize_weighted_sum((0.5, 0.3, 0.2), (True, True, False))
        assert lam == pytest.approx((0.625, 0.375, 0.0))

    def test_all_mass_on_disabled(self):
        lam = renormalize_weighted_sum((0.0, 0.0, 1.0), (True, True, False))
        assert lam == pytest.approx((0.5, 0.5, 0.0))


class TestNormalize:
    def test_min_max(self):
        out = normalize_scores(np.array([[2.0], [4.0], [6.0]]))
        assert out.ravel() == pytest.approx([0.0, 0.5, 1.0])

    def test_constant_convention(self):
        out = normalize_scores(np.array([[3.0], [3.0], [3.0]]))
        assert out.ravel() == pytest.approx([0.5, 0.5, 0.5])

    def test_random_matches_direct_formula(self):
        rng = np.random.default_rng(3)
        raw = rng.random((40, 3)) * 100
        out = normalize_scores(raw)
        for j in range(3):
            lo, hi = raw[:, j].min(), raw[:, j].max()
            assert out[:, j] == pytest.approx((raw[:, j] - lo) / (hi - lo), abs=1e-12)

    def test_preserves_candidate_ordering(self):
        rng = np.random.default_rng(4)
        raw = rng.random((30, 3))
        out = normalize_scores(raw)
        for j in range(3):
            assert np.array_equal(np.argsort(raw[:, j]), np.argsort(out[:, j]))


class TestSweep:
    def test_grid_counts(self):
        assert len(simplex_grid(0.1)) == 66
        assert len(simplex_grid(0.5)) == 6

    def test_grid_points_on_simplex(self):
        for lam in simplex_grid(0.1):
            assert min(lam) >= 0
            assert sum(lam) == pytest.approx(1.0, abs=1e-9)

    def test_bad_step(self):
        with pytest.raises(ValueError):
            simplex_grid(0.3)

    def _neutral_context_eval(self, lambdas):
        # context 1 is group-neutral: delta shrinks as lambda1 grows
        l1 = lambdas[0]
        delta = 1.0 - l1
        ndcg = 0.5
        return {
            "ndcg": ndcg,
            "ndcg_leisure": ndcg + delta / 2,
            "ndcg_working": ndcg - delta / 2,
            "delta_ndcg": delta,
            "acc_unf": ndcg / delta if delta else float("inf"),
        }

    def test_selects_neutral_corner(self):
        best, table = weight_sweep(self._neutral_context_eval, step=0.1)
        assert best.lambdas == (1.0, 0.0, 0.0)
        assert len(table) == 66
        # independent exhaustive recomputation
        oracle = min(
            ((self._neutral_context_eval(l)["delta_ndcg"], l) for l in simplex_grid(0.1))
        )
        assert best.delta_ndcg == oracle[0]

    def test_tie_break_deterministic(self):
        def flat(lambdas):
            return {
                "ndcg": 0.5,
                "ndcg_leisure": 0.5,
                "ndcg_working": 0.5,
                "delta_ndcg": 0.0,
                "acc_unf": float("inf"),
            }

        best, _ = weight_sweep(flat, step=0.5)
        assert best.lambdas == min(simplex_grid(0.5))

    def test_max_acc_unf_objective(self):
        best, _ = weight_sweep(
            self._neutral_context_eval, step=0.5, objective=OBJECTIVE_MAX_ACC_UNF
        )
        assert best.lambdas == (1.0, 0.0, 0.0)

    def test_unknown_objective(self):
        with pytest.raises(ValueError):
            weight_sweep(self._neutral_context_eval, objective="party")
