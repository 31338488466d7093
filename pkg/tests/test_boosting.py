"""Trainer correctness, anchored by an exhaustive stump-search oracle that
shares no code with the kernel."""

import numpy as np
import pytest

from metaland.errors import DataError
from metaland.valuation.boosting import GbtParams, train_gbt


def oracle_best_stump(X, y, lam=0.0, min_leaf=1):
    """Try every (feature, midpoint threshold); pick the split minimizing the
    two-leaf squared error. Returns (feature, threshold)."""
    n, k = X.shape
    best = (float("inf"), None, None)
    for f in range(k):
        for thr in sorted(set((a + b) / 2.0 for a, b in zip(sorted(set(X[:, f]))[:-1], sorted(set(X[:, f]))[1:]))):
            left = y[X[:, f] < thr]
            right = y[X[:, f] >= thr]
            if len(left) < min_leaf or len(right) < min_leaf:
                continue
            sse = ((left - left.mean()) ** 2).sum() + ((right - right.mean()) ** 2).sum()
            if sse < best[0] - 1e-12:
                best = (sse, f, thr)
    return best[1], best[2]


def test_single_stump_matches_exhaustive_oracle():
    rng = np.random.default_rng(2024)
    for trial in range(25):
        X = rng.normal(size=(10, 3))
        y = rng.normal(size=10)
        params = GbtParams(n_trees=1, max_depth=1, learning_rate=1.0, lam=0.0)
        model = train_gbt(X, y, params, seed=trial)
        tree = model.trees[0]
        want_f, want_thr = oracle_best_stump(X, y)
        assert tree.n_nodes == 3
        assert int(tree.feature[0]) == want_f
        assert float(tree.threshold[0]) == pytest.approx(want_thr, abs=1e-12)


def test_stump_leaf_values_are_side_means():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([1.0, 1.0, 5.0, 5.0])
    model = train_gbt(X, y, GbtParams(n_trees=1, max_depth=1, learning_rate=1.0, lam=0.0), seed=0)
    tree = model.trees[0]
    assert float(tree.threshold[0]) == 1.5
    # residuals vs base 3.0 are [-2,-2,+2,+2]; leaves are the residual means
    left, right = int(tree.left[0]), int(tree.right[0])
    assert float(tree.value[left]) == pytest.approx(-2.0)
    assert float(tree.value[right]) == pytest.approx(2.0)
    assert model.predict(np.array([0.5])) == pytest.approx(1.0)


def test_constant_target_reproduced_exactly():
    X = np.arange(12.0).reshape(6, 2)
    y = np.full(6, 3.7)
    model = train_gbt(X, y, GbtParams(n_trees=5, max_depth=3), seed=1)
    assert model.base_score == 3.7
    preds = model.predict(X)
    assert np.all(preds == 3.7)
    for tree in model.trees:
        assert np.all(tree.value[tree.feature < 0] == 0.0)


def test_training_loss_non_increasing_with_full_sampling():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(120, 4))
    y = X[:, 0] * 3 + np.sin(X[:, 1]) + rng.normal(0, 0.3, 120)
    params = GbtParams(n_trees=200, max_depth=3, learning_rate=0.1, subsample=1.0, colsample=1.0)
    model = train_gbt(X, y, params, seed=0)
    losses = model.train_losses
    assert len(losses) == 200
    assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))


def test_train_rmse_decreases_with_more_trees():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(80, 3))
    y = X[:, 0] ** 2 + X[:, 2]
    losses = train_gbt(X, y, GbtParams(n_trees=60, max_depth=2), seed=0).train_losses
    assert losses[-1] < losses[0]


def test_prediction_invariant_under_rank_preserving_transform():
    """Splits depend only on value order: monotonically re-scaling a feature
    must not change training-set predictions."""
    rng = np.random.default_rng(8)
    X = rng.uniform(1, 2, size=(60, 3))
    y = X[:, 0] * 5 + rng.normal(0, 0.1, 60)
    params = GbtParams(n_trees=40, max_depth=3, learning_rate=0.2)
    base = train_gbt(X, y, params, seed=3).predict(X)
    X2 = X.copy()
    X2[:, 0] = np.exp(X2[:, 0])  # strictly increasing
    again = train_gbt(X2, y, params, seed=3).predict(X2)
    assert np.allclose(base, again, atol=1e-9)


def test_batch_and_row_predictions_agree():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(50, 4))
    y = rng.normal(size=50)
    model = train_gbt(X, y, GbtParams(n_trees=20, max_depth=4), seed=2)
    batch = model.predict(X)
    rows = np.array([model.base_score + sum(t.predict_row(x) for t in model.trees) for x in X])
    assert np.allclose(batch, rows, atol=0)


def test_empty_ensemble_predicts_base_score():
    X = np.zeros((4, 2))
    y = np.array([1.0, 2.0, 3.0, 4.0])
    model = train_gbt(X, y, GbtParams(n_trees=0), seed=0)
    assert model.trees == []
    assert np.all(model.predict(X) == model.base_score)


def test_degenerate_params_rejected():
    X = np.zeros((4, 2))
    y = np.arange(4.0)
    with pytest.raises(DataError):
        train_gbt(X, y, GbtParams(max_depth=0), seed=0)
    with pytest.raises(DataError):
        train_gbt(X, y, GbtParams(learning_rate=0.0), seed=0)
    with pytest.raises(DataError):
        train_gbt(X, y, GbtParams(learning_rate=-1.0), seed=0)
    with pytest.raises(DataError):
        train_gbt(X[:1], y[:1], GbtParams(), seed=0)


def test_log_target_predicts_in_usd_space():
    rng = np.random.default_rng(13)
    X = rng.uniform(0, 1, size=(200, 3))
    y = np.exp(3.0 * X[:, 0] + rng.normal(0, 0.05, 200)) * 100
    params = GbtParams(n_trees=80, max_depth=3, learning_rate=0.2)
    model = train_gbt(X, y, params, seed=0, log_target=True)
    assert model.log_target is True
    preds = model.predict(X)
    assert np.all(preds > 0)
    # fits the multiplicative law well once in log space
    r2 = 1 - np.sum((y - preds) ** 2) / np.sum((y - y.mean()) ** 2)
    assert r2 > 0.9


def test_log_target_rejects_negative_targets():
    with pytest.raises(DataError, match="non-negative"):
        train_gbt(np.zeros((4, 1)), np.array([1.0, -2.0, 3.0, 4.0]), GbtParams(), seed=0, log_target=True)


def test_log_target_roundtrips_through_serialization(tmp_path):
    from metaland.valuation.modelio import load_model, save_model

    rng = np.random.default_rng(14)
    X = rng.uniform(size=(50, 2))
    y = np.exp(X[:, 0]) * 10
    model = train_gbt(X, y, GbtParams(n_trees=10, max_depth=2), seed=1, log_target=True)
    path = tmp_path / "m.json"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.log_target is True
    assert np.array_equal(model.predict(X), loaded.predict(X))


def test_trees_bounded_by_configured_count():
    rng = np.random.default_rng(10)
    X = rng.normal(size=(30, 2))
    y = rng.normal(size=30)
    model = train_gbt(X, y, GbtParams(n_trees=7), seed=0)
    assert len(model.trees) == 7


def test_node_feature_indices_within_schema():
    rng = np.random.default_rng(11)
    X = rng.normal(size=(40, 5))
    y = rng.normal(size=40)
    model = train_gbt(X, y, GbtParams(n_trees=10, max_depth=4, colsample=0.7), seed=4)
    for tree in model.trees:
        sf = tree.split_features()
        if len(sf):
            assert sf.max() < 5
            assert sf.min() >= 0


def test_determinism_same_seed_same_model():
    rng = np.random.default_rng(12)
    X = rng.normal(size=(60, 3))
    y = rng.normal(size=60)
    params = GbtParams(n_trees=15, max_depth=3, subsample=0.7, colsample=0.7)
    a = train_gbt(X, y, params, seed=99)
    b = train_gbt(X, y, params, seed=99)
    assert np.array_equal(a.predict(X), b.predict(X))
    for ta, tb in zip(a.trees, b.trees):
        assert np.array_equal(ta.feature, tb.feature)
        assert np.array_equal(ta.threshold, tb.threshold)
