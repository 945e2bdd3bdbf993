import io

import numpy as np
import pytest

from paydev.errors import ColumnMismatchError
from paydev.ml import (
    classify,
    fit_forest,
    fit_tree,
    introspect,
    load_model,
    make_dataset,
    predict_proba,
    save_model,
)


def _dataset(X, y, columns=None):
    columns = columns or [f"f{i}" for i in range(X.shape[1])]
    return make_dataset(X, y, columns, [str(i) for i in range(len(y))])


def _separable(rng, n=400):
    X = rng.normal(size=(n, 2))
    y = (X[:, 0] + X[:, 1] > 0).astype(int)
    return X, y


class TestFit:
    def test_degenerate_forest_equals_tree(self, rng):
        X = rng.normal(size=(150, 4))
        y = (X[:, 1] > 0.3).astype(int)
        data = _dataset(X, y)
        forest = fit_forest(data, n_trees=1, mtry=4, seed=3, bootstrap=False)
        tree = fit_tree(data, minsplit=2, cp=0.0, maxdepth=None)
        Xt = rng.normal(size=(60, 4))
        assert np.array_equal(predict_proba(forest, Xt), predict_proba(tree, Xt))

    def test_same_seed_bitwise_identical(self, rng):
        X, y = _separable(rng, 200)
        data = _dataset(X, y)
        Xt = rng.normal(size=(40, 2))
        a = predict_proba(fit_forest(data, n_trees=20, seed=11), Xt)
        b = predict_proba(fit_forest(data, n_trees=20, seed=11), Xt)
        assert np.array_equal(a, b)

    def test_different_seed_differs(self, rng):
        X, y = _separable(rng, 200)
        data = _dataset(X, y)
        Xt = rng.normal(size=(40, 2))
        a = predict_proba(fit_forest(data, n_trees=20, seed=11), Xt)
        b = predict_proba(fit_forest(data, n_trees=20, seed=12), Xt)
        assert not np.array_equal(a, b)

    def test_thread_count_does_not_change_model(self, rng):
        X, y = _separable(rng, 300)
        data = _dataset(X, y)
        Xt = rng.normal(size=(80, 2))
        serial = predict_proba(fit_forest(data, n_trees=24, seed=5, n_jobs=1), Xt)
        threaded = predict_proba(fit_forest(data, n_trees=24, seed=5, n_jobs=8), Xt)
        assert np.array_equal(serial, threaded)

    def test_holdout_auc_on_separable_data(self, rng):
        from paydev.evaluation import roc_auc

        X, y = _separable(rng, 400)
        train = _dataset(X[:300], y[:300])
        model = fit_forest(train, n_trees=60, seed=7)
        scores = predict_proba(model, X[300:])
        assert roc_auc(scores, y[300:]) >= 0.95

    def test_mean_of_tree_probabilities(self, rng):
        # two stumps with different leaf probabilities average per row
        X = rng.normal(size=(50, 2))
        y = (rng.random(50) < 0.4).astype(int)
        data = _dataset(X, y)
        model = fit_forest(data, n_trees=2, seed=1)
        Xt = rng.normal(size=(10, 2))
        from paydev.ml.tree import tree_proba

        expected = (tree_proba(model.trees[0], Xt) + tree_proba(model.trees[1], Xt)) / 2
        assert np.array_equal(predict_proba(model, Xt), expected)

    def test_mtry_default_sqrt(self, rng):
        X = rng.normal(size=(60, 9))
        y = (rng.random(60) < 0.5).astype(int)
        model = fit_forest(_dataset(X, y), n_trees=3, seed=1)
        assert model.mtry == 3

    def test_mtry_bounds(self, rng):
        X, y = _separable(rng, 50)
        with pytest.raises(ValueError):
            fit_forest(_dataset(X, y), n_trees=2, mtry=3, seed=1)

    def test_scaling_feature_preserves_predictions(self, rng):
        X, y = _separable(rng, 200)
        data = _dataset(X, y)
        scaled = X.copy()
        scaled[:, 0] *= 250.0
        other = _dataset(scaled, y)
        Xt = rng.normal(size=(40, 2))
        Xt_scaled = Xt.copy()
        Xt_scaled[:, 0] *= 250.0
        a = predict_proba(fit_forest(data, n_trees=15, seed=2), Xt)
        b = predict_proba(fit_forest(other, n_trees=15, seed=2), Xt_scaled)
        assert np.array_equal(a, b)


class TestPredictContract:
    def test_column_mismatch_names_columns(self, rng):
        X, y = _separable(rng, 60)
        model = fit_forest(_dataset(X, y, columns=["a", "b"]), n_trees=2, seed=1)
        with pytest.raises(ColumnMismatchError) as exc:
            predict_proba(model, rng.normal(size=(5, 3)), columns=["a", "b", "c"])
        assert "c" in str(exc.value)

    def test_column_reorder_allowed(self, rng):
        X, y = _separable(rng, 60)
        model = fit_forest(_dataset(X, y, columns=["a", "b"]), n_trees=2, seed=1)
        Xt = rng.normal(size=(5, 2))
        direct = predict_proba(model, Xt, columns=["a", "b"])
        swapped = predict_proba(model, Xt[:, [1, 0]], columns=["b", "a"])
        assert np.array_equal(direct, swapped)

    def test_classify_threshold(self, rng):
        X, y = _separable(rng, 100)
        model = fit_forest(_dataset(X, y), n_trees=10, seed=1)
        p = predict_proba(model, X)
        assert np.array_equal(classify(model, X), (p >= 0.5).astype(np.int8))

    def test_probabilities_in_unit_interval(self, rng):
        X, y = _separable(rng, 100)
        model = fit_forest(_dataset(X, y), n_trees=10, seed=1)
        p = predict_proba(model, rng.normal(size=(200, 2)) * 5)
        assert ((p >= 0) & (p <= 1)).all()


class TestIntrospectAndSerialize:
    def test_importance_ranks_informative_feature(self, rng):
        X = rng.normal(size=(300, 3))
        y = (X[:, 2] > 0).astype(int)
        model = fit_forest(_dataset(X, y, columns=["n1", "n2", "signal"]),
                           n_trees=30, seed=4)
        report = introspect(model)
        assert report.splitlines()[1].strip().startswith("signal")

    def test_round_trip_exact(self, rng):
        X, y = _separable(rng, 80)
        model = fit_forest(_dataset(X, y), n_trees=5, seed=9)
        buf = io.StringIO()
        save_model(model, buf)
        loaded = load_model(io.StringIO(buf.getvalue()))
        again = io.StringIO()
        save_model(loaded, again)
        assert buf.getvalue() == again.getvalue()
        Xt = rng.normal(size=(25, 2))
        assert np.array_equal(predict_proba(model, Xt), predict_proba(loaded, Xt))
