import numpy as np
import pytest

import imbal


@pytest.fixture(scope="module")
def data():
    X, y = imbal.generate(n_samples=2000, seed=3)
    return imbal.pca_project(X, 2), y


def test_generate_is_deterministic():
    a = imbal.generate(n_samples=500, seed=1)
    b = imbal.generate(n_samples=500, seed=1)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    assert a[0].shape == (500, 5)
    assert set(np.unique(a[1])) <= {0, 1}


def test_pca_shape_and_decorrelation(data):
    X, _ = data
    assert X.shape == (2000, 2)
    cov = np.cov(X.T)
    assert abs(cov[0, 1]) < 1e-9 * np.sqrt(cov[0, 0] * cov[1, 1])


@pytest.mark.parametrize("method", imbal.resample_methods())
def test_resample_keeps_minority(data, method):
    X, y = data
    Xr, yr, report = imbal.resample(X, y, method, seed=2)
    assert report["n_minority_after"] == int((yr == 1).sum())
    assert report["n_majority_after"] == int((yr == 0).sum())
    assert report["n_minority_after"] >= report["n_minority_before"]
    # Every original minority row is still present.
    kept = {tuple(r) for r in Xr[yr == 1]}
    assert all(tuple(r) in kept for r in X[y == 1])


def test_exact_counts():
    X, y = imbal.generate(n_samples=700, weights=(0.1, 0.9), label_noise=0.0)
    _, yu, _ = imbal.resample(X, y, "random-under", ratio=0.5)
    assert (yu == 0).sum() == 140 and (yu == 1).sum() == 70
    _, yo, _ = imbal.resample(X, y, "smote", ratio=0.5)
    assert (yo == 0).sum() == 630 and (yo == 1).sum() == 315


def test_logistic_and_metrics(data):
    X, y = data
    model = imbal.fit_logistic(X, y, penalty="l2", strength=1.0, balanced=True)
    pred = model.predict(X)
    m = imbal.metrics(y, pred)
    assert 0.0 <= m["precision_majority"] <= 1.0
    assert m["recall_minority"] == m["tp_minority"] / (y == 1).sum()
    scores = np.asarray(model.scores(X))
    assert np.array_equal(pred, (scores >= 0.5).astype(np.int64))
    back = imbal.model_from_text(model.to_text())
    assert np.array_equal(back.predict(X), pred)


def test_absent_metric_is_none():
    m = imbal.metrics(np.array([0, 0]), np.array([1, 1]))
    assert m["recall_minority"] is None
    assert m["precision_majority"] is None


def test_ensembles(data):
    X, y = data
    easy = imbal.easy_ensemble(X, y, n_members=3, seed=1)
    cascade = imbal.balance_cascade(X, y, n_members=4, seed=1)
    assert len(easy.members) == 3
    assert 1 <= len(cascade.members) <= 4
    for model in (easy, cascade):
        p = model.predict(X)
        assert p.shape == y.shape
        back = imbal.model_from_text(model.to_text())
        assert np.array_equal(back.predict(X), p)
    boost = imbal.fit_adaboost(X, y, rounds=5)
    assert 1 <= boost.n_stumps <= 5


def test_benchmark_rows_share_the_test_set():
    rows = imbal.run_benchmark(["baseline", "weighted", "tomek"], seed=5, n_samples=1500)
    assert [r["method"] for r in rows] == ["baseline", "weighted", "tomek"]
    assert len({r["test_hash"] for r in rows}) == 1
    assert all(r["error"] == "" for r in rows)
    again = imbal.run_benchmark(["baseline", "weighted", "tomek"], seed=5, n_samples=1500)
    assert rows == again


def test_plot_svg(data):
    X, y = data
    model = imbal.fit_logistic(X, y)
    svg = imbal.render_plot(X, y, model, grid_res=20)
    assert svg.startswith("<?xml") and "<svg" in svg
    assert svg == imbal.render_plot(X, y, model, grid_res=20)


def test_errors_map_to_python_exceptions(data):
    X, y = data
    with pytest.raises(ValueError):
        imbal.resample(X, y, "smite")
    with pytest.raises(ValueError):
        imbal.resample(X, y, "random-under", ratio=1.5)
    with pytest.raises(ValueError):
        imbal.render_plot(np.zeros((3, 3)), np.array([0, 1, 0]))
    with pytest.raises(ValueError):
        imbal.fit_logistic(X, np.full(len(y), 2))
