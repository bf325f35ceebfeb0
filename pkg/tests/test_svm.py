import warnings

import cvxpy as cp
import numpy as np
import pytest

from topicconf.features import FeatureSpace, SparseVector
from topicconf.models import ConvergenceWarning, LinearModel, SVMConfig, decision_scores, load_model, predict, save_model, train_svm


def blobs(seed=0, n=40, d=5, k=3, spread=0.6):
    rng = np.random.default_rng(seed)
    centers = rng.normal(scale=3.0, size=(k, d))
    y = np.repeat(np.arange(k), n // k)
    X = centers[y] + rng.normal(scale=spread, size=(len(y), d))
    return X, [f"c{i}" for i in y]


def cvxpy_primal(X, y01, C):
    """Reference optimum of 0.5(|w|^2 + b^2) + C * sum hinge (bias regularised)."""
    w, b = cp.Variable(X.shape[1]), cp.Variable()
    margins = cp.multiply(y01, X @ w + b)
    prob = cp.Problem(cp.Minimize(0.5 * (cp.sum_squares(w) + b ** 2) + C * cp.sum(cp.pos(1 - margins))))
    prob.solve(solver=cp.CLARABEL)
    return prob.value


@pytest.mark.parametrize("C", [0.1, 1.0, 10.0])
def test_objectives_bracket_convex_solver_optimum(C):
    X, y = blobs(seed=1, spread=2.5)
    model = train_svm(X, y, SVMConfig(C=C, tol=1e-14, max_epochs=200000))
    for c, cls in enumerate(model.classes):
        y01 = np.where(np.array(y) == cls, 1.0, -1.0)
        ref = cvxpy_primal(X, y01, C)
        dual_bound = -model.dual_objectives[c][-1]
        # weak duality: dual value <= optimum <= primal value of any iterate
        assert dual_bound <= ref * (1 + 1e-7) + 1e-9
        assert model.primal_objectives[c] >= ref * (1 - 1e-7) - 1e-9
        assert dual_bound == pytest.approx(ref, rel=1e-7)
        assert model.primal_objectives[c] == pytest.approx(ref, rel=1e-5)


def test_separable_training_accuracy():
    X = np.array([[0.0, 0.0], [0.2, 0.5], [0.1, 0.1], [3.0, 3.0], [3.5, 2.8], [2.9, 3.3]])
    y = ["a", "a", "a", "b", "b", "b"]
    model = train_svm(X, y)
    assert predict(model, X) == y


def test_xor_cannot_be_fit():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
    y = ["a", "a", "b", "b"]
    model = train_svm(X, y)
    assert sum(p == t for p, t in zip(predict(model, X), y)) < 4


def test_bit_identical_with_same_seed_and_seed_changes_order():
    X, y = blobs(seed=2)
    m1, m2 = train_svm(X, y, SVMConfig(seed=5)), train_svm(X, y, SVMConfig(seed=5))
    assert np.array_equal(m1.weights, m2.weights) and np.array_equal(m1.bias, m2.bias)
    assert all(np.array_equal(a, b) for a, b in zip(m1.dual_objectives, m2.dual_objectives))


def test_solver_objective_non_increasing():
    for seed in range(5):
        X, y = blobs(seed=seed, spread=2.0)
        model = train_svm(X, y, SVMConfig(seed=seed))
        for obj in model.dual_objectives:
            assert len(obj) >= 1
            assert np.all(np.diff(obj) <= 1e-12 * np.maximum(1.0, np.abs(obj[:-1])))


def test_convergence_warning_at_max_epochs():
    X, y = blobs(seed=3, spread=3.0)
    with pytest.warns(ConvergenceWarning):
        model = train_svm(X, y, SVMConfig(max_epochs=1, tol=1e-12))
    assert not model.all_converged


def test_input_errors():
    with pytest.raises(ValueError):
        train_svm(np.zeros((3, 2)), ["a", "a", "a"])
    with pytest.raises(ValueError):
        train_svm(np.zeros((1, 2)), ["a"])
    with pytest.raises(ValueError):
        train_svm(np.array([[np.inf, 0.0], [0.0, 1.0]]), ["a", "b"])
    with pytest.raises(ValueError):
        train_svm(np.zeros((3, 2)), ["a", "b"])


def test_sparse_vectors_and_space_checks():
    space = FeatureSpace(("f0", "f1"))
    X = [SparseVector.from_dense(space, v) for v in ([0.0, 0.0], [0.1, 0.2], [3.0, 3.0], [3.1, 2.9])]
    model = train_svm(X, ["a", "a", "b", "b"])
    assert predict(model, X[2]) == "b"
    assert decision_scores(model, X[0]).shape == (2,)
    other = FeatureSpace(("g0", "g1"))
    with pytest.raises(ValueError):
        predict(model, SparseVector.from_dense(other, [0.0, 0.0]))


def test_tie_goes_to_first_class():
    model = LinearModel(("c0", "c1", "c2"), np.array([[1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]), np.zeros(3))
    assert predict(model, np.array([1.0, 5.0])) == "c0"
    assert decision_scores(model, np.array([1.0, 5.0])).tolist() == [1.0, 0.0, 1.0]


def test_positive_rescaling_keeps_predictions():
    X, y = blobs(seed=4, spread=2.0)
    model = train_svm(X, y)
    scaled = LinearModel(model.classes, model.weights * 3.7, model.bias * 3.7)
    assert predict(model, X) == predict(scaled, X)


def test_save_load_round_trip(tmp_path):
    space = FeatureSpace(tuple(f"f{i}" for i in range(5)))
    X, y = blobs(seed=6)
    from topicconf.features import FeatureMatrix
    model = train_svm(FeatureMatrix(space, X), y, SVMConfig(C=0.5, seed=3))
    path = tmp_path / "m.json"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.classes == model.classes
    assert np.array_equal(loaded.weights, model.weights) and np.array_equal(loaded.bias, model.bias)
    assert loaded.space.names == space.names
    assert loaded.config == model.config


def test_converges_with_default_settings():
    X, y = blobs(seed=7)
    with warnings.catch_warnings():
        warnings.simplefilter("error", ConvergenceWarning)
        assert train_svm(X, y).all_converged
