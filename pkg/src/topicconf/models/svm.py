"""One-vs-rest linear SVM trained by dual coordinate descent.

Each binary problem minimises the L2-regularised hinge loss

    0.5 * ||w||^2 + C * sum_i max(0, 1 - y_i (w . x_i + b))

through its dual, with the bias handled as an extra constant feature of
value 1 (so it is regularised along with ``w``). The solver works on the
Gram matrix of the training set, which is cheap when there are far fewer
documents than features, as in authorship attribution. Every coordinate
step minimises the dual exactly along one coordinate, so the recorded dual
objective never increases from one epoch to the next.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numba
import numpy as np

from topicconf.features.space import FeatureMatrix, FeatureSpace, SparseVector, check_space, stack


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SVMConfig:
    C: float = 1.0
    tol: float = 1e-4
    max_epochs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError("C must be positive")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be at least 1")


@numba.njit(cache=True)
def _dual_cd(K, y, C, tol, max_epochs, seed):
    n = K.shape[0]
    np.random.seed(seed)
    alpha = np.zeros(n)
    grad = -np.ones(n)  # (Q alpha)_i - 1
    qdiag = np.empty(n)
    for i in range(n):
        qdiag[i] = K[i, i] + 1.0
    order = np.arange(n)
    objectives = np.empty(max_epochs)
    prev = 0.0
    converged = False
    epochs = 0
    for epoch in range(max_epochs):
        np.random.shuffle(order)
        for s in range(n):
            i = order[s]
            g = grad[i]
            a = alpha[i]
            if a == 0.0:
                pg = min(g, 0.0)
            elif a == C:
                pg = max(g, 0.0)
            else:
                pg = g
            if pg == 0.0:
                continue
            new = min(max(a - g / qdiag[i], 0.0), C)
            d = new - a
            if d == 0.0:
                continue
            alpha[i] = new
            yi = y[i]
            for j in range(n):
                grad[j] += d * yi * y[j] * (K[i, j] + 1.0)
        obj = 0.0
        for i in range(n):
            obj += alpha[i] * (grad[i] - 1.0)
        obj *= 0.5
        objectives[epoch] = obj
        epochs = epoch + 1
        scale = max(abs(prev), abs(obj), 1e-300)
        if abs(prev - obj) / scale < tol:
            converged = True
            break
        prev = obj
    return alpha, objectives[:epochs], converged


@dataclass(frozen=True, eq=False)
class LinearModel:
    classes: tuple[str, ...]
    weights: np.ndarray  # (n_classes, n_features)
    bias: np.ndarray  # (n_classes,)
    space: FeatureSpace | None = None
    config: SVMConfig = field(default_factory=SVMConfig)
    converged: tuple[bool, ...] = ()
    dual_objectives: tuple[np.ndarray, ...] = ()
    primal_objectives: tuple[float, ...] = ()

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    @property
    def all_converged(self) -> bool:
        return all(self.converged)


def _as_array(X, space: FeatureSpace | None = None) -> tuple[np.ndarray, FeatureSpace | None]:
    if isinstance(X, FeatureMatrix):
        if space is not None:
            check_space(space, X.space)
        return X.values, X.space
    if isinstance(X, SparseVector):
        if space is not None:
            check_space(space, X.space)
        return X.to_dense()[None, :], X.space
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], SparseVector):
        M = stack(list(X))
        if space is not None:
            check_space(space, M.space)
        return M.values, M.space
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    return arr, None


def train_svm(X, y: Sequence[str], config: SVMConfig | None = None) -> LinearModel:
    """Fit one binary hinge-loss problem per class, each class against the rest.

    ``X`` is a list of :class:`SparseVector`, a :class:`FeatureMatrix` or a
    2-D array. Classes keep their order of first appearance in ``y``.
    """
    config = config or SVMConfig()
    values, space = _as_array(X)
    y = list(y)
    if values.shape[0] != len(y):
        raise ValueError(f"{values.shape[0]} samples but {len(y)} labels")
    if len(y) < 2:
        raise ValueError("need at least two training samples")
    classes = tuple(dict.fromkeys(y))
    if len(classes) < 2:
        raise ValueError("need at least two distinct classes")
    if not np.all(np.isfinite(values)):
        raise ValueError("training data contains non-finite values")

    K = np.ascontiguousarray(values @ values.T)
    labels = np.asarray(y, dtype=object)
    weights = np.empty((len(classes), values.shape[1]))
    bias = np.empty(len(classes))
    converged, duals, primals = [], [], []
    for c, cls in enumerate(classes):
        yc = np.where(labels == cls, 1.0, -1.0)
        alpha, objectives, ok = _dual_cd(K, yc, float(config.C), float(config.tol),
                                         int(config.max_epochs), int(config.seed) % 2**32)
        coef = alpha * yc
        weights[c] = coef @ values
        bias[c] = coef.sum()
        margins = yc * (values @ weights[c] + bias[c])
        primals.append(0.5 * (weights[c] @ weights[c] + bias[c] ** 2)
                       + config.C * np.maximum(0.0, 1.0 - margins).sum())
        converged.append(bool(ok))
        duals.append(objectives)
    if not all(converged):
        warnings.warn(
            f"solver hit max_epochs={config.max_epochs} before reaching tol={config.tol}",
            ConvergenceWarning,
            stacklevel=2,
        )
    return LinearModel(classes, weights, bias, space, config, tuple(converged), tuple(duals), tuple(primals))


def decision_scores(model: LinearModel, x) -> np.ndarray:
    """``w . x + b`` per class; 1-D for a single vector, else (n, n_classes)."""
    single = isinstance(x, SparseVector) or np.ndim(x) == 1
    values, _ = _as_array(x, model.space)
    if values.shape[1] != model.n_features:
        raise ValueError(f"expected {model.n_features} features, got {values.shape[1]}")
    scores = values @ model.weights.T + model.bias
    return scores[0] if single else scores


def predict(model: LinearModel, x) -> str | list[str]:
    """Highest-scoring class; ties go to the class listed first."""
    scores = decision_scores(model, x)
    if scores.ndim == 1:
        return model.classes[int(np.argmax(scores))]
    return [model.classes[i] for i in np.argmax(scores, axis=1)]
