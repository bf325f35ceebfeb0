"""Linear max-margin and Naive Bayes authorship classifiers."""

from topicconf.models.io import load_model, save_model
from topicconf.models.nb import NBModel, nb_posterior, nb_scores, predict_nb, train_nb
from topicconf.models.svm import (
    ConvergenceWarning,
    LinearModel,
    SVMConfig,
    decision_scores,
    predict,
    train_svm,
)

__all__ = [
    "ConvergenceWarning",
    "LinearModel",
    "NBModel",
    "SVMConfig",
    "decision_scores",
    "load_model",
    "nb_posterior",
    "nb_scores",
    "predict",
    "predict_nb",
    "save_model",
    "train_nb",
    "train_svm",
]
