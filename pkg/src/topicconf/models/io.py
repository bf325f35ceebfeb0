"""JSON persistence for trained models.

Floats are written with ``repr`` precision, so a save/load round trip
reproduces every weight exactly.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from topicconf.features.space import FeatureSpace
from topicconf.models.nb import NBModel
from topicconf.models.svm import LinearModel, SVMConfig

FORMAT_VERSION = 1


def save_model(model: LinearModel | NBModel, path: str | Path) -> None:
    if isinstance(model, LinearModel):
        payload = {
            "kind": "linear-svm",
            "version": FORMAT_VERSION,
            "classes": list(model.classes),
            "feature_names": list(model.space.names) if model.space is not None else None,
            "weights": model.weights.tolist(),
            "bias": model.bias.tolist(),
            "config": asdict(model.config),
            "converged": list(model.converged),
        }
    elif isinstance(model, NBModel):
        vocab = sorted(model.vocabulary, key=model.vocabulary.get)
        payload = {
            "kind": "naive-bayes",
            "version": FORMAT_VERSION,
            "classes": list(model.classes),
            "vocabulary": vocab,
            "log_prior": model.log_prior.tolist(),
            "log_likelihood": model.log_likelihood.tolist(),
            "alpha": model.alpha,
        }
    else:
        raise TypeError(f"cannot save {type(model).__name__}")
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_model(path: str | Path) -> LinearModel | NBModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {payload.get('version')!r}")
    kind = payload.get("kind")
    if kind == "linear-svm":
        names = payload["feature_names"]
        return LinearModel(
            classes=tuple(payload["classes"]),
            weights=np.array(payload["weights"], dtype=float),
            bias=np.array(payload["bias"], dtype=float),
            space=FeatureSpace(tuple(names)) if names is not None else None,
            config=SVMConfig(**payload["config"]),
            converged=tuple(payload["converged"]),
        )
    if kind == "naive-bayes":
        return NBModel(
            classes=tuple(payload["classes"]),
            log_prior=np.array(payload["log_prior"], dtype=float),
            vocabulary={tok: i for i, tok in enumerate(payload["vocabulary"])},
            log_likelihood=np.array(payload["log_likelihood"], dtype=float),
            alpha=payload["alpha"],
        )
    raise ValueError(f"unknown model kind {kind!r}")
