"""Named feature spaces, sparse vectors, block combination and scaling."""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np


class SpaceMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FeatureSpace:
    """Ordered feature names; names are ``block:feature``."""

    names: tuple[str, ...]
    index: Mapping[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        index = {n: i for i, n in enumerate(names)}
        if len(index) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate feature names: {dupes[:5]}")
        object.__setattr__(self, "index", index)

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"FeatureSpace({len(self)} features)"

    def compatible(self, other: "FeatureSpace") -> bool:
        return self is other or self.names == other.names

    def block_of(self, dim: int) -> str:
        return self.names[dim].split(":", 1)[0]


def check_space(expected: FeatureSpace, got: FeatureSpace) -> None:
    if not expected.compatible(got):
        raise SpaceMismatchError(
            f"feature space mismatch: expected {len(expected)} features, got {len(got)}"
        )


@dataclass(frozen=True, eq=False)
class SparseVector:
    space: FeatureSpace
    entries: Mapping[int, float]

    def __post_init__(self):
        n = len(self.space)
        for dim, value in self.entries.items():
            if not 0 <= dim < n:
                raise IndexError(f"dimension {dim} outside space of size {n}")
            if not math.isfinite(value):
                raise ValueError(f"non-finite value {value} at dimension {dim}")

    @classmethod
    def from_dense(cls, space: FeatureSpace, values: Sequence[float]) -> "SparseVector":
        values = np.asarray(values, dtype=float)
        nz = np.flatnonzero(values)
        return cls(space, dict(zip(nz.tolist(), values[nz].tolist())))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(len(self.space))
        for dim, value in self.entries.items():
            out[dim] = value
        return out

    def __getitem__(self, name: str) -> float:
        return self.entries.get(self.space.index[name], 0.0)

    def as_dict(self) -> dict[str, float]:
        """Nonzero entries keyed by feature name."""
        return {self.space.names[d]: v for d, v in sorted(self.entries.items())}

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self.space.compatible(other.space) and dict(self.entries) == dict(other.entries)


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Row-per-document dense matrix over a feature space."""

    space: FeatureSpace
    values: np.ndarray

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != len(self.space):
            raise SpaceMismatchError(
                f"matrix shape {self.values.shape} does not match space of {len(self.space)}"
            )

    def __len__(self) -> int:
        return self.values.shape[0]

    def rows(self) -> list[SparseVector]:
        return [SparseVector.from_dense(self.space, row) for row in self.values]

    def columns(self, dims: Sequence[int] | slice) -> "FeatureMatrix":
        names = np.asarray(self.space.names, dtype=object)[dims]
        return FeatureMatrix(FeatureSpace(tuple(names)), self.values[:, dims])


def stack(vectors: Sequence[SparseVector]) -> FeatureMatrix:
    if not vectors:
        raise ValueError("cannot stack an empty list of vectors")
    space = vectors[0].space
    out = np.zeros((len(vectors), len(space)))
    for i, vec in enumerate(vectors):
        check_space(space, vec.space)
        for dim, value in vec.entries.items():
            out[i, dim] = value
    return FeatureMatrix(space, out)


@functools.lru_cache(maxsize=128)
def _concat_spaces(spaces: tuple[FeatureSpace, ...]) -> FeatureSpace:
    names = [n for s in spaces for n in s.names]
    seen = set()
    for n in names:
        if n in seen:
            raise ValueError(f"feature {n!r} appears in more than one block")
        seen.add(n)
    return FeatureSpace(tuple(names))


def combine(blocks: Sequence[SparseVector]) -> SparseVector:
    """Concatenate per-block vectors of one document into a single vector."""
    if not blocks:
        raise ValueError("nothing to combine")
    if len(blocks) == 1:
        return blocks[0]
    space = _concat_spaces(tuple(b.space for b in blocks))
    entries = {}
    offset = 0
    for b in blocks:
        for dim, value in b.entries.items():
            entries[offset + dim] = value
        offset += len(b.space)
    return SparseVector(space, entries)


def combine_matrices(blocks: Sequence[FeatureMatrix]) -> FeatureMatrix:
    if not blocks:
        raise ValueError("nothing to combine")
    if len(blocks) == 1:
        return blocks[0]
    space = _concat_spaces(tuple(b.space for b in blocks))
    return FeatureMatrix(space, np.hstack([b.values for b in blocks]))


@dataclass(frozen=True, eq=False)
class Scaler:
    """Per-dimension standardization fitted on training vectors."""

    space: FeatureSpace
    mean: np.ndarray
    scale: np.ndarray

    def transform(self, X: FeatureMatrix) -> FeatureMatrix:
        check_space(self.space, X.space)
        return FeatureMatrix(X.space, (X.values - self.mean) / self.scale)


def _fit_scaler_array(space: FeatureSpace, values: np.ndarray) -> Scaler:
    mean = values.mean(axis=0)
    sd = values.std(axis=0)
    constant = sd == 0
    # constant dimensions pass through untouched
    return Scaler(space, np.where(constant, 0.0, mean), np.where(constant, 1.0, sd))


def fit_scaler(train: Sequence[SparseVector] | FeatureMatrix) -> Scaler:
    X = train if isinstance(train, FeatureMatrix) else stack(list(train))
    if len(X) == 0:
        raise ValueError("cannot fit a scaler on zero vectors")
    return _fit_scaler_array(X.space, X.values)


def apply_scaler(scaler: Scaler, x: SparseVector) -> SparseVector:
    check_space(scaler.space, x.space)
    return SparseVector.from_dense(x.space, (x.to_dense() - scaler.mean) / scaler.scale)


def write_catalog(space: FeatureSpace, path: str | Path) -> None:
    """Export ``name, block, index`` rows as CSV."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "block", "index"])
        for i, name in enumerate(space.names):
            writer.writerow([name, space.block_of(i), i])


def prefixed(block: str, names: Iterable[str]) -> tuple[str, ...]:
    return tuple(f"{block}:{n}" for n in names)
