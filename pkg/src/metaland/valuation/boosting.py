"""Gradient-boosted regression trees with exact greedy split search.

Squared-error boosting: the model starts from the target mean and each
round fits one tree to the loss gradient. Split gain is the standard
second-order score

    gain = G_L^2/(H_L + lam) + G_R^2/(H_R + lam) - G^2/(H + lam)

where G sums gradients and H counts examples (the Hessian of squared loss
is constant). Leaf weights are -G/(H + lam), shrunk by the learning rate.
Exact greedy search (every feature, every distinct-value boundary) keeps
the trainer auditable against a brute-force stump oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from ..errors import DataError
from .features import FeatureSchema
from .kernels import KERNEL_NAME, grow_tree


@dataclass(frozen=True)
class GbtParams:
    n_trees: int = 200
    max_depth: int = 4
    learning_rate: float = 0.1
    min_leaf: int = 1
    subsample: float = 1.0
    colsample: float = 1.0
    lam: float = 1.0

    def validate(self) -> None:
        if self.n_trees < 0:
            raise DataError("n_trees must be >= 0")
        if self.max_depth < 1:
            raise DataError("max_depth must be >= 1")
        if self.learning_rate <= 0:
            raise DataError("learning_rate must be > 0")
        if self.min_leaf < 1:
            raise DataError("min_leaf must be >= 1")
        if not 0 < self.subsample <= 1 or not 0 < self.colsample <= 1:
            raise DataError("subsample and colsample must be in (0, 1]")
        if self.lam < 0:
            raise DataError("lam must be >= 0")

    def to_document(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "learning_rate": self.learning_rate,
            "min_leaf": self.min_leaf,
            "subsample": self.subsample,
            "colsample": self.colsample,
            "lam": self.lam,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "GbtParams":
        return cls(
            n_trees=int(doc["n_trees"]),
            max_depth=int(doc["max_depth"]),
            learning_rate=float(doc["learning_rate"]),
            min_leaf=int(doc["min_leaf"]),
            subsample=float(doc["subsample"]),
            colsample=float(doc["colsample"]),
            lam=float(doc["lam"]),
        )


class Tree:
    """One regression tree as flat node arrays (leaf values pre-shrunk)."""

    __slots__ = ("feature", "threshold", "left", "right", "value", "count")

    def __init__(self, feature, threshold, left, right, value, count):
        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.value = np.asarray(value, dtype=np.float64)
        self.count = np.asarray(count, dtype=np.int32)

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def is_stump(self) -> bool:
        return self.n_nodes == 3

    def split_features(self) -> np.ndarray:
        return self.feature[self.feature >= 0]

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(len(X), dtype=np.int32)
        while True:
            f = self.feature[node]
            active = np.flatnonzero(f >= 0)
            if len(active) == 0:
                break
            rows_f = f[active]
            go_left = X[active, rows_f] < self.threshold[node[active]]
            node[active] = np.where(go_left, self.left[node[active]], self.right[node[active]])
        return self.value[node]

    def predict_row(self, x: np.ndarray) -> float:
        i = 0
        while self.feature[i] >= 0:
            i = self.left[i] if x[self.feature[i]] < self.threshold[i] else self.right[i]
        return float(self.value[i])


@dataclass
class GbtModel:
    params: GbtParams
    base_score: float
    trees: list[Tree]
    schema: Optional[FeatureSchema] = None
    train_losses: list[float] = field(default_factory=list)
    kernel: str = KERNEL_NAME
    log_target: bool = False
    """Ensemble fitted on log1p(price); predict() maps back to USD."""

    @property
    def n_features(self) -> int:
        if self.schema is not None:
            return len(self.schema.names)
        peak = 0
        for t in self.trees:
            sf = t.split_features()
            if len(sf):
                peak = max(peak, int(sf.max()) + 1)
        return peak

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            return self.predict(X[None, :])[0]
        out = np.full(len(X), self.base_score, dtype=np.float64)
        for tree in self.trees:
            out += tree.predict(X)
        return np.expm1(out) if self.log_target else out

    def split_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for tree in self.trees:
            for f in tree.split_features():
                counts[int(f)] = counts.get(int(f), 0) + 1
        return counts


def train_gbt(
    X: np.ndarray,
    y: np.ndarray,
    params: GbtParams,
    seed: int,
    schema: Optional[FeatureSchema] = None,
    log_target: bool = False,
) -> GbtModel:
    """Fit a boosted ensemble; deterministic for a given (data, params, seed).

    With log_target the ensemble fits log1p(y) and the recorded training
    losses live in that space; predictions are always in target units.
    """
    params.validate()
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if log_target:
        if np.any(y < 0):
            raise DataError("log_target needs non-negative targets")
        y = np.log1p(y)
    n, k = X.shape
    if n < 2:
        raise DataError(f"need at least 2 examples, got {n}")
    if schema is not None and len(schema.names) != k:
        raise DataError(f"schema has {len(schema.names)} features, matrix has {k}")

    # exact when the target is constant, so the model reproduces it exactly
    base = float(y[0]) if np.all(y == y[0]) else float(y.mean())
    pred = np.full(n, base, dtype=np.float64)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))

    global_order = [np.argsort(X[:, j], kind="stable").astype(np.int32) for j in range(k)]

    n_rows = max(1, int(round(params.subsample * n)))
    n_cols = max(1, int(round(params.colsample * k)))

    trees: list[Tree] = []
    losses: list[float] = []
    for _ in range(params.n_trees):
        if n_rows < n:
            chosen = rng.choice(n, size=n_rows, replace=False)
            mask = np.zeros(n, dtype=bool)
            mask[chosen] = True
        else:
            mask = np.ones(n, dtype=bool)
        if n_cols < k:
            col_ids = np.sort(rng.choice(k, size=n_cols, replace=False)).astype(np.int32)
        else:
            col_ids = np.arange(k, dtype=np.int32)

        sorted_idx = np.stack([go[mask[go]] for go in (global_order[j] for j in col_ids)])
        grad = pred - y
        feature, threshold, left, right, value, count = grow_tree(
            X, grad, col_ids, sorted_idx.astype(np.int32), params.max_depth, params.min_leaf, params.lam
        )
        tree = Tree(feature, threshold, left, right, value * params.learning_rate, count)
        trees.append(tree)
        pred += tree.predict(X)
        residual = y - pred
        losses.append(float(np.mean(residual * residual)))

    return GbtModel(
        params=params,
        base_score=base,
        trees=trees,
        schema=schema,
        train_losses=losses,
        log_target=log_target,
    )
