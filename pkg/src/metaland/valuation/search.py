"""Train/test splitting, randomized hyperparameter search, evaluation and
split-count feature importance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import DataError
from .boosting import GbtModel, GbtParams, train_gbt
from .features import FeatureSchema


def _ceil_share(ratio: float, n: int) -> int:
    return math.ceil(round(ratio * n, 9))


def split_indices(n: int, ratio: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Random partition into ceil(ratio*n) and the rest; deterministic per seed."""
    if not 0 < ratio < 1:
        raise DataError("split ratio must be in (0, 1)")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    perm = rng.permutation(n)
    n_train = _ceil_share(ratio, n)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])


def split_dataset(examples: Sequence, ratio: float = 0.8, seed: int = 0):
    train_idx, test_idx = split_indices(len(examples), ratio, seed)
    return [examples[i] for i in train_idx], [examples[i] for i in test_idx]


@dataclass(frozen=True)
class SearchSpace:
    n_trees: tuple[int, int] = (50, 500)
    max_depth: tuple[int, int] = (2, 8)
    learning_rate: tuple[float, ...] = (0.03, 0.1, 0.3)
    min_leaf: tuple[int, int] = (1, 20)
    subsample: tuple[float, ...] = (0.7, 1.0)
    colsample: tuple[float, ...] = (0.7, 1.0)
    lam: tuple[float, ...] = (0.0, 1.0, 10.0)

    def sample(self, rng: np.random.Generator) -> GbtParams:
        return GbtParams(
            n_trees=int(rng.integers(self.n_trees[0], self.n_trees[1] + 1)),
            max_depth=int(rng.integers(self.max_depth[0], self.max_depth[1] + 1)),
            learning_rate=float(rng.choice(self.learning_rate)),
            min_leaf=int(rng.integers(self.min_leaf[0], self.min_leaf[1] + 1)),
            subsample=float(rng.choice(self.subsample)),
            colsample=float(rng.choice(self.colsample)),
            lam=float(rng.choice(self.lam)),
        )


@dataclass(frozen=True)
class Trial:
    index: int
    params: GbtParams
    holdout_rmse: float


@dataclass
class SearchResult:
    best: GbtParams
    trials: list[Trial] = field(default_factory=list)


def _derived_seed(seed: int, key: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(key,)).generate_state(1)[0])


def random_search(
    X: np.ndarray,
    y: np.ndarray,
    space: SearchSpace = SearchSpace(),
    k_trials: int = 30,
    seed: int = 0,
) -> SearchResult:
    """Sample k_trials configs, score each by RMSE on an internal 80/20
    holdout of the training data, return the argmin (ties: fewer trees,
    then lower depth, then trial order)."""
    if k_trials < 1:
        raise DataError("k_trials must be >= 1")
    config_rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(0,))))
    fit_idx, holdout_idx = split_indices(len(y), 0.8, _derived_seed(seed, 1))
    X_fit, y_fit = X[fit_idx], y[fit_idx]
    X_out, y_out = X[holdout_idx], y[holdout_idx]

    trials: list[Trial] = []
    for i in range(k_trials):
        params = space.sample(config_rng)
        model = train_gbt(X_fit, y_fit, params, seed=_derived_seed(seed, 2 + i))
        err = model.predict(X_out) - y_out
        rmse = float(np.sqrt(np.mean(err * err)))
        trials.append(Trial(index=i, params=params, holdout_rmse=rmse))

    best = min(trials, key=lambda t: (t.holdout_rmse, t.params.n_trees, t.params.max_depth, t.index))
    return SearchResult(best=best.params, trials=trials)


@dataclass(frozen=True)
class EvalReport:
    train_accuracy_pct: float
    test_accuracy_pct: float
    mae_usd: float
    rmse_usd: float
    n_train: int
    n_test: int

    def to_document(self) -> dict:
        return {
            "train_accuracy_pct": self.train_accuracy_pct,
            "test_accuracy_pct": self.test_accuracy_pct,
            "mae_usd": self.mae_usd,
            "rmse_usd": self.rmse_usd,
            "n_train": self.n_train,
            "n_test": self.n_test,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "EvalReport":
        return cls(
            train_accuracy_pct=float(doc["train_accuracy_pct"]),
            test_accuracy_pct=float(doc["test_accuracy_pct"]),
            mae_usd=float(doc["mae_usd"]),
            rmse_usd=float(doc["rmse_usd"]),
            n_train=int(doc["n_train"]),
            n_test=int(doc["n_test"]),
        )


def accuracy_pct(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    """R^2 expressed in percent, clamped at zero."""
    resid = y_true - y_pred
    ss_res = float(resid @ resid)
    centered = y_true - y_true.mean()
    ss_tot = float(centered @ centered)
    if ss_tot == 0.0:
        return 100.0 if ss_res == 0.0 else 0.0
    return max(0.0, 1.0 - ss_res / ss_tot) * 100.0


def evaluate(
    model: GbtModel,
    X_train: np.ndarray,
    y_train: np.ndarray,
    X_test: np.ndarray,
    y_test: np.ndarray,
) -> EvalReport:
    pred_test = model.predict(X_test)
    err = pred_test - y_test
    return EvalReport(
        train_accuracy_pct=accuracy_pct(y_train, model.predict(X_train)),
        test_accuracy_pct=accuracy_pct(y_test, pred_test),
        mae_usd=float(np.mean(np.abs(err))),
        rmse_usd=float(np.sqrt(np.mean(err * err))),
        n_train=len(y_train),
        n_test=len(y_test),
    )


@dataclass(frozen=True)
class ImportanceRow:
    feature: str
    splits: int
    share: float


def feature_importance(model: GbtModel, schema: Optional[FeatureSchema] = None) -> list[ImportanceRow]:
    """Split counts per feature over the whole ensemble, descending; shares
    sum to 1 for non-empty ensembles."""
    schema = schema or model.schema
    counts = model.split_counts()
    total = sum(counts.values())
    if total == 0:
        return []
    rows = []
    for fid, n in counts.items():
        name = schema.names[fid] if schema is not None else f"f{fid}"
        rows.append(ImportanceRow(feature=name, splits=n, share=n / total))
    rows.sort(key=lambda r: (-r.splits, r.feature))
    return rows
