"""Model serialization: a versioned JSON document, byte-stable for a given
model (canonical key order, shortest round-trip float formatting)."""

from __future__ import annotations

from .. import jsonio
from .boosting import GbtModel, GbtParams, Tree
from .features import FeatureSchema
from .search import ImportanceRow, feature_importance

FORMAT_VERSION = 1


def model_to_document(model: GbtModel) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kernel": model.kernel,
        "log_target": model.log_target,
        "schema": None if model.schema is None else model.schema.to_document(),
        "params": model.params.to_document(),
        "base_score": model.base_score,
        "train_losses": list(model.train_losses),
        "importance": [
            {"feature": r.feature, "splits": r.splits, "share": r.share}
            for r in feature_importance(model)
        ],
        "trees": [
            {
                "feature": [int(v) for v in t.feature],
                "threshold": [float(v) for v in t.threshold],
                "left": [int(v) for v in t.left],
                "right": [int(v) for v in t.right],
                "value": [float(v) for v in t.value],
                "count": [int(v) for v in t.count],
            }
            for t in model.trees
        ],
    }


def document_to_model(doc: dict) -> GbtModel:
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version {doc.get('format_version')!r}")
    trees = [
        Tree(t["feature"], t["threshold"], t["left"], t["right"], t["value"], t["count"])
        for t in doc["trees"]
    ]
    schema = None if doc.get("schema") is None else FeatureSchema.from_document(doc["schema"])
    return GbtModel(
        params=GbtParams.from_document(doc["params"]),
        base_score=float(doc["base_score"]),
        trees=trees,
        schema=schema,
        train_losses=[float(v) for v in doc["train_losses"]],
        kernel=str(doc.get("kernel", "unknown")),
        log_target=bool(doc.get("log_target", False)),
    )


def save_model(model: GbtModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(jsonio.canonical_dumps(model_to_document(model)))
        fh.write("\n")


def load_model(path) -> GbtModel:
    with open(path, "r", encoding="utf-8") as fh:
        return document_to_model(jsonio.loads(fh.read()))
