from .boosting import GbtModel, GbtParams, Tree, train_gbt
from .features import (
    FeatureContext,
    FeatureSchema,
    TrainingExample,
    assemble_features,
    assemble_matrix,
    default_schema,
    feature_vector,
)
from .kernels import KERNEL_NAME, available_kernels
from .modelio import document_to_model, load_model, model_to_document, save_model
from .search import (
    EvalReport,
    ImportanceRow,
    SearchResult,
    SearchSpace,
    Trial,
    accuracy_pct,
    evaluate,
    feature_importance,
    random_search,
    split_dataset,
    split_indices,
)

__all__ = [
    "EvalReport",
    "FeatureContext",
    "FeatureSchema",
    "GbtModel",
    "GbtParams",
    "ImportanceRow",
    "KERNEL_NAME",
    "SearchResult",
    "SearchSpace",
    "TrainingExample",
    "Tree",
    "Trial",
    "accuracy_pct",
    "assemble_features",
    "assemble_matrix",
    "available_kernels",
    "default_schema",
    "document_to_model",
    "evaluate",
    "feature_importance",
    "feature_vector",
    "load_model",
    "model_to_document",
    "random_search",
    "save_model",
    "split_dataset",
    "split_indices",
    "train_gbt",
]
