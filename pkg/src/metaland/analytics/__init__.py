from .aggregation import (
    AggregateRow,
    WethRatioResult,
    aggregate,
    flip_counts,
    period_key,
    period_start,
    share_breakdown,
    weth_ratio,
)
from .correlation import (
    CorrelationMatrix,
    average_ranks,
    build_series_set,
    correlation_matrix,
    matrix_from_series,
    spearman,
)
from .filtering import FilterReport, filter_trades, nearest_rank
from .seasonal import (
    DeseasonalizeResult,
    deseasonalize,
    estimate_seasonal_indices,
    fill_daily,
)

__all__ = [
    "AggregateRow",
    "CorrelationMatrix",
    "DeseasonalizeResult",
    "FilterReport",
    "WethRatioResult",
    "aggregate",
    "average_ranks",
    "build_series_set",
    "correlation_matrix",
    "deseasonalize",
    "estimate_seasonal_indices",
    "fill_daily",
    "filter_trades",
    "flip_counts",
    "matrix_from_series",
    "nearest_rank",
    "period_key",
    "period_start",
    "share_breakdown",
    "spearman",
    "weth_ratio",
]
