"""Analytics and valuation engine for blockchain-based metaverse land markets."""

from .dataset import PlatformDataset
from .records import (
    Chain,
    Estate,
    FxQuote,
    Listing,
    Parcel,
    Platform,
    Series,
    SignalSource,
    SocialSignal,
    Trade,
    TrafficAudience,
    TrafficMetric,
    TrafficSample,
)
from .validation import ValidationReport, Violation, validate_dataset

__version__ = "0.1.0"

__all__ = [
    "Chain",
    "Estate",
    "FxQuote",
    "Listing",
    "Parcel",
    "Platform",
    "PlatformDataset",
    "Series",
    "SignalSource",
    "SocialSignal",
    "Trade",
    "TrafficAudience",
    "TrafficMetric",
    "TrafficSample",
    "ValidationReport",
    "Violation",
    "validate_dataset",
    "__version__",
]
