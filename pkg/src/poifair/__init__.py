"""poifair: context-aware POI recommendation with temporal-fairness evaluation."""

__version__ = "0.1.0"
