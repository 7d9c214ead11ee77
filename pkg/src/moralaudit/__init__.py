"""moralaudit: fairness audit toolkit for cross-platform moral sentiment
classifiers."""

__version__ = "0.1.0"

from .labels import LABELS, LabelSet, Platform  # noqa: F401
