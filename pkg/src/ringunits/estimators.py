"""Scikit-learn style wrappers around the analyzer and the realizability search.

Nothing is learned: ``fit`` only validates its input, so these objects exist
to plug the toolkit into pipelines and parameter grids.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .analyzer import UnitGroupReport, analyze
from .builders import BuildRecipe, build_from_recipe, parse_recipe
from .groups import AbelianGroupType, parse_group
from .realizability import RealizabilityVerdict, Status, group_realizable
from .ring import FiniteRing

FEATURES = ("ring_order", "char", "is_local", "unit_count", "unit_exponent", "unit_rank")


def _as_ring(x, cap) -> FiniteRing:
    if isinstance(x, FiniteRing):
        return x
    if isinstance(x, str):
        x = parse_recipe(x)
    if isinstance(x, BuildRecipe):
        return build_from_recipe(x, cap=cap)
    raise TypeError(f"expected a FiniteRing, BuildRecipe or recipe text, got {type(x).__name__}")


def _as_group(x) -> AbelianGroupType:
    if isinstance(x, AbelianGroupType):
        return x
    if isinstance(x, str):
        return parse_group(x)
    raise TypeError(f"expected an AbelianGroupType or group text, got {type(x).__name__}")


class UnitGroupAnalyzer(TransformerMixin, BaseEstimator):
    """Map rings (or recipes) to unit-group feature rows; see ``FEATURES``."""

    def __init__(self, cap: int | None = None):
        self.cap = cap

    def fit(self, X, y=None):
        self.n_samples_seen_ = len(X)
        return self

    def reports(self, X) -> list[UnitGroupReport]:
        check_is_fitted(self)
        return [analyze(_as_ring(x, self.cap), cap=self.cap) for x in X]

    def transform(self, X) -> np.ndarray:
        rows = []
        for rep in self.reports(X):
            g = rep.unit_group_type
            rows.append([rep.ring_order, rep.char, int(rep.is_local), rep.unit_count,
                         g.exponent, len(g.cyclic_orders())])
        return np.array(rows, dtype=np.int64).reshape(len(rows), len(FEATURES))

    def get_feature_names_out(self, input_features=None):
        return np.array(FEATURES, dtype=object)


class RealizabilityClassifier(ClassifierMixin, BaseEstimator):
    """Label finite abelian groups as Realizable, NotRealizable or Unknown."""

    def __init__(self, cap: int | None = None):
        self.cap = cap

    def fit(self, X, y=None):
        self.classes_ = np.array([s.value for s in Status])
        return self

    def verdicts(self, X) -> list[RealizabilityVerdict]:
        check_is_fitted(self)
        return [group_realizable(_as_group(x), cap=self.cap) for x in X]

    def predict(self, X) -> np.ndarray:
        return np.array([v.status.value for v in self.verdicts(X)], dtype=object)
