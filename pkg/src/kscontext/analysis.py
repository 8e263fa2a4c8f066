"""Estimator-style front end for experimental data."""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import MissingSettingError
from .expdata import (
    DataSet,
    bell_value_from_data,
    check_error_mode,
    expectation_from_record,
    fidelity,
    ghz_coherence,
    load_dataset,
    mermin_value,
    witness,
)
from .modelfile import load_model
from .nchv_bound import classical_bound, reduce


class ContextualityAnalysis(BaseEstimator):
    """Evaluate a model's reduced noncontextual inequality on measured data.

    Parameters
    ----------
    model : str or KSModel
        Catalog name, model file path or built model. Its reduced Bell
        operator is evaluated on the data and compared with the reduced
        classical bound.
    error_mode : {"linear", "quadrature", "poisson"}

    Attributes
    ----------
    expectations_ : dict of setting -> ValueWithError
    bell_value_ : ValueWithError
    classical_bound_ : float
        ``classical_bound(B) - shift`` for the reduced operator.
    violation_sigma_ : float or None
        ``(bell_value - classical_bound) / sigma``; None when sigma is 0.
    mermin_, fidelity_, witness_, coherence_ :
        Set when the data holds the needed settings, else ``None``.
    """

    def __init__(self, model="mermin-ghz3", error_mode="linear"):
        self.model = model
        self.error_mode = error_mode

    def fit(self, X, y=None):
        check_error_mode(self.error_mode)
        data = load_dataset(X, self.error_mode) if not isinstance(X, DataSet) else X.with_error_mode(self.error_mode)
        model, name = load_model(self.model)
        if model.n != data.n:
            raise ValueError(f"model has n={model.n} but data has n={data.n}")
        full = model.bell_operator()
        red = reduce(model, full)
        self.model_name_ = name
        self.reduced_operator_ = red.operator
        self.shift_ = red.shift
        self.classical_bound_ = classical_bound(full).bound - red.shift
        self.expectations_ = {s: expectation_from_record(r, data.error_mode) for s, r in data.records.items()}
        self.incomplete_records_ = [s for s, r in data.records.items() if r.missing_outcomes]
        self.bell_value_ = bell_value_from_data(data, red.operator)
        sigma = self.bell_value_.sigma
        gap = self.bell_value_.value - self.classical_bound_
        self.violation_sigma_ = gap / sigma if sigma > 0 else None
        self.mermin_ = self._optional(mermin_value, data)
        self.coherence_ = self._optional(ghz_coherence, data)
        self.fidelity_ = self._optional(fidelity, data)
        self.witness_ = witness(self.fidelity_) if self.fidelity_ is not None else None
        self.n_features_in_ = data.n
        return self

    @staticmethod
    def _optional(fn, data):
        try:
            return fn(data)
        except (MissingSettingError, ValueError):
            return None

    def report(self) -> dict:
        """JSON-ready summary of the fitted quantities."""
        check_is_fitted(self, "bell_value_")

        def vd(v):
            return None if v is None else v.to_dict()

        out = {
            "model": self.model_name_,
            "error_mode": self.error_mode,
            "expectations": {s: v.to_dict() for s, v in self.expectations_.items()},
            "reduced_operator": str(self.reduced_operator_),
            "bell_value": vd(self.bell_value_),
            "classical_bound": self.classical_bound_,
            "violation_sigma": self.violation_sigma_,
            "mermin": vd(self.mermin_),
            "fidelity": vd(self.fidelity_),
            "witness": vd(self.witness_),
            "coherence": None if self.coherence_ is None else {"re": vd(self.coherence_[0]), "im": vd(self.coherence_[1])},
            "incomplete_records": self.incomplete_records_,
        }
        return out
