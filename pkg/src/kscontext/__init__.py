"""Kochen-Specker contextuality checks for Pauli-word models."""

from .analysis import ContextualityAnalysis
from .catalog import ghz_mermin
from .equivalence import cascade_equivalent, inequalities_equivalent
from .exceptions import (
    CapacityError,
    DimensionError,
    KSError,
    MissingSettingError,
    ModelFileError,
    NonCommutingError,
    NotEigenstateError,
    NotHermitianError,
)
from .expdata import DataSet, SettingRecord, ValueWithError, fidelity, load_dataset, mermin_value, witness
from .ksmodel import Context, KSModel, build_model, ks_feasible
from .modelfile import load_model
from .nchv_bound import BellOperator, CorrelationTerm, classical_bound, reduce
from .pauli import PauliWord, commutes, multiply, parse_word
from .statevector import StateVector, bell_value, expectation, make_ghz, spectral_max

__version__ = "0.1.0"

__all__ = [
    "BellOperator",
    "CapacityError",
    "Context",
    "ContextualityAnalysis",
    "CorrelationTerm",
    "DataSet",
    "DimensionError",
    "KSError",
    "KSModel",
    "MissingSettingError",
    "ModelFileError",
    "NonCommutingError",
    "NotEigenstateError",
    "NotHermitianError",
    "PauliWord",
    "SettingRecord",
    "StateVector",
    "ValueWithError",
    "bell_value",
    "build_model",
    "cascade_equivalent",
    "classical_bound",
    "commutes",
    "expectation",
    "fidelity",
    "ghz_mermin",
    "inequalities_equivalent",
    "ks_feasible",
    "load_dataset",
    "load_model",
    "make_ghz",
    "mermin_value",
    "multiply",
    "parse_word",
    "reduce",
    "spectral_max",
    "witness",
]
