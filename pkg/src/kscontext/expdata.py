"""
Measured outcome statistics: expectations with uncertainties, the Mermin
combination, GHZ fidelity and the entanglement witness.

Outcome bitstrings follow qubit order; bit 0 is the +1 eigenstate of the
measured letter, so an outcome contributes ``(-1)**popcount(bits)`` to the
correlation of the full setting.

Error modes
-----------
linear
    absolute errors add: ``sum |dE/dp_k| sigma_k``. The default.
quadrature
    independent errors add in quadrature.
poisson
    shot noise from raw counts only: ``sqrt((sum s_k**2 p_k - E**2) / N)``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from itertools import product
from pathlib import Path

import numpy as np

from .exceptions import DimensionError, MissingSettingError, ModelFileError
from .pauli import as_word
from .statevector import StateVector

ERROR_MODES = ("linear", "quadrature", "poisson")
KINDS = ("prob", "count", "expectation")
PROB_SUM_TOL = 0.02
MERMIN_TERMS = (("XXX", 1), ("XYY", -1), ("YXY", -1), ("YYX", -1))


@dataclass(frozen=True)
class ValueWithError:
    value: float
    sigma: float = 0.0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "sigma", float(self.sigma))

    def to_dict(self):
        return {"value": self.value, "sigma": self.sigma}

    def __str__(self):
        return f"{self.value:.4f} +- {self.sigma:.4f}"


def check_error_mode(mode: str) -> str:
    if mode not in ERROR_MODES:
        raise ValueError(f"error mode must be one of {ERROR_MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True)
class SettingRecord:
    """Outcome statistics for one measurement setting such as ``"XYY"``.

    ``kind="expectation"`` records carry a directly reported correlation
    in ``expectation`` and no outcomes.
    """

    setting: str
    outcomes: dict = field(default_factory=dict)
    sigma: dict = field(default_factory=dict)
    kind: str = "prob"
    expectation: ValueWithError | None = None

    def __post_init__(self):
        if not self.setting or set(self.setting) - set("XYZ"):
            raise ValueError(f"setting must be letters from XYZ, got {self.setting!r}")
        if self.kind not in KINDS:
            raise ValueError(f"record kind must be one of {KINDS}, got {self.kind!r}")
        n = len(self.setting)
        outcomes = {str(k): float(v) for k, v in self.outcomes.items()}
        sigma = {str(k): float(v) for k, v in self.sigma.items()}
        for bits, val in outcomes.items():
            if len(bits) != n or set(bits) - {"0", "1"}:
                raise DimensionError(f"{self.setting}: outcome {bits!r} is not a {n}-bit string")
            if val < 0:
                raise ValueError(f"{self.setting}: negative {self.kind} {val} for outcome {bits}")
        for bits, s in sigma.items():
            if bits not in outcomes:
                raise ValueError(f"{self.setting}: sigma given for unknown outcome {bits!r}")
            if s < 0:
                raise ValueError(f"{self.setting}: negative sigma for outcome {bits}")
        if self.kind == "expectation":
            if self.expectation is None or outcomes:
                raise ValueError(f"{self.setting}: expectation records need a value and no outcomes")
        elif not outcomes:
            raise ValueError(f"{self.setting}: no outcomes")
        if self.kind == "prob":
            total = sum(outcomes.values())
            if abs(total - 1.0) > PROB_SUM_TOL:
                raise ValueError(f"{self.setting}: probabilities sum to {total:.4f}, not 1 +- {PROB_SUM_TOL}")
        if self.kind == "count" and sum(outcomes.values()) <= 0:
            raise ValueError(f"{self.setting}: zero total count")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "sigma", sigma)

    @property
    def n(self) -> int:
        return len(self.setting)

    @property
    def shots(self) -> float | None:
        return sum(self.outcomes.values()) if self.kind == "count" else None

    def probabilities(self) -> dict:
        if self.kind == "count":
            total = self.shots
            return {b: c / total for b, c in self.outcomes.items()}
        return dict(self.outcomes)

    @property
    def missing_outcomes(self) -> tuple:
        """Bitstrings absent from the record; they count as probability 0."""
        if self.kind == "expectation":
            return ()
        return tuple(b for b in _bitstrings(self.n) if b not in self.outcomes)

    def outcome_sigma(self, bits: str, error_mode: str = "linear") -> float:
        """Uncertainty of one outcome probability."""
        if self.kind == "count" and (error_mode == "poisson" or bits not in self.sigma):
            p = self.probabilities().get(bits, 0.0)
            return math.sqrt(p * (1 - p) / self.shots)
        if error_mode == "poisson":
            raise ValueError(f"{self.setting}: poisson error mode needs raw counts")
        if self.kind == "count":
            return self.sigma[bits] / self.shots
        return self.sigma.get(bits, 0.0)


def _bitstrings(n: int):
    return ("".join(b) for b in product("01", repeat=n))


def record_from_expectation(setting: str, value: float, sigma: float = 0.0) -> SettingRecord:
    """Two-outcome probability record reproducing a reported ``value +- sigma``.

    Weight ``(1+E)/2`` sits on ``0...0`` and ``(1-E)/2`` on ``0...01``; each
    outcome gets ``sigma/2``, so the linear-mode error is exactly ``sigma``.
    """
    n = len(setting)
    plus, minus = "0" * n, "0" * (n - 1) + "1"
    return SettingRecord(
        setting,
        {plus: (1 + value) / 2, minus: (1 - value) / 2},
        {plus: sigma / 2, minus: sigma / 2},
        "prob",
    )


@dataclass(frozen=True)
class DataSet:
    """At most one record per setting, in insertion order."""

    records: dict
    error_mode: str = "linear"

    def __post_init__(self):
        check_error_mode(self.error_mode)
        recs = self.records
        if not isinstance(recs, dict):
            recs = {}
            for r in self.records:
                if r.setting in recs:
                    raise ValueError(f"duplicate record for setting {r.setting}")
                recs[r.setting] = r
        if not recs:
            raise ValueError("a data set needs at least one record")
        ns = {r.n for r in recs.values()}
        if len(ns) != 1:
            raise DimensionError(f"records have different qubit counts {sorted(ns)}")
        object.__setattr__(self, "records", dict(recs))

    @property
    def n(self) -> int:
        return next(iter(self.records.values())).n

    def with_error_mode(self, error_mode: str) -> "DataSet":
        return DataSet(self.records, error_mode)

    def require(self, setting: str) -> SettingRecord:
        try:
            return self.records[setting]
        except KeyError:
            raise MissingSettingError(f"data set lacks measurement setting {setting}") from None


def expectation_from_record(rec: SettingRecord, error_mode: str = "linear", qubits=None) -> ValueWithError:
    """Correlation of a record's outcomes, over ``qubits`` (default: all)."""
    check_error_mode(error_mode)
    if rec.kind == "expectation":
        if qubits is not None and set(qubits) != set(range(rec.n)):
            raise ValueError(f"{rec.setting}: cannot marginalize a reported expectation")
        if error_mode == "poisson":
            raise ValueError(f"{rec.setting}: poisson error mode needs raw counts")
        return rec.expectation
    qubits = range(rec.n) if qubits is None else qubits
    mask = sum(1 << (rec.n - 1 - q) for q in qubits)
    probs = rec.probabilities()
    value = 0.0
    second = 0.0
    sigmas = []
    for bits, p in probs.items():
        s = -1.0 if bin(int(bits, 2) & mask).count("1") % 2 else 1.0
        value += s * p
        second += s * s * p
        sigmas.append(rec.outcome_sigma(bits, error_mode))
    if error_mode == "linear":
        sigma = sum(sigmas)
    elif error_mode == "quadrature":
        sigma = math.sqrt(sum(s * s for s in sigmas))
    else:
        if rec.kind != "count":
            raise ValueError(f"{rec.setting}: poisson error mode needs raw counts")
        sigma = math.sqrt(max(second - value * value, 0.0) / rec.shots)
    return ValueWithError(value, sigma)


def combine(weighted, error_mode: str = "linear") -> ValueWithError:
    """Linear combination ``sum c_i x_i`` of independent values with errors."""
    check_error_mode(error_mode)
    weighted = list(weighted)
    value = sum(c * x.value for c, x in weighted)
    if error_mode == "linear":
        sigma = sum(abs(c) * x.sigma for c, x in weighted)
    else:
        sigma = math.sqrt(sum((c * x.sigma) ** 2 for c, x in weighted))
    return ValueWithError(value, sigma)


def expectation_of(data: DataSet, word) -> ValueWithError:
    """``<word>`` from the record of the matching setting.

    A word with identity letters is read off the first record whose setting
    agrees on the word's support, by marginalizing the outcomes.
    """
    word = as_word(word)
    if word.n != data.n:
        raise DimensionError(f"word {word} has n={word.n}, data has n={data.n}")
    if not word.is_hermitian:
        raise ValueError(f"{word} is not an observable")
    letters = word.letters
    if "I" not in letters:
        val = expectation_from_record(data.require(letters), data.error_mode)
    else:
        qubits = [q for q, c in enumerate(letters) if c != "I"]
        for rec in data.records.values():
            if rec.kind != "expectation" and all(rec.setting[q] == letters[q] for q in qubits):
                val = expectation_from_record(rec, data.error_mode, qubits)
                break
        else:
            raise MissingSettingError(f"no record measures {word.unsigned()} on its support")
    return ValueWithError(word.sign * val.value, val.sigma)


def bell_value_from_data(data: DataSet, op) -> ValueWithError:
    """Measured value of a Bell operator, one record per term product."""
    return combine(((t.coefficient, expectation_of(data, t.product)) for t in op.terms), data.error_mode)


def mermin_value(data: DataSet) -> ValueWithError:
    """``<XXX> - <XYY> - <YXY> - <YYX>`` on three qubits."""
    if data.n != 3:
        raise DimensionError(f"the Mermin combination is defined for 3 qubits, data has n={data.n}")
    parts = [(c, expectation_from_record(data.require(s), data.error_mode)) for s, c in MERMIN_TERMS]
    return combine(parts, data.error_mode)


def _xy_words(n: int, odd: bool):
    for letters in product("XY", repeat=n):
        if letters.count("Y") % 2 == int(odd):
            yield "".join(letters)


def ghz_coherence(data: DataSet) -> tuple:
    """Real and imaginary parts of ``<0...0|rho|1...1>`` from X/Y correlations.

    Real part: ``sum_{even #Y} (-1)**(#Y/2) <P> / 2**n``; imaginary part:
    ``-sum_{odd #Y} (-1)**((#Y-1)/2) <P> / 2**n``. For three qubits these
    are ``(<XXX>-<XYY>-<YXY>-<YYX>)/8`` and ``(<YYY>-<XXY>-<YXX>-<XYX>)/8``.
    """
    n = data.n
    scale = 1.0 / 2**n
    re = [((-1) ** (w.count("Y") // 2) * scale, expectation_from_record(data.require(w), data.error_mode))
          for w in _xy_words(n, odd=False)]
    im = [(-((-1) ** ((w.count("Y") - 1) // 2)) * scale, expectation_from_record(data.require(w), data.error_mode))
          for w in _xy_words(n, odd=True)]
    return combine(re, data.error_mode), combine(im, data.error_mode)


def fidelity(data: DataSet) -> ValueWithError:
    """``<G|rho|G> = (p_0...0 + p_1...1)/2 + Re <0...0|rho|1...1>`` for ``G`` = GHZ+."""
    n = data.n
    diag = data.require("Z" * n)
    if diag.kind == "expectation":
        raise ValueError("the Z...Z record must carry outcome statistics")
    zeros, ones = "0" * n, "1" * n
    probs = diag.probabilities()
    d0 = ValueWithError(probs.get(zeros, 0.0), diag.outcome_sigma(zeros, data.error_mode))
    d1 = ValueWithError(probs.get(ones, 0.0), diag.outcome_sigma(ones, data.error_mode))
    re, _ = ghz_coherence(data)
    return combine([(0.5, d0), (0.5, d1), (1.0, re)], data.error_mode)


def witness(f: ValueWithError) -> ValueWithError:
    """Expectation of ``W = I/2 - |G><G|``; negative values certify genuine GHZ entanglement."""
    return ValueWithError(0.5 - f.value, f.sigma)


# -- synthetic statistics ---------------------------------------------------

_H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
_ROTATIONS = {"Z": np.eye(2), "X": _H, "Y": _H @ np.diag([1, -1j])}


def ideal_record(state: StateVector, setting: str) -> SettingRecord:
    """Exact outcome probabilities of measuring ``setting`` on ``state``."""
    if len(setting) != state.n:
        raise DimensionError(f"setting {setting} has {len(setting)} letters, state has n={state.n}")
    psi = state.amps.reshape([2] * state.n)
    for q, letter in enumerate(setting):
        psi = np.moveaxis(np.tensordot(_ROTATIONS[letter], psi, axes=([1], [q])), 0, q)
    probs = np.abs(psi.reshape(-1)) ** 2
    outcomes = {format(i, f"0{state.n}b"): float(p) for i, p in enumerate(probs)}
    return SettingRecord(setting, outcomes, {b: 0.0 for b in outcomes}, "prob")


def ideal_dataset(state: StateVector, settings, error_mode: str = "linear") -> DataSet:
    return DataSet([ideal_record(state, s) for s in settings], error_mode)


def ghz_settings(n: int) -> list:
    """Settings used by :func:`fidelity`: ``Z...Z`` and every X/Y word."""
    return ["Z" * n] + ["".join(w) for w in product("XY", repeat=n)]


# -- file formats -----------------------------------------------------------

CSV_FIELDS = ("setting", "outcome", "value", "sigma", "kind")


def _records_from_rows(rows, where: str):
    grouped = {}
    for lineno, row in rows:
        setting = (row.get("setting") or "").strip()
        kind = (row.get("kind") or "prob").strip()
        try:
            value = float(row["value"])
            sigma = float(row["sigma"]) if (row.get("sigma") or "").strip() else None
        except (TypeError, ValueError, KeyError):
            raise ModelFileError(f"{where}:{lineno}: value/sigma must be numbers") from None
        entry = grouped.setdefault(setting, {"kind": kind, "outcomes": {}, "sigma": {}, "lines": lineno})
        if entry["kind"] != kind:
            raise ModelFileError(f"{where}:{lineno}: setting {setting} mixes kinds {entry['kind']} and {kind}")
        if kind == "expectation":
            if "expectation" in entry:
                raise ModelFileError(f"{where}:{lineno}: duplicate expectation for {setting}")
            entry["expectation"] = ValueWithError(value, sigma or 0.0)
            continue
        outcome = (row.get("outcome") or "").strip()
        if outcome in entry["outcomes"]:
            raise ModelFileError(f"{where}:{lineno}: duplicate outcome {outcome} for {setting}")
        entry["outcomes"][outcome] = value
        if sigma is not None:
            entry["sigma"][outcome] = sigma
    records = []
    for setting, e in grouped.items():
        try:
            records.append(SettingRecord(setting, e["outcomes"], e["sigma"], e["kind"], e.get("expectation")))
        except (ValueError, DimensionError) as exc:
            raise ModelFileError(f"{where}:{e['lines']}: {exc}") from None
    return records


def dataset_from_csv(text: str, error_mode: str = "linear", where: str = "<csv>") -> DataSet:
    """Parse ``setting,outcome,value,sigma,kind`` rows; ``#`` lines are comments."""
    lines = [(i, ln) for i, ln in enumerate(text.splitlines(), 1) if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ModelFileError(f"{where}: empty data file")
    reader = csv.DictReader([ln for _, ln in lines])
    header = [h.strip() for h in (reader.fieldnames or [])]
    missing = [f for f in CSV_FIELDS if f not in header]
    if missing:
        raise ModelFileError(f"{where}:{lines[0][0]}: header lacks columns {missing}")
    reader.fieldnames = header
    rows = [(lines[k + 1][0], row) for k, row in enumerate(reader)]
    return DataSet(_records_from_rows(rows, where), error_mode)


def dataset_from_dict(obj: dict, error_mode: str | None = None, where: str = "<json>") -> DataSet:
    """JSON mirror: ``{"error_mode": ..., "records": [{setting, kind, ...}]}``."""
    try:
        records = []
        for i, r in enumerate(obj["records"]):
            kind = r.get("kind", "prob")
            if kind == "expectation":
                ev = ValueWithError(r["value"], r.get("sigma", 0.0))
                records.append(SettingRecord(r["setting"], {}, {}, kind, ev))
            else:
                records.append(SettingRecord(r["setting"], r["outcomes"], r.get("sigma", {}), kind))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFileError(f"{where}: records[{i}]: {exc}") from None
    return DataSet(records, error_mode or obj.get("error_mode", "linear"))


def dataset_to_dict(data: DataSet) -> dict:
    out = []
    for r in data.records.values():
        if r.kind == "expectation":
            out.append({"setting": r.setting, "kind": r.kind, "value": r.expectation.value, "sigma": r.expectation.sigma})
        else:
            out.append({"setting": r.setting, "kind": r.kind, "outcomes": r.outcomes, "sigma": r.sigma})
    return {"n": data.n, "error_mode": data.error_mode, "records": out}


BUNDLED = "ghz3-measured"


def bundled_path() -> Path:
    """Bundled 3-qubit GHZ measurement statistics."""
    return Path(str(resources.files("kscontext") / "data" / "ghz3_measured.csv"))


def load_dataset(source, error_mode: str | None = None) -> DataSet:
    """Load a CSV or JSON data file; ``"ghz3-measured"`` names the bundled data."""
    if isinstance(source, DataSet):
        return source if error_mode is None else source.with_error_mode(error_mode)
    path = bundled_path() if str(source) == BUNDLED else Path(source)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        return dataset_from_dict(json.loads(text), error_mode, where=str(path))
    return dataset_from_csv(text, error_mode or "linear", where=str(path))
