"""
Model file format (JSON).

::

    {
      "n": 3,
      "labels": ["o", "s", "p"],
      "state": "ghz+",
      "contexts": [
        {"label": "Xo.YsYp", "members": ["XII", "IYI", "IIY"], "grouping": [[0], [1, 2]]},
        ...
      ]
    }

``state`` is ``null``, a preset (``ghz+``, ``ghz-``, ``basis:<bits>``) or a
list of ``[re, im]`` amplitude pairs (normalized on load). ``grouping`` is
optional; each group of member indices is measured as one composite
observable. ``labels`` is optional. Signs are never stored: they are
derived from the state, or from the operator identity when ``state`` is
null.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .exceptions import KSError, ModelFileError
from .ksmodel import Context, KSModel, build_model
from .pauli import parse_word
from .statevector import StateVector, make_ghz, preset_state


def _parse_state(raw, n: int, where: str):
    if raw is None:
        return None
    if isinstance(raw, str):
        try:
            return preset_state(raw, n)
        except (ValueError, KSError) as exc:
            raise ModelFileError(f"{where}.state: {exc}") from None
    try:
        amps = np.array([complex(float(p[0]), float(p[1])) for p in raw])
    except (TypeError, ValueError, IndexError):
        raise ModelFileError(f"{where}.state: expected a preset name or a list of [re, im] pairs") from None
    if len(amps) != 1 << n:
        raise ModelFileError(f"{where}.state: {len(amps)} amplitudes for n={n}, expected {1 << n}")
    try:
        return StateVector.from_amplitudes(amps)
    except ValueError as exc:
        raise ModelFileError(f"{where}.state: {exc}") from None


def model_from_dict(obj: dict, where: str = "<model>") -> KSModel:
    """Parse and validate the JSON model form; errors name the offending field."""
    if not isinstance(obj, dict):
        raise ModelFileError(f"{where}: top level must be an object")
    try:
        n = int(obj["n"])
    except (KeyError, TypeError, ValueError):
        raise ModelFileError(f"{where}.n: missing or not an integer") from None
    if n < 1:
        raise ModelFileError(f"{where}.n: must be positive")
    raw_contexts = obj.get("contexts")
    if not isinstance(raw_contexts, list) or not raw_contexts:
        raise ModelFileError(f"{where}.contexts: expected a nonempty list")
    contexts = []
    for i, rc in enumerate(raw_contexts):
        loc = f"{where}.contexts[{i}]"
        if not isinstance(rc, dict) or "members" not in rc:
            raise ModelFileError(f"{loc}: expected an object with 'members'")
        label = str(rc.get("label", f"C{i}"))
        try:
            members = [parse_word(w) for w in rc["members"]]
        except (TypeError, ValueError) as exc:
            raise ModelFileError(f"{loc} ({label}): {exc}") from None
        bad = [str(w) for w in members if w.n != n]
        if bad:
            raise ModelFileError(f"{loc} ({label}): members {bad} do not have n={n} letters")
        try:
            contexts.append(Context(tuple(members), label=label, grouping=rc.get("grouping")))
        except (KSError, ValueError, TypeError) as exc:
            raise ModelFileError(f"{loc}: {exc}") from None
    state = _parse_state(obj.get("state"), n, where)
    try:
        return build_model(contexts, state=state, labels=obj.get("labels"))
    except (KSError, ValueError) as exc:
        raise ModelFileError(f"{where}: {exc}") from None


def _state_to_json(state: StateVector | None):
    if state is None:
        return None
    for sign, name in ((1, "ghz+"), (-1, "ghz-")):
        if np.allclose(state.amps, make_ghz(state.n, sign).amps, atol=1e-15):
            return name
    nz = np.flatnonzero(np.abs(state.amps) > 0)
    if len(nz) == 1 and abs(state.amps[nz[0]] - 1) < 1e-15:
        return f"basis:{int(nz[0]):0{state.n}b}"
    return [[float(a.real), float(a.imag)] for a in state.amps]


def model_to_dict(model: KSModel) -> dict:
    contexts = []
    for c in model.contexts:
        entry = {"label": c.label, "members": [str(w) for w in c.members]}
        if any(len(g) > 1 for g in c.grouping):
            entry["grouping"] = [list(g) for g in c.grouping]
        contexts.append(entry)
    return {
        "n": model.n,
        "labels": list(model.labels),
        "state": _state_to_json(model.state),
        "contexts": contexts,
    }


def load_model(source) -> tuple:
    """Resolve a catalog name, a file path, a dict or a model.

    Returns ``(model, name)``; a file's name is its path.
    """
    from . import catalog

    if isinstance(source, KSModel):
        return source, "<model>"
    if isinstance(source, dict):
        return model_from_dict(source), "<dict>"
    name = str(source)
    if name in catalog.names() or name.startswith("ghz-mermin-"):
        try:
            return catalog.get(name).model, name
        except (KeyError, ValueError) as exc:
            raise ModelFileError(str(exc)) from None
    path = Path(name)
    if not path.exists():
        raise ModelFileError(f"{name}: not a catalog model and no such file")
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{name}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    return model_from_dict(obj, where=name), name
