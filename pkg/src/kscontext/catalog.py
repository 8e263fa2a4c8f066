"""
Built-in models: the GHZ/Mermin model, Mermin's pentagram, the two
composite-observable squares, and an n-qubit GHZ-Mermin generator.

Qubits are tagged ``o``, ``s``, ``p`` (OAM, spin, path) in the 3-qubit
entries; word letters are ordered the same way.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .ksmodel import Context, KSModel, build_model
from .nchv_bound import BellOperator, classical_bound
from .pauli import PauliWord
from .statevector import bell_value, make_ghz, spectral_max

DOF_TAGS = ("o", "s", "p")
QUANTUM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    model: KSModel
    bell_operator: BellOperator
    expected: dict
    description: str = ""


def _w(spec: str) -> PauliWord:
    """3-qubit word from tag notation, e.g. ``"Xo Ys"`` -> ``XYI``."""
    letters = {}
    for tok in spec.split():
        letters[DOF_TAGS.index(tok[1])] = tok[0]
    return PauliWord.from_letters(letters, 3)


def _ctx(label: str, *groups: str) -> Context:
    """Context whose groups are given in tag notation, one observable per group."""
    return Context(tuple(_w(g) for g in groups), label=label)


def _mermin_ghz3() -> KSModel:
    return build_model(
        [
            _ctx("XoYsYp", "Xo", "Ys", "Yp"),
            _ctx("YoXsYp", "Yo", "Xs", "Yp"),
            _ctx("YoYsXp", "Yo", "Ys", "Xp"),
            _ctx("XoXsXp", "Xo", "Xs", "Xp"),
        ],
        state=make_ghz(3),
        labels=DOF_TAGS,
    )


def _pentagram() -> KSModel:
    composites = ["Xo Ys Yp", "Yo Xs Yp", "Yo Ys Xp", "Xo Xs Xp"]
    gray = [
        _ctx(f"gray:{c.replace(' ', '')}", *c.split(), c)
        for c in composites
    ]
    red = _ctx("red", *composites)
    return build_model(gray + [red], state=None, labels=DOF_TAGS)


def _square_b() -> KSModel:
    return build_model(
        [
            _ctx("Xo.YsYp", "Xo", "Ys Yp"),
            _ctx("Xs.YoYp", "Xs", "Yo Yp"),
            _ctx("Xp.YoYs", "Xp", "Yo Ys"),
            _ctx("Xo.Xs.Xp", "Xo", "Xs", "Xp"),
            _ctx("YsYp.YoYp.YoYs", "Ys Yp", "Yo Yp", "Yo Ys"),
        ],
        state=make_ghz(3),
        labels=DOF_TAGS,
    )


def _square_c() -> KSModel:
    return build_model(
        [
            _ctx("Xo.Ys.Yp", "Xo", "Ys", "Yp"),
            _ctx("Yo.Xs.Yp", "Yo", "Xs", "Yp"),
            _ctx("YoYs.Xp", "Yo Ys", "Xp"),
            _ctx("Xo.Xs.Xp", "Xo", "Xs", "Xp"),
            _ctx("Ys.Yo.YsYo", "Ys", "Yo", "Ys Yo"),
        ],
        state=make_ghz(3),
        labels=DOF_TAGS,
    )


_BUILDERS = {
    "mermin-ghz3": (
        _mermin_ghz3,
        {"classical_bound": 2, "quantum_value": 4},
        "GHZ-type proof with four single-qubit contexts (square model a)",
    ),
    "pentagram": (
        _pentagram,
        {"classical_bound": 3, "quantum_value": 5},
        "Mermin's pentagram: ten observables on five lines, state independent",
    ),
    "square-b": (
        _square_b,
        {"classical_bound": 3, "quantum_value": 5},
        "composite observables YsYp, YoYp, YoYs (square model b)",
    ),
    "square-c": (
        _square_c,
        {"classical_bound": 3, "quantum_value": 5},
        "composite observable YoYs (square model c)",
    ),
}


def names() -> tuple:
    return tuple(_BUILDERS)


def _quantum_value(model: KSModel, op: BellOperator) -> float:
    if model.state is not None:
        return bell_value(op, model.state)
    return spectral_max(op)


def _verified(name: str, model: KSModel, expected: dict, description: str) -> CatalogEntry:
    op = model.bell_operator()
    bound = classical_bound(op).bound
    quantum = _quantum_value(model, op)
    if "classical_bound" in expected and bound != expected["classical_bound"]:
        raise AssertionError(f"{name}: classical bound {bound} != expected {expected['classical_bound']}")
    if "quantum_value" in expected and abs(quantum - expected["quantum_value"]) > QUANTUM_TOL:
        raise AssertionError(f"{name}: quantum value {quantum} != expected {expected['quantum_value']}")
    expected = dict(expected, classical_bound=bound, quantum_value=round(quantum, 12))
    return CatalogEntry(name, model, op, expected, description)


@lru_cache(maxsize=None)
def get(name: str) -> CatalogEntry:
    """Look up a built-in model; ``ghz-mermin-<n>`` names call :func:`ghz_mermin`."""
    if name.startswith("ghz-mermin-"):
        try:
            n = int(name.rsplit("-", 1)[1])
        except ValueError:
            raise KeyError(f"unknown catalog model {name!r}") from None
        return ghz_mermin(n)
    if name not in _BUILDERS:
        raise KeyError(f"unknown catalog model {name!r}; available: {', '.join(names())}")
    build, expected, description = _BUILDERS[name]
    return _verified(name, build(), expected, description)


@lru_cache(maxsize=None)
def ghz_mermin(n: int) -> CatalogEntry:
    """GHZ-Mermin model on ``n`` qubits (2 <= n <= 5).

    Contexts are the ``2**(n-1)`` X/Y words with an even number of Y
    letters, split into single-qubit members.
    """
    if not 2 <= n <= 5:
        raise ValueError(f"ghz_mermin supports 2 <= n <= 5, got {n}")
    state = make_ghz(n)
    contexts = []
    for letters in product("XY", repeat=n):
        if letters.count("Y") % 2:
            continue
        members = tuple(PauliWord.from_letters({q: c}, n) for q, c in enumerate(letters))
        contexts.append(Context(members, label="".join(letters)))
    model = build_model(contexts, state=state)
    expected = {"quantum_value": 2 ** (n - 1)}
    return _verified(f"ghz-mermin-{n}", model, expected, f"{n}-qubit GHZ-Mermin model")
