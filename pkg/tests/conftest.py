"""Shared oracles: dense matrices built independently with explicit kron products."""

from functools import reduce as fold
from itertools import product

import numpy as np
import pytest

from kscontext.statevector import StateVector

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense(word) -> np.ndarray:
    """Matrix of a PauliWord via kron; qubit 0 is the leftmost factor."""
    mat = fold(np.kron, [PAULI[c] for c in word.letters])
    return word.phase * mat


def dense_operator(op) -> np.ndarray:
    dim = 1 << op.n
    out = np.zeros((dim, dim), dtype=complex)
    for t in op.terms:
        prod = np.eye(dim, dtype=complex)
        for g in t.groups:
            prod = prod @ dense(g)
        out += t.coefficient * prod
    return out


def dense_expectation(groups, psi) -> float:
    """<psi| g_1 g_2 ... |psi> by multiplying dense group matrices in order."""
    vec = psi.amps
    for g in reversed(groups):
        vec = dense(g) @ vec
    return float(np.vdot(psi.amps, vec).real)


def random_state(rng, n: int) -> StateVector:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector.from_amplitudes(v)


def brute_force_bound(op):
    """Max over every +-1 assignment with plain itertools; returns (value, first maximizer)."""
    symbols = op.symbols()
    best, arg = -np.inf, None
    for values in product((1, -1), repeat=len(symbols)):
        v = dict(zip(symbols, values))
        total = 0.0
        for t in op.terms:
            term = t.coefficient * t.sign
            for s in t.symbols:
                term *= v[s]
            total += term
        if total > best + 1e-12:
            best, arg = total, {str(s): x for s, x in v.items()}
    return best, arg


def brute_force_feasible(model) -> bool:
    m = len(model.symbols)
    cons = model.constraints()
    for values in product((0, 1), repeat=m):
        if all(sum(values[j] for j in c.symbols) % 2 == c.parity for c in cons):
            return True
    return False


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
