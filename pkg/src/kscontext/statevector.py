"""
Dense pure-state simulation on ``2**n`` amplitudes.

Qubit 0 is the leftmost letter of a word and the most significant bit of an
amplitude index, so index 3 of a 3-qubit state is ``|011>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, NonCommutingError, NotHermitianError
from .pauli import PauliWord, all_commute, as_word, product_of

MAX_QUBITS = 12
NORM_TOL = 1e-12
IMAG_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state. The amplitude array is stored read-only."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        dim = amps.shape[0]
        n = dim.bit_length() - 1
        if dim < 2 or 1 << n != dim:
            raise DimensionError(f"amplitude count {dim} is not a power of two >= 2")
        if n > MAX_QUBITS:
            raise DimensionError(f"{n} qubits exceeds the dense limit of {MAX_QUBITS}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {norm!r}); use StateVector.from_amplitudes")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, amps, normalize: bool = True) -> "StateVector":
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ValueError("zero vector cannot be normalized")
            amps = amps / norm
        return cls(amps)

    @property
    def n(self) -> int:
        return self.amps.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def __len__(self):
        return self.dim


def make_ghz(n: int, sign: int = 1) -> StateVector:
    """``(|0...0> + sign|1...1>)/sqrt(2)``."""
    if n < 1:
        raise ValueError("GHZ state needs n >= 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1 / np.sqrt(2)
    amps[-1] = sign / np.sqrt(2)
    return StateVector(amps)


def basis_state(bits: str) -> StateVector:
    """Computational basis state from a bitstring such as ``"010"``."""
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"invalid bitstring {bits!r}")
    amps = np.zeros(1 << len(bits), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector(amps)


def preset_state(name: str, n: int) -> StateVector:
    """Named presets used by model files: ``ghz+``, ``ghz-``, ``basis:<bits>``."""
    if name == "ghz+":
        return make_ghz(n, 1)
    if name == "ghz-":
        return make_ghz(n, -1)
    if name.startswith("basis:"):
        bits = name.split(":", 1)[1]
        if len(bits) != n:
            raise DimensionError(f"preset {name!r} has {len(bits)} bits, model has n={n}")
        return basis_state(bits)
    raise ValueError(f"unknown state preset {name!r}")


def _word_action(word: PauliWord):
    """Return ``(mask, factors)`` with ``P|j> = factors[j] |j ^ mask>``."""
    n = word.n
    idx = np.arange(1 << n)
    mask = 0
    factors = np.full(1 << n, word.phase, dtype=complex)
    for q, letter in enumerate(word.letters):
        if letter == "I":
            continue
        shift = n - 1 - q
        bit = (idx >> shift) & 1
        if letter in "XY":
            mask |= 1 << shift
        if letter == "Z":
            factors *= np.where(bit, -1.0, 1.0)
        elif letter == "Y":
            factors *= np.where(bit, -1j, 1j)
    return mask, factors


def apply_pauli(word: PauliWord, state: StateVector) -> StateVector:
    """Return ``word|state>``; the phase of the word is applied as-is."""
    word = as_word(word)
    if word.n != state.n:
        raise DimensionError(f"word {word} has n={word.n}, state has n={state.n}")
    mask, factors = _word_action(word)
    out = np.empty_like(state.amps)
    idx = np.arange(state.dim)
    out[idx ^ mask] = factors * state.amps
    return StateVector(out)


def _product_checked(words: Sequence[PauliWord]) -> PauliWord:
    words = [as_word(w) for w in words]
    clash = all_commute(words)
    if clash is not None:
        i, j = clash
        raise NonCommutingError(f"{words[i]} and {words[j]} do not commute", pair=clash)
    prod = product_of(words)
    if not prod.is_hermitian:
        raise NotHermitianError(f"product {prod} is not Hermitian")
    return prod


def expectation(words, state: StateVector) -> float:
    """``<psi| w_1 w_2 ... w_k |psi>`` for mutually commuting words.

    ``words`` may also be a single word. Because the words commute, the
    value does not depend on their order or on how they are grouped.
    """
    if isinstance(words, (PauliWord, str)):
        words = [words]
    prod = _product_checked(words)
    val = np.vdot(state.amps, apply_pauli(prod, state).amps)
    if abs(val.imag) > IMAG_TOL:
        raise NotHermitianError(f"expectation of {prod} has imaginary part {val.imag:.3e}")
    return float(val.real)


def bell_value(op, state: StateVector) -> float:
    """Quantum value ``sum_i c_i <term_i>`` of a Bell operator."""
    if op.n != state.n:
        raise DimensionError(f"operator has n={op.n}, state has n={state.n}")
    return float(sum(t.coefficient * expectation(t.groups, state) for t in op.terms))


def word_matrix(word: PauliWord) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix of a word."""
    word = as_word(word)
    dim = 1 << word.n
    mask, factors = _word_action(word)
    mat = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim)
    mat[idx ^ mask, idx] = factors
    return mat


def operator_matrix(op) -> np.ndarray:
    """Dense matrix of a Bell operator (sum of coefficient times term product)."""
    if op.n > MAX_QUBITS:
        raise DimensionError(f"{op.n} qubits exceeds the dense limit of {MAX_QUBITS}")
    dim = 1 << op.n
    mat = np.zeros((dim, dim), dtype=complex)
    for t in op.terms:
        prod = _product_checked(t.groups)
        mat += t.coefficient * word_matrix(prod)
    return mat


def _start_vectors(dim: int):
    yield np.full(dim, 1 / np.sqrt(dim), dtype=complex)
    # second start guards against a uniform vector orthogonal to the top eigenspace
    golden = (np.sqrt(5) - 1) / 2
    k = np.arange(dim)
    v = np.exp(2j * np.pi * golden * k * (k + 1) / 2) * (1 + golden * k / dim)
    yield v / np.linalg.norm(v)


def spectral_max(op, tol: float = 1e-10, max_iter: int = 200_000) -> float:
    """Largest eigenvalue of a Hermitian Bell operator by shifted power iteration.

    The shift ``sum |c_i|`` bounds the spectral radius, so the shifted
    operator is positive semidefinite and its dominant eigenvalue is the
    top eigenvalue of ``op``.
    """
    for t in op.terms:
        if np.iscomplexobj(t.coefficient) and np.imag(t.coefficient) != 0:
            raise NotHermitianError(f"coefficient {t.coefficient} is not real")
    mat = operator_matrix(op)
    if not np.allclose(mat, mat.conj().T, atol=1e-12):
        raise NotHermitianError("operator matrix is not Hermitian")
    shift = float(sum(abs(t.coefficient) for t in op.terms))
    if shift == 0.0:
        return 0.0
    shifted = mat + shift * np.eye(mat.shape[0])
    best = -np.inf
    inner_tol = min(tol, 1e-12) * 1e-1
    for x in _start_vectors(mat.shape[0]):
        lam = np.inf
        for _ in range(max_iter):
            y = shifted @ x
            new = float(np.vdot(x, y).real)
            norm = np.linalg.norm(y)
            if norm == 0:
                lam = 0.0
                break
            x = y / norm
            if abs(new - lam) <= inner_tol * max(1.0, abs(new)):
                lam = new
                break
            lam = new
        best = max(best, lam)
    return best - shift
