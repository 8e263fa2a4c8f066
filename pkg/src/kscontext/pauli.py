"""
Signed n-qubit Pauli words.

A word is a string of letters over ``IXYZ`` together with a global phase
``i**k`` (``k`` in 0..3). Qubit 0 is the leftmost letter. Multiplication is
done letter by letter with an exact table, so every product is certified
without floating point.

Text form: an optional sign, an optional ``i`` and the letters, e.g.
``XYY``, ``-XYY``, ``+iZZI``, ``-iXII``. ``parse_word(str(w)) == w`` always
holds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .exceptions import DimensionError

LETTERS = "IXYZ"

# (a, b) -> (k, c) meaning a*b = i**k * c
_MUL_TABLE = {}
for _a in LETTERS:
    _MUL_TABLE[("I", _a)] = (0, _a)
    _MUL_TABLE[(_a, "I")] = (0, _a)
    _MUL_TABLE[(_a, _a)] = (0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _MUL_TABLE[(_a, _b)] = (1, _c)
    _MUL_TABLE[(_b, _a)] = (3, _c)

_PHASES = {0: 1, 1: 1j, 2: -1, 3: -1j}
_PHASE_TEXT = {0: "", 1: "i", 2: "-", 3: "-i"}
_WORD_RE = re.compile(r"^\s*([+-]?)(i?)([IXYZ]+)\s*$")


@dataclass(frozen=True)
class PauliWord:
    """Immutable signed tensor product of single-qubit Pauli letters.

    ``phase_exp`` is the exponent ``k`` of the global phase ``i**k``.
    Equality and hashing compare letters and phase, which is the canonical
    form: there is no separate wrapper for negated observables.
    """

    letters: str
    phase_exp: int = 0

    def __post_init__(self):
        if not isinstance(self.letters, str) or not self.letters:
            raise ValueError("a Pauli word needs at least one letter")
        bad = set(self.letters) - set(LETTERS)
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)} in {self.letters!r}")
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliWord":
        return cls("I" * n)

    @classmethod
    def from_letters(cls, letters: Mapping[int, str], n: int, sign: int = 1) -> "PauliWord":
        """Build a word from a sparse ``{qubit: letter}`` map."""
        chars = ["I"] * n
        for q, letter in letters.items():
            if not 0 <= q < n:
                raise ValueError(f"qubit index {q} out of range for n={n}")
            chars[q] = letter
        return cls("".join(chars), 0 if sign > 0 else 2)

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def phase(self) -> complex:
        """The global phase as one of ``1, 1j, -1, -1j``."""
        return _PHASES[self.phase_exp]

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian and has no real sign")
        return 1 if self.phase_exp == 0 else -1

    @property
    def is_identity(self) -> bool:
        """True when the letters are all ``I`` (any phase)."""
        return set(self.letters) == {"I"}

    def unsigned(self) -> "PauliWord":
        return PauliWord(self.letters)

    def __mul__(self, other: "PauliWord") -> "PauliWord":
        return multiply(self, other)

    def __neg__(self) -> "PauliWord":
        return PauliWord(self.letters, self.phase_exp + 2)

    def __str__(self) -> str:
        return _PHASE_TEXT[self.phase_exp] + self.letters

    def __repr__(self) -> str:
        return f"PauliWord({str(self)!r})"


def parse_word(text: str) -> PauliWord:
    """Parse the text form, e.g. ``"-XYY"`` or ``"iZ"``."""
    if isinstance(text, PauliWord):
        return text
    m = _WORD_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse Pauli word {text!r}")
    sign, imag, letters = m.groups()
    k = (2 if sign == "-" else 0) + (1 if imag else 0)
    return PauliWord(letters, k)


def as_word(obj) -> PauliWord:
    """Coerce a string or word to a :class:`PauliWord`."""
    if isinstance(obj, PauliWord):
        return obj
    if isinstance(obj, str):
        return parse_word(obj)
    raise TypeError(f"expected PauliWord or str, got {type(obj).__name__}")


def _check_same_n(a: PauliWord, b: PauliWord) -> None:
    if a.n != b.n:
        raise DimensionError(f"qubit count mismatch: {a} has n={a.n}, {b} has n={b.n}")


def multiply(a: PauliWord, b: PauliWord) -> PauliWord:
    """Exact product ``a*b`` with phase tracking."""
    _check_same_n(a, b)
    k = a.phase_exp + b.phase_exp
    out = []
    for la, lb in zip(a.letters, b.letters):
        dk, c = _MUL_TABLE[(la, lb)]
        k += dk
        out.append(c)
    return PauliWord("".join(out), k)


def commutes(a: PauliWord, b: PauliWord) -> bool:
    """True iff the number of positions holding two different non-identity letters is even."""
    _check_same_n(a, b)
    clashes = sum(1 for la, lb in zip(a.letters, b.letters) if la != "I" and lb != "I" and la != lb)
    return clashes % 2 == 0


def product_of(words: Sequence[PauliWord]) -> PauliWord:
    """Left-to-right product of a nonempty sequence of words."""
    words = [as_word(w) for w in words]
    if not words:
        raise ValueError("product_of needs at least one word")
    return reduce(multiply, words)


def support(a: PauliWord) -> frozenset:
    """Indices of qubits carrying a non-identity letter."""
    return frozenset(i for i, c in enumerate(a.letters) if c != "I")


def all_commute(words: Iterable[PauliWord]):
    """Return the first anticommuting index pair, or ``None`` if all commute."""
    words = list(words)
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            if not commutes(words[i], words[j]):
                return i, j
    return None


def tagged(word: PauliWord, labels: Sequence[str] | None = None) -> str:
    """Human form with qubit tags, e.g. ``-X^oY^sY^p``; identity prints as ``I``."""
    if labels is None:
        labels = [str(i) for i in range(word.n)]
    body = "".join(f"{c}^{labels[i]}" for i, c in enumerate(word.letters) if c != "I") or "I"
    return _PHASE_TEXT[word.phase_exp] + body
