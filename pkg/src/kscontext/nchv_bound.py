"""
Bell operators and their noncontextual (classical) bounds.

A classical value assignment gives every observable symbol a predefined
value +-1. The bound of a Bell operator is the maximum, over all ``2**m``
assignments of its ``m`` symbols, of ``sum_i c_i * prod_g v(g)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import CapacityError, DimensionError, KSError, NonCommutingError, NotHermitianError
from .pauli import PauliWord, all_commute, as_word, product_of, tagged

MAX_SYMBOLS = 24
# symbols enumerated as one vectorized block inside each Gray-code step
_INNER_BITS = 12


@dataclass(frozen=True)
class CorrelationTerm:
    """``coefficient * <g_1 . g_2 . ... . g_r>`` for commuting groups ``g_k``.

    Each group is one measured observable, hence one assignment symbol. A
    signed group such as ``-XYY`` uses the symbol ``XYY`` with its sign
    folded into :attr:`sign`.
    """

    coefficient: float
    groups: tuple

    def __post_init__(self):
        groups = tuple(as_word(g) for g in self.groups)
        if not groups:
            raise ValueError("a correlation term needs at least one group")
        if len({g.n for g in groups}) != 1:
            raise DimensionError(f"groups act on different qubit counts: {[str(g) for g in groups]}")
        for g in groups:
            if not g.is_hermitian:
                raise NotHermitianError(f"group {g} is not an observable")
        clash = all_commute(groups)
        if clash is not None:
            i, j = clash
            raise NonCommutingError(f"groups {groups[i]} and {groups[j]} do not commute", pair=clash)
        coef = float(self.coefficient)
        if coef == 0.0 or not math.isfinite(coef):
            raise ValueError(f"coefficient must be a nonzero real, got {self.coefficient!r}")
        object.__setattr__(self, "coefficient", coef)
        object.__setattr__(self, "groups", groups)

    @property
    def n(self) -> int:
        return self.groups[0].n

    @property
    def product(self) -> PauliWord:
        return product_of(self.groups)

    @property
    def symbols(self) -> tuple:
        return tuple(g.unsigned() for g in self.groups)

    @property
    def sign(self) -> int:
        s = 1
        for g in self.groups:
            s *= g.sign
        return s

    def describe(self, labels: Sequence[str] | None = None) -> str:
        coef = self.coefficient * self.sign
        head = "+" if coef > 0 else "-"
        if abs(coef) != 1:
            head += f"{abs(coef):g}"
        return head + ".".join(tagged(g.unsigned(), labels) for g in self.groups)

    def __str__(self):
        return self.describe()


@dataclass(frozen=True)
class BellOperator:
    """Sum of correlation terms on ``n`` qubits."""

    terms: tuple
    n: int = field(default=0)

    def __post_init__(self):
        terms = tuple(self.terms)
        ns = {t.n for t in terms}
        if len(ns) > 1:
            raise DimensionError(f"terms act on different qubit counts {sorted(ns)}")
        n = ns.pop() if ns else self.n
        if self.n and n != self.n:
            raise DimensionError(f"terms have n={n} but operator declares n={self.n}")
        if n <= 0:
            raise ValueError("an empty Bell operator needs an explicit n")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_terms(cls, pairs, n: int | None = None) -> "BellOperator":
        """Build from ``(coefficient, [group, ...])`` pairs; groups may be strings."""
        return cls(tuple(CorrelationTerm(c, tuple(g)) for c, g in pairs), n or 0)

    def symbols(self) -> tuple:
        """Distinct unsigned symbols in order of first appearance."""
        seen = {}
        for t in self.terms:
            for s in t.symbols:
                seen.setdefault(s, None)
        return tuple(seen)

    def describe(self, labels: Sequence[str] | None = None) -> str:
        return " ".join(t.describe(labels) for t in self.terms) or "0"

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        return self.describe()


@dataclass(frozen=True)
class BoundResult:
    bound: float
    maximizer: dict
    evaluations: int


class Reduction(NamedTuple):
    operator: BellOperator
    shift: float
    removed: tuple
    # (symbols, value) pairs: prod v(symbols) == value for every removed term
    constraints: tuple = ()


class InfeasibleConstraintsError(KSError, ValueError):
    """No +-1 assignment satisfies the given parity constraints."""


def _masks_for(symbol_lists, symbols: Sequence[PauliWord]):
    """XOR bitmask per symbol list; symbol ``j`` sits at bit ``m-1-j``.

    With that layout smaller integers are lexicographically smaller
    assignments (bit 0 = value +1).
    """
    m = len(symbols)
    index = {s: j for j, s in enumerate(symbols)}
    masks = []
    for syms in symbol_lists:
        mask = 0
        for s in syms:
            mask ^= 1 << (m - 1 - index[s])
        masks.append(mask)
    return masks


def _parity(x):
    return np.bitwise_count(x) & 1


def _tie_eps(factors) -> float:
    return 1e-12 * max(1.0, float(np.abs(factors).sum()))


class _Walk(NamedTuple):
    k: int
    n_high: int
    n_prefix: int
    term_masks: list
    factors: np.ndarray
    table: np.ndarray
    con_masks: list
    con_bits: np.ndarray
    con_table: np.ndarray
    eps: float


def _scan_block(prefix: int, w: _Walk):
    """Gray-code walk over the free high bits below a fixed prefix.

    The low ``k`` bits are evaluated as one vector per step. Returns
    ``(best_value, best_index)``; the value is ``-inf`` if no assignment in
    the block satisfies the constraints.
    """
    free = w.n_high - w.n_prefix
    start = prefix << free
    high = np.array([mk >> w.k for mk in w.term_masks], dtype=np.int64)
    coef = w.factors * np.where(_parity(high & start), -1.0, 1.0)
    flips = [((high >> b) & 1).astype(bool) for b in range(free)]
    con_high = np.array([mk >> w.k for mk in w.con_masks], dtype=np.int64)
    target = w.con_bits ^ _parity(con_high & start)
    con_flips = [((con_high >> b) & 1).astype(bool) for b in range(free)]

    best_val, best_idx = -np.inf, -1
    gray = 0
    for step in range(1 << free):
        if step:
            b = (step & -step).bit_length() - 1
            gray ^= 1 << b
            coef[flips[b]] *= -1.0
            target[con_flips[b]] ^= 1
        vec = coef @ w.table
        if len(w.con_masks):
            valid = np.all(w.con_table == target[:, None], axis=0)
            if not valid.any():
                continue
            vec = np.where(valid, vec, -np.inf)
        top = vec.max()
        low = int(np.flatnonzero(vec >= top - w.eps)[0])
        idx = ((start | gray) << w.k) | low
        if top > best_val + w.eps or (abs(top - best_val) <= w.eps and idx < best_idx):
            best_val, best_idx = float(top), idx
    return best_val, best_idx


def classical_bound(op: BellOperator, constraints=(), workers: int = 1) -> BoundResult:
    """Exact maximum of the operator over all +-1 assignments of its symbols.

    ``constraints`` is a sequence of ``(symbols, value)`` pairs restricting
    the search to assignments with ``prod v(symbols) == value``; symbols
    that occur only in constraints join the enumeration. Ties resolve to the
    lexicographically smallest maximizer in symbol order with +1 before -1.
    ``workers > 1`` splits the walk by fixing the top assignment bits and
    merges the partial maxima.
    """
    constraints = [(tuple(as_word(s).unsigned() for s in syms), int(val)) for syms, val in constraints]
    seen = dict.fromkeys(op.symbols())
    for syms, _ in constraints:
        seen.update(dict.fromkeys(syms))
    symbols = tuple(seen)
    m = len(symbols)
    if m > MAX_SYMBOLS:
        raise CapacityError(f"{m} symbols exceeds the exhaustive limit of {MAX_SYMBOLS}")

    term_masks = _masks_for([t.symbols for t in op.terms], symbols)
    factors = np.array([t.coefficient * t.sign for t in op.terms], dtype=float)
    con_masks = _masks_for([syms for syms, _ in constraints], symbols)
    con_bits = np.array([0 if val == 1 else 1 for _, val in constraints], dtype=np.int64)

    k = min(m, _INNER_BITS)
    n_high = m - k
    low = np.arange(1 << k, dtype=np.int64)
    lowbits = (1 << k) - 1
    t_low = np.array([mk & lowbits for mk in term_masks], dtype=np.int64).reshape(-1, 1)
    table = np.where(_parity(t_low & low[None, :]), -1.0, 1.0)
    c_low = np.array([mk & lowbits for mk in con_masks], dtype=np.int64).reshape(-1, 1)
    con_table = _parity(c_low & low[None, :])

    n_prefix = min(n_high, max(0, int(math.log2(max(1, workers)))))
    eps = _tie_eps(factors)
    walk = _Walk(k, n_high, n_prefix, term_masks, factors, table, con_masks, con_bits, con_table, eps)
    jobs = range(1 << n_prefix)
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda p: _scan_block(p, walk), jobs))
    else:
        parts = [_scan_block(p, walk) for p in jobs]

    best_val, best_idx = parts[0]
    for val, idx in parts[1:]:
        if val > best_val + eps or (abs(val - best_val) <= eps and idx < best_idx):
            best_val, best_idx = val, idx
    if best_idx < 0:
        raise InfeasibleConstraintsError("no +-1 assignment satisfies the constraints")
    maximizer = {str(s): -1 if (best_idx >> (m - 1 - j)) & 1 else 1 for j, s in enumerate(symbols)}
    bound = float(round(best_val)) if abs(best_val - round(best_val)) <= eps else best_val
    return BoundResult(bound, maximizer, 1 << m)


def evaluate_assignment(op: BellOperator, assignment) -> float:
    """Classical value of ``op`` under ``{symbol: +-1}`` (keys are words or strings)."""
    values = {as_word(s).unsigned(): v for s, v in assignment.items()}
    total = 0.0
    for t in op.terms:
        val = t.coefficient * t.sign
        for s in t.symbols:
            val *= values[s]
        total += val
    return total


def reduce(model, op: BellOperator | None = None) -> Reduction:
    """Drop terms whose operator product is a multiple of the identity.

    A dropped term's context constraint holds for quantum mechanics and for
    every noncontextual assignment, so the term takes the fixed value
    ``c * s`` (``s`` the scalar of its product). ``shift`` is the sum of
    those values and the reduced inequality reads
    ``<B^R> <= classical_bound(B) - shift``. The dropped constraints are
    returned so that ``B^R`` can be bounded under them.
    """
    if op is None:
        op = model.bell_operator()
    elif len(op.terms) != len(model.contexts):
        raise ValueError(f"operator has {len(op.terms)} terms but the model has {len(model.contexts)} contexts")
    kept, removed, constraints, shift = [], [], [], 0.0
    for i, t in enumerate(op.terms):
        prod = t.product
        if prod.is_identity:
            removed.append(i)
            shift += t.coefficient * prod.sign
            constraints.append((t.symbols, prod.sign * t.sign))
        else:
            kept.append(t)
    return Reduction(BellOperator(tuple(kept), op.n), shift, tuple(removed), tuple(constraints))
