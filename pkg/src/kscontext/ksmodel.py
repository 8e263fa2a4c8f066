"""
Noncontextual models and Kochen-Specker feasibility.

A model is a list of contexts (mutually commuting observables) plus an
optional reference state. Each context yields a parity constraint on the
+-1 values of its observables; the model admits a noncontextual value
assignment iff that GF(2) system is consistent.

Symbol identity: every *group* of a context is one observable and one
assignment symbol, keyed by its unsigned Pauli word. A composite such as
``Y^oY^p`` measured as a whole is therefore a different symbol from the
single-qubit observables ``Y^o`` and ``Y^p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .exceptions import DimensionError, NonCommutingError, NotEigenstateError
from .nchv_bound import BellOperator, CorrelationTerm
from .pauli import PauliWord, as_word, commutes, product_of
from .statevector import StateVector, apply_pauli

EIGEN_TOL = 1e-9


class QubitLabel(NamedTuple):
    index: int
    tag: str


def make_labels(tags: Sequence[str] | None, n: int) -> tuple:
    """Validate qubit tags; default tags are ``"0"``, ``"1"``, ..."""
    if tags is None:
        tags = [str(i) for i in range(n)]
    tags = tuple(str(t) for t in tags)
    if len(tags) != n:
        raise DimensionError(f"{len(tags)} labels given for n={n}")
    if len(set(tags)) != n:
        raise ValueError(f"qubit labels must be unique, got {tags}")
    return tags


@dataclass(frozen=True)
class Context:
    """Mutually commuting members, optionally fused into composite groups.

    ``grouping`` partitions member indices; each block's product is one
    observable. By default every member is its own group.
    """

    members: tuple
    label: str = ""
    grouping: Optional[tuple] = None

    def __post_init__(self):
        members = tuple(as_word(w) for w in self.members)
        if not members:
            raise ValueError(f"context {self.label!r} is empty")
        if len({w.n for w in members}) != 1:
            raise DimensionError(f"context {self.label!r} mixes qubit counts")
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                if not commutes(members[i], members[j]):
                    raise NonCommutingError(
                        f"context {self.label!r}: members {i} ({members[i]}) and {j} ({members[j]}) do not commute",
                        pair=(i, j),
                    )
        for w in members:
            if not w.is_hermitian:
                raise ValueError(f"context {self.label!r}: member {w} is not Hermitian")
        if self.grouping is None:
            grouping = tuple((i,) for i in range(len(members)))
        else:
            grouping = tuple(tuple(int(i) for i in g) for g in self.grouping)
            flat = sorted(i for g in grouping for i in g)
            if flat != list(range(len(members))) or any(not g for g in grouping):
                raise ValueError(
                    f"context {self.label!r}: grouping {grouping} is not a partition of {len(members)} members"
                )
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "grouping", grouping)

    @property
    def n(self) -> int:
        return self.members[0].n

    @property
    def observables(self) -> tuple:
        """Group products in order: the product partition of the context."""
        return tuple(product_of([self.members[i] for i in g]) for g in self.grouping)

    @property
    def product(self) -> PauliWord:
        return product_of(self.members)


class AssignmentConstraint(NamedTuple):
    """XOR of symbol bits (bit 1 = value -1) must equal ``parity``."""

    symbols: tuple
    parity: int


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    assignment: Optional[dict] = None
    certificate: Optional[tuple] = None


@dataclass(frozen=True, eq=False)
class KSModel:
    """A built model: contexts, reference state, derived signs and symbols."""

    contexts: tuple
    signs: tuple
    state: Optional[StateVector] = None
    labels: tuple = ()
    symbols: tuple = field(default=())

    @property
    def n(self) -> int:
        return self.contexts[0].n

    def symbol_index(self) -> dict:
        return {s: j for j, s in enumerate(self.symbols)}

    def constraints(self) -> list:
        index = self.symbol_index()
        out = []
        for ctx, sign in zip(self.contexts, self.signs):
            parity = 0 if sign == 1 else 1
            ids = []
            for obs in ctx.observables:
                if obs.sign == -1:
                    parity ^= 1
                ids.append(index[obs.unsigned()])
            out.append(AssignmentConstraint(tuple(ids), parity))
        return out

    def bell_operator(self) -> BellOperator:
        """``B = sum_i alpha_i * (product partition of context i)``."""
        terms = tuple(CorrelationTerm(s, ctx.observables) for ctx, s in zip(self.contexts, self.signs))
        return BellOperator(terms, self.n)

    def without(self, i: int) -> "KSModel":
        """The model with context ``i`` dropped (signs kept, symbols recomputed)."""
        contexts = self.contexts[:i] + self.contexts[i + 1:]
        signs = self.signs[:i] + self.signs[i + 1:]
        return KSModel(contexts, signs, self.state, self.labels, _collect_symbols(contexts))


def _collect_symbols(contexts) -> tuple:
    seen = {}
    for ctx in contexts:
        for obs in ctx.observables:
            seen.setdefault(obs.unsigned(), None)
    return tuple(seen)


def eigen_sign(context: Context, state: StateVector, tol: float = EIGEN_TOL) -> int:
    """Eigenvalue +-1 of the context product on ``state``."""
    if context.n != state.n:
        raise DimensionError(f"context {context.label!r} has n={context.n}, state has n={state.n}")
    moved = apply_pauli(context.product, state).amps
    r_plus = float(np.linalg.norm(moved - state.amps))
    r_minus = float(np.linalg.norm(moved + state.amps))
    if r_plus <= tol:
        return 1
    if r_minus <= tol:
        return -1
    raise NotEigenstateError(
        f"state is not a +-1 eigenvector of context {context.label!r} "
        f"(product {context.product}; residuals {r_plus:.3e}, {r_minus:.3e})",
        residuals=(r_plus, r_minus),
        context=context.label,
    )


def build_model(contexts, state: StateVector | None = None, labels=None) -> KSModel:
    """Validate contexts and derive the sign of each context product.

    With a state the sign is the eigenvalue on that state; without one the
    product must be +-identity as an operator.
    """
    contexts = tuple(c if isinstance(c, Context) else Context(**c) for c in contexts)
    if not contexts:
        raise ValueError("a model needs at least one context")
    n = contexts[0].n
    for c in contexts:
        if c.n != n:
            raise DimensionError(f"context {c.label!r} has n={c.n}, expected {n}")
    if state is not None and state.n != n:
        raise DimensionError(f"state has n={state.n}, contexts have n={n}")
    signs = []
    for c in contexts:
        if state is not None:
            signs.append(eigen_sign(c, state))
        else:
            prod = c.product
            if not prod.is_identity:
                raise NotEigenstateError(
                    f"context {c.label!r} has product {prod}, not +-identity; a reference state is required",
                    context=c.label,
                )
            signs.append(prod.sign)
    return KSModel(contexts, tuple(signs), state, make_labels(labels, n), _collect_symbols(contexts))


def _eliminate(rows, m: int):
    """Reduced row echelon form over GF(2).

    ``rows`` holds ``(incidence_bits, parity, combination_bits)``; pivots are
    taken lowest symbol first, lowest row first.
    """
    rows = list(rows)
    pivots = []
    r = 0
    for col in range(m):
        bit = 1 << col
        pivot = next((i for i in range(r, len(rows)) if rows[i][0] & bit), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][0] & bit:
                rows[i] = (rows[i][0] ^ pv[0], rows[i][1] ^ pv[1], rows[i][2] ^ pv[2])
        pivots.append(col)
        r += 1
    return rows, pivots


def ks_feasible(model: KSModel) -> FeasibilityResult:
    """Decide whether a noncontextual +-1 assignment satisfies every context."""
    m = len(model.symbols)
    rows = []
    for i, con in enumerate(model.constraints()):
        inc = 0
        for j in con.symbols:
            inc ^= 1 << j
        rows.append((inc, con.parity, 1 << i))
    reduced, pivots = _eliminate(rows, m)
    for inc, parity, combo in reduced:
        if inc == 0 and parity == 1:
            cert = tuple(i for i in range(len(rows)) if combo >> i & 1)
            return FeasibilityResult(False, None, cert)
    bits = [0] * m
    for (inc, parity, _), col in zip(reduced, pivots):
        # free variables are 0 (value +1), so the pivot bit equals the parity
        bits[col] = parity
    assignment = {str(s): -1 if bits[j] else 1 for j, s in enumerate(model.symbols)}
    return FeasibilityResult(True, assignment, None)


def check_assignment(model: KSModel, assignment) -> bool:
    """True if ``{symbol: +-1}`` satisfies every context constraint."""
    values = {as_word(k).unsigned(): v for k, v in assignment.items()}
    for ctx, sign in zip(model.contexts, model.signs):
        prod = 1
        for obs in ctx.observables:
            prod *= obs.sign * values[obs.unsigned()]
        if prod != sign:
            return False
    return True


def single_deletion_feasibility(model: KSModel) -> tuple:
    """Feasibility of the model with each single context removed.

    A necessary condition for non-reducibility is that every entry is True.
    This is only a probe: it does not decide non-reducibility in general.
    """
    return tuple(ks_feasible(model.without(i)).feasible for i in range(len(model.contexts)))
