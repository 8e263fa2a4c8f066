"""
Cascade-measurement equivalence of correlation terms and of inequalities.

Two terms are cascade equivalent when they use the same single-qubit letters
the same number of times, and every pair of groups sharing two or more
qubits in one term has a counterpart pair in the other term whose common
qubits cover the shared ones. We also require the two terms to have the
same operator product, which the letter counts alone do not guarantee:
``(X1Y2).(Y1X2)`` and ``(X1X2).(Y1Y2)`` pass both structural checks but
multiply to ``Z1Z2`` and ``-Z1Z2``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .exceptions import DimensionError
from .nchv_bound import BellOperator, CorrelationTerm
from .pauli import support


class LetterMultiset(Counter):
    """Multiplicity of each ``(qubit, letter)`` over all groups of a term."""

    @classmethod
    def of(cls, term: CorrelationTerm) -> "LetterMultiset":
        out = cls()
        for g in term.groups:
            for q, c in enumerate(g.letters):
                if c != "I":
                    out[(q, c)] += 1
        return out


def _shared_pairs(term: CorrelationTerm):
    """Intersections of group supports for every unordered pair of groups."""
    sups = [support(g) for g in term.groups]
    return [a & b for a, b in combinations(sups, 2)]


def _pairs_covered(src: CorrelationTerm, dst: CorrelationTerm) -> bool:
    dst_shared = _shared_pairs(dst)
    for shared in _shared_pairs(src):
        if len(shared) >= 2 and not any(shared <= other for other in dst_shared):
            return False
    return True


def why_not_equivalent(e: CorrelationTerm, f: CorrelationTerm):
    """Reason the two terms are not cascade equivalent, or ``None``."""
    if e.n != f.n:
        raise DimensionError(f"terms act on n={e.n} and n={f.n}")
    if LetterMultiset.of(e) != LetterMultiset.of(f):
        return "letter counts differ"
    if e.product != f.product:
        return "operator products differ"
    if not _pairs_covered(e, f):
        return "a pair of groups sharing >= 2 qubits has no counterpart in the second term"
    if not _pairs_covered(f, e):
        return "a pair of groups sharing >= 2 qubits has no counterpart in the first term"
    return None


def cascade_equivalent(e: CorrelationTerm, f: CorrelationTerm) -> bool:
    """True if ``e`` and ``f`` can be measured by the same cascade experiment.

    Coefficients are ignored here; :func:`inequalities_equivalent` compares
    them separately.
    """
    return why_not_equivalent(e, f) is None


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    matching: tuple = ()
    failures: list = field(default_factory=list)


def _coefficients_match(a: CorrelationTerm, b: CorrelationTerm) -> bool:
    return a.coefficient == b.coefficient


def inequalities_equivalent(a: BellOperator, b: BellOperator) -> EquivalenceReport:
    """Search for a coefficient-preserving bijection of cascade-equivalent terms.

    Both operators should already be reduced. Terms of ``a`` are matched in
    order, trying candidates in index order, with backtracking.
    """
    if a.n != b.n:
        raise DimensionError(f"operators act on n={a.n} and n={b.n}")
    failures = []
    if len(a.terms) != len(b.terms):
        failures.append(("*", f"term counts differ: {len(a.terms)} vs {len(b.terms)}"))
        return EquivalenceReport(False, (), failures)

    cands = []
    for i, ta in enumerate(a.terms):
        row = [j for j, tb in enumerate(b.terms) if _coefficients_match(ta, tb) and cascade_equivalent(ta, tb)]
        if not row:
            failures.append((str(ta), "no cascade-equivalent term with equal coefficient in the second operator"))
        cands.append(row)
    for j, tb in enumerate(b.terms):
        if not any(j in row for row in cands):
            failures.append((str(tb), "no cascade-equivalent term with equal coefficient in the first operator"))
    if failures:
        return EquivalenceReport(False, (), failures)

    chosen = [-1] * len(cands)
    used = set()

    def place(i):
        if i == len(cands):
            return True
        for j in cands[i]:
            if j not in used:
                used.add(j)
                chosen[i] = j
                if place(i + 1):
                    return True
                used.discard(j)
        return False

    if place(0):
        return EquivalenceReport(True, tuple(enumerate(chosen)), [])
    return EquivalenceReport(False, (), [("*", "candidate pairs admit no complete bijection")])
