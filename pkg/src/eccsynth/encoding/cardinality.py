"""Totalizer cardinality constraints.

A totalizer is a balanced binary tree of unary adders over indicator
literals: its output bits S[1..m] form the sorted unary sum (S[i] true iff
at least i indicators hold), so "sum <= n" is the single unit ~S[n+1].
Both adder directions are encoded, making the sum exact in every model.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from ..sat.backend import SatBackend


def build_totalizer(backend: SatBackend, literals: Sequence[int]) -> List[int]:
    """Returns output bits: bits[i] is true iff more than i literals are true.

    (0-based: bits[i] <=> sum >= i+1.)
    """
    if not literals:
        return []

    def merge(lits: List[int]) -> List[int]:
        if len(lits) == 1:
            return [lits[0]]
        mid = len(lits) // 2
        a = merge(lits[:mid])
        b = merge(lits[mid:])
        m1, m2 = len(a), len(b)
        r = [backend.new_var() for _ in range(m1 + m2)]
        for alpha in range(m1 + 1):
            for beta in range(m2 + 1):
                sigma = alpha + beta
                if sigma > 0:
                    # a >= alpha and b >= beta  =>  r >= sigma
                    lhs = []
                    if alpha > 0:
                        lhs.append(-a[alpha - 1])
                    if beta > 0:
                        lhs.append(-b[beta - 1])
                    backend.add_clause((*lhs, r[sigma - 1]))
                if sigma < m1 + m2:
                    # a <= alpha and b <= beta  =>  r <= sigma
                    lhs = []
                    if alpha < m1:
                        lhs.append(a[alpha])
                    if beta < m2:
                        lhs.append(b[beta])
                    backend.add_clause((*lhs, -r[sigma]))
        return r

    return merge(list(literals))


class CardinalityBound:
    """Monotone upper-bound handle over a totalizer's output bits.

    ``assert_at_most`` emits a permanent unit clause, so bounds may only
    tighten over the life of a context; probing without commitment goes
    through ``assumption_at_most``.
    """

    def __init__(self, backend: SatBackend, sum_bits: Sequence[int]):
        self.backend = backend
        self.sum_bits = list(sum_bits)
        self.current: Optional[int] = None  # None means unbounded

    @property
    def maximum(self) -> int:
        return len(self.sum_bits)

    def assert_at_most(self, n: int):
        if n < 0:
            raise ValueError("cardinality bound must be non-negative")
        if n >= self.maximum:
            return  # the sum cannot exceed the indicator count
        if self.current is not None and n > self.current:
            raise ValueError(
                f"cannot weaken cardinality bound from {self.current} to {n}; "
                "reset the context instead"
            )
        # single unit suffices: the sum bits are exactly sorted
        self.backend.add_clause((-self.sum_bits[n],))
        self.current = n

    def assumption_at_most(self, n: int) -> List[int]:
        if n >= self.maximum:
            return []
        return [-self.sum_bits[n]]

    def decode_sum(self, model: Sequence[bool]) -> int:
        return sum(1 for bit in self.sum_bits if model[bit])
