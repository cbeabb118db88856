"""Partial spreads: codes whose k-dimensional codewords pairwise meet only in 0,
i.e. distance 2k.  Here the multilevel bound has a closed form, attained by
the pivot vectors that put their k ones into disjoint consecutive blocks."""
from __future__ import annotations

from dataclasses import dataclass

from .diagrams import PivotVector, decode
from .qpoly import QPolynomial
from .weights import spread_weight


@dataclass(frozen=True)
class SpreadParams:
    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError("need 1 <= k <= n")


def spread_polynomial(p: SpreadParams) -> QPolynomial:
    """1 + sum of q^(n - i*k) for 1 <= i < n // k.

    When k divides n this is 1 + q^k + ... + q^(n-k), the size of a full spread."""
    terms = {0: 1}
    for i in range(1, p.n // p.k):
        terms[p.n - i * p.k] = terms.get(p.n - i * p.k, 0) + 1
    return QPolynomial(terms)


def spread_clique(p: SpreadParams) -> list[PivotVector]:
    """Block i holds ones in positions i*k .. i*k + k - 1 (most significant first)."""
    block = (1 << p.k) - 1
    m = p.n // p.k
    return [decode(block << (p.n - (i + 1) * p.k), p.n) for i in range(m)]


def achieved_polynomial(p: SpreadParams, clique: list[PivotVector]) -> tuple[QPolynomial, list[bool]]:
    """Code size reached on a clique of block vectors, with one tightness flag per vector.

    A tight vector contributes its partial-spread weight.  A loose one has
    fewer than k columns after its last one, so its rectangle carries a single
    codeword and it contributes 1."""
    total = QPolynomial({})
    flags = []
    for v in clique:
        w, exact = spread_weight(v, p.n, p.k)
        total = total + (w if exact else QPolynomial({0: 1}))
        flags.append(exact)
    return total, flags
