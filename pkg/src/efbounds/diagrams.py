"""Pivot vectors and the Ferrers diagrams of their echelon forms.

A pivot vector of length n is stored as the integer whose base-2 digits are
b_1 b_2 ... b_n (most significant first).  Its Ferrers diagram has one column
per zero that follows the first one; the column holds as many dots as there are
ones to its left.  Diagrams are top-right justified.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

MAX_LENGTH = 64


@dataclass(frozen=True, order=True)
class PivotVector:
    value: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_LENGTH:
            raise ValueError(f"length {self.n} outside 1..{MAX_LENGTH}")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def from_bits(cls, bits: str) -> "PivotVector":
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"not a binary string: {bits!r}")
        return cls(int(bits, 2), len(bits))

    @property
    def bits(self) -> str:
        return format(self.value, f"0{self.n}b")

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    def __str__(self):
        return self.bits


def encode(v: PivotVector) -> int:
    return v.value


def decode(value: int, n: int) -> PivotVector:
    return PivotVector(value, n)


def parse_pivot(text: str, n: int | None = None) -> PivotVector:
    """Accept a binary string, or a decimal integer together with its length."""
    text = text.strip()
    if n is None:
        if set(text) <= {"0", "1"}:
            return PivotVector.from_bits(text)
        raise ValueError("an integer pivot needs its length n")
    if set(text) <= {"0", "1"} and len(text) == n and len(text) > 1:
        return PivotVector.from_bits(text)
    return PivotVector(int(text), n)


def weight_k_vectors(n: int, k: int) -> list[int]:
    """All integers below 2^n with exactly k ones, in increasing order."""
    out = []
    for pos in combinations(range(n), k):
        v = 0
        for p in pos:
            v |= 1 << p
        out.append(v)
    out.sort()
    return out


def _columns_of(value: int, n: int) -> list[int]:
    cols = []
    ones = 0
    for i in range(n - 1, -1, -1):
        if (value >> i) & 1:
            ones += 1
        elif ones:
            cols.append(ones)
    return cols


def dot_count(v: PivotVector) -> int:
    return sum(_columns_of(v.value, v.n))


def dot_count_int(value: int, n: int) -> int:
    return sum(_columns_of(value, n))


def conjugate(parts) -> tuple[int, ...]:
    """Conjugate partition; accepts either order and returns a nonincreasing tuple."""
    parts = sorted((p for p in parts if p > 0), reverse=True)
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > r) for r in range(parts[0]))


@dataclass(frozen=True)
class FerrersDiagram:
    """Top-right justified dot pattern.

    ``cols`` are column heights left to right (nondecreasing), ``rows`` are row
    lengths top to bottom (nonincreasing).  Both are kept.
    """

    cols: tuple[int, ...]
    rows: tuple[int, ...]

    def __post_init__(self):
        if any(c <= 0 for c in self.cols) or list(self.cols) != sorted(self.cols):
            raise ValueError(f"columns must be positive and nondecreasing: {self.cols}")
        if conjugate(self.cols) != self.rows:
            raise ValueError("rows and columns are not conjugate")

    @classmethod
    def from_cols(cls, cols) -> "FerrersDiagram":
        cols = tuple(int(c) for c in cols if c)
        return cls(cols, conjugate(cols))

    @classmethod
    def from_rows(cls, rows) -> "FerrersDiagram":
        rows = tuple(int(r) for r in rows if r)
        if list(rows) != sorted(rows, reverse=True):
            raise ValueError(f"rows must be nonincreasing: {rows}")
        return cls(tuple(reversed(conjugate(rows))), rows)

    @classmethod
    def empty(cls) -> "FerrersDiagram":
        return cls((), ())

    @property
    def num_cols(self) -> int:
        return len(self.cols)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @cached_property
    def dots(self) -> int:
        return sum(self.cols)

    def is_empty(self) -> bool:
        return not self.cols

    def transpose(self) -> "FerrersDiagram":
        """Mirror in the anti-diagonal; row i becomes column m-1-i."""
        return FerrersDiagram(tuple(reversed(self.rows)), tuple(reversed(self.cols)))

    def has_dot(self, r: int, c: int) -> bool:
        return 0 <= c < len(self.cols) and 0 <= r < self.cols[c]

    def render(self) -> str:
        m, n = self.num_rows, self.num_cols
        return "\n".join(
            "".join("*" if self.has_dot(r, c) else "." for c in range(n)) for r in range(m)
        )

    def __str__(self):
        return "rows:[" + ",".join(map(str, self.rows)) + "]"


def parse_diagram(text: str) -> FerrersDiagram:
    """Read ``rows:[6,5,2]`` or ``cols:[2,2,5]``."""
    m = re.fullmatch(r"\s*(rows|cols)\s*:\s*\[([\d,\s]*)\]\s*", text)
    if not m:
        raise ValueError(f"expected rows:[...] or cols:[...], got {text!r}")
    parts = [int(x) for x in m.group(2).split(",") if x.strip()]
    return FerrersDiagram.from_rows(parts) if m.group(1) == "rows" else FerrersDiagram.from_cols(parts)


def to_diagram(v: PivotVector) -> FerrersDiagram:
    if v.weight == 0:
        raise ValueError("the zero vector has no echelon form")
    return FerrersDiagram.from_cols(_columns_of(v.value, v.n))


def diagram_of(value: int, n: int) -> FerrersDiagram:
    return FerrersDiagram.from_cols(_columns_of(value, n))


def nu(F: FerrersDiagram, delta: int, i: int) -> int:
    """Dots outside the first i rows and outside the rightmost delta-1-i columns."""
    if delta < 1 or not 0 <= i <= delta - 1:
        raise ValueError("need delta >= 1 and 0 <= i <= delta-1")
    keep = F.num_cols - (delta - 1 - i)
    if keep <= 0:
        return 0
    return sum(max(0, c - i) for c in F.cols[:keep])


def nu_vector(F: FerrersDiagram, delta: int) -> tuple[int, ...]:
    return tuple(nu(F, delta, i) for i in range(delta))


def ef_upper_exponent(F: FerrersDiagram, delta: int) -> int:
    """Largest possible dimension of a rank-distance-delta code on F."""
    return min(nu_vector(F, delta))


def hamming(u: PivotVector, v: PivotVector) -> int:
    if u.n != v.n:
        raise ValueError("pivot vectors of different lengths")
    return (u.value ^ v.value).bit_count()


def adjacent(u: PivotVector, v: PivotVector, d: int) -> bool:
    return hamming(u, v) >= d


def subdiagram_embeds(small: FerrersDiagram, big: FerrersDiagram) -> bool:
    """Does ``small`` fit inside ``big`` when both are top-right aligned?"""
    if small.num_cols > big.num_cols:
        return False
    off = big.num_cols - small.num_cols
    return all(s <= big.cols[off + j] for j, s in enumerate(small.cols))
