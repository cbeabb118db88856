"""Sparse integer polynomials in the field size q.

Every bound handled by the package is a polynomial sum_l c_l q^l with integer
coefficients.  Besides exact arithmetic and evaluation this module provides the
comparisons the clique search needs: at a fixed q, for all large q, and the
"better for at least one q >= 2" test.
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping

MAX_EXPONENT = 4096


class ParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the offending character index."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class QPolynomial:
    """Immutable sparse polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("_terms", "_desc", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        acc: dict[int, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for e, c in items:
                e, c = int(e), int(c)
                if e < 0 or e > MAX_EXPONENT:
                    raise ValueError(f"exponent {e} out of range")
                acc[e] = acc.get(e, 0) + c
        self._terms = {e: c for e, c in acc.items() if c}
        self._desc = tuple(sorted(self._terms.items(), reverse=True))
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "QPolynomial":
        return cls({exponent: coeff})

    @classmethod
    def zero(cls) -> "QPolynomial":
        return cls()

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items_desc(self) -> tuple[tuple[int, int], ...]:
        return self._desc

    @property
    def degree(self) -> int:
        """Largest exponent, -1 for the zero polynomial."""
        return self._desc[0][0] if self._desc else -1

    def coeff(self, e: int) -> int:
        return self._terms.get(e, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coeff_sum(self) -> int:
        return sum(self._terms.values())

    def __call__(self, q: int) -> int:
        return evaluate(self, q)

    def __add__(self, other):
        if isinstance(other, int):
            other = QPolynomial({0: other})
        if not isinstance(other, QPolynomial):
            return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return QPolynomial(acc)

    __radd__ = __add__

    def __neg__(self):
        return QPolynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = QPolynomial({0: other})
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return QPolynomial({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, QPolynomial):
            return NotImplemented
        acc: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return QPolynomial(acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = QPolynomial({0: other})
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._desc)
        return self._hash

    def __repr__(self):
        return f"QPolynomial({render(self)!r})"

    def __str__(self):
        return render(self)


def _check_q(q: int) -> None:
    if q < 2:
        raise ValueError(f"field size q must be >= 2, got {q}")


def evaluate(p: QPolynomial, q: int) -> int:
    """Exact value of ``p`` at the integer ``q >= 2`` (Horner over the sparse terms)."""
    _check_q(q)
    return _horner(p._desc, q)


def _horner(desc, q: int) -> int:
    if not desc:
        return 0
    acc = 0
    prev = desc[0][0]
    for e, c in desc:
        acc = acc * q ** (prev - e) + c
        prev = e
    return acc * q ** prev


def cmp_at(f: QPolynomial, g: QPolynomial, q: int) -> int:
    """Sign of f(q) - g(q): -1, 0 or 1."""
    _check_q(q)
    v = _horner((f - g)._desc, q)
    return (v > 0) - (v < 0)


def cmp_infty(f: QPolynomial, g: QPolynomial) -> int:
    """Compare by the coefficient at the largest exponent where f and g differ."""
    h = (f - g)._desc
    if not h:
        return 0
    return 1 if h[0][1] > 0 else -1


def _tail_limit(h_desc) -> int | None:
    """For h with negative leading coefficient, an integer bound Q such that
    h(q) < 0 for every q >= Q.  None if h has nothing below the leading term."""
    j, gj = h_desc[0]
    gj = -gj
    pos = [c for _, c in h_desc[1:] if c > 0]
    if not pos:
        return None
    lam = sum(pos)
    # q >= lam / gj already forces h(q) <= 0; the Cauchy radius 1 + max/gj is
    # never larger and only shortens the scan
    lam_q = -(-lam // gj)
    cauchy_q = 1 + -(-max(pos) // gj)
    return min(lam_q, cauchy_q)


def is_strictly_better(f: QPolynomial, g: QPolynomial) -> bool:
    """True iff f(q) > g(q) for at least one integer q >= 2."""
    return restrict_better(f, g, 2, None)


def restrict_better(f: QPolynomial, g: QPolynomial, q_min: int, q_max: int | None = None) -> bool:
    """True iff f(q) > g(q) for some integer q in [q_min, q_max] (q_max None: unbounded)."""
    return positive_somewhere((f - g)._desc, q_min, q_max)


def positive_somewhere(h_desc, q_min: int = 2, q_max: int | None = None) -> bool:
    """Is the polynomial given by descending (exponent, coeff) pairs positive at
    some integer q in [q_min, q_max]?  Coefficients must be nonzero."""
    _check_q(q_min)
    if q_max is not None and q_max < q_min:
        raise ValueError("empty q range")
    if not h_desc:
        return False
    j, hj = h_desc[0]
    if hj > 0:
        if q_max is None or j == 0:
            return True
        return any(_horner(h_desc, q) > 0 for q in range(q_min, q_max + 1))
    if j == 0:
        return False
    limit = _tail_limit(h_desc)
    if limit is None:
        return False
    if q_max is not None:
        limit = min(limit, q_max + 1)
    return any(_horner(h_desc, q) > 0 for q in range(q_min, limit))


def render(p: QPolynomial) -> str:
    """Canonical text, e.g. ``q^18+q^5+1`` or ``3*q^2-q``."""
    if not p._desc:
        return "0"
    out = []
    for e, c in p._desc:
        a = abs(c)
        if e == 0:
            s = str(a)
        else:
            mono = "q" if e == 1 else f"q^{e}"
            s = mono if a == 1 else f"{a}*{mono}"
        out.append(("-" if c < 0 else "+") + s)
    text = "".join(out)
    return text[1:] if text[0] == "+" else text


_TOKEN = re.compile(
    r"\s*([+-])?\s*(?:(\d+)\s*(?:\*|\\cdot)?\s*)?(q(?:\s*\^\s*(?:\{(\d+)\}|(\d+)))?)?\s*"
)


def parse(text: str) -> QPolynomial:
    """Inverse of :func:`render`; also accepts ``q^0``, ``q^{12}`` and ``2\\cdot q^5``."""
    pos = 0
    acc: dict[int, int] = {}
    first = True
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial", 0)
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        sign, coeff, mono, e_br, e_pl = m.groups()
        if m.end() == pos or (coeff is None and mono is None):
            raise ParseError("expected a term", pos)
        if sign is None and not first:
            raise ParseError("missing '+' or '-'", pos)
        c = int(coeff) if coeff is not None else 1
        if sign == "-":
            c = -c
        if mono is None:
            e = 0
        elif e_br is not None or e_pl is not None:
            e = int(e_br if e_br is not None else e_pl)
        else:
            e = 1
        acc[e] = acc.get(e, 0) + c
        pos = m.end()
        first = False
    return QPolynomial(acc)
