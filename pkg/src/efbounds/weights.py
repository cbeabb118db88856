"""Vertex weights: upper bounds, constructive lower bounds and partial-spread values.

Each pivot vector v carries a monomial weight q^e.  In the ``upper`` regime e is
the largest dimension any rank-distance code on the Ferrers diagram of v can
have.  In the ``lower`` regime e is a dimension some known construction of
Ferrers diagram rank-metric codes achieves; :func:`lower_dimension` searches the
catalogue of constructions and returns a witness.  The ``spread`` regime uses
q^{n-j}, j the position of the last one.

Diagrams are handled through their column heights ``g`` (nondecreasing, 0-based)
so that g[i] is the height of column i, n = len(g) and m = g[-1].
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .diagrams import (
    FerrersDiagram,
    PivotVector,
    conjugate,
    diagram_of,
    ef_upper_exponent,
    weight_k_vectors,
)
from .qpoly import QPolynomial

REGIMES = ("upper", "lower", "spread")

# fixed order used to break ties between constructions of equal dimension
THEOREM_ORDER = (
    "small_delta",
    "shortening",
    "from_subcodes",
    "gabidulin_subcode",
    "subcodes_general",
    "cfdrm",
    "mds",
    "combine",
    "com3",
    "sporadic",
    "subdiagram",
    "trivial",
)

SPORADIC = {
    ((2, 2, 4, 4, 6, 6), 4): 8,
    ((3, 3, 3, 5), 3): 6,
    ((2, 2, 2, 3, 6), 3): 5,
}


@dataclass(frozen=True)
class LowerBoundWitness:
    dimension: int
    theorem: str
    params: dict = field(default_factory=dict, compare=False, hash=False)
    q_min: int = 2  # valid for every prime power q >= q_min

    @property
    def q_validity(self) -> str:
        return "all" if self.q_min <= 2 else f"q>={self.q_min}"

    def valid_at(self, q: int | None) -> bool:
        return q is None or q >= self.q_min

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "theorem": self.theorem,
            "params": self.params,
            "q_validity": self.q_validity,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _rows(g) -> tuple[int, ...]:
    return conjugate(g)


def _small_delta(g, delta):
    n, m = len(g), g[-1]
    out = []
    if delta <= 2 and m >= n:
        out.append(LowerBoundWitness(sum(g[: n - delta + 1]), "small_delta", {"case": 1}))
    if delta == 3 and n >= 3 and m == n:
        out.append(
            LowerBoundWitness(ef_upper_exponent(FerrersDiagram.from_cols(g), 3), "small_delta", {"case": 2})
        )
    return out


def _shortening(g, delta):
    n, m = len(g), g[-1]
    if m >= n and 2 <= delta <= n and g[n - delta + 1] >= n:
        return [LowerBoundWitness(sum(g[: n - delta + 1]), "shortening")]
    return []


def _from_subcodes(g, delta):
    n, m = len(g), g[-1]
    if 2 <= delta <= n - 1 and g[n - delta + 1] >= n - 1:
        dim = min(m - n + 1, g[0]) + sum(g[1 : n - delta + 1])
        return [LowerBoundWitness(dim, "from_subcodes", {"optimal": g[n - 1] >= n - 1 + g[0]})]
    return []


def _gabidulin_subcode(g, delta):
    n = len(g)
    out = []
    for r in range(1, delta):
        if not (r + 1 <= delta <= n - r):
            continue
        if g[n - delta] > n - r or g[n - delta + 1] < n - r:
            continue
        acc = 0
        ok = True
        for i in range(r):
            acc += g[i]
            if g[n - r + i] < n - r + acc:
                ok = False
                break
        if ok:
            out.append(LowerBoundWitness(sum(g[: n - delta + 1]), "gabidulin_subcode", {"r": r}))
            break
    return out


@lru_cache(maxsize=None)
def _divisor_chains(bound: int) -> tuple[tuple[int, ...], ...]:
    """All chains t_1 < t_2 < ... with t_1 >= 2, each dividing the next, t_l <= bound."""
    chains = []

    def grow(chain):
        chains.append(tuple(chain))
        t = chain[-1]
        for nxt in range(2 * t, bound + 1, t):
            grow(chain + [nxt])

    for t1 in range(2, bound + 1):
        grow([t1])
    return tuple(chains)


def _subcodes_general(g, delta):
    n, m = len(g), g[-1]
    k = n - delta + 1
    if k < 1:
        return []
    head = sum(g[:k])
    for r in range(0, delta):
        if not (r + 1 <= delta <= n - r):
            continue
        # condition (4) does not depend on the chain except through t_l
        prefix = []
        acc = 0
        for h in range(r):
            acc += g[h]
            prefix.append(acc)
        for chain in _divisor_chains(max(m, n)):
            t = (1,) + chain
            l = len(chain)
            if not (t[l - 1] < n - r <= t[l]) or k > t[1]:
                continue
            if any(g[t[th]] < t[th + 1] for th in range(1, l)):
                continue
            if any(g[n - r + h] < t[l] + prefix[h] for h in range(r)):
                continue
            ws = range(1, t[2] // t[1] + 1) if l > 1 else (1,)
            for w in ws:
                if g[k - 1] > w * t[1]:
                    continue
                if k < t[1] and delta >= 2 and g[k] < w * t[1]:
                    continue
                return [
                    LowerBoundWitness(
                        head, "subcodes_general", {"l": l, "t": list(chain), "w": w, "r": r}
                    )
                ]
    return []


def _cfdrm(g, delta):
    n, m = len(g), g[-1]
    k = n - delta + 1
    if not (m >= n >= delta >= 2) or k + 1 >= n:
        return []
    c1 = g[k] >= n or all(g[k] - k >= g[i] - i for i in range(k))
    if c1 and g[k + 1] >= n:
        return [LowerBoundWitness(sum(g[:k]), "cfdrm")]
    return []


def diagonal_counts(g) -> list[int]:
    """theta_i for i = 1..m: dots on the diagonal starting at row i-1 of the last column."""
    n, m = len(g), g[-1]
    out = []
    for i in range(1, m + 1):
        cnt = 0
        for j in range(min(i, n)):
            r, c = i - 1 - j, n - 1 - j
            if r < g[c]:
                cnt += 1
        out.append(cnt)
    return out


def _mds(g, delta):
    n, m = len(g), g[-1]
    if not (m >= n and 0 < delta <= n):
        return []
    th = diagonal_counts(g)
    dim = sum(max(0, t - delta + 1) for t in th)
    # repetition and parity-check codes exist over every field
    q_min = max([t - 1 for t in th if t > delta and delta > 2], default=2)
    return [LowerBoundWitness(dim, "mds", {"theta_max": max(th)}, q_min=max(2, q_min))]


def _sporadic(g, delta):
    d = SPORADIC.get((tuple(g), delta))
    return [LowerBoundWitness(d, "sporadic")] if d is not None else []


def _block_splits(g):
    """(m_top, n_left) such that the top-right m_top x (n-n_left) block is full and
    the bottom-left block is empty."""
    n, m = len(g), g[-1]
    for n_left in range(1, n):
        for m_top in range(1, m):
            if g[n_left] >= m_top and g[n_left - 1] <= m_top:
                yield m_top, n_left


def _combine(g, delta, q):
    n, m = len(g), g[-1]
    if delta < 2:
        return []
    rows = _rows(g)
    best = None
    for m_top, n_left in _block_splits(g):
        left = tuple(g[:n_left])
        bottom = tuple(reversed(conjugate(rows[m_top:])))
        for d1 in range(1, delta):
            d2 = delta - d1
            w1 = _best_direct(left, d1, q)
            if best is not None and w1.dimension <= best.dimension:
                continue
            w2 = _best_direct(bottom, d2, q)
            dim = min(w1.dimension, w2.dimension)
            if best is None or dim > best.dimension:
                best = LowerBoundWitness(
                    dim,
                    "combine",
                    {
                        "top_rows": m_top,
                        "left_cols": n_left,
                        "delta_left": d1,
                        "delta_bottom": d2,
                        "left": w1.to_json(),
                        "bottom": w2.to_json(),
                    },
                    q_min=max(w1.q_min, w2.q_min),
                )
    return [best] if best is not None and best.dimension > 0 else []


def _com3(g, delta):
    n, m = len(g), g[-1]
    if delta < 2:
        return []
    rows = _rows(g)
    for m1, n1 in _block_splits(g):
        n3, m3 = n - n1, m - m1
        if delta > m1 + 1:
            continue
        if delta < m1 + 1 and n3 < m1:
            continue
        if 1 + m1 + n3 > max(n1, m3):
            continue
        alpha = sorted([rows[i] - n3 for i in range(m1)] + [g[j] - m1 for j in range(n1, n)])
        idx = m1 + n3 - delta + 2
        if not 1 <= idx <= len(alpha) or alpha[idx - 1] < m1 + n3:
            continue
        if rows[delta - 2] - n3 < m3:
            continue
        return [LowerBoundWitness(sum(rows[delta - 1 :]), "com3", {"m1": m1, "n1": n1})]
    return []


_CHECKERS = (
    _small_delta,
    _shortening,
    _from_subcodes,
    _gabidulin_subcode,
    _subcodes_general,
    _cfdrm,
    _mds,
)


def _pick(cands, q):
    best = None
    for w in cands:
        if not w.valid_at(q):
            continue
        if best is None or w.dimension > best.dimension:
            best = w
    return best


@lru_cache(maxsize=None)
def _direct_one(g: tuple, delta: int, q) -> LowerBoundWitness | None:
    if not g:
        return None
    cands = []
    for chk in _CHECKERS:
        cands.extend(chk(g, delta))
    cands.extend(_combine(g, delta, q))
    cands.extend(_com3(g, delta))
    cands.extend(_sporadic(g, delta))
    return _pick(cands, q)


@lru_cache(maxsize=None)
def _best_direct(g: tuple, delta: int, q) -> LowerBoundWitness:
    """Best construction on g or on its transpose, without removing dots."""
    if not g:
        return LowerBoundWitness(0, "trivial")
    a = _direct_one(g, delta, q)
    gt = tuple(reversed(conjugate(g)))
    b = _direct_one(gt, delta, q)
    if b is not None and (a is None or b.dimension > a.dimension):
        b = LowerBoundWitness(b.dimension, b.theorem, {**b.params, "transposed": True}, b.q_min)
        a = b
    if a is None or a.dimension <= 0:
        return LowerBoundWitness(0, "trivial")
    return a


def _removals(rows: tuple):
    """Diagrams with one dot less that stay top-right justified."""
    for i, r in enumerate(rows):
        nxt = rows[i + 1] if i + 1 < len(rows) else 0
        if r - 1 >= nxt:
            yield rows[:i] + (r - 1,) + rows[i + 1 :] if r > 1 else rows[:i] + rows[i + 1 :]


def lower_dimension(
    F: FerrersDiagram, delta: int, q: int | None = None, max_removed: int | None = 3
) -> LowerBoundWitness:
    """Largest code dimension on F with rank distance delta provable by the catalogue.

    ``q`` restricts to constructions valid for that field size (None: any).  Dots
    may be removed from F (the smaller code embeds by padding with zeros); at
    most ``max_removed`` of them, or without limit when ``max_removed`` is None.
    """
    if delta < 1:
        raise ValueError("delta must be >= 1")
    best = _best_direct(F.cols, delta, q)
    if max_removed == 0 or F.is_empty():
        return best
    top = ef_upper_exponent(F, delta)
    if best.dimension >= top:
        return best
    seen = {F.rows}
    stack = [(F.rows, 0)]
    while stack:
        rows, depth = stack.pop()
        if max_removed is not None and depth >= max_removed:
            continue
        for sub in _removals(rows):
            if sub in seen:
                continue
            seen.add(sub)
            S = FerrersDiagram.from_rows(sub)
            if ef_upper_exponent(S, delta) <= best.dimension:
                continue
            w = _best_direct(S.cols, delta, q)
            if w.dimension > best.dimension:
                best = LowerBoundWitness(
                    w.dimension,
                    "subdiagram",
                    {"removed": F.dots - S.dots, "rows": list(sub), "inner": w.to_json()},
                    w.q_min,
                )
                if best.dimension >= top:
                    return best
            stack.append((sub, depth + 1))
    return best


def clear_caches() -> None:
    _direct_one.cache_clear()
    _best_direct.cache_clear()


# vertex weights

def upper_exponent(value: int, n: int, delta: int) -> int:
    return ef_upper_exponent(diagram_of(value, n), delta)


def upper_weight(v: PivotVector, delta: int) -> QPolynomial:
    return QPolynomial.monomial(upper_exponent(v.value, v.n, delta))


def lower_exponent(value: int, n: int, delta: int, q: int | None = 2, max_removed: int | None = 3) -> int:
    """Proven dimension for the diagram of ``value``; q=2 keeps constructions valid for all q."""
    return lower_dimension(diagram_of(value, n), delta, q, max_removed).dimension


def spread_exponent(value: int, n: int, k: int) -> tuple[int, bool]:
    j = n - ((value & -value).bit_length() - 1)  # 1-based position of the last one
    return n - j, j <= n - k


def spread_weight(v: PivotVector, n: int, k: int) -> tuple[QPolynomial, bool]:
    if v.weight != k:
        raise ValueError("pivot vector weight differs from k")
    e, exact = spread_exponent(v.value, n, k)
    return QPolynomial.monomial(e), exact


@dataclass
class WeightAssignment:
    """Monomial weights q^e for every weight-k pivot vector of length n."""

    regime: str
    n: int
    d: int
    k: int
    vertices: np.ndarray  # uint64 pivot integers
    exponents: np.ndarray  # int64, weight of vertices[i] is q^exponents[i]
    q_min: int = 2
    exact: np.ndarray | None = None  # spread regime: True where the weight is attained exactly

    def weight(self, i: int) -> QPolynomial:
        return QPolynomial.monomial(int(self.exponents[i]))

    def as_dict(self) -> dict[int, QPolynomial]:
        return {int(v): QPolynomial.monomial(int(e)) for v, e in zip(self.vertices, self.exponents)}


def assign_weights(
    n: int, d: int, k: int, regime: str = "upper", q: int | None = None, max_removed: int | None = 3
) -> WeightAssignment:
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    if d % 2 or d < 2:
        raise ValueError("d must be a positive even integer")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    delta = d // 2
    verts = weight_k_vectors(n, k)
    exact = None
    if regime == "upper":
        exps = _upper_exponents(verts, n, delta)
        q_min = 2
    elif regime == "lower":
        qq = 2 if q is None else q
        exps = [lower_exponent(v, n, delta, qq, max_removed) for v in verts]
        q_min = 2 if q is None else q
    else:
        pairs = [spread_exponent(v, n, k) for v in verts]
        exps = [p[0] for p in pairs]
        exact = np.array([p[1] for p in pairs], dtype=bool)
        q_min = 2
    return WeightAssignment(
        regime, n, d, k, np.array(verts, dtype=np.uint64), np.array(exps, dtype=np.int64), q_min, exact
    )


def _upper_exponents(verts, n, delta):
    """Vectorised ef_upper_exponent over many pivot integers."""
    v = np.asarray(verts, dtype=np.uint64)
    if not len(v):
        return []
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    bits = ((v[:, None] >> shifts) & np.uint64(1)).astype(np.int64)  # most significant first
    above = np.cumsum(bits, axis=1)  # ones up to and including each position
    is_col = (bits == 0) & (above > 0)
    rank = np.cumsum(is_col, axis=1) - 1
    m = is_col.sum(axis=1)[:, None]
    best = None
    for i in range(delta):
        keep = is_col & (rank < m - (delta - 1 - i))
        nu_i = (np.maximum(above - i, 0) * keep).sum(axis=1)
        best = nu_i if best is None else np.minimum(best, nu_i)
    return best.tolist()


def weight_histogram(n: int, d: int, k: int, regime: str = "upper") -> dict[int, int]:
    """Number of weight-k pivot vectors per weight exponent."""
    wa = assign_weights(n, d, k, regime)
    vals, counts = np.unique(wa.exponents, return_counts=True)
    hist = {int(e): int(c) for e, c in zip(vals, counts)}
    assert sum(hist.values()) == comb(n, k)
    return dict(sorted(hist.items(), reverse=True))
