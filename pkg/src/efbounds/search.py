"""Branch-and-bound search for maximum weight cliques of pivot vectors.

Vertices are the weight-k binary vectors of length n, two of them adjacent when
their Hamming distance is at least d.  Every vertex carries a monomial weight
q^e, so the weight of a clique is a polynomial in q.  Polynomials are not
totally ordered over q >= 2, hence the search keeps a small Pareto front of
cliques instead of a single incumbent: a clique enters the front when it beats
every member for at least one admissible q, and members that no longer beat
some other member anywhere are dropped.

Two fronts are maintained.  ``U`` holds cliques with at most ``max_dive``
members and, once the search finishes, contains a maximum weight clique of
that size for every admissible q.  ``U_hat`` holds cliques keyed by their
completion bound (the weight after greedily padding with the heaviest
compatible vertices up to ``ub`` members); it bounds every clique of the graph.
With ``max_dive == ub`` the front ``U`` is exact.

Comparisons run in one of three q-modes: all q >= 2, a fixed q (plain integer
arithmetic), or a range of q.  :func:`solve_split` combines fixed-q runs for
small fields with one range run for all larger ones.
"""
from __future__ import annotations

import signal
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _dive
from .qpoly import QPolynomial, evaluate, positive_somewhere, render, _tail_limit
from .weights import WeightAssignment, assign_weights

BRUTE_FORCE_MAX_VERTICES = 300
BRUTE_FORCE_MAX_SIZE = 6


class SearchInterrupted(Exception):
    pass


# ---------------------------------------------------------------- q-modes


@dataclass(frozen=True)
class QMode:
    """Admissible field sizes: ``lo <= q <= hi`` (``hi`` None means unbounded)."""

    lo: int = 2
    hi: int | None = None

    def __post_init__(self):
        if self.lo < 2:
            raise ValueError("field sizes start at 2")
        if self.hi is not None and self.hi < self.lo:
            raise ValueError("empty q range")

    @property
    def fixed(self) -> int | None:
        return self.lo if self.hi == self.lo else None

    def describe(self) -> str:
        if self.fixed is not None:
            return f"q={self.lo}"
        if self.hi is None:
            return "all" if self.lo == 2 else f"q>={self.lo}"
        return f"{self.lo}<=q<={self.hi}"

    def contains(self, q: int) -> bool:
        return q >= self.lo and (self.hi is None or q <= self.hi)


ALL_Q = QMode()


def parse_qmode(text: str) -> QMode:
    """``all``, ``5``, ``3..7`` or ``5..`` (open ended)."""
    text = text.strip().lower()
    if text in ("all", "any", ""):
        return ALL_Q
    if ".." in text:
        lo, hi = text.split("..", 1)
        return QMode(int(lo) if lo else 2, int(hi) if hi else None)
    q = int(text)
    return QMode(q, q)


class _IntScale:
    """Fixed q: weights are exact integers."""

    def __init__(self, q: int, max_exp: int):
        self.q = q
        self.pow = [q**e for e in range(max_exp + 1)]

    def zero(self):
        return 0

    def mono(self, e, c=1):
        return c * self.pow[e]

    def add(self, a, b):
        return a + b

    def sum_exps(self, exps) -> int:
        p = self.pow
        return sum(p[e] for e in exps.tolist())

    def better(self, a, b) -> bool:
        return a > b


class _PolyScale:
    """Weights are exponent-count vectors compared over a range of q."""

    def __init__(self, mode: QMode, max_exp: int):
        self.lo, self.hi = mode.lo, mode.hi
        self.size = max_exp + 1

    def zero(self):
        return np.zeros(self.size, dtype=np.int64)

    def mono(self, e, c=1):
        out = np.zeros(self.size, dtype=np.int64)
        out[e] = c
        return out

    def add(self, a, b):
        return a + b

    def sum_exps(self, exps):
        return np.bincount(exps, minlength=self.size).astype(np.int64)

    def better(self, a, b) -> bool:
        h = a - b
        nz = np.flatnonzero(h)
        if nz.size == 0:
            return False
        top = nz[-1]
        lead = h[top]
        if lead > 0 and self.hi is None:
            return True
        if top > 0:
            # h(q)/q^top at q = lo, and the same with negative terms dropped;
            # q^(l-top) only shrinks as q grows, so the second value bounds
            # h(q)/q^top from above for every q >= lo
            c = h[nz].astype(np.float64)
            scaled = c * np.power(float(self.lo), (nz - top).astype(np.float64))
            mag = np.abs(scaled).sum()
            if lead < 0 and scaled[scaled > 0].sum() + lead < -1e-9 * mag:
                return False
            if scaled.sum() > 1e-9 * mag:
                return True
        return positive_somewhere([(int(e), int(h[e])) for e in nz[::-1]], self.lo, self.hi)


# ---------------------------------------------------------------- data types


@dataclass(frozen=True)
class Clique:
    members: tuple[int, ...]
    w: QPolynomial
    w_hat: QPolynomial | None = None

    def __len__(self):
        return len(self.members)

    def bits(self, n: int) -> list[str]:
        return [format(v, f"0{n}b") for v in self.members]


@dataclass
class Stats:
    dive_calls: int = 0
    newrecord_calls: int = 0
    seconds: float = 0.0


@dataclass
class ParetoFront:
    U: list[Clique]
    U_hat: list[Clique]
    mode: QMode
    stats: Stats = field(default_factory=Stats)
    incomplete: bool = False
    exact: bool = False

    def best_at(self, q: int) -> tuple[int, Clique | None]:
        best, arg = 0, None
        for c in self.U:
            v = evaluate(c.w, q)
            if arg is None or v > best:
                best, arg = v, c
        return best, arg

    def bound_at(self, q: int) -> int:
        return max((evaluate(c.w_hat, q) for c in self.U_hat), default=0)


class Instance:
    """A weighted graph of pivot vectors together with its clique-size caps."""

    def __init__(
        self,
        n: int,
        d: int,
        k: int,
        ub: int,
        max_dive: int | None = None,
        weights: WeightAssignment | None = None,
        regime: str = "upper",
        q: int | None = None,
        max_removed: int | None = 3,
    ):
        if d % 2 or d < 2:
            raise ValueError("d must be a positive even integer")
        if not 1 <= k <= n or n > 63:
            raise ValueError("need 1 <= k <= n <= 63")
        if d > 2 * k:
            raise ValueError("d > 2k: no two pivot vectors of weight k are that far apart")
        if max_dive is None:
            max_dive = ub
        if not 1 <= max_dive <= ub:
            raise ValueError("need 1 <= max_dive <= ub")
        self.n, self.d, self.k = n, d, k
        self.ub, self.max_dive = ub, max_dive
        if weights is None:
            weights = assign_weights(n, d, k, regime, q, max_removed)
        if (weights.n, weights.d, weights.k) != (n, d, k):
            raise ValueError("weight assignment belongs to another instance")
        self.weights = weights
        self.regime = weights.regime
        self.max_removed = max_removed
        # heaviest first, ties by descending integer
        order = np.lexsort((-weights.vertices.astype(np.int64), -weights.exponents))
        self.vertices = weights.vertices[order]
        self.exponents = weights.exponents[order]
        self.max_exp = int(self.exponents.max()) if len(self.exponents) else 0

    @property
    def delta(self) -> int:
        return self.d // 2

    def __len__(self):
        return len(self.vertices)

    def index_of(self, value: int) -> int:
        hits = np.flatnonzero(self.vertices == np.uint64(value))
        if not len(hits):
            raise ValueError(f"{value} is not a weight-{self.k} vector of length {self.n}")
        return int(hits[0])

    def weight_of(self, members) -> QPolynomial:
        acc: dict[int, int] = {}
        for v in members:
            e = int(self.exponents[self.index_of(v)])
            acc[e] = acc.get(e, 0) + 1
        return QPolynomial(acc)

    def is_clique(self, members) -> bool:
        members = list(members)
        if any(int(v).bit_count() != self.k or v >> self.n for v in members):
            return False
        return all((a ^ b).bit_count() >= self.d for a, b in combinations(members, 2))

    def with_caps(self, ub: int, max_dive: int | None = None) -> "Instance":
        inst = object.__new__(Instance)
        inst.__dict__.update(self.__dict__)
        inst.ub = ub
        inst.max_dive = ub if max_dive is None else max_dive
        if not 1 <= inst.max_dive <= ub:
            raise ValueError("need 1 <= max_dive <= ub")
        return inst


# ---------------------------------------------------------------- the search


class _Search:
    def __init__(self, inst: Instance, mode: QMode, budget: float | None, max_calls: int | None):
        self.inst = inst
        self.mode = mode
        self.verts = inst.vertices
        self.exps = inst.exponents
        self.d = inst.d
        self.ub = inst.ub
        self.md = inst.max_dive
        q = mode.fixed
        self.scale = _IntScale(q, inst.max_exp) if q is not None else _PolyScale(mode, inst.max_exp)
        self.U: list[tuple[tuple[int, ...], object]] = []
        self.U_hat: list[tuple[tuple[int, ...], object]] = []
        self.stats = Stats()
        self.deadline = None if budget is None else time.monotonic() + budget
        self.max_calls = max_calls

    # first ``count`` members of nb adjacent to vertex index i (lazy, chunked)
    def _first_adjacent(self, i: int, nb: np.ndarray, nbv: np.ndarray, count: int) -> np.ndarray:
        if count <= 0:
            return nb[:0]
        v = self.verts[i]
        parts, got, pos, step = [], 0, 0, max(64, 4 * count)
        while got < count and pos < len(nb):
            seg = slice(pos, pos + step)
            hit = nb[seg][np.bitwise_count(nbv[seg] ^ v) >= self.d]
            parts.append(hit[: count - got])
            got += len(parts[-1])
            pos += step
            step *= 2
        return np.concatenate(parts) if len(parts) > 1 else (parts[0] if parts else nb[:0])

    def _ub(self, w_sol, size: int, nb_prefix: np.ndarray, cap: int):
        """Completion bound: w(sol) plus the heaviest compatible vertices up to ``cap`` members."""
        room = cap - size
        if room <= 0 or not len(nb_prefix):
            return w_sol
        return self.scale.add(w_sol, self.scale.sum_exps(self.exps[nb_prefix[:room]]))

    def _better_than_all(self, f, front) -> bool:
        better = self.scale.better
        return all(better(f, w) for _, w in front)

    def _insert(self, front, members, w):
        better = self.scale.better
        if not all(better(w, o) for _, o in front):
            return False
        front.append((members, w))
        # sweep in insertion order; members beaten everywhere by another member go
        i = 0
        while i < len(front):
            _, wi = front[i]
            if any(not better(wi, wj) for j, (_, wj) in enumerate(front) if j != i):
                del front[i]
            else:
                i += 1
        return True

    def _new_record(self, sol, w_sol, nb):
        self.stats.newrecord_calls += 1
        self._insert(self.U, tuple(sol), w_sol)
        w_hat = self._ub(w_sol, len(sol), nb, self.ub)
        self._insert(self.U_hat, tuple(sol), w_hat)

    def _check_budget(self):
        if self.max_calls is not None and self.stats.dive_calls >= self.max_calls:
            raise SearchInterrupted
        if self.deadline is not None and self.stats.dive_calls % 64 == 0 and time.monotonic() > self.deadline:
            raise SearchInterrupted

    def dive(self, sol: list[int], w_sol, nb: np.ndarray, nbv: np.ndarray):
        self._check_budget()
        self.stats.dive_calls += 1
        self._new_record(sol, w_sol, nb)
        if len(sol) >= self.md:
            return
        start = sol[-1] + 1 if sol else 0
        if start >= len(self.verts):
            return
        s = len(sol)
        scale, exps, better = self.scale, self.exps, self.scale.better
        first = int(np.searchsorted(nb, start))
        for pos in range(first, len(nb)):
            i = int(nb[pos])
            e = int(exps[i])
            f = scale.add(w_sol, scale.mono(e, self.md - s))
            f_hat = scale.add(w_sol, scale.mono(e, self.ub - s))
            # The order is heaviest first, so once both cuts fire no later vertex
            # can do better: return as the algorithm is written.  Skipping just
            # this vertex (continue) would be equally sound, only slower.
            if any(not better(f, w) for _, w in self.U) and any(not better(f_hat, w) for _, w in self.U_hat):
                return
            w_cand = scale.add(w_sol, scale.mono(e))
            prefix = self._first_adjacent(i, nb, nbv, self.ub - s - 1)
            f1 = self._ub(w_cand, s + 1, prefix, self.md)
            f1_hat = self._ub(w_cand, s + 1, prefix, self.ub)
            if self._better_than_all(f1, self.U) or self._better_than_all(f1_hat, self.U_hat):
                keep = np.bitwise_count(nbv ^ self.verts[i]) >= self.d
                sol.append(i)
                self.dive(sol, w_cand, nb[keep], nbv[keep])
                sol.pop()

    def seed(self, cliques):
        """Warm start: offer known cliques to both fronts."""
        index = {int(v): i for i, v in enumerate(self.verts.tolist())}
        for members in cliques:
            idx = sorted(index[int(v)] for v in members)
            if len(idx) > self.ub:
                continue
            w = self.scale.sum_exps(self.exps[np.array(idx, dtype=np.int64)]) if idx else self.scale.zero()
            nb = np.arange(len(self.verts))
            for i in idx:
                nb = nb[np.bitwise_count(self.verts[nb] ^ self.verts[i]) >= self.d]
            if len(idx) <= self.md:
                self._insert(self.U, tuple(idx), w)
            self._insert(self.U_hat, tuple(idx), self._ub(w, len(idx), nb, self.ub))

    def run(self):
        nb = np.arange(len(self.verts), dtype=np.int64)
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 4 * self.md + 200))
        incomplete = False
        t0 = time.monotonic()
        try:
            with _sigint_as_interrupt():
                self.dive([], self.scale.zero(), nb, self.verts)
        except SearchInterrupted:
            incomplete = True
        finally:
            sys.setrecursionlimit(limit)
            self.stats.seconds = time.monotonic() - t0
        return incomplete

    def _poly(self, idx) -> QPolynomial:
        acc: dict[int, int] = {}
        for i in idx:
            e = int(self.exps[i])
            acc[e] = acc.get(e, 0) + 1
        return QPolynomial(acc)

    def _hat_poly(self, idx) -> QPolynomial:
        nb = np.arange(len(self.verts))
        for i in idx:
            nb = nb[np.bitwise_count(self.verts[nb] ^ self.verts[i]) >= self.d]
        room = self.ub - len(idx)
        extra = [int(e) for e in self.exps[nb[: max(room, 0)]]]
        acc: dict[int, int] = {}
        for e in [int(self.exps[i]) for i in idx] + extra:
            acc[e] = acc.get(e, 0) + 1
        return QPolynomial(acc)

    def front(self, incomplete: bool) -> ParetoFront:
        to_members = lambda idx: tuple(sorted(int(self.verts[i]) for i in idx))
        U = [Clique(to_members(idx), self._poly(idx)) for idx, _ in self.U]
        U_hat = [Clique(to_members(idx), self._poly(idx), self._hat_poly(idx)) for idx, _ in self.U_hat]
        return ParetoFront(
            U, U_hat, self.mode, self.stats, incomplete, exact=not incomplete and self.md == self.ub
        )


class _CompiledSearch(_Search):
    """The same search with the dive loop compiled; results and dive_calls match
    the reference implementation exactly."""

    CHUNK = 4096
    FRONT_CAP = 1024

    def __init__(self, inst: Instance, mode: QMode, budget: float | None, max_calls: int | None):
        super().__init__(inst, mode, budget, max_calls)
        self.lo = mode.lo
        self.hi = -1 if mode.hi is None else mode.hi
        self.E = inst.max_exp + 1
        cap, width = self.FRONT_CAP, max(inst.ub, 1)
        self.uw = np.zeros((cap, self.E), dtype=np.int64)
        self.umem = np.zeros((cap, width), dtype=np.int64)
        self.ulen = np.zeros(cap, dtype=np.int64)
        self.hw = np.zeros((cap, self.E), dtype=np.int64)
        self.hmem = np.zeros((cap, width), dtype=np.int64)
        self.hlen = np.zeros(cap, dtype=np.int64)
        self.meta = np.zeros(3, dtype=np.int64)
        self.tmp = np.zeros(self.E, dtype=np.int64)

    def _counts(self, idx) -> np.ndarray:
        return np.bincount(self.exps[np.asarray(idx, dtype=np.int64)], minlength=self.E).astype(np.int64)

    def _offer(self, which: int, idx, w) -> None:
        fw, fmem, flen = (self.uw, self.umem, self.ulen) if which == 0 else (self.hw, self.hmem, self.hlen)
        if self.meta[which] >= len(fw):
            self._grow_fronts()
            fw, fmem, flen = (self.uw, self.umem, self.ulen) if which == 0 else (self.hw, self.hmem, self.hlen)
        members = np.asarray(idx, dtype=np.int64)
        _dive.insert(w, members, len(members), fw, fmem, flen, self.meta, which, self.lo, self.hi, self.tmp)

    def _grow_fronts(self) -> None:
        def grow(a):
            out = np.zeros((2 * a.shape[0],) + a.shape[1:], dtype=a.dtype)
            out[: a.shape[0]] = a
            return out

        self.uw, self.umem, self.ulen = grow(self.uw), grow(self.umem), grow(self.ulen)
        self.hw, self.hmem, self.hlen = grow(self.hw), grow(self.hmem), grow(self.hlen)

    def seed(self, cliques):
        index = {int(v): i for i, v in enumerate(self.verts.tolist())}
        for members in cliques:
            idx = sorted(index[int(v)] for v in members)
            if len(idx) > self.ub:
                continue
            nb = np.arange(len(self.verts))
            for i in idx:
                nb = nb[np.bitwise_count(self.verts[nb] ^ self.verts[i]) >= self.d]
            w = self._counts(idx)
            if len(idx) <= self.md:
                self._offer(0, idx, w)
            self._offer(1, idx, w + self._counts(nb[: max(self.ub - len(idx), 0)]))

    def run(self):
        n_v = len(self.verts)
        levels = self.md + 2
        nbuf = np.zeros(max(4 * n_v, 1024), dtype=np.int64)
        nbuf[:n_v] = np.arange(n_v)
        off = np.zeros(levels, dtype=np.int64)
        length = np.zeros(levels, dtype=np.int64)
        length[0] = n_v
        cursor = np.zeros(levels, dtype=np.int64)
        phase = np.zeros(levels, dtype=np.int64)
        sol = np.zeros(levels, dtype=np.int64)
        wsol = np.zeros((levels, self.E), dtype=np.int64)
        self.meta[2] = 0
        verts = np.ascontiguousarray(self.verts, dtype=np.uint64)
        exps = np.ascontiguousarray(self.exps, dtype=np.int64)
        calls = 0
        incomplete = False
        t0 = time.monotonic()
        try:
            with _sigint_as_interrupt():
                while True:
                    limit = calls + self.CHUNK
                    if self.max_calls is not None:
                        limit = min(limit, self.max_calls)
                    status, calls = _dive.run_chunk(
                        verts, exps, self.d, self.ub, self.md, self.lo, self.hi,
                        nbuf, off, length, cursor, phase, sol, wsol,
                        self.uw, self.umem, self.ulen, self.hw, self.hmem, self.hlen, self.meta,
                        calls, limit,
                    )
                    self.stats.dive_calls = self.stats.newrecord_calls = calls
                    if status == _dive.DONE:
                        break
                    if status == _dive.GROW:
                        bigger = np.zeros(2 * len(nbuf), dtype=np.int64)
                        bigger[: len(nbuf)] = nbuf
                        nbuf = bigger
                    elif status == _dive.FULL:
                        self._grow_fronts()
                    elif self.max_calls is not None and calls >= self.max_calls:
                        raise SearchInterrupted
                    if self.deadline is not None and time.monotonic() > self.deadline:
                        raise SearchInterrupted
        except SearchInterrupted:
            incomplete = True
        finally:
            self.stats.seconds = time.monotonic() - t0
        self.U = [(tuple(self.umem[j, : self.ulen[j]].tolist()), None) for j in range(self.meta[0])]
        self.U_hat = [(tuple(self.hmem[j, : self.hlen[j]].tolist()), None) for j in range(self.meta[1])]
        return incomplete


@contextmanager
def _sigint_as_interrupt():
    import threading

    if threading.current_thread() is not threading.main_thread():
        yield
        return

    def handler(signum, frame):
        raise SearchInterrupted

    old = signal.signal(signal.SIGINT, handler)
    try:
        yield
    finally:
        signal.signal(signal.SIGINT, old)


def ub_extend(inst: Instance, members, cap: int | None = None) -> QPolynomial:
    """Weight of ``members`` plus the heaviest compatible vertices, up to ``cap``
    (default ``inst.ub``) members in total."""
    members = [int(v) for v in members]
    if not inst.is_clique(members):
        raise ValueError("not a clique of this instance")
    cap = inst.ub if cap is None else cap
    idx = {inst.index_of(v) for v in members}
    mask = np.ones(len(inst), dtype=bool)
    for v in members:
        mask &= np.bitwise_count(inst.vertices ^ np.uint64(v)) >= inst.d
    cand = np.flatnonzero(mask)
    cand = cand[~np.isin(cand, list(idx))]
    acc: dict[int, int] = {}
    for i in list(idx) + cand[: max(cap - len(idx), 0)].tolist():
        e = int(inst.exponents[i])
        acc[e] = acc.get(e, 0) + 1
    return QPolynomial(acc)


def majorant(p: QPolynomial) -> QPolynomial:
    """A monomial c*q^deg that dominates p for every q >= 1, used to order
    vertices whose weights are not monomials.  Monomials map to themselves."""
    if not p.terms:
        return p
    top = max(p.terms)
    return QPolynomial({top: sum(abs(c) for c in p.terms.values())})


def dive_cut_bound(inst: Instance, members, candidate: int) -> QPolynomial:
    """The cheap bound checked before extending ``members`` by ``candidate``:
    the current weight plus the candidate's weight for every free slot up to
    ``max_dive``.  Valid because later vertices weigh no more."""
    acc = dict(inst.weight_of(members).terms)
    e = int(inst.exponents[inst.index_of(candidate)])
    acc[e] = acc.get(e, 0) + inst.max_dive - len(list(members))
    return QPolynomial(acc)


def solve(
    inst: Instance,
    mode: QMode = ALL_Q,
    seed=None,
    budget: float | None = None,
    max_calls: int | None = None,
    engine: str = "compiled",
) -> ParetoFront:
    """Run the search.  ``seed`` is an iterable of cliques (integer members).
    ``engine="reference"`` runs the plain numpy implementation instead."""
    engines = {"compiled": _CompiledSearch, "reference": _Search}
    if engine not in engines:
        raise ValueError(f"unknown engine {engine!r}")
    s = engines[engine](inst, mode, budget, max_calls)
    if seed:
        s.seed(seed)
    incomplete = s.run()
    return s.front(incomplete)


def solve_fixed_q(inst: Instance, q: int, **kw) -> ParetoFront:
    return solve(inst, QMode(q, q), **kw)


def staged_solve(inst: Instance, ub_schedule, seed=None, mode: QMode = ALL_Q, **kw) -> ParetoFront:
    """Solve with growing clique caps, each stage warm-started from the previous ``U``."""
    schedule = list(ub_schedule)
    if not schedule or schedule != sorted(schedule) or schedule[-1] != inst.ub:
        raise ValueError("schedule must be nondecreasing and end at the instance ub")
    cliques = list(seed or [])
    front = None
    total = Stats()
    for cap in schedule:
        stage = inst.with_caps(cap, min(inst.max_dive, cap))
        front = solve(stage, mode, seed=cliques, **kw)
        cliques = [c.members for c in front.U]
        total.dive_calls += front.stats.dive_calls
        total.newrecord_calls += front.stats.newrecord_calls
        total.seconds += front.stats.seconds
        if front.incomplete:
            break
    front.stats = total
    return front


def brute_force_front(inst: Instance, mode: QMode = ALL_Q, max_size: int = BRUTE_FORCE_MAX_SIZE) -> ParetoFront:
    """Enumerate every clique with at most ``max_dive`` members and keep the
    Pareto front.  Small instances only; raise ``max_size`` at your own risk."""
    if len(inst) > BRUTE_FORCE_MAX_VERTICES or inst.max_dive > max_size:
        raise ValueError(
            f"brute force limited to {BRUTE_FORCE_MAX_VERTICES} vertices and cliques of size {max_size}"
        )
    verts = [int(v) for v in inst.vertices]
    exps = [int(e) for e in inst.exponents]
    n_v = len(verts)
    adj = [[(verts[a] ^ verts[b]).bit_count() >= inst.d for b in range(n_v)] for a in range(n_v)]
    polys: dict[QPolynomial, tuple[int, ...]] = {}

    def grow(clique, cand, acc):
        p = QPolynomial(acc)
        members = tuple(sorted(verts[i] for i in clique))
        if p not in polys or members < polys[p]:
            polys[p] = members
        if len(clique) == inst.max_dive:
            return
        for pos, i in enumerate(cand):
            nacc = dict(acc)
            nacc[exps[i]] = nacc.get(exps[i], 0) + 1
            grow(clique + [i], [j for j in cand[pos + 1 :] if adj[i][j]], nacc)

    grow([], list(range(n_v)), {})
    lo, hi = mode.lo, mode.hi
    keep = []
    for p, members in polys.items():
        if all(positive_somewhere((p - o).items_desc(), lo, hi) for o in polys if o != p):
            keep.append(Clique(members, p))
    keep.sort(key=lambda c: c.members)
    return ParetoFront(keep, [], mode, Stats(), exact=inst.max_dive == inst.ub)


# ---------------------------------------------------------------- reporting


def _range_text(qs: list[int], open_from: int | None) -> str:
    """Compact text for a set of q values, optionally plus every q >= open_from."""
    parts = []
    qs = sorted(qs)
    runs: list[list[int]] = []
    for q in qs:
        if runs and q == runs[-1][1] + 1:
            runs[-1][1] = q
        else:
            runs.append([q, q])
    if open_from is not None:
        if runs and runs[-1][1] + 1 >= open_from:
            open_from = runs.pop()[0]
        tail = "all" if open_from == 2 else f"q>={open_from}"
    for a, b in runs:
        parts.append(f"q={a}" if a == b else f"{a}<=q<={b}")
    if open_from is not None:
        parts.append(tail)
    return ",".join(parts) if parts else "none"


def winners(polys: list[QPolynomial], mode: QMode = ALL_Q) -> list[str]:
    """For each polynomial, the q values of ``mode`` where it is maximal."""
    if not polys:
        return []
    lo, hi = mode.lo, mode.hi
    if hi is None:
        # beyond every pairwise crossing the order is the order at infinity
        cut = lo
        for a in polys:
            for b in polys:
                h = (a - b).items_desc()
                if h and h[0][1] < 0 and h[0][0] > 0:
                    lim = _tail_limit(h)
                    if lim is not None:
                        cut = max(cut, lim)
        scan_hi = cut
    else:
        scan_hi = hi
    wins: list[list[int]] = [[] for _ in polys]
    for q in range(lo, scan_hi + 1):
        vals = [evaluate(p, q) for p in polys]
        top = max(vals)
        for i, v in enumerate(vals):
            if v == top:
                wins[i].append(q)
    out = []
    for i, p in enumerate(polys):
        open_from = None
        if hi is None:
            at_inf = all(not _beats_at_infinity(o, p) for o in polys)
            open_from = scan_hi + 1 if at_inf else None
        out.append(_range_text(wins[i], open_from))
    return out


def _beats_at_infinity(a: QPolynomial, b: QPolynomial) -> bool:
    h = (a - b).items_desc()
    return bool(h) and h[0][1] > 0


def front_to_json(inst: Instance, front: ParetoFront, include_hat: bool = True) -> list[dict]:
    out = []
    valid = winners([c.w for c in front.U], front.mode)
    for c, vq in zip(front.U, valid):
        out.append(_clique_json(inst, c, c.w, vq, "U"))
    if include_hat:
        for c in front.U_hat:
            out.append(_clique_json(inst, c, c.w_hat, front.mode.describe(), "U_hat"))
    return out


def _clique_json(inst, c: Clique, poly: QPolynomial, valid_q: str, kind: str) -> dict:
    return {
        "poly": render(poly),
        "coeffs": {str(e): c_ for e, c_ in sorted(poly.terms.items(), reverse=True)},
        "clique": list(c.members),
        "clique_bits": c.bits(inst.n),
        "valid_q": valid_q,
        "kind": kind,
    }


# ---------------------------------------------------------------- split runs


@dataclass
class SplitResult:
    """Fronts of a run split into fixed small fields and one open range."""

    parts: list[tuple[QMode, ParetoFront]]

    @property
    def incomplete(self) -> bool:
        return any(f.incomplete for _, f in self.parts)

    @property
    def stats(self) -> Stats:
        s = Stats()
        for _, f in self.parts:
            s.dive_calls += f.stats.dive_calls
            s.newrecord_calls += f.stats.newrecord_calls
            s.seconds += f.stats.seconds
        return s

    def best(self) -> list[tuple[str, QPolynomial, Clique]]:
        """Best clique per q, merged across parts: (valid_q, polynomial, clique)."""
        rows: dict[QPolynomial, tuple[list[int], int | None, Clique]] = {}
        for mode, front in self.parts:
            if not front.U:
                continue
            ws = winners([c.w for c in front.U], mode)
            for c, text in zip(front.U, ws):
                qs, open_from = _parse_range_text(text, mode)
                if not qs and open_from is None:
                    continue
                prev = rows.get(c.w)
                if prev is None:
                    rows[c.w] = (qs, open_from, c)
                else:
                    rows[c.w] = (prev[0] + qs, open_from if open_from is not None else prev[1], prev[2])
        out = []
        for p, (qs, open_from, c) in rows.items():
            out.append((_range_text(qs, open_from), p, c))
        out.sort(key=lambda r: _first_q(r[0]))
        return out

    def value_at(self, q: int) -> int:
        for mode, front in self.parts:
            if mode.contains(q):
                return front.best_at(q)[0]
        raise ValueError(f"q={q} not covered")


def _first_q(text: str) -> int:
    head = text.split(",")[0]
    if head == "all":
        return 2
    return int("".join(ch for ch in head.split("<=")[0] if ch.isdigit()) or 2)


def _parse_range_text(text: str, mode: QMode) -> tuple[list[int], int | None]:
    qs: list[int] = []
    open_from = None
    if text == "none":
        return qs, None
    for part in text.split(","):
        if part == "all":
            open_from = 2
        elif part.startswith("q>="):
            open_from = int(part[3:])
        elif part.startswith("q="):
            qs.append(int(part[2:]))
        else:
            a, _, b = part.split("<=")
            qs.extend(range(int(a), int(b) + 1))
    return qs, open_from


def solve_split(inst: Instance, split: int = 4, budget: float | None = None, seed=None, **kw) -> SplitResult:
    """Fixed-q runs for 2 <= q <= split and one run over q >= split+1.

    ``split`` below 2 means a single run over all q.  The open range runs
    first; every later run is warm-started with the cliques found so far,
    which for small q usually saves most of the work.  In the lower regime
    each part uses the weights certified for its smallest field size.
    """
    deadline = None if budget is None else time.monotonic() + budget
    cliques = list(seed or [])

    def remaining():
        return None if deadline is None else max(0.0, deadline - time.monotonic())

    def for_q(q):
        if inst.regime != "lower":
            return inst
        w = assign_weights(inst.n, inst.d, inst.k, "lower", q, inst.max_removed)
        return Instance(inst.n, inst.d, inst.k, inst.ub, inst.max_dive, weights=w)

    def run(mode, q):
        front = solve(for_q(q), mode, seed=cliques, budget=remaining(), **kw)
        cliques.extend(c.members for c in front.U if c.members not in cliques)
        return mode, front

    lo = max(2, split + 1)
    parts = [run(QMode(lo), lo)]
    for q in range(split, 1, -1):
        parts.append(run(QMode(q, q), q))
    parts.sort(key=lambda p: p[0].lo)
    return SplitResult(parts)
