"""Tabulated bounds and diagram dimensions shipped with the package, and a verifier.

``data/corpus.json`` holds two lists.  ``entries`` are polynomial bounds on the
size of constant dimension codes from the multilevel construction, keyed by
(n, d, k) and a condition on q, usually with the skeleton clique that attains
them.  ``diagrams`` are Ferrers diagrams whose best known code dimension falls
short of the upper bound, with the construction behind the known value.

Fixed-q entries store their polynomial with q as the variable; the printed
number is its value at that q.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations
from math import comb, floor

from .diagrams import FerrersDiagram, diagram_of, ef_upper_exponent
from .qpoly import QPolynomial, evaluate, parse

KINDS = ("exact", "conjectured", "upper", "lower")

# Clique-number bounds for binary constant weight codes quoted alongside the
# tables: exact values, or the best known upper bound where open.
QUOTED_CLIQUE_BOUNDS = {
    (14, 6, 4): 14,
    (15, 10, 6): 3,
    (14, 8, 5): 4,
    (19, 10, 9): 19,
    (18, 8, 7): 33,
    (18, 8, 8): 49,
    (19, 8, 9): 103,
}


@dataclass(frozen=True)
class QCondition:
    """``q >= q_min`` or q in an explicit list."""

    q_min: int | None = None
    values: tuple[int, ...] = ()

    @classmethod
    def from_json(cls, obj) -> "QCondition":
        if "min" in obj:
            return cls(q_min=int(obj["min"]))
        return cls(values=tuple(int(v) for v in obj["values"]))

    def contains(self, q: int) -> bool:
        return q >= self.q_min if self.q_min is not None else q in self.values

    def __str__(self):
        if self.q_min is not None:
            return "all" if self.q_min == 2 else f"q>={self.q_min}"
        return ",".join(f"q={v}" for v in self.values)


@dataclass(frozen=True)
class CorpusEntry:
    n: int
    d: int
    k: int
    q: QCondition
    kind: str
    poly: QPolynomial
    clique: tuple[int, ...] = ()
    value: int | None = None
    tags: dict = field(default_factory=dict, hash=False, compare=False)
    pending: dict = field(default_factory=dict, hash=False, compare=False)
    ub: int | None = None
    max_dive: int | None = None
    clique_complete: bool = True

    @property
    def key(self) -> str:
        return f"({self.n},{self.d},{self.k}) {self.q} {self.kind}"

    def red(self) -> set[int]:
        return {int(v) for v, t in self.tags.items() if t.get("color") == "red"}


@dataclass(frozen=True)
class Construction:
    sub_rows: tuple[int, ...]
    theorem: str
    best: int
    q: dict | None = None
    r: int | None = None


@dataclass(frozen=True)
class DiagramEntry:
    n: int
    d: int
    k: int
    q: QCondition
    pivot: int
    rows: tuple[int, ...]
    constructions: tuple[Construction, ...]
    optimal: int

    @property
    def delta(self) -> int:
        return self.d // 2

    @property
    def best(self) -> int:
        return max(c.best for c in self.constructions)

    @property
    def diagram(self) -> FerrersDiagram:
        return FerrersDiagram.from_rows(self.rows)

    @property
    def upper(self) -> int:
        return ef_upper_exponent(self.diagram, self.delta)

    def consistent(self) -> bool:
        """Rows match the pivot, the stated optimum is the upper bound and the
        best known dimension does not exceed it."""
        return (
            diagram_of(self.pivot, self.n).rows == self.rows
            and self.optimal == self.upper
            and self.best <= self.optimal
        )


@dataclass
class Corpus:
    entries: list[CorpusEntry]
    diagrams: list[DiagramEntry]

    def find(self, n: int, d: int, k: int) -> list[CorpusEntry]:
        return [e for e in self.entries if (e.n, e.d, e.k) == (n, d, k)]

    def instances(self) -> list[tuple[int, int, int]]:
        return sorted({(e.n, e.d, e.k) for e in self.entries})


def _kind(obj) -> str:
    if obj["relation"] == "le":
        return "upper"
    if obj["relation"] == "ge":
        return "lower"
    return "conjectured" if obj.get("bar") else "exact"


def _entry(obj) -> CorpusEntry:
    return CorpusEntry(
        n=obj["n"],
        d=obj["d"],
        k=obj["k"],
        q=QCondition.from_json(obj["q"]),
        kind=_kind(obj),
        poly=parse(obj["poly"]),
        clique=tuple(obj.get("clique") or ()),
        value=obj.get("value"),
        tags=obj.get("tags", {}),
        pending=obj.get("pending", {}),
        ub=obj.get("ub"),
        max_dive=obj.get("max_dive"),
        clique_complete=obj.get("clique_complete", True),
    )


def _diagram(obj) -> DiagramEntry:
    cons = tuple(
        Construction(tuple(c["sub_rows"]), c["theorem"], c["best"], c.get("q"), c.get("r"))
        for c in obj["constructions"]
    )
    return DiagramEntry(
        obj["n"], obj["d"], obj["k"], QCondition.from_json(obj["q"]), obj["pivot"],
        tuple(obj["rows"]), cons, obj["optimal"],
    )


@lru_cache(maxsize=1)
def load() -> Corpus:
    text = resources.files("efbounds").joinpath("data/corpus.json").read_text(encoding="utf-8")
    raw = json.loads(text)
    return Corpus([_entry(o) for o in raw["entries"]], [_diagram(o) for o in raw["diagrams"]])


# ---------------------------------------------------------------- clique-size bounds


@lru_cache(maxsize=None)
def johnson_bound(n: int, d: int, w: int) -> int:
    """Upper bound on the size of a binary code of length n, constant weight w and
    minimum distance d, from the restricted and unrestricted Johnson bounds."""
    if w < 0 or w > n:
        return 0
    delta = (d + 1) // 2
    if delta <= 1:
        return comb(n, w)
    w = min(w, n - w)
    if delta > w:
        return 1
    if delta == w:
        return n // w
    best = comb(n, w)
    den = w * w - w * n + delta * n
    if den > 0:
        best = min(best, delta * n // den)
    best = min(best, floor(n * johnson_bound(n - 1, d, w - 1) / w))
    if n - w > 0:
        best = min(best, floor(n * johnson_bound(n - 1, d, w) / (n - w)))
    return best


def default_ub(n: int, d: int, k: int) -> tuple[int, str]:
    """(clique-size cap, where it came from)."""
    jb = johnson_bound(n, d, k)
    quoted = QUOTED_CLIQUE_BOUNDS.get((n, d, k))
    if quoted is not None and quoted <= jb:
        return quoted, "tabulated"
    return jb, "johnson"


def is_tabulated(n: int, d: int, k: int) -> bool:
    return any((e.n, e.d, e.k) == (n, d, k) for e in load().entries)


# ---------------------------------------------------------------- verification


@dataclass
class Check:
    key: str
    status: str  # pass | fail | skipped
    detail: str = ""
    seconds: float = 0.0


def clique_ok(e: CorpusEntry) -> bool:
    cl = e.clique
    if any(v.bit_count() != e.k or v >> e.n for v in cl):
        return False
    return all((a ^ b).bit_count() >= e.d for a, b in combinations(cl, 2))


def upper_sum(e: CorpusEntry) -> QPolynomial:
    acc: dict[int, int] = {}
    for v in e.clique:
        x = ef_upper_exponent(diagram_of(v, e.n), e.d // 2)
        acc[x] = acc.get(x, 0) + 1
    return QPolynomial(acc)


def audit(e: CorpusEntry) -> Check:
    """Clique validity plus: the clique's upper weights add up to the polynomial."""
    if not e.clique:
        return Check(e.key, "skipped", "no clique stored")
    if not clique_ok(e):
        return Check(e.key, "fail", "clique has a vector of wrong weight or a close pair")
    if e.kind == "lower" or not e.clique_complete:
        return Check(e.key, "pass", "clique valid")
    got = upper_sum(e)
    if e.q.q_min is not None:
        ok = got == e.poly
    else:
        ok = all(evaluate(got, q) == evaluate(e.poly, q) for q in e.q.values)
    if e.value is not None and e.q.values:
        ok = ok and evaluate(e.poly, e.q.values[0]) == e.value
    return Check(e.key, "pass" if ok else "fail", "" if ok else f"clique sums to {got}")


def in_tier(e: CorpusEntry, tier: int) -> bool:
    if e.kind not in ("exact", "conjectured"):
        return False
    if tier >= 2:
        return True
    return e.d >= 10 or (e.n <= 14 and comb(e.n, e.k) <= 3003)


def resolve(e: CorpusEntry, budget: float | None = None) -> Check:
    """Solve the instance again and compare with the stored polynomial."""
    from .search import ALL_Q, Instance, QMode, solve, winners

    t0 = time.monotonic()
    ub, _ = default_ub(e.n, e.d, e.k)
    inst = Instance(e.n, e.d, e.k, ub)
    if e.q.q_min is not None:
        mode = ALL_Q if e.q.q_min == 2 else QMode(e.q.q_min)
        front = solve(inst, mode, budget=budget)
        dt = time.monotonic() - t0
        if front.incomplete:
            return Check(e.key, "skipped", "budget exhausted", dt)
        polys = [c.w for c in front.U]
        wins = winners(polys, mode)
        target = mode.describe()
        hit = [p for p, w in zip(polys, wins) if w == target]
        ok = hit == [e.poly]
        detail = "" if ok else "front: " + "; ".join(f"{p} [{w}]" for p, w in zip(polys, wins))
        return Check(e.key, "pass" if ok else "fail", detail, dt)
    # warm start: the fronts for larger q hand good cliques to the small ones
    above = solve(inst, QMode(max(e.q.values) + 1), budget=budget)
    cliques = [c.members for c in above.U]
    for q in sorted(e.q.values, reverse=True):
        front = solve(inst, QMode(q, q), seed=cliques, budget=budget)
        cliques += [c.members for c in front.U]
        if front.incomplete:
            return Check(e.key, "skipped", "budget exhausted", time.monotonic() - t0)
        got = front.best_at(q)[0]
        if got != evaluate(e.poly, q):
            return Check(e.key, "fail", f"q={q}: {got} != {evaluate(e.poly, q)}", time.monotonic() - t0)
    return Check(e.key, "pass", "", time.monotonic() - t0)


def parse_filter(text: str | None) -> dict[str, int]:
    """``n=14,d=6`` -> {"n": 14, "d": 6}."""
    out: dict[str, int] = {}
    if not text:
        return out
    for part in text.split(","):
        name, _, val = part.partition("=")
        name = name.strip()
        if name not in ("n", "d", "k", "q") or not val.strip().isdigit():
            raise ValueError(f"bad filter term {part!r}")
        out[name] = int(val)
    return out


def matches(e: CorpusEntry, flt: dict[str, int]) -> bool:
    for name, val in flt.items():
        if name == "q":
            if not e.q.contains(val):
                return False
        elif getattr(e, name) != val:
            return False
    return True


def verify(tier: int = 0, flt: dict[str, int] | None = None, budget: float | None = 120.0) -> list[Check]:
    """Tier 0 audits every stored clique; tier 1 also re-solves the quick
    instances; tier 2 re-solves every exact or conjectured entry."""
    flt = flt or {}
    out = []
    for e in load().entries:
        if not matches(e, flt):
            continue
        out.append(audit(e))
        if tier >= 1 and in_tier(e, tier):
            out.append(resolve(e, budget))
    return out
