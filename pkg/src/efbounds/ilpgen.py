"""Integer programming models for (weighted) maximum cliques of pivot vectors.

Four variants are produced, all as text in the common LP file format:

``edge``
    one binary per vertex and ``x_u + x_v <= 1`` for every pair of vertices
    that may not appear together (Hamming distance below d).  With
    ``literal=True`` the constraints run over the compatible pairs instead,
    which models independent sets rather than cliques.
``cover``
    the pair constraints are replaced by one packing row per t-subset S of
    coordinates, t = k - d/2 + 1: at most one chosen vector may contain all of S.
    Any two vectors sharing t ones are too close, so every conflicting pair is
    covered.
``weighted``
    cover (or edge) rows with objective sum q^e(v) x_v at a fixed q.
``counting``
    integer counters a_i = number of chosen vertices of weight q^i, a cap on
    their sum, and a free objective over the counters.

A reader for the same format and a small exact branch and bound are included
so that emitted models can be checked without an external solver.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from itertools import combinations

from .diagrams import weight_k_vectors
from .weights import assign_weights

VARIANTS = ("edge", "cover", "weighted", "counting")
EXACT_FLOAT_LIMIT = 2**53


class OverflowRisk(UserWarning):
    pass


@dataclass
class Constraint:
    name: str
    coefs: dict[str, int]
    sense: str  # "<=", ">=", "="
    rhs: int


@dataclass
class IlpModel:
    variant: str
    objective: dict[str, int]
    constraints: list[Constraint]
    binaries: list[str]
    generals: list[str] = field(default_factory=list)
    bounds: dict[str, tuple[int, int | None]] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)
    overflow_risk: bool = False

    @property
    def variables(self) -> list[str]:
        return self.binaries + self.generals


def cover_size(k: int, d: int) -> int:
    return k - d // 2 + 1


def _conflict_rows(verts, d, literal):
    rows = []
    for u, v in combinations(verts, 2):
        far = (u ^ v).bit_count() >= d
        if far == literal:
            rows.append({f"x_{u}": 1, f"x_{v}": 1})
    return rows


def _cover_rows(verts, n, t):
    rows = []
    for S in combinations(range(n), t):
        mask = sum(1 << (n - 1 - p) for p in S)
        members = [v for v in verts if v & mask == mask]
        if len(members) > 1:
            rows.append({f"x_{v}": 1 for v in members})
    return rows


def emit(
    n: int,
    d: int,
    k: int,
    variant: str = "edge",
    q: int | None = None,
    coefs: dict[int, int] | None = None,
    a1_bound: int | None = None,
    fix: dict[int, int] | None = None,
    rows: str | None = None,
    literal: bool = False,
    regime: str = "upper",
) -> IlpModel:
    """Build a model.  ``rows`` picks the conflict rows ("edge" or "cover") for
    the weighted and counting variants; by default cover rows when t >= 1.
    ``coefs`` maps exponents to objective coefficients of the counters (default
    every counter weighs 1), ``fix`` pins counters to values."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if d % 2 or not 2 <= d <= 2 * k or not 1 <= k <= n:
        raise ValueError("need d even with 2 <= d <= 2k and 1 <= k <= n")
    t = cover_size(k, d)
    if rows is None:
        rows = "cover" if variant == "cover" or (variant in ("weighted", "counting") and t >= 1) else "edge"
    if rows == "cover" and t <= 0:
        raise ValueError("t = k - d/2 + 1 <= 0: only the pairwise rows are available")
    if literal and rows != "edge":
        raise ValueError("--literal applies to the pairwise rows only")
    verts = weight_k_vectors(n, k)
    names = [f"x_{v}" for v in verts]
    packing = _cover_rows(verts, n, t) if rows == "cover" else _conflict_rows(verts, d, literal)
    cons = [Constraint(f"c{i + 1}", r, "<=", 1) for i, r in enumerate(packing)]
    meta = {"variant": variant, "n": str(n), "d": str(d), "k": str(k), "rows": rows}
    if rows == "cover":
        meta["t"] = str(t)
    if literal:
        meta["literal"] = "1"
    model = IlpModel(variant, {}, cons, names, meta=meta)

    if variant in ("edge", "cover"):
        model.objective = {x: 1 for x in names}
        return model

    w = assign_weights(n, d, k, regime)
    exps = dict(zip(w.vertices.tolist(), w.exponents.tolist()))
    if variant == "weighted":
        if q is None or q < 2:
            raise ValueError("the weighted variant needs a field size q >= 2")
        model.meta["q"] = str(q)
        model.objective = {f"x_{v}": q ** exps[v] for v in verts}
        top = max(model.objective.values())
        if top > EXACT_FLOAT_LIMIT:
            model.overflow_risk = True
            model.meta["overflow_risk"] = "1"
            warnings.warn(
                f"largest weight {top} exceeds 2^53; floating point solvers may round it", OverflowRisk, stacklevel=2
            )
        return model

    if a1_bound is None:
        raise ValueError("the counting variant needs the clique-size cap a1_bound")
    present = sorted(set(exps.values()), reverse=True)
    coefs = {e: 1 for e in present} if coefs is None else coefs
    model.generals = [f"a_{e}" for e in present]
    model.objective = {f"a_{e}": c for e, c in coefs.items() if c and e in exps.values()}
    for e in present:
        row = {f"a_{e}": -1}
        row.update({f"x_{v}": 1 for v in verts if exps[v] == e})
        model.constraints.append(Constraint(f"count{e}", row, "=", 0))
    model.constraints.append(Constraint("cap", {f"a_{e}": 1 for e in present}, "<=", a1_bound))
    for e in present:
        model.bounds[f"a_{e}"] = (0, a1_bound)
    for e, val in (fix or {}).items():
        if f"a_{e}" in model.bounds:
            model.bounds[f"a_{e}"] = (val, val)
    model.meta["a1"] = str(a1_bound)
    return model


# ---------------------------------------------------------------- LP text


def _expr(coefs: dict[str, int], per_line: int = 8) -> str:
    parts = []
    for i, (v, c) in enumerate(coefs.items()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        term = f"{sign} {v}" if a == 1 else f"{sign} {a} {v}"
        if i == 0 and sign == "+":
            term = term[2:]
        parts.append(term)
    lines = [" ".join(parts[i : i + per_line]) for i in range(0, len(parts), per_line)]
    return "\n   ".join(lines) if lines else "0"


def to_lp(model: IlpModel) -> str:
    out = ["\\ " + " ".join(f"{k}={v}" for k, v in model.meta.items())]
    out.append("Maximize")
    out.append(" obj: " + _expr(model.objective))
    out.append("Subject To")
    for c in model.constraints:
        out.append(f" {c.name}: {_expr(c.coefs)} {c.sense} {c.rhs}")
    if model.bounds:
        out.append("Bounds")
        for v, (lo, hi) in model.bounds.items():
            out.append(f" {v} = {lo}" if lo == hi else f" {lo} <= {v} <= {hi}" if hi is not None else f" {v} >= {lo}")
    out.append("Binary")
    out.extend(" " + " ".join(model.binaries[i : i + 10]) for i in range(0, len(model.binaries), 10))
    if model.generals:
        out.append("General")
        out.append(" " + " ".join(model.generals))
    out.append("End")
    return "\n".join(out) + "\n"


_SECTIONS = {
    "maximize": "obj", "maximise": "obj", "max": "obj",
    "subject to": "st", "such that": "st", "st": "st", "s.t.": "st",
    "bounds": "bounds", "binary": "bin", "binaries": "bin", "bin": "bin",
    "general": "gen", "generals": "gen", "gen": "gen", "end": "end",
}
_TERM = re.compile(r"([+-]?)\s*(\d*)\s*([A-Za-z_][\w.]*)")


def _parse_expr(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    text = text.strip()
    if text == "0":
        return out
    pos = 0
    for m in _TERM.finditer(text):
        if text[pos : m.start()].strip():
            raise ValueError(f"cannot parse {text[pos:m.start()]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        out[m.group(3)] = out.get(m.group(3), 0) + sign * coef
        pos = m.end()
    if text[pos:].strip():
        raise ValueError(f"cannot parse {text[pos:]!r}")
    return out


def read_lp(text: str) -> IlpModel:
    """Read a model written by :func:`to_lp` (maximisation, integer data)."""
    meta: dict[str, str] = {}
    chunks: dict[str, list[str]] = {"obj": [], "st": [], "bounds": [], "bin": [], "gen": []}
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("\\"):
            for kv in line[1:].split():
                if "=" in kv:
                    k, v = kv.split("=", 1)
                    meta[k] = v
            continue
        if not line:
            continue
        key = line.lower()
        if key in _SECTIONS:
            section = _SECTIONS[key]
            if section == "end":
                break
            continue
        if section is None:
            raise ValueError(f"text before the objective section: {line!r}")
        if raw[:1].isspace() and raw.startswith("   ") and chunks[section] and section in ("obj", "st"):
            chunks[section][-1] += " " + line
        else:
            chunks[section].append(line)
    objective = _parse_expr(chunks["obj"][0].split(":", 1)[1]) if chunks["obj"] else {}
    cons = []
    for line in chunks["st"]:
        name, body = line.split(":", 1)
        m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+)\s*$", body)
        if not m:
            raise ValueError(f"bad constraint {line!r}")
        cons.append(Constraint(name.strip(), _parse_expr(m.group(1)), m.group(2), int(m.group(3))))
    bounds = {}
    for line in chunks["bounds"]:
        m = re.fullmatch(r"(-?\d+)\s*<=\s*(\S+)\s*<=\s*(-?\d+)", line)
        if m:
            bounds[m.group(2)] = (int(m.group(1)), int(m.group(3)))
            continue
        m = re.fullmatch(r"(\S+)\s*=\s*(-?\d+)", line)
        if m:
            bounds[m.group(1)] = (int(m.group(2)), int(m.group(2)))
            continue
        m = re.fullmatch(r"(\S+)\s*>=\s*(-?\d+)", line)
        if not m:
            raise ValueError(f"bad bound {line!r}")
        bounds[m.group(1)] = (int(m.group(2)), None)
    binaries = [v for line in chunks["bin"] for v in line.split()]
    generals = [v for line in chunks["gen"] for v in line.split()]
    return IlpModel(
        meta.get("variant", "edge"), objective, cons, binaries, generals, bounds, meta,
        overflow_risk=meta.get("overflow_risk") == "1",
    )


# ---------------------------------------------------------------- tiny exact solver


def _eliminate_counters(model: IlpModel):
    """Rewrite counters defined by ``-a + sum x = 0`` in terms of the binaries.
    Returns (objective, rows) over binaries only, rows as (coefs, lo, hi)."""
    defs: dict[str, dict[str, int]] = {}
    rest = []
    for c in model.constraints:
        gens = [v for v in c.coefs if v in model.generals]
        if c.sense == "=" and c.rhs == 0 and len(gens) == 1 and c.coefs[gens[0]] == -1:
            defs[gens[0]] = {v: a for v, a in c.coefs.items() if v != gens[0]}
        else:
            rest.append(c)
    missing = set(model.generals) - set(defs)
    if missing:
        raise ValueError(f"general variables without a defining equation: {sorted(missing)}")

    def expand(coefs):
        out: dict[str, int] = {}
        for v, a in coefs.items():
            for x, b in (defs[v].items() if v in defs else [(v, 1)]):
                out[x] = out.get(x, 0) + a * b
        return {x: a for x, a in out.items() if a}

    rows = []
    for c in rest:
        e = expand(c.coefs)
        lo = c.rhs if c.sense in (">=", "=") else None
        hi = c.rhs if c.sense in ("<=", "=") else None
        rows.append((e, lo, hi))
    for v, (lo, hi) in model.bounds.items():
        e = expand({v: 1})
        rows.append((e, lo if lo else None, hi))
    return expand(model.objective), rows


def solve_small(model: IlpModel, max_vars: int = 200) -> tuple[int, list[str]]:
    """Exact optimum of a small packing-type model by branch and bound.

    Counters are substituted away.  Binaries with no positive objective weight
    are held at 0 when every row is a packing row (nonnegative coefficients,
    upper bound only), which is the case for all emitted models unless a
    counter is pinned from below."""
    obj, rows = _eliminate_counters(model)
    if any(a < 0 for e, _, _ in rows for a in e.values()):
        raise ValueError("the built-in solver needs nonnegative row coefficients")
    packing = all(lo is None for _, lo, _ in rows)
    xs = [x for x in model.binaries if not packing or obj.get(x, 0) > 0]
    if len(xs) > max_vars:
        raise ValueError(f"{len(xs)} free binaries; the built-in solver handles at most {max_vars}")
    xs.sort(key=lambda x: -obj.get(x, 0))
    index = {x: i for i, x in enumerate(xs)}
    live = []
    for e, lo, hi in rows:
        if not packing and any(x not in index for x in e):
            raise ValueError("row references an unknown variable")
        live.append(({index[x]: a for x, a in e.items() if x in index}, lo, hi))
    by_var: list[list[int]] = [[] for _ in xs]
    for r, (e, _, _) in enumerate(live):
        for i in e:
            by_var[i].append(r)
    weight = [obj.get(x, 0) for x in xs]
    # suffix sums of positive weights bound what the undecided variables can add
    tail = [0] * (len(xs) + 1)
    for i in range(len(xs) - 1, -1, -1):
        tail[i] = tail[i + 1] + max(weight[i], 0)
    acts = [0] * len(live)
    reach = [sum(e.values()) for e, _, _ in live]  # activity the undecided variables could still add
    best_val = [None]
    best_set: list[list[int]] = [[]]
    chosen: list[int] = []

    def rec(i, val):
        if best_val[0] is not None and val + tail[i] <= best_val[0]:
            return
        if i == len(xs):
            best_val[0] = val
            best_set[0] = list(chosen)
            return
        for take in (1, 0):
            ok = True
            for r in by_var[i]:
                e, lo, hi = live[r]
                acts[r] += e[i] * take
                reach[r] -= e[i]
                if (hi is not None and acts[r] > hi) or (lo is not None and acts[r] + reach[r] < lo):
                    ok = False
            if ok:
                chosen.extend([i] * take)
                rec(i + 1, val + weight[i] * take)
                del chosen[len(chosen) - take :]
            for r in by_var[i]:
                e, _, _ = live[r]
                acts[r] -= e[i] * take
                reach[r] += e[i]

    if any(lo is not None and lo > sum(e.values()) for e, lo, _ in live):
        raise ValueError("model is infeasible")
    rec(0, 0)
    if best_val[0] is None:
        raise ValueError("model is infeasible")
    return best_val[0], [xs[i] for i in best_set[0]]
