"""Command line front end: ``efbounds <command> ...``.

Exit codes: 0 success, 2 bad arguments, 3 search stopped by its budget (the
reported front is then only a lower bound), 4 corpus verification failures.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor

from . import corpus, ilpgen
from .diagrams import parse_pivot, to_diagram, nu_vector, ef_upper_exponent
from .qpoly import render
from .search import (
    ALL_Q,
    Instance,
    QMode,
    _clique_json,
    front_to_json,
    parse_qmode,
    solve,
    solve_split,
)
from .spreads import SpreadParams, achieved_polynomial, spread_clique, spread_polynomial
from .weights import lower_dimension, weight_histogram

EXIT_OK, EXIT_USAGE, EXIT_TRUNCATED, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output


def _table(doc: dict) -> str:
    """Aligned text with the same content as the JSON document."""
    lines = []
    for key, val in doc.items():
        if isinstance(val, list) and val and isinstance(val[0], dict):
            continue
        if isinstance(val, dict):
            val = " ".join(f"{k}={v}" for k, v in val.items())
        lines.append(f"{key}: {json.dumps(val) if not isinstance(val, str) else val}")
    for key, rows in doc.items():
        if not isinstance(rows, list) or not rows or not isinstance(rows[0], dict):
            continue
        cols = list(rows[0].keys())
        cells = [[_cell(r[c]) for c in cols] for r in rows]
        width = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines.append("")
        lines.append(f"[{key}]")
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, width)).rstrip())
        for row in cells:
            lines.append("  ".join(x.ljust(w) for x, w in zip(row, width)).rstrip())
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, list):
        return ",".join(str(x) for x in v) or "-"
    if isinstance(v, dict):
        return ",".join(f"{k}:{x}" for k, x in v.items()) or "-"
    return str(v)


def _uncell(col: str, text: str):
    if col == "clique":
        return [] if text == "-" else [int(x) for x in text.split(",")]
    if col == "clique_bits":
        return [] if text == "-" else text.split(",")
    if col == "coeffs":
        return {} if text == "-" else {a: int(b) for a, b in (x.split(":") for x in text.split(","))}
    if col in ("exponent", "vertices"):
        return int(text)
    if col == "tight":
        return [int(x) for x in text.split(",")]
    return text


def _scalar(key: str, text: str):
    pairs = [x.split("=", 1) for x in text.split()]
    if key == "instance":
        return {a: int(b) if b.lstrip("-").isdigit() else b for a, b in pairs}
    try:
        return json.loads(text)
    except ValueError:
        return text


def read_table(text: str) -> dict:
    """Inverse of the table format; solve output gets its ``fronts`` back."""
    doc: dict = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith("[") and line.endswith("]"):
            key = line[1:-1]
            header = lines[i + 1]
            starts = [j for j in range(len(header)) if header[j] != " " and (j == 0 or header[j - 1] == " ")]
            cols = header.split()
            rows = []
            i += 2
            while i < len(lines) and lines[i]:
                row = lines[i]
                cells = [row[a:b].strip() for a, b in zip(starts, starts[1:] + [len(row)])]
                rows.append({c: _uncell(c, x) for c, x in zip(cols, cells)})
                i += 1
            doc[key] = rows
        elif re.fullmatch(r"m_\d+=\d+", line):
            e, c = line[2:].split("=")
            doc.setdefault("counts", []).append({"exponent": int(e), "vertices": int(c)})
        elif line:
            key, _, val = line.partition(": ")
            doc[key] = _scalar(key, val)
        i += 1
    if "front" in doc:
        fronts: dict[str, dict] = {}
        for r in doc.pop("front"):
            part = fronts.setdefault(r["part"], {"q": r["part"], "U": [], "U_hat": []})
            part[r["kind"]].append({k: r[k] for k in ("poly", "valid_q", "clique")})
        doc["fronts"] = list(fronts.values())
    return doc


def _emit(doc: dict, args) -> None:
    text = json.dumps(doc, indent=2) + "\n" if args.format == "json" else _table(doc)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- solve


def _check_params(n: int, d: int, k: int) -> None:
    if d % 2 or d < 2:
        raise UsageError("d must be an even integer >= 2")
    if d > 2 * k:
        raise UsageError("d may not exceed 2k")
    if not 1 <= k <= n or n > 63:
        raise UsageError("need 1 <= k <= n <= 63")


def _resolve_ub(n, d, k, text):
    if text is None:
        if (n, d, k) in corpus.QUOTED_CLIQUE_BOUNDS or corpus.is_tabulated(n, d, k):
            return corpus.default_ub(n, d, k)
        raise UsageError(
            f"({n},{d},{k}) is not tabulated; pass --ub with a clique-size cap, or --ub johnson"
        )
    if text == "johnson":
        return corpus.johnson_bound(n, d, k), "johnson"
    try:
        ub = int(text)
    except ValueError:
        raise UsageError("--ub takes an integer or 'johnson'") from None
    if ub < 1:
        raise UsageError("--ub must be positive")
    return ub, "given"


def _read_seed(path: str) -> list[list[int]]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    cliques = []
    for part in doc.get("fronts", []):
        cliques.extend(row["clique"] for row in part.get("U", []))
    cliques.extend(row["clique"] for row in doc.get("best", []))
    return cliques


def cmd_solve(args) -> int:
    n, d, k = args.n, args.d, args.k
    _check_params(n, d, k)
    try:
        mode = parse_qmode(args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ub, source = _resolve_ub(n, d, k, args.ub)
    md = args.max_dive if args.max_dive is not None else ub
    if not 1 <= md <= ub:
        raise UsageError("need 1 <= --max-dive <= ub")
    q_fixed = mode.fixed
    inst = Instance(n, d, k, ub, md, regime=args.regime, q=q_fixed if args.regime == "lower" else None)
    seed = _read_seed(args.seed_front) if args.seed_front else None
    if seed:
        seed = [c for c in seed if inst.is_clique(c)]

    if mode == ALL_Q and args.split >= 2:
        result = solve_split(inst, args.split, budget=args.budget, seed=seed)
        parts = result.parts
        best = [dict(valid_q=v, **_row(inst, c, p)) for v, p, c in result.best()]
        incomplete = result.incomplete
        stats = result.stats
    else:
        front = solve(inst, mode, seed=seed, budget=args.budget)
        parts = [(mode, front)]
        best = [
            dict(valid_q=r["valid_q"], **_row(inst, c, c.w))
            for r, c in zip(front_to_json(inst, front, include_hat=False), front.U)
            if r["valid_q"] != "none"
        ]
        incomplete = front.incomplete
        stats = front.stats
    doc = {
        "instance": {"n": n, "d": d, "k": k, "regime": inst.regime, "ub": ub, "ub_source": source, "max_dive": md},
        "q": mode.describe(),
        "complete": not incomplete,
        "bound": "lower bound only (search stopped early)" if incomplete else ("exact" if md == ub else "lower bound (max_dive < ub)"),
        "dive_calls": stats.dive_calls,
    }
    if q_fixed is not None:
        doc["value"] = parts[0][1].best_at(q_fixed)[0]
    doc["best"] = best
    doc["fronts"] = []
    for m, f in parts:
        rows = front_to_json(inst, f)
        doc["fronts"].append(
            {
                "q": m.describe(),
                "U": [_strip(r) for r in rows if r["kind"] == "U"],
                "U_hat": [_strip(r) for r in rows if r["kind"] == "U_hat"],
            }
        )
    if args.format == "table":
        # flatten fronts for the table view
        flat = {key: val for key, val in doc.items() if key != "fronts"}
        flat["front"] = [dict(part=p["q"], kind=kind, **r) for p in doc["fronts"] for kind in ("U", "U_hat") for r in p[kind]]
        _emit(flat, args)
    else:
        _emit(doc, args)
    if args.verbose:
        print(f"{stats.dive_calls} dive calls, {stats.seconds:.2f} s", file=sys.stderr)
    return EXIT_TRUNCATED if incomplete else EXIT_OK


def _row(inst, c, p) -> dict:
    r = _clique_json(inst, c, p, "", "U")
    return {k: r[k] for k in ("poly", "coeffs", "clique", "clique_bits")}


def _strip(r: dict) -> dict:
    return {k: r[k] for k in ("poly", "valid_q", "clique")}


# ---------------------------------------------------------------- other commands


def cmd_diagram(args) -> int:
    try:
        v = parse_pivot(args.pivot, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    F = to_diagram(v)
    doc = {
        "pivot": v.value,
        "bits": v.bits,
        "n": v.n,
        "rows": list(F.rows),
        "cols": list(F.cols),
        "dots": F.dots,
    }
    if args.delta is not None:
        if args.delta < 1:
            raise UsageError("--delta must be >= 1")
        w = lower_dimension(F, args.delta, args.field, None if args.max_removed < 0 else args.max_removed)
        doc.update(
            delta=args.delta,
            nu=list(nu_vector(F, args.delta)),
            upper_exponent=ef_upper_exponent(F, args.delta),
            witness_dimension=w.dimension,
            witness_theorem=w.theorem,
            witness_q=w.q_validity,
        )
    _emit(doc, args)
    return EXIT_OK


def cmd_spread(args) -> int:
    if not 1 <= args.k <= args.n:
        raise UsageError("need 1 <= k <= n")
    p = SpreadParams(args.n, args.k)
    clique = spread_clique(p)
    got, flags = achieved_polynomial(p, clique)
    poly = spread_polynomial(p)
    doc = {
        "instance": {"n": p.n, "d": 2 * p.k, "k": p.k, "regime": "spread"},
        "q": "all",
        "complete": True,
        "best": [
            {
                "valid_q": "all",
                "poly": render(poly),
                "coeffs": {str(e): c for e, c in sorted(poly.terms.items(), reverse=True)},
                "clique": [v.value for v in clique],
                "clique_bits": [v.bits for v in clique],
                "tight": [int(f) for f in flags],
            }
        ],
    }
    assert got == poly
    _emit(doc, args)
    return EXIT_OK


def _pairs(items, what) -> dict[int, int]:
    out = {}
    for item in items or []:
        e, sep, c = item.partition("=")
        if not sep:
            raise UsageError(f"{what} takes EXP=VALUE, got {item!r}")
        out[int(e)] = int(c)
    return out


def cmd_ilp(args) -> int:
    _check_params(args.n, args.d, args.k)
    a1 = args.a1
    if args.variant == "counting" and a1 is None:
        a1, _ = _resolve_ub(args.n, args.d, args.k, None)
    import warnings

    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ilpgen.OverflowRisk)
            model = ilpgen.emit(
                args.n, args.d, args.k, args.variant, q=args.field, coefs=_pairs(args.coef, "--coef") or None,
                a1_bound=a1, fix=_pairs(args.fix, "--fix"), rows=args.rows, literal=args.literal,
            )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    text = ilpgen.to_lp(model)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.solve:
        try:
            val, chosen = ilpgen.solve_small(model, max_vars=args.max_vars)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        print(f"optimum {val}: {' '.join(chosen)}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        flt = corpus.parse_filter(args.filter)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    entries = [e for e in corpus.load().entries if corpus.matches(e, flt)]
    checks = [corpus.audit(e) for e in entries]
    todo = [e for e in entries if args.tier >= 1 and corpus.in_tier(e, args.tier)]
    budget = None if args.budget <= 0 else args.budget
    if args.workers > 1:
        with ThreadPoolExecutor(args.workers) as pool:
            checks += list(pool.map(lambda e: corpus.resolve(e, budget), todo))
    else:
        checks += [corpus.resolve(e, budget) for e in todo]
    for c in checks:
        extra = f"  {c.detail}" if c.detail else ""
        secs = f"  {c.seconds:.1f}s" if c.seconds and args.verbose else ""
        print(f"{c.status:7s} {c.key}{secs}{extra}")
    counts = {s: sum(c.status == s for c in checks) for s in ("pass", "fail", "skipped")}
    print(" ".join(f"{k}={v}" for k, v in counts.items()))
    return EXIT_VERIFY if counts["fail"] else EXIT_OK


def cmd_histogram(args) -> int:
    _check_params(args.n, args.d, args.k)
    hist = weight_histogram(args.n, args.d, args.k, args.regime)
    doc = {
        "instance": {"n": args.n, "d": args.d, "k": args.k, "regime": args.regime},
        "counts": [{"exponent": e, "vertices": c} for e, c in hist.items()],
    }
    if args.format == "json":
        _emit(doc, args)
    else:
        inst = " ".join(f"{k}={v}" for k, v in doc["instance"].items())
        text = f"instance: {inst}\n" + "".join(f"m_{e}={c}\n" for e, c in hist.items())
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="efbounds", description="Polynomial bounds for multilevel subspace codes.")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=("json", "table"), default="table")
        sp.add_argument("--out", help="write to this file instead of stdout")

    s = sub.add_parser("solve", help="maximum weight clique front for (n, d, k)")
    s.add_argument("n", type=int)
    s.add_argument("d", type=int)
    s.add_argument("k", type=int)
    s.add_argument("--regime", choices=("upper", "lower", "spread"), default="upper")
    s.add_argument("--q", default="all", help="all, Q, A..B or A..")
    s.add_argument("--ub", help="clique-size cap (integer or 'johnson'); default from the tables")
    s.add_argument("--max-dive", type=int, dest="max_dive")
    s.add_argument("--lambda", type=int, dest="split", default=4,
                   help="with --q all: fixed-q runs up to this q plus one run beyond it; below 2 runs one all-q search")
    s.add_argument("--budget", type=float, help="wall-clock seconds")
    s.add_argument("--seed-front", dest="seed_front", help="JSON output of an earlier solve")
    s.add_argument("-v", "--verbose", action="store_true")
    fmt(s)
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("diagram", help="Ferrers diagram of a pivot vector and its dimension bounds")
    g.add_argument("--pivot", required=True, help="binary string or integer")
    g.add_argument("--n", type=int)
    g.add_argument("--delta", type=int)
    g.add_argument("--field", type=int, default=2, help="field size the witness must be valid for (2: every q)")
    g.add_argument("--max-removed", type=int, default=-1, dest="max_removed",
                   help="dots the witness search may remove (-1: no limit)")
    fmt(g)
    g.set_defaults(func=cmd_diagram)

    r = sub.add_parser("spread", help="closed form for distance 2k")
    r.add_argument("n", type=int)
    r.add_argument("k", type=int)
    fmt(r)
    r.set_defaults(func=cmd_spread)

    m = sub.add_parser("ilp", help="write an LP model")
    m.add_argument("n", type=int)
    m.add_argument("d", type=int)
    m.add_argument("k", type=int)
    m.add_argument("--variant", choices=ilpgen.VARIANTS, default="edge")
    m.add_argument("--q", type=int, dest="field", help="field size for the weighted variant")
    m.add_argument("--coef", action="append", help="counting objective EXP=C (repeatable)")
    m.add_argument("--fix", action="append", help="pin a counter EXP=VALUE (repeatable)")
    m.add_argument("--a1", type=int, help="clique-size cap for the counting variant")
    m.add_argument("--rows", choices=("edge", "cover"))
    m.add_argument("--literal", action="store_true", help="pair rows over compatible pairs, as literally written")
    m.add_argument("--solve", action="store_true", help="also solve with the built-in branch and bound")
    m.add_argument("--max-vars", type=int, default=200, dest="max_vars")
    m.add_argument("--out")
    m.set_defaults(func=cmd_ilp)

    for name in ("verify", "verify-corpus"):
        v = sub.add_parser(name, help="check the shipped tables")
        v.add_argument("--tier", type=int, choices=(0, 1, 2), default=0)
        v.add_argument("--filter", help="e.g. n=14,d=6")
        v.add_argument("--budget", type=float, default=600.0, help="seconds per re-solve (0: none)")
        v.add_argument("--workers", type=int, default=1)
        v.add_argument("-v", "--verbose", action="store_true")
        v.set_defaults(func=cmd_verify)

    h = sub.add_parser("histogram", help="vertex count per weight exponent")
    h.add_argument("n", type=int)
    h.add_argument("d", type=int)
    h.add_argument("k", type=int)
    h.add_argument("--regime", choices=("upper", "lower", "spread"), default="upper")
    fmt(h)
    h.set_defaults(func=cmd_histogram)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"efbounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
