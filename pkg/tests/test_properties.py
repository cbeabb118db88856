import json
from itertools import combinations

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from efbounds import _dive
from efbounds.cli import main, read_table
from efbounds.corpus import johnson_bound
from efbounds.diagrams import (
    FerrersDiagram,
    conjugate,
    decode,
    diagram_of,
    ef_upper_exponent,
    encode,
    hamming,
    nu_vector,
    weight_k_vectors,
)
from efbounds.ilpgen import cover_size, emit, read_lp, to_lp
from efbounds.qpoly import (
    QPolynomial,
    cmp_at,
    evaluate,
    is_strictly_better,
    parse,
    positive_somewhere,
    render,
    restrict_better,
)
from efbounds.search import Instance, QMode, solve, ub_extend
from efbounds.weights import lower_exponent, upper_exponent

polys = st.dictionaries(st.integers(0, 8), st.integers(-12, 12), max_size=5).map(QPolynomial)
small_q = st.integers(2, 40)


def scan_better(f, g, lo, hi):
    # coefficients are at most 24 in absolute value, so crossings lie below 30
    top = hi if hi is not None else max(lo, 30) + 1
    return any(evaluate(f, q) > evaluate(g, q) for q in range(lo, top + 1))


@given(polys, polys, small_q)
def test_cmp_at_matches_evaluation(f, g, q):
    a, b = evaluate(f, q), evaluate(g, q)
    assert cmp_at(f, g, q) == (a > b) - (a < b)


@given(polys)
def test_render_parse_round_trip(f):
    assert parse(render(f)) == f


@given(polys, polys)
def test_strictly_better_matches_scan(f, g):
    assert is_strictly_better(f, g) == scan_better(f, g, 2, None)


@given(polys, polys, st.integers(2, 12), st.one_of(st.none(), st.integers(0, 15)))
def test_restrict_better_matches_scan(f, g, lo, span):
    hi = None if span is None else lo + span
    assert restrict_better(f, g, lo, hi) == scan_better(f, g, lo, hi)


@given(polys, st.integers(2, 12), st.one_of(st.none(), st.integers(0, 15)))
@settings(deadline=None)
def test_compiled_sign_test_agrees(h, lo, span):
    hi = None if span is None else lo + span
    arr = np.zeros(9, dtype=np.int64)
    for e, c in h.terms.items():
        arr[e] = c
    desc = sorted(h.terms.items(), reverse=True)
    assert bool(_dive.positive_somewhere(arr, lo, -1 if hi is None else hi)) == positive_somewhere(desc, lo, hi)


@st.composite
def pivots(draw, max_n=16):
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, n - 1))
    bits = draw(st.permutations(range(n)))[:k]
    return sum(1 << b for b in bits), n, k


@given(pivots())
def test_encode_decode_round_trip(p):
    value, n, _ = p
    assert encode(decode(value, n)) == value


@given(pivots(), st.integers(1, 5))
def test_diagram_invariants(p, delta):
    value, n, k = p
    F = diagram_of(value, n)
    assert conjugate(F.rows) == tuple(reversed(F.cols)) and conjugate(F.cols) == F.rows
    assert sum(F.rows) == F.dots
    nus = nu_vector(F, delta)
    assert len(nus) == delta and min(nus) >= 0
    assert ef_upper_exponent(F, delta) <= F.dots
    if delta == 1:
        assert ef_upper_exponent(F, 1) == F.dots


@given(pivots(12), st.integers(2, 4))
@settings(max_examples=60, deadline=None)
def test_lower_at_most_upper(p, delta):
    value, n, _ = p
    assert 0 <= lower_exponent(value, n, delta) <= upper_exponent(value, n, delta)


@given(pivots(), st.randoms(use_true_random=False))
def test_hamming_even_and_symmetric(a, rnd):
    value, n, k = a
    u, v = decode(value, n), decode(sum(1 << b for b in rnd.sample(range(n), k)), n)
    h = hamming(u, v)
    assert h == hamming(v, u) and h % 2 == 0


@st.composite
def instances(draw):
    n = draw(st.integers(4, 7))
    k = draw(st.integers(2, n - 2))
    d = 2 * draw(st.integers(2, k))
    return Instance(n, d, k, johnson_bound(n, d, k))


def exhaustive_best(inst, q, members=()):
    verts = [int(v) for v in inst.vertices]
    val = {v: q ** int(e) for v, e in zip(verts, inst.exponents)}
    base = list(members)
    pool = [v for v in verts if v not in base and all((v ^ m).bit_count() >= inst.d for m in base)]
    best = sum(val[m] for m in base)
    for r in range(1, inst.ub - len(base) + 1):
        for extra in combinations(pool, r):
            if all((a ^ b).bit_count() >= inst.d for a, b in combinations(extra, 2)):
                best = max(best, sum(val[m] for m in base) + sum(val[v] for v in extra))
    return best


@given(instances(), st.integers(2, 7))
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_fixed_q_search_is_exact(inst, q):
    front = solve(inst, QMode(q, q))
    assert front.best_at(q)[0] == exhaustive_best(inst, q)


@given(instances())
@settings(max_examples=30, deadline=None)
def test_front_cliques_valid_and_deterministic(inst):
    a, b = solve(inst), solve(inst)
    assert [c.members for c in a.U] == [c.members for c in b.U]
    for c in a.U:
        assert inst.is_clique(c.members) and len(c) <= inst.ub
        assert inst.weight_of(c.members) == c.w
    # the all-q front contains the fixed-q optimum for every q
    for q in (2, 3, 5):
        assert a.best_at(q)[0] == solve(inst, QMode(q, q)).best_at(q)[0]


@given(instances(), st.integers(0, 10**6), st.integers(2, 6))
@settings(max_examples=40, deadline=None)
def test_ub_extend_is_sound(inst, pick, q):
    v = int(inst.vertices[pick % len(inst)])
    assert evaluate(ub_extend(inst, [v]), q) >= exhaustive_best(inst, q, [v])


@given(st.integers(4, 8), st.data())
@settings(max_examples=30, deadline=None)
def test_cover_rows_cover_conflicts(n, data):
    k = data.draw(st.integers(2, n - 1))
    d = 2 * data.draw(st.integers(1, k))
    assume(cover_size(k, d) >= 1)
    m = emit(n, d, k, "cover")
    rows = [set(c.coefs) for c in m.constraints]
    for u, v in combinations(weight_k_vectors(n, k), 2):
        shares = {f"x_{u}", f"x_{v}"}
        covered = any(shares <= r for r in rows)
        assert covered == ((u ^ v).bit_count() < d)
    assert read_lp(to_lp(m)) == m


@given(instances(), st.sampled_from(["all", "3..", "2", "2..5"]))
@settings(max_examples=15, deadline=None)
def test_table_and_json_agree(inst, q):
    import contextlib
    import io

    argv = ["solve", str(inst.n), str(inst.d), str(inst.k), "--ub", str(inst.ub), "--q", q]
    outs = []
    for fmt in ("json", "table"):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            assert main(argv + ["--format", fmt]) == 0
        outs.append(buf.getvalue())
    assert read_table(outs[1]) == json.loads(outs[0])
