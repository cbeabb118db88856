from itertools import combinations

import pytest

from efbounds.corpus import default_ub
from efbounds.qpoly import evaluate, parse
from efbounds.search import (
    ALL_Q,
    Instance,
    QMode,
    brute_force_front,
    dive_cut_bound,
    majorant,
    parse_qmode,
    solve,
    solve_split,
    staged_solve,
    ub_extend,
    winners,
)


def inst_of(n, d, k, **kw):
    return Instance(n, d, k, default_ub(n, d, k)[0], **kw)


def max_weight_clique(inst, q):
    """Plain exhaustive search over integer weights, independent of the solver."""
    verts = [int(v) for v in inst.vertices]
    val = {v: q ** int(e) for v, e in zip(verts, inst.exponents)}
    best = 0

    def grow(chosen, cand, total):
        nonlocal best
        best = max(best, total)
        if len(chosen) == inst.ub:
            return
        for i, v in enumerate(cand):
            rest = [u for u in cand[i + 1 :] if (u ^ v).bit_count() >= inst.d]
            grow(chosen + [v], rest, total + val[v])

    grow([], verts, 0)
    return best


def test_qmode():
    assert parse_qmode("all") == ALL_Q
    assert parse_qmode("3..") == QMode(3)
    assert parse_qmode("2..4") == QMode(2, 4)
    assert parse_qmode("5").fixed == 5
    assert QMode(3).describe() == "q>=3" and QMode(2, 2).describe() == "q=2"
    with pytest.raises(ValueError):
        QMode(1)
    with pytest.raises(ValueError):
        QMode(5, 4)


def test_instance_validation():
    with pytest.raises(ValueError):
        Instance(6, 5, 3, 4)
    with pytest.raises(ValueError):
        Instance(6, 8, 3, 4)
    with pytest.raises(ValueError):
        Instance(6, 4, 3, 4, max_dive=5)
    inst = inst_of(6, 4, 3)
    assert inst.is_clique([0b111000, 0b100110])
    assert not inst.is_clique([0b111000, 0b110100])
    with pytest.raises(ValueError):
        inst.index_of(0b1)


def test_known_fronts():
    front = solve(inst_of(15, 10, 6))
    assert [str(c.w) for c in front.U] == ["q^18+q^5+1"]
    assert front.U[0].members == (8463, 16880, 32256)
    assert str(solve(inst_of(8, 8, 4)).U[0].w) == "q^4+1"


@pytest.mark.parametrize("nkd", [(4, 4, 2), (6, 4, 3), (8, 4, 4), (7, 6, 3), (8, 6, 4)])
@pytest.mark.parametrize("mode", [ALL_Q, QMode(2, 2), QMode(3, 5), QMode(3)])
def test_engines_agree(nkd, mode):
    n, d, k = nkd
    inst = inst_of(n, d, k)
    a = solve(inst, mode, engine="compiled")
    b = solve(inst, mode, engine="reference")
    assert a.stats.dive_calls == b.stats.dive_calls
    assert [c.members for c in a.U] == [c.members for c in b.U]
    assert [c.members for c in a.U_hat] == [c.members for c in b.U_hat]


@pytest.mark.parametrize("nkd", [(4, 4, 2), (5, 4, 2), (6, 4, 3), (6, 6, 3), (7, 4, 3), (8, 6, 4)])
def test_matches_brute_force(nkd):
    inst = inst_of(*nkd)
    if inst.ub > 6:
        inst = inst.with_caps(6)
    got = sorted(str(c.w) for c in solve(inst).U)
    want = sorted(str(c.w) for c in brute_force_front(inst).U)
    assert got == want


@pytest.mark.parametrize("nkd", [(6, 4, 3), (7, 4, 3), (8, 6, 4), (8, 4, 3)])
@pytest.mark.parametrize("q", [2, 3, 5])
def test_fixed_q_matches_exhaustive(nkd, q):
    inst = inst_of(*nkd)
    assert solve(inst, QMode(q, q)).best_at(q)[0] == max_weight_clique(inst, q)


def test_fixed_q_is_max_over_all_q_front():
    inst = inst_of(8, 4, 4)
    front = solve(inst)
    for q in (2, 3, 4, 7):
        assert front.best_at(q)[0] == solve(inst, QMode(q, q)).best_at(q)[0]


def test_fronts_are_cliques_and_deterministic():
    inst = inst_of(9, 6, 4)
    a, b = solve(inst), solve(inst)
    assert [c.members for c in a.U] == [c.members for c in b.U]
    for c in a.U + a.U_hat:
        assert inst.is_clique(c.members) and len(c) <= inst.ub
        assert inst.weight_of(c.members) == c.w


def test_upper_front_dominates():
    inst = inst_of(8, 4, 4)
    front = solve(inst)
    for q in (2, 3, 4, 8):
        assert front.bound_at(q) >= front.best_at(q)[0]


def test_ub_extend_is_an_upper_bound():
    inst = inst_of(8, 4, 4)
    v = int(inst.vertices[0])
    p = ub_extend(inst, [v])
    assert p.terms[max(p.terms)] >= 1
    best = solve(inst, QMode(2, 2)).best_at(2)[0]
    assert evaluate(ub_extend(inst, []), 2) >= best
    with pytest.raises(ValueError):
        ub_extend(inst, [v, v ^ 0b11])


def test_dive_cut_bound():
    inst = inst_of(15, 10, 6)
    first16 = int(inst.vertices[list(inst.exponents).index(16)])
    assert dive_cut_bound(inst, [], first16) == parse("3q^16")
    assert dive_cut_bound(inst, [], int(inst.vertices[0])) == parse("3q^18")
    assert majorant(parse("q^3-2q+1")) == parse("4q^3")


def test_budget_marks_incomplete():
    front = solve(inst_of(14, 6, 4), max_calls=10)
    assert front.incomplete and not front.exact


def test_staged_solve_matches_direct():
    inst = inst_of(8, 4, 4)
    a = staged_solve(inst, [2, 4, inst.ub])
    assert sorted(str(c.w) for c in a.U) == sorted(str(c.w) for c in solve(inst).U)
    with pytest.raises(ValueError):
        staged_solve(inst, [inst.ub, 2])


def test_split_value():
    res = solve_split(inst_of(10, 4, 5), 4)
    assert res.value_at(2) == 1167355
    assert [p[0].describe() for p in res.parts] == ["q=2", "q=3", "q=4", "q>=5"]


def test_winners():
    a, b = parse("q^3"), parse("5q^2")
    assert winners([a, b]) == ["q>=5", "2<=q<=5"]
    assert winners([a], QMode(2, 2)) == ["q=2"]
