from itertools import combinations

import pytest

from efbounds.corpus import default_ub
from efbounds.ilpgen import OverflowRisk, cover_size, emit, read_lp, solve_small, to_lp
from efbounds.search import Instance, QMode, solve


def test_edge_model():
    m = emit(4, 4, 2, "edge")
    assert len(m.binaries) == 6 and len(m.constraints) == 12
    val, chosen = solve_small(m)
    assert val == 2
    assert sorted(chosen) in (["x_12", "x_3"], ["x_10", "x_5"], ["x_6", "x_9"])


def test_literal_rows_model_independent_sets():
    val, _ = solve_small(emit(4, 4, 2, "edge", literal=True))
    assert val == 3


def test_cover_rows_cover_every_conflict():
    n, d, k = 7, 4, 3
    m = emit(n, d, k, "cover")
    assert m.meta["t"] == str(cover_size(k, d)) == "2"
    rows = [set(c.coefs) for c in m.constraints]
    for u, v in combinations([int(x[2:]) for x in m.binaries], 2):
        if (u ^ v).bit_count() < d:
            assert any({f"x_{u}", f"x_{v}"} <= r for r in rows)


def test_cover_and_edge_agree():
    a, _ = solve_small(emit(6, 4, 3, "cover"))
    b, _ = solve_small(emit(6, 4, 3, "edge"))
    assert a == b == default_ub(6, 4, 3)[0]


@pytest.mark.parametrize("q", [2, 3, 5])
def test_weighted_matches_search(q):
    n, d, k = 7, 4, 3
    val, chosen = solve_small(emit(n, d, k, "weighted", q=q))
    inst = Instance(n, d, k, default_ub(n, d, k)[0])
    assert val == solve(inst, QMode(q, q)).best_at(q)[0]
    assert inst.is_clique([int(x[2:]) for x in chosen])


def test_weighted_overflow_flag():
    with pytest.warns(OverflowRisk):
        m = emit(10, 4, 5, "weighted", q=7)
    assert m.overflow_risk and read_lp(to_lp(m)).overflow_risk


def test_counting_model():
    coefs = {e: 1 for e in range(17, 12, -1)}
    m = emit(14, 8, 5, "counting", coefs=coefs, a1_bound=4, fix={18: 0})
    assert m.bounds["a_18"] == (0, 0)
    assert solve_small(m)[0] == 1


def test_round_trip():
    for m in (
        emit(5, 4, 2, "edge"),
        emit(6, 4, 3, "cover"),
        emit(6, 4, 3, "weighted", q=4),
        emit(8, 6, 4, "counting", a1_bound=3, fix={4: 1}),
    ):
        text = to_lp(m)
        back = read_lp(text)
        assert back == m
        assert to_lp(back) == text


def test_bad_arguments():
    with pytest.raises(ValueError):
        emit(6, 4, 3, "nope")
    with pytest.raises(ValueError):
        emit(6, 4, 3, "weighted")
    with pytest.raises(ValueError):
        emit(6, 4, 3, "counting")
    with pytest.raises(ValueError):
        emit(6, 4, 3, "cover", literal=True)
    with pytest.raises(ValueError):
        solve_small(emit(8, 4, 4, "edge"), max_vars=10)
