import pytest

from efbounds.diagrams import hamming
from efbounds.qpoly import evaluate, parse
from efbounds.search import Instance, solve
from efbounds.spreads import SpreadParams, achieved_polynomial, spread_clique, spread_polynomial
from efbounds.weights import upper_exponent


@pytest.mark.parametrize(
    "n, k, text", [(8, 4, "q^4+1"), (9, 4, "q^5+1"), (19, 9, "q^10+1"), (12, 3, "q^9+q^6+q^3+1"), (5, 5, "1")]
)
def test_polynomial(n, k, text):
    assert spread_polynomial(SpreadParams(n, k)) == parse(text)


@pytest.mark.parametrize("n, k", [(6, 2), (8, 4), (9, 3), (12, 4), (10, 5)])
def test_full_spread_size(n, k):
    p = spread_polynomial(SpreadParams(n, k))
    for q in (2, 3, 4, 5, 7):
        assert evaluate(p, q) == (q**n - 1) // (q**k - 1)


@pytest.mark.parametrize("n, k", [(8, 4), (9, 4), (19, 9), (10, 5), (11, 3)])
def test_clique(n, k):
    sp = SpreadParams(n, k)
    blocks = spread_clique(sp)
    assert len(blocks) == n // k
    for i, a in enumerate(blocks):
        assert a.weight == k
        for b in blocks[i + 1 :]:
            assert hamming(a, b) == 2 * k
    total, flags = achieved_polynomial(sp, blocks)
    assert total == spread_polynomial(sp)
    assert all(flags[:-1])
    # divisible case: the upper weights add up as well
    if n % k == 0:
        ups = sum(upper_exponent(v.value, n, k) == 0 for v in blocks)
        assert ups == 1


def test_values():
    assert [int(v.value) for v in spread_clique(SpreadParams(8, 4))] == [240, 15]
    assert [int(v.value) for v in spread_clique(SpreadParams(19, 9))] == [523264, 1022]


@pytest.mark.parametrize("n, k", [(6, 2), (7, 3), (8, 4), (9, 4), (10, 3)])
def test_search_agrees(n, k):
    sp = SpreadParams(n, k)
    front = solve(Instance(n, 2 * k, k, n // k))
    assert [c.w for c in front.U] == [spread_polynomial(sp)]


def test_bad_params():
    with pytest.raises(ValueError):
        SpreadParams(3, 4)
