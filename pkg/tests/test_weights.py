import numpy as np
import pytest

from efbounds.diagrams import FerrersDiagram, decode, ef_upper_exponent, to_diagram, weight_k_vectors
from efbounds.weights import (
    LowerBoundWitness,
    _upper_exponents,
    assign_weights,
    lower_dimension,
    lower_exponent,
    spread_exponent,
    upper_exponent,
    weight_histogram,
)


def test_witness_for_skeleton_diagram():
    F = to_diagram(decode(1256, 12))
    w = lower_dimension(F, 3, 2)
    assert (w.dimension, w.theorem) == (10, "from_subcodes")
    assert ef_upper_exponent(F, 3) == 11
    assert w.q_validity == "all"


def test_rectangle_reaches_upper_bound():
    w = lower_dimension(FerrersDiagram.from_rows([9] * 5), 4, 2)
    assert w.dimension == 18


def test_witness_json():
    w = LowerBoundWitness(4, "mds", {"x": 1}, q_min=5)
    assert w.q_validity == "q>=5"
    assert not w.valid_at(4) and w.valid_at(5) and w.valid_at(None)
    assert w.to_json()["q_validity"] == "q>=5"


def test_lower_never_exceeds_upper():
    for v in weight_k_vectors(10, 4):
        for delta in (2, 3, 4):
            assert lower_exponent(v, 10, delta) <= upper_exponent(v, 10, delta)


def test_more_removals_never_hurt():
    for v in weight_k_vectors(9, 4)[::7]:
        a = lower_exponent(v, 9, 3, max_removed=0)
        b = lower_exponent(v, 9, 3, max_removed=3)
        c = lower_exponent(v, 9, 3, max_removed=None)
        assert a <= b <= c


def test_vectorised_upper_matches_scalar():
    verts = weight_k_vectors(11, 5)
    fast = _upper_exponents(verts, 11, 3)
    assert fast == [upper_exponent(v, 11, 3) for v in verts]


def test_spread_exponent():
    assert spread_exponent(0b11110000, 8, 4) == (4, True)
    assert spread_exponent(0b00001111, 8, 4) == (0, False)
    assert spread_exponent(0b111010000, 9, 4) == (4, True)
    assert spread_exponent(0b11101000, 8, 4) == (3, False)
    # a trailing one is never an exact spread block
    assert spread_exponent(0b11100001, 8, 4) == (0, False)


def test_assign_weights_validation():
    with pytest.raises(ValueError):
        assign_weights(6, 3, 3)
    with pytest.raises(ValueError):
        assign_weights(6, 4, 3, "bogus")
    wa = assign_weights(6, 4, 3)
    assert len(wa.vertices) == 20 and wa.vertices.dtype == np.uint64


def test_histogram_sums_to_binomial():
    h = weight_histogram(14, 8, 5)
    assert sum(h.values()) == 2002
    assert h[18] == 1 and h[0] == 364
    assert list(h) == sorted(h, reverse=True)
