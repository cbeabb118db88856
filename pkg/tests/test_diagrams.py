import pytest

from efbounds.diagrams import (
    FerrersDiagram,
    PivotVector,
    adjacent,
    conjugate,
    decode,
    dot_count,
    ef_upper_exponent,
    encode,
    hamming,
    nu,
    nu_vector,
    parse_diagram,
    parse_pivot,
    subdiagram_embeds,
    to_diagram,
    weight_k_vectors,
)


def pv(bits):
    return PivotVector.from_bits(bits)


def test_encode_decode():
    assert encode(pv("11110000000000")) == 15360
    assert encode(pv("0011")) == 3
    assert decode(0, 5).bits == "00000"
    assert decode(1256, 12).bits == "010011101000"
    with pytest.raises(ValueError):
        decode(32, 5)


def test_parse_pivot():
    assert parse_pivot("0011") == PivotVector(3, 4)
    assert parse_pivot("1256", 12).bits == "010011101000"
    with pytest.raises(ValueError):
        parse_pivot("1256")


def test_dot_count():
    assert dot_count(pv("00010100011100")) == 17
    assert dot_count(pv("1111")) == 0
    assert dot_count(pv("1000")) == 3


def test_to_diagram():
    F = to_diagram(pv("00010100011100"))
    assert F.cols == (1, 2, 2, 2, 5, 5)
    assert F.rows == (6, 5, 2, 2, 2)
    assert to_diagram(decode(1256, 12)).rows == (6, 4, 4, 4, 3)
    assert to_diagram(decode(5214, 15)).rows == (6, 5, 2, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        to_diagram(decode(0, 6))


def test_rows_cols_are_conjugate():
    F = FerrersDiagram.from_rows([6, 5, 2, 2, 2])
    assert F.cols == (1, 2, 2, 2, 5, 5)
    assert conjugate(F.cols) == F.rows
    assert parse_diagram("cols:[2,2,2,5,5]") == FerrersDiagram.from_cols([2, 2, 2, 5, 5])
    with pytest.raises(ValueError):
        FerrersDiagram.from_rows([2, 3])


def test_nu():
    F = FerrersDiagram.from_rows([6, 5, 2, 2, 2])
    assert nu_vector(F, 4) == (5, 3, 3, 4)
    assert ef_upper_exponent(F, 4) == 3
    rect = FerrersDiagram.from_rows([9] * 5)
    assert ef_upper_exponent(rect, 4) == 18
    assert nu(F, 1, 0) == F.dots
    assert ef_upper_exponent(FerrersDiagram.from_cols([2, 2, 2, 5, 5]), 4) == 3
    assert ef_upper_exponent(FerrersDiagram.empty(), 5) == 0
    with pytest.raises(ValueError):
        nu(F, 3, 3)


def test_hamming():
    a, b = decode(15360, 14), decode(1920, 14)
    assert hamming(a, b) == 6
    assert adjacent(a, b, 6) and not adjacent(a, b, 8)
    assert hamming(a, decode(120, 14)) == 8
    assert hamming(a, a) == 0 and not adjacent(a, a, 1)
    assert hamming(pv("1100"), pv("0011")) == 4
    with pytest.raises(ValueError):
        hamming(pv("11"), pv("110"))


def test_subdiagram_embeds():
    big = FerrersDiagram.from_rows([6, 5, 2, 1, 1, 1, 1])
    assert subdiagram_embeds(FerrersDiagram.from_rows([6, 5, 2, 1, 1, 1]), big)
    assert subdiagram_embeds(big, big)
    assert not subdiagram_embeds(FerrersDiagram.from_rows([3]), FerrersDiagram.from_rows([2]))


def test_weight_k_vectors():
    vs = weight_k_vectors(6, 3)
    assert len(vs) == 20 and vs == sorted(vs)
    assert all(v.bit_count() == 3 for v in vs)
