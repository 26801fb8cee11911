from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from f4codes.circulant import (
    CirculantPair,
    CodeSpecError,
    InvalidPairError,
    SupportSet,
    block_matrix,
    check_adjacency,
    circulant_from_support,
    generator_matrix,
    is_symmetric_support,
    mirror,
    parse_spec_line,
    parse_spec_lines,
    symmetric_free_positions,
    symmetric_support_from_bits,
)
from f4codes.catalog import CATALOG


def supports(max_n=20):
    return st.integers(1, max_n).flatmap(
        lambda n: st.sets(st.integers(1, n)).map(lambda s: SupportSet(n, s))
    )


@st.composite
def pairs(draw, max_n=20):
    n = draw(st.integers(1, max_n))
    bits = draw(st.integers(0, (1 << len(symmetric_free_positions(n))) - 1))
    B = draw(st.sets(st.integers(1, n)))
    return CirculantPair(n, symmetric_support_from_bits(n, bits), B)


def test_circulant_rows_shift_right():
    m = circulant_from_support(SupportSet(7, [2, 7]))
    assert "".join(map(str, m[0])) == "0100001"
    assert "".join(map(str, m[1])) == "1010000"
    assert not circulant_from_support(SupportSet(3, [])).any()
    assert circulant_from_support(SupportSet(4, [1, 2, 3, 4])).all()


@given(supports())
def test_circulant_matches_definition(s):
    assert circulant_from_support(s).tolist() == oracles.circulant(s.n, s.positions)


@given(supports(), st.integers(0, 30))
def test_circulant_commutes_with_rotation(s, t):
    n = s.n
    m = circulant_from_support(s)
    rotated = np.roll(np.roll(m, t, axis=0), t, axis=1)
    assert np.array_equal(rotated, m)  # circulants are invariant under simultaneous index rotation
    shifted = SupportSet(n, [((p - 1 + t) % n) + 1 for p in s.positions])
    assert np.array_equal(circulant_from_support(shifted), np.roll(m, t, axis=1))


def test_symmetric_supports():
    assert is_symmetric_support(SupportSet(7, [2, 7]))
    assert is_symmetric_support(SupportSet(11, [2, 3, 10, 11]))
    assert not is_symmetric_support(SupportSet(7, [2, 3]))


@given(supports())
def test_symmetric_iff_matrix_symmetric(s):
    m = circulant_from_support(s)
    assert is_symmetric_support(s) == np.array_equal(m, m.T)


@given(st.integers(1, 60), st.data())
def test_mirror_is_an_involution(n, data):
    j = data.draw(st.integers(1, n))
    assert mirror(n, mirror(n, j)) == j
    assert mirror(n, 1) == 1


@given(st.integers(1, 40), st.data())
def test_symmetric_support_from_bits(n, data):
    free = symmetric_free_positions(n)
    assert len(free) == n // 2
    bits = data.draw(st.integers(0, (1 << len(free)) - 1))
    s = symmetric_support_from_bits(n, bits)
    assert is_symmetric_support(s) and 1 not in s.positions


def test_block_matrix_examples():
    p = CirculantPair(7, [2, 7], [1, 2, 5])
    m = block_matrix(p)
    assert m.shape == (14, 14)
    assert np.array_equal(m, m.T) and not np.diag(m).any()
    assert set(m.sum(axis=1)) == {5}
    assert block_matrix(CirculantPair(1, [], [1])).tolist() == [[0, 1], [1, 0]]
    assert not block_matrix(CirculantPair(2, [], [])).any()


@given(pairs())
def test_block_matrix_matches_definition(p):
    m = block_matrix(p)
    assert m.tolist() == oracles.pair_matrix(p.n, p.A.positions, p.B.positions)
    assert np.array_equal(m, m.T) and not np.diag(m).any()


def test_generator_matrix_examples():
    assert [str(g) for g in generator_matrix(np.zeros((1, 1), dtype=np.uint8))] == ["w"]
    assert [str(g) for g in generator_matrix(np.array([[0, 1], [1, 0]]))] == ["w1", "1w"]
    gens = generator_matrix(block_matrix(CirculantPair(7, [2, 7], [1, 2, 5])))
    assert len(gens) == 14 and all(g.weight() == 6 for g in gens)


@given(pairs())
def test_generator_rows_are_m_plus_omega_i(p):
    m = block_matrix(p)
    for i, g in enumerate(generator_matrix(m)):
        expected = tuple(2 if j == i else int(m[i, j]) for j in range(2 * p.n))
        assert tuple(int(x) for x in g) == expected


def test_invalid_inputs():
    with pytest.raises(InvalidPairError):
        CirculantPair(7, [2, 3], [])
    with pytest.raises(InvalidPairError):
        CirculantPair(7, [1], [])
    with pytest.raises(InvalidPairError):
        SupportSet(5, [6])
    with pytest.raises(InvalidPairError):
        check_adjacency(np.array([[0, 1], [0, 0]]))
    with pytest.raises(InvalidPairError):
        check_adjacency(np.array([[1, 0], [0, 0]]))
    with pytest.raises(InvalidPairError):
        generator_matrix(np.array([[0, 1], [0, 0]]))


def test_spec_line_round_trip():
    name, p = parse_spec_line("name=C14II n=7 A=2,7 B=1,2,5")
    assert name == "C14II" and p == CirculantPair(7, [2, 7], [1, 2, 5])
    assert p.spec_line("C14II") == "name=C14II n=7 A=2,7 B=1,2,5"
    _, q = parse_spec_line("n=9 A=- B=1,2,3,4,7")
    assert len(q.A) == 0 and q.spec_line() == "n=9 A=- B=1,2,3,4,7"


@given(pairs())
def test_spec_line_round_trip_property(p):
    assert parse_spec_line(p.spec_line("x")) == ("x", p)


@pytest.mark.parametrize("line,field", [
    ("n=7 A=2,3 B=-", "A"),
    ("n=7 A=2,7", "B"),
    ("n=x A=- B=-", "n"),
    ("n=7 A=2,7 B=1,q", "B"),
    ("n=7 A=2,7 B=9", "B"),
])
def test_spec_line_errors_name_the_field(line, field):
    with pytest.raises(CodeSpecError) as err:
        parse_spec_line(line, 3)
    assert err.value.line == 3 and err.value.field == field
    assert "line 3" in str(err.value)


def test_spec_lines_skip_comments_and_report_line_numbers():
    text = ["# header", "", "name=a n=7 A=2,7 B=1", "n=7 A=2 B=1"]
    with pytest.raises(CodeSpecError) as err:
        parse_spec_lines(text)
    assert err.value.line == 4
    assert len(parse_spec_lines(text[:3])) == 1


def test_catalog_pairs_are_valid():
    for e in CATALOG.values():
        assert is_symmetric_support(e.pair.A) and 1 not in e.pair.A.positions
