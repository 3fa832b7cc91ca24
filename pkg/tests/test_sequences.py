import io
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from greedyl2.sequences import (
    PointList,
    centered_grid,
    radical_inverse,
    read_points,
    symmetrized_vdc_prefix,
    van_der_corput_prefix,
    write_points,
)


def _digit_reversal(n: int, m: int) -> F:
    # independent oracle: sum of binary digits n_j 2^{-j-1}
    return sum((F((n >> j) & 1, 2 ** (j + 1)) for j in range(m)), F(0))


def test_radical_inverse_examples():
    assert radical_inverse(0) == 0
    assert radical_inverse(1) == F(1, 2)
    assert radical_inverse(6) == F(3, 8)
    with pytest.raises(ValueError):
        radical_inverse(-1)


def test_vdc_prefixes():
    assert van_der_corput_prefix(1).values() == [0]
    assert van_der_corput_prefix(4).values() == [0, F(1, 2), F(1, 4), F(3, 4)]
    want = [_digit_reversal(n, 3) for n in range(8)]
    assert van_der_corput_prefix(8).values() == want
    assert want == [0, F(1, 2), F(1, 4), F(3, 4), F(1, 8), F(5, 8), F(3, 8), F(7, 8)]


def test_radical_inverse_is_a_bijection_onto_dyadics():
    for m in range(13):
        vals = {radical_inverse(n) for n in range(2**m)}
        assert vals == {F(w, 2**m) for w in range(2**m)}


def test_radical_inverse_block_additivity():
    for r in range(7):
        for t in range(21):
            base = radical_inverse(2**r * t)
            for s in range(2**r):
                assert radical_inverse(2**r * t + s) == base + radical_inverse(s)


@given(st.integers(0, 10**9))
def test_radical_inverse_properties(n):
    x = radical_inverse(n)
    assert 0 <= x < 1
    assert x.denominator & (x.denominator - 1) == 0
    assert x == _digit_reversal(n, max(n.bit_length(), 1))


def test_symmetrized_vdc():
    assert symmetrized_vdc_prefix(2).values() == [0, 1]
    assert symmetrized_vdc_prefix(4).values() == [0, 1, F(1, 2), F(1, 2)]
    assert symmetrized_vdc_prefix(6).values() == [0, 1, F(1, 2), F(1, 2), F(1, 4), F(3, 4)]


@pytest.mark.parametrize(
    "N,want",
    [(1, [F(1, 2)]), (3, [F(1, 6), F(1, 2), F(5, 6)]), (4, [F(1, 8), F(3, 8), F(5, 8), F(7, 8)])],
)
def test_centered_grid(N, want):
    assert centered_grid(N).values() == want


@given(st.integers(1, 300))
def test_centered_grid_spacing(N):
    g = centered_grid(N).values()
    assert g[0] == F(1, 2 * N)
    assert all(b - a == F(1, N) for a, b in zip(g, g[1:]))


def test_pointlist_validation():
    with pytest.raises(ValueError):
        PointList(2, [(F(1, 2),)])
    pts = PointList(2, [(F(1, 2), 0.25)])
    assert not pts.is_exact
    assert pts.as_array().shape == (1, 2)
    with pytest.raises(ValueError):
        pts.values()


def test_serialization_roundtrip():
    pts = PointList(2, [(F(1, 3), F(0)), (0.1, F(1))])
    buf = io.StringIO()
    write_points(pts, buf)
    assert buf.getvalue() == "1/3\t0\n0.10000000000000001\t1\n"
    back = read_points(io.StringIO("# header\n\n" + buf.getvalue()))
    assert back.points == pts.points


@pytest.mark.parametrize(
    "text,msg",
    [("1/2\n1/3\t1/4\n", "line 2"), ("3/2\n", "outside"), ("x\n", "not a scalar"), ("1/0\n", "line 1")],
)
def test_read_points_rejects(text, msg):
    with pytest.raises(ValueError, match=msg):
        read_points(io.StringIO(text))
