import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greedyl2.discrepancy import (
    BoxSpec,
    DiscrepancyKind,
    l2_extreme_sq,
    l2_extreme_sq_increment,
    l2_periodic_sq,
    l2_periodic_sq_increment,
    l2_prefix_curve,
    l2_sq,
    l2_star_sq,
    l2_star_sq_increment,
    l2_star_sq_sorted_1d,
    local_discrepancy,
    star_sup_1d,
    star_sup_prefix_curve,
)
from greedyl2.sequences import PointList, centered_grid, van_der_corput_prefix
from greedyl2.verify import integrate_l2_sq

unit = st.fractions(min_value=0, max_value=1, max_denominator=64).filter(lambda q: q < 1)
lists_1d = st.lists(unit, min_size=1, max_size=12)
KINDS = ["star-l2", "extreme-l2", "periodic-l2"]


def _sorted_sum_oracle(values):
    # direct transcription of 1/12 + N * sum (y_n - (2n-1)/(2N))^2
    ys = sorted(values)
    N = len(ys)
    return F(1, 12) + N * sum((y - F(2 * n - 1, 2 * N)) ** 2 for n, y in enumerate(ys, 1))


def _random_points(rng, N, d, exact=True):
    if exact:
        return PointList(d, [tuple(F(rng.randrange(1000), 1000) for _ in range(d)) for _ in range(N)])
    return PointList(d, [tuple(rng.random() for _ in range(d)) for _ in range(N)])


# local discrepancy


def test_local_discrepancy_examples():
    assert local_discrepancy(BoxSpec.anchored(F(1, 2)), [F(1, 4), F(3, 4)]) == 0
    assert local_discrepancy(BoxSpec.periodic(F(3, 4), F(1, 4)), [F(0), F(1, 2)]) == 0
    assert local_discrepancy(BoxSpec.unanchored(F(1, 8), F(5, 8)), [F(0), F(1, 2), F(1, 4)]) == F(1, 2)


def test_local_discrepancy_dimension_mismatch():
    with pytest.raises(ValueError):
        local_discrepancy(BoxSpec.anchored((F(1, 2), F(1, 2))), [F(1, 4)])
    with pytest.raises(ValueError):
        BoxSpec.unanchored(F(3, 4), F(1, 4))


# closed forms


def test_star_examples():
    assert l2_star_sq([F(1, 2)]) == F(1, 12)
    assert l2_star_sq(centered_grid(8)) == F(1, 12)


def test_star_two_points_by_integration():
    # the integral of (#{x_n < t} - 2t)^2 over [0,1) for (1/4, 1/2), piece by piece
    pieces = [(0, F(1, 4), 0), (F(1, 4), F(1, 2), 1), (F(1, 2), 1, 2)]
    want = sum(
        (a_ * a_ * (b - a) - 2 * a_ * (b * b - a * a) + F(4, 3) * (b**3 - a**3) for a, b, a_ in pieces),
        F(0),
    )
    assert want == F(5, 24)
    assert l2_star_sq([F(1, 4), F(1, 2)]) == want
    assert l2_star_sq_sorted_1d([F(1, 4), F(1, 2)]) == want


def test_sorted_formula_literal_form_disagrees():
    # dropping the factor N in front of the sum gives 7/48, which the integral rules out
    ys = [F(1, 4), F(1, 2)]
    literal = F(1, 12) + sum((y - F(2 * n - 1, 4)) ** 2 for n, y in enumerate(ys, 1))
    assert literal == F(7, 48)
    assert l2_star_sq(ys) != literal


def test_extreme_and_periodic_examples():
    for x in (F(0), F(1, 3), F(7, 8)):
        assert l2_extreme_sq([x]) == F(1, 12)
        assert l2_periodic_sq([x]) == F(1, 6)
    pts = [F(0), F(1, 2)]
    assert l2_periodic_sq(pts) == 2 * l2_extreme_sq(pts)
    assert l2_periodic_sq([F(1, 10), F(6, 10)]) == l2_periodic_sq([F(3, 10), F(8, 10)])
    assert math.isclose(l2_periodic_sq([0.1, 0.6]), l2_periodic_sq([0.3, 0.8]), rel_tol=1e-12)


def test_extreme_d2_single_point_against_integration():
    v = l2_extreme_sq([(F(1, 2), F(1, 2))])
    assert v == integrate_l2_sq("extreme-l2", [(F(1, 2), F(1, 2))])
    # midpoint rule over the 4-dim box space, 24 cells per axis
    m = 24
    g = (np.arange(m) + 0.5) / m
    x1, y1, x2, y2 = np.meshgrid(g, g, g, g, indexing="ij", sparse=True)
    inside = (x1 <= 0.5) & (0.5 < y1) & (x2 <= 0.5) & (0.5 < y2)
    vol = (y1 - x1) * (y2 - x2)
    ok = (x1 <= y1) & (x2 <= y2)
    approx = np.sum(np.where(ok, (inside - vol) ** 2, 0.0)) / m**4
    assert abs(approx - float(v)) < 1e-3


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("d", [1, 2])
def test_closed_forms_match_cell_integration(kind, d):
    rng = random.Random(f"{kind}-{d}")
    for N in (1, 2, 3, 5):
        pts = _random_points(rng, N, d)
        assert l2_sq(kind, pts) == integrate_l2_sq(kind, pts)


def test_star_matches_numeric_integration():
    rng = random.Random(3)
    m = 2000
    t = (np.arange(m) + 0.5) / m
    for _ in range(5):
        pts = _random_points(rng, rng.randint(1, 8), 2, exact=False)
        X = pts.as_array()
        T1, T2 = np.meshgrid(t, t, indexing="ij")
        A = sum(((X[n, 0] < T1) & (X[n, 1] < T2)).astype(float) for n in range(len(X)))
        approx = np.mean((A - len(X) * T1 * T2) ** 2)
        assert abs(approx - l2_star_sq(pts)) < 1e-3


@given(lists_1d)
def test_sorted_formula_equals_closed_form(values):
    assert l2_star_sq_sorted_1d(values) == l2_star_sq(values) == _sorted_sum_oracle(values)


@given(lists_1d)
def test_periodic_is_twice_extreme_in_1d(values):
    assert l2_periodic_sq(values) == 2 * l2_extreme_sq(values)


@given(lists_1d, st.randoms(use_true_random=False))
def test_permutation_invariance(values, rnd):
    shuffled = list(values)
    rnd.shuffle(shuffled)
    for kind in KINDS:
        assert l2_sq(kind, values) == l2_sq(kind, shuffled)


@given(lists_1d)
def test_star_lower_bound_and_equality_case(values):
    v = l2_star_sq(values)
    assert v >= F(1, 12)
    assert (v == F(1, 12)) == (sorted(values) == centered_grid(len(values)).values())
    for kind in KINDS:
        assert l2_sq(kind, values) >= 0


def test_sorted_formula_float_mode():
    rng = np.random.default_rng(0)
    x = rng.random(100).tolist()
    a, b = l2_star_sq_sorted_1d(x), l2_star_sq(x)
    assert isinstance(a, float)
    assert abs(a - b) <= 1e-12 * abs(b)


def test_sorted_formula_rejects_higher_dim():
    with pytest.raises(ValueError):
        l2_star_sq_sorted_1d([(F(1, 2), F(1, 2))])


def test_empty_list_is_rejected():
    for kind in KINDS:
        with pytest.raises(ValueError):
            l2_sq(kind, PointList(1, []))


# recursions


def test_star_increment_examples():
    assert l2_star_sq_increment(F(1, 12), [F(1, 2)], F(1, 4)) == l2_star_sq([F(1, 2), F(1, 4)]) == F(5, 24)
    g3 = centered_grid(3)
    assert l2_star_sq_increment(l2_star_sq(g3), g3, F(1, 2)) == l2_star_sq(list(g3.values()) + [F(1, 2)])


def test_extreme_and_periodic_increment_examples():
    assert l2_extreme_sq_increment(F(1, 12), [F(0)], F(1, 2)) == l2_extreme_sq([F(0), F(1, 2)])
    assert l2_periodic_sq_increment(F(1, 6), [F(0)], F(1, 2)) == l2_periodic_sq([F(0), F(1, 2)])
    x = F(2, 7)
    assert l2_extreme_sq_increment(F(1, 12), [x], x) == l2_extreme_sq([x, x])
    assert l2_periodic_sq_increment(F(1, 6), [x], x) == l2_periodic_sq([x, x])


INCREMENTS = {
    "star-l2": l2_star_sq_increment,
    "extreme-l2": l2_extreme_sq_increment,
    "periodic-l2": l2_periodic_sq_increment,
}


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("d", [1, 2, 3])
def test_increment_matches_direct(kind, d):
    rng = random.Random(f"inc-{kind}-{d}")
    inc = INCREMENTS[kind]
    for _ in range(5):
        N = rng.randint(1, 60)
        pts = _random_points(rng, N, d)
        y = tuple(F(rng.randrange(1000), 1000) for _ in range(d))
        assert inc(l2_sq(kind, pts), pts, y) == l2_sq(kind, pts.extended(y))
        fpts = _random_points(rng, N, d, exact=False)
        fy = tuple(rng.random() for _ in range(d))
        want = l2_sq(kind, fpts.extended(fy))
        assert math.isclose(inc(l2_sq(kind, fpts), fpts, fy), want, rel_tol=1e-10)


def test_increment_dimension_mismatch():
    with pytest.raises(ValueError):
        l2_star_sq_increment(F(1, 12), [F(1, 2)], (F(1, 2), F(1, 2)))


@pytest.mark.parametrize("kind", KINDS)
def test_prefix_curve_and_paranoid_mode(kind):
    rng = random.Random(kind)
    pts = _random_points(rng, 70, 2)
    curve = l2_prefix_curve(kind, pts, paranoid_every=16)
    assert curve == [l2_sq(kind, pts[:n]) for n in range(1, 71)]
    fpts = _random_points(rng, 70, 2, exact=False)
    fcurve = l2_prefix_curve(kind, fpts, paranoid_every=16)
    want = [l2_sq(kind, fpts[:n]) for n in range(1, 71)]
    assert np.allclose(fcurve, want, rtol=1e-10, atol=0)


# star discrepancy


def _sup_oracle(values):
    # |local discrepancy| just below and at each breakpoint
    N = len(values)
    best = F(0)
    for t in set(values) | {F(1)}:
        below = sum(1 for v in values if v < t)
        upto = sum(1 for v in values if v <= t)
        best = max(best, abs(below - N * t), abs(upto - N * t))
    return best


def test_star_sup_examples():
    assert star_sup_1d(centered_grid(2), normalized=True) == F(1, 4)
    assert star_sup_1d(centered_grid(2)) == F(1, 2)
    assert star_sup_1d([F(0)]) == 1
    vdc3 = van_der_corput_prefix(3).values()
    assert star_sup_1d(vdc3) == _sup_oracle(vdc3)


@given(st.lists(unit, min_size=1, max_size=15))
def test_star_sup_matches_breakpoint_oracle(values):
    assert star_sup_1d(values) == _sup_oracle(values)


@settings(max_examples=30)
@given(st.lists(unit, min_size=1, max_size=30))
def test_star_sup_curve(values):
    curve = star_sup_prefix_curve(values)
    assert curve == [star_sup_1d(values[:n]) for n in range(1, len(values) + 1)]


def test_star_sup_rejects_higher_dim():
    with pytest.raises(ValueError):
        star_sup_1d([(F(1, 2), F(1, 2))])


def test_kind_tags():
    assert [k.value for k in DiscrepancyKind] == ["star-l2", "extreme-l2", "periodic-l2", "star-sup"]
    assert not DiscrepancyKind.STAR_SUP.is_l2


def test_float_accuracy_at_ten_thousand_points():
    # the exact reference uses the dyadic values of the same doubles
    x = np.random.default_rng(11).random(10_000).tolist()
    want = l2_star_sq_sorted_1d([F(v) for v in x])
    for got in (l2_star_sq(x), l2_star_sq_sorted_1d(x), l2_prefix_curve("star-l2", x)[-1]):
        assert abs(F(got) - want) <= F(1, 10**12) * want
    assert math.isclose(l2_periodic_sq(x), 2 * l2_extreme_sq(x), rel_tol=1e-12)
