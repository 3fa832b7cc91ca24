"""Star, extreme and periodic L2 discrepancies and the 1D star discrepancy.

All L2 evaluators return the *squared* discrepancy so that exact inputs give
exact (Fraction) outputs. Exact mode is selected automatically when every
coordinate is a Fraction; a single float anywhere switches to float mode.

Exact sums are done on integers over a per-coordinate common denominator.
Float sums go through :func:`math.fsum`, row by row in a fixed order, so
results do not depend on how the pair sum is traversed.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .numerics import Scalar, all_exact, as_scalar, common_denominator, is_exact
from .sequences import PointList, as_points

__all__ = [
    "DiscrepancyKind",
    "BoxSpec",
    "local_discrepancy",
    "l2_star_sq",
    "l2_extreme_sq",
    "l2_periodic_sq",
    "l2_sq",
    "l2_star_sq_sorted_1d",
    "l2_star_sq_increment",
    "l2_extreme_sq_increment",
    "l2_periodic_sq_increment",
    "l2_sq_increment",
    "star_sup_1d",
    "l2_prefix_curve",
    "star_sup_prefix_curve",
]


class DiscrepancyKind(str, enum.Enum):
    STAR_L2 = "star-l2"
    EXTREME_L2 = "extreme-l2"
    PERIODIC_L2 = "periodic-l2"
    STAR_SUP = "star-sup"

    @property
    def is_l2(self) -> bool:
        return self is not DiscrepancyKind.STAR_SUP


@dataclass(frozen=True)
class BoxSpec:
    """A test box: anchored [0,t), unanchored [x,y) or periodic B(x,y)."""

    kind: str
    lower: tuple
    upper: tuple

    def __post_init__(self):
        if self.kind not in ("anchored", "unanchored", "periodic"):
            raise ValueError(f"unknown box kind {self.kind!r}")
        lo = tuple(as_scalar(c) for c in _coords(self.lower))
        hi = tuple(as_scalar(c) for c in _coords(self.upper))
        if len(lo) != len(hi):
            raise ValueError("box corners differ in dimension")
        if self.kind == "anchored" and any(c != 0 for c in lo):
            raise ValueError("anchored boxes start at the origin")
        if self.kind == "unanchored" and any(a > b for a, b in zip(lo, hi)):
            raise ValueError("unanchored box needs lower <= upper")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def anchored(cls, t) -> "BoxSpec":
        t = _coords(t)
        return cls("anchored", tuple(Fraction(0) for _ in t), t)

    @classmethod
    def unanchored(cls, x, y) -> "BoxSpec":
        return cls("unanchored", _coords(x), _coords(y))

    @classmethod
    def periodic(cls, x, y) -> "BoxSpec":
        return cls("periodic", _coords(x), _coords(y))

    @property
    def dim(self) -> int:
        return len(self.upper)

    def volume(self) -> Scalar:
        vol = Fraction(1) if all_exact(self.lower + self.upper) else 1.0
        for a, b in zip(self.lower, self.upper):
            vol *= (b - a) if a <= b else (1 - a + b)
        return vol

    def contains(self, p) -> bool:
        for a, b, c in zip(self.lower, self.upper, p):
            if a <= b:
                if not a <= c < b:
                    return False
            elif not (c < b or c >= a):
                return False
        return True


def _coords(v) -> tuple:
    if isinstance(v, (list, tuple, np.ndarray)):
        return tuple(v)
    return (v,)


def local_discrepancy(box: BoxSpec, pts) -> Scalar:
    """Count of points in the box minus N times its volume."""
    pts = as_points(pts)
    if len(pts) and box.dim != pts.dim:
        raise ValueError(f"box has dimension {box.dim}, points have {pts.dim}")
    count = sum(1 for p in pts if box.contains(p))
    return count - len(pts) * box.volume()


# ---------------------------------------------------------------------------
# kernels: one coordinate's factor in the single and pair sums of the closed
# forms. Exact kernels act on integer numerators over a common denominator L
# and come with the per-coordinate denominator they produce.


@dataclass(frozen=True)
class _Kernel:
    exact: Callable[[int, int, int], int]  # (a, b, L) -> numerator
    den: Callable[[int], int]  # L -> denominator of one factor
    flt: Callable[[np.ndarray, np.ndarray], np.ndarray]


_STAR_SINGLE = _Kernel(
    exact=lambda a, _b, L: L * L - a * a,
    den=lambda L: L * L,
    flt=lambda x, _y: 1.0 - x * x,
)
_STAR_PAIR = _Kernel(
    exact=lambda a, b, L: L - (a if a > b else b),
    den=lambda L: L,
    flt=lambda x, y: 1.0 - np.maximum(x, y),
)
_EXTR_SINGLE = _Kernel(
    exact=lambda a, _b, L: a * (L - a),
    den=lambda L: L * L,
    flt=lambda x, _y: x * (1.0 - x),
)
_EXTR_PAIR = _Kernel(
    exact=lambda a, b, L: (a if a < b else b) * L - a * b,
    den=lambda L: L * L,
    flt=lambda x, y: np.minimum(x, y) - x * y,
)
_PER_PAIR = _Kernel(
    exact=lambda a, b, L: L * L - 2 * L * abs(a - b) + 2 * (a - b) * (a - b),
    den=lambda L: 2 * L * L,
    flt=lambda x, y: 0.5 - np.abs(x - y) + (x - y) ** 2,
)


def _scaled_columns(pts: PointList, extra=None) -> tuple[list[list[int]], list[int]]:
    cols, dens = [], []
    for i in range(pts.dim):
        col = [Fraction(c) for c in pts.column(i)]
        if extra is not None:
            col.append(Fraction(extra[i]))
        nums, den = common_denominator(col)
        cols.append(nums)
        dens.append(den)
    return cols, dens


def _denominator(kern: _Kernel, dens: Sequence[int]) -> int:
    out = 1
    for L in dens:
        out *= kern.den(L)
    return out


def _exact_single_sum(kern: _Kernel, cols, dens, count: int) -> Fraction:
    total = 0
    for n in range(count):
        term = 1
        for col, L in zip(cols, dens):
            term *= kern.exact(col[n], 0, L)
        total += term
    return Fraction(total, _denominator(kern, dens))


def _exact_cross_sum(kern: _Kernel, cols, dens, count: int, j: int) -> Fraction:
    """sum over n < count of the pair kernel between point n and point j."""
    total = 0
    for n in range(count):
        term = 1
        for col, L in zip(cols, dens):
            term *= kern.exact(col[n], col[j], L)
        total += term
    return Fraction(total, _denominator(kern, dens))


def _exact_pair_sum(kern: _Kernel, cols, dens, count: int) -> Fraction:
    """Full double sum over (n, m): diagonal plus twice the upper triangle."""
    diag = 0
    upper = 0
    d = len(cols)
    if d == 1:
        col, L = cols[0], dens[0]
        f = kern.exact
        for n in range(count):
            a = col[n]
            diag += f(a, a, L)
            for m in range(n + 1, count):
                upper += f(a, col[m], L)
    else:
        for n in range(count):
            term = 1
            for col, L in zip(cols, dens):
                term *= kern.exact(col[n], col[n], L)
            diag += term
            for m in range(n + 1, count):
                term = 1
                for col, L in zip(cols, dens):
                    term *= kern.exact(col[n], col[m], L)
                upper += term
    return Fraction(diag + 2 * upper, _denominator(kern, dens))


# Float mode: kernel values and row sums are doubles, but the O(N^2)-sized
# pieces (N^2/3^d, N * sum s_n, the pair total) are combined as exact
# Fractions of those doubles. Rounding any of them to a double would cost
# eps * N^2 absolutely, i.e. eps * N relative to an O(N) result.


def _float_singles(kern: _Kernel | None, X: np.ndarray) -> np.ndarray:
    if kern is None:
        return np.zeros(X.shape[0])
    return np.prod(kern.flt(X, X), axis=1)


def _exact_sum(values) -> Fraction:
    return sum((Fraction(float(v)) for v in values), Fraction(0))


def _float_pair_total(kern: _Kernel, X: np.ndarray) -> Fraction:
    n = X.shape[0]
    diag = math.fsum(np.prod(kern.flt(X, X), axis=1))
    rows = [math.fsum(np.prod(kern.flt(X[i + 1 :], X[i][None, :]), axis=1)) for i in range(n - 1)]
    return Fraction(diag) + 2 * _exact_sum(rows)


def _float_cross(kern: _Kernel, X: np.ndarray, y: np.ndarray) -> Fraction:
    if X.shape[0] == 0:
        return Fraction(0)
    return Fraction(math.fsum(np.prod(kern.flt(X, y[None, :]), axis=1)))


def _float_step(kind, X: np.ndarray, y: np.ndarray, single_sum: Fraction) -> Fraction:
    """Exact increment from float data; ``single_sum`` is the exact sum of the singles over X."""
    N, d = X.shape
    if kind is DiscrepancyKind.STAR_L2:
        sy = Fraction(float(np.prod(1.0 - y * y)))
        return (
            Fraction(2 * N + 1, 3**d)
            - single_sum / 2 ** (d - 1)
            - Fraction(N + 1, 2 ** (d - 1)) * sy
            + 2 * _float_cross(_STAR_PAIR, X, y)
            + Fraction(float(np.prod(1.0 - y)))
        )
    if kind is DiscrepancyKind.EXTREME_L2:
        sy = Fraction(float(np.prod(y * (1.0 - y))))
        return (
            Fraction(2 * N + 1, 12**d)
            - single_sum / 2 ** (d - 1)
            + (1 - Fraction(N + 1, 2 ** (d - 1))) * sy
            + 2 * _float_cross(_EXTR_PAIR, X, y)
        )
    return -Fraction(2 * N + 1, 3**d) + Fraction(1, 2**d) + 2 * _float_cross(_PER_PAIR, X, y)


_FLOAT_SINGLE = {
    DiscrepancyKind.STAR_L2: _STAR_SINGLE,
    DiscrepancyKind.EXTREME_L2: _EXTR_SINGLE,
    DiscrepancyKind.PERIODIC_L2: None,
}


def _prepare(pts) -> PointList:
    pts = as_points(pts)
    if len(pts) == 0:
        raise ValueError("discrepancy of an empty point list is undefined")
    return pts


# ---------------------------------------------------------------------------
# direct closed forms


def l2_star_sq(pts) -> Scalar:
    """Squared star L2 discrepancy (Warnock's formula)."""
    pts = _prepare(pts)
    N, d = len(pts), pts.dim
    if pts.is_exact:
        cols, dens = _scaled_columns(pts)
        s1 = _exact_single_sum(_STAR_SINGLE, cols, dens, N)
        s2 = _exact_pair_sum(_STAR_PAIR, cols, dens, N)
        return Fraction(N * N, 3**d) - Fraction(N, 2 ** (d - 1)) * s1 + s2
    X = pts.as_array()
    s1 = _exact_sum(_float_singles(_STAR_SINGLE, X))
    return float(Fraction(N * N, 3**d) - Fraction(N, 2 ** (d - 1)) * s1 + _float_pair_total(_STAR_PAIR, X))


def l2_extreme_sq(pts) -> Scalar:
    """Squared extreme (unanchored) L2 discrepancy."""
    pts = _prepare(pts)
    N, d = len(pts), pts.dim
    if pts.is_exact:
        cols, dens = _scaled_columns(pts)
        s1 = _exact_single_sum(_EXTR_SINGLE, cols, dens, N)
        s2 = _exact_pair_sum(_EXTR_PAIR, cols, dens, N)
        return Fraction(N * N, 12**d) - Fraction(N, 2 ** (d - 1)) * s1 + s2
    X = pts.as_array()
    s1 = _exact_sum(_float_singles(_EXTR_SINGLE, X))
    return float(Fraction(N * N, 12**d) - Fraction(N, 2 ** (d - 1)) * s1 + _float_pair_total(_EXTR_PAIR, X))


def l2_periodic_sq(pts) -> Scalar:
    """Squared periodic L2 discrepancy (diaphony up to normalization)."""
    pts = _prepare(pts)
    N, d = len(pts), pts.dim
    if pts.is_exact:
        cols, dens = _scaled_columns(pts)
        s2 = _exact_pair_sum(_PER_PAIR, cols, dens, N)
        return s2 - Fraction(N * N, 3**d)
    return float(_float_pair_total(_PER_PAIR, pts.as_array()) - Fraction(N * N, 3**d))


def l2_star_sq_sorted_1d(pts) -> Scalar:
    """Squared star L2 discrepancy in 1D from the sorted points.

    1/12 + N * sum_n (y_n - (2n-1)/(2N))^2, with y_1 <= ... <= y_N. The sum
    vanishes exactly on the centred grid, the unique minimizer.
    """
    pts = _prepare(pts)
    if pts.dim != 1:
        raise ValueError("sorted formula is one-dimensional")
    N = len(pts)
    ys = sorted(pts.values())
    if all_exact(ys):
        nums, L = common_denominator([Fraction(y) for y in ys])
        # (y_n - (2n-1)/(2N)) * 2NL = 2N*Y_n - (2n-1)*L
        total = sum((2 * N * Y - (2 * n - 1) * L) ** 2 for n, Y in enumerate(nums, 1))
        return Fraction(N * total, (2 * N * L) ** 2) + Fraction(1, 12)
    y = np.asarray(ys, dtype=float)
    grid = (2.0 * np.arange(1, N + 1) - 1.0) / (2.0 * N)
    return math.fsum([N * math.fsum((y - grid) ** 2), 1.0 / 12.0])


_DIRECT = {
    DiscrepancyKind.STAR_L2: l2_star_sq,
    DiscrepancyKind.EXTREME_L2: l2_extreme_sq,
    DiscrepancyKind.PERIODIC_L2: l2_periodic_sq,
}


def l2_sq(kind, pts) -> Scalar:
    kind = DiscrepancyKind(kind)
    if not kind.is_l2:
        raise ValueError("l2_sq needs an L2 kind")
    return _DIRECT[kind](pts)


# ---------------------------------------------------------------------------
# one-point recursions


def _check_increment_args(pts, y) -> tuple[PointList, tuple]:
    pts = as_points(pts)
    y = tuple(as_scalar(c) for c in _coords(y))
    if len(pts) and len(y) != pts.dim:
        raise ValueError(f"new point has dimension {len(y)}, list has {pts.dim}")
    if len(pts) == 0:
        pts = PointList(len(y), [])
    return pts, y


def l2_star_sq_increment(prev_sq: Scalar, pts, y, cached_sum: Scalar | None = None) -> Scalar:
    """Squared star L2 discrepancy after appending ``y`` to ``pts``.

    ``cached_sum`` may carry sum_n prod_i (1 - x_{n,i}^2) over ``pts``; in
    exact mode it saves a pass over the points (float mode ignores it).
    """
    pts, y = _check_increment_args(pts, y)
    N, d = len(pts), pts.dim
    if pts.is_exact and all_exact(y) and (cached_sum is None or is_exact(cached_sum)):
        cols, dens = _scaled_columns(pts, extra=y)
        s1 = cached_sum if cached_sum is not None else _exact_single_sum(_STAR_SINGLE, cols, dens, N)
        cross = _exact_cross_sum(_STAR_PAIR, cols, dens, N, N)
        y_sq = math.prod(1 - Fraction(c) ** 2 for c in y)
        y_lin = math.prod(1 - Fraction(c) for c in y)
        return (
            prev_sq
            + Fraction(2 * N + 1, 3**d)
            - Fraction(1, 2 ** (d - 1)) * s1
            - Fraction(N + 1, 2 ** (d - 1)) * y_sq
            + 2 * cross
            + y_lin
        )
    yv = np.array([float(c) for c in y])
    return _float_update(DiscrepancyKind.STAR_L2, prev_sq, pts.as_array().reshape(N, d), yv)


def l2_extreme_sq_increment(prev_sq: Scalar, pts, y, cached_sum: Scalar | None = None) -> Scalar:
    """Squared extreme L2 discrepancy after appending ``y``.

    ``cached_sum`` may carry sum_n prod_i x_{n,i}(1 - x_{n,i}) (exact mode only).
    """
    pts, y = _check_increment_args(pts, y)
    N, d = len(pts), pts.dim
    if pts.is_exact and all_exact(y) and (cached_sum is None or is_exact(cached_sum)):
        cols, dens = _scaled_columns(pts, extra=y)
        s1 = cached_sum if cached_sum is not None else _exact_single_sum(_EXTR_SINGLE, cols, dens, N)
        cross = _exact_cross_sum(_EXTR_PAIR, cols, dens, N, N)
        y_self = math.prod(Fraction(c) * (1 - Fraction(c)) for c in y)
        return (
            prev_sq
            + Fraction(2 * N + 1, 12**d)
            - Fraction(1, 2 ** (d - 1)) * s1
            + (1 - Fraction(N + 1, 2 ** (d - 1))) * y_self
            + 2 * cross
        )
    yv = np.array([float(c) for c in y])
    return _float_update(DiscrepancyKind.EXTREME_L2, prev_sq, pts.as_array().reshape(N, d), yv)


def l2_periodic_sq_increment(prev_sq: Scalar, pts, y) -> Scalar:
    """Squared periodic L2 discrepancy after appending ``y``."""
    pts, y = _check_increment_args(pts, y)
    N, d = len(pts), pts.dim
    if pts.is_exact and all_exact(y):
        cols, dens = _scaled_columns(pts, extra=y)
        cross = _exact_cross_sum(_PER_PAIR, cols, dens, N, N)
        return prev_sq - Fraction(2 * N + 1, 3**d) + Fraction(1, 2**d) + 2 * cross
    yv = np.array([float(c) for c in y])
    return _float_update(DiscrepancyKind.PERIODIC_L2, prev_sq, pts.as_array().reshape(N, d), yv)


def _float_update(kind, prev_sq, X: np.ndarray, y: np.ndarray) -> float:
    s1 = _exact_sum(_float_singles(_FLOAT_SINGLE[kind], X))
    return float(Fraction(float(prev_sq)) + _float_step(kind, X, y, s1))


_INCREMENT = {
    DiscrepancyKind.STAR_L2: l2_star_sq_increment,
    DiscrepancyKind.EXTREME_L2: l2_extreme_sq_increment,
    DiscrepancyKind.PERIODIC_L2: l2_periodic_sq_increment,
}


def l2_sq_increment(kind, prev_sq: Scalar, pts, y) -> Scalar:
    kind = DiscrepancyKind(kind)
    if not kind.is_l2:
        raise ValueError("no recursion for the sup-norm discrepancy")
    return _INCREMENT[kind](prev_sq, pts, y)


# ---------------------------------------------------------------------------
# sup-norm star discrepancy in one dimension


def _star_sup_sorted(ys: list) -> Scalar:
    # sup over t of |#{y < t} - N t|, attained at (or next to) the points:
    # max_n max(n - N y_n, N y_n - (n - 1)) over the sorted values.
    N = len(ys)
    best = None
    for n, y in enumerate(ys, 1):
        v = max(n - N * y, N * y - (n - 1))
        if best is None or v > best:
            best = v
    return best


def star_sup_1d(pts, normalized: bool = False) -> Scalar:
    """Star discrepancy D*_N = sup_t |A_N([0,t)) - N t| of a 1D list.

    With ``normalized=True`` the value is divided by N (the convention in
    which the centred grid attains 1/(2N)). Duplicated points are fine.
    """
    pts = _prepare(pts)
    if pts.dim != 1:
        raise ValueError("star discrepancy is only implemented in dimension 1")
    ys = sorted(pts.values())
    if not all_exact(ys):
        ys = [float(y) for y in ys]
    value = _star_sup_sorted(ys)
    return value / len(ys) if normalized else value


# ---------------------------------------------------------------------------
# prefix curves


def l2_prefix_curve(kind, pts, paranoid_every: int | None = None) -> list:
    """Squared L2 discrepancy of every prefix x_1..x_N, N = 1..len(pts).

    Uses the one-point recursions. With ``paranoid_every=k`` every k-th prefix
    is recomputed from the closed form and compared (exactly, or to 1e-9
    relative in float mode); a mismatch raises ``ArithmeticError``.
    """
    kind = DiscrepancyKind(kind)
    pts = _prepare(pts)
    if not kind.is_l2:
        raise ValueError("use star_sup_prefix_curve for the sup-norm discrepancy")
    direct = _DIRECT[kind]
    if pts.is_exact:
        return _exact_curve(kind, pts, direct, paranoid_every)
    return _float_curve(kind, pts, direct, paranoid_every)


def _paranoid_check(direct, prefix: PointList, value, exact: bool) -> None:
    ref = direct(prefix)
    ok = ref == value if exact else abs(ref - value) <= 1e-9 * max(1.0, abs(ref))
    if not ok:
        raise ArithmeticError(f"recursion drifted at N={len(prefix)}: {value} vs {ref}")


def _exact_curve(kind, pts: PointList, direct, paranoid_every) -> list:
    inc = _INCREMENT[kind]
    out = [direct(pts[:1])]
    single = {DiscrepancyKind.STAR_L2: _STAR_SINGLE, DiscrepancyKind.EXTREME_L2: _EXTR_SINGLE}.get(kind)
    cached = None
    if single is not None:
        cached = _point_single(single, pts[0])
    for N in range(1, len(pts)):
        prefix = pts[:N]
        if single is not None:
            value = inc(out[-1], prefix, pts[N], cached_sum=cached)
            cached += _point_single(single, pts[N])
        else:
            value = inc(out[-1], prefix, pts[N])
        out.append(value)
        if paranoid_every and (N + 1) % paranoid_every == 0:
            _paranoid_check(direct, pts[: N + 1], value, True)
    return out


def _point_single(kern: _Kernel, p) -> Fraction:
    term = Fraction(1)
    for c in p:
        c = Fraction(c)
        # each single kernel is a function of one coordinate with L = den(c)
        term *= Fraction(kern.exact(c.numerator, 0, c.denominator), kern.den(c.denominator))
    return term


def _float_curve(kind, pts: PointList, direct, paranoid_every) -> list:
    X = pts.as_array()
    singles = _float_singles(_FLOAT_SINGLE[kind], X)
    running = _float_step(kind, X[:0], X[0], Fraction(0))  # exact running value
    single_sum = Fraction(float(singles[0]))
    out = [float(running)]
    for N in range(1, X.shape[0]):
        running += _float_step(kind, X[:N], X[N], single_sum)
        single_sum += Fraction(float(singles[N]))
        out.append(float(running))
        if paranoid_every and (N + 1) % paranoid_every == 0:
            _paranoid_check(direct, pts[: N + 1], out[-1], False)
    return out


def star_sup_prefix_curve(pts, normalized: bool = False) -> list:
    """D*_N for every prefix of a 1D list (sorted insertion, O(N) per prefix)."""
    pts = _prepare(pts)
    if pts.dim != 1:
        raise ValueError("star discrepancy is only implemented in dimension 1")
    vals = pts.values()
    exact = all_exact(vals)
    out = []
    if exact:
        ys: list = []
        for y in vals:
            bisect.insort(ys, y)
            v = _star_sup_sorted(ys)
            out.append(v / len(ys) if normalized else v)
        return out
    ys_f: list = []
    for y in vals:
        bisect.insort(ys_f, float(y))
        a = np.asarray(ys_f)
        n = np.arange(1, len(a) + 1)
        N = len(a)
        v = float(max(np.max(n - N * a), np.max(N * a - (n - 1))))
        out.append(v / N if normalized else v)
    return out
