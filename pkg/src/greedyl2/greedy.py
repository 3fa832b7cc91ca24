"""Greedy discrepancy-minimizing sequences.

One dimension is exact. For the star L2 discrepancy the next element is the
smallest minimizer of

    f_N(x) = -2 sum_n max(x_n, x) + (N+1) x^2 - x

over the centred grid {(2k-1)/(2(N+1))}, which contains every global
minimizer whatever the earlier points are. For the extreme/periodic L2
discrepancy the next element minimizes

    h_N(x) = sum_n ((x_n - x)^2 - |x_n - x|),

a continuous piecewise quadratic whose minimizers sit at breakpoints or at
interior vertices. Both minimizations are finite exact comparisons.

In dimension d >= 2 the objectives are minimized by a tensor grid search
with local refinement, and every step is checked against the averaging
bound (the mean of the one-step increase over the cube), which the exact
minimizer always meets.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .discrepancy import DiscrepancyKind, l2_sq
from .numerics import Scalar, as_scalar, is_exact
from .sequences import PointList, as_points

__all__ = [
    "SearchConfig",
    "SearchQualityError",
    "GreedyState",
    "eval_star_objective",
    "eval_periodic_objective",
    "argmin_star_1d",
    "argmin_periodic_1d",
    "next_star_1d",
    "next_periodic_1d",
    "greedy_star_1d",
    "greedy_periodic_1d",
    "star_objective_vec",
    "periodic_objective_vec",
    "nd_objective",
    "averaging_bound",
    "default_start",
    "greedy_nd",
]

_L2_KINDS = (DiscrepancyKind.STAR_L2, DiscrepancyKind.EXTREME_L2, DiscrepancyKind.PERIODIC_L2)


class SearchQualityError(RuntimeError):
    """The grid search picked a point worse than the cube average allows."""


@dataclass(frozen=True)
class SearchConfig:
    """Grid search settings for d >= 2.

    ``seeds`` is how many of the best local minima of the coarse grid get
    refined; refining more than one keeps tied basins in play so the
    lexicographic tie-break sees all of them.
    """

    grid_resolution: int = 32
    refinement_rounds: int = 3
    tie_tol: float = 1e-12
    seeds: int = 4

    def __post_init__(self):
        if self.grid_resolution < 2:
            raise ValueError("grid_resolution must be at least 2")
        if self.refinement_rounds < 0:
            raise ValueError("refinement_rounds must be nonnegative")
        if self.seeds < 1:
            raise ValueError("seeds must be positive")


def _exact_coord(c) -> Fraction:
    c = as_scalar(c)
    # floats enter as their exact binary value
    return c if isinstance(c, Fraction) else Fraction(c)


class GreedyState:
    """A one-dimensional greedy construction in progress (exact).

    Keeps the points in insertion order, a sorted copy scaled to integers
    over the least common denominator of all points, the running sums of
    the points and their squares, and the current squared discrepancy of
    ``kind`` (for the extreme kind this is half the periodic value).
    """

    def __init__(self, kind, start):
        self.kind = DiscrepancyKind(kind)
        if self.kind not in _L2_KINDS:
            raise ValueError("greedy constructions need an L2 kind")
        start = as_points(start)
        if start.dim != 1:
            raise ValueError("GreedyState is one-dimensional; use greedy_nd for d >= 2")
        if len(start) == 0:
            raise ValueError("GreedyState needs at least one point")
        values = [_exact_coord(v) for v in start.values()]
        for v in values:
            if not 0 <= v <= 1:
                raise ValueError(f"start point {v} outside [0,1]")
        self.pts = PointList(1, [(v,) for v in values])
        self.den = math.lcm(*(v.denominator for v in values))
        self.sorted_scaled = sorted(v.numerator * (self.den // v.denominator) for v in values)
        self.sum_scaled = sum(self.sorted_scaled)
        self.sumsq_scaled = sum(Y * Y for Y in self.sorted_scaled)
        self.current_sq = l2_sq(self.kind, self.pts)

    @property
    def N(self) -> int:
        return len(self.pts)

    def sorted_values(self) -> list[Fraction]:
        return [Fraction(Y, self.den) for Y in self.sorted_scaled]

    def _rescale(self, q: int) -> None:
        new = math.lcm(self.den, q)
        if new != self.den:
            r = new // self.den
            self.sorted_scaled = [Y * r for Y in self.sorted_scaled]
            self.sum_scaled *= r
            self.sumsq_scaled *= r * r
            self.den = new

    def add(self, x) -> None:
        """Append x and update caches and the squared discrepancy."""
        x = _exact_coord(x)
        if not 0 <= x <= 1:
            raise ValueError(f"point {x} outside [0,1]")
        self._rescale(x.denominator)
        L, N = self.den, self.N
        X = x.numerator * (L // x.denominator)
        ys = self.sorted_scaled
        c = bisect.bisect_right(ys, X)
        below = sum(ys[:c])
        S, Q = self.sum_scaled, self.sumsq_scaled
        if self.kind is DiscrepancyKind.STAR_L2:
            # sum x_n^2 - 2 sum max(x_n, x) + (N+1)x^2 - x + (2N+1)/3
            sum_max = (S - below) + c * X
            num = Q - 2 * sum_max * L + (N + 1) * X * X - X * L
            delta = Fraction(num, L * L) + Fraction(2 * N + 1, 3)
        else:
            # periodic: -(2N+1)/3 + 1/2 + N + 2 sum((x_n-x)^2 - |x_n-x|)
            sq = Q - 2 * X * S + N * X * X
            absdev = (c * X - below) + ((S - below) - (N - c) * X)
            delta = Fraction(2 * (sq - absdev * L), L * L) + Fraction(1, 2) + N - Fraction(2 * N + 1, 3)
            if self.kind is DiscrepancyKind.EXTREME_L2:
                delta /= 2
        self.current_sq += delta
        ys.insert(c, X)
        self.sum_scaled += X
        self.sumsq_scaled += X * X
        self.pts.append((x,))


def _check_unit(x) -> None:
    if not 0 <= x < 1:
        raise ValueError(f"objective argument {x} outside [0,1)")


def eval_star_objective(state: GreedyState, x) -> Scalar:
    """f_N(x) = -2 sum_n max(x_n, x) + (N+1) x^2 - x."""
    x = as_scalar(x)
    _check_unit(x)
    xs = state.pts.values()
    if not is_exact(x):
        xs = [float(v) for v in xs]
    return -2 * sum(max(v, x) for v in xs) + (len(xs) + 1) * x * x - x


def eval_periodic_objective(state: GreedyState, x, objective: str = "h") -> Scalar:
    """h_N(x) = sum (x_n - x)^2 - |x_n - x|, or with ``objective="g"``
    g_N(x) = -N x (1-x) + 2 sum (min(x_n, x) - x_n x).

    The two differ by the constant sum x_n - sum x_n^2.
    """
    x = as_scalar(x)
    _check_unit(x)
    xs = state.pts.values()
    if not is_exact(x):
        xs = [float(v) for v in xs]
    if objective == "h":
        return sum((v - x) ** 2 - abs(v - x) for v in xs)
    if objective == "g":
        return -len(xs) * x * (1 - x) + 2 * sum(min(v, x) - v * x for v in xs)
    raise ValueError(f"unknown objective {objective!r}")


def argmin_star_1d(state: GreedyState) -> list[Fraction]:
    """All minimizers of f_N over the centred grid with N+1 points, ascending."""
    L, ys = state.den, state.sorted_scaled
    M = state.N + 1
    # candidate g = u/(2M), u = 2k-1. With P = sum of points <= g and c their
    # count, 4ML * (f_N(g) + 2 sum x_n) = 8M*sum(Y <= g) + L*u*(u - 2 - 4c).
    best = None
    winners: list[int] = []
    j = 0
    below = 0
    n = len(ys)
    for k in range(1, M + 1):
        u = 2 * k - 1
        uL = u * L
        while j < n and 2 * M * ys[j] <= uL:
            below += ys[j]
            j += 1
        w = 8 * M * below + uL * (u - 2 - 4 * j)
        if best is None or w < best:
            best = w
            winners = [u]
        elif w == best:
            winners.append(u)
    return [Fraction(u, 2 * M) for u in winners]


def next_star_1d(state: GreedyState) -> Fraction:
    """Smallest minimizer of f_N, i.e. the next star-greedy element."""
    return argmin_star_1d(state)[0]


def argmin_periodic_1d(state: GreedyState) -> list[Fraction]:
    """All minimizers of h_N over [0,1), ascending.

    On a gap between consecutive breakpoints (0, the points, 1) with c points
    at or below its left end, h_N(x) = N x^2 + (N - 2c - 2S) x + const, so the
    candidates are the breakpoints in [0,1) and the vertices that fall inside
    their gap. Values are compared as integers scaled by 4N L^2.
    """
    L, ys = state.den, state.sorted_scaled
    N = state.N
    S, Q = state.sum_scaled, state.sumsq_scaled
    breaks = sorted(set([0] + ys))
    best = None
    winners: list[Fraction] = []

    def offer(value: int, x: Fraction) -> None:
        nonlocal best, winners
        if best is None or value < best:
            best = value
            winners = [x]
        elif value == best:
            winners.append(x)

    j = 0
    below = 0
    for idx, left in enumerate(breaks):
        while j < N and ys[j] <= left:
            below += ys[j]
            j += 1
        right = breaks[idx + 1] if idx + 1 < len(breaks) else L
        B = N * L - 2 * j * L - 2 * S
        C = Q - S * L + 2 * below * L
        if left < L:
            offer(4 * N * (N * left * left + B * left + C), Fraction(left, L))
        # vertex at -B / (2 N L); inside the open gap?
        if 2 * N * left < -B < 2 * N * right:
            offer(4 * N * C - B * B, Fraction(-B, 2 * N * L))
    return winners


def next_periodic_1d(state: GreedyState) -> Fraction:
    """Smallest minimizer of h_N (equivalently g_N) over [0,1)."""
    return argmin_periodic_1d(state)[0]


def _run_1d(kind, start, N: int, step: Callable[[GreedyState], Fraction]) -> GreedyState:
    state = GreedyState(kind, start)
    if N < state.N:
        raise ValueError(f"N={N} is shorter than the start set ({state.N} points)")
    while state.N < N:
        state.add(step(state))
    return state


def greedy_star_1d(start, N: int) -> PointList:
    """Extend ``start`` (default ``{1/2}``) to N points by star-L2 greedy steps."""
    start = as_points(start, dim=1) if start is not None else PointList(1, [])
    if len(start) == 0:
        start = PointList(1, [(Fraction(1, 2),)])
    return _run_1d(DiscrepancyKind.STAR_L2, start, N, next_star_1d).pts


def greedy_periodic_1d(start, N: int, kind=DiscrepancyKind.PERIODIC_L2) -> PointList:
    """Extend ``start`` (default ``{0}``) by extreme/periodic-L2 greedy steps.

    Both kinds produce the same sequence in dimension one.
    """
    start = as_points(start, dim=1) if start is not None else PointList(1, [])
    if len(start) == 0:
        start = PointList(1, [(Fraction(0),)])
    kind = DiscrepancyKind(kind)
    if kind not in (DiscrepancyKind.PERIODIC_L2, DiscrepancyKind.EXTREME_L2):
        raise ValueError("greedy_periodic_1d needs the periodic or extreme kind")
    return _run_1d(kind, start, N, next_periodic_1d).pts


# ---------------------------------------------------------------------------
# float objectives on arrays, for brute-force checks and the d >= 2 search


def star_objective_vec(state: GreedyState) -> Callable[[np.ndarray], np.ndarray]:
    xs = [float(v) for v in state.pts.values()]

    def f(t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        acc = np.zeros_like(t)
        for v in xs:
            acc += np.maximum(v, t)
        return -2.0 * acc + (len(xs) + 1) * t * t - t

    return f


def periodic_objective_vec(state: GreedyState, objective: str = "h") -> Callable[[np.ndarray], np.ndarray]:
    xs = [float(v) for v in state.pts.values()]

    def h(t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        acc = np.zeros_like(t)
        if objective == "h":
            for v in xs:
                diff = v - t
                acc += diff * diff - np.abs(diff)
            return acc
        for v in xs:
            acc += np.minimum(v, t) - v * t
        return -len(xs) * t * (1.0 - t) + 2.0 * acc

    return h


def nd_objective(kind, X: np.ndarray, C: np.ndarray) -> np.ndarray:
    """The greedy objective (f_{N,d}, g_{N,d} or h_{N,d}) at each row of C."""
    kind = DiscrepancyKind(kind)
    N, d = X.shape
    acc = np.zeros(C.shape[0])
    block = max(1, int(2_000_000 // max(1, C.shape[0] * d)))
    for s in range(0, N, block):
        xb = X[s : s + block, None, :]
        if kind is DiscrepancyKind.STAR_L2:
            acc += np.prod(1.0 - np.maximum(xb, C[None]), axis=2).sum(axis=0)
        elif kind is DiscrepancyKind.EXTREME_L2:
            acc += np.prod(np.minimum(xb, C[None]) - xb * C[None], axis=2).sum(axis=0)
        else:
            diff = xb - C[None]
            acc += np.prod(0.5 - np.abs(diff) + diff * diff, axis=2).sum(axis=0)
    if kind is DiscrepancyKind.STAR_L2:
        return -(N + 1) / 2.0 ** (d - 1) * np.prod(1.0 - C * C, axis=1) + 2.0 * acc + np.prod(1.0 - C, axis=1)
    if kind is DiscrepancyKind.EXTREME_L2:
        return (1.0 - (N + 1) / 2.0 ** (d - 1)) * np.prod(C * (1.0 - C), axis=1) + 2.0 * acc
    return acc


def _increment_constant(kind: DiscrepancyKind, X: np.ndarray) -> float:
    """One-step increase minus the objective term (depends only on old points)."""
    N, d = X.shape
    if kind is DiscrepancyKind.STAR_L2:
        return (2 * N + 1) / 3.0**d - math.fsum(np.prod(1.0 - X * X, axis=1)) / 2.0 ** (d - 1)
    if kind is DiscrepancyKind.EXTREME_L2:
        return (2 * N + 1) / 12.0**d - math.fsum(np.prod(X * (1.0 - X), axis=1)) / 2.0 ** (d - 1)
    return -(2 * N + 1) / 3.0**d + 1.0 / 2.0**d


def averaging_bound(kind, d: int) -> float:
    """Mean one-step increase over the cube: 1/2^d - 1/3^d, or 1/6^d - 1/12^d."""
    kind = DiscrepancyKind(kind)
    if kind is DiscrepancyKind.EXTREME_L2:
        return 1.0 / 6.0**d - 1.0 / 12.0**d
    return 1.0 / 2.0**d - 1.0 / 3.0**d


_BELOW_ONE = float(np.nextafter(1.0, 0.0))


def _lex_pick(C: np.ndarray, vals: np.ndarray, tol: float) -> int:
    m = float(vals.min())
    near = np.flatnonzero(vals <= m + tol * max(1.0, abs(m)))
    if near.size == 1:
        return int(near[0])
    sub = C[near]
    order = np.lexsort(sub.T[::-1])
    return int(near[order[0]])


def _grid_minima(vals: np.ndarray, R: int, d: int, k: int) -> np.ndarray:
    """Indices of the k lowest grid local minima (first point of a plateau along each axis)."""
    V = vals.reshape((R,) * d)
    mask = np.ones(V.shape, dtype=bool)
    for ax in range(d):
        pad = [(1, 1) if i == ax else (0, 0) for i in range(d)]
        P = np.pad(V, pad, constant_values=np.inf)
        lo = [slice(None)] * d
        hi = [slice(None)] * d
        lo[ax], hi[ax] = slice(0, R), slice(2, R + 2)
        mask &= (V < P[tuple(lo)]) & (V <= P[tuple(hi)])
    idx = np.flatnonzero(mask.ravel())
    order = np.argsort(vals[idx], kind="stable")
    return idx[order[:k]]


def _refine(kind, X: np.ndarray, best: np.ndarray, value: float, cfg: SearchConfig) -> tuple[np.ndarray, float]:
    R, d = cfg.grid_resolution, X.shape[1]
    half = 1.0 / R
    for _ in range(cfg.refinement_rounds):
        axes = [np.clip(np.linspace(c - half, c + half, R), 0.0, _BELOW_ONE) for c in best]
        C = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        C = np.unique(np.vstack([C, best[None]]), axis=0)
        vals = nd_objective(kind, X, C)
        # plain argmin inside a basin; a tolerance here would drift towards the lower edge
        i = int(np.argmin(vals))
        if vals[i] < value:
            best, value = C[i], float(vals[i])
        half = 2.0 * half / (R - 1)
    return best, value


def _search(kind, X: np.ndarray, cfg: SearchConfig) -> np.ndarray:
    d = X.shape[1]
    R = cfg.grid_resolution
    axis = (np.arange(R) + 0.5) / R
    C = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    vals = nd_objective(kind, X, C)
    found = [_refine(kind, X, C[i], float(vals[i]), cfg) for i in _grid_minima(vals, R, d, cfg.seeds)]
    P = np.array([p for p, _ in found])
    return P[_lex_pick(P, np.array([v for _, v in found]), cfg.tie_tol)]


def default_start(kind, d: int) -> PointList:
    """The centre point for the star kind, the origin for the others."""
    c = Fraction(1, 2) if DiscrepancyKind(kind) is DiscrepancyKind.STAR_L2 else Fraction(0)
    return PointList(d, [tuple([c] * d)])


def greedy_nd(
    kind,
    start,
    N: int,
    cfg: SearchConfig | None = None,
    trace: list | None = None,
    dim: int | None = None,
) -> PointList:
    """Float greedy construction in any dimension by grid search.

    ``start=None`` means :func:`default_start` in dimension ``dim``.

    Each new point minimizes the kind's objective over a tensor grid of cell
    centres, followed by ``cfg.refinement_rounds`` local refinements. If a
    step raises the squared discrepancy by more than the cube average,
    :class:`SearchQualityError` is raised: the exact minimizer never does, so
    the grid was too coarse. ``trace``, when given, receives one record per
    step with the realized increase and the bound.
    """
    kind = DiscrepancyKind(kind)
    if kind not in _L2_KINDS:
        raise ValueError("greedy_nd needs an L2 kind")
    cfg = cfg or SearchConfig()
    if start is None:
        if dim is None:
            raise ValueError("give a start set or a dimension")
        start = default_start(kind, dim)
    start = as_points(start, dim=dim)
    if dim is not None and start.dim != dim:
        raise ValueError(f"start set has dimension {start.dim}, expected {dim}")
    if len(start) == 0:
        raise ValueError("greedy_nd needs a nonempty start set")
    if N < len(start):
        raise ValueError(f"N={N} is shorter than the start set ({len(start)} points)")
    X = start.as_array()
    d = X.shape[1]
    bound = averaging_bound(kind, d)
    current = float(l2_sq(kind, PointList(d, [tuple(float(c) for c in row) for row in X])))
    while X.shape[0] < N:
        y = _search(kind, X, cfg)
        obj = float(nd_objective(kind, X, y[None])[0])
        if kind is DiscrepancyKind.PERIODIC_L2:
            obj *= 2.0
        increase = _increment_constant(kind, X) + obj
        if trace is not None:
            trace.append({"N": X.shape[0] + 1, "increase": increase, "bound": bound, "point": tuple(y)})
        if increase > bound + 1e-12 * max(1.0, abs(current)):
            raise SearchQualityError(
                f"step to N={X.shape[0] + 1}: increase {increase!r} exceeds the averaging bound "
                f"{bound!r}; use a finer grid_resolution"
            )
        current += increase
        X = np.vstack([X, y[None]])
    return PointList(d, [tuple(float(c) for c in row) for row in X])
