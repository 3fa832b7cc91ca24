"""Point containers and the classical reference sequences in base 2."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from .numerics import all_exact, as_scalar, format_scalar, parse_scalar

__all__ = [
    "PointList",
    "as_points",
    "radical_inverse",
    "van_der_corput_prefix",
    "symmetrized_vdc_prefix",
    "centered_grid",
    "read_points",
    "write_points",
    "format_points",
]

Point = tuple  # tuple of Scalars, one per coordinate


@dataclass
class PointList:
    """An ordered prefix x_1, ..., x_N of a sequence in [0,1]^dim.

    Points are stored as tuples of scalars (Fraction or float). Insertion
    order is meaningful: it is the sequence index.
    """

    dim: int
    points: list = field(default_factory=list)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        pts = []
        for p in self.points:
            p = _as_point(p)
            if len(p) != self.dim:
                raise ValueError(f"point {p} does not have dimension {self.dim}")
            pts.append(p)
        self.points = pts

    @classmethod
    def from_values(cls, values: Iterable, dim: int | None = None) -> "PointList":
        """Build from scalars (dimension 1) or from coordinate sequences."""
        pts = [_as_point(v) for v in values]
        if dim is None:
            dim = len(pts[0]) if pts else 1
        return cls(dim, pts)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return PointList(self.dim, self.points[i])
        return self.points[i]

    def append(self, point) -> None:
        point = _as_point(point)
        if len(point) != self.dim:
            raise ValueError(f"point {point} does not have dimension {self.dim}")
        self.points.append(point)

    def extended(self, point) -> "PointList":
        """Copy with one more point at the end."""
        out = PointList(self.dim, list(self.points))
        out.append(point)
        return out

    def column(self, i: int) -> list:
        return [p[i] for p in self.points]

    def values(self) -> list:
        """The coordinates of a one-dimensional list, as plain scalars."""
        if self.dim != 1:
            raise ValueError("values() needs a one-dimensional point list")
        return [p[0] for p in self.points]

    @property
    def is_exact(self) -> bool:
        return all(all_exact(p) for p in self.points)

    def as_array(self) -> np.ndarray:
        """Float copy of shape (N, dim)."""
        return np.array([[float(c) for c in p] for p in self.points], dtype=float).reshape(
            len(self.points), self.dim
        )


def _as_point(p) -> Point:
    if isinstance(p, tuple) and all(isinstance(c, (Fraction, float)) for c in p):
        return p
    if isinstance(p, (list, tuple, np.ndarray)):
        return tuple(as_scalar(c) for c in p)
    return (as_scalar(p),)


def as_points(pts, dim: int | None = None) -> PointList:
    """Accept a PointList, a flat sequence of scalars or a sequence of points."""
    if isinstance(pts, PointList):
        return pts
    if isinstance(pts, np.ndarray) and pts.ndim == 2:
        return PointList(pts.shape[1], [tuple(float(c) for c in row) for row in pts])
    return PointList.from_values(pts, dim)


def radical_inverse(n: int) -> Fraction:
    """Base-2 radical inverse: mirror the binary digits of n about the point."""
    if n < 0:
        raise ValueError("radical inverse is defined for n >= 0")
    if n == 0:
        return Fraction(0)
    m = n.bit_length()
    rev = int(format(n, "b")[::-1], 2)
    return Fraction(rev, 1 << m)


def van_der_corput_prefix(N: int) -> PointList:
    if N < 1:
        raise ValueError("N must be positive")
    return PointList(1, [(radical_inverse(n),) for n in range(N)])


def symmetrized_vdc_prefix(N: int) -> PointList:
    """First N terms of phi(0), 1-phi(0), phi(1), 1-phi(1), ...

    The second term is exactly 1, so this sequence leaves [0,1) once.
    """
    if N < 1:
        raise ValueError("N must be positive")
    out = []
    for i in range(N):
        phi = radical_inverse(i // 2)
        out.append((phi if i % 2 == 0 else 1 - phi,))
    return PointList(1, out)


def centered_grid(N: int) -> PointList:
    if N < 1:
        raise ValueError("N must be positive")
    return PointList(1, [(Fraction(2 * n - 1, 2 * N),) for n in range(1, N + 1)])


def format_points(pts: PointList) -> list[str]:
    return ["\t".join(format_scalar(c) for c in p) for p in pts]


def write_points(pts: PointList, stream: IO[str]) -> None:
    """One point per line, tab-separated coordinates."""
    for line in format_points(pts):
        stream.write(line + "\n")


def read_points(stream: IO[str] | Sequence[str]) -> PointList:
    """Inverse of :func:`write_points`. Blank lines and ``#`` comments are skipped."""
    pts = []
    dim = None
    for lineno, line in enumerate(stream, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            p = tuple(parse_scalar(tok) for tok in line.split("\t"))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if dim is None:
            dim = len(p)
        elif len(p) != dim:
            raise ValueError(f"line {lineno}: expected {dim} coordinates, got {len(p)}")
        for c in p:
            if not 0 <= c <= 1:
                raise ValueError(f"line {lineno}: coordinate {format_scalar(c)} outside [0,1]")
        pts.append(p)
    return PointList(dim or 1, pts)
