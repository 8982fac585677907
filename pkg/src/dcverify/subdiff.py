"""Subdifferential membership tests and 1-D interval computation.

A linear operator T belongs to the strong subdifferential of a map at xbar
when T(x - xbar) preceq_K map(x) - map(xbar) for every x; the eps variant
adds a +eps slack on the right.  Sets of operators are never enumerated:
the engines only need membership of supplied candidates, which a grid scan
falsifies with an exact witness or certifies on the grid.  In one dimension
the eps-subdifferential of a scalar function is an interval of difference
quotients and is computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cones import (
    DimensionMismatchError,
    PolyhedralCone,
    RationalVector,
    as_fraction,
    cone_contains,
)
from .problem import BoxSet, DCProblem, GridSpec, VectorMap


@dataclass(frozen=True)
class LinearOperator:
    """Exact m x n rational matrix acting by matrix-vector product."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if not self.matrix or not self.matrix[0]:
            raise ValueError("operator matrix must be nonempty")
        width = len(self.matrix[0])
        if any(len(row) != width for row in self.matrix):
            raise ValueError("ragged operator matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Fraction | int | str]]) -> "LinearOperator":
        return cls(tuple(tuple(as_fraction(v) for v in row) for row in rows))

    @classmethod
    def column(cls, values: Sequence[Fraction | int | str]) -> "LinearOperator":
        """Operator from a 1-D domain, given as its single column."""
        return cls(tuple((as_fraction(v),) for v in values))

    @property
    def out_dim(self) -> int:
        return len(self.matrix)

    @property
    def in_dim(self) -> int:
        return len(self.matrix[0])

    def apply(self, x: RationalVector) -> RationalVector:
        if x.dim != self.in_dim:
            raise DimensionMismatchError(f"operator in_dim {self.in_dim} vs vector dim {x.dim}")
        return RationalVector(tuple(
            sum((a * b for a, b in zip(row, x.coords)), Fraction(0))
            for row in self.matrix
        ))

    def as_vector(self) -> RationalVector:
        """For 1-D domains, the operator identified with its value column."""
        if self.in_dim != 1:
            raise ValueError("only operators with a 1-D domain identify with a vector")
        return RationalVector(tuple(row[0] for row in self.matrix))

    def __str__(self) -> str:
        from .cones import format_rational
        return "[" + "; ".join(
            " ".join(format_rational(v) for v in row) for row in self.matrix
        ) + "]"


@dataclass(frozen=True)
class SubdiffVerdict:
    """Grid verdict for a single candidate operator."""

    status: str  # "CertifiedOnGrid" | "Falsified"
    witness: RationalVector | None
    grid: GridSpec

    @property
    def certified(self) -> bool:
        return self.status == "CertifiedOnGrid"


def strong_subdiff_contains(vmap: VectorMap, cone: PolyhedralCone, xbar: RationalVector,
                            T: LinearOperator, grid: GridSpec) -> SubdiffVerdict:
    """Check map(x) - map(xbar) - T(x - xbar) in cone for every grid x."""
    if T.out_dim != vmap.out_dim or T.in_dim != vmap.in_dim:
        raise DimensionMismatchError("operator shape does not match the map")
    base = vmap.evaluate(xbar)
    for x in grid.points(extra=vmap.exception_points() + [xbar]):
        diff = vmap.evaluate(x) - base - T.apply(x - xbar)
        if not cone_contains(cone, diff):
            return SubdiffVerdict("Falsified", x, grid)
    return SubdiffVerdict("CertifiedOnGrid", None, grid)


def eps_subdiff_contains(vmap: VectorMap, cone: PolyhedralCone, xbar: RationalVector,
                         T: LinearOperator, eps: RationalVector, grid: GridSpec) -> SubdiffVerdict:
    """As the strong test, with +eps slack; eps must be a cone member."""
    if not cone_contains(cone, eps):
        raise ValueError("eps not in the ordering cone")
    if T.out_dim != vmap.out_dim or T.in_dim != vmap.in_dim:
        raise DimensionMismatchError("operator shape does not match the map")
    base = vmap.evaluate(xbar)
    for x in grid.points(extra=vmap.exception_points() + [xbar]):
        diff = vmap.evaluate(x) - base - T.apply(x - xbar) + eps
        if not cone_contains(cone, diff):
            return SubdiffVerdict("Falsified", x, grid)
    return SubdiffVerdict("CertifiedOnGrid", None, grid)


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval with optional open (unbounded) ends; lo > hi is empty."""

    lo: Fraction | None
    hi: Fraction | None

    @property
    def is_empty(self) -> bool:
        return self.lo is not None and self.hi is not None and self.lo > self.hi

    def contains(self, t: Fraction) -> bool:
        if self.is_empty:
            return False
        if self.lo is not None and t < self.lo:
            return False
        if self.hi is not None and t > self.hi:
            return False
        return True


def scalar_eps_subdiff_interval(phi: VectorMap, xbar: Fraction | int | str,
                                eps: Fraction | int | str, grid: GridSpec) -> RationalInterval:
    """Grid-relative eps-subdifferential of a scalar function at xbar.

    The slopes t with t*(x - xbar) <= phi(x) - phi(xbar) + eps for all grid x
    form an interval: the upper end is the minimum difference quotient over
    grid points right of xbar, the lower end the maximum over points left of
    it.  A side with no grid points leaves that end unbounded (None).
    """
    if phi.in_dim != 1 or phi.out_dim != 1:
        raise ValueError("scalar interval computation needs a 1-D scalar map")
    xb = as_fraction(xbar)
    e = as_fraction(eps)
    if e < 0:
        raise ValueError("eps must be nonnegative")
    base_pt = RationalVector((xb,))
    if not grid.box.contains(base_pt):
        raise ValueError("grid interval must contain xbar")
    base = phi.evaluate(base_pt)[0]
    lo: Fraction | None = None
    hi: Fraction | None = None
    for p in grid.points(extra=phi.exception_points() + [base_pt]):
        x = p[0]
        if x == xb:
            continue
        quotient = (phi.evaluate(p)[0] - base + e) / (x - xb)
        if x > xb:
            hi = quotient if hi is None else min(hi, quotient)
        else:
            lo = quotient if lo is None else max(lo, quotient)
    return RationalInterval(lo, hi)


def scalarized_subdiff_contains(problem: DCProblem, ystar: RationalVector,
                                zstar: RationalVector, g: LinearOperator,
                                eps_scalar: Fraction | int | str, U: BoxSet,
                                grid: GridSpec) -> SubdiffVerdict:
    """Test one functional g against the scalarized eps-subdifferential of
    ystar o F + zstar o H restricted to U intersect C at xbar.

    The indicator of U intersect C is realized by restricting the grid, so
    the condition checked is, for every grid x in U intersect C,

        (ystar o F + zstar o H)(x) - (same at xbar) + eps_scalar >= g(x - xbar).
    """
    if ystar.dim != problem.y_dim or zstar.dim != problem.z_dim:
        raise DimensionMismatchError("functional dimensions do not match the problem")
    if g.out_dim != 1 or g.in_dim != problem.x_dim:
        raise DimensionMismatchError("candidate functional must map X to scalars")
    e = as_fraction(eps_scalar)
    xbar = problem.xbar

    def scalarized(x: RationalVector) -> Fraction:
        return ystar.dot(problem.F.evaluate(x)) + zstar.dot(problem.H.evaluate(x))

    base = scalarized(xbar)
    domain = U.intersect(problem.C)
    for x in grid.points(extra=problem.exception_points() + [xbar]):
        if not domain.contains(x):
            continue
        lhs = scalarized(x) - base + e
        rhs = g.apply(x - xbar)[0]
        if lhs < rhs:
            return SubdiffVerdict("Falsified", x, grid)
    return SubdiffVerdict("CertifiedOnGrid", None, grid)
