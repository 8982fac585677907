"""DC problem model: polynomial vector maps, box constraint sets, exact grids.

The problem template is

    K-Min  F(x) - G(x)
    s.t.   x in C,  H(x) - S(x) in -D,

with F, G ordered by a cone K in the objective space and H, S ordered by a
cone D in the constraint space.  Maps are multivariate polynomials over Q
per output coordinate, plus a finite list of exceptional points whose values
override the polynomial exactly.  The override list is what lets a map take
a different value at a single point, which is the shape several instructive
instances need.

Convexity and convexlikeness are certified by sampling: the verdicts are
grid-relative ("NotFalsified", never "Proved"), and a Falsified verdict
always carries an exact witness that re-checks by direct evaluation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cones import (
    DimensionMismatchError,
    PolyhedralCone,
    RationalVector,
    as_fraction,
    cone_contains,
)

# one monomial: (exponent tuple, coefficient)
Monomial = tuple[tuple[int, ...], Fraction]

DEFAULT_LAMBDAS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def _eval_poly(monomials: Sequence[Monomial], x: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for exponents, coeff in monomials:
        term = coeff
        for xi, e in zip(x, exponents):
            if e:
                term *= xi ** e
        total += term
    return total


@dataclass(frozen=True)
class VectorMap:
    """Polynomial map Q^in_dim -> Q^out_dim with exceptional-point overrides."""

    in_dim: int
    out_dim: int
    coords: tuple[tuple[Monomial, ...], ...]
    exceptions: tuple[tuple[RationalVector, RationalVector], ...] = ()

    def __post_init__(self) -> None:
        if self.in_dim < 1 or self.out_dim < 1:
            raise ValueError("map dimensions must be positive")
        if len(self.coords) != self.out_dim:
            raise ValueError("one monomial list per output coordinate is required")
        for monos in self.coords:
            for exponents, _ in monos:
                if len(exponents) != self.in_dim:
                    raise ValueError("exponent tuple length must equal in_dim")
        pts = [p.coords for p, _ in self.exceptions]
        if len(set(pts)) != len(pts):
            raise ValueError("exception points must be pairwise distinct")
        for p, v in self.exceptions:
            if p.dim != self.in_dim or v.dim != self.out_dim:
                raise DimensionMismatchError("exception point/value dimension mismatch")

    @classmethod
    def from_coeffs(cls, in_dim: int, out_dim: int,
                    coords: Sequence[Sequence[tuple[Sequence[int], Fraction | int | str]]],
                    exceptions: Sequence[tuple[RationalVector, RationalVector]] = ()) -> "VectorMap":
        packed = tuple(
            tuple((tuple(int(e) for e in exps), as_fraction(c)) for exps, c in monos)
            for monos in coords
        )
        return cls(in_dim, out_dim, packed, tuple(exceptions))

    @classmethod
    def zero(cls, in_dim: int, out_dim: int) -> "VectorMap":
        return cls(in_dim, out_dim, tuple(() for _ in range(out_dim)))

    def evaluate(self, x: RationalVector) -> RationalVector:
        if x.dim != self.in_dim:
            raise DimensionMismatchError(f"point dim {x.dim} vs map in_dim {self.in_dim}")
        for point, value in self.exceptions:
            if point.coords == x.coords:
                return value
        return RationalVector(tuple(_eval_poly(monos, x.coords) for monos in self.coords))

    def _raw_evaluator(self):
        """Tuple-in tuple-out evaluation closure for grid-scale inner loops."""
        overrides = {p.coords: v.coords for p, v in self.exceptions}
        polys = self.coords

        def ev(pt: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
            hit = overrides.get(pt)
            if hit is not None:
                return hit
            return tuple(_eval_poly(monos, pt) for monos in polys)

        return ev

    def __call__(self, x: RationalVector) -> RationalVector:
        return self.evaluate(x)

    def partial(self, coord: int, var: int) -> tuple[Monomial, ...]:
        """Exact partial derivative of the polynomial part of one coordinate."""
        out: list[Monomial] = []
        for exponents, coeff in self.coords[coord]:
            e = exponents[var]
            if e == 0:
                continue
            new_exp = list(exponents)
            new_exp[var] = e - 1
            out.append((tuple(new_exp), coeff * e))
        return tuple(out)

    def exception_points(self) -> list[RationalVector]:
        return [p for p, _ in self.exceptions]


def evaluate(vmap: VectorMap, x: RationalVector) -> RationalVector:
    """Exact evaluation; exceptional points override the polynomial."""
    return vmap.evaluate(x)


@dataclass(frozen=True)
class BoxSet:
    """Axis-aligned box in Q^n, the convex constraint set C."""

    lower: RationalVector
    upper: RationalVector

    def __post_init__(self) -> None:
        if self.lower.dim != self.upper.dim:
            raise DimensionMismatchError("box bound dimension mismatch")
        if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("box lower bound exceeds upper bound")

    @property
    def dim(self) -> int:
        return self.lower.dim

    def contains(self, x: RationalVector) -> bool:
        if x.dim != self.dim:
            raise DimensionMismatchError(f"point dim {x.dim} vs box dim {self.dim}")
        return all(lo <= xi <= hi for lo, xi, hi in zip(self.lower, x, self.upper))

    def intersect(self, other: "BoxSet") -> "BoxSet":
        lo = RationalVector(tuple(max(a, b) for a, b in zip(self.lower, other.lower)))
        hi = RationalVector(tuple(min(a, b) for a, b in zip(self.upper, other.upper)))
        return BoxSet(lo, hi)


@dataclass(frozen=True)
class GridSpec:
    """Exact rational grid: affine subdivisions of a box, points per axis."""

    box: BoxSet
    points_per_axis: int

    def __post_init__(self) -> None:
        if self.points_per_axis < 2:
            raise ValueError("points_per_axis must be at least 2")

    def axis_points(self, axis: int) -> list[Fraction]:
        lo = self.box.lower[axis]
        hi = self.box.upper[axis]
        n = self.points_per_axis
        if lo == hi:
            return [lo]
        step = (hi - lo) / (n - 1)
        return [lo + k * step for k in range(n)]

    def points(self, extra: Iterable[RationalVector] = ()) -> list[RationalVector]:
        """All grid points in lexicographic order, merged with any extra
        points that fall inside the box (exceptional points, base points)."""
        axes = [self.axis_points(i) for i in range(self.box.dim)]
        pts = {tuple(combo) for combo in itertools.product(*axes)}
        for p in extra:
            if p.dim == self.box.dim and self.box.contains(p):
                pts.add(p.coords)
        return [RationalVector(c) for c in sorted(pts)]


@dataclass(frozen=True)
class DCProblem:
    """A full problem instance: spaces, the four maps, cones, C, eps, xbar."""

    x_dim: int
    y_dim: int
    z_dim: int
    F: VectorMap
    G: VectorMap
    H: VectorMap
    S: VectorMap
    C: BoxSet
    K: PolyhedralCone
    D: PolyhedralCone
    eps: RationalVector
    xbar: RationalVector

    def __post_init__(self) -> None:
        checks = [
            (self.F, self.y_dim, "F"), (self.G, self.y_dim, "G"),
            (self.H, self.z_dim, "H"), (self.S, self.z_dim, "S"),
        ]
        for vmap, out_dim, name in checks:
            if vmap.in_dim != self.x_dim or vmap.out_dim != out_dim:
                raise DimensionMismatchError(f"map {name} has inconsistent dimensions")
        if self.C.dim != self.x_dim:
            raise DimensionMismatchError("constraint set C dimension mismatch")
        if self.K.dim != self.y_dim or self.D.dim != self.z_dim:
            raise DimensionMismatchError("cone dimension mismatch")
        if self.eps.dim != self.y_dim:
            raise DimensionMismatchError("eps dimension mismatch")
        if not cone_contains(self.K, self.eps):
            raise ValueError("eps not in K")
        if self.xbar.dim != self.x_dim:
            raise DimensionMismatchError("xbar dimension mismatch")
        if not self.C.contains(self.xbar):
            raise ValueError("xbar not in C")

    def objective(self, x: RationalVector) -> RationalVector:
        return self.F.evaluate(x) - self.G.evaluate(x)

    def constraint(self, x: RationalVector) -> RationalVector:
        return self.H.evaluate(x) - self.S.evaluate(x)

    def exception_points(self) -> list[RationalVector]:
        pts: list[RationalVector] = []
        for vmap in (self.F, self.G, self.H, self.S):
            pts.extend(vmap.exception_points())
        return pts

    def certification_points(self, grid: GridSpec) -> list[RationalVector]:
        """Grid points merged with xbar and all exceptional points in C."""
        return grid.points(extra=self.exception_points() + [self.xbar])


def feasible_contains(problem: DCProblem, x: RationalVector) -> bool:
    """x in C and H(x) - S(x) in -D, both exact."""
    if x.dim != problem.x_dim:
        raise DimensionMismatchError(f"point dim {x.dim} vs x_dim {problem.x_dim}")
    if not problem.C.contains(x):
        return False
    return cone_contains(problem.D, -problem.constraint(x))


@dataclass(frozen=True)
class ConvexityVerdict:
    """Grid-relative verdict; Falsified carries the exact witness triple."""

    status: str  # "NotFalsified" | "Falsified"
    witness: tuple[RationalVector, RationalVector, Fraction] | None = None

    @property
    def falsified(self) -> bool:
        return self.status == "Falsified"


def _pair_lambdas(lambdas: Sequence[Fraction]) -> list[Fraction]:
    lams = [as_fraction(l) for l in lambdas]
    for lam in lams:
        if not 0 < lam < 1:
            raise ValueError("lambda values must lie strictly between 0 and 1")
    return lams


def check_cone_convex(vmap: VectorMap, cone: PolyhedralCone, grid: GridSpec,
                      lambdas: Sequence[Fraction] = DEFAULT_LAMBDAS) -> ConvexityVerdict:
    """Falsify the convexity inequality over all grid pairs and lambdas.

    Tests map(lam*x1 + (1-lam)*x2) preceq_cone lam*map(x1) + (1-lam)*map(x2)
    for unordered grid pairs; each lambda is mirrored unless its complement
    already appears in the list.  First failure in lexicographic order wins.
    """
    lams = _pair_lambdas(lambdas)
    lam_set = set(lams)
    pts = [p.coords for p in grid.points(extra=vmap.exception_points())]
    ev = vmap._raw_evaluator()
    values = [ev(p) for p in pts]
    halfspaces = [a.coords for a in cone.halfspaces]
    n = len(pts)
    for i in range(n):
        for j in range(i, n):
            for lam in lams:
                orientations = [(i, j)]
                if i != j and (1 - lam) not in lam_set:
                    orientations.append((j, i))
                for a, b in orientations:
                    oml = 1 - lam
                    xa, xb = pts[a], pts[b]
                    va, vb = values[a], values[b]
                    combo = tuple(lam * p + oml * q for p, q in zip(xa, xb))
                    mid = ev(combo)
                    diff = tuple(lam * p + oml * q - m for p, q, m in zip(va, vb, mid))
                    for h in halfspaces:
                        if sum(hk * dk for hk, dk in zip(h, diff)) < 0:
                            return ConvexityVerdict(
                                "Falsified",
                                (RationalVector(xa), RationalVector(xb), lam))
    return ConvexityVerdict("NotFalsified")


def check_convexlike(vmap: VectorMap, cone: PolyhedralCone, grid: GridSpec,
                     lambdas: Sequence[Fraction] = DEFAULT_LAMBDAS) -> ConvexityVerdict:
    """Falsify convexlikeness: every grid pair and lambda must admit some
    grid point whose image is dominated by the convex combination of values.

    The verdict is grid-relative in both quantifiers: pairs range over the
    grid and the existential witness x3 is searched over the grid only.
    """
    lams = _pair_lambdas(lambdas)
    lam_set = set(lams)
    pts = [p.coords for p in grid.points(extra=vmap.exception_points())]
    ev = vmap._raw_evaluator()
    values = [ev(p) for p in pts]
    halfspaces = [a.coords for a in cone.halfspaces]
    point_index = {p: k for k, p in enumerate(pts)}
    n = len(pts)

    def member(diff: tuple[Fraction, ...]) -> bool:
        return all(sum(hk * dk for hk, dk in zip(h, diff)) >= 0 for h in halfspaces)

    # candidate order: endpoints, the exact combination point when on the
    # grid, then per-coordinate argmin values, then the full scan
    argmin_idx = [min(range(n), key=lambda k: values[k][c])
                  for c in range(vmap.out_dim)]

    def dominated(target: tuple[Fraction, ...], i: int, j: int,
                  combo: tuple[Fraction, ...]) -> bool:
        tried = set()
        candidates = [i, j]
        k = point_index.get(combo)
        if k is not None:
            candidates.append(k)
        candidates.extend(argmin_idx)
        for k in candidates:
            if k in tried:
                continue
            tried.add(k)
            if member(tuple(t - v for t, v in zip(target, values[k]))):
                return True
        for k in range(n):
            if k not in tried and member(tuple(t - v for t, v in zip(target, values[k]))):
                return True
        return False

    for i in range(n):
        for j in range(i, n):
            for lam in lams:
                orientations = [(i, j)]
                if i != j and (1 - lam) not in lam_set:
                    orientations.append((j, i))
                for a, b in orientations:
                    oml = 1 - lam
                    target = tuple(lam * p + oml * q
                                   for p, q in zip(values[a], values[b]))
                    combo = tuple(lam * p + oml * q for p, q in zip(pts[a], pts[b]))
                    if not dominated(target, a, b, combo):
                        return ConvexityVerdict(
                            "Falsified",
                            (RationalVector(pts[a]), RationalVector(pts[b]), lam))
    return ConvexityVerdict("NotFalsified")
