"""Sampling verdicts for approximate pseudo-dissipativity of operator fields.

An operator field assigns to every point a finite set of linear operators
(given as polynomial formulas per matrix entry, plus exceptional points that
override the whole set).  The field is approximately pseudo-dissipative at a
base point when for every strictly interior eps there is a neighborhood on
which some operator pair (one taken at x, one at the base point) satisfies

    (T - T*)(x - xbar)  preceq_K  eps * d(x, xbar),

with d the max-norm, which keeps the right-hand side rational and every
comparison exact.  The interior-eps quantifier can only be sampled, so the
positive verdict is "NotFalsified" for the sampled eps list; falsification
is exact and carries the radius-exhaustion trace and a witness point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cones import PolyhedralCone, RationalVector, as_fraction, cone_contains
from .problem import BoxSet, GridSpec, Monomial, VectorMap, _eval_poly
from .subdiff import LinearOperator

DEFAULT_RADII = (Fraction(1, 2), Fraction(1, 8), Fraction(1, 32),
                 Fraction(1, 128), Fraction(1, 512))


@dataclass(frozen=True)
class OperatorField:
    """Set-valued map x -> finite list of linear operators.

    ``formulas`` holds one matrix of polynomial entries per member of the
    set; ``exceptions`` overrides the full operator list at specific points.
    """

    in_dim: int
    out_dim: int
    formulas: tuple[tuple[tuple[tuple[Monomial, ...], ...], ...], ...]
    exceptions: tuple[tuple[RationalVector, tuple[LinearOperator, ...]], ...] = ()

    def __post_init__(self) -> None:
        if not self.formulas and not self.exceptions:
            raise ValueError("an operator field needs at least one operator formula")
        for formula in self.formulas:
            if len(formula) != self.out_dim:
                raise ValueError("formula row count must equal out_dim")
            for row in formula:
                if len(row) != self.in_dim:
                    raise ValueError("formula column count must equal in_dim")
        for point, ops in self.exceptions:
            if not ops:
                raise ValueError("exception operator lists must be nonempty")
            if point.dim != self.in_dim:
                raise ValueError("exception point dimension mismatch")

    def operators_at(self, x: RationalVector) -> list[LinearOperator]:
        for point, ops in self.exceptions:
            if point.coords == x.coords:
                return list(ops)
        out = []
        for formula in self.formulas:
            rows = tuple(
                tuple(_eval_poly(entry, x.coords) for entry in row)
                for row in formula
            )
            out.append(LinearOperator(rows))
        if not out:
            raise ValueError(f"operator field has no operator at {x}")
        return out

    def exception_points(self) -> list[RationalVector]:
        return [p for p, _ in self.exceptions]


def gradient_field(vmap: VectorMap) -> OperatorField:
    """Singleton field of the exact Jacobian of the polynomial part of a map.

    Exceptional values of the map carry no derivative information; at those
    points the polynomial part's Jacobian is used unchanged.
    """
    formula = tuple(
        tuple(vmap.partial(i, j) for j in range(vmap.in_dim))
        for i in range(vmap.out_dim)
    )
    return OperatorField(vmap.in_dim, vmap.out_dim, (formula,))


@dataclass(frozen=True)
class RadiusTrial:
    radius: Fraction
    witness: RationalVector | None  # None means the radius certified


@dataclass(frozen=True)
class EpsEvidence:
    eps: RationalVector
    certified_radius: Fraction | None
    trials: tuple[RadiusTrial, ...]


@dataclass(frozen=True)
class DissipativityVerdict:
    status: str  # "NotFalsified" | "Falsified"
    evidence: tuple[EpsEvidence, ...]
    eps: RationalVector | None = None       # failing eps sample
    witness: RationalVector | None = None   # violator at the smallest radius

    @property
    def falsified(self) -> bool:
        return self.status == "Falsified"


def default_eps_samples(cone: PolyhedralCone, count: int = 5) -> list[RationalVector]:
    """Interior samples w / 2^k for k = 0..count-1, w the generator sum."""
    w = cone.interior_point()
    return [w.scale(Fraction(1, 2 ** k)) for k in range(count)]


def check_approx_pseudo_dissipative(field: OperatorField, xbar: RationalVector,
                                    cone: PolyhedralCone,
                                    eps_samples: Sequence[RationalVector] | None = None,
                                    radii: Sequence[Fraction] | None = None,
                                    grid_template: GridSpec | None = None) -> DissipativityVerdict:
    """Search, per eps sample, for a neighborhood radius whose whole grid
    admits a satisfying operator pair; falsified when the smallest radius
    still contains a violating point for some eps.
    """
    if eps_samples is None:
        eps_samples = default_eps_samples(cone)
    for eps in eps_samples:
        if not cone_contains(cone, eps, strict=True):
            raise ValueError(f"eps sample {eps} is not strictly interior to the cone")
    if radii is None:
        radii = DEFAULT_RADII
    radii = [as_fraction(r) for r in radii]
    if not radii or any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    if any(a <= b for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly decreasing")
    points_per_axis = grid_template.points_per_axis if grid_template is not None else 33

    base_ops = field.operators_at(xbar)

    def violator(eps: RationalVector, radius: Fraction) -> RationalVector | None:
        ball = BoxSet(
            RationalVector(tuple(c - radius for c in xbar.coords)),
            RationalVector(tuple(c + radius for c in xbar.coords)),
        )
        grid = GridSpec(ball, points_per_axis)
        for x in grid.points(extra=field.exception_points() + [xbar]):
            step = x - xbar
            bound = eps.scale(step.max_norm())
            ok = False
            for T in field.operators_at(x):
                for Tstar in base_ops:
                    moved = T.apply(step) - Tstar.apply(step)
                    if cone_contains(cone, bound - moved):
                        ok = True
                        break
                if ok:
                    break
            if not ok:
                return x
        return None

    evidence: list[EpsEvidence] = []
    for eps in eps_samples:
        trials: list[RadiusTrial] = []
        certified: Fraction | None = None
        for radius in radii:
            w = violator(eps, radius)
            trials.append(RadiusTrial(radius, w))
            if w is None:
                certified = radius
                break
        evidence.append(EpsEvidence(eps, certified, tuple(trials)))
        if certified is None:
            return DissipativityVerdict(
                "Falsified", tuple(evidence), eps=eps, witness=trials[-1].witness,
            )
    return DissipativityVerdict("NotFalsified", tuple(evidence))
