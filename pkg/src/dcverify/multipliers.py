"""Exact rational linear feasibility plus the four theorem engines.

The feasibility core solves small systems of linear constraints over named
rational unknowns (the components of the multiplier pair) with relations
``>=``, ``==`` and ``>``.  Strict relations are handled by a shared slack
variable bounded by one and maximized with a deterministic two-phase simplex
under Bland's rule; the strict system is satisfiable exactly when the
optimal slack is positive.  Everything is Fraction arithmetic, so feasible
assignments and certificate residuals are exact.

On top of the core sit the theorem engines:

* ``alternative_system``: either a grid point solving the strict system
  exists, or nonzero dual-cone multipliers certify nonnegativity of the
  scalarized values on the whole grid (the convexlike alternative).
* ``sufficient_condition``: certifies the multiplier hypotheses of the
  sufficient optimality conditions, in corrected mode (with interior
  correction pairs shifting the candidate operators) or in legacy mode
  (corrections absent); both carry the complementarity equality.
* ``necessary_condition``: searches candidate operator pairs for multipliers
  satisfying the scalarized subgradient system; legacy mode adds the
  complementarity equality, which is the defining difference between the
  modes, and the proper target restricts the objective multiplier to the
  strict polar or zero.

The multiplier pair is scale-fixed by one linear equality: the pairings of
ystar with the generators of the objective cone plus the pairings of zstar
with the generators of the constraint cone sum to one.  Inside the dual
cones every one of those pairings is nonnegative, so the row is sign-safe
and excludes the zero functional.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cones import (
    PolyhedralCone,
    RationalVector,
    as_fraction,
    cone_contains,
    format_rational,
)
from .pareto import NeighborhoodSpec, check_eps_weak_local_min
from .problem import DCProblem, GridSpec, VectorMap, check_convexlike
from .subdiff import LinearOperator

MAX_VARIABLES = 8

MODE_CORRECTED = "corrected"
MODE_LEGACY = "legacy-gl"
TARGET_WEAK = "weak"
TARGET_PROPER = "proper"


class SolverLimitError(ValueError):
    """The feasibility system exceeds the supported variable count."""


# ---------------------------------------------------------------------------
# linear feasibility problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str  # "ge" | "eq" | "gt"
    rhs: Fraction
    label: str = ""

    def value(self, assignment: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.coeffs, assignment)), Fraction(0))

    def holds(self, assignment: Sequence[Fraction]) -> bool:
        v = self.value(assignment)
        if self.relation == "ge":
            return v >= self.rhs
        if self.relation == "eq":
            return v == self.rhs
        if self.relation == "gt":
            return v > self.rhs
        raise ValueError(f"unknown relation {self.relation!r}")


@dataclass(frozen=True)
class LinearFeasibilityProblem:
    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self) -> None:
        if len(self.variables) > MAX_VARIABLES:
            raise SolverLimitError(
                f"{len(self.variables)} variables exceed the supported maximum {MAX_VARIABLES}")
        if not self.constraints:
            raise ValueError("a feasibility problem needs at least one constraint")
        for c in self.constraints:
            if len(c.coeffs) != len(self.variables):
                raise ValueError("constraint width does not match the variable count")


@dataclass(frozen=True)
class FeasibilityResult:
    status: str  # "Feasible" | "Infeasible"
    assignment: tuple[Fraction, ...] | None = None
    strict_slack: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status == "Feasible"

    def named(self, lfp: LinearFeasibilityProblem) -> dict[str, Fraction]:
        assert self.assignment is not None
        return dict(zip(lfp.variables, self.assignment))


def _pivot(tableau: list[list[Fraction]], zrow: list[Fraction], basis: list[int],
           i: int, j: int) -> None:
    pv = tableau[i][j]
    tableau[i] = [v / pv for v in tableau[i]]
    for r in range(len(tableau)):
        if r != i and tableau[r][j] != 0:
            f = tableau[r][j]
            tableau[r] = [a - f * b for a, b in zip(tableau[r], tableau[i])]
    if zrow[j] != 0:
        f = zrow[j]
        zrow[:] = [a - f * b for a, b in zip(zrow, tableau[i])]
    basis[i] = j


def _run_simplex(tableau: list[list[Fraction]], zrow: list[Fraction],
                 basis: list[int], ncols: int) -> str:
    """Minimize with Bland's rule; zrow holds c_B B^-1 A - c and the
    objective value (negated cost convention) in its last entry."""
    while True:
        enter = next((j for j in range(ncols) if zrow[j] > 0), None)
        if enter is None:
            return "optimal"
        best = None
        for r in range(len(tableau)):
            a = tableau[r][enter]
            if a > 0:
                ratio = tableau[r][-1] / a
                key = (ratio, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            return "unbounded"
        _pivot(tableau, zrow, basis, best[1], enter)


def solve_feasibility(lfp: LinearFeasibilityProblem) -> FeasibilityResult:
    """Deterministic exact solve.

    Free variables are split into nonnegative parts; every ``>`` constraint
    shares one slack variable (bounded by one) that is maximized after
    feasibility, and the strict system holds exactly when its optimum is
    positive.
    """
    nvars = len(lfp.variables)
    has_strict = any(c.relation == "gt" for c in lfp.constraints)
    # column layout: P_0..P_{n-1}, N_0..N_{n-1}, [t, u], one surplus per inequality
    ncols = 2 * nvars + (2 if has_strict else 0)
    t_col = 2 * nvars if has_strict else None
    surplus_count = sum(1 for c in lfp.constraints if c.relation in ("ge", "gt"))
    first_surplus = ncols
    ncols += surplus_count

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    surplus_used = 0
    for c in lfp.constraints:
        row = [Fraction(0)] * ncols
        for k, coeff in enumerate(c.coeffs):
            row[k] = coeff
            row[nvars + k] = -coeff
        if c.relation in ("ge", "gt"):
            if c.relation == "gt":
                row[t_col] = Fraction(-1)
            row[first_surplus + surplus_used] = Fraction(-1)
            surplus_used += 1
        rows.append(row)
        rhs.append(Fraction(c.rhs))
    if has_strict:
        row = [Fraction(0)] * ncols
        row[t_col] = Fraction(1)
        row[t_col + 1] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(1))
    for r in range(len(rows)):
        if rhs[r] < 0:
            rows[r] = [-v for v in rows[r]]
            rhs[r] = -rhs[r]

    m = len(rows)
    # phase 1: artificial identity basis, minimize the artificial sum
    tableau = [rows[i] + [Fraction(1) if k == i else Fraction(0) for k in range(m)]
               + [rhs[i]] for i in range(m)]
    basis = [ncols + i for i in range(m)]
    width = ncols + m
    zrow = [Fraction(0)] * (width + 1)
    for j in range(ncols):
        zrow[j] = sum(tableau[i][j] for i in range(m))
    zrow[-1] = sum(rhs)
    if _run_simplex(tableau, zrow, basis, ncols) != "optimal":
        raise RuntimeError("phase-1 simplex cannot be unbounded")
    if zrow[-1] != 0:
        return FeasibilityResult("Infeasible")

    # drive leftover artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= ncols:
            enter = next((j for j in range(ncols) if tableau[i][j] != 0), None)
            if enter is None:
                continue  # redundant row
            _pivot(tableau, zrow, basis, i, enter)
        keep.append(i)
    tableau = [tableau[i][:ncols] + [tableau[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    if has_strict:
        # phase 2: maximize t, i.e. minimize -t
        cost = [Fraction(0)] * ncols
        cost[t_col] = Fraction(-1)
        zrow = [Fraction(0)] * (ncols + 1)
        for j in range(ncols + 1):
            col = [tableau[i][j] for i in range(len(tableau))]
            zrow[j] = sum(cost[basis[i]] * col[i] for i in range(len(tableau)))
        for j in range(ncols):
            zrow[j] -= cost[j]
        if _run_simplex(tableau, zrow, basis, ncols) != "optimal":
            raise RuntimeError("bounded strict slack cannot be unbounded")

    values = [Fraction(0)] * ncols
    for i, b in enumerate(basis):
        values[b] = tableau[i][-1]
    assignment = tuple(values[k] - values[nvars + k] for k in range(nvars))
    slack = values[t_col] if has_strict else None
    if has_strict and slack <= 0:
        return FeasibilityResult("Infeasible", strict_slack=slack)
    return FeasibilityResult("Feasible", assignment, slack)


# ---------------------------------------------------------------------------
# certificates and corrections
# ---------------------------------------------------------------------------

SCALE_FIXING_LABEL = "scale-fixing"


@dataclass(frozen=True)
class MultiplierCertificate:
    """Exact multiplier pair with per-constraint residuals."""

    ystar: RationalVector
    zstar: RationalVector
    residuals: tuple[Fraction, ...]
    mode: str
    lfp: LinearFeasibilityProblem

    def assignment(self) -> tuple[Fraction, ...]:
        return tuple(self.ystar.coords) + tuple(self.zstar.coords)

    def verify(self, skip_scale_fixing: bool = False,
               scale: Fraction | int = 1) -> bool:
        """Re-check every constraint exactly; positive rescaling may skip the
        scale-fixing equality, which is the only non-homogeneous row."""
        s = as_fraction(scale)
        if s <= 0:
            raise ValueError("certificates only rescale by positive rationals")
        assignment = tuple(s * v for v in self.assignment())
        for c in self.lfp.constraints:
            if skip_scale_fixing and c.label == SCALE_FIXING_LABEL:
                continue
            if not c.holds(assignment):
                return False
        if all(v == 0 for v in assignment):
            return False
        return True

    def __str__(self) -> str:
        return f"ystar={self.ystar} zstar={self.zstar}"


def _certificate(lfp: LinearFeasibilityProblem, result: FeasibilityResult,
                 y_dim: int, mode: str) -> MultiplierCertificate:
    assert result.assignment is not None
    ystar = RationalVector(result.assignment[:y_dim])
    zstar = RationalVector(result.assignment[y_dim:])
    residuals = tuple(c.value(result.assignment) - c.rhs for c in lfp.constraints)
    return MultiplierCertificate(ystar, zstar, residuals, mode, lfp)


@dataclass(frozen=True)
class CorrectionPair:
    """Interior shift pair (alpha, beta) for the corrected sufficient mode."""

    alpha: RationalVector
    beta: RationalVector

    @classmethod
    def checked(cls, alpha: RationalVector, beta: RationalVector,
                K: PolyhedralCone, D: PolyhedralCone) -> "CorrectionPair":
        if not cone_contains(K, alpha, strict=True):
            raise ValueError("alpha is not strictly interior to the objective cone")
        if not cone_contains(D, beta, strict=True):
            raise ValueError("beta is not strictly interior to the constraint cone")
        return cls(alpha, beta)


def default_corrections(K: PolyhedralCone, D: PolyhedralCone) -> list[CorrectionPair]:
    """Interior samples (w_K, w_D) / 2^k for k = 0..3."""
    wk = K.interior_point()
    wd = D.interior_point()
    return [
        CorrectionPair.checked(wk.scale(Fraction(1, 2 ** k)), wd.scale(Fraction(1, 2 ** k)), K, D)
        for k in range(4)
    ]


# ---------------------------------------------------------------------------
# shared row construction
# ---------------------------------------------------------------------------


def _pad(coeff_y: RationalVector | None, coeff_z: RationalVector | None,
         y_dim: int, z_dim: int) -> tuple[Fraction, ...]:
    ys = tuple(coeff_y.coords) if coeff_y is not None else (Fraction(0),) * y_dim
    zs = tuple(coeff_z.coords) if coeff_z is not None else (Fraction(0),) * z_dim
    return ys + zs


def _dual_rows(K: PolyhedralCone, D: PolyhedralCone) -> list[Constraint]:
    y_dim, z_dim = K.dim, D.dim
    rows = [Constraint(_pad(g, None, y_dim, z_dim), "ge", Fraction(0), "ystar-dual-cone")
            for g in K.generators]
    rows += [Constraint(_pad(None, g, y_dim, z_dim), "ge", Fraction(0), "zstar-dual-cone")
             for g in D.generators]
    return rows


def _scale_fixing_row(K: PolyhedralCone, D: PolyhedralCone) -> Constraint:
    return Constraint(_pad(K.interior_point(), D.interior_point(), K.dim, D.dim),
                      "eq", Fraction(1), SCALE_FIXING_LABEL)


def _ystar_strict_rows(K: PolyhedralCone, D: PolyhedralCone, target: str) -> list[Constraint]:
    """Nonzero / strict-polar side conditions on ystar via the shared slack."""
    y_dim, z_dim = K.dim, D.dim
    if target == TARGET_WEAK:
        return [Constraint(_pad(K.interior_point(), None, y_dim, z_dim), "gt",
                           Fraction(0), "ystar-nonzero")]
    if target == TARGET_PROPER:
        rows = [Constraint(_pad(b, None, y_dim, z_dim), "eq", Fraction(0),
                           "ystar-vanishes-on-lineality")
                for b in K.lineality_basis]
        rows += [Constraint(_pad(g, None, y_dim, z_dim), "gt", Fraction(0),
                            "ystar-strict-polar")
                 for g in K.generators if not K.contains(-g)]
        return rows
    raise ValueError(f"unknown target {target!r}")


def _grid_rows(entries: list[tuple[RationalVector, RationalVector, str]],
               K: PolyhedralCone, D: PolyhedralCone) -> list[Constraint]:
    """Nonnegativity rows, with exact pruning and deduplication.

    Rows whose coefficient vectors lie in the primal cones are implied by
    the dual-cone constraints and are dropped; zero rows are trivially true;
    homogeneous rows equal up to positive scaling collapse to one.
    """
    y_dim, z_dim = K.dim, D.dim
    out: list[Constraint] = []
    seen: set[tuple[Fraction, ...]] = set()
    for coeff_y, coeff_z, label in entries:
        coeffs = _pad(coeff_y, coeff_z, y_dim, z_dim)
        if all(v == 0 for v in coeffs):
            continue
        if cone_contains(K, coeff_y) and cone_contains(D, coeff_z):
            continue
        key = RationalVector(coeffs).primitive().coords
        if key in seen:
            continue
        seen.add(key)
        out.append(Constraint(coeffs, "ge", Fraction(0), label))
    return out


def _variables(y_dim: int, z_dim: int) -> tuple[str, ...]:
    return tuple(f"y{i}" for i in range(y_dim)) + tuple(f"z{i}" for i in range(z_dim))


# ---------------------------------------------------------------------------
# the convexlike alternative
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlternativeOutcome:
    kind: str  # "SolutionExists" | "Multipliers" | "GridGap"
    x: RationalVector | None = None
    certificate: MultiplierCertificate | None = None
    warnings: tuple[str, ...] = ()


def alternative_system(Fmap: VectorMap, Gmap: VectorMap, K: PolyhedralCone,
                       D: PolyhedralCone, C_grid: GridSpec) -> AlternativeOutcome:
    """Exactly one branch: a grid point with both values strictly negative,
    or nonzero dual multipliers with all scalarized grid values nonnegative.

    Convexlike falsification on the grid only warns; the search still runs.
    An infeasible multiplier system with no grid solution is surfaced as
    GridGap, which cannot happen when the strict system is insoluble over
    the whole convex domain rather than merely on the grid.
    """
    warnings = []
    for vmap, cone, name in ((Fmap, K, "F"), (Gmap, D, "G")):
        verdict = check_convexlike(vmap, cone, C_grid)
        if verdict.falsified:
            x1, x2, lam = verdict.witness
            warnings.append(
                f"map {name} is not convexlike on the grid "
                f"(witness {x1}, {x2}, lambda={format_rational(lam)})")
    pts = C_grid.points(extra=Fmap.exception_points() + Gmap.exception_points())
    for x in pts:
        if cone_contains(K, -Fmap.evaluate(x), strict=True) and \
                cone_contains(D, -Gmap.evaluate(x), strict=True):
            return AlternativeOutcome("SolutionExists", x=x, warnings=tuple(warnings))
    entries = [(Fmap.evaluate(x), Gmap.evaluate(x), f"value-row x={x}") for x in pts]
    constraints = _dual_rows(K, D) + [_scale_fixing_row(K, D)] + _grid_rows(entries, K, D)
    lfp = LinearFeasibilityProblem(_variables(K.dim, D.dim), tuple(constraints))
    result = solve_feasibility(lfp)
    if not result.feasible:
        return AlternativeOutcome("GridGap", warnings=tuple(warnings))
    return AlternativeOutcome(
        "Multipliers", certificate=_certificate(lfp, result, K.dim, "alternative"),
        warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# sufficient conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SufficientOutcome:
    kind: str  # "AllCandidatesCertified" | "FailedFor"
    certificates: tuple[MultiplierCertificate, ...] = ()
    failed_T: LinearOperator | None = None
    failed_L: LinearOperator | None = None
    failed_correction: CorrectionPair | None = None

    @property
    def certified(self) -> bool:
        return self.kind == "AllCandidatesCertified"


def _local_points(problem: DCProblem, U: NeighborhoodSpec, grid: GridSpec) -> list[RationalVector]:
    return [x for x in problem.certification_points(grid)
            if U.contains(x, problem.xbar)]


def sufficient_condition(problem: DCProblem,
                         candidates_T: Sequence[LinearOperator],
                         candidates_L: Sequence[LinearOperator],
                         corrections: Sequence[CorrectionPair] | None,
                         target: str, mode: str,
                         U: NeighborhoodSpec, grid: GridSpec) -> SufficientOutcome:
    """Certify the multiplier hypotheses for every candidate pair (and, in
    corrected mode, every correction pair), or report the first failure.

    Corrected mode subtracts the interior pair from the candidate operators,
    which is plain vector arithmetic only over a one-dimensional domain, so
    that mode requires x_dim = 1.  Legacy mode is the corrections-free
    variant and supports any domain dimension.
    """
    if mode not in (MODE_CORRECTED, MODE_LEGACY):
        raise ValueError(f"unknown mode {mode!r}")
    if target not in (TARGET_WEAK, TARGET_PROPER):
        raise ValueError(f"unknown target {target!r}")
    if not candidates_T or not candidates_L:
        raise ValueError("candidate operator lists must be nonempty")
    if mode == MODE_CORRECTED and problem.x_dim != 1:
        raise ValueError("corrected mode is defined for a one-dimensional domain only")
    if mode == MODE_CORRECTED:
        pairs: list[CorrectionPair | None] = list(
            corrections if corrections is not None
            else default_corrections(problem.K, problem.D))
        for p in pairs:
            CorrectionPair.checked(p.alpha, p.beta, problem.K, problem.D)
    else:
        pairs = [None]

    pts = _local_points(problem, U, grid)
    xbar = problem.xbar
    F_base, H_base = problem.F.evaluate(xbar), problem.H.evaluate(xbar)
    comp_slack = H_base - problem.S.evaluate(xbar)
    base_rows = _dual_rows(problem.K, problem.D) + [
        Constraint(_pad(None, comp_slack, problem.y_dim, problem.z_dim),
                   "eq", Fraction(0), "complementarity"),
        _scale_fixing_row(problem.K, problem.D),
    ] + _ystar_strict_rows(problem.K, problem.D, target)

    certificates = []
    for T in candidates_T:
        for L in candidates_L:
            for corr in pairs:
                entries = []
                for x in pts:
                    step = x - xbar
                    if corr is None:
                        moved_y = T.apply(step)
                        moved_z = L.apply(step)
                    else:
                        moved_y = (T.as_vector() - corr.alpha).scale(step[0])
                        moved_z = (L.as_vector() - corr.beta).scale(step[0])
                    coeff_y = problem.F.evaluate(x) - F_base - moved_y
                    coeff_z = problem.H.evaluate(x) - H_base - moved_z
                    entries.append((coeff_y, coeff_z, f"subgradient-row x={x}"))
                constraints = base_rows + _grid_rows(entries, problem.K, problem.D)
                lfp = LinearFeasibilityProblem(
                    _variables(problem.y_dim, problem.z_dim), tuple(constraints))
                result = solve_feasibility(lfp)
                if not result.feasible:
                    return SufficientOutcome("FailedFor", tuple(certificates),
                                             failed_T=T, failed_L=L,
                                             failed_correction=corr)
                certificates.append(
                    _certificate(lfp, result, problem.y_dim, f"sufficient-{mode}-{target}"))
    return SufficientOutcome("AllCandidatesCertified", tuple(certificates))


# ---------------------------------------------------------------------------
# necessary conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NecessaryOutcome:
    kind: str  # "Multipliers" | "InfeasibleOnGrid"
    certificate: MultiplierCertificate | None = None
    chosen_T: LinearOperator | None = None
    chosen_L: LinearOperator | None = None
    trace: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()


def _necessary_entries(problem: DCProblem, T: LinearOperator, L: LinearOperator,
                       pts: Sequence[RationalVector]):
    xbar = problem.xbar
    F_base, H_base = problem.F.evaluate(xbar), problem.H.evaluate(xbar)
    entries = []
    for x in pts:
        step = x - xbar
        coeff_y = problem.F.evaluate(x) - F_base + problem.eps - T.apply(step)
        coeff_z = problem.H.evaluate(x) - H_base - L.apply(step)
        entries.append((coeff_y, coeff_z, f"subgradient-row x={x}"))
    return entries


def necessary_condition(problem: DCProblem,
                        candidates_T: Sequence[LinearOperator],
                        candidates_L: Sequence[LinearOperator],
                        target: str, mode: str,
                        U: NeighborhoodSpec, grid: GridSpec) -> NecessaryOutcome:
    """Search the candidate pairs for a multiplier certificate.

    The scalarized subgradient rows quantify over the grid of U intersect C
    (the indicator term realized by domain restriction).  Legacy mode adds
    the complementarity equality.  The proper target tries the ystar = 0
    branch first, then the strict-polar branch.
    """
    if mode not in (MODE_CORRECTED, MODE_LEGACY):
        raise ValueError(f"unknown mode {mode!r}")
    if target not in (TARGET_WEAK, TARGET_PROPER):
        raise ValueError(f"unknown target {target!r}")
    if not candidates_T or not candidates_L:
        raise ValueError("candidate operator lists must be nonempty")

    warnings = []
    minimality = check_eps_weak_local_min(problem, U, grid)
    if not minimality.certified:
        warnings.append(
            f"base point is not certified weak-minimal on the grid "
            f"(witness {minimality.witness})")

    pts = _local_points(problem, U, grid)
    y_dim, z_dim = problem.y_dim, problem.z_dim
    comp_slack = problem.H.evaluate(problem.xbar) - problem.S.evaluate(problem.xbar)
    comp_row = Constraint(_pad(None, comp_slack, y_dim, z_dim), "eq", Fraction(0),
                          "complementarity")
    scale_row = _scale_fixing_row(problem.K, problem.D)
    dual = _dual_rows(problem.K, problem.D)

    def branches() -> list[list[Constraint]]:
        if target == TARGET_WEAK:
            return [[]]
        y_zero = [Constraint(_pad(RationalVector.of(*([0] * i + [1] + [0] * (y_dim - i - 1))),
                                  None, y_dim, z_dim), "eq", Fraction(0), "ystar-zero")
                  for i in range(y_dim)]
        return [y_zero, _ystar_strict_rows(problem.K, problem.D, TARGET_PROPER)]

    def solve_for(T: LinearOperator, L: LinearOperator, with_comp: bool,
                  extra: list[Constraint]) -> tuple[LinearFeasibilityProblem, FeasibilityResult]:
        rows = list(dual)
        if with_comp:
            rows.append(comp_row)
        rows.append(scale_row)
        rows.extend(extra)
        rows.extend(_grid_rows(_necessary_entries(problem, T, L, pts),
                               problem.K, problem.D))
        lfp = LinearFeasibilityProblem(_variables(y_dim, z_dim), tuple(rows))
        return lfp, solve_feasibility(lfp)

    with_comp = (mode == MODE_LEGACY)
    for T in candidates_T:
        for L in candidates_L:
            for extra in branches():
                lfp, result = solve_for(T, L, with_comp, extra)
                if result.feasible:
                    return NecessaryOutcome(
                        "Multipliers",
                        certificate=_certificate(lfp, result, y_dim, f"necessary-{mode}-{target}"),
                        chosen_T=T, chosen_L=L, warnings=tuple(warnings))

    trace: list[str] = []
    if mode == MODE_LEGACY:
        # mechanized diagnosis for the shipped counterexample shape
        if cone_contains(problem.D, -comp_slack, strict=True):
            trace.append(
                "complementarity <zstar, (H-S)(xbar)> = 0 forces zstar = 0 "
                "(the constraint slack is strictly interior to -D)")
            z_zero = [Constraint(_pad(None, RationalVector.of(*([0] * i + [1] + [0] * (z_dim - i - 1))),
                                      y_dim, z_dim), "eq", Fraction(0), "zstar-zero")
                      for i in range(z_dim)]
            T, L = candidates_T[0], candidates_L[0]
            for extra in branches():
                _, res = solve_for(T, L, False, extra + z_zero)
                if res.feasible:
                    break
            else:
                trace.append(
                    "with zstar = 0 the subgradient rows admit no nonzero ystar: "
                    "ystar in K*\\{0} is impossible")
    if not trace:
        trace.append("multiplier system infeasible on the grid for every candidate pair")
    return NecessaryOutcome("InfeasibleOnGrid", trace=tuple(trace), warnings=tuple(warnings))
