"""Built-in scenarios and their report pipelines.

Each scenario loads a shipped problem file and runs a fixed sequence of
checks whose outcomes are the interesting content: the quartic/quadratic
instance shows the uncorrected sufficient hypotheses certifying at a point
that weak-minimality falsifies, and the exceptional-point instance shows a
certified weak minimum where the complementarity-carrying necessary system
is infeasible while the complementarity-free one yields multipliers.
"""

from __future__ import annotations

from importlib.resources import files

from .cones import format_rational
from .dissipativity import check_approx_pseudo_dissipative, gradient_field
from .multipliers import (
    MODE_CORRECTED,
    MODE_LEGACY,
    TARGET_WEAK,
    MultiplierCertificate,
    necessary_condition,
    sufficient_condition,
)
from .pareto import NeighborhoodSpec, check_eps_weak_local_min
from .problem import GridSpec, check_cone_convex, check_convexlike, feasible_contains
from .problemfile import ParsedProblem, parse_problem
from .report import CheckResult, Report, rat_str, vec_strs

SCENARIO_FILES = {
    "example-3-1": "example_3_1.problem",
    "example-4-1": "example_4_1.problem",
}


def scenario_names() -> list[str]:
    return sorted(SCENARIO_FILES)


def load_scenario_problem(name: str) -> ParsedProblem:
    if name not in SCENARIO_FILES:
        raise ValueError(f"unknown scenario {name!r}; expected one of {scenario_names()}")
    text = files("dcverify").joinpath("problems", SCENARIO_FILES[name]).read_text("utf-8")
    return parse_problem(text)


def _certificate_data(cert: MultiplierCertificate) -> dict:
    return {"ystar": vec_strs(cert.ystar), "zstar": vec_strs(cert.zstar)}


def omega_result(parsed: ParsedProblem, grid: GridSpec) -> CheckResult:
    problem = parsed.problem
    pts = problem.certification_points(grid)
    feasible = [x for x in pts if feasible_contains(problem, x)]
    xbar_ok = feasible_contains(problem, problem.xbar)
    data = {
        "feasible": str(len(feasible)),
        "total": str(len(pts)),
        "xbar_feasible": "true" if xbar_ok else "false",
    }
    if feasible:
        data["min"] = [format_rational(c) for c in min(f.coords for f in feasible)]
        data["max"] = [format_rational(c) for c in max(f.coords for f in feasible)]
    return CheckResult("feasible-set", "CertifiedOnGrid" if xbar_ok else "Falsified",
                       params={"grid": str(grid.points_per_axis)}, data=data)


def convexity_results(parsed: ParsedProblem, grid: GridSpec) -> tuple[list[CheckResult], list[str]]:
    problem = parsed.problem
    results: list[CheckResult] = []
    flags: list[str] = []
    falsified: dict[str, tuple] = {}
    for name, vmap, cone in (("F", problem.F, problem.K), ("G", problem.G, problem.K),
                             ("H", problem.H, problem.D), ("S", problem.S, problem.D)):
        verdict = check_cone_convex(vmap, cone, grid)
        data = {}
        if verdict.falsified:
            x1, x2, lam = verdict.witness
            data = {"witness_x1": vec_strs(x1), "witness_x2": vec_strs(x2),
                    "witness_lambda": rat_str(lam)}
            falsified[name] = verdict.witness
        results.append(CheckResult(f"cone-convexity {name}", verdict.status,
                                   params={"grid": str(grid.points_per_axis)}, data=data))
    for name, vmap, cone in (("F", problem.F, problem.K), ("H", problem.H, problem.D)):
        verdict = check_convexlike(vmap, cone, grid)
        data = {}
        if verdict.falsified:
            x1, x2, lam = verdict.witness
            data = {"witness_x1": vec_strs(x1), "witness_x2": vec_strs(x2),
                    "witness_lambda": rat_str(lam)}
        results.append(CheckResult(f"convexlike {name}", verdict.status,
                                   params={"grid": str(grid.points_per_axis)}, data=data))
        if name in falsified and not verdict.falsified:
            x1, x2, lam = falsified[name]
            flags.append(
                f"map {name}: declared cone-convexity falsified at witness "
                f"({x1}, {x2}, lambda={rat_str(lam)}), but the convexlike check "
                f"passes, so the convexlike-based necessary conditions still apply")
    for name in falsified:
        if name not in ("F", "H"):
            x1, x2, lam = falsified[name]
            flags.append(
                f"map {name}: declared cone-convexity falsified at witness "
                f"({x1}, {x2}, lambda={rat_str(lam)})")
    return results, flags


def dissipativity_results(parsed: ParsedProblem, grid: GridSpec) -> list[CheckResult]:
    problem = parsed.problem
    results = []
    for label, vmap, cone in (("grad-G", problem.G, problem.K),
                              ("grad-S", problem.S, problem.D)):
        field = gradient_field(vmap)
        verdict = check_approx_pseudo_dissipative(field, problem.xbar, cone,
                                                  grid_template=grid)
        data = {
            "metric": "max-norm",
            "eps_samples": [
                {"eps": vec_strs(ev.eps),
                 "certified_radius": rat_str(ev.certified_radius)
                 if ev.certified_radius is not None else "none"}
                for ev in verdict.evidence
            ],
        }
        if verdict.falsified:
            data["witness"] = vec_strs(verdict.witness)
            data["failing_eps"] = vec_strs(verdict.eps)
        results.append(CheckResult(f"dissipativity {label}", verdict.status,
                                   params={"grid": str(grid.points_per_axis)}, data=data))
    return results


def weak_min_result(parsed: ParsedProblem, U: NeighborhoodSpec, grid: GridSpec) -> CheckResult:
    verdict = check_eps_weak_local_min(parsed.problem, U, grid)
    data = {"feasible_points_checked": str(verdict.checked)}
    if not verdict.certified:
        data["witness_x"] = vec_strs(verdict.witness)
        data["witness_value"] = vec_strs(verdict.witness_value)
    return CheckResult("weak-min", verdict.status,
                       params={"grid": str(grid.points_per_axis),
                               "radius": rat_str(U.radius)},
                       data=data)


def sufficient_result(parsed: ParsedProblem, mode: str, U: NeighborhoodSpec,
                      grid: GridSpec) -> CheckResult:
    outcome = sufficient_condition(parsed.problem, parsed.candidates_T,
                                   parsed.candidates_L, parsed.correction_pairs(),
                                   TARGET_WEAK, mode, U, grid)
    params = {"mode": mode, "target": TARGET_WEAK,
              "grid": str(grid.points_per_axis), "radius": rat_str(U.radius),
              "candidates_T": [str(T) for T in parsed.candidates_T],
              "candidates_L": [str(L) for L in parsed.candidates_L]}
    if outcome.certified:
        data = {"certificates": [_certificate_data(c) for c in outcome.certificates]}
    else:
        data = {
            "failed_T": str(outcome.failed_T),
            "failed_L": str(outcome.failed_L),
        }
        if outcome.failed_correction is not None:
            data["failed_alpha"] = vec_strs(outcome.failed_correction.alpha)
            data["failed_beta"] = vec_strs(outcome.failed_correction.beta)
    return CheckResult(f"sufficient-{mode}", outcome.kind, params=params, data=data)


def necessary_result(parsed: ParsedProblem, mode: str, U: NeighborhoodSpec,
                     grid: GridSpec) -> CheckResult:
    outcome = necessary_condition(parsed.problem, parsed.candidates_T,
                                  parsed.candidates_L, TARGET_WEAK, mode, U, grid)
    params = {"mode": mode, "target": TARGET_WEAK,
              "grid": str(grid.points_per_axis), "radius": rat_str(U.radius),
              "candidates_T": [str(T) for T in parsed.candidates_T],
              "candidates_L": [str(L) for L in parsed.candidates_L]}
    if outcome.kind == "Multipliers":
        data = _certificate_data(outcome.certificate)
        data["chosen_T"] = str(outcome.chosen_T)
        data["chosen_L"] = str(outcome.chosen_L)
    else:
        data = {"trace": list(outcome.trace)}
    if outcome.warnings:
        data["warnings"] = list(outcome.warnings)
    return CheckResult(f"necessary-{mode}", outcome.kind, params=params, data=data)


def run_scenario(name: str) -> Report:
    """Execute the fixed pipeline for a shipped scenario."""
    parsed = load_scenario_problem(name)
    problem = parsed.problem
    grid = GridSpec(problem.C, parsed.options.grid_points)
    U = NeighborhoodSpec(parsed.options.radius)
    report = Report(
        command=f"scenario {name}",
        problem=SCENARIO_FILES[name],
        options={"grid": str(parsed.options.grid_points),
                 "radius": rat_str(parsed.options.radius),
                 "format_note": "rationals rendered as p/q"},
    )
    report.results.append(omega_result(parsed, grid))
    conv_results, conv_flags = convexity_results(parsed, grid)
    report.results.extend(conv_results)
    report.flags.extend(conv_flags)
    if name == "example-3-1":
        report.results.extend(dissipativity_results(parsed, grid))
        report.results.append(sufficient_result(parsed, MODE_LEGACY, U, grid))
        report.results.append(weak_min_result(parsed, U, grid))
        report.results.append(sufficient_result(parsed, MODE_CORRECTED, U, grid))
    else:
        report.results.append(weak_min_result(parsed, U, grid))
        report.results.append(necessary_result(parsed, MODE_LEGACY, U, grid))
        report.results.append(necessary_result(parsed, MODE_CORRECTED, U, grid))
    return report
