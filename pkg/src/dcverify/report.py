"""Structured reports with stable text and machine renderings.

A report is a command echo, run options, an ordered list of check results,
and discrepancy flags.  The machine rendering is JSON with every rational
as an exact ``p/q`` string; key order is sorted and list order is the
construction order, so identical inputs produce byte-identical output.
The text rendering is line oriented and equally stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .cones import RationalVector, format_rational

TOOL_NAME = "dcverify"


@dataclass
class CheckResult:
    """One verdict: name, status, stringly-typed parameters and payload."""

    name: str
    status: str
    params: dict[str, Any] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)


@dataclass
class Report:
    command: str
    problem: str
    options: dict[str, str] = field(default_factory=dict)
    results: list[CheckResult] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    def result(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(f"no result named {name!r} in this report")


def rat_str(value: Fraction | int) -> str:
    return format_rational(Fraction(value))


def vec_strs(v: RationalVector) -> list[str]:
    return [format_rational(c) for c in v.coords]


def emit_report(report: Report, format: str = "text") -> bytes:
    """Render to bytes; ``machine`` is JSON, ``text`` is line oriented."""
    if format == "machine":
        payload = {
            "tool": TOOL_NAME,
            "command": report.command,
            "problem": report.problem,
            "options": report.options,
            "results": [
                {"name": r.name, "status": r.status, "params": r.params, "data": r.data}
                for r in report.results
            ],
            "flags": report.flags,
        }
        return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8")
    if format == "text":
        return (render_text(report) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format {format!r}")


def parse_machine_report(data: bytes) -> Report:
    """Inverse of the machine rendering; emit(parse(emit(r))) is the identity."""
    payload = json.loads(data.decode("utf-8"))
    if payload.get("tool") != TOOL_NAME:
        raise ValueError("not a dcverify machine report")
    results = [
        CheckResult(r["name"], r["status"], dict(r["params"]), dict(r["data"]))
        for r in payload["results"]
    ]
    return Report(
        command=payload["command"],
        problem=payload["problem"],
        options=dict(payload["options"]),
        results=results,
        flags=list(payload["flags"]),
    )


def _flat(value: Any) -> str:
    if isinstance(value, list):
        return "(" + ", ".join(_flat(v) for v in value) + ")"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_flat(v)}" for k, v in sorted(value.items())) + "}"
    return str(value)


def render_text(report: Report) -> str:
    lines = [f"== {TOOL_NAME} {report.command}"]
    opts = " ".join(f"{k}={v}" for k, v in sorted(report.options.items()))
    lines.append(f"problem: {report.problem}" + (f" ({opts})" if opts else ""))
    for idx, r in enumerate(report.results, start=1):
        params = " ".join(f"{k}={_flat(v)}" for k, v in sorted(r.params.items()))
        head = f"[{idx}] {r.name}: {r.status}"
        if params:
            head += f" ({params})"
        lines.append(head)
        for key in sorted(r.data):
            lines.append(f"      {key} = {_flat(r.data[key])}")
    if report.flags:
        lines.append("flags:")
        for flag in report.flags:
            lines.append(f"  ! {flag}")
    return "\n".join(lines)
