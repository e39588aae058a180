"""CSV and JSON writers for traces and run results.

Trace CSV: ``r,pr_ax2,pr_target``; distribution CSV: ``r,d,mass``.
Probabilities are written with 12 significant digits. JSON keeps insertion
order and full double precision, so identical inputs give identical bytes.
"""
from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np

TRACE_HEADER = "r,pr_ax2,pr_target"
DIST_HEADER = "r,d,mass"


def _g(value: float) -> str:
    return f"{float(value):.12g}"


def trace_csv(pr_ax2: Sequence[float], pr_target: Sequence[float]) -> str:
    lines = [TRACE_HEADER]
    for r, (a, t) in enumerate(zip(pr_ax2, pr_target), start=1):
        lines.append(f"{r},{_g(a)},{_g(t)}")
    return "\n".join(lines) + "\n"


def distribution_csv(classes: Sequence[int], masses: Iterable[Sequence[float]]) -> str:
    lines = [DIST_HEADER]
    for r, row in enumerate(masses, start=1):
        for d, mass in zip(classes, row):
            lines.append(f"{r},{int(d)},{_g(mass)}")
    return "\n".join(lines) + "\n"


def emit_trace_csv(trace, path) -> None:
    """Write a :class:`~qbisect.amplify.ProbabilityTrace` (or a ``(pr_ax2, pr_target)`` pair)."""
    if isinstance(trace, tuple):
        text = trace_csv(*trace)
    else:
        text = trace_csv(trace.pr_ax2, trace.pr_target)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def emit_distribution_csv(trace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(distribution_csv(trace.classes, trace.masses))


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def result_json(result: dict) -> str:
    return json.dumps(_plain(result), indent=2, allow_nan=False) + "\n"


def emit_result_json(result: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(result_json(result))
