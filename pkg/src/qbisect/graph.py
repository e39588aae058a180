"""Graphs, bisection encodings as XOR constraints, and the brute-force oracle.

A bisection assigns each vertex a bit (its side). Each edge ``(a, b)`` maps to
the constraint ``x[a] XOR x[b]``, so the number of ones in the constraint
vector is the cut size. Edge order in the input fixes the constraint index.

Assignments convert to integers with vertex 0 as the most significant bit,
which is also the qubit order used by the dense simulator.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import CapacityError, GraphError

ENUMERATION_CAP = 20
MODES = ("max", "min")


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        validate_graph(self.n, edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_array(self) -> np.ndarray:
        return np.array(self.edges, dtype=np.int64).reshape(-1, 2)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines.extend(f"{a} {b}" for a, b in self.edges)
        return "\n".join(lines) + "\n"


def validate_graph(n: int, edges: Sequence[tuple[int, int]], lines: Sequence[int] | None = None) -> None:
    """Raise :class:`GraphError` if ``(n, edges)`` breaks a graph invariant."""
    if n < 2 or n % 2:
        raise GraphError("odd_n", f"vertex count must be even and >= 2, got {n}")
    if not edges:
        raise GraphError("empty", "graph needs at least one edge")
    if len(edges) > n * (n - 1) // 2:
        raise GraphError("edge_count", f"{len(edges)} edges exceed n(n-1)/2 = {n * (n - 1) // 2}")
    seen: set[tuple[int, int]] = set()
    for i, (a, b) in enumerate(edges):
        line = lines[i] if lines is not None else None
        if not (0 <= a < n and 0 <= b < n):
            raise GraphError("vertex_range", f"edge ({a}, {b}) has a vertex outside [0, {n})", line)
        if a == b:
            raise GraphError("self_loop", f"self-loop on vertex {a}", line)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise GraphError("duplicate_edge", f"duplicate edge ({a}, {b})", line)
        seen.add(key)


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t, 10) for t in tokens]
    except ValueError:
        raise GraphError("malformed", f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse_graph(text: str | Iterable[str]) -> Graph:
    """Parse the edge-list format: ``n m`` header then ``m`` lines ``a b``.

    Lines starting with ``#`` and blank lines are ignored; CRLF is accepted.
    """
    if isinstance(text, str):
        raw_lines = text.splitlines()
    else:
        raw_lines = [line.rstrip("\r\n") for line in text]

    content = []
    for lineno, line in enumerate(raw_lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        content.append((lineno, stripped.split()))

    if not content:
        raise GraphError("malformed", "missing 'n m' header")
    lineno, header = content[0]
    if len(header) != 2:
        raise GraphError("malformed", "header must be 'n m'", lineno)
    n, m = _ints(header, lineno)
    if n < 2 or n % 2:
        raise GraphError("odd_n", f"vertex count must be even and >= 2, got {n}", lineno)

    edges, where = [], []
    for lineno, tokens in content[1:]:
        if len(tokens) != 2:
            raise GraphError("malformed", "edge line must be 'a b'", lineno)
        a, b = _ints(tokens, lineno)
        edges.append((a, b))
        where.append(lineno)
    if len(edges) != m:
        raise GraphError("edge_count", f"header declares {m} edges, found {len(edges)}")
    validate_graph(n, edges, where)
    return Graph(n, tuple(edges))


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_graph(fh.read())


@dataclass(frozen=True)
class Assignment:
    """Bit ``a`` is the side of vertex ``a``."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("assignment bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def is_balanced(self) -> bool:
        return 2 * sum(self.bits) == len(self.bits)

    def to_int(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value

    @classmethod
    def from_int(cls, value: int, n: int) -> Assignment:
        return cls(tuple((int(value) >> (n - 1 - i)) & 1 for i in range(n)))

    def complement(self) -> Assignment:
        return Assignment(tuple(1 - b for b in self.bits))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class ConstraintVector:
    bits: tuple[int, ...]

    @property
    def ones(self) -> int:
        return sum(self.bits)

    @property
    def zeros(self) -> int:
        return len(self.bits) - self.ones

    @property
    def m(self) -> int:
        return len(self.bits)

    def to_int(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class BisectionResult:
    assignment: Assignment
    cut: int
    optimal_value: int
    is_optimal: bool


def _as_assignment(x) -> Assignment:
    return x if isinstance(x, Assignment) else Assignment(tuple(x))


def evaluate_constraints(g: Graph, x: Assignment | Sequence[int]) -> ConstraintVector:
    x = _as_assignment(x)
    if len(x) != g.n:
        raise ValueError(f"assignment has {len(x)} bits, graph has {g.n} vertices")
    b = x.bits
    return ConstraintVector(tuple(b[a] ^ b[c] for a, c in g.edges))


def cut_size(g: Graph, x: Assignment | Sequence[int]) -> int:
    return evaluate_constraints(g, x).ones


def _check_cap(n: int, cap: int) -> None:
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    if n > cap:
        raise CapacityError(f"n = {n} exceeds the enumeration cap of {cap}")


def balanced_ints(n: int, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Balanced assignments as ascending integers (vertex 0 = MSB)."""
    _check_cap(n, cap)
    return kernels.balanced_states(n)


def enumerate_balanced(n: int, cap: int = ENUMERATION_CAP) -> list[Assignment]:
    """Every balanced assignment of ``n`` bits, in ascending integer order."""
    return [Assignment.from_int(int(v), n) for v in balanced_ints(n, cap)]


def balanced_cuts(g: Graph, cap: int = ENUMERATION_CAP) -> tuple[np.ndarray, np.ndarray]:
    """``(states, cuts)`` over all balanced assignments of ``g``."""
    states = balanced_ints(g.n, cap)
    return states, kernels.cut_sizes(states, g.edge_array(), g.n)


def brute_force_bisection(g: Graph, mode: str = "max", cap: int = ENUMERATION_CAP) -> BisectionResult:
    """Exact max- or min-bisection by enumeration.

    Ties go to the smallest assignment integer.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be 'max' or 'min', got {mode!r}")
    states, cuts = balanced_cuts(g, cap)
    idx = int(np.argmax(cuts) if mode == "max" else np.argmin(cuts))
    best = int(cuts[idx])
    return BisectionResult(Assignment.from_int(int(states[idx]), g.n), best, best, True)


def optimum_value(g: Graph, mode: str, cap: int = ENUMERATION_CAP) -> int:
    return brute_force_bisection(g, mode, cap).optimal_value


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((a, b) for a in range(n) for b in range(a + 1, n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((a, a + 1) for a in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((a, (a + 1) % n) for a in range(n)))


def random_graph(n: int, m: int, rng: np.random.Generator) -> Graph:
    """Uniformly random simple graph with exactly ``m`` edges."""
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    if not 1 <= m <= len(pairs):
        raise ValueError(f"m must be in [1, {len(pairs)}]")
    chosen = rng.choice(len(pairs), size=m, replace=False)
    return Graph(n, tuple(pairs[i] for i in sorted(chosen)))


EXAMPLE_EDGES = (
    (0, 1), (0, 2), (0, 3), (1, 2), (1, 7), (2, 3),
    (3, 4), (3, 6), (4, 5), (4, 6), (5, 7), (6, 7),
)


def example_graph() -> Graph:
    """The 8-vertex, 12-edge worked example."""
    return Graph(8, EXAMPLE_EDGES)


def n_balanced(n: int) -> int:
    return comb(n, n // 2)
