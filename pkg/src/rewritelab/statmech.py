"""Gibbs sums over reduction walks and their zero-temperature limit.

Walk sums are accumulated in the log domain so large ``beta * K`` values
do not underflow; the linear values are exposed alongside.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .core import MultiSetObject, canonicalize
from .graph import ReductionGraph

DIVERGENCE_PATIENCE = 10


class WalkError(ValueError):
    """Raised for edge sequences that are not walks from the start vertex."""


# --------------------------------------------------------------------------
# fitness functions


@dataclass(frozen=True)
class Const:
    a: float = 0.0

    def __call__(self, obj: MultiSetObject) -> float:
        return float(self.a)


@dataclass(frozen=True)
class Count:
    """Rewards copies of ``target``: F(v) = -c * multiplicity."""

    target: str
    c: float = 1.0

    def __call__(self, obj: MultiSetObject) -> float:
        return -self.c * obj.count(self.target)


@dataclass(frozen=True)
class Dist:
    """F(v) = c * |v symmetric-difference target|, multiplicities counted."""

    target: MultiSetObject
    c: float = 1.0

    def __call__(self, obj: MultiSetObject) -> float:
        a, b = obj.as_counter(), self.target.as_counter()
        diff = sum(((a - b) + (b - a)).values())
        return self.c * diff


Fitness = Union[Const, Count, Dist, Callable[[MultiSetObject], float]]


def _fitness_vector(graph: ReductionGraph, fitness: Fitness) -> np.ndarray:
    return np.array([float(fitness(v)) for v in graph.vertices])


# --------------------------------------------------------------------------
# summation modes


@dataclass(frozen=True)
class Truncated:
    """Sum walks of length at most ``max_walk_len`` exactly."""

    max_walk_len: int

    def __post_init__(self):
        if self.max_walk_len < 1:
            raise ValueError("max_walk_len must be positive")


@dataclass(frozen=True)
class Converge:
    """Add walk-length layers until the largest increment drops below tolerance."""

    tolerance: float = 1e-12
    max_iterations: int = 10_000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


SumMode = Union[Truncated, Converge]


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not (beta > 0 and math.isfinite(beta)):
        raise ValueError(f"beta must be positive and finite, got {beta!r}")
    return beta


@dataclass
class WalkSums:
    log_sums: np.ndarray
    iterations: int
    diverged: bool

    @property
    def sums(self) -> np.ndarray:
        return np.exp(self.log_sums)


def _log_step(log_x: np.ndarray, src: np.ndarray, tgt: np.ndarray, log_w: np.ndarray, n: int) -> np.ndarray:
    """One walk-length layer: log of (x @ W), grouped log-sum-exp by target."""
    vals = log_x[src] + log_w
    peak = np.full(n, -np.inf)
    np.maximum.at(peak, tgt, vals)
    finite = np.isfinite(peak)
    shifted = np.exp(vals - np.where(finite, peak, 0.0)[tgt])
    total = np.bincount(tgt, weights=shifted, minlength=n)
    out = np.full(n, -np.inf)
    out[finite] = peak[finite] + np.log(total[finite])
    return out


def log_walk_sums(graph: ReductionGraph, beta: float, mode: SumMode) -> WalkSums:
    beta = _check_beta(beta)
    n = graph.num_vertices
    src = np.array([e.source for e in graph.edges], dtype=np.intp)
    tgt = np.array([e.target for e in graph.edges], dtype=np.intp)
    log_w = -beta * np.array([e.weight for e in graph.edges], dtype=float)

    layer = np.full(n, -np.inf)
    layer[0] = 0.0  # the empty walk
    acc = layer.copy()

    if isinstance(mode, Truncated):
        for k in range(mode.max_walk_len):
            if not len(src):
                break
            layer = _log_step(layer, src, tgt, log_w, n)
            acc = np.logaddexp(acc, layer)
        return WalkSums(acc, mode.max_walk_len, False)

    if not isinstance(mode, Converge):
        raise TypeError(f"unknown summation mode {mode!r}")
    log_tol = math.log(mode.tolerance)
    prev_norm = math.inf
    rising = 0
    for it in range(1, mode.max_iterations + 1):
        if not len(src):
            return WalkSums(acc, it - 1, False)
        layer = _log_step(layer, src, tgt, log_w, n)
        acc = np.logaddexp(acc, layer)
        norm = float(layer.max())
        if norm < log_tol:
            return WalkSums(acc, it, False)
        rising = rising + 1 if norm >= prev_norm else 0
        prev_norm = norm
        if rising >= DIVERGENCE_PATIENCE:
            return WalkSums(acc, it, True)
    return WalkSums(acc, mode.max_iterations, True)


def walk_sums(graph: ReductionGraph, beta: float, mode: SumMode) -> tuple[np.ndarray, bool]:
    """Per-vertex sum of exp(-beta * action) over walks from vertex 0.

    Returns the vector and the divergence flag.  Divergence is reported,
    never raised; the partial sums accumulated so far are returned.
    """
    res = log_walk_sums(graph, beta, mode)
    return res.sums, res.diverged


# --------------------------------------------------------------------------
# actions and partition sums


def path_action(graph: ReductionGraph, path: Sequence[int]) -> float:
    """Sum of edge weights along a walk given as edge indices."""
    at = 0
    total = 0.0
    for k in path:
        e = graph.edges[k]
        if e.source != at:
            raise WalkError(f"edge {k} leaves vertex {e.source}, walk is at {at}")
        total += e.weight
        at = e.target
    return total


@dataclass
class PartitionResult:
    Z: float
    log_Z: float
    per_vertex_walk_sum: np.ndarray
    log_walk_sum: np.ndarray
    fitness: np.ndarray
    iterations: int
    diverged: bool
    truncated: bool = False

    @property
    def num_vertices(self) -> int:
        return len(self.per_vertex_walk_sum)


def _logsumexp(values: np.ndarray) -> float:
    finite = values[np.isfinite(values)]
    if not len(finite):
        return -math.inf
    peak = finite.max()
    return float(peak + math.log(np.exp(finite - peak).sum()))


def partition_function(graph: ReductionGraph, fitness: Fitness, beta: float, mode: SumMode) -> PartitionResult:
    beta = _check_beta(beta)
    ws = log_walk_sums(graph, beta, mode)
    f = _fitness_vector(graph, fitness)
    log_z = _logsumexp(-beta * f + ws.log_sums)
    return PartitionResult(
        Z=math.exp(log_z),
        log_Z=log_z,
        per_vertex_walk_sum=ws.sums,
        log_walk_sum=ws.log_sums,
        fitness=f,
        iterations=ws.iterations,
        diverged=ws.diverged,
        truncated=graph.truncated,
    )


@dataclass
class MinCost:
    distances: list[float]
    best_vertex: int
    best_value: float


def shortest_actions(graph: ReductionGraph) -> list[float]:
    """Dijkstra from vertex 0 over positive edge weights; unreachable -> inf."""
    n = graph.num_vertices
    adj = graph.out_edges()
    dist = [math.inf] * n
    if not n:
        return dist
    dist[0] = 0.0
    heap = [(0.0, 0)]
    done = [False] * n
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for k in adj[u]:
            e = graph.edges[k]
            nd = d + e.weight
            if nd < dist[e.target]:
                dist[e.target] = nd
                heapq.heappush(heap, (nd, e.target))
    return dist


def min_total_cost(graph: ReductionGraph, fitness: Fitness) -> MinCost:
    """Zero-temperature limit: minimise F(v) + (cheapest action to reach v)."""
    dist = shortest_actions(graph)
    best_vertex, best_value = 0, math.inf
    for i, (v, d) in enumerate(zip(graph.vertices, dist)):
        if math.isinf(d):
            continue
        value = float(fitness(v)) + d
        if value < best_value:
            best_vertex, best_value = i, value
    return MinCost(dist, best_vertex, best_value)


@dataclass
class SweepRow:
    beta: float
    Z: float
    free_energy: float
    diverged: bool


def beta_sweep(graph: ReductionGraph, fitness: Fitness, betas: Sequence[float], mode: SumMode) -> list[SweepRow]:
    rows = []
    for beta in betas:
        res = partition_function(graph, fitness, beta, mode)
        rows.append(SweepRow(float(beta), res.Z, -res.log_Z / float(beta), res.diverged))
    return rows


def dist_target(*words: str, c: float = 1.0) -> Dist:
    """Shorthand for a :class:`Dist` fitness towards a multiset of words."""
    return Dist(canonicalize((w, 1) for w in words), c)
