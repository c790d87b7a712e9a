"""Bounded breadth-first construction of reduction graphs, plus DOT export."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .core import Genome, MultiSetObject, Site, enumerate_applications, format_weight, render_object


class BoundsError(ValueError):
    pass


@dataclass(frozen=True)
class ExplorationBounds:
    max_depth: int = 10
    max_vertices: int = 10_000
    max_word_len: int = 64
    max_total_symbols: int = 256

    def __post_init__(self):
        if self.max_depth < 0:
            raise BoundsError("max_depth must be >= 0")
        for name in ("max_vertices", "max_word_len", "max_total_symbols"):
            if getattr(self, name) < 1:
                raise BoundsError(f"{name} must be >= 1")

    def admits(self, obj: MultiSetObject) -> bool:
        return obj.max_word_len() <= self.max_word_len and obj.total_symbols() <= self.max_total_symbols


class Edge(NamedTuple):
    source: int
    target: int
    rule: str
    site: Site | None
    weight: float


@dataclass
class ReductionGraph:
    """Vertices are canonical objects (index 0 is the start object).

    ``depth[i]`` is the BFS layer at which vertex ``i`` was first reached.
    ``truncated`` is set when some bound kept a reachable object out.
    """

    vertices: list[MultiSetObject]
    edges: list[Edge]
    depth: list[int]
    truncated: bool = False
    _index: dict[MultiSetObject, int] = field(default=None, init=False, repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> ReductionGraph:
        """Hand-made graph on ``n`` placeholder vertices.

        ``edges`` holds ``(source, target, weight)`` triples.  Handy for
        exercising the summation code on graphs no genome produces.
        """
        labels = labels or [f"v{i}" for i in range(n)]
        vertices = [MultiSetObject.of(lab) for lab in labels]
        es = [Edge(s, t, f"e{k}", None, float(w)) for k, (s, t, w) in enumerate(edges)]
        depth = _bfs_depths(n, es)
        return cls(vertices, es, depth)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def index_of(self, obj: MultiSetObject) -> int | None:
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.vertices)}
        return self._index.get(obj)

    def out_edges(self) -> list[list[int]]:
        """Edge indices leaving each vertex."""
        adj: list[list[int]] = [[] for _ in self.vertices]
        for k, e in enumerate(self.edges):
            adj[e.source].append(k)
        return adj


def _bfs_depths(n: int, edges) -> list[int]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for e in edges:
        adj[e.source].append(e.target)
    depth = [-1] * n
    if n:
        depth[0] = 0
    frontier = [0] if n else []
    while frontier:
        nxt = []
        for s in frontier:
            for t in adj[s]:
                if depth[t] < 0:
                    depth[t] = depth[s] + 1
                    nxt.append(t)
        frontier = nxt
    return depth


def build_graph(genome: Genome, v0: MultiSetObject, bounds: ExplorationBounds | None = None) -> ReductionGraph:
    """Close ``v0`` under every rule of ``genome``, layer by layer.

    Vertices in the last layer (``depth == max_depth``) still get their
    edges to already-known vertices; only new vertices are refused there.
    Words longer than ``max_word_len`` or objects heavier than
    ``max_total_symbols`` are dropped together with the edge producing them.
    """
    bounds = bounds or ExplorationBounds()
    if not bounds.admits(v0):
        raise BoundsError(f"start object {render_object(v0)} violates the bounds")

    vertices = [v0]
    depth = [0]
    index = {v0: 0}
    edges: list[Edge] = []
    truncated = False

    frontier = [0]
    layer = 0
    while frontier:
        nxt = []
        for s in frontier:
            src = vertices[s]
            for rule in genome:
                for site, result in enumerate_applications(rule, src):
                    t = index.get(result)
                    if t is None:
                        if layer >= bounds.max_depth or len(vertices) >= bounds.max_vertices:
                            truncated = True
                            continue
                        if not bounds.admits(result):
                            truncated = True
                            continue
                        t = len(vertices)
                        index[result] = t
                        vertices.append(result)
                        depth.append(layer + 1)
                        nxt.append(t)
                    edges.append(Edge(s, t, rule.name, site, rule.weight))
        frontier = nxt
        layer += 1

    graph = ReductionGraph(vertices, edges, depth, truncated)
    graph._index = index
    return graph


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: ReductionGraph, name: str = "reduction") -> str:
    lines = [f"digraph {name} {{"]
    for i, v in enumerate(graph.vertices):
        lines.append(f"  v{i} [label={_dot_quote(render_object(v))}];")
    for e in graph.edges:
        label = f"{e.rule} (K={format_weight(e.weight)})"
        lines.append(f"  v{e.source} -> v{e.target} [label={_dot_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
