"""Global pairwise alignment under a mismatch/indel score, and its
counterpart as a rewriting genome of single-symbol edits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .core import Genome, MultiSetObject, canonicalize, ins, sub
from .graph import ExplorationBounds, build_graph
from .statmech import Const, min_total_cost

GAP = "-"
BRUTE_FORCE_LIMIT = 12


class AlignmentError(ValueError):
    pass


@dataclass(frozen=True)
class ScoreScheme:
    """Match 0, mismatch ``mu``, insertion/deletion ``sigma`` (lower is better)."""

    mu: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.mu >= 0:
            raise AlignmentError("mu must be nonnegative")
        if not self.sigma > 0:
            raise AlignmentError("sigma must be positive")

    def column(self, x: str, y: str) -> float:
        if x == GAP and y == GAP:
            raise AlignmentError("column with two spaces")
        if x == GAP or y == GAP:
            return self.sigma
        return 0.0 if x == y else self.mu


@dataclass(frozen=True)
class Alignment:
    top: str
    bottom: str

    def __post_init__(self):
        if len(self.top) != len(self.bottom):
            raise AlignmentError("rows of an alignment must have equal length")

    @property
    def v(self) -> str:
        return self.top.replace(GAP, "")

    @property
    def w(self) -> str:
        return self.bottom.replace(GAP, "")

    def columns(self) -> Iterator[tuple[str, str]]:
        return zip(self.top, self.bottom)

    def __str__(self) -> str:
        return f"{self.top}\n{self.bottom}"


def alignment_score(a: Alignment, scheme: ScoreScheme) -> float:
    return sum(scheme.column(x, y) for x, y in a.columns())


def _check_seq(seq: str) -> None:
    if GAP in seq:
        raise AlignmentError(f"sequence {seq!r} contains the gap symbol")


def align_dp(v: str, w: str, scheme: ScoreScheme) -> tuple[Alignment, float]:
    """Minimum-score global alignment (Needleman-Wunsch with distances).

    Ties in the traceback prefer a diagonal step, then a deletion
    (symbol of ``v`` against a gap), then an insertion.
    """
    _check_seq(v)
    _check_seq(w)
    n, m = len(v), len(w)
    mu, sigma = scheme.mu, scheme.sigma
    cost = [[0.0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        cost[i][0] = cost[i - 1][0] + sigma
    for j in range(1, m + 1):
        cost[0][j] = cost[0][j - 1] + sigma
    for i in range(1, n + 1):
        row, prev = cost[i], cost[i - 1]
        for j in range(1, m + 1):
            diag = prev[j - 1] + (0.0 if v[i - 1] == w[j - 1] else mu)
            row[j] = min(diag, prev[j] + sigma, row[j - 1] + sigma)

    top, bottom = [], []
    i, j = n, m
    while i or j:
        here = cost[i][j]
        if i and j and here == cost[i - 1][j - 1] + (0.0 if v[i - 1] == w[j - 1] else mu):
            i, j = i - 1, j - 1
            top.append(v[i])
            bottom.append(w[j])
        elif i and here == cost[i - 1][j] + sigma:
            i -= 1
            top.append(v[i])
            bottom.append(GAP)
        else:
            j -= 1
            top.append(GAP)
            bottom.append(w[j])
    a = Alignment("".join(reversed(top)), "".join(reversed(bottom)))
    return a, alignment_score(a, scheme)


def enumerate_alignments(v: str, w: str) -> Iterator[Alignment]:
    """Every valid alignment of ``v`` and ``w`` (Delannoy-many of them)."""

    def rec(i, j):
        if i == len(v) and j == len(w):
            yield "", ""
            return
        if i < len(v) and j < len(w):
            for t, b in rec(i + 1, j + 1):
                yield v[i] + t, w[j] + b
        if i < len(v):
            for t, b in rec(i + 1, j):
                yield v[i] + t, GAP + b
        if j < len(w):
            for t, b in rec(i, j + 1):
                yield GAP + t, w[j] + b

    for top, bottom in rec(0, 0):
        yield Alignment(top, bottom)


def brute_force_min_score(v: str, w: str, scheme: ScoreScheme) -> float:
    _check_seq(v)
    _check_seq(w)
    if len(v) + len(w) > BRUTE_FORCE_LIMIT:
        raise AlignmentError(f"|V|+|W| = {len(v) + len(w)} exceeds {BRUTE_FORCE_LIMIT}")
    return min(alignment_score(a, scheme) for a in enumerate_alignments(v, w))


def edit_genome(alphabet: Iterable[str], scheme: ScoreScheme) -> Genome:
    """Single-symbol substitutions, deletions and insertions as rules.

    Rule order: substitutions ``sub_a_b`` for ordered pairs a != b, then
    deletions ``del_a``, then insertions ``ins_a``, each in sorted symbol
    order.  Rule weights must be positive, so ``mu`` has to be > 0 here.
    """
    symbols = sorted(set(alphabet))
    if not symbols:
        raise AlignmentError("alphabet must be nonempty")
    for s in symbols:
        if len(s) != 1 or s == GAP:
            raise AlignmentError(f"bad alphabet symbol {s!r}")
    if not scheme.mu > 0:
        raise AlignmentError("edit genome needs mu > 0 (rule weights are positive)")
    rules = [sub(f"sub_{a}_{b}", a, b, scheme.mu) for a in symbols for b in symbols if a != b]
    rules += [sub(f"del_{a}", a, "", scheme.sigma) for a in symbols]
    rules += [ins(f"ins_{a}", "", a, "", scheme.sigma) for a in symbols]
    return Genome(tuple(rules))


def edit_graph_distance(v: str, w: str, scheme: ScoreScheme, bounds: ExplorationBounds | None = None,
                        alphabet: Iterable[str] | None = None) -> float:
    """Cheapest rewriting of ``{v}`` into ``{w}`` with :func:`edit_genome`.

    Default bounds cap word length at ``|v| + |w|``.  Returns ``inf`` when
    the target is not in the (possibly truncated) graph.
    """
    if not v:
        raise AlignmentError("start sequence must be nonempty (the empty word is not an object)")
    alphabet = sorted(set(alphabet if alphabet is not None else v + w))
    limit = len(v) + len(w)
    bounds = bounds or ExplorationBounds(
        max_depth=4 * limit + 4, max_vertices=200_000, max_word_len=limit, max_total_symbols=limit
    )
    graph = build_graph(edit_genome(alphabet, scheme), MultiSetObject.of(v), bounds)
    target = graph.index_of(canonicalize([(w, 1)]))
    if target is None:
        return math.inf
    return min_total_cost(graph, Const(0.0)).distances[target]

