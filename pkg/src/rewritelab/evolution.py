"""Genomes as objects, and the partition sum over an evolution graph.

Each gene is stored as one word ``<letter>|<p1>|<p2>[|<p3>]|<weight>``,
so evolution rules are ordinary rules acting on those words.  A vertex
of the evolution graph whose words no longer parse is a lethal genome:
it stays in the graph but contributes nothing.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    EMPTY_TOKEN,
    RESERVED,
    Genome,
    Kind,
    MultiSetObject,
    Rule,
    RuleError,
    canonicalize,
    format_weight,
    parse_weight,
)
from .graph import ExplorationBounds, build_graph
from .statmech import Const, Converge, Fitness, SumMode, _check_beta, _logsumexp, log_walk_sums, partition_function

_BY_LETTER = {k.letter: k for k in Kind}


def encode_rule(rule: Rule) -> str:
    params = [p if p else EMPTY_TOKEN for p in rule.params]
    return RESERVED.join([rule.kind.letter, *params, format_weight(rule.weight)])


def encode_genome(genome: Genome) -> MultiSetObject:
    return canonicalize(Counter(encode_rule(r) for r in genome))


def _decode_word(word: str, name: str) -> Optional[Rule]:
    fields = word.split(RESERVED)
    kind = _BY_LETTER.get(fields[0])
    if kind is None or len(fields) != kind.arity + 2:
        return None
    params = [p if p != EMPTY_TOKEN else "" for p in fields[1:-1]]
    try:
        return Rule(name, kind, tuple(params), parse_weight(fields[-1]))
    except (ValueError, RuleError):
        return None


def decode_genome(obj: MultiSetObject) -> Optional[Genome]:
    """Inverse of :func:`encode_genome`; ``None`` if any word is not a gene.

    Names are regenerated as ``g1, g2, ...`` in canonical word order, one
    gene per copy.
    """
    rules = []
    for word, mult in obj.entries:
        for _ in range(mult):
            rule = _decode_word(word, f"g{len(rules) + 1}")
            if rule is None:
                return None
            rules.append(rule)
    return Genome(tuple(rules))


@dataclass(frozen=True)
class EvolutionConfig:
    evolution_genome: Genome
    v0: MultiSetObject
    fitness: Fitness = Const(0.0)
    beta: float = 1.0
    beta_prime: float = 1.0
    inner_bounds: ExplorationBounds = field(default_factory=ExplorationBounds)
    inner_mode: SumMode = field(default_factory=Converge)
    outer_bounds: ExplorationBounds = field(default_factory=ExplorationBounds)
    outer_mode: SumMode = field(default_factory=Converge)

    def __post_init__(self):
        _check_beta(self.beta)
        _check_beta(self.beta_prime)


@dataclass
class GenomeTerm:
    vertex: int
    valid: bool
    inner_Z: float
    inner_log_Z: float
    outer_walk_sum: float
    outer_log_walk_sum: float
    inner_truncated: bool = False
    inner_diverged: bool = False
    encoded: MultiSetObject = None


@dataclass
class EvolutionResult:
    Z_outer: float
    log_Z_outer: float
    per_genome: list[GenomeTerm]
    outer_truncated: bool
    outer_diverged: bool

    @property
    def num_vertices(self) -> int:
        return len(self.per_genome)

    @property
    def inner_truncated(self) -> bool:
        return any(t.inner_truncated for t in self.per_genome)

    @property
    def inner_diverged(self) -> bool:
        return any(t.inner_diverged for t in self.per_genome)

    @property
    def truncated(self) -> bool:
        return self.outer_truncated or self.inner_truncated

    @property
    def diverged(self) -> bool:
        return self.outer_diverged or self.inner_diverged


def combine_terms(inner_log_z: np.ndarray, outer_log_s: np.ndarray) -> float:
    """log of sum_G Z_inner(G) * s_outer(G), summed in vertex order."""
    return _logsumexp(inner_log_z + outer_log_s)


def evolution_partition_function(g0: Genome, config: EvolutionConfig) -> EvolutionResult:
    outer = build_graph(config.evolution_genome, encode_genome(g0), config.outer_bounds)
    ws = log_walk_sums(outer, config.beta_prime, config.outer_mode)

    cache: dict[tuple, tuple] = {}
    terms = []
    for i, obj in enumerate(outer.vertices):
        genome = decode_genome(obj)
        if genome is None:
            terms.append(GenomeTerm(i, False, 0.0, -math.inf, math.exp(ws.log_sums[i]),
                                    float(ws.log_sums[i]), encoded=obj))
            continue
        # decoded genomes from equal objects are equal, so the object is the key
        if obj not in cache:
            inner = build_graph(genome, config.v0, config.inner_bounds)
            res = partition_function(inner, config.fitness, config.beta, config.inner_mode)
            cache[obj] = (res.Z, res.log_Z, inner.truncated, res.diverged)
        z, log_z, trunc, div = cache[obj]
        terms.append(GenomeTerm(i, True, z, log_z, math.exp(ws.log_sums[i]), float(ws.log_sums[i]),
                                trunc, div, obj))

    log_z_outer = combine_terms(np.array([t.inner_log_Z for t in terms]), ws.log_sums)
    return EvolutionResult(math.exp(log_z_outer), log_z_outer, terms, outer.truncated, ws.diverged)
