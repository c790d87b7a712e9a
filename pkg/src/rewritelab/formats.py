"""Text formats: genome files, object files, and result renderings.

Genome file, one rule per line::

    # name KIND p1 p2 [p3] weight
    g1 SUB ab cd 1.5
    g2 INS _ w _ 2

Object file, one ``word multiplicity`` pair per line.  ``_`` stands for
the empty word; ``#`` starts a comment line.
"""
from __future__ import annotations

import json
import math
import re

from .core import (
    EMPTY_TOKEN,
    Genome,
    Kind,
    MultiSetObject,
    Rule,
    RuleError,
    canonicalize,
    format_weight,
    is_word,
    parse_weight,
    render_object,
)

_TOKEN = re.compile(r"\S+")
_KINDS = {k.name: k for k in Kind}


class FormatError(ValueError):
    """Parse failure with a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _tokens(text: str):
    """Yield (line number, [(column, token), ...]) for meaningful lines."""
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]


def _word(token: str) -> str:
    return "" if token == EMPTY_TOKEN else token


def parse_genome_file(text: str) -> Genome:
    rules = []
    names = {}
    for lineno, toks in _tokens(text):
        if len(toks) < 2:
            raise FormatError("expected '<name> <KIND> <params...> <weight>'", lineno)
        (_, name), (kcol, kind_name) = toks[0], toks[1]
        kind = _KINDS.get(kind_name)
        if kind is None:
            raise FormatError(f"unknown rule kind {kind_name!r}", lineno, kcol)
        if len(toks) != kind.arity + 3:
            col = toks[-1][0] if len(toks) > kind.arity + 3 else 1
            raise FormatError(
                f"{kind_name} takes {kind.arity} parameters and a weight, got {len(toks) - 2} tokens",
                lineno, col,
            )
        if name in names:
            raise FormatError(f"duplicate rule name {name!r} (first on line {names[name]})", lineno)
        wcol, wtext = toks[-1]
        try:
            weight = parse_weight(wtext)
        except ValueError as exc:
            raise FormatError(str(exc), lineno, wcol) from None
        params = tuple(_word(t) for _, t in toks[2:-1])
        try:
            rule = Rule(name, kind, params, weight)
        except RuleError as exc:
            raise FormatError(str(exc), lineno) from None
        names[name] = lineno
        rules.append(rule)
    return Genome(tuple(rules))


def format_genome_file(genome: Genome) -> str:
    lines = []
    for r in genome:
        params = " ".join(p if p else EMPTY_TOKEN for p in r.params)
        lines.append(f"{r.name} {r.kind.name} {params} {format_weight(r.weight)}")
    return "".join(line + "\n" for line in lines)


def parse_object_file(text: str) -> MultiSetObject:
    pairs = []
    for lineno, toks in _tokens(text):
        if len(toks) != 2:
            raise FormatError("expected '<word> <multiplicity>'", lineno)
        (wcol, word), (mcol, mult) = toks
        word = _word(word)
        if not is_word(word):
            raise FormatError(f"bad word {word!r}", lineno, wcol)
        if not mult.isdigit() or int(mult) < 1:
            raise FormatError(f"multiplicity must be a positive integer, got {mult!r}", lineno, mcol)
        pairs.append((word, int(mult)))
    return canonicalize(pairs)


def format_object_file(obj: MultiSetObject) -> str:
    return "".join(f"{w} {m}\n" for w, m in obj.entries)


# --------------------------------------------------------------------------
# result rendering


def num(x: float):
    """JSON-safe float: non-finite values become null."""
    x = float(x)
    return x if math.isfinite(x) else None


def to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def render_sweep_csv(rows) -> str:
    lines = ["beta,Z,free_energy"]
    lines += [f"{r.beta!r},{r.Z!r},{r.free_energy!r}" for r in rows]
    return "\n".join(lines) + "\n"


def partition_payload(result, num_vertices: int, truncated: bool) -> dict:
    return {
        "Z": num(result.Z),
        "log_Z": num(result.log_Z),
        "num_vertices": num_vertices,
        "truncated": bool(truncated),
        "diverged": bool(result.diverged),
    }


def evolution_payload(result) -> dict:
    return {
        "Z": num(result.Z_outer),
        "log_Z": num(result.log_Z_outer),
        "num_vertices": result.num_vertices,
        "truncated": result.truncated,
        "diverged": result.diverged,
        "per_genome": [
            {
                "vertex": t.vertex,
                "genome": render_object(t.encoded),
                "valid": t.valid,
                "inner_Z": num(t.inner_Z),
                "outer_walk_sum": num(t.outer_walk_sum),
                "inner_truncated": t.inner_truncated,
                "inner_diverged": t.inner_diverged,
            }
            for t in result.per_genome
        ],
    }


def graph_payload(graph) -> dict:
    return {
        "num_vertices": graph.num_vertices,
        "num_edges": len(graph.edges),
        "truncated": graph.truncated,
        "vertices": [
            {"index": i, "depth": d, "object": render_object(v)}
            for i, (v, d) in enumerate(zip(graph.vertices, graph.depth))
        ],
        "edges": [
            {"source": e.source, "target": e.target, "rule": e.rule, "weight": e.weight}
            for e in graph.edges
        ],
    }


def render_text(payload: dict) -> str:
    """Flat ``key: value`` lines; nested lists get one line per item."""
    lines = []
    for key, value in payload.items():
        if isinstance(value, list):
            lines.append(f"{key}:")
            for item in value:
                if isinstance(item, dict):
                    item = " ".join(f"{k}={_text_value(v)}" for k, v in item.items())
                lines.append(f"  {item}")
        else:
            lines.append(f"{key}: {_text_value(value)}")
    return "\n".join(lines) + "\n"


def _text_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "inf"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(payload: dict, fmt: str) -> str:
    return to_json(payload) if fmt == "json" else render_text(payload)
