"""Multisets of words and the seven multivalued rewriting schemas.

An *object* is a finite multiset of nonempty words.  A *rule* (gene) is a
parameterized rewriting schema with a positive weight; applying it to an
object can give several results, one per application site.
"""
from __future__ import annotations

import enum
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

EMPTY_TOKEN = "_"
RESERVED = "|"

_WEIGHT_RE = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


class RuleError(ValueError):
    """Raised for malformed rules and genomes."""


class InvalidSiteError(ValueError):
    """Raised when a site does not match the (rule, object) pair."""


def is_word(text: str) -> bool:
    """True if every symbol is printable ASCII, not whitespace and not ``|``."""
    return all(33 <= ord(ch) <= 126 and ch != RESERVED for ch in text)


def format_weight(weight: float) -> str:
    """Shortest round-trip decimal text, without a trailing ``.0``."""
    text = repr(float(weight))
    if text.endswith(".0"):
        text = text[:-2]
    return text


def parse_weight(text: str) -> float:
    """Parse a positive finite decimal; raise ValueError otherwise.

    Stricter than ``float()``: no signs, underscores, ``inf`` or ``nan``.
    """
    if not _WEIGHT_RE.fullmatch(text):
        raise ValueError(f"not a decimal weight: {text!r}")
    value = float(text)
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"weight must be positive and finite: {text!r}")
    return value


# --------------------------------------------------------------------------
# objects

EntryLike = Union[Mapping[str, int], Iterable[tuple[str, int]]]


@dataclass(frozen=True, eq=False)
class MultiSetObject:
    """Canonical multiset of words: sorted ``(word, multiplicity)`` pairs.

    Build instances through :func:`canonicalize` (or :meth:`of`); the
    constructor trusts its input.
    """

    entries: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(self.entries))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSetObject):
            return NotImplemented
        return self._hash == other._hash and self.entries == other.entries

    @classmethod
    def of(cls, *words: str) -> MultiSetObject:
        return canonicalize((w, 1) for w in words)

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return render_object(self)

    def count(self, word: str) -> int:
        for w, m in self.entries:
            if w == word:
                return m
        return 0

    def words(self) -> tuple[str, ...]:
        return tuple(w for w, _ in self.entries)

    def total_symbols(self) -> int:
        return sum(len(w) * m for w, m in self.entries)

    def max_word_len(self) -> int:
        return max((len(w) for w, _ in self.entries), default=0)

    def size(self) -> int:
        """Number of words counted with multiplicity."""
        return sum(m for _, m in self.entries)

    def as_counter(self) -> Counter:
        return Counter(dict(self.entries))

    def replace(self, consumed: Iterable[str], produced: Iterable[str]) -> MultiSetObject:
        """Remove one copy of each consumed word, add one of each product."""
        counts = dict(self.entries)
        for w in consumed:
            left = counts.get(w, 0) - 1
            if left < 0:
                raise InvalidSiteError(f"word {w!r} not available in object")
            counts[w] = left
        for w in produced:
            counts[w] = counts.get(w, 0) + 1
        return MultiSetObject(tuple(sorted((w, m) for w, m in counts.items() if w and m)))


def canonicalize(raw: EntryLike) -> MultiSetObject:
    """Merge duplicate words, drop empty words and zero counts, sort."""
    items = raw.items() if isinstance(raw, Mapping) else raw
    counts: dict[str, int] = {}
    for word, mult in items:
        if mult < 0:
            raise ValueError(f"negative multiplicity for {word!r}")
        if word and mult:
            counts[word] = counts.get(word, 0) + mult
    return MultiSetObject(tuple(sorted(counts.items())))


def render_object(obj: MultiSetObject) -> str:
    """``word^mult`` terms joined by ``+``; the empty object renders as ``0``."""
    if not obj.entries:
        return "0"
    return "+".join(f"{w}^{m}" for w, m in obj.entries)


# --------------------------------------------------------------------------
# rules


class Kind(enum.Enum):
    GLUE = "G"
    CLEAVE = "C"
    SUB = "S"
    DEL = "D"
    INS = "I"
    SPLICE = "P"
    DUP = "U"

    @property
    def letter(self) -> str:
        return self.value

    @property
    def arity(self) -> int:
        return 3 if self is Kind.INS else 2


@dataclass(frozen=True)
class Rule:
    """One gene: a rewriting schema, its anchor/payload words and weight K.

    Parameter meaning per kind (``u``, ``v`` anchors, ``w`` payload):

    ========  ========  ==============================================
    kind      params    effect
    ========  ========  ==============================================
    GLUE      u, v      ``A`` ending in u + ``B`` starting with v -> AB
    CLEAVE    u, v      ``..uv..`` -> ``..u`` + ``v..``
    SUB       u, v      ``..u..`` -> ``..v..`` (u nonempty)
    DEL       u, v      ``..u w v..`` -> ``..uv..`` (w nonempty)
    INS       u, w, v   ``..uv..`` -> ``..uwv..`` (w nonempty)
    SPLICE    u, v      ``..uv..`` + donor ``w`` -> ``..uwv..``
    DUP       u, v      ``..u w v..`` -> ``..u w w v..`` (w nonempty)
    ========  ========  ==============================================
    """

    name: str
    kind: Kind
    params: tuple[str, ...]
    weight: float = 1.0

    def __post_init__(self):
        if not self.name or not is_word(self.name):
            raise RuleError(f"bad rule name {self.name!r}")
        if not isinstance(self.kind, Kind):
            raise RuleError(f"bad rule kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(self.params))
        if len(self.params) != self.kind.arity:
            raise RuleError(
                f"{self.kind.name} takes {self.kind.arity} parameters, got {len(self.params)}"
            )
        for p in self.params:
            if not isinstance(p, str) or not is_word(p) or p == EMPTY_TOKEN:
                raise RuleError(f"bad parameter word {p!r} in rule {self.name!r}")
        weight = float(self.weight)
        if not math.isfinite(weight) or weight <= 0:
            raise RuleError(f"rule {self.name!r}: weight must be positive, got {self.weight!r}")
        object.__setattr__(self, "weight", weight)
        if self.kind is Kind.SUB and not self.params[0]:
            raise RuleError(f"rule {self.name!r}: SUB needs a nonempty pattern")
        if self.kind is Kind.INS and not self.params[1]:
            raise RuleError(f"rule {self.name!r}: INS needs a nonempty payload")

    def body(self) -> tuple:
        """Everything except the name; used to compare genomes up to renaming."""
        return (self.kind.value, self.params, self.weight)


def glue(name, u, v, weight=1.0):
    return Rule(name, Kind.GLUE, (u, v), weight)


def cleave(name, u, v, weight=1.0):
    return Rule(name, Kind.CLEAVE, (u, v), weight)


def sub(name, u, v, weight=1.0):
    return Rule(name, Kind.SUB, (u, v), weight)


def delete(name, u, v, weight=1.0):
    return Rule(name, Kind.DEL, (u, v), weight)


def ins(name, u, w, v, weight=1.0):
    return Rule(name, Kind.INS, (u, w, v), weight)


def splice(name, u, v, weight=1.0):
    return Rule(name, Kind.SPLICE, (u, v), weight)


def dup(name, u, v, weight=1.0):
    return Rule(name, Kind.DUP, (u, v), weight)


@dataclass(frozen=True)
class Genome:
    """Ordered list of rules with unique names.  May be empty."""

    rules: tuple[Rule, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        seen = set()
        for rule in self.rules:
            if rule.name in seen:
                raise RuleError(f"duplicate rule name {rule.name!r}")
            seen.add(rule.name)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __getitem__(self, i):
        return self.rules[i]

    def rule(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    def bodies(self) -> list[tuple]:
        """Sorted rule bodies: the genome up to names and order."""
        return sorted(r.body() for r in self.rules)


# --------------------------------------------------------------------------
# application


@dataclass(frozen=True, order=True)
class Site:
    """Where a rule applies: the consumed word values and anchor offsets.

    ``words[0]`` is the word rewritten in place; GLUE and SPLICE also
    consume ``words[1]`` (right-hand word, resp. donor).  Offsets are
    kind-specific character positions inside ``words[0]`` (for GLUE the
    second offset refers to ``words[1]``).
    """

    words: tuple[str, ...]
    offsets: tuple[int, ...]


def _occurrences(word: str, pattern: str) -> Iterator[int]:
    """Start offsets of all (overlapping) occurrences; empty matches everywhere."""
    if not pattern:
        yield from range(len(word) + 1)
        return
    i = word.find(pattern)
    while i >= 0:
        yield i
        i = word.find(pattern, i + 1)


def _pattern(rule: Rule) -> str:
    """Contiguous text a single-anchor-site rule must find in the word."""
    p = rule.params
    if rule.kind is Kind.SUB:
        return p[0]
    if rule.kind is Kind.INS:
        return p[0] + p[2]
    return p[0] + p[1]


def _candidate_sites(rule: Rule, obj: MultiSetObject) -> Iterator[Site]:
    kind, p = rule.kind, rule.params
    words = obj.words()
    if kind is Kind.GLUE:
        u, v = p
        for a, ma in obj.entries:
            if not a.endswith(u):
                continue
            for b, _ in obj.entries:
                if b.startswith(v) and (a != b or ma >= 2):
                    yield Site((a, b), (len(a) - len(u), 0))
    elif kind is Kind.SPLICE:
        u, v = p
        for a, ma in obj.entries:
            offs = list(_occurrences(a, u + v))
            if not offs:
                continue
            for donor, _ in obj.entries:
                if donor == a and ma < 2:
                    continue
                for i in offs:
                    yield Site((a, donor), (i,))
    elif kind in (Kind.DEL, Kind.DUP):
        u, v = p
        for a in words:
            for i in _occurrences(a, u):
                for j in _occurrences(a, v):
                    if j > i + len(u):
                        yield Site((a,), (i, j))
    else:
        pattern = _pattern(rule)
        for a in words:
            for i in _occurrences(a, pattern):
                yield Site((a,), (i,))


def _products(rule: Rule, site: Site) -> tuple[str, ...]:
    """Words produced at a (validated) site."""
    kind, p = rule.kind, rule.params
    a = site.words[0]
    if kind is Kind.GLUE:
        return (a + site.words[1],)
    i = site.offsets[0]
    if kind is Kind.CLEAVE:
        cut = i + len(p[0])
        return (a[:cut], a[cut:])
    if kind is Kind.SUB:
        return (a[:i] + p[1] + a[i + len(p[0]):],)
    if kind is Kind.INS:
        cut = i + len(p[0])
        return (a[:cut] + p[1] + a[cut:],)
    if kind is Kind.SPLICE:
        cut = i + len(p[0])
        return (a[:cut] + site.words[1] + a[cut:],)
    j = site.offsets[1]
    start = i + len(p[0])
    if kind is Kind.DEL:
        return (a[:start] + a[j:],)
    return (a[:j] + a[start:j] + a[j:],)  # DUP


def _check_site(rule: Rule, obj: MultiSetObject, site: Site) -> None:
    kind, p = rule.kind, rule.params
    expected_words = 2 if kind in (Kind.GLUE, Kind.SPLICE) else 1
    expected_offsets = 2 if kind in (Kind.GLUE, Kind.DEL, Kind.DUP) else 1
    if len(site.words) != expected_words or len(site.offsets) != expected_offsets:
        raise InvalidSiteError(f"site shape does not fit {kind.name}")
    need = Counter(site.words)
    for w, n in need.items():
        if obj.count(w) < n:
            raise InvalidSiteError(f"object lacks {n} copies of {w!r}")
    a = site.words[0]
    if kind is Kind.GLUE:
        b = site.words[1]
        ok = a.endswith(p[0]) and b.startswith(p[1]) and site.offsets == (len(a) - len(p[0]), 0)
    elif kind in (Kind.DEL, Kind.DUP):
        i, j = site.offsets
        ok = (
            0 <= i and j > i + len(p[0]) and j + len(p[1]) <= len(a)
            and a.startswith(p[0], i) and a.startswith(p[1], j)
        )
    else:
        pattern = _pattern(rule)
        i = site.offsets[0]
        ok = 0 <= i and i + len(pattern) <= len(a) and a.startswith(pattern, i)
    if not ok:
        raise InvalidSiteError(f"anchors of {rule.name!r} do not match at {site}")


def enumerate_applications(rule: Rule, obj: MultiSetObject) -> list[tuple[Site, MultiSetObject]]:
    """All single-step results of ``rule`` on ``obj``, ordered by site.

    Sites are per distinct word value, not per copy.  Applications whose
    result equals ``obj`` are left out.
    """
    out = []
    for site in _candidate_sites(rule, obj):
        result = obj.replace(site.words, _products(rule, site))
        if result != obj:
            out.append((site, result))
    out.sort(key=lambda pair: pair[0])
    return out


def apply_at(rule: Rule, obj: MultiSetObject, site: Site) -> MultiSetObject:
    _check_site(rule, obj, site)
    return obj.replace(site.words, _products(rule, site))


def applications(genome: Genome, obj: MultiSetObject) -> Iterator[tuple[Rule, Site, MultiSetObject]]:
    """Every one-step move of the whole genome, in rule order then site order."""
    for rule in genome:
        for site, result in enumerate_applications(rule, obj):
            yield rule, site, result
