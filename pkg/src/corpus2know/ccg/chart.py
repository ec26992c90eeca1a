"""CKY chart parsing over CCG categories."""

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .categories import NP, PP, S, VP, Functor, cat
from .config import GrammarConfig
from .grammar import (BWD_APP, BWD_COMP, FWD_APP, FWD_COMP, RULES, binary_rules,
                      default_categories,
                      lexical_categories, unary_rules)

LEX = "lex"
_RANK = {r: n for n, r in enumerate(RULES + (LEX,))}


class ChartSizeError(RuntimeError):
    pass


class ParseError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Derivation:
    category: object
    rule: str
    children: tuple = ()
    span: tuple = (0, 1)
    token: object = None

    @cached_property
    def size(self):
        return 1 + sum(c.size for c in self.children)

    @cached_property
    def signature(self):
        """Combinator ranks of the internal nodes in pre-order."""
        if self.is_leaf:
            return ()
        sig = [_RANK[self.rule]]
        for c in self.children:
            sig.extend(c.signature)
        return tuple(sig)

    @cached_property
    def compositions(self):
        own = 1 if self.rule in (FWD_COMP, BWD_COMP) else 0
        return own + sum(c.compositions for c in self.children)

    @cached_property
    def spans(self):
        out = [self.span]
        for c in self.children:
            out.extend(c.spans)
        return tuple(out)

    @property
    def sort_key(self):
        return (self.size, self.compositions, self.signature, self.spans)

    @property
    def is_leaf(self):
        return self.rule == LEX

    def leaves(self):
        if self.is_leaf:
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()

    def __eq__(self, other):
        return isinstance(other, Derivation) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (self.category, self.rule, self.span, tuple(c._key() for c in self.children))

    def bracketed(self):
        if self.is_leaf:
            return f"({self.category} {self.token.surface})"
        inner = " ".join(c.bracketed() for c in self.children)
        return f"({self.category} {self.rule} {inner})"

    def to_dict(self):
        if self.is_leaf:
            return {"category": str(self.category), "token": self.token.surface,
                    "index": self.span[0]}
        return {"category": str(self.category), "rule": self.rule,
                "children": [c.to_dict() for c in self.children]}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


class Chart:
    """Packed CKY chart: every cell maps a category to its backpointers."""

    def __init__(self, tokens, lexical, ctx, config, name="?"):
        self.tokens = tokens
        self.lexical = lexical
        self.ctx = ctx
        self.config = config
        self.name = name
        self.n = len(tokens)
        self.cells = {}
        self.size = 0
        self._fill()

    def _add(self, cell, category, bp):
        self.size += 1
        if self.size > self.config.max_chart_size:
            raise ChartSizeError(
                f"sentence {self.name}: chart exceeded {self.config.max_chart_size} entries")
        fresh = category not in cell
        cell.setdefault(category, []).append(bp)
        return fresh

    def _close(self, cell, i, j):
        queue = list(cell)
        while queue:
            c = queue.pop(0)
            for label, res in unary_rules(c, i, j, self.ctx, self.config):
                if self._add(cell, res, (label, c)):
                    queue.append(res)

    def _fill(self):
        for i in range(self.n):
            cell = {}
            for c in sorted(self.lexical[i], key=str):
                self._add(cell, c, (LEX, i))
            self._close(cell, i, i + 1)
            self.cells[(i, i + 1)] = cell
        for width in range(2, self.n + 1):
            for i in range(self.n - width + 1):
                j = i + width
                if not self.ctx.span_ok(i, j):
                    continue
                cell = {}
                for k in range(i + 1, j):
                    left = self.cells.get((i, k))
                    right = self.cells.get((k, j))
                    if not left or not right:
                        continue
                    for lc in list(left):
                        for rc in list(right):
                            for label, res in binary_rules(lc, rc, i, k, j, self.ctx, self.config):
                                self._add(cell, res, (label, k, lc, rc))
                if cell:
                    self._close(cell, i, j)
                    self.cells[(i, j)] = cell

    def categories(self, i, j):
        return tuple(self.cells.get((i, j), {}))

    def has(self, i, j, category):
        return category in self.cells.get((i, j), {})

    @property
    def recognized(self):
        return self.n > 0 and self.has(0, self.n, S)

    def derivations(self, i, j, category, limit=None):
        limit = limit or self.config.max_derivations
        memo = {}

        def build(a, b, c):
            key = (a, b, c)
            if key in memo:
                return memo[key]
            memo[key] = []          # unary rules are acyclic; guards against surprises
            out = []
            for bp in self.cells[(a, b)][c]:
                if bp[0] == LEX:
                    out.append(Derivation(c, LEX, (), (a, b), self.tokens[bp[1]]))
                elif len(bp) == 2:
                    for d in build(a, b, bp[1]):
                        out.append(Derivation(c, bp[0], (d,), (a, b)))
                else:
                    label, k, lc, rc = bp
                    for dl, dr in itertools.product(build(a, k, lc), build(k, b, rc)):
                        out.append(Derivation(c, label, (dl, dr), (a, b)))
            out.sort(key=lambda d: d.sort_key)
            memo[key] = out[:limit]
            return memo[key]

        if not self.has(i, j, category):
            return []
        return build(i, j, category)

    def maximal_spans(self):
        spans = [s for s, cell in self.cells.items() if cell]
        return sorted((a, b) for a, b in spans
                      if not any(c <= a and b <= d and (c, d) != (a, b) for c, d in spans))


@dataclass(frozen=True)
class FailureDiagnosis:
    uncovered_tokens: tuple
    missing_category_hypotheses: tuple      # (token index, category)
    maximal_spans: tuple                    # ((start, end), categories)

    def to_dict(self, tokens):
        return {
            "uncovered_tokens": [tokens[i].surface for i in self.uncovered_tokens],
            "missing_category_hypotheses": [[tokens[i].surface, str(c)]
                                            for i, c in self.missing_category_hypotheses],
            "maximal_spans": [{"span": list(s), "text": " ".join(t.surface for t in tokens[s[0]:s[1]]),
                               "categories": [str(c) for c in cats]}
                              for s, cats in self.maximal_spans],
        }


@dataclass
class ParseResult:
    sentence: object
    chart: Optional[Chart]
    derivations: tuple
    lexicon: object = field(repr=False, default=None)
    config: GrammarConfig = field(default_factory=GrammarConfig)

    @property
    def parsed(self):
        return self.chart is not None and self.chart.recognized

    @property
    def best(self):
        return self.derivations[0] if self.derivations else None

    @cached_property
    def diagnosis(self):
        if self.parsed:
            return None
        return diagnose_failure(self.sentence, self.chart, self.lexicon, self.config)


def parse(sentence, lexicon, config=None, extra=None, with_derivations=True) -> ParseResult:
    """Parse one sentence; all root-``s`` derivations, smallest first."""
    config = config or GrammarConfig()
    tokens = sentence.tokens
    if not tokens:
        raise ParseError(f"sentence {sentence.id}: no tokens")
    lexical, ctx = lexical_categories(tokens, lexicon, config, extra)
    chart = Chart(tokens, lexical, ctx, config, name=getattr(sentence, "id", "?"))
    derivs = ()
    if with_derivations and chart.recognized:
        derivs = tuple(chart.derivations(0, len(tokens), S))
    return ParseResult(sentence, chart, derivs, lexicon, config)


def recognizes(sentence, lexicon, config=None, extra=None):
    return parse(sentence, lexicon, config, extra, with_derivations=False).parsed


# ------------------------------------------------------------------ repairs

_REPAIR_EXTRA = ("n", "np", "pp", "conj", "(s\\np)/pp", "(s\\np)/s", "((s\\np)/np)/np",
                 "(n\\n)/n", "s\\s", "(s\\np)\\(s\\np)", "((s\\np)\\(s\\np))/np")


def repair_candidates(config):
    pool = set(cat(c) for c in _REPAIR_EXTRA)
    for pos in ("determiner", "noun", "pronoun", "adjective", "preposition", "adverb",
                "verb", "modal", "coordinator"):
        pool |= default_categories(pos, config)
    return sorted(pool, key=str)


def diagnose_failure(sentence, chart, lexicon, config=None) -> FailureDiagnosis:
    """Explain a failed parse.

    Lists tokens without categories and the maximal derivable spans, then
    searches single-token repairs: one extra category on one token (the
    uncovered one, if exactly one is uncovered) that makes the sentence parse.
    """
    config = config or GrammarConfig()
    tokens = sentence.tokens
    uncovered = tuple(i for i, cats in enumerate(chart.lexical) if not cats)
    spans = tuple((s, chart.categories(*s)) for s in chart.maximal_spans())
    if len(uncovered) > 1:
        targets = ()
    elif uncovered:
        targets = uncovered
    else:
        targets = tuple(range(len(tokens)))
    hypotheses = []
    for i in targets:
        for c in repair_candidates(config):
            if c in chart.lexical[i]:
                continue
            try:
                if recognizes(sentence, lexicon, config, extra={i: {c}}):
                    hypotheses.append((i, c))
            except ChartSizeError:
                continue
    return FailureDiagnosis(uncovered, tuple(hypotheses), spans)


# ------------------------------------------------------------------ profiles

@dataclass(frozen=True)
class ParseRate:
    total: int
    parsed: int
    rate: Fraction


def parse_rate(corpus, lexicon, config=None) -> ParseRate:
    sentences = corpus.sentences if hasattr(corpus, "sentences") else list(corpus)
    if not sentences:
        raise ParseError("cannot compute a parse rate over an empty corpus")
    parsed = sum(1 for s in sentences if recognizes(s, lexicon, config))
    return ParseRate(len(sentences), parsed, Fraction(parsed, len(sentences)))


def is_verbal_functor(c):
    return isinstance(c, Functor) and c.forward and c.result == VP and c.arg in (NP, PP)


def svo_profile(derivation) -> dict:
    """Counts of clause subjects, verbal objects and verb leaves."""
    subjects = objects = verbs = 0
    for node in derivation.nodes():
        if node.rule == BWD_APP:
            left, right = node.children
            if right.category == VP and left.category == NP:
                subjects += 1
        elif node.rule == FWD_APP:
            if is_verbal_functor(node.children[0].category):
                objects += 1
        elif node.is_leaf and node.token.pos == "verb" and node.category.target() == S:
            verbs += 1
    return {"subjects": subjects, "objects": objects, "verbs": verbs}


def validate_derivation(derivation, chart) -> bool:
    """Re-check every node of ``derivation`` against the rule definitions."""
    for node in derivation.nodes():
        a, b = node.span
        if node.is_leaf:
            if node.category not in chart.lexical[a] or b != a + 1:
                return False
        elif len(node.children) == 1:
            child = node.children[0]
            if child.span != node.span or \
                    (node.rule, node.category) not in unary_rules(child.category, a, b, chart.ctx, chart.config):
                return False
        else:
            left, right = node.children
            k = left.span[1]
            if left.span[0] != a or right.span != (k, b):
                return False
            if (node.rule, node.category) not in binary_rules(left.category, right.category, a, k, b,
                                                              chart.ctx, chart.config):
                return False
    return True
