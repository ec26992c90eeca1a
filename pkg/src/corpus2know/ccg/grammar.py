"""Lexical category assignment and the combinatory rules.

The baseline grammar is forward/backward application and composition, a
coordination schema for clauses, bare-noun promotion ``n => np`` and two
punctuation-driven type changes (parenthesised appositives and reduced
participial relatives).  Each extension switched on in :class:`GrammarConfig`
adds lexical categories or coordination targets; none removes anything, so
enabling an extension can only grow the set of derivations.
"""

from dataclasses import dataclass
from functools import lru_cache

from .categories import CONJ, N, NP, PART, PP, S, VP, Functor, Marked, cat
from .config import GrammarConfig

FWD_APP, BWD_APP, FWD_COMP, BWD_COMP, COORD, UNARY = (
    "fwd_app", "bwd_app", "fwd_comp", "bwd_comp", "coord", "unary_rule")
RULES = (FWD_APP, BWD_APP, FWD_COMP, BWD_COMP, COORD, UNARY)

SUBORDINATORS = ("since", "as", "because", "when", "if", "although")
COMPLEMENTIZERS = ("that", "whether")
COMPARATIVE_MARKERS = ("more", "less")

_BASE_DEFAULTS = {
    "determiner": ("np/n",),
    "noun": ("n",),
    "pronoun": ("n", "np"),
    "adjective": ("n/n",),
    "preposition": ("pp/np", "(np\\np)/np"),
    "adverb": ("s/s", "(s\\np)/(s\\np)"),
    "verb": ("s\\np", "(s\\np)/np"),
    "modal": (),
    "coordinator": ("conj",),
}

MODAL = cat("(s\\np)/(s\\np)")
NOUN_MOD = cat("n/n")
FRONTED_PP = cat("(s/s)/np")
PARTICLE_VERB = (cat("(s\\np)/part"), cat("((s\\np)/pp)/part"), cat("((s\\np)/np)/part"))
COMPLEMENTIZER = (cat("s/s"), cat("np/s"))
FINAL_ADVERB = (cat("(s\\np)\\(s\\np)"), cat("s\\s"))
SUBORDINATOR = (cat("(s/s)/s"), cat("(s\\s)/s"))
COMPARATIVE = cat("n/np")

BASE_COORDINABLE = frozenset({S})
EXTENDED_COORDINABLE = frozenset({S, N, NP, VP, NOUN_MOD})


@lru_cache(maxsize=None)
def _defaults(pos, modals):
    out = {cat(c) for c in _BASE_DEFAULTS[pos]}
    if pos == "modal" and modals:
        out.add(MODAL)
    return frozenset(out)


def default_categories(pos, config=None):
    """Bootstrap categories for a part of speech.

    Coordinators get the atom ``conj``: the coordination rule treats it as
    the schema ``(X\\X)/X`` for every X the configuration allows.  Modals
    have no baseline category and receive ``(s\\np)/(s\\np)`` only when the
    modal extension is on.
    """
    config = config or GrammarConfig()
    if pos not in _BASE_DEFAULTS:
        raise ValueError(f"unknown part of speech {pos!r}")
    return _defaults(pos, config.modals)


def coordinable(config):
    return EXTENDED_COORDINABLE if config.noun_coordination else BASE_COORDINABLE


def is_participle(token):
    return token.pos == "verb" and token.lower.endswith(("ed", "ing"))


def is_comparative(tokens, i):
    t = tokens[i]
    if t.pos != "adjective":
        return False
    return t.lower.endswith("er") or (i > 0 and tokens[i - 1].lower in COMPARATIVE_MARKERS)


@dataclass
class SentenceContext:
    """Per-sentence facts consulted by context-sensitive rules."""

    tokens: tuple
    entries: list          # lexicon entries per token
    groups: tuple          # (start, end) of parenthesised token runs, end exclusive

    @classmethod
    def build(cls, tokens, lexicon):
        entries = [list(lexicon.lookup(t)) if lexicon is not None else [] for t in tokens]
        groups, stack = [], []
        for i, t in enumerate(tokens):
            stack.extend([i] * t.lead.count("("))
            for _ in range(t.punct.count(")")):
                if stack:
                    groups.append((stack.pop(), i + 1))
        return cls(tuple(tokens), entries, tuple(sorted(groups)))

    def span_ok(self, i, j):
        """Spans may nest inside or around a parenthetical but never cut one."""
        for a, b in self.groups:
            if a < i < b < j or i < a < j < b:
                return False
        return True

    def comma_after(self, k):
        return "," in self.tokens[k].punct

    def parenthesised(self, i, j):
        return (i, j) in self.groups


def assign_categories(tokens, i, lexicon, config=None, ctx=None):
    """Categories available to ``tokens[i]``.

    Tokens missing from the lexicon get nothing.  Known tokens get their
    lexicon categories, the part-of-speech defaults and whatever the enabled
    extensions grant in this context.
    """
    config = config or GrammarConfig()
    ctx = ctx or SentenceContext.build(tokens, lexicon)
    entries = ctx.entries[i]
    if not entries:
        return frozenset()
    tok = tokens[i]
    prev = tokens[i - 1] if i > 0 else None
    nxt = tokens[i + 1] if i + 1 < len(tokens) else None
    out = set(default_categories(tok.pos, config))
    for e in entries:
        out |= set(e.categories)

    if tok.pos == "coordinator" and tok.lower in SUBORDINATORS:
        out.update(SUBORDINATOR)
    if config.adjective_stacking and nxt is not None and tok.pos in ("noun", "adverb", "verb") \
            and not tok.punct and not nxt.lead:
        if tok.pos != "verb" or is_participle(tok):
            if nxt.pos in ("noun", "adjective") or is_participle(nxt):
                out.add(NOUN_MOD)
    if config.fronted_pp and i == 0 and tok.pos == "preposition" and \
            any(ctx.comma_after(k) for k in range(len(tokens) - 1)):
        out.add(FRONTED_PP)
    if config.particles:
        if tok.pos == "verb" and nxt is not None and \
                any(nxt.lower in e.particles for e in entries):
            out.update(PARTICLE_VERB)
        if prev is not None and prev.pos == "verb" and \
                any(tok.lower in e.particles for e in ctx.entries[i - 1]):
            out.add(PART)
    if config.complementizer and tok.lower in COMPLEMENTIZERS:
        out.update(COMPLEMENTIZER)
    if config.final_adverb and tok.pos == "adverb":
        out.update(FINAL_ADVERB)
    if config.gerund_as_noun and tok.pos == "verb" and tok.lower.endswith("ing"):
        out.add(N)
    if config.verbless_template and prev is not None and prev.pos == "determiner" \
            and is_comparative(tokens, i):
        out.add(COMPARATIVE)
    return frozenset(out)


def lexical_categories(tokens, lexicon, config=None, extra=None):
    config = config or GrammarConfig()
    ctx = SentenceContext.build(tokens, lexicon)
    cats = [assign_categories(tokens, i, lexicon, config, ctx) for i in range(len(tokens))]
    for i, more in (extra or {}).items():
        cats[i] = cats[i] | frozenset(more)
    return cats, ctx


# ------------------------------------------------------------------- rules

def binary_rules(left, right, i, k, j, ctx, config):
    """All (label, result) pairs for adjacent spans [i, k) and [k, j)."""
    out = []
    if isinstance(left, Functor) and left.forward:
        if left.arg == right:
            out.append((FWD_APP, left.result))
        elif isinstance(right, Functor) and right.forward and left.arg == right.result:
            out.append((FWD_COMP, Functor(left.result, "/", right.arg)))
    if isinstance(right, Functor) and not right.forward:
        if right.arg == left:
            out.append((BWD_APP, right.result))
        elif isinstance(left, Functor) and not left.forward and right.arg == left.result:
            out.append((BWD_COMP, Functor(right.result, "\\", left.arg)))
    targets = coordinable(config)
    if left == CONJ and right in targets:
        out.append((COORD, Marked(right, "conj")))
    if isinstance(right, Marked) and right.feature == "conj" and right.inner == left and left in targets:
        out.append((COORD, left))
    if config.verbless_template and left == Marked(NP, "cmp") and right == left \
            and ctx.comma_after(k - 1):
        out.append((UNARY, S))
    return out


def unary_rules(category, i, j, ctx, config):
    out = []
    tokens = ctx.tokens
    if category == N:
        out.append((UNARY, NP))
    if category == NP:
        if config.verbless_template and j - i >= 3 and tokens[i].pos == "determiner" \
                and is_comparative(tokens, i + 1):
            out.append((UNARY, Marked(NP, "cmp")))
        if ctx.parenthesised(i, j):
            out.append((UNARY, Functor(NP, "\\", NP)))
    if category == VP and i > 0 and is_participle(tokens[i]):
        out.append((UNARY, Functor(NP, "\\", NP)))
    return out
