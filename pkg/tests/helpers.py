"""Shared fixtures for the grammar tests and the acceptance suite."""

import random
from functools import lru_cache

from corpus2know.ccg.categories import S
from corpus2know.ccg.grammar import binary_rules, lexical_categories, unary_rules

from conftest import make_sentence

EXTENSION_FIXTURES = {
    "modals": "the/determiner lamp/noun can/modal glow/verb",
    "adjective_stacking": "the/determiner connected/verb wire/noun carries/verb current/noun",
    "fronted_pp": "in/preposition series/noun circuit,/noun the/determiner current/noun is/verb "
                  "a/determiner single/adjective current/noun",
    "particles": "the/determiner sum/noun of/preposition the/determiner voltages/noun adds/verb "
                 "up/preposition to/preposition zero/adjective voltage/noun",
    "complementizer": "the/determiner meter/noun shows/verb that/preposition the/determiner "
                      "current/noun flows/verb",
    "final_adverb": "the/determiner current/noun flows/verb steadily/adverb",
    "noun_coordination": "series/noun and/coordinator parallel/adjective circuits/noun are/verb "
                         "the/determiner types/noun of/preposition circuits/noun",
    "gerund_as_noun": "the/determiner flowing/verb of/preposition charge/noun produces/verb "
                      "current/noun",
    "verbless_template": "the/determiner bigger/adjective the/determiner resistance,/noun "
                         "the/determiner smaller/adjective the/determiner current/noun",
}

WORKED_EXAMPLE = (
    "One/determiner simple/adjective DC/noun circuit/noun consists/verb of/preposition "
    "a/determiner voltage/noun source/noun (battery/noun or/coordinator voltaic/adjective "
    "cell)/noun connected/verb to/preposition a/determiner resistor/noun")


# ---------------------------------------------------------------- oracle

def _closure(cats, i, j, ctx, config):
    out = set(cats)
    frontier = list(cats)
    while frontier:
        c = frontier.pop()
        for _, res in unary_rules(c, i, j, ctx, config):
            if res not in out:
                out.add(res)
                frontier.append(res)
    return out


def bracketings(i, j):
    """Every binary tree over tokens [i, j) as nested (i, j, left, right) tuples."""
    if j - i == 1:
        return [(i, j, None, None)]
    trees = []
    for k in range(i + 1, j):
        for left in bracketings(i, k):
            for right in bracketings(k, j):
                trees.append((i, j, left, right))
    return trees


def oracle_recognizes(sentence, lexicon, config):
    """Enumerate all bracketings; for each, derive the categories reachable
    under every combination of lexical category choices."""
    tokens = sentence.tokens
    lexical, ctx = lexical_categories(tokens, lexicon, config)

    def evaluate(tree):
        i, j, left, right = tree
        if not ctx.span_ok(i, j):
            return set()
        if left is None:
            return _closure(lexical[i], i, j, ctx, config)
        lcats, rcats = evaluate(left), evaluate(right)
        out = set()
        for lc in lcats:
            for rc in rcats:
                for _, res in binary_rules(lc, rc, i, left[1], j, ctx, config):
                    out.add(res)
        return _closure(out, i, j, ctx, config)

    return any(S in evaluate(t) for t in bracketings(0, len(tokens)))


# ------------------------------------------------------- random sentences

POOL = {
    "determiner": ["the", "a", "each"],
    "noun": ["current", "circuit", "battery", "resistor", "lamp", "voltage", "charge", "wire"],
    "pronoun": ["it"],
    "adjective": ["simple", "parallel", "bigger", "zero"],
    "preposition": ["of", "to", "through", "in", "up", "that"],
    "adverb": ["steadily"],
    "verb": ["flows", "is", "powers", "connects", "consists", "adds", "flowing", "connected", "glows"],
    "modal": ["can"],
    "coordinator": ["and", "or", "when"],
}
TEMPLATES = [
    "determiner noun verb",
    "determiner noun verb determiner noun",
    "determiner adjective noun verb preposition noun",
    "noun coordinator noun verb noun",
    "determiner noun modal verb adverb",
    "preposition noun determiner noun verb noun",
    "determiner noun verb preposition determiner noun",
    "pronoun verb preposition determiner noun",
    "determiner adjective determiner noun determiner adjective determiner",
]


def random_sentence(rng, sid):
    if rng.random() < 0.6:
        tags = rng.choice(TEMPLATES).split()
        tags = [t if rng.random() > 0.15 else rng.choice(list(POOL)) for t in tags]
    else:
        tags = [rng.choice(list(POOL)) for _ in range(rng.randint(1, 7))]
    tags = tags[:7]
    words = []
    for n, t in enumerate(tags):
        w = rng.choice(POOL[t])
        if n < len(tags) - 1 and rng.random() < 0.1:
            w += ","
        words.append(f"{w}/{t}")
    if len(words) >= 3 and rng.random() < 0.1:
        a = rng.randrange(1, len(words) - 1)
        b = rng.randrange(a, len(words))
        words[a] = "(" + words[a]
        w, t = words[b].rsplit("/", 1)
        words[b] = f"{w.rstrip(',')})/{t}"
    return make_sentence(" ".join(words), sid)


def random_sentences(count, seed=1729):
    rng = random.Random(seed)
    return [random_sentence(rng, f"r{i}") for i in range(count)]
