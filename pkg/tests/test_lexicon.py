import os
import tempfile
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from corpus2know.ccg.categories import cat
from corpus2know.ccg.config import GrammarConfig
from corpus2know.corpus import Corpus, Sentence, Token
from corpus2know.lexicon import (CoverageReport, LexEntry, Lexicon, LexiconError,
                                 augment_from_corpus, default_categories, dump_lexicon,
                                 load_lexicon, save_lexicon, vocabulary_coverage)
from corpus2know.rounding import format_percent

from conftest import make_sentence


def nouns_corpus(words):
    return Corpus((Sentence("s0", tuple(Token(w, "noun", "", i) for i, w in enumerate(words))),))


def test_published_initial_coverage():
    words = [f"word{i:04d}" for i in range(1902)]
    lex = Lexicon([LexEntry(w, "noun") for w in words[:101]])
    rep = vocabulary_coverage(lex, nouns_corpus(words))
    assert (rep.overlap_count, rep.unique_word_count) == (101, 1902)
    assert rep.ratio == Fraction(101, 1902)
    assert format_percent(rep.ratio, "half-up") == "5%"


def test_published_augmented_coverage_is_not_ninety():
    rep = CoverageReport.from_counts(1783, 1902)
    assert format_percent(rep.ratio, "half-up", 1) == "93.7%"
    assert format_percent(rep.ratio, "half-up") != "90%"


def test_coverage_matches_inflection_and_stem():
    lex = Lexicon([LexEntry("be", "verb", inflections={"is"}), LexEntry("resistor", "noun")])
    rep = vocabulary_coverage(lex, nouns_corpus(["is", "Resistors", "lamp"]))
    assert rep.overlap_count == 2 and rep.unique_word_count == 3


def test_empty_lexicon_and_empty_corpus(corpus):
    assert vocabulary_coverage(Lexicon(), corpus).ratio == 0
    with pytest.raises(LexiconError):
        vocabulary_coverage(Lexicon(), Corpus())
    with pytest.raises(LexiconError):
        CoverageReport.from_counts(3, 2)


def test_augment_five_word_fixture():
    words = ["current", "flows", "through", "the", "resistor"]
    pos = ["noun", "verb", "preposition", "determiner", "noun"]
    c = Corpus((Sentence("s", tuple(Token(w, p, "", i) for i, (w, p) in enumerate(zip(words, pos)))),))
    lex = Lexicon([LexEntry("the", "determiner"), LexEntry("current", "noun")])
    added = augment_from_corpus(lex, c)
    assert sum(added.values()) == 3
    assert {k for k in lex.entries} == {("the", "determiner"), ("current", "noun"),
                                       ("flow", "verb"), ("through", "preposition"),
                                       ("resistor", "noun")}
    assert lex.entries[("flow", "verb")].inflections == {"flows"}
    assert lex.entries[("flow", "verb")].categories == frozenset()
    assert sum(augment_from_corpus(lex, c).values()) == 0


def test_augment_surface_key_counts_surfaces():
    c = nouns_corpus(["resistor", "resistors", "Resistor"])
    assert augment_from_corpus(Lexicon(), c, key="surface")["noun"] == 2
    assert augment_from_corpus(Lexicon(), c, key="stem")["noun"] == 1
    with pytest.raises(LexiconError):
        augment_from_corpus(Lexicon(), c, key="lemma")


def test_fixture_augmentation(lexicon, corpus):
    lex = load_lexicon("tests/data/lexicon.tsv")
    before = vocabulary_coverage(lex, corpus).ratio
    added = augment_from_corpus(lex, corpus)
    assert sum(added.values()) > 0
    assert vocabulary_coverage(lex, corpus).ratio == 1 >= before
    assert lex.version == "fixture-1"


def test_lexicon_invariants():
    with pytest.raises(LexiconError):
        LexEntry("", "noun")
    with pytest.raises(LexiconError):
        LexEntry("x", "article")
    with pytest.raises(LexiconError):
        Lexicon([LexEntry("x", "noun"), LexEntry("x", "noun")])
    Lexicon([LexEntry("x", "noun"), LexEntry("x", "verb")])


def test_round_trip(lexicon, tmp_path):
    path = tmp_path / "lex.tsv"
    save_lexicon(lexicon, path)
    assert load_lexicon(path) == lexicon


def test_load_errors(tmp_path):
    p = tmp_path / "bad.tsv"
    p.write_text("word\tpos\n")
    with pytest.raises(LexiconError):
        load_lexicon(p)
    p.write_text("lemma\tpos\tcategories\tinflections\nx\tnoun\tn/\t\n")
    with pytest.raises(LexiconError, match=":2"):
        load_lexicon(p)
    p.write_bytes(b"lemma\tpos\tcategories\tinflections\n\xff\tnoun\t\t\n")
    with pytest.raises(LexiconError):
        load_lexicon(p)


def test_default_categories():
    assert default_categories("determiner") == {cat("np/n")}
    assert default_categories("noun") == {cat("n")}
    assert default_categories("pronoun") == {cat("n"), cat("np")}
    assert default_categories("coordinator") == {cat("conj")}
    assert default_categories("modal", GrammarConfig.baseline()) == frozenset()
    assert default_categories("modal") == {cat("(s\\np)/(s\\np)")}
    assert default_categories("verb") == {cat("s\\np"), cat("(s\\np)/np")}
    with pytest.raises(ValueError):
        default_categories("article")


def test_lookup_by_surface_and_stem(lexicon):
    s = make_sentence("the/determiner resistors/noun is/verb")
    assert [e.lemma for e in lexicon.lookup(s.tokens[1])] == ["resistor"]
    assert [e.lemma for e in lexicon.lookup(s.tokens[2])] == ["be"]


WORD = st.text(alphabet="abcdefgh", min_size=1, max_size=6)
POS = st.sampled_from(["noun", "verb", "adjective", "preposition"])


@st.composite
def small_corpora(draw):
    items = draw(st.lists(st.tuples(WORD, POS), min_size=1, max_size=15))
    return Corpus((Sentence("s", tuple(Token(w, p, "", i) for i, (w, p) in enumerate(items))),))


@settings(max_examples=80, deadline=None)
@given(small_corpora(), st.lists(st.tuples(WORD, POS), max_size=5, unique=True))
def test_augment_idempotent_monotone(c, seed):
    lex = Lexicon([LexEntry(w, p) for w, p in seed])
    before_keys = set(lex.entries)
    before = vocabulary_coverage(lex, c).ratio
    augment_from_corpus(lex, c)
    assert before_keys <= set(lex.entries)
    assert vocabulary_coverage(lex, c).ratio >= before
    snapshot = dump_lexicon(lex)
    assert sum(augment_from_corpus(lex, c).values()) == 0
    assert dump_lexicon(lex) == snapshot
    assert load_lexicon_text(snapshot) == lex


def load_lexicon_text(text):
    fd, path = tempfile.mkstemp(suffix=".tsv")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    try:
        return load_lexicon(path)
    finally:
        os.unlink(path)
