import json

import pytest
from hypothesis import given, settings, strategies as st

from corpus2know.ccg import (EXTENSIONS, ChartSizeError, GrammarConfig, ParseError, parse,
                             parse_rate, recognizes, svo_profile, validate_derivation)
from corpus2know.ccg.categories import (ATOMS, FEATURES, Atom, CategoryError, Functor, Marked,
                                        NP, S, cat, parse_category)
from corpus2know.ccg.grammar import assign_categories
from corpus2know.corpus import Corpus
from corpus2know.lexicon import LexEntry, Lexicon

from conftest import make_sentence
from helpers import EXTENSION_FIXTURES, WORKED_EXAMPLE, oracle_recognizes, random_sentences

BASE = GrammarConfig.baseline()


# ------------------------------------------------------------ categories

def categories():
    atoms = st.sampled_from(ATOMS).map(Atom)
    return st.recursive(
        atoms,
        lambda inner: st.one_of(
            st.builds(Functor, inner, st.sampled_from("/\\"), inner),
            st.builds(Marked, inner, st.sampled_from(FEATURES))),
        max_leaves=8)


@given(categories())
def test_category_round_trip(c):
    assert parse_category(str(c)) == c


def test_left_associative_slashes():
    assert cat("np/n/np") == cat("(np/n)/np")
    assert cat("(s\\np)/np") == Functor(Functor(S, "\\", NP), "/", NP)
    assert str(cat("((s\\np)/np)")) == "(s\\np)/np"
    for bad in ("", "np/", "(np", "xp", "np[foo]", "np)"):
        with pytest.raises(CategoryError):
            parse_category(bad)


# ------------------------------------------------------------ parsing

def tiny_lexicon():
    return Lexicon([LexEntry("the", "determiner", {cat("np/n")}),
                    LexEntry("current", "noun", {cat("n")}),
                    LexEntry("flow", "verb", {cat("s\\np")}, {"flows"})])


def test_the_current_flows():
    r = parse(make_sentence("the/determiner current/noun flows/verb"), tiny_lexicon(), BASE)
    assert r.parsed and len(r.derivations) == 1
    d = r.best
    assert d.category == S and d.rule == "bwd_app"
    assert d.bracketed() == ("(s bwd_app (np fwd_app (np/n the) (n current)) "
                             "(s\\np flows))")
    assert json.loads(d.to_json())["rule"] == "bwd_app"
    assert svo_profile(d) == {"subjects": 1, "objects": 0, "verbs": 1}
    assert r.diagnosis is None


def test_single_token_is_not_a_sentence():
    r = parse(make_sentence("current/noun"), tiny_lexicon())
    assert not r.parsed and r.derivations == ()
    assert r.diagnosis is not None


def test_transitive_svo(lexicon):
    r = parse(make_sentence("the/determiner battery/noun powers/verb the/determiner lamp/noun"),
              lexicon)
    assert r.parsed
    assert svo_profile(r.best) == {"subjects": 1, "objects": 1, "verbs": 1}


def test_bare_np_profile(lexicon):
    from corpus2know.ccg.chart import Chart
    from corpus2know.ccg.grammar import lexical_categories
    s = make_sentence("the/determiner lamp/noun")
    lexical, ctx = lexical_categories(s.tokens, lexicon, GrammarConfig())
    chart = Chart(s.tokens, lexical, ctx, GrammarConfig())
    d = chart.derivations(0, 2, NP)[0]
    assert svo_profile(d) == {"subjects": 0, "objects": 0, "verbs": 0}


def test_empty_sentence_and_chart_bound(lexicon):
    with pytest.raises(ParseError):
        parse_rate(Corpus(), lexicon)
    with pytest.raises(ChartSizeError, match="s-big"):
        parse(make_sentence(EXTENSION_FIXTURES["fronted_pp"], "s-big"), lexicon,
              GrammarConfig(max_chart_size=5))


@pytest.mark.parametrize("ext", EXTENSIONS)
def test_extension_fixture(ext, lexicon):
    s = make_sentence(EXTENSION_FIXTURES[ext])
    assert not recognizes(s, lexicon, BASE)
    assert recognizes(s, lexicon, GrammarConfig.only(ext))
    assert recognizes(s, lexicon, GrammarConfig())


def test_modal_categories(lexicon):
    s = make_sentence(EXTENSION_FIXTURES["modals"])
    assert cat("(s\\np)/(s\\np)") in assign_categories(s.tokens, 2, lexicon, GrammarConfig())
    assert cat("(s\\np)/(s\\np)") not in assign_categories(s.tokens, 2, lexicon, BASE)


def test_gerund_gets_noun(lexicon):
    s = make_sentence(EXTENSION_FIXTURES["gerund_as_noun"])
    assert cat("n") in assign_categories(s.tokens, 1, lexicon, GrammarConfig())
    assert cat("n") not in assign_categories(s.tokens, 1, lexicon, BASE)


def test_unknown_token_gets_nothing(lexicon):
    s = make_sentence("the/determiner flux/noun")
    assert assign_categories(s.tokens, 1, lexicon) == frozenset()


def test_worked_example(lexicon):
    s = make_sentence(WORKED_EXAMPLE)
    assert not recognizes(s, lexicon, BASE)
    r = parse(s, lexicon)
    assert r.parsed
    assert all(validate_derivation(d, r.chart) for d in r.derivations)


# ------------------------------------------------------------ diagnosis

def test_diagnosis_coordinator_gap(lexicon):
    lex = Lexicon([e for e in lexicon if e.lemma != "or"])
    r = parse(make_sentence(WORKED_EXAMPLE), lex)
    assert not r.parsed
    d = r.diagnosis
    assert d.uncovered_tokens == (10,)
    assert (10, cat("conj")) in d.missing_category_hypotheses
    assert d.to_dict(r.sentence.tokens)["uncovered_tokens"] == ["or"]


def test_diagnosis_structural_failure(lexicon):
    r = parse(make_sentence("the/determiner lamp/noun the/determiner wire/noun"), lexicon, BASE)
    d = r.diagnosis
    assert d.uncovered_tokens == ()
    assert [s for s, _ in d.maximal_spans] == [(0, 2), (2, 4)]


def test_diagnosis_all_uncovered(lexicon):
    r = parse(make_sentence("flux/noun warps/verb space/noun"), lexicon)
    d = r.diagnosis
    assert d.uncovered_tokens == (0, 1, 2)
    assert d.missing_category_hypotheses == ()


# ------------------------------------------------------------ corpus level

def test_fixture_parse_rate(corpus, lexicon):
    rate = parse_rate(corpus, lexicon)
    assert (rate.total, rate.parsed) == (10, 4)
    assert rate.rate == pytest.approx(0.4) and str(rate.rate) == "2/5"


def test_no_categories_parse_nothing(corpus):
    assert parse_rate(corpus, Lexicon()).parsed == 0


def test_soundness_on_fixture(corpus, lexicon):
    for s in corpus.sentences:
        r = parse(s, lexicon)
        for d in r.derivations:
            assert d.category == S
            assert validate_derivation(d, r.chart)
        assert list(r.derivations) == sorted(r.derivations, key=lambda d: d.sort_key)


def test_parse_is_deterministic(corpus, lexicon):
    a = [[d.to_json() for d in parse(s, lexicon).derivations] for s in corpus.sentences]
    b = [[d.to_json() for d in parse(s, lexicon).derivations] for s in corpus.sentences]
    assert a == b


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(EXTENSIONS))
def test_config_monotonicity(seed, ext):
    from conftest import DATA
    from corpus2know.lexicon import load_lexicon
    lex = load_lexicon(DATA / "lexicon.tsv")
    s = random_sentences(1, seed)[0]
    off = GrammarConfig(**{ext: False})
    before = parse(s, lex, off)
    after = parse(s, lex, GrammarConfig())
    if before.parsed:
        assert after.parsed
        found = {d for d in after.chart.derivations(0, len(s.tokens), S, limit=10_000)}
        assert set(before.chart.derivations(0, len(s.tokens), S, limit=10_000)) <= found


def test_oracle_agrees_on_small_sample(lexicon):
    for s in random_sentences(40, seed=7):
        assert recognizes(s, lexicon) == oracle_recognizes(s, lexicon, GrammarConfig())
