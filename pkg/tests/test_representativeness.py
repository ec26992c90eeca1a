import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from corpus2know.corpus import Corpus, Sentence, Token
from corpus2know.representativeness import (LabelSelector, PosSelector, SaturationCurve,
                                            SaturationError, TermSelector, closure_test,
                                            curve_from_sets, make_selector, saturation_curve,
                                            segment, sentence_type_distribution)

from conftest import make_sentence


def corpus_of_lengths(lengths):
    return Corpus(tuple(Sentence(f"s{i}", tuple(Token(f"w{i}x{j}", "noun", "", j) for j in range(n)))
                        for i, n in enumerate(lengths)))


def corpus_of_words(samples):
    """One sentence per sample, each holding the given nouns."""
    return Corpus(tuple(make_sentence(" ".join(f"{w}/noun" for w in words), f"s{i}")
                        for i, words in enumerate(samples)))


def test_segment_single_sample(corpus):
    p = segment(corpus, 1)
    assert len(p) == 1
    assert tuple(p.sample(0)) == corpus.sentences
    assert p.mean_sample_words == corpus.word_count


def test_segment_equal_sentences():
    p = segment(corpus_of_lengths([4] * 10), 5)
    assert p.bounds == ((0, 2), (2, 4), (4, 6), (6, 8), (8, 10))
    assert p.word_counts == [8] * 5
    assert p.mean_sample_words == 8


def test_segment_errors(corpus):
    with pytest.raises(SaturationError):
        segment(corpus, 11)
    with pytest.raises(SaturationError):
        segment(Corpus(), 1)
    with pytest.raises(SaturationError):
        segment(corpus, 0)


def test_published_mean_sample_size():
    # 18,834 words over 15 samples; the printed 1,267 is not this mean
    mean = Fraction(18834, 15)
    assert mean == Fraction(6278, 5)
    assert abs(mean - 1267) > 11


def _brute_best_cost(lengths, n):
    total = sum(lengths)
    best = tight = None
    for cuts in itertools.combinations(range(1, len(lengths)), n - 1):
        b = (0,) + cuts + (len(lengths),)
        sizes = [sum(lengths[x:y]) for x, y in zip(b, b[1:])]
        cost = sum((n * w - total) ** 2 for w in sizes)
        best = cost if best is None else min(best, cost)
        if max(sizes) - min(sizes) <= max(lengths):
            tight = cost if tight is None else min(tight, cost)
    return best if tight is None else tight


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(1, 12), min_size=1, max_size=9), st.data())
def test_segment_properties(lengths, data):
    n = data.draw(st.integers(1, len(lengths)))
    c = corpus_of_lengths(lengths)
    p = segment(c, n)
    assert len(p) == n
    # contiguous, non-empty, covering
    assert p.bounds[0][0] == 0 and p.bounds[-1][1] == len(lengths)
    assert all(a < b for a, b in p.bounds)
    assert all(x[1] == y[0] for x, y in zip(p.bounds, p.bounds[1:]))
    assert tuple(s for sample in p.samples for s in sample) == c.sentences
    ranges = p.token_ranges
    assert ranges[0][0] == 0 and ranges[-1][1] == sum(lengths)
    assert p.mean_sample_words == Fraction(sum(lengths), n)
    # optimal balance, checked against exhaustive enumeration of cut points
    total = sum(lengths)
    cost = sum((n * w - total) ** 2 for w in p.word_counts)
    assert cost == _brute_best_cost(lengths, n)


def test_curve_hand_count():
    curve = curve_from_sets([{"a", "b"}, {"b", "c"}, {"c"}])
    assert curve.per_sample_new == (2, 1, 0)
    assert curve.cumulative == (2, 3, 3)


def test_curve_from_partition():
    c = corpus_of_words([["a", "b"], ["b", "c"], ["c"]])
    curve = saturation_curve(segment(c, 3), PosSelector("noun"))
    assert curve.per_sample_new == (2, 1, 0) and curve.cumulative == (2, 3, 3)
    assert curve.item_class == "noun"


def test_front_loaded_vocabulary():
    c = corpus_of_words([["a", "b", "c", "d"], ["a", "b"], ["c", "d"], ["d", "a"]])
    curve = saturation_curve(segment(c, 4), PosSelector("noun"))
    assert curve.per_sample_new == (4, 0, 0, 0)


def test_all_distinct_never_saturates():
    c = corpus_of_words([[f"w{i}{j}" for j in range(3)] for i in range(6)])
    curve = saturation_curve(segment(c, 6), PosSelector("noun"))
    assert curve.cumulative == (3, 6, 9, 12, 15, 18)
    assert not closure_test(curve, Fraction(5, 100), 3).saturated


def test_pos_selector_uses_stem():
    c = corpus_of_words([["resistors", "Resistor"], ["resistor"]])
    curve = saturation_curve(segment(c, 2), PosSelector("noun"))
    assert curve.per_sample_new == (1, 0)


def test_term_selector(corpus):
    sel = TermSelector(["DC circuit", "circuit", "voltage source"])
    s = make_sentence("one/determiner DC/noun circuit/noun has/verb a/determiner "
                      "voltage/noun source/noun and/coordinator a/determiner circuit/noun")
    assert list(sel.items(s)) == ["dc circuit", "voltage source", "circuit"]
    with pytest.raises(SaturationError):
        TermSelector([])
    with pytest.raises(SaturationError):
        make_selector("term", Corpus())
    assert make_selector("term", corpus).item_class == "technical_term"
    assert make_selector("pos:verb+preposition").item_class == "verb+preposition"
    with pytest.raises(SaturationError):
        make_selector("pos:article")


def test_label_selector():
    c = corpus_of_words([["a"], ["b"]])
    sel = LabelSelector({"s0": ["Is"], "s1": ["Is", "Supply"]}, "relation")
    curve = saturation_curve(segment(c, 2), sel)
    assert curve.per_sample_new == (1, 1) and curve.item_class == "relation"


def test_closure_hand_evaluated():
    new = (50, 20, 5, 2, 1, 1)
    curve = SaturationCurve(new, (50, 70, 75, 77, 78, 79), "x")
    # ratios: 1, 20/70, 5/75, 2/77, 1/78, 1/79; first run of two at or under 0.05 starts at 3
    v = closure_test(curve, Fraction(5, 100), 2)
    assert v.saturated and v.saturation_index == 3


def test_closure_zero_tail():
    curve = curve_from_sets([{"a", "b"}, set(), set(), set()])
    for t in (Fraction(1, 1000), Fraction(1, 2)):
        v = closure_test(curve, t, 3)
        assert v.saturated and v.saturation_index == 1


def test_closure_errors():
    curve = curve_from_sets([{"a"}, {"b"}])
    with pytest.raises(SaturationError):
        closure_test(curve, Fraction(1, 20), 3)
    with pytest.raises(SaturationError):
        closure_test(curve, Fraction(1, 20), 0)
    with pytest.raises(SaturationError):
        closure_test(curve, 1, 1)


def _rule(new, cum, threshold, window):
    for i in range(len(new) - window + 1):
        if all(cum[j] == 0 or Fraction(new[j], cum[j]) <= threshold for j in range(i, i + window)):
            return i
    return None


@given(st.lists(st.integers(0, 30), min_size=1, max_size=12), st.data())
def test_closure_matches_rule(new, data):
    cum = tuple(itertools.accumulate(new))
    window = data.draw(st.integers(1, len(new)))
    threshold = Fraction(data.draw(st.integers(1, 99)), 100)
    v = closure_test(SaturationCurve(tuple(new), cum, "x"), threshold, window)
    expected = _rule(new, cum, threshold, window)
    assert v.saturated == (expected is not None)
    assert v.saturation_index == expected
    if v.saturated:
        assert v.saturation_index < len(new)


@given(st.integers(1, 50), st.integers(2, 10), st.integers(1, 10))
def test_linear_curve_never_saturates(slope, n, window):
    window = min(window, n)
    new = (slope,) * n
    cum = tuple(slope * (i + 1) for i in range(n))
    # ratio 1/(i+1) stays above 0.05 for the first 19 samples
    if n <= 19:
        assert not closure_test(SaturationCurve(new, cum, "x"), Fraction(5, 100), window).saturated


@given(st.lists(st.sets(st.sampled_from("abcdefghij")), min_size=1, max_size=8))
def test_curve_invariants(sets):
    c = curve_from_sets(sets)
    assert all(x <= y for x, y in zip(c.cumulative, c.cumulative[1:]))
    prev = 0
    for new, cum in zip(c.per_sample_new, c.cumulative):
        assert cum - prev == new
        prev = cum
    assert curve_from_sets(sets) == c


def test_sentence_type_distribution_hand_count():
    simple = "current/noun flows/verb"
    compound = "the/determiner switch/noun opens/verb and/coordinator the/determiner lamp/noun dims/verb"
    complex_ = "when/coordinator the/determiner switch/noun closes/verb the/determiner lamp/noun glows/verb"
    specs = [simple] * 6 + [compound] * 3 + [complex_]
    c = Corpus(tuple(make_sentence(t, f"s{i}") for i, t in enumerate(specs)))
    assert sentence_type_distribution(c) == {"simple": Fraction(6, 10), "compound": Fraction(3, 10),
                                             "complex": Fraction(1, 10)}
    only = Corpus(tuple(make_sentence(simple, f"s{i}") for i in range(3)))
    assert sentence_type_distribution(only) == {"simple": 1}
    assert sentence_type_distribution(Corpus()) == {}


def test_fixture_distribution(corpus):
    dist = sentence_type_distribution(corpus)
    assert sum(dist.values()) == 1
    assert dist["simple"] == max(dist.values())


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=1, max_size=14), st.data())
def test_segment_spread_within_one_sentence(lengths, data):
    n = data.draw(st.integers(1, len(lengths)))
    w = segment(corpus_of_lengths(lengths), n).word_counts
    assert max(w) - min(w) <= max(lengths)
