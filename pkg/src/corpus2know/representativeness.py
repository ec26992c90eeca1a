"""Corpus saturation (closure) analysis over equal-sized samples."""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .corpus import POS_TAGS, classify_sentence

DEFAULT_SAMPLES = 15
DEFAULT_THRESHOLD = Fraction(5, 100)
DEFAULT_WINDOW = 3


class SaturationError(ValueError):
    pass


@dataclass(frozen=True)
class SamplePartition:
    corpus: object
    bounds: tuple          # (first sentence, one past last sentence) per sample
    target_sample_count: int
    mean_sample_words: Fraction

    def __len__(self):
        return len(self.bounds)

    def sample(self, i):
        a, b = self.bounds[i]
        return self.corpus.sentences[a:b]

    @property
    def samples(self):
        return [self.sample(i) for i in range(len(self.bounds))]

    @property
    def word_counts(self):
        return [sum(len(s.tokens) for s in self.sample(i)) for i in range(len(self.bounds))]

    @property
    def token_ranges(self):
        out, offset = [], 0
        for n in self.word_counts:
            out.append((offset, offset + n))
            offset += n
        return out


_INF = np.iinfo(np.int64).max // 4


def _balanced_cuts(prefix, n, lo=None, hi=None):
    """Least-squares cut points, optionally with every sample size in
    ``[lo, hi]``.  Returns ``(cost, cuts)`` or None when no cut is feasible."""
    N = len(prefix) - 1
    total = int(prefix[-1])
    cost = np.full(N + 1, _INF, dtype=np.int64)
    cost[0] = 0
    back = []
    for k in range(1, n + 1):
        new = np.full(N + 1, _INF, dtype=np.int64)
        arg = np.zeros(N + 1, dtype=np.int64)
        for j in range(k, N - (n - k) + 1):
            a, b = k - 1, j
            if lo is not None:
                # prefix is increasing, so the admissible starts form a range
                a = max(a, int(np.searchsorted(prefix, prefix[j] - hi, side="left")))
                b = min(b, int(np.searchsorted(prefix, prefix[j] - lo, side="right")))
            if a >= b:
                continue
            i = np.arange(a, b)
            c = cost[i] + (n * (prefix[j] - prefix[i]) - total) ** 2
            c[cost[i] >= _INF] = _INF
            m = int(np.argmin(c))
            new[j], arg[j] = c[m], i[m]
        back.append(arg)
        cost = new
    if cost[N] >= _INF:
        return None
    cuts = [N]
    for k in range(n, 0, -1):
        cuts.append(int(back[k - 1][cuts[-1]]))
    cuts.reverse()
    return int(cost[N]), cuts


def segment(corpus, n=DEFAULT_SAMPLES) -> SamplePartition:
    """Split ``corpus`` into ``n`` contiguous samples of near-equal word count.

    Sentences are never split.  Cut points minimise the summed squared
    deviation of sample sizes from the mean (dynamic programming over
    sentence boundaries; ties go to the earliest cut), subject to the
    largest and smallest sample differing by at most the longest sentence.
    """
    sentences = corpus.sentences
    if n < 1:
        raise SaturationError("sample count must be at least 1")
    if not sentences:
        raise SaturationError("cannot segment an empty corpus")
    N = len(sentences)
    if n > N:
        raise SaturationError(f"cannot form {n} non-empty samples from {N} sentences")
    lengths = np.array([len(s.tokens) for s in sentences], dtype=np.int64)
    prefix = np.concatenate([[0], np.cumsum(lengths)])
    total = int(prefix[-1])
    longest = int(lengths.max())
    _, cuts = _balanced_cuts(prefix, n)
    sizes = np.diff(prefix[cuts])
    if sizes.max() - sizes.min() > longest:
        # the mean lies between the smallest and largest sample, which bounds
        # the band's lower edge
        best = None
        for lo in range(max(0, -(-total // n) - longest), total // n + 1):
            found = _balanced_cuts(prefix, n, lo, lo + longest)
            if found is not None and (best is None or found[0] < best[0]):
                best = found
        if best is not None:
            cuts = best[1]
    bounds = tuple(zip(cuts, cuts[1:]))
    return SamplePartition(corpus, bounds, n, Fraction(total, n))


# ------------------------------------------------------------------ selectors

class TermSelector:
    """Domain terms from the corpus term list, longest match, case-folded."""

    item_class = "technical_term"

    def __init__(self, terms):
        self.terms = {tuple(t.casefold().split()) for t in terms if t.strip()}
        if not self.terms:
            raise SaturationError("term selector needs a non-empty term list")
        self.longest = max(len(t) for t in self.terms)

    def items(self, sentence):
        words = [t.lower for t in sentence.tokens]
        i = 0
        while i < len(words):
            for size in range(min(self.longest, len(words) - i), 0, -1):
                cand = tuple(words[i:i + size])
                if cand in self.terms:
                    yield " ".join(cand)
                    i += size
                    break
            else:
                i += 1


class PosSelector:
    """Case-folded stems of tokens in the given part-of-speech classes."""

    def __init__(self, *pos):
        bad = [p for p in pos if p not in POS_TAGS]
        if bad or not pos:
            raise SaturationError(f"unknown part of speech: {', '.join(bad) or '(none)'}")
        self.pos = frozenset(pos)
        self.item_class = "+".join(pos)

    def items(self, sentence):
        for t in sentence.tokens:
            if t.pos in self.pos:
                yield t.stem.casefold()


class LabelSelector:
    """Labels attached to sentences from outside (concepts, relations)."""

    def __init__(self, labels_by_sentence, item_class):
        self.labels = labels_by_sentence
        self.item_class = item_class

    def items(self, sentence):
        return iter(self.labels.get(sentence.id, ()))


def make_selector(text, corpus=None):
    """Build a selector from ``term`` or ``pos:<tag>[+<tag>...]``."""
    if text == "term":
        return TermSelector(corpus.term_list if corpus is not None else ())
    if text.startswith("pos:"):
        return PosSelector(*text[4:].split("+"))
    raise SaturationError(f"unknown selector {text!r}")


@dataclass(frozen=True)
class SaturationCurve:
    per_sample_new: tuple
    cumulative: tuple
    item_class: str

    def __post_init__(self):
        if len(self.per_sample_new) != len(self.cumulative):
            raise SaturationError("curve columns differ in length")

    def rows(self):
        return [(i + 1, new, cum) for i, (new, cum) in enumerate(zip(self.per_sample_new, self.cumulative))]


def saturation_curve(partition, selector) -> SaturationCurve:
    seen = set()
    new_counts, cumulative = [], []
    for i in range(len(partition)):
        fresh = set()
        for s in partition.sample(i):
            for item in selector.items(s):
                if item not in seen:
                    fresh.add(item)
        seen |= fresh
        new_counts.append(len(fresh))
        cumulative.append(len(seen))
    return SaturationCurve(tuple(new_counts), tuple(cumulative), selector.item_class)


def curve_from_sets(per_sample_items, item_class="items") -> SaturationCurve:
    """Curve over already-grouped item sets, one per sample."""
    seen = set()
    new, cum = [], []
    for items in per_sample_items:
        fresh = set(items) - seen
        seen |= fresh
        new.append(len(fresh))
        cum.append(len(seen))
    return SaturationCurve(tuple(new), tuple(cum), item_class)


@dataclass(frozen=True)
class ClosureVerdict:
    saturated: bool
    saturation_index: Optional[int]
    threshold: Fraction
    window: int


def closure_test(curve, threshold=DEFAULT_THRESHOLD, window=DEFAULT_WINDOW) -> ClosureVerdict:
    """Earliest sample from which the share of new types stays at or under
    ``threshold`` for ``window`` consecutive samples.

    A sample with nothing seen yet (cumulative 0) counts as having no new
    types.
    """
    threshold = Fraction(threshold)
    if window < 1:
        raise SaturationError("window must be at least 1")
    if not 0 < threshold < 1:
        raise SaturationError("threshold must lie strictly between 0 and 1")
    n = len(curve.per_sample_new)
    if window > n:
        raise SaturationError(f"window {window} exceeds the {n} samples in the curve")
    quiet = [cum == 0 or Fraction(new, cum) <= threshold
             for new, cum in zip(curve.per_sample_new, curve.cumulative)]
    for i in range(n - window + 1):
        if all(quiet[i:i + window]):
            return ClosureVerdict(True, i, threshold, window)
    return ClosureVerdict(False, None, threshold, window)


def sentence_type_distribution(corpus) -> dict:
    """Share of each sentence structure among classified (non-unknown) sentences."""
    counts = Counter(classify_sentence(s) for s in corpus.sentences)
    counts.pop("unknown", None)
    total = sum(counts.values())
    if total == 0:
        return {}
    return {k: Fraction(counts[k], total) for k in ("simple", "compound", "complex") if counts[k]}
