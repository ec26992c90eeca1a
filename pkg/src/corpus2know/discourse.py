"""Rhetorical, topical and discourse coverage statistics.

Everything here aggregates annotations that were made by hand (RST labels,
topical indentation, handled flags); nothing is inferred from raw text.
"""

import csv
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

TEXT_STRUCTURE = "text_structure"
TEXTUAL_EXPRESSION = "textual_expression"
INFORMATION_STRUCTURE = "information_structure"

RHETORICAL_RELATIONS = OrderedDict([
    (TEXT_STRUCTURE, ("Introduction", "Background", "Methodologies",
                      "Results", "Observations", "Conclusions")),
    (TEXTUAL_EXPRESSION, ("Common Knowledge", "Report", "Explanation",
                          "Claim", "Evaluation", "Inference", "Decision")),
    (INFORMATION_STRUCTURE, ("Description", "Classification", "Comparison",
                             "Sequence", "Cause-effect", "Contrast")),
])
RELATION_STRUCTURE = {rel: group for group, rels in RHETORICAL_RELATIONS.items() for rel in rels}
CAUSE_EFFECT = "Cause-effect"

HIGH_LEVEL_CONCEPTS = (
    "Electrical Quantity", "Circuit Components", "Diagrammatic Notation",
    "Electrical Process", "Electrical Device", "Units", "Atomic Level",
    "Circuits", "Environmental Factors", "Measuring Instrument", "Rules",
    "Materials",
)
_CONCEPT_BY_KEY = {c.casefold(): c for c in HIGH_LEVEL_CONCEPTS}

PROGRESSIONS = ("parallel", "sequential", "extended_parallel")


class DiscourseError(ValueError):
    pass


@dataclass(frozen=True)
class RhetoricalLabel:
    structure: str
    relation: str

    def __post_init__(self):
        if self.structure not in RHETORICAL_RELATIONS:
            raise DiscourseError(f"unknown rhetorical structure {self.structure!r}")
        if RELATION_STRUCTURE.get(self.relation) != self.structure:
            raise DiscourseError(
                f"rhetorical relation {self.relation!r} does not belong to {self.structure!r}")

    @classmethod
    def of(cls, relation):
        """Label for ``relation`` with its structure group filled in."""
        if relation not in RELATION_STRUCTURE:
            raise DiscourseError(f"unknown rhetorical relation {relation!r}")
        return cls(RELATION_STRUCTURE[relation], relation)


@dataclass(frozen=True)
class SentenceAnnotation:
    sentence_id: str
    rhetorical_labels: tuple = ()
    indentation: Optional[int] = None
    progression: Optional[str] = None
    handled: Optional[bool] = None


def annotations_from_corpus(corpus):
    return [SentenceAnnotation(s.id, tuple(s.rhetorical_labels), s.indentation,
                               s.progression, s.handled)
            for s in corpus.sentences]


def _annotations(source) -> list:
    if hasattr(source, "sentences"):
        return annotations_from_corpus(source)
    return list(source)


def merge_annotations(base, rhetoric=None, topical=None, handled=None):
    """Overlay sidecar annotations on ``base`` (keyed by sentence id).

    ``rhetoric`` maps id -> labels, ``topical`` maps id -> (indentation,
    progression, handled), ``handled`` maps id -> bool and only fills gaps
    left by explicit annotations.  Ids absent from ``base`` are appended in
    sidecar order.
    """
    merged = OrderedDict((a.sentence_id, a) for a in _annotations(base))
    for sid, labels in (rhetoric or {}).items():
        a = merged.get(sid, SentenceAnnotation(sid))
        merged[sid] = SentenceAnnotation(sid, tuple(labels), a.indentation, a.progression, a.handled)
    for sid, (indent, prog, hand) in (topical or {}).items():
        a = merged.get(sid, SentenceAnnotation(sid))
        merged[sid] = SentenceAnnotation(
            sid, a.rhetorical_labels,
            indent if indent is not None else a.indentation,
            prog if prog is not None else a.progression,
            hand if hand is not None else a.handled)
    for sid, hand in (handled or {}).items():
        a = merged.get(sid)
        if a is not None and a.handled is None:
            merged[sid] = SentenceAnnotation(sid, a.rhetorical_labels, a.indentation,
                                             a.progression, bool(hand))
    return list(merged.values())


# ---------------------------------------------------------------- rhetoric

@dataclass(frozen=True)
class RhetoricalRow:
    structure: str
    relation: str
    count: int
    mean: Fraction


@dataclass(frozen=True)
class RhetoricalDistribution:
    rows: tuple
    total: int

    def mean_of(self, relation):
        for row in self.rows:
            if row.relation == relation:
                return row.mean
        raise KeyError(relation)

    def by_structure(self):
        out = OrderedDict()
        for row in self.rows:
            out.setdefault(row.structure, []).append(row)
        return out


def rhetorical_distribution(source) -> RhetoricalDistribution:
    """Count each of the 19 relations and its share of all labels.

    ``source`` is a corpus, an iterable of :class:`SentenceAnnotation`, or a
    mapping ``relation -> count`` of already aggregated counts.
    """
    if isinstance(source, dict):
        counts = Counter()
        for rel, n in source.items():
            RhetoricalLabel.of(rel)
            if n < 0:
                raise DiscourseError(f"negative count for {rel!r}")
            counts[rel] += int(n)
    else:
        counts = Counter(lab.relation for a in _annotations(source) for lab in a.rhetorical_labels)
    total = sum(counts.values())
    if total == 0:
        raise DiscourseError("no rhetorical labels to aggregate")
    rows = tuple(RhetoricalRow(group, rel, counts[rel], Fraction(counts[rel], total))
                 for group, rels in RHETORICAL_RELATIONS.items() for rel in rels)
    return RhetoricalDistribution(rows, total)


def causal_coverage(source) -> Fraction:
    """Share of Cause-effect sentences that the system handled."""
    causal = [a for a in _annotations(source)
              if any(lab.relation == CAUSE_EFFECT for lab in a.rhetorical_labels)]
    if not causal:
        raise DiscourseError("no Cause-effect labels in the annotations")
    return Fraction(sum(1 for a in causal if a.handled), len(causal))


# ---------------------------------------------------------------- topical

@dataclass(frozen=True)
class TopicalRow:
    indentation: int
    sentences: int
    corpus_coverage: Fraction
    handled: int
    topical_coverage: Fraction


def topical_table(source) -> list:
    annotated = [a for a in _annotations(source) if a.indentation is not None]
    if not annotated:
        raise DiscourseError("no indentation annotations")
    total = len(annotated)
    per_level = Counter(a.indentation for a in annotated)
    handled = Counter(a.indentation for a in annotated if a.handled)
    return [TopicalRow(level, n, Fraction(n, total), handled[level], Fraction(handled[level], n))
            for level, n in sorted(per_level.items())]


def progression_counts(source) -> dict:
    counts = Counter(a.progression for a in _annotations(source) if a.progression)
    return {p: counts[p] for p in PROGRESSIONS}


# ---------------------------------------------------------------- discourse

@dataclass(frozen=True)
class DiscourseRow:
    concept: str
    covered: int
    in_discourse: int
    difference: int = field(init=False)
    coverage_pct: Fraction = field(init=False)
    deviation_pct: Fraction = field(init=False)

    def __post_init__(self):
        if self.covered < 0 or self.in_discourse < 0:
            raise DiscourseError(f"negative count for {self.concept!r}")
        if self.covered > self.in_discourse:
            raise DiscourseError(
                f"{self.concept!r}: covered ({self.covered}) exceeds occurrences in discourse "
                f"({self.in_discourse})")
        if self.in_discourse == 0:
            raise DiscourseError(f"{self.concept!r}: no occurrences in discourse")
        object.__setattr__(self, "difference", self.in_discourse - self.covered)
        object.__setattr__(self, "coverage_pct", Fraction(self.covered, self.in_discourse))
        object.__setattr__(self, "deviation_pct", Fraction(self.difference, self.in_discourse))


@dataclass(frozen=True)
class DiscourseTable:
    rows: tuple
    total: DiscourseRow
    summed: DiscourseRow = None    # column sums; differs from ``total`` only when one was given

    @property
    def total_consistent(self):
        return (self.total.covered, self.total.in_discourse) == \
            (self.summed.covered, self.summed.in_discourse)


def canonical_concept(label):
    try:
        return _CONCEPT_BY_KEY[label.strip().casefold()]
    except KeyError:
        raise DiscourseError(
            f"{label!r} is not a high-level concept; expected one of {', '.join(HIGH_LEVEL_CONCEPTS)}"
        ) from None


def discourse_table(occurrences, total=None) -> DiscourseTable:
    """Per-concept coverage and deviation, sorted by occurrences in discourse.

    ``occurrences`` maps concept -> (covered, in_discourse), or is an
    iterable of (concept, covered, in_discourse) triples.  ``total`` is an
    optional stated (covered, in_discourse) pair for the totals row, also
    accepted as a ``Total`` entry in ``occurrences``; the column sums are
    always kept in ``summed``.
    """
    items = occurrences.items() if isinstance(occurrences, dict) else \
        ((c, (cov, n)) for c, cov, n in occurrences)
    rows, seen = [], set()
    for concept, (covered, in_discourse) in items:
        if concept.strip().casefold() == "total":
            if total is not None:
                raise DiscourseError("totals given twice")
            total = (covered, in_discourse)
            continue
        concept = canonical_concept(concept)
        if concept in seen:
            raise DiscourseError(f"duplicate concept {concept!r}")
        seen.add(concept)
        rows.append(DiscourseRow(concept, int(covered), int(in_discourse)))
    if not rows:
        raise DiscourseError("no discourse occurrences given")
    rows.sort(key=lambda r: -r.in_discourse)
    summed = DiscourseRow("Total", sum(r.covered for r in rows), sum(r.in_discourse for r in rows))
    stated = summed if total is None else DiscourseRow("Total", int(total[0]), int(total[1]))
    return DiscourseTable(tuple(rows), stated, summed)


# ---------------------------------------------------------------- sidecars

def _read_csv(path, columns):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            missing = [c for c in columns if c not in (reader.fieldnames or [])]
            if missing:
                raise DiscourseError(f"{path}: missing column(s) {', '.join(missing)}")
            return [(reader.line_num, row) for row in reader]
    except UnicodeDecodeError as exc:
        raise DiscourseError(f"{path}: not UTF-8 ({exc})") from exc


def _parse_bool(text, where):
    value = text.strip().lower()
    if value in ("1", "true", "yes"):
        return True
    if value in ("0", "false", "no"):
        return False
    if value == "":
        return None
    raise DiscourseError(f"{where}: expected a boolean, got {text!r}")


def load_rhetoric_csv(path) -> dict:
    """``sentence_id,structure,relation`` rows -> id -> [RhetoricalLabel]."""
    out = OrderedDict()
    for line, row in _read_csv(path, ("sentence_id", "structure", "relation")):
        try:
            label = RhetoricalLabel(row["structure"].strip(), row["relation"].strip())
        except DiscourseError as exc:
            raise DiscourseError(f"{path}:{line}: {exc}") from None
        out.setdefault(row["sentence_id"].strip(), []).append(label)
    return out


def load_topical_csv(path) -> dict:
    """``sentence_id,indentation,progression,handled`` rows."""
    out = OrderedDict()
    for line, row in _read_csv(path, ("sentence_id", "indentation", "progression", "handled")):
        where = f"{path}:{line}"
        try:
            indent = int(row["indentation"]) if row["indentation"].strip() else None
        except ValueError:
            raise DiscourseError(f"{where}: bad indentation {row['indentation']!r}") from None
        if indent is not None and indent < 1:
            raise DiscourseError(f"{where}: indentation must be >= 1")
        prog = row["progression"].strip() or None
        if prog is not None and prog not in PROGRESSIONS:
            raise DiscourseError(f"{where}: unknown progression {prog!r}")
        out[row["sentence_id"].strip()] = (indent, prog, _parse_bool(row["handled"], where))
    return out


def load_discourse_csv(path) -> dict:
    """``concept,covered,in_discourse`` rows -> concept -> (covered, in_discourse)."""
    out = OrderedDict()
    for line, row in _read_csv(path, ("concept", "covered", "in_discourse")):
        try:
            out[row["concept"].strip()] = (int(row["covered"]), int(row["in_discourse"]))
        except ValueError:
            raise DiscourseError(f"{path}:{line}: counts must be integers") from None
    return out
