"""Published summary counts for the DC-circuit corpus and checks that
recompute their percentages.

The original corpus is not available, so these raw counts are the only
ground truth the toolkit can be checked against.  Each check recomputes a
printed figure from its inputs and records whether it matches.
"""

from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction

from .discourse import discourse_table, rhetorical_distribution
from .rounding import format_percent, round_percent

CORPUS_SOURCES = 141
CORPUS_SENTENCES = 1029
CORPUS_WORDS = 18834
SAMPLES = 15
MEAN_SAMPLE_WORDS = 1267

# (overlap, unique words, printed percent)
VOCABULARY_INITIAL = (101, 1902, 5)
VOCABULARY_AUGMENTED = (1783, 1902, 90)

AUGMENTED_ENTRIES = OrderedDict([
    ("Determiner", 19), ("Coordinator", 5), ("Noun and Pronoun", 2094), ("Adjective", 364),
    ("Preposition", 71), ("Adverb", 177), ("Verb", 264),
])

# (total sentences, parsed, printed percent)
PARSE_PRELIMINARY = (1029, 0, 0)
PARSE_EVALUATED = (981, 300, 31)

RHETORIC_COUNTS = OrderedDict([
    ("Introduction", 117), ("Background", 356), ("Methodologies", 60), ("Results", 51),
    ("Observations", 180), ("Conclusions", 42), ("Common Knowledge", 74), ("Report", 545),
    ("Explanation", 192), ("Claim", 85), ("Evaluation", 3), ("Inference", 13),
    ("Decision", 59), ("Description", 817), ("Classification", 13), ("Comparison", 25),
    ("Sequence", 34), ("Cause-effect", 58), ("Contrast", 17),
])
RHETORIC_PRINTED_MEANS = OrderedDict([
    ("Introduction", "4.33"), ("Background", "13.19"), ("Methodologies", "2.22"),
    ("Results", "1.89"), ("Observations", "6.66"), ("Conclusions", "1.55"),
    ("Common Knowledge", "2.74"), ("Report", "20.18"), ("Explanation", "7.11"),
    ("Claim", "3.15"), ("Evaluation", "0.11"), ("Inference", "0.48"), ("Decision", "2.18"),
    ("Description", "30.25"), ("Classification", "0.48"), ("Comparison", "0.93"),
    ("Sequence", "1.26"), ("Cause-effect", "2.14"), ("Contrast", "0.63"),
])
RHETORIC_TOTAL = 2701

# indentation -> (sentences, printed corpus %, handled, printed topical %)
TOPICAL_ROWS = OrderedDict([
    (1, (641, 66, 197, 31)), (2, (259, 22, 65, 25)), (3, (86, 7, 22, 26)),
    (4, (26, 3, 10, 38)), (5, (11, 1, 4, 36)), (6, (4, 1, 2, 33)),
])

# concept -> (covered, in discourse, printed difference, printed coverage %, printed deviation %)
DISCOURSE_ROWS = OrderedDict([
    ("Electrical Quantity", (335, 1433, 1098, 24, 77)),
    ("Circuit Components", (154, 685, 531, 23, 78)),
    ("Diagrammatic Notation", (94, 482, 388, 20, 81)),
    ("Electrical Process", (63, 442, 379, 15, 86)),
    ("Electrical Device", (83, 313, 230, 27, 74)),
    ("Units", (100, 211, 111, 48, 53)),
    ("Atomic Level", (31, 161, 130, 20, 81)),
    ("Circuits", (30, 140, 110, 22, 79)),
    ("Environmental Factors", (20, 110, 90, 19, 82)),
    ("Measuring Instrument", (46, 96, 50, 48, 53)),
    ("Rules", (13, 47, 34, 28, 73)),
    ("Materials", (4, 21, 17, 20, 81)),
])
DISCOURSE_TOTAL = (969, 4120, 3151, 24, 77)

RELATIONS_DOCUMENTED = 55
RELATIONS_WITH_INVERSE_DOCUMENTED = 42


@dataclass(frozen=True)
class Check:
    figure: str          # e.g. "Table III coverage"
    inputs: str
    printed: str
    computed: str
    reproduced: bool
    note: str = ""

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _pct_check(figure, num, den, printed, mode, note=""):
    value = Fraction(num, den)
    computed = round_percent(value, mode)
    return Check(figure, f"{num}/{den}", f"{printed}%", format_percent(value, mode),
                 computed == printed, note)


def vocabulary_checks(mode="half-up"):
    out = []
    for name, (overlap, unique, printed) in (("Table I", VOCABULARY_INITIAL),
                                             ("Table III", VOCABULARY_AUGMENTED)):
        c = _pct_check(f"{name} vocabulary coverage", overlap, unique, printed, mode)
        if not c.reproduced:
            exact = format_percent(Fraction(overlap, unique), mode, 1)
            c = Check(c.figure, c.inputs, c.printed, exact, False,
                      f"counts give {exact}; the printed figure is not reproducible from them")
        out.append(c)
    return out


def parse_rate_checks(mode="half-up"):
    return [_pct_check(f"Table IV {label} parse rate", parsed, total, printed, mode)
            for label, (total, parsed, printed) in (("preliminary", PARSE_PRELIMINARY),
                                                    ("evaluated", PARSE_EVALUATED))]


def corpus_checks():
    mean = Fraction(CORPUS_WORDS, SAMPLES)
    ok = round_percent(mean / 100) == MEAN_SAMPLE_WORDS
    return [Check("mean sample size", f"{CORPUS_WORDS}/{SAMPLES}", str(MEAN_SAMPLE_WORDS),
                  str(round_percent(mean / 100, digits=1)), ok,
                  "" if ok else "the stated word and sample counts give a different mean")]


def rhetoric_checks():
    dist = rhetorical_distribution(RHETORIC_COUNTS)
    printed_denominator = all(
        abs(Fraction(c, RHETORIC_TOTAL) * 100 - Fraction(RHETORIC_PRINTED_MEANS[k])) <= Fraction(1, 100)
        for k, c in RHETORIC_COUNTS.items())
    note = ""
    if dist.total != RHETORIC_TOTAL:
        note = (f"counts sum to {dist.total}; printed means "
                f"{'are' if printed_denominator else 'are not'} count/{RHETORIC_TOTAL}")
    out = [Check("Table VI total", "sum of counts", str(RHETORIC_TOTAL), str(dist.total),
                 dist.total == RHETORIC_TOTAL, note)]
    for row in dist.rows:
        printed = RHETORIC_PRINTED_MEANS[row.relation]
        computed = round_percent(row.mean, "half-up", 2)
        ok = abs(row.mean * 100 - Fraction(printed)) <= Fraction(1, 100)
        out.append(Check(f"Table VI mean {row.relation}", f"{row.count}/{dist.total}",
                         f"{printed}%", f"{computed}%", ok))
    return out


def topical_checks(mode="half-up"):
    total = sum(n for n, _, _, _ in TOPICAL_ROWS.values())
    out = []
    for level, (n, corpus_pct, handled, topical_pct) in TOPICAL_ROWS.items():
        c = _pct_check(f"Table VII indentation {level} corpus coverage", n, total,
                       corpus_pct, mode)
        if not c.reproduced:
            c = Check(c.figure, c.inputs, c.printed, c.computed, False,
                      "row counts do not give the printed share")
        out.append(c)
        c = _pct_check(f"Table VII indentation {level} topical coverage", handled, n,
                       topical_pct, mode)
        if not c.reproduced:
            c = Check(c.figure, c.inputs, c.printed, c.computed, False,
                      "row counts do not give the printed share")
        out.append(c)
    return out


def discourse_checks(mode="ceiling"):
    table = discourse_table({k: v[:2] for k, v in DISCOURSE_ROWS.items()},
                            total=DISCOURSE_TOTAL[:2])
    printed = dict(DISCOURSE_ROWS)
    printed["Total"] = DISCOURSE_TOTAL
    out = [Check("Table VIII column sums", "sum of rows",
                 f"{DISCOURSE_TOTAL[0]}/{DISCOURSE_TOTAL[1]}",
                 f"{table.summed.covered}/{table.summed.in_discourse}", table.total_consistent,
                 "" if table.total_consistent else "printed totals differ from the row sums")]
    for row in table.rows + (table.total,):
        _, _, diff, cov, dev = printed[row.concept]
        out.append(Check(f"Table VIII {row.concept} difference",
                         f"{row.in_discourse}-{row.covered}", str(diff), str(row.difference),
                         row.difference == diff))
        for what, value, want in (("coverage", row.coverage_pct, cov),
                                  ("deviation", row.deviation_pct, dev)):
            got = round_percent(value, mode)
            out.append(Check(f"Table VIII {row.concept} {what}", str(value), f"{want}%",
                             f"{got}%", got == want))
    return out


def relation_count_checks(registry):
    counts = registry.counts()
    note = (f"raw cells {counts.predicate_cells}/{counts.inverse_cells}, distinct "
            f"{counts.distinct_predicates}/{counts.distinct_predicates_with_inverse}")
    return [Check("relation framework totals", "predicate/inverse labels",
                  f"{RELATIONS_DOCUMENTED}/{RELATIONS_WITH_INVERSE_DOCUMENTED}",
                  f"{counts.predicate_cells}/{counts.inverse_cells}",
                  counts.matches_documented, "" if counts.matches_documented else note)]


def all_checks(mode="half-up", registry=None):
    """Every reproduction check.  Percentages use ``mode`` except the
    discourse table, which is printed with ceiling rounding."""
    out = corpus_checks() + vocabulary_checks(mode) + parse_rate_checks(mode) \
        + rhetoric_checks() + topical_checks(mode) + discourse_checks()
    if registry is not None:
        out += relation_count_checks(registry)
    return out


def unreproduced(checks):
    return [c for c in checks if not c.reproduced]
