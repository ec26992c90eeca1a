"""Lexicon entries, vocabulary coverage and corpus-driven augmentation."""

import csv
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction

from .ccg.categories import parse_category, CategoryError
from .ccg.grammar import default_categories  # noqa: F401  (re-exported)
from .corpus import POS_TAGS, stem, unique_words

TSV_COLUMNS = ("lemma", "pos", "categories", "inflections")
AUGMENT_KEYS = ("stem", "surface")


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class LexEntry:
    lemma: str
    pos: str
    categories: frozenset = frozenset()
    inflections: frozenset = frozenset()
    particles: frozenset = frozenset()

    def __post_init__(self):
        if not self.lemma:
            raise LexiconError("lexicon entry with empty lemma")
        if self.pos not in POS_TAGS:
            raise LexiconError(f"entry {self.lemma!r}: unknown part of speech {self.pos!r}")
        for name in ("categories", "inflections", "particles"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @property
    def key(self):
        return (self.lemma, self.pos)

    @property
    def forms(self):
        return {self.lemma.casefold()} | {f.casefold() for f in self.inflections}


@dataclass
class Lexicon:
    entries: dict = field(default_factory=OrderedDict)
    version: str = ""

    def __post_init__(self):
        entries = self.entries
        self.entries = OrderedDict()
        self._forms = {}
        for e in (entries.values() if isinstance(entries, dict) else entries):
            self.add(e)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.values())

    def __contains__(self, key):
        return key in self.entries

    def __eq__(self, other):
        return isinstance(other, Lexicon) and self.version == other.version and \
            dict(self.entries) == dict(other.entries)

    def add(self, entry):
        if entry.key in self.entries:
            raise LexiconError(f"duplicate lexicon entry {entry.lemma!r}/{entry.pos}")
        self.entries[entry.key] = entry
        for form in entry.forms:
            self._forms.setdefault(form, []).append(entry.key)

    def replace(self, entry):
        old = self.entries.get(entry.key)
        if old is not None:
            for form in old.forms:
                self._forms[form].remove(old.key)
            del self.entries[entry.key]
        self.add(entry)

    def forms(self):
        return {f for f, keys in self._forms.items() if keys}

    def has_form(self, form, pos=None):
        keys = self._forms.get(form.casefold(), ())
        return any(pos is None or k[1] == pos for k in keys)

    def lookup(self, token):
        """Entries matching the token's part of speech by surface or stem."""
        found = []
        for form in (token.lower, token.stem.casefold(), stem(token.surface)):
            for key in self._forms.get(form, ()):
                if key[1] == token.pos and self.entries[key] not in found:
                    found.append(self.entries[key])
        return found


# ------------------------------------------------------------------ TSV I/O

def _split(cell, sep):
    return [x.strip() for x in (cell or "").split(sep) if x.strip()]


def load_lexicon(path) -> Lexicon:
    """Read the TSV lexicon: lemma, pos, categories (;-joined), inflections
    (,-joined), plus an optional particles column (,-joined)."""
    version = ""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            lines = fh.read().splitlines()
    except UnicodeDecodeError as exc:
        raise LexiconError(f"{path}: not UTF-8 ({exc})") from exc
    body = []
    for line in lines:
        if line.startswith("#"):
            meta = line[1:].strip()
            if meta.startswith("version:"):
                version = meta.split(":", 1)[1].strip()
            continue
        body.append(line)
    reader = csv.reader(body, delimiter="\t", quoting=csv.QUOTE_NONE)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header[:4]) != TSV_COLUMNS:
        raise LexiconError(f"{path}: header must start with {' '.join(TSV_COLUMNS)}")
    has_particles = len(header) > 4 and header[4].strip() == "particles"
    lexicon = Lexicon(version=version)
    for lineno, row in enumerate(reader, start=2):
        if not any(cell.strip() for cell in row):
            continue
        row = row + [""] * (5 - len(row))
        lemma, pos = row[0].strip(), row[1].strip()
        try:
            cats = frozenset(parse_category(c) for c in _split(row[2], ";"))
        except CategoryError as exc:
            raise LexiconError(f"{path}:{lineno}: {exc}") from None
        try:
            lexicon.add(LexEntry(lemma, pos, cats, frozenset(_split(row[3], ",")),
                                 frozenset(p.casefold() for p in _split(row[4], ","))
                                 if has_particles else frozenset()))
        except LexiconError as exc:
            raise LexiconError(f"{path}:{lineno}: {exc}") from None
    return lexicon


def save_lexicon(lexicon, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dump_lexicon(lexicon))


def dump_lexicon(lexicon) -> str:
    lines = []
    if lexicon.version:
        lines.append(f"# version: {lexicon.version}")
    lines.append("\t".join(TSV_COLUMNS + ("particles",)))
    for e in lexicon:
        lines.append("\t".join((
            e.lemma, e.pos,
            ";".join(sorted(str(c) for c in e.categories)),
            ",".join(sorted(e.inflections)),
            ",".join(sorted(e.particles)))))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ analysis

@dataclass(frozen=True)
class CoverageReport:
    overlap_count: int
    unique_word_count: int
    ratio: Fraction

    @classmethod
    def from_counts(cls, overlap, unique):
        if unique <= 0:
            raise LexiconError("coverage is undefined without corpus words")
        if not 0 <= overlap <= unique:
            raise LexiconError("overlap must lie between 0 and the unique word count")
        return cls(overlap, unique, Fraction(overlap, unique))


def vocabulary_coverage(lexicon, corpus) -> CoverageReport:
    """Unique corpus words whose surface or stem is a lemma or inflection."""
    words = unique_words(corpus)
    if not words:
        raise LexiconError("coverage is undefined for an empty corpus")
    forms = lexicon.forms()
    overlap = sum(1 for surface, stems in words.items()
                  if surface in forms or stem(surface) in forms or stems & forms)
    return CoverageReport.from_counts(overlap, len(words))


def augment_from_corpus(lexicon, corpus, key="stem") -> dict:
    """Add every (word, pos) pair from the corpus that the lexicon lacks.

    ``key`` picks the word form used for the new lemma: the stem (default,
    so inflected variants share one entry) or the case-folded surface.  New
    entries start without categories and record the surfaces seen as
    inflections.  Returns the number of entries added per part of speech.
    """
    if key not in AUGMENT_KEYS:
        raise LexiconError(f"augmentation key must be one of {AUGMENT_KEYS}")
    added = OrderedDict((p, 0) for p in POS_TAGS)
    fresh = {}
    for s in corpus.sentences:
        for t in s.tokens:
            word = t.stem.casefold() if key == "stem" else t.lower
            k = (word, t.pos)
            if k in fresh:
                if t.lower != word and t.lower not in fresh[k].inflections:
                    fresh[k] = LexEntry(word, t.pos, frozenset(), fresh[k].inflections | {t.lower})
                    lexicon.replace(fresh[k])
                continue
            if lexicon.has_form(word, t.pos):
                continue
            entry = LexEntry(word, t.pos, frozenset(),
                             frozenset({t.lower}) if t.lower != word else frozenset())
            lexicon.add(entry)
            fresh[k] = entry
            added[t.pos] += 1
    return added
