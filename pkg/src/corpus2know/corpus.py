"""Annotated corpus model: tokens, sentences, XML ingestion and basic counts."""

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional

from lxml import etree

from .discourse import PROGRESSIONS, RhetoricalLabel, DiscourseError

POS_TAGS = ("noun", "pronoun", "verb", "adverb", "adjective", "preposition",
            "coordinator", "determiner", "modal")
STRUCTURES = ("simple", "compound", "complex", "unknown")
SUBORDINATORS = ("since", "as", "because", "when", "if", "although")


class CorpusError(Exception):
    pass


class CorpusParseError(CorpusError):
    pass


class CorpusValidationError(CorpusError):
    pass


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    stem: str = ""
    index: int = 0
    lead: str = ""
    punct: str = ""

    def __post_init__(self):
        if not self.surface:
            raise CorpusValidationError("token surface is empty")
        if self.pos not in POS_TAGS:
            raise CorpusValidationError(
                f"token {self.surface!r}: part of speech {self.pos!r} is not one of {', '.join(POS_TAGS)}")
        if not self.stem:
            object.__setattr__(self, "stem", stem(self.surface))

    @property
    def lower(self):
        return self.surface.casefold()


@dataclass(frozen=True)
class Sentence:
    id: str
    tokens: tuple
    structure: Optional[str] = None
    indentation: Optional[int] = None
    progression: Optional[str] = None
    rhetorical_labels: tuple = ()
    handled: Optional[bool] = None
    document: str = ""

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "rhetorical_labels", tuple(self.rhetorical_labels))
        if not self.tokens:
            raise CorpusValidationError(f"sentence {self.id!r} has no tokens")
        if self.structure is not None and self.structure not in STRUCTURES:
            raise CorpusValidationError(f"sentence {self.id!r}: unknown structure {self.structure!r}")
        if self.indentation is not None and self.indentation < 1:
            raise CorpusValidationError(f"sentence {self.id!r}: indentation must be >= 1")
        if self.progression is not None and self.progression not in PROGRESSIONS:
            raise CorpusValidationError(f"sentence {self.id!r}: unknown progression {self.progression!r}")

    @property
    def text(self):
        return " ".join(f"{t.lead}{t.surface}{t.punct}" for t in self.tokens)

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class Corpus:
    sentences: tuple = ()
    source_count: int = 0
    term_list: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        object.__setattr__(self, "term_list", frozenset(self.term_list))
        seen = set()
        for s in self.sentences:
            if s.id in seen:
                raise CorpusValidationError(f"duplicate sentence id {s.id!r}")
            seen.add(s.id)
        if self.source_count < 0:
            raise CorpusValidationError("source count must be non-negative")

    @property
    def word_count(self):
        return sum(len(s.tokens) for s in self.sentences)

    def sentence(self, sid):
        for s in self.sentences:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def __add__(self, other):
        return Corpus(self.sentences + other.sentences, self.source_count + other.source_count,
                      self.term_list | other.term_list)


@dataclass(frozen=True)
class CorpusStats:
    sentence_count: int
    word_count: int
    unique_word_count: int


def compute_stats(corpus) -> CorpusStats:
    words = [t.lower for s in corpus.sentences for t in s.tokens]
    return CorpusStats(len(corpus.sentences), len(words), len(set(words)))


def unique_words(corpus):
    """Case-folded distinct surfaces, each with every stem seen for it."""
    out = {}
    for s in corpus.sentences:
        for t in s.tokens:
            out.setdefault(t.lower, set()).add(t.stem.casefold())
    return out


# ------------------------------------------------------------------ stemming

_NO_S_STRIP = ("ss", "us", "is")
_ES_AFTER = ("s", "x", "z", "ch", "sh")
_NO_UNDOUBLE = set("lsz")
_E_RESTORE = ("c", "v", "u")
_STEM_EXCEPTIONS = {"series": "series", "species": "species"}
_VOWELS = set("aeiouy")


def _undouble(w):
    if len(w) >= 2 and w[-1] == w[-2] and w[-1] not in _VOWELS and w[-1] not in _NO_UNDOUBLE:
        return w[:-1]
    return w


def _ok(base):
    return len(base) >= 3 and any(ch in _VOWELS for ch in base)


def _strip_once(w):
    if w in _STEM_EXCEPTIONS:
        return w
    if w.endswith("ies") and _ok(w[:-3] + "y"):
        return w[:-3] + "y"
    if w.endswith("es") and w[:-2].endswith(_ES_AFTER) and _ok(w[:-2]):
        return w[:-2]
    if w.endswith("s") and not w.endswith(_NO_S_STRIP) and _ok(w[:-1]):
        return w[:-1]
    for suffix in ("ing", "ed"):
        if w.endswith(suffix) and _ok(w[:-len(suffix)]):
            base = _undouble(w[:-len(suffix)])
            if base.endswith(_E_RESTORE):
                base += "e"
            return base
    if w.endswith("er") and len(w) > 5 and _ok(w[:-2]):
        return _undouble(w[:-2])
    return w


@lru_cache(maxsize=65536)
def stem(word: str) -> str:
    """Suffix-stripping fallback stemmer.

    Rules are applied until nothing changes, so the result is a fixed point
    and ``stem(stem(w)) == stem(w)`` always holds.
    """
    if not word:
        raise ValueError("cannot stem an empty word")
    w = word.casefold()
    while True:
        nxt = _strip_once(w)
        if nxt == w:
            return w
        w = nxt


# ------------------------------------------------------- sentence structure

def finite_verb_positions(sentence):
    """Indices of finite verbs; a modal followed by a verb counts once, at the modal."""
    toks = sentence.tokens
    out = []
    i = 0
    while i < len(toks):
        if toks[i].pos == "modal" and i + 1 < len(toks) and toks[i + 1].pos == "verb":
            out.append(i)
            i += 2
            continue
        if toks[i].pos == "verb":
            out.append(i)
        i += 1
    return out


def classify_sentence(sentence, subordinators=SUBORDINATORS) -> str:
    if sentence.structure is not None:
        return sentence.structure
    verbs = finite_verb_positions(sentence)
    if not verbs:
        return "unknown"
    if len(verbs) == 1:
        return "simple"
    subs = {w.casefold() for w in subordinators}
    coords = [i for i, t in enumerate(sentence.tokens) if t.pos == "coordinator"]
    if any(sentence.tokens[i].lower in subs and i < verbs[-1] for i in coords):
        return "complex"
    if any(verbs[0] < i < verbs[-1] for i in coords):
        return "compound"
    return "unknown"


# ------------------------------------------------------------------ XML I/O

@lru_cache(maxsize=1)
def _schema():
    with resources.files(__package__).joinpath("data/corpus.xsd").open("rb") as fh:
        return etree.XMLSchema(etree.parse(fh))


def schema_path():
    return resources.files(__package__).joinpath("data/corpus.xsd")


def _bool_attr(value):
    return None if value is None else value.strip() in ("true", "1")


def _parse_tree(source):
    parser = etree.XMLParser(remove_blank_text=False, resolve_entities=False, no_network=True)
    try:
        if isinstance(source, bytes):
            return etree.fromstring(source, parser).getroottree()
        if isinstance(source, str) and source.lstrip().startswith("<"):
            return etree.fromstring(source.encode("utf-8"), parser).getroottree()
        return etree.parse(str(source), parser)
    except etree.XMLSyntaxError as exc:
        line = exc.position[0] if exc.position else "?"
        raise CorpusParseError(f"malformed corpus XML at line {line}: {exc.msg}") from exc


def ingest_corpus(source) -> Corpus:
    """Read an annotated XML corpus (path, XML string or bytes)."""
    tree = _parse_tree(source)
    root = tree.getroot()
    if root.tag != "corpus":
        raise CorpusValidationError(f"line {root.sourceline}: root element is <{root.tag}>, expected <corpus>")
    for tok in root.iter("token"):
        pos = tok.get("pos")
        if pos is not None and pos not in POS_TAGS:
            sent = tok.getparent()
            sid = sent.get("id") if sent is not None else "?"
            raise CorpusValidationError(
                f"line {tok.sourceline}: token {(tok.text or '').strip()!r} in sentence {sid!r} "
                f"has part of speech {pos!r}, not one of {', '.join(POS_TAGS)}")
    schema = _schema()
    if not schema.validate(tree):
        err = schema.error_log.last_error
        raise CorpusValidationError(f"line {err.line}: {err.message}")

    sentences, terms = [], set()
    for child in root:
        if not isinstance(child.tag, str):
            continue
        if child.tag == "term":
            terms.add(" ".join(child.text.split()))
        elif child.tag == "document":
            for node in child:
                if not isinstance(node.tag, str):
                    continue
                if node.tag == "topic":
                    indent = int(node.get("indentation"))
                    for s in node.iter("sentence"):
                        sentences.append(_sentence(s, child.get("id"), indent, node.get("progression")))
                else:
                    sentences.append(_sentence(node, child.get("id")))
    return Corpus(tuple(sentences), int(root.get("sources", 0)), frozenset(terms))


def _sentence(node, doc_id, indent=None, progression=None):
    tokens = []
    labels = []
    for i, t in enumerate(node.iter("token")):
        tokens.append(Token(t.text.strip(), t.get("pos"), t.get("stem") or "", i,
                            t.get("lead", ""), t.get("punct", "")))
    for r in node.iter("rst"):
        try:
            labels.append(RhetoricalLabel(r.get("structure"), r.get("relation")))
        except DiscourseError as exc:
            raise CorpusValidationError(f"line {r.sourceline}: {exc}") from None
    if node.get("indentation") is not None:
        indent = int(node.get("indentation"))
    return Sentence(node.get("id"), tuple(tokens), node.get("structure"), indent,
                    node.get("progression") or progression, tuple(labels),
                    _bool_attr(node.get("handled")), doc_id or "")


def serialize_corpus(corpus) -> bytes:
    root = etree.Element("corpus", sources=str(corpus.source_count))
    doc = None
    for s in corpus.sentences:
        if doc is None or doc.get("id") != (s.document or "d0"):
            doc = etree.SubElement(root, "document", id=s.document or "d0")
        node = etree.SubElement(doc, "sentence", id=s.id)
        for attr in ("structure", "indentation", "progression"):
            value = getattr(s, attr)
            if value is not None:
                node.set(attr, str(value))
        if s.handled is not None:
            node.set("handled", "true" if s.handled else "false")
        for t in s.tokens:
            tn = etree.SubElement(node, "token", pos=t.pos, stem=t.stem)
            if t.lead:
                tn.set("lead", t.lead)
            if t.punct:
                tn.set("punct", t.punct)
            tn.text = t.surface
        for lab in s.rhetorical_labels:
            etree.SubElement(node, "rst", structure=lab.structure, relation=lab.relation)
    for term in sorted(corpus.term_list):
        etree.SubElement(root, "term").text = term
    return etree.tostring(root, encoding="UTF-8", xml_declaration=True, pretty_print=True)


def write_corpus(corpus, path):
    with open(path, "wb") as fh:
        fh.write(serialize_corpus(corpus))
