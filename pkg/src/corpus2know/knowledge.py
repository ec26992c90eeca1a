"""Semantic-relation registry, triple extraction and concept maps."""

import csv
import io
import json
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Optional

from .ccg.categories import CONJ, N, NP, PP, PART, VP, Functor, Marked
from .ccg.grammar import BWD_APP, COORD, FWD_APP, UNARY
from .representativeness import LabelSelector, saturation_curve

MAX_LEVEL = 3
REGISTRY_COLUMNS = ("category", "tier1", "tier2", "predicate", "inverse")
TRIPLE_COLUMNS = ("subject", "relation", "object", "sentence_id")

TYPE_OF = "Type of"
IS = "Is"


class KnowledgeError(ValueError):
    pass


# ---------------------------------------------------------------- registry

@dataclass(frozen=True)
class RelationEntry:
    category: str
    tier1: str
    tier2: Optional[str]
    predicates: tuple
    inverses: Optional[tuple] = None   # parallel to predicates, None where a cell is empty

    def __post_init__(self):
        if self.inverses is not None and len(self.inverses) != len(self.predicates):
            raise KnowledgeError(
                f"{self.tier1}/{self.tier2}: {len(self.predicates)} predicates but "
                f"{len(self.inverses)} inverse slots")

    def inverse_of(self, predicate):
        if self.inverses is None:
            return None
        return self.inverses[self.predicates.index(predicate)]

    @property
    def tiers(self):
        return (self.tier1, self.tier2)


@dataclass(frozen=True)
class RelationInfo:
    label: str
    entry: RelationEntry
    role: str            # "predicate" or "inverse"
    partner: Optional[str]

    @property
    def category(self):
        return self.entry.category

    @property
    def tier1(self):
        return self.entry.tier1

    @property
    def tier2(self):
        return self.entry.tier2

    @property
    def inverse(self):
        return self.partner


@dataclass(frozen=True)
class RegistryCounts:
    predicate_cells: int
    inverse_cells: int
    distinct_predicates: int
    distinct_inverses: int
    distinct_predicates_with_inverse: int
    distinct_labels: int
    documented_relations: int = 55
    documented_with_inverse: int = 42

    @property
    def matches_documented(self):
        return (self.predicate_cells, self.inverse_cells) == (
            self.documented_relations, self.documented_with_inverse) or (
            self.distinct_predicates, self.distinct_predicates_with_inverse) == (
            self.documented_relations, self.documented_with_inverse)

    def as_dict(self):
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["matches_documented"] = self.matches_documented
        return out


class RelationRegistry:
    """Immutable two-tier relation table with case-insensitive lookup.

    A label listed in more than one row resolves to its first row; the
    other rows are kept in :attr:`duplicates`.
    """

    def __init__(self, entries):
        self.entries = tuple(entries)
        self._index = OrderedDict()
        self.duplicates = OrderedDict()
        for entry in self.entries:
            for k, pred in enumerate(entry.predicates):
                inv = entry.inverses[k] if entry.inverses else None
                self._register(RelationInfo(pred, entry, "predicate", inv))
                if inv:
                    self._register(RelationInfo(inv, entry, "inverse", pred))

    def _register(self, info):
        key = info.label.casefold()
        if key in self._index:
            first = self._index[key]
            if first.role == "predicate" and info.role == "inverse" and first.partner == info.label:
                return   # symmetric pair such as Is/Is
            self.duplicates.setdefault(info.label, [first.entry.tiers])
            if info.entry.tiers not in self.duplicates[info.label]:
                self.duplicates[info.label].append(info.entry.tiers)
            return
        self._index[key] = info

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, label):
        return self.lookup(label) is not None

    def lookup(self, label):
        if not label:
            return None
        return self._index.get(" ".join(label.split()).casefold())

    def canonical(self, label):
        info = self.lookup(label)
        return info.label if info else label

    def labels(self):
        return [info.label for info in self._index.values()]

    def inverse_label(self, label):
        info = self.lookup(label)
        if info is None:
            return None
        return info.partner

    def counts(self):
        preds = [p for e in self.entries for p in e.predicates]
        invs = [i for e in self.entries for i in (e.inverses or ()) if i]
        with_inv = {p.casefold() for e in self.entries for k, p in enumerate(e.predicates)
                    if e.inverses and e.inverses[k]}
        return RegistryCounts(
            predicate_cells=len(preds),
            inverse_cells=len(invs),
            distinct_predicates=len({p.casefold() for p in preds}),
            distinct_inverses=len({i.casefold() for i in invs}),
            distinct_predicates_with_inverse=len(with_inv),
            distinct_labels=len(self._index),
        )


def _read_registry(text, source):
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    reader = csv.reader(lines, delimiter="\t")
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != REGISTRY_COLUMNS:
        raise KnowledgeError(f"{source}: header must be {'/'.join(REGISTRY_COLUMNS)}")
    groups = OrderedDict()
    for lineno, row in enumerate(reader, start=2):
        row = (row + [""] * 5)[:5]
        category, tier1, tier2, pred, inv = (c.strip() for c in row)
        if not category or not tier1 or not pred:
            raise KnowledgeError(f"{source}:{lineno}: category, tier1 and predicate are required")
        groups.setdefault((category, tier1, tier2), []).append((pred, inv or None))
    entries = []
    for (category, tier1, tier2), pairs in groups.items():
        preds = tuple(p for p, _ in pairs)
        invs = tuple(i for _, i in pairs)
        entries.append(RelationEntry(category, tier1, tier2 or None, preds,
                                     invs if any(invs) else None))
    return RelationRegistry(entries)


def load_registry(path):
    path = Path(path)
    return _read_registry(path.read_text(encoding="utf-8"), path)


def builtin_registry():
    text = resources.files("corpus2know").joinpath("data/relations.tsv").read_text(encoding="utf-8")
    return _read_registry(text, "relations.tsv")


_BUILTIN = None


def _default_registry():
    global _BUILTIN
    if _BUILTIN is None:
        _BUILTIN = builtin_registry()
    return _BUILTIN


def map_predicate_to_tier(relation, registry=None):
    """Return ``(tier1, tier2)`` for a relation label, or None when unknown."""
    info = (registry or _default_registry()).lookup(relation)
    return info.entry.tiers if info else None


# ----------------------------------------------------------------- triples

@dataclass(frozen=True)
class PredicateTriple:
    subject: str
    relation: str
    object: str
    sentence_id: str = ""
    known: bool = True

    def key(self):
        return (self.subject.casefold(), self.relation.casefold(), self.object.casefold())

    def as_row(self):
        return [self.subject, self.relation, self.object, self.sentence_id]


def infer_inverse(triple, registry=None):
    registry = registry or _default_registry()
    inv = registry.inverse_label(triple.relation)
    if inv is None:
        return None
    return PredicateTriple(triple.object, inv, triple.subject, triple.sentence_id, True)


def load_relation_lexicon(path=None):
    """Read ``verb<TAB>relation`` pairs; the shipped table when no path is given."""
    if path is None:
        text = resources.files("corpus2know").joinpath(
            "data/relation_lexicon.tsv").read_text(encoding="utf-8")
        source = "relation_lexicon.tsv"
    else:
        text = Path(path).read_text(encoding="utf-8")
        source = str(path)
    out = OrderedDict()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    for lineno, row in enumerate(csv.reader(lines, delimiter="\t"), start=1):
        if lineno == 1 and [c.strip() for c in row] == ["verb", "relation"]:
            continue
        if len(row) < 2 or not row[0].strip() or not row[1].strip():
            raise KnowledgeError(f"{source}: row {lineno} needs a verb and a relation")
        out[" ".join(row[0].split()).casefold()] = row[1].strip()
    return out


def default_relation_lexicon():
    return load_relation_lexicon()


@dataclass
class _Entity:
    label: str
    members: list = field(default_factory=list)   # appositive members


class _Extractor:
    def __init__(self, relation_lexicon, terms, lexicon, registry, sentence_id):
        self.relations = {" ".join(k.split()).casefold(): v for k, v in relation_lexicon.items()}
        self.terms = {t.casefold(): t for t in (terms or ())}
        self.lexicon = lexicon
        self.registry = registry or _default_registry()
        self.sid = sentence_id
        self.triples = []

    # -- labels
    def lemma(self, token):
        if self.lexicon is not None:
            for entry in self.lexicon.lookup(token):
                return entry.lemma
        return token.stem or token.lower

    def label(self, words):
        """Concept label for a noun phrase: the longest listed term suffix,
        else the trailing run of nouns."""
        lowered = [w.lower for w in words]
        for start in range(len(words)):
            key = " ".join(lowered[start:])
            if key in self.terms:
                return self.terms[key]
        tail = []
        for w in reversed(words):
            if w.pos in ("noun", "pronoun"):
                tail.append(w.lower)
            elif tail:
                break
        if not tail:
            tail = [words[-1].lower]
        return " ".join(reversed(tail))

    def relation(self, name):
        return self.registry.canonical(name)

    def emit(self, subject, relation, obj, known=True):
        if subject.casefold() == obj.casefold():
            return
        t = PredicateTriple(subject, relation, obj, self.sid, known)
        if all(t.key() != u.key() for u in self.triples):
            self.triples.append(t)

    # -- noun phrases
    def entities(self, node):
        cat = node.category
        if node.is_leaf:
            if cat in (N, NP) or (isinstance(cat, Functor) and cat.result == N):
                return [self.noun(node)]
            return []
        if node.rule == COORD:
            left, right = node.children
            if left.category == CONJ:
                return self.entities(right)
            return self.entities(left) + self.entities(right)
        if node.rule == UNARY and len(node.children) == 1:
            return self.entities(node.children[0])
        if node.rule == FWD_APP:
            functor, arg = node.children
            if functor.category in (Functor(NP, "/", N),):
                return self.entities(arg)
            if cat == N:
                return self._modified(functor, arg)
            if functor.category == Functor(NP, "/", NP) or functor.category == Functor(N, "/", NP):
                return self.entities(arg)
        if node.rule == BWD_APP:
            head, mod = node.children
            if mod.category == Functor(NP, "\\", NP):
                heads = self.entities(head)
                self.modify(heads, mod)
                return heads
        return [self.noun(node)]

    def _modified(self, functor, arg):
        # n/n coordination ("series and parallel circuits") distributes
        if functor.rule == COORD:
            heads = self.entities(arg)
            mods = [w for w in functor.leaves() if w.token.pos != "coordinator"]
            head_words = arg.leaves()
            return [_Entity(self.label([m.token] + [h.token for h in head_words])) for m in mods] or heads
        return [self.noun(_Pair(functor, arg))]

    def noun(self, node):
        words = [leaf.token for leaf in node.leaves()]
        words = [w for w in words if w.pos not in ("determiner", "coordinator")] or words
        label = self.label(words)
        self.compound_type(label)
        return _Entity(label)

    def compound_type(self, label):
        parts = label.split()
        if len(parts) > 1 and self.terms:
            head = parts[-1].casefold()
            if head in self.terms:
                self.emit(label, self.relation(TYPE_OF), self.terms[head])

    def modify(self, heads, mod):
        if mod.rule != UNARY or not mod.children:
            return
        inner = mod.children[0]
        if inner.category == NP:
            members = self.entities(inner)
            for h in heads:
                h.members.extend(members)
                for m in members:
                    self.emit(m.label, self.relation(TYPE_OF), h.label)
            for a, b in combinations(members, 2):
                self.emit(a.label, self.relation(IS), b.label)
        elif inner.category == VP:
            subjects = []
            for h in heads:
                subjects.append(h)
                subjects.extend(h.members)
            self.predicate(subjects, inner)

    # -- clauses
    def walk(self, node):
        if node.rule == BWD_APP and len(node.children) == 2:
            left, right = node.children
            if left.category == NP and right.category == VP:
                self.predicate(self.entities(left), right)
                return
        for c in node.children:
            self.walk(c)

    def predicate(self, subjects, vp):
        for verb, particle, prep, obj in self.heads(vp):
            objects = self.entities(obj) if obj is not None else []
            if not objects:
                continue
            lemma = " ".join(x for x in (self.lemma(verb.token), particle) if x)
            rel, known = self.map_relation(lemma, prep)
            for s in subjects:
                for o in objects:
                    self.emit(s.label, rel, o.label, known)

    def map_relation(self, lemma, prep):
        keys = [f"{lemma} {prep}", lemma] if prep else [lemma]
        for key in keys:
            if key in self.relations:
                rel = self.relation(self.relations[key])
                known = rel in self.registry
                return rel, known
        return keys[0], False

    def heads(self, vp):
        """Yield (verb leaf, particle, preposition, object node) for a verb phrase."""
        if vp.is_leaf:
            if vp.token.pos == "verb":
                yield vp, "", "", None
            return
        if vp.rule == COORD:
            for c in vp.children:
                if c.category != CONJ:
                    yield from self.heads(c)
            return
        if vp.rule == UNARY:
            yield from self.heads(vp.children[0])
            return
        left, right = vp.children
        if vp.rule == BWD_APP:
            if left.category == VP or isinstance(left.category, Marked):
                yield from self.heads(left)
            return
        if vp.rule != FWD_APP:
            return
        if left.category == Functor(VP, "/", VP):
            yield from self.heads(right)
            return
        if left.category in (Functor(VP, "/", NP), Functor(VP, "/", PP)):
            verb, particle = self.verb_of(left)
            if verb is None:
                return
            if right.category == PP:
                prep, obj = self.split_pp(right)
                yield verb, particle, prep, obj
            else:
                yield verb, particle, "", right
            return
        if left.category == Functor(VP, "/", PART):
            verb, _ = self.verb_of(left)
            if verb is not None:
                yield verb, right.leaves()[0].token.lower, "", None

    def verb_of(self, node):
        if node.is_leaf:
            return (node, "") if node.token.pos == "verb" else (None, "")
        if node.rule == FWD_APP and node.children[1].category == PART:
            verb, _ = self.verb_of(node.children[0])
            return verb, node.children[1].leaves()[0].token.lower
        return None, ""

    def split_pp(self, pp):
        if not pp.is_leaf and pp.rule == FWD_APP:
            prep, obj = pp.children
            if prep.is_leaf:
                return prep.token.lower, obj
        return "", None


class _Pair:
    """Adapter so a modifier+head pair can be labelled like one node."""

    def __init__(self, *nodes):
        self.nodes = nodes

    def leaves(self):
        return [leaf for n in self.nodes for leaf in n.leaves()]


def extract_triples(derivation, relation_lexicon=None, terms=(), lexicon=None,
                    registry=None, sentence_id=""):
    """Predicate triples read off a derivation rooted at ``s``.

    Coordinated noun phrases distribute, parenthesised appositives give
    ``Type of`` links to their head and ``Is`` links among themselves, and
    a reduced relative applies to its head and the head's appositives.
    Verbs missing from ``relation_lexicon`` keep their lemma as the relation
    and are flagged ``known=False``.
    """
    if relation_lexicon is None:
        relation_lexicon = default_relation_lexicon()
    ex = _Extractor(relation_lexicon, terms, lexicon, registry, sentence_id)
    ex.walk(derivation)
    return ex.triples


# rule: (first, second) -> result; X first Y and Y second Z give X result Z
DEFAULT_COMPOSITIONS = {("Have component", "Connected to"): "Have component"}


def compose_relations(triples, rules=None):
    """Close ``triples`` under relation-composition rules (one pass to fixpoint)."""
    rules = {(a.casefold(), b.casefold()): r
             for (a, b), r in (DEFAULT_COMPOSITIONS if rules is None else rules).items()}
    out = list(triples)
    seen = {t.key() for t in out}
    changed = True
    while changed:
        changed = False
        for t1 in list(out):
            for t2 in list(out):
                if t1.object.casefold() != t2.subject.casefold():
                    continue
                result = rules.get((t1.relation.casefold(), t2.relation.casefold()))
                if result is None:
                    continue
                new = PredicateTriple(t1.subject, result, t2.object, t1.sentence_id, True)
                if new.key() not in seen and new.subject.casefold() != new.object.casefold():
                    seen.add(new.key())
                    out.append(new)
                    changed = True
    return out


def write_triples_csv(triples, path=None):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRIPLE_COLUMNS)
    for t in triples:
        w.writerow(t.as_row())
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_triples_csv(path):
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != TRIPLE_COLUMNS:
            raise KnowledgeError(f"{path}: header must be {','.join(TRIPLE_COLUMNS)}")
        return [PredicateTriple(r["subject"], r["relation"], r["object"], r["sentence_id"])
                for r in reader]


# ------------------------------------------------------------ concept maps

@dataclass(frozen=True)
class Concept:
    label: str
    level: int = 0
    group: Optional[str] = None

    def __post_init__(self):
        if not 0 <= self.level <= MAX_LEVEL:
            raise KnowledgeError(f"concept level must be 0..{MAX_LEVEL}, got {self.level}")


@dataclass(frozen=True)
class ConceptMap:
    level: int
    nodes: frozenset
    edges: frozenset = frozenset()

    def __post_init__(self):
        labels = [c.label.casefold() for c in self.nodes]
        if len(labels) != len(set(labels)):
            raise KnowledgeError(f"level {self.level}: duplicate concept labels")
        for c in self.nodes:
            if c.level != self.level:
                raise KnowledgeError(f"concept {c.label!r} has level {c.level}, map is {self.level}")
        known = set(labels)
        for e in self.edges:
            for end in (e.subject, e.object):
                if end.casefold() not in known:
                    raise KnowledgeError(f"level {self.level}: edge endpoint {end!r} is not a node")

    def labels(self):
        return sorted(c.label for c in self.nodes)

    def has(self, label):
        key = label.casefold()
        return any(c.label.casefold() == key for c in self.nodes)


def base_map(triples):
    labels = OrderedDict()
    for t in triples:
        for end in (t.subject, t.object):
            labels.setdefault(end.casefold(), end)
    nodes = frozenset(Concept(lbl, 0) for lbl in labels.values())
    edges = frozenset(PredicateTriple(labels[t.subject.casefold()], t.relation,
                                      labels[t.object.casefold()], t.sentence_id, t.known)
                      for t in triples)
    return ConceptMap(0, nodes, edges)


def group_concepts(map_k, grouping, group_edges=()):
    """Level ``k+1`` map whose nodes are the groups of ``map_k``'s concepts.

    Returns ``(upper, lower)``: the new map and a copy of ``map_k`` whose
    concepts carry their group label.
    """
    if map_k.level >= MAX_LEVEL:
        raise KnowledgeError(f"cannot group beyond level {MAX_LEVEL}")
    folded = {k.casefold(): v for k, v in grouping.items()}
    missing = sorted(c.label for c in map_k.nodes if c.label.casefold() not in folded)
    if missing:
        raise KnowledgeError("ungrouped concepts: " + ", ".join(missing))
    level = map_k.level + 1
    groups = OrderedDict()
    for c in sorted(map_k.nodes, key=lambda c: c.label):
        g = folded[c.label.casefold()]
        groups.setdefault(g.casefold(), g)
    upper = ConceptMap(level, frozenset(Concept(g, level) for g in groups.values()),
                       frozenset(group_edges))
    lower = ConceptMap(map_k.level,
                       frozenset(Concept(c.label, c.level, folded[c.label.casefold()])
                                 for c in map_k.nodes),
                       map_k.edges)
    return upper, lower


@dataclass
class Ontology:
    """A stack of concept maps, level 0 first."""

    maps: list

    def __post_init__(self):
        for k, m in enumerate(self.maps):
            if m.level != k:
                raise KnowledgeError(f"map {k} has level {m.level}")
        for lower, upper in zip(self.maps, self.maps[1:]):
            for c in lower.nodes:
                if c.group is not None and not upper.has(c.group):
                    raise KnowledgeError(
                        f"concept {c.label!r} groups into {c.group!r}, absent at level {upper.level}")

    def has_concept(self, label):
        return any(m.has(label) for m in self.maps)

    def relations(self):
        return {e.relation.casefold() for m in self.maps for e in m.edges}

    def to_dict(self):
        return {"levels": [
            {"level": m.level,
             "nodes": [{"label": c.label, "group": c.group}
                       for c in sorted(m.nodes, key=lambda c: c.label)],
             "edges": [dict(zip(TRIPLE_COLUMNS, e.as_row()))
                       for e in sorted(m.edges, key=lambda e: e.as_row())]}
            for m in self.maps]}

    @classmethod
    def from_dict(cls, data):
        maps = []
        try:
            for lv in data["levels"]:
                level = int(lv["level"])
                nodes = frozenset(Concept(n["label"], level, n.get("group")) for n in lv["nodes"])
                edges = frozenset(PredicateTriple(e["subject"], e["relation"], e["object"],
                                                  e.get("sentence_id", ""))
                                  for e in lv.get("edges", ()))
                maps.append(ConceptMap(level, nodes, edges))
        except (KeyError, TypeError) as exc:
            raise KnowledgeError(f"malformed ontology: {exc}") from exc
        return cls(maps)


def load_ontology(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise KnowledgeError(f"{path}: {exc}") from exc
    return Ontology.from_dict(data)


def save_ontology(ontology, path):
    Path(path).write_text(json.dumps(ontology.to_dict(), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


# ------------------------------------------------------------------ metrics

def knowledge_saturation(partition, triples_by_sentence):
    """Cumulative concept and relation curves over a sample partition."""
    concepts, relations = {}, {}
    for sid, triples in triples_by_sentence.items():
        concepts[sid] = {end.casefold() for t in triples for end in (t.subject, t.object)}
        relations[sid] = {t.relation.casefold() for t in triples}
    return (saturation_curve(partition, LabelSelector(concepts, "concept")),
            saturation_curve(partition, LabelSelector(relations, "relation")))


def ontology_mapping_rate(triples_by_sentence, ontology, registry=None):
    """Share of parsed sentences whose triples are all registered and grounded.

    ``triples_by_sentence`` has one key per parsed sentence; a sentence
    yielding no triple counts as unmapped.
    """
    if not triples_by_sentence:
        raise KnowledgeError("no parsed sentences")
    registry = registry or _default_registry()
    mapped = sum(sentence_mapped(ts, ontology, registry) for ts in triples_by_sentence.values())
    return Fraction(mapped, len(triples_by_sentence))


def sentence_mapped(triples, ontology, registry=None):
    """True when a sentence has triples and every one is registered and grounded."""
    registry = registry or _default_registry()
    return bool(triples) and all(
        t.relation in registry and ontology.has_concept(t.subject)
        and ontology.has_concept(t.object) for t in triples)
