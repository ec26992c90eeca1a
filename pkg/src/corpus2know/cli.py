"""Command-line entry point: ``corpus2know <command> [options]``.

Exit status: 0 success, 2 validation failure, 3 I/O failure, 4 an analysis
precondition did not hold.
"""

import argparse
import copy
import csv
import io
import json
import os
import sys
from collections import Counter, OrderedDict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import reference
from .ccg import GrammarConfig, ParseError, parse, svo_profile
from .ccg.chart import ChartSizeError
from .ccg.config import EXTENSIONS
from .corpus import (CorpusError, classify_sentence, compute_stats, ingest_corpus)
from .discourse import (DiscourseError, causal_coverage, discourse_table, load_discourse_csv,
                        load_rhetoric_csv, load_topical_csv, merge_annotations,
                        progression_counts, rhetorical_distribution, topical_table)
from .knowledge import (KnowledgeError, builtin_registry, compose_relations, extract_triples,
                        knowledge_saturation, load_ontology, load_registry,
                        load_relation_lexicon, ontology_mapping_rate, sentence_mapped,
                        write_triples_csv)
from .lexicon import (LexiconError, augment_from_corpus, dump_lexicon, load_lexicon,
                      vocabulary_coverage)
from .representativeness import (DEFAULT_SAMPLES, DEFAULT_THRESHOLD, DEFAULT_WINDOW,
                                 SaturationError, closure_test, make_selector,
                                 saturation_curve, segment, sentence_type_distribution)
from .rounding import ROUNDING_MODES, format_percent, fraction_str

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_PRECONDITION = 0, 2, 3, 4
CONFIG_ENV = "CORPUS2KNOW_CONFIG"

REPORT_FILES = ("report.json", "stats.csv", "saturation.csv", "coverage.csv", "parse.csv",
                "triples.csv", "rhetoric.csv", "topical.csv", "discourse.csv")

PATH_KEYS = ("corpus", "lexicon", "registry", "relation_lexicon", "ontology",
             "rhetoric", "topical", "discourse", "out")


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    corpus: Optional[Path] = None
    lexicon: Optional[Path] = None
    registry: Optional[Path] = None
    relation_lexicon: Optional[Path] = None
    ontology: Optional[Path] = None
    rhetoric: Optional[Path] = None
    topical: Optional[Path] = None
    discourse: Optional[Path] = None
    out: Optional[Path] = None
    rounding: str = "half-up"
    samples: int = DEFAULT_SAMPLES
    threshold: Fraction = DEFAULT_THRESHOLD
    window: int = DEFAULT_WINDOW
    selector: str = "term"
    grammar: GrammarConfig = field(default_factory=GrammarConfig)
    formats: tuple = ("csv", "json")


# ------------------------------------------------------------------ config

def read_config_file(path):
    """``key = value`` lines; ``#`` starts a comment.  Relative paths are
    resolved against the file's directory."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read config {path}: {exc.strerror or exc}") from None
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(EXIT_VALIDATION, f"{path}:{lineno}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key in PATH_KEYS and value:
            value = str((path.parent / value)) if not os.path.isabs(value) else value
        out[key] = value
    return out


def _bool(value, key):
    v = str(value).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise CliError(EXIT_VALIDATION, f"{key}: expected a boolean, got {value!r}")


def _threshold(value):
    try:
        t = Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise CliError(EXIT_VALIDATION, f"threshold: not a number: {value!r}") from None
    if not 0 < t < 1:
        raise CliError(EXIT_VALIDATION, "threshold must lie strictly between 0 and 1")
    return t


def _int(value, key, low=1):
    try:
        n = int(value)
    except ValueError:
        raise CliError(EXIT_VALIDATION, f"{key}: not an integer: {value!r}") from None
    if n < low:
        raise CliError(EXIT_VALIDATION, f"{key} must be at least {low}")
    return n


def build_config(args, environ=None):
    """Merge defaults, the config file (``--config`` or the environment) and flags."""
    environ = os.environ if environ is None else environ
    settings = {}
    cfg_path = getattr(args, "config", None) or environ.get(CONFIG_ENV)
    if cfg_path:
        settings.update(read_config_file(cfg_path))
    for key in PATH_KEYS + ("rounding", "samples", "threshold", "window", "selector"):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    toggles = {}
    for name in EXTENSIONS:
        if name in settings:
            toggles[name] = _bool(settings.pop(name), name)
        if getattr(args, f"no_{name}", False):
            toggles[name] = False
    grammar = replace(GrammarConfig(), **toggles)
    if "max_chart_size" in settings:
        grammar = replace(grammar, max_chart_size=_int(settings.pop("max_chart_size"),
                                                       "max_chart_size"))
    cfg = RunConfig(grammar=grammar)
    for key in PATH_KEYS:
        if settings.get(key):
            setattr(cfg, key, Path(settings[key]))
    if "rounding" in settings:
        if settings["rounding"] not in ROUNDING_MODES:
            raise CliError(EXIT_VALIDATION, f"rounding must be one of {', '.join(ROUNDING_MODES)}")
        cfg.rounding = settings["rounding"]
    if "samples" in settings:
        cfg.samples = _int(settings["samples"], "samples")
    if "threshold" in settings:
        cfg.threshold = _threshold(settings["threshold"])
    if "window" in settings:
        cfg.window = _int(settings["window"], "window")
    if "selector" in settings:
        cfg.selector = str(settings["selector"])
    if "formats" in settings:
        formats = tuple(f.strip() for f in settings["formats"].split(",") if f.strip())
        if not formats or set(formats) - {"csv", "json"}:
            raise CliError(EXIT_VALIDATION, "formats must be a subset of csv,json")
        cfg.formats = formats
    unknown = set(settings) - set(PATH_KEYS) - {"rounding", "samples", "threshold", "window",
                                                "selector", "formats"}
    if unknown:
        raise CliError(EXIT_VALIDATION, f"unknown config key(s): {', '.join(sorted(unknown))}")
    return cfg


# ----------------------------------------------------------------- loading

def _require(cfg, key):
    value = getattr(cfg, key)
    if value is None:
        flag = "--" + key.replace("_", "-")
        raise CliError(EXIT_VALIDATION, f"{flag} is required for this command")
    return value


def _load(what, fn, path):
    try:
        return fn(path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {what} {path}: {exc.strerror or exc}") from None
    except (CorpusError, LexiconError, DiscourseError, KnowledgeError, ValueError) as exc:
        raise CliError(EXIT_VALIDATION, f"invalid {what} {path}: {exc}") from None


def load_corpus(cfg):
    corpus = _load("corpus", ingest_corpus, _require(cfg, "corpus"))
    rhetoric = _load("rhetoric sidecar", load_rhetoric_csv, cfg.rhetoric) if cfg.rhetoric else None
    topical = _load("topical sidecar", load_topical_csv, cfg.topical) if cfg.topical else None
    if rhetoric or topical:
        ids = {s.id for s in corpus.sentences}
        for name, side in (("rhetoric", rhetoric), ("topical", topical)):
            missing = sorted(set(side or ()) - ids)
            if missing:
                raise CliError(EXIT_VALIDATION,
                               f"{name} sidecar names unknown sentence(s): {', '.join(missing[:5])}")
    return corpus, rhetoric, topical


def load_lex(cfg):
    return _load("lexicon", load_lexicon, _require(cfg, "lexicon"))


def load_reg(cfg):
    if cfg.registry is None:
        return builtin_registry()
    return _load("registry", load_registry, cfg.registry)


def load_rel_lex(cfg):
    if cfg.relation_lexicon is None:
        return load_relation_lexicon()
    return _load("relation lexicon", load_relation_lexicon, cfg.relation_lexicon)


# ---------------------------------------------------------------- analyses

def _pct(value, cfg, digits=0):
    return format_percent(value, cfg.rounding, digits)


def parse_corpus(corpus, lexicon, grammar):
    results = OrderedDict()
    for s in corpus.sentences:
        try:
            results[s.id] = parse(s, lexicon, grammar)
        except ChartSizeError as exc:
            raise CliError(EXIT_PRECONDITION, f"parse: {exc}") from None
    return results


def extract_corpus(results, lexicon, relation_lexicon, registry, terms):
    """Triples per parsed sentence, read off each sentence's best derivation."""
    out = OrderedDict()
    for sid, r in results.items():
        if not r.parsed:
            continue
        triples = extract_triples(r.best, relation_lexicon, terms, lexicon, registry, sid)
        out[sid] = compose_relations(triples)
    return out


def stats_section(corpus, cfg):
    st = compute_stats(corpus)
    types = Counter(classify_sentence(s) for s in corpus.sentences)
    dist = sentence_type_distribution(corpus)
    rows = [("sources", corpus.source_count), ("sentences", st.sentence_count),
            ("words", st.word_count), ("unique_words", st.unique_word_count)]
    for k in ("simple", "compound", "complex", "unknown"):
        rows.append((f"sentences_{k}", types[k]))
    for k, v in dist.items():
        rows.append((f"share_{k}", _pct(v, cfg, 1)))
    return rows


def saturation_section(corpus, cfg):
    try:
        partition = segment(corpus, cfg.samples)
        curve = saturation_curve(partition, make_selector(cfg.selector, corpus))
        verdict = closure_test(curve, cfg.threshold, cfg.window)
    except SaturationError as exc:
        raise CliError(EXIT_PRECONDITION, f"saturation: {exc}") from None
    return partition, curve, verdict


def _verdict_dict(verdict):
    return {"saturated": verdict.saturated,
            "saturation_sample": None if verdict.saturation_index is None
            else verdict.saturation_index + 1,
            "threshold": fraction_str(verdict.threshold), "window": verdict.window}


def coverage_section(lexicon, corpus, cfg):
    before = vocabulary_coverage(lexicon, corpus)
    augmented = copy.deepcopy(lexicon)
    added = augment_from_corpus(augmented, corpus)
    after = vocabulary_coverage(augmented, corpus)
    return before, after, added


def svo_histogram(results):
    hist = {"subjects": Counter(), "objects": Counter(), "verbs": Counter()}
    for r in results.values():
        if r.parsed:
            for k, v in svo_profile(r.best).items():
                hist[k][v] += 1
    return {k: {str(n): c[n] for n in sorted(c)} for k, c in hist.items()}


# ----------------------------------------------------------------- writers

def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(out).parent.mkdir(parents=True, exist_ok=True)
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {out}: {exc.strerror or exc}") from None


def rhetoric_rows(dist, cfg):
    return [(r.structure, r.relation, r.count, fraction_str(r.mean), _pct(r.mean, cfg, 2))
            for r in dist.rows]


RHETORIC_HEADER = ("structure", "relation", "count", "mean", "mean_percent")
TOPICAL_HEADER = ("indentation", "sentences", "corpus_coverage", "handled", "topical_coverage")
DISCOURSE_HEADER = ("concept", "covered", "in_discourse", "difference", "coverage", "deviation")
PARSE_HEADER = ("sentence_id", "parsed", "derivations", "subjects", "objects", "verbs",
                "uncovered_tokens")


def topical_rows(rows, cfg):
    return [(r.indentation, r.sentences, _pct(r.corpus_coverage, cfg), r.handled,
             _pct(r.topical_coverage, cfg)) for r in rows]


def discourse_rows(table, cfg):
    return [(r.concept, r.covered, r.in_discourse, r.difference, _pct(r.coverage_pct, cfg),
             _pct(r.deviation_pct, cfg)) for r in table.rows + (table.total,)]


def parse_rows(results):
    rows = []
    for sid, r in results.items():
        if r.parsed:
            p = svo_profile(r.best)
            rows.append((sid, "yes", len(r.derivations), p["subjects"], p["objects"],
                         p["verbs"], ""))
        else:
            uncovered = r.diagnosis.uncovered_tokens
            words = " ".join(r.sentence.tokens[i].surface for i in uncovered)
            rows.append((sid, "no", 0, "", "", "", words))
    return rows


# ---------------------------------------------------------------- commands

def cmd_validate(cfg, args):
    checked = []
    corpus = None
    if cfg.corpus is not None:
        corpus, _, _ = load_corpus(cfg)
        checked.append(f"corpus {cfg.corpus}: {len(corpus.sentences)} sentences")
    elif cfg.rhetoric or cfg.topical:
        raise CliError(EXIT_VALIDATION, "sidecars need --corpus to check sentence ids")
    if cfg.lexicon is not None:
        lex = load_lex(cfg)
        checked.append(f"lexicon {cfg.lexicon}: {len(lex)} entries")
    if cfg.discourse is not None:
        occ = _load("discourse sidecar", load_discourse_csv, cfg.discourse)
        try:
            discourse_table(occ)
        except DiscourseError as exc:
            raise CliError(EXIT_VALIDATION, f"invalid discourse sidecar {cfg.discourse}: {exc}") from None
        checked.append(f"discourse {cfg.discourse}: {len(occ)} concepts")
    if cfg.registry is not None:
        reg = load_reg(cfg)
        checked.append(f"registry {cfg.registry}: {len(reg)} rows")
    if cfg.relation_lexicon is not None:
        checked.append(f"relation lexicon {cfg.relation_lexicon}: {len(load_rel_lex(cfg))} verbs")
    if cfg.ontology is not None:
        onto = _load("ontology", load_ontology, cfg.ontology)
        checked.append(f"ontology {cfg.ontology}: {len(onto.maps)} levels")
    if not checked:
        raise CliError(EXIT_VALIDATION, "nothing to validate; pass --corpus, --lexicon, ...")
    for line in checked:
        print(f"ok  {line}")
    return EXIT_OK


def cmd_stats(cfg, args):
    corpus, _, _ = load_corpus(cfg)
    _emit(_csv(stats_section(corpus, cfg), ("metric", "value")), args.output)
    return EXIT_OK


def cmd_saturate(cfg, args):
    corpus, _, _ = load_corpus(cfg)
    partition, curve, verdict = saturation_section(corpus, cfg)
    _emit(_csv(curve.rows(), ("sample", "new", "cumulative")), args.output)
    v = _verdict_dict(verdict)
    state = f"saturated at sample {v['saturation_sample']}" if verdict.saturated else "not saturated"
    print(f"# {curve.item_class}: {state} (threshold {v['threshold']}, window {v['window']}; "
          f"mean sample {float(partition.mean_sample_words):.1f} words)", file=sys.stderr)
    return EXIT_OK


def cmd_coverage(cfg, args):
    corpus, _, _ = load_corpus(cfg)
    rep = vocabulary_coverage(load_lex(cfg), corpus)
    print(f"{rep.overlap_count}/{rep.unique_word_count} = "
          f"{_pct(rep.ratio, cfg)} ({_pct(rep.ratio, cfg, 1)})")
    return EXIT_OK


def cmd_augment(cfg, args):
    corpus, _, _ = load_corpus(cfg)
    lex = load_lex(cfg)
    before = vocabulary_coverage(lex, corpus)
    added = augment_from_corpus(lex, corpus, key=args.key)
    after = vocabulary_coverage(lex, corpus)
    for pos, n in added.items():
        print(f"{pos}\t{n}")
    print(f"coverage {_pct(before.ratio, cfg, 1)} -> {_pct(after.ratio, cfg, 1)}", file=sys.stderr)
    if args.output:
        _emit(dump_lexicon(lex), args.output)
    return EXIT_OK


def cmd_parse(cfg, args):
    corpus, _, _ = load_corpus(cfg)
    lex = load_lex(cfg)
    if args.sentence:
        try:
            sentence = corpus.sentence(args.sentence)
        except KeyError:
            raise CliError(EXIT_VALIDATION, f"no sentence {args.sentence!r}") from None
        try:
            r = parse(sentence, lex, cfg.grammar)
        except ChartSizeError as exc:
            raise CliError(EXIT_PRECONDITION, f"parse: {exc}") from None
        if r.parsed:
            for d in r.derivations[:args.limit]:
                print(d.to_json() if args.json else d.bracketed())
        else:
            print(json.dumps(r.diagnosis.to_dict(sentence.tokens), indent=2, sort_keys=True))
        return EXIT_OK
    results = parse_corpus(corpus, lex, cfg.grammar)
    _emit(_csv(parse_rows(results), PARSE_HEADER), args.output)
    parsed = sum(r.parsed for r in results.values())
    print(f"# parsed {parsed}/{len(results)} = {_pct(Fraction(parsed, len(results)), cfg)}",
          file=sys.stderr)
    return EXIT_OK


def _triples(cfg, corpus=None):
    if corpus is None:
        corpus, _, _ = load_corpus(cfg)
    lex = load_lex(cfg)
    registry = load_reg(cfg)
    results = parse_corpus(corpus, lex, cfg.grammar)
    return corpus, results, extract_corpus(results, lex, load_rel_lex(cfg), registry,
                                           corpus.term_list), registry


def cmd_extract(cfg, args):
    _, _, by_sentence, _ = _triples(cfg)
    _emit(write_triples_csv([t for ts in by_sentence.values() for t in ts]), args.output)
    return EXIT_OK


def cmd_ontology(cfg, args):
    corpus, _, by_sentence, registry = _triples(cfg)
    onto = _load("ontology", load_ontology, _require(cfg, "ontology"))
    try:
        rate = ontology_mapping_rate(by_sentence, onto, registry)
    except KnowledgeError as exc:
        raise CliError(EXIT_PRECONDITION, f"ontology: {exc}") from None
    print(f"mapped {int(rate * len(by_sentence))}/{len(by_sentence)} "
          f"parsed sentences = {_pct(rate, cfg)}")
    return EXIT_OK


def _annotated(cfg):
    corpus, rhetoric, topical = load_corpus(cfg)
    return merge_annotations(corpus, rhetoric=rhetoric, topical=topical)


def cmd_rhetoric(cfg, args):
    try:
        dist = rhetorical_distribution(_annotated(cfg))
    except DiscourseError as exc:
        raise CliError(EXIT_PRECONDITION, f"rhetoric: {exc}") from None
    _emit(_csv(rhetoric_rows(dist, cfg), RHETORIC_HEADER), args.output)
    return EXIT_OK


def cmd_topical(cfg, args):
    try:
        rows = topical_table(_annotated(cfg))
    except DiscourseError as exc:
        raise CliError(EXIT_PRECONDITION, f"topical: {exc}") from None
    _emit(_csv(topical_rows(rows, cfg), TOPICAL_HEADER), args.output)
    return EXIT_OK


def cmd_discourse(cfg, args):
    occ = _load("discourse sidecar", load_discourse_csv, _require(cfg, "discourse"))
    try:
        table = discourse_table(occ)
    except DiscourseError as exc:
        raise CliError(EXIT_VALIDATION, f"discourse: {exc}") from None
    _emit(_csv(discourse_rows(table, cfg), DISCOURSE_HEADER), args.output)
    return EXIT_OK


def cmd_report(cfg, args):
    out = _require(cfg, "out")
    corpus, rhetoric, topical = load_corpus(cfg)
    lex = load_lex(cfg)
    registry = load_reg(cfg)
    rel_lex = load_rel_lex(cfg)
    onto = _load("ontology", load_ontology, cfg.ontology) if cfg.ontology else None
    occ = _load("discourse sidecar", load_discourse_csv, cfg.discourse) if cfg.discourse else None
    notices = []
    files = OrderedDict()

    stats = stats_section(corpus, cfg)
    files["stats.csv"] = _csv(stats, ("metric", "value"))

    partition, curve, verdict = saturation_section(corpus, cfg)
    before, after, added = coverage_section(lex, corpus, cfg)
    files["coverage.csv"] = _csv(
        [("lexicon", before.overlap_count, before.unique_word_count, fraction_str(before.ratio),
          _pct(before.ratio, cfg)),
         ("augmented", after.overlap_count, after.unique_word_count, fraction_str(after.ratio),
          _pct(after.ratio, cfg))],
        ("lexicon", "overlap", "unique_words", "ratio", "coverage"))

    results = parse_corpus(corpus, lex, cfg.grammar)
    parsed = sum(r.parsed for r in results.values())
    files["parse.csv"] = _csv(parse_rows(results), PARSE_HEADER)

    by_sentence = extract_corpus(results, lex, rel_lex, registry, corpus.term_list)
    triples = [t for ts in by_sentence.values() for t in ts]
    files["triples.csv"] = write_triples_csv(triples)

    concept_curve, relation_curve = knowledge_saturation(partition, by_sentence)
    sat_rows = [(c.item_class,) + row for c in (curve, concept_curve, relation_curve)
                for row in c.rows()]
    files["saturation.csv"] = _csv(sat_rows, ("items", "sample", "new", "cumulative"))

    mapping = None
    if onto is None:
        notices.append("ontology: no --ontology given; mapping rate skipped")
    elif not by_sentence:
        notices.append("ontology: no parsed sentences; mapping rate skipped")
    else:
        rate = ontology_mapping_rate(by_sentence, onto, registry)
        mapping = {"rate": fraction_str(rate), "percent": _pct(rate, cfg)}

    # handled defaults to parsed-and-mapped (parsed alone without an ontology);
    # explicit handled annotations win
    handled = {sid: r.parsed and (onto is None or
                                  sentence_mapped(by_sentence.get(sid, ()), onto, registry))
               for sid, r in results.items()}
    ann = merge_annotations(corpus, rhetoric=rhetoric, topical=topical, handled=handled)
    rhet_json = topical_json = None
    try:
        dist = rhetorical_distribution(ann)
        files["rhetoric.csv"] = _csv(rhetoric_rows(dist, cfg), RHETORIC_HEADER)
        rhet_json = {"total": dist.total}
        try:
            rhet_json["causal_coverage"] = fraction_str(causal_coverage(ann))
        except DiscourseError as exc:
            notices.append(f"rhetoric: {exc}")
    except DiscourseError as exc:
        files["rhetoric.csv"] = _csv([], RHETORIC_HEADER)
        notices.append(f"rhetoric: {exc}; table skipped")
    try:
        trows = topical_table(ann)
        files["topical.csv"] = _csv(topical_rows(trows, cfg), TOPICAL_HEADER)
        topical_json = {"progressions": progression_counts(ann)}
    except DiscourseError as exc:
        files["topical.csv"] = _csv([], TOPICAL_HEADER)
        notices.append(f"topical: {exc}; table skipped")
    disc_json = None
    if occ is None:
        files["discourse.csv"] = _csv([], DISCOURSE_HEADER)
        notices.append("discourse: no --discourse sidecar; table skipped")
    else:
        try:
            table = discourse_table(occ)
        except DiscourseError as exc:
            raise CliError(EXIT_PRECONDITION, f"discourse: {exc}") from None
        files["discourse.csv"] = _csv(discourse_rows(table, cfg), DISCOURSE_HEADER)
        disc_json = {"coverage": fraction_str(table.total.coverage_pct),
                     "deviation": fraction_str(table.total.deviation_pct)}

    checks = reference.all_checks(cfg.rounding, registry)
    report = {
        "config": {"rounding": cfg.rounding, "samples": cfg.samples,
                   "threshold": fraction_str(cfg.threshold), "window": cfg.window,
                   "selector": cfg.selector, "grammar": cfg.grammar.as_dict()},
        "stats": {k: v for k, v in stats},
        "saturation": {
            "mean_sample_words": fraction_str(partition.mean_sample_words),
            curve.item_class: _verdict_dict(verdict),
            "concept": _verdict_dict(closure_test(concept_curve, cfg.threshold, cfg.window)),
            "relation": _verdict_dict(closure_test(relation_curve, cfg.threshold, cfg.window)),
        },
        "coverage": {"before": fraction_str(before.ratio), "after": fraction_str(after.ratio),
                     "augmented_entries": dict(added)},
        "parse": {"total": len(results), "parsed": parsed,
                  "rate": fraction_str(Fraction(parsed, len(results))) if results else None,
                  "svo_histogram": svo_histogram(results)},
        "knowledge": {"triples": len(triples),
                      "concepts": concept_curve.cumulative[-1] if concept_curve.cumulative else 0,
                      "relations": relation_curve.cumulative[-1] if relation_curve.cumulative else 0,
                      "unknown_relations": sum(not t.known for t in triples),
                      "mapping": mapping},
        "rhetoric": rhet_json,
        "topical": topical_json,
        "discourse": disc_json,
        "published_checks": {"reproduced": sum(c.reproduced for c in checks),
                             "unreproduced": [c.as_dict() for c in reference.unreproduced(checks)]},
        "notices": notices,
    }
    files["report.json"] = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if "json" not in cfg.formats:
        files.pop("report.json")
    if "csv" not in cfg.formats:
        for name in [n for n in files if n.endswith(".csv")]:
            files.pop(name)
    try:
        Path(out).mkdir(parents=True, exist_ok=True)
        for name in REPORT_FILES:
            if name in files:
                (Path(out) / name).write_text(files[name], encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write report to {out}: {exc.strerror or exc}") from None
    for n in notices:
        print(f"notice: {n}", file=sys.stderr)
    print(f"wrote {len(files)} files to {out}")
    return EXIT_OK


COMMANDS = OrderedDict([
    ("validate", (cmd_validate, "check the corpus, lexicon and sidecars")),
    ("stats", (cmd_stats, "corpus size and sentence-type counts")),
    ("saturate", (cmd_saturate, "saturation curve and closure verdict")),
    ("coverage", (cmd_coverage, "lexicon vocabulary coverage")),
    ("augment", (cmd_augment, "add missing corpus words to the lexicon")),
    ("parse", (cmd_parse, "parse the corpus or one sentence")),
    ("extract", (cmd_extract, "predicate triples from parsed sentences")),
    ("ontology", (cmd_ontology, "ontology mapping rate")),
    ("rhetoric", (cmd_rhetoric, "rhetorical relation distribution")),
    ("topical", (cmd_topical, "topical progression table")),
    ("discourse", (cmd_discourse, "discourse coverage and deviation")),
    ("report", (cmd_report, "run every analysis and write the report directory")),
])


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("inputs")
    g.add_argument("--config", help=f"key=value config file (default: ${CONFIG_ENV})")
    g.add_argument("--corpus")
    g.add_argument("--lexicon")
    g.add_argument("--registry", help="relation registry TSV (default: built in)")
    g.add_argument("--relation-lexicon", dest="relation_lexicon",
                   help="verb to relation TSV (default: built in)")
    g.add_argument("--ontology", help="concept-map JSON")
    g.add_argument("--rhetoric", help="sentence_id,structure,relation CSV")
    g.add_argument("--topical", help="sentence_id,indentation,progression,handled CSV")
    g.add_argument("--discourse", help="concept,covered,in_discourse CSV")
    a = common.add_argument_group("analysis")
    a.add_argument("--rounding", choices=ROUNDING_MODES)
    a.add_argument("--samples", type=int)
    a.add_argument("--threshold")
    a.add_argument("--window", type=int)
    a.add_argument("--selector", help="saturation items: term or pos:<tag>[+<tag>...]")
    a.add_argument("--out", help="report output directory")
    t = common.add_argument_group("grammar extensions")
    for name in EXTENSIONS:
        t.add_argument(f"--no-{name.replace('_', '-')}", dest=f"no_{name}", action="store_true")

    parser = argparse.ArgumentParser(prog="corpus2know", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("stats", "saturate", "augment", "parse", "extract", "rhetoric", "topical",
                    "discourse"):
            p.add_argument("-o", "--output", help="write here instead of stdout")
        if name == "augment":
            p.add_argument("--key", choices=("stem", "surface"), default="stem")
        if name == "parse":
            p.add_argument("--sentence", help="show derivations for one sentence id")
            p.add_argument("--json", action="store_true")
            p.add_argument("--limit", type=int, default=1)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "output"):
        args.output = None
    try:
        cfg = build_config(args)
        return COMMANDS[args.command][0](cfg, args)
    except CliError as exc:
        print(f"corpus2know {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except (SaturationError, DiscourseError, KnowledgeError, ParseError) as exc:
        print(f"corpus2know {args.command}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
