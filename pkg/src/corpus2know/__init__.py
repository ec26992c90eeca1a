"""Corpus-driven evaluation of a text-to-knowledge pipeline: corpus
representativeness, lexicon coverage, CCG parsing, relation extraction and
discourse coverage."""

from .corpus import Corpus, Sentence, Token, ingest_corpus, serialize_corpus
from .lexicon import Lexicon, LexEntry, load_lexicon

__version__ = "0.1.0"
