from pathlib import Path

import pytest

from corpus2know.corpus import Sentence, Token
from corpus2know.lexicon import load_lexicon

DATA = Path(__file__).parent / "data"


def make_sentence(spec, sid="x", **kw):
    """Build a sentence from ``word/pos`` items; leading ``(`` and trailing
    ``,`` ``.`` ``)`` become token punctuation."""
    tokens = []
    for i, item in enumerate(spec.split()):
        surface, pos = item.rsplit("/", 1)
        lead = punct = ""
        while surface.startswith("("):
            lead += "("
            surface = surface[1:]
        while surface and surface[-1] in ",.)":
            punct = surface[-1] + punct
            surface = surface[:-1]
        tokens.append(Token(surface, pos, "", i, lead, punct))
    return Sentence(sid, tuple(tokens), **kw)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(DATA / "lexicon.tsv")


@pytest.fixture(scope="session")
def corpus():
    from corpus2know.corpus import ingest_corpus
    return ingest_corpus(DATA / "corpus.xml")


_CRITERIA = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or report.failed:
        prev = _CRITERIA.get(props["criterion"], "PASS")
        _CRITERIA[props["criterion"]] = "FAIL" if report.failed or prev == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda n: int(n.split(".")[0])):
        terminalreporter.write_line(f"{_CRITERIA[name]}  {name}")
