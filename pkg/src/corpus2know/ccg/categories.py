"""CCG categories in slash notation.

Slashes associate to the left, so ``np/n/np`` reads as ``(np/n)/np``.
"""

import re
from dataclasses import dataclass

ATOMS = ("s", "np", "n", "pp", "part", "conj")
FEATURES = ("conj", "cmp")


class CategoryError(ValueError):
    pass


class Category:
    __slots__ = ()

    @property
    def is_atomic(self):
        return False

    def target(self):
        """Innermost result once every argument has been consumed."""
        return self

    def __str__(self):
        return self.notation()


@dataclass(frozen=True, slots=True)
class Atom(Category):
    name: str

    def __post_init__(self):
        if self.name not in ATOMS:
            raise CategoryError(f"unknown atomic category {self.name!r}")

    @property
    def is_atomic(self):
        return True

    def notation(self):
        return self.name

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"Category({self.name!r})"


@dataclass(frozen=True, slots=True)
class Functor(Category):
    result: Category
    slash: str
    arg: Category

    def __post_init__(self):
        if self.slash not in ("/", "\\"):
            raise CategoryError(f"bad slash {self.slash!r}")

    @property
    def forward(self):
        return self.slash == "/"

    def target(self):
        return self.result.target()

    def notation(self):
        return f"{_wrap(self.result)}{self.slash}{_wrap(self.arg)}"

    def __str__(self):
        return self.notation()

    def __repr__(self):
        return f"Category({self.notation()!r})"


@dataclass(frozen=True, slots=True)
class Marked(Category):
    """A category carrying a rule-internal feature: ``X[conj]`` is a conjunct
    still waiting for its left partner, ``np[cmp]`` a comparative phrase."""

    inner: Category
    feature: str

    def __post_init__(self):
        if self.feature not in FEATURES:
            raise CategoryError(f"unknown feature {self.feature!r}")

    def target(self):
        return self.inner.target()

    def notation(self):
        return f"{_wrap(self.inner)}[{self.feature}]"

    def __str__(self):
        return self.notation()

    def __repr__(self):
        return f"Category({self.notation()!r})"


def _wrap(cat):
    return f"({cat.notation()})" if isinstance(cat, Functor) else cat.notation()


_TOKEN = re.compile(r"\s*(?:([a-z]+)|(\[[a-z]+\])|([/\\()]))")


def _tokens(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise CategoryError(f"cannot parse category {text!r} at offset {pos}")
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


def parse_category(text: str) -> Category:
    toks = _tokens(text)
    if not toks:
        raise CategoryError("empty category")
    cat, rest = _parse_seq(toks, text)
    if rest:
        raise CategoryError(f"trailing input in category {text!r}")
    return cat


def _parse_seq(toks, text):
    cat, toks = _parse_primary(toks, text)
    while toks and toks[0] in ("/", "\\"):
        slash = toks[0]
        arg, toks = _parse_primary(toks[1:], text)
        cat = Functor(cat, slash, arg)
    return cat, toks


def _parse_primary(toks, text):
    if not toks:
        raise CategoryError(f"unexpected end of category {text!r}")
    head = toks[0]
    if head == "(":
        cat, rest = _parse_seq(toks[1:], text)
        if not rest or rest[0] != ")":
            raise CategoryError(f"unbalanced parentheses in {text!r}")
        toks = rest[1:]
    elif head[0].isalpha():
        cat, toks = Atom(head), toks[1:]
    else:
        raise CategoryError(f"unexpected {head!r} in category {text!r}")
    while toks and toks[0].startswith("["):
        cat, toks = Marked(cat, toks[0][1:-1]), toks[1:]
    return cat, toks


def cat(text):
    """Shorthand used by tables of literal categories."""
    return parse_category(text)


S, NP, N, PP, PART, CONJ = (Atom(a) for a in ATOMS)
VP = Functor(S, "\\", NP)
