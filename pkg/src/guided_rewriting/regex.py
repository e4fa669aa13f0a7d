"""A small regex dialect compiled to NFAs by Thompson's construction.

Grammar::

    alt    := concat ('|' concat)*
    concat := star*
    star   := atom '*'*
    atom   := TOKEN | '~e~' | '(' alt ')'

Tokens are whitespace-separated alphabet symbols. When every alphabet token
is a single character, a run such as ``ab`` that is not itself a token is
read as the concatenation of its characters.
"""

from __future__ import annotations

import re

from .automata import EPS, Nfa
from .errors import ParseError
from .symbols import Alphabet

_LEX = re.compile(r"\s*(~e~|[()|*]|[^\s()|*]+)")


def _tokenize(text, alphabet):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _LEX.match(text, pos)
        if not m:
            raise ParseError("unexpected input", column=pos + 1)
        tok = m.group(1)
        col = m.start(1) + 1
        if tok in ("(", ")", "|", "*", "~e~"):
            out.append((tok, tok, col))
        elif tok in alphabet:
            out.append(("sym", tok, col))
        elif alphabet.single_chars:
            for k, ch in enumerate(tok):
                if ch not in alphabet:
                    raise ParseError(f"symbol {ch!r} is not in the alphabet", column=col + k)
                out.append(("sym", ch, col + k))
        else:
            raise ParseError(f"symbol {tok!r} is not in the alphabet", column=col)
        pos = m.end()
    return out


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges = []

    def state(self):
        self.n += 1
        return self.n - 1

    def edge(self, s, a, d):
        self.edges.append((s, a, d))


def regex_to_nfa(text: str, alphabet: Alphabet) -> Nfa:
    toks = _tokenize(text, alphabet)
    b = _Builder()
    pos = 0

    def peek():
        return toks[pos][0] if pos < len(toks) else None

    def parse_alt():
        nonlocal pos
        frags = [parse_concat()]
        while peek() == "|":
            pos += 1
            frags.append(parse_concat())
        if len(frags) == 1:
            return frags[0]
        s, f = b.state(), b.state()
        for fs, ff in frags:
            b.edge(s, EPS, fs)
            b.edge(ff, EPS, f)
        return s, f

    def parse_concat():
        frags = []
        while peek() in ("sym", "~e~", "("):
            frags.append(parse_star())
        if not frags:
            s = b.state()
            return s, s
        s, f = frags[0]
        for fs, ff in frags[1:]:
            b.edge(f, EPS, fs)
            f = ff
        return s, f

    def parse_star():
        nonlocal pos
        frag = parse_atom()
        while peek() == "*":
            pos += 1
            fs, ff = frag
            s, f = b.state(), b.state()
            b.edge(s, EPS, fs)
            b.edge(s, EPS, f)
            b.edge(ff, EPS, fs)
            b.edge(ff, EPS, f)
            frag = (s, f)
        return frag

    def parse_atom():
        nonlocal pos
        kind, val, col = toks[pos]
        pos += 1
        if kind == "sym":
            s, f = b.state(), b.state()
            b.edge(s, val, f)
            return s, f
        if kind == "~e~":
            s, f = b.state(), b.state()
            b.edge(s, EPS, f)
            return s, f
        frag = parse_alt()
        if peek() != ")":
            where = toks[pos][2] if pos < len(toks) else len(text) + 1
            raise ParseError("expected ')'", column=where)
        pos += 1
        return frag

    start, final = parse_alt()
    if pos != len(toks):
        raise ParseError(f"unexpected {toks[pos][1]!r}", column=toks[pos][2])
    return Nfa(alphabet, b.n, [start], [final], b.edges)
