"""Text formats for guided systems, automata, rewrite steps and slice sequences.

System file::

    alphabet: a b c          # required, first
    class: a b               # adjustment class (repeatable)
    pair: a b                # raw adjustment pair (repeatable)
    pairs-closure: allow     # accept pairs that need closing
    guide: b b               # repeatable
    zero: 0                  # insertion/deletion mode

Automaton file::

    type: dfa | nfa
    alphabet: a b c          # optional, otherwise inferred from transitions
    states: s0 s1
    start: s0                # nfa: several
    accept: s1
    trans: s0 a s1
    etrans: s0 s1            # nfa only

``#`` starts a comment in every format.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .automata import EPS, Dfa, Nfa
from .closure import GuidedSystem, IdSystem
from .errors import ParseError, ValidationError
from .rewrite import GuidePos, RewriteSequence
from .slices import Slice, SliceSequence
from .symbols import (Alphabet, AdjustmentRelation, GuideSet, adjustment_from_pairs, make_adjustment,
                      parse_string, render_string)


def _lines(text):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {line!r}", line=no)
        yield no, key.strip(), rest.strip()


def _tokens(text, alphabet: Alphabet | None):
    toks = text.split()
    if alphabet is not None and alphabet.single_chars and any(t not in alphabet for t in toks):
        if all(c in alphabet for c in "".join(toks)):
            toks = list("".join(toks))
    return tuple(toks)


@dataclass
class SystemFile:
    alphabet: Alphabet
    classes: list = field(default_factory=list)
    pairs: list = field(default_factory=list)
    allow_closure: bool = False
    guides: list = field(default_factory=list)
    zero: str | None = None

    def adjustment(self) -> AdjustmentRelation:
        if self.pairs and self.classes:
            raise ValidationError("give the adjustment either as classes or as pairs, not both")
        if self.pairs:
            return adjustment_from_pairs(self.alphabet, self.pairs, allow_closure=self.allow_closure)
        return make_adjustment(self.alphabet, self.classes)

    def guided_system(self) -> GuidedSystem:
        return GuidedSystem(self.alphabet, self.adjustment(), GuideSet(self.guides))

    def id_system(self) -> IdSystem:
        if self.zero is None:
            raise ValidationError("insertion/deletion mode needs a 'zero:' line")
        return IdSystem(self.alphabet, self.zero, GuideSet(self.guides))


def parse_system(text: str) -> SystemFile:
    sysf = None
    for no, key, rest in _lines(text):
        if key == "alphabet":
            if sysf is not None:
                raise ParseError("duplicate alphabet line", line=no)
            try:
                sysf = SystemFile(Alphabet(rest.split()))
            except ValidationError as exc:
                raise ParseError(str(exc), line=no) from None
            continue
        if sysf is None:
            raise ParseError("the alphabet line must come first", line=no)
        if key == "class":
            sysf.classes.append(_tokens(rest, sysf.alphabet))
        elif key == "pair":
            toks = rest.split()
            if len(toks) != 2:
                raise ParseError("a pair line needs exactly two symbols", line=no)
            sysf.pairs.append(tuple(toks))
        elif key == "pairs-closure":
            if rest not in ("allow", "deny"):
                raise ParseError("pairs-closure must be 'allow' or 'deny'", line=no)
            sysf.allow_closure = rest == "allow"
        elif key == "guide":
            sysf.guides.append(() if rest in ("", "~e~") else _tokens(rest, sysf.alphabet))
        elif key == "zero":
            toks = rest.split()
            if len(toks) != 1:
                raise ParseError("zero line needs exactly one symbol", line=no)
            sysf.zero = toks[0]
        else:
            raise ParseError(f"unknown key {key!r}", line=no)
    if sysf is None:
        raise ParseError("missing alphabet line")
    return sysf


def parse_automaton(text: str):
    kind = None
    alphabet = None
    states, starts, accept = [], [], []
    trans, etrans = [], []
    for no, key, rest in _lines(text):
        toks = rest.split()
        if key == "type":
            if rest not in ("dfa", "nfa"):
                raise ParseError("type must be dfa or nfa", line=no)
            kind = rest
        elif key == "alphabet":
            try:
                alphabet = Alphabet(toks)
            except ValidationError as exc:
                raise ParseError(str(exc), line=no) from None
        elif key == "states":
            states += toks
        elif key == "start":
            starts += toks
        elif key == "accept":
            accept += toks
        elif key == "trans":
            if len(toks) != 3:
                raise ParseError("trans needs: <src> <symbol> <dst>", line=no)
            trans.append((no, *toks))
        elif key == "etrans":
            if len(toks) != 2:
                raise ParseError("etrans needs: <src> <dst>", line=no)
            etrans.append((no, *toks))
        else:
            raise ParseError(f"unknown key {key!r}", line=no)
    if kind is None:
        raise ParseError("missing type line")
    if not starts:
        raise ParseError("missing start line")
    if alphabet is None:
        syms = list(dict.fromkeys(t[2] for t in trans))
        if not syms:
            raise ParseError("no alphabet line and no transitions to infer it from")
        alphabet = Alphabet(syms)
    declared = set(states) | set(starts) | set(accept) | {t[1] for t in trans} | {t[3] for t in trans} \
        | {t[1] for t in etrans} | {t[2] for t in etrans}
    if states:
        undeclared = sorted(declared - set(states))
        if undeclared:
            raise ParseError(f"undeclared states: {' '.join(undeclared)}")
    for no, _, a, _ in trans:
        if a not in alphabet:
            raise ParseError(f"symbol {a!r} is not in the alphabet", line=no)
    order = states or sorted(declared)
    if kind == "dfa":
        if len(starts) != 1:
            raise ParseError("a dfa has exactly one start state")
        if etrans:
            raise ParseError("a dfa has no epsilon transitions", line=etrans[0][0])
        delta = {}
        for no, s, a, d in trans:
            if (s, a) in delta and delta[(s, a)] != d:
                raise ParseError(f"nondeterministic transition from {s} on {a}", line=no)
            delta[(s, a)] = d
        return Dfa.build(alphabet, starts[0], accept, delta, states=order)
    edges = [(s, a, d) for _, s, a, d in trans] + [(s, EPS, d) for _, s, d in etrans]
    return Nfa.build(alphabet, starts, accept, edges, states=order)


def format_automaton(A) -> str:
    """Deterministic text rendering; states are written as q<id>."""
    alpha = A.alphabet
    lines = [f"type: {'dfa' if isinstance(A, Dfa) else 'nfa'}",
             f"alphabet: {' '.join(alpha)}",
             "states: " + " ".join(f"q{q}" for q in A.states)]
    if isinstance(A, Dfa):
        lines.append(f"start: q{A.start}")
    else:
        lines.append("start: " + " ".join(f"q{q}" for q in sorted(A.starts)))
    lines.append("accept: " + " ".join(f"q{q}" for q in sorted(A.accepting)))
    if isinstance(A, Dfa):
        edges = [(q, alpha.index(a), a, r) for (q, a), r in A.delta.items()]
    else:
        edges = [(q, -1 if a is EPS else alpha.index(a), a, r) for q, a, r in A.transitions()]
    for q, _, a, r in sorted(edges):
        lines.append(f"etrans: q{q} q{r}" if a is EPS else f"trans: q{q} {a} q{r}")
    return "\n".join(lines) + "\n"


def parse_steps(text: str, alphabet: Alphabet, base) -> RewriteSequence:
    """Lines ``step: <position> <guide>``."""
    steps = []
    for no, key, rest in _lines(text):
        if key != "step":
            raise ParseError(f"expected a step line, got {key!r}", line=no)
        pos, _, guide = rest.partition(" ")
        if not pos.isdigit() or not guide.strip():
            raise ParseError("step needs: <position> <guide>", line=no)
        try:
            g = parse_string(guide, alphabet)
        except ParseError as exc:
            raise ParseError(str(exc), line=no) from None
        steps.append(GuidePos(g, int(pos)))
    return RewriteSequence(base, tuple(steps))


_PAIR = re.compile(r"\(\s*([^,()]+?)\s*,\s*(\d+)\s*\)")


def parse_slices(text: str, alphabet: Alphabet, base) -> SliceSequence:
    """Lines ``slice: (g,q) (g,q) ...``, one per position; an empty list is the empty slice."""
    slices = []
    for no, key, rest in _lines(text):
        if key != "slice" and not key.isdigit():
            raise ParseError(f"expected a slice line, got {key!r}", line=no)
        rest = rest.split("|", 1)[0]
        pairs = []
        leftover = _PAIR.sub("", rest).strip()
        if leftover:
            raise ParseError(f"cannot read {leftover!r} as guide-offset pairs", line=no)
        for m in _PAIR.finditer(rest):
            try:
                g = parse_string(m.group(1), alphabet)
            except ParseError as exc:
                raise ParseError(str(exc), line=no) from None
            pairs.append((g, int(m.group(2))))
        slices.append(Slice(tuple(pairs)))
    if len(slices) != len(base):
        raise ParseError(f"{len(slices)} slice lines for a base string of length {len(base)}")
    return SliceSequence(base, tuple(slices))


def format_steps(rho: RewriteSequence) -> str:
    return "".join(f"step: {p} {render_string(g)}\n" for g, p in rho.steps)
