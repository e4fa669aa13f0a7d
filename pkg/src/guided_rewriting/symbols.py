"""Alphabets, strings, adjustment relations and guide sets.

Symbols are plain ``str`` tokens (non-empty, no whitespace) and strings over
an alphabet are tuples of tokens, so ``u[p:q]`` and ``len(u)`` do the obvious
thing. Tokens are not restricted to single characters: the compressed zero
symbols ``0_0 .. 0_{k-1}`` used by the insertion/deletion pipeline are
ordinary tokens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, ValidationError

Str = tuple  # tuple[str, ...]

EPSILON_TEXT = "~e~"


def _check_token(tok):
    if not isinstance(tok, str) or not tok or any(c.isspace() for c in tok):
        raise ValidationError(f"invalid symbol token {tok!r}")
    return tok


class Alphabet:
    """An ordered, duplicate-free, non-empty set of tokens."""

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Iterable[str]):
        symbols = tuple(_check_token(s) for s in symbols)
        if not symbols:
            raise ValidationError("alphabet must not be empty")
        index = {}
        for i, s in enumerate(symbols):
            if s in index:
                raise ValidationError(f"duplicate symbol {s!r} in alphabet")
            index[s] = i
        self.symbols = symbols
        self._index = index

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, sym):
        return sym in self._index

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Alphabet({' '.join(self.symbols)})"

    def index(self, sym: str) -> int:
        return self._index[sym]

    @property
    def single_chars(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)

    def check(self, u: Sequence[str], what="string"):
        for s in u:
            if s not in self._index:
                raise ValidationError(f"foreign symbol {s!r} in {what}")

    def sort_key(self, u):
        """Length-then-lexicographic key following the alphabet order."""
        return (len(u), tuple(self._index[s] for s in u))

    def union(self, extra: Iterable[str]) -> "Alphabet":
        syms = list(self.symbols)
        syms.extend(s for s in extra if s not in self._index)
        return Alphabet(syms)


def parse_string(text: str, alphabet: Alphabet | None = None, chars=None) -> Str:
    """Parse a textual string into a token tuple.

    ``chars=True`` splits contiguous text into characters; ``chars=False``
    splits on whitespace only; ``chars=None`` splits on whitespace and falls
    back to characters when some token is unknown and every alphabet token is
    a single character. ``~e~`` (or blank text) is the empty string.
    """
    stripped = text.strip()
    if stripped in ("", EPSILON_TEXT, "ε"):
        return ()
    if chars:
        u = tuple(c for c in stripped if not c.isspace())
    else:
        u = tuple(stripped.split())
        if (chars is None and alphabet is not None and alphabet.single_chars
                and any(s not in alphabet for s in u)):
            u = tuple(c for c in stripped if not c.isspace())
    if alphabet is not None:
        for s in u:
            if s not in alphabet:
                raise ParseError(f"foreign symbol {s!r}")
    return u


def render_string(u: Sequence[str], sep=None) -> str:
    if not u:
        return EPSILON_TEXT
    if sep is None:
        sep = "" if all(len(s) == 1 for s in u) else " "
    return sep.join(u)


@dataclass(frozen=True)
class AdjustmentRelation:
    """An equivalence relation on an alphabet, stored as a partition."""

    alphabet: Alphabet
    class_of: Mapping[str, int] = field(hash=False)

    def __post_init__(self):
        missing = [s for s in self.alphabet if s not in self.class_of]
        if missing:
            raise ValidationError(f"symbols without a class: {missing}")

    def adjusts(self, a: str, b: str) -> bool:
        try:
            return self.class_of[a] == self.class_of[b]
        except KeyError as exc:
            raise ValidationError(f"foreign symbol {exc.args[0]!r}") from None

    def classes(self) -> list[tuple[str, ...]]:
        groups: dict[int, list[str]] = {}
        for s in self.alphabet:
            groups.setdefault(self.class_of[s], []).append(s)
        return [tuple(g) for _, g in sorted(groups.items())]

    def representatives(self) -> list[str]:
        return [c[0] for c in self.classes()]

    def members(self, a: str) -> tuple[str, ...]:
        cid = self.class_of[a]
        return tuple(s for s in self.alphabet if self.class_of[s] == cid)

    def is_identity(self) -> bool:
        return len(set(self.class_of.values())) == len(self.alphabet)


def make_adjustment(alphabet: Alphabet, classes: Iterable[Iterable[str]] = ()) -> AdjustmentRelation:
    class_of: dict[str, int] = {}
    next_id = 0
    for group in classes:
        group = list(group)
        for s in group:
            if s not in alphabet:
                raise ValidationError(f"class member {s!r} is not in the alphabet")
            if s in class_of:
                raise ValidationError(f"symbol {s!r} occurs in two adjustment classes")
        for s in group:
            class_of[s] = next_id
        if group:
            next_id += 1
    for s in alphabet:
        if s not in class_of:
            class_of[s] = next_id
            next_id += 1
    return AdjustmentRelation(alphabet, class_of)


def adjustment_from_pairs(alphabet: Alphabet, pairs: Iterable[tuple[str, str]],
                          allow_closure=False) -> AdjustmentRelation:
    """Build an adjustment relation from an explicit list of related pairs.

    The pairs are accepted as-is only when they already form an equivalence
    relation on the alphabet. Otherwise the call fails unless
    ``allow_closure`` asks for the reflexive-symmetric-transitive closure.
    Without an equivalence the closure of a regular language need not be
    regular: with pairs {(a,b),(b,a)} and guide ab every step swaps ba into
    ab, so the closure of (ab)* mimics bubble sort and meets a*b* in a^n b^n.
    """
    pairs = {(a, b) for a, b in pairs}
    for a, b in pairs:
        for s in (a, b):
            if s not in alphabet:
                raise ValidationError(f"pair member {s!r} is not in the alphabet")

    problems = []
    missing_refl = [a for a in alphabet if (a, a) not in pairs]
    if missing_refl:
        problems.append("not reflexive (missing " + ", ".join(f"({a},{a})" for a in missing_refl) + ")")
    asym = sorted((a, b) for a, b in pairs if (b, a) not in pairs)
    if asym:
        problems.append("not symmetric (" + ", ".join(f"({a},{b})" for a, b in asym) + " lacks its converse)")
    intrans = sorted((a, c) for a, b in pairs for b2, c in pairs if b == b2 and (a, c) not in pairs)
    if intrans:
        problems.append("not transitive (missing " + ", ".join(f"({a},{c})" for a, c in intrans[:5]) + ")")

    if problems and not allow_closure:
        raise ValidationError(
            "adjustment pairs do not form an equivalence relation: " + "; ".join(problems)
            + ". Non-equivalence adjustments break regularity (bubble-sort counterexample: "
            "pairs {(a,b),(b,a)} with guide ab turn (ab)* into a language meeting a*b* in a^n b^n). "
            "Add 'pairs-closure: allow' to use the generated equivalence instead.")

    # union-find over the pair graph
    parent = {s: s for s in alphabet}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    groups: dict[str, list[str]] = {}
    for s in alphabet:
        groups.setdefault(find(s), []).append(s)
    return make_adjustment(alphabet, groups.values())


def lift_equiv(rel: AdjustmentRelation, u: Sequence[str], v: Sequence[str]) -> bool:
    if len(u) != len(v):
        return False
    return all(rel.adjusts(a, b) for a, b in zip(u, v))


@dataclass(frozen=True)
class GuideSet:
    """A finite ordered list of guides; order fixes tie-breaking everywhere."""

    guides: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "guides", tuple(tuple(g) for g in self.guides))

    def __iter__(self):
        return iter(self.guides)

    def __len__(self):
        return len(self.guides)

    def __contains__(self, g):
        return tuple(g) in self.guides

    def index(self, g) -> int:
        return self.guides.index(tuple(g))

    def pairs(self):
        """All guide-offset pairs (g, q) with 1 <= q <= #g."""
        return [(g, q) for g in self.guides for q in range(1, len(g) + 1)]


def validate_guides(guides: GuideSet, alphabet: Alphabet) -> list[str]:
    """Return problems found in ``guides``; an empty list means valid."""
    problems = []
    for i, g in enumerate(guides):
        if not g:
            problems.append(f"guide {i}: empty guide")
        for s in g:
            if s not in alphabet:
                problems.append(f"guide {i}: foreign symbol {s}")
    return problems


def validate_id_guides(guides: GuideSet, base_alphabet: Alphabet, zero: str) -> list[str]:
    """Guides of an insertion/deletion system: length >= 2, non-zero at both ends."""
    problems = validate_guides(guides, base_alphabet.union([zero]))
    for i, g in enumerate(guides):
        if len(g) < 2:
            problems.append(f"guide {i}: needs at least two symbols")
        elif g[0] == zero or g[-1] == zero:
            problems.append(f"guide {i}: must start and end with a non-zero symbol")
    return problems
