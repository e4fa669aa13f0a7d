"""Closure compilers: automata for the guided-rewriting closure of a regular language.

:func:`build_closure_nfa` turns a DFA for L into an NFA for L_G, the set of
strings reachable from L by adjustment-based guided steps. Its states pair
a DFA state with a repetition-free slice; reading a symbol emits the slice's
yield and moves to a slice joined to the current one by a cut.

:func:`build_id_closure_nfa` handles insertion/deletion systems by
compressing every bounded zero run into one symbol, which makes the steps
length-preserving, running the first construction, then decompressing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .automata import (Dfa, Nfa, determinize, enumerate_upto, extend_alphabet, hom_image,
                       intersect, inv_hom, is_empty, contains_factor_dfa, _distance_to_accept, to_nfa)
from .errors import StateCapExceeded, TheoremInapplicable, ValidationError
from .rewrite import closure_of_string, id_closure, pi, zero_runs
from .slices import EMPTY_SLICE, format_pair, slice_successors, slice_yield, successor_summaries
from .symbols import (AdjustmentRelation, Alphabet, GuideSet, make_adjustment, validate_guides,
                      validate_id_guides)

DEFAULT_STATE_CAP = 10**6


@dataclass(frozen=True)
class GuidedSystem:
    alphabet: Alphabet
    adjustment: AdjustmentRelation
    guides: GuideSet

    def __post_init__(self):
        if self.adjustment.alphabet != self.alphabet:
            raise ValidationError("adjustment relation is over a different alphabet")
        problems = validate_guides(self.guides, self.alphabet)
        if problems:
            raise ValidationError("; ".join(problems))


@dataclass(frozen=True)
class IdSystem:
    """Insertion/deletion system; ``alphabet`` includes the zero symbol."""

    alphabet: Alphabet
    zero: str
    guides: GuideSet

    def __post_init__(self):
        if self.zero not in self.alphabet:
            raise ValidationError(f"zero symbol {self.zero!r} is not in the alphabet")
        problems = validate_id_guides(self.guides, self.base_alphabet, self.zero)
        if problems:
            raise ValidationError("; ".join(problems))

    @property
    def base_alphabet(self) -> Alphabet:
        return Alphabet(s for s in self.alphabet if s != self.zero)


def _coerce_dfa(M, alphabet: Alphabet) -> Dfa:
    M = determinize(M)
    if set(M.alphabet) == set(alphabet):
        return M
    if set(M.alphabet) <= set(alphabet):
        return extend_alphabet(M, alphabet)
    raise ValidationError(f"automaton alphabet {M.alphabet} does not match system alphabet {alphabet}")


def _live_states(M: Dfa) -> set[int]:
    return set(_distance_to_accept(to_nfa(M)))


def build_closure_nfa(M, system: GuidedSystem, max_states=DEFAULT_STATE_CAP, stats=None,
                      merge=True) -> Nfa:
    """NFA accepting the closure of L(M) under the system's guided steps.

    Only states reachable from the initial state and co-reachable in M are
    materialized. ``stats``, if given, is a dict filled with counts.

    ``merge=False`` builds the automaton with one state per (DFA state,
    repetition-free slice) pair plus a fresh initial and final state. The
    default merges states: successors of a slice depend only on its
    unfinished pairs, and the emitted symbol only on its top pair, so the
    state between two positions is (DFA state, unfinished pairs of the slice
    just read) and reading a symbol picks the next slice.
    """
    M = _coerce_dfa(M, system.alphabet)
    if merge:
        return _build_merged(M, system, max_states, stats)
    return _build_literal(M, system, max_states, stats)


class _StateTable:
    def __init__(self, max_states, reserved):
        self.ids = {}
        self.order = []
        self.max_states = max_states
        self.reserved = reserved

    def __call__(self, key):
        i = self.ids.get(key)
        if i is None:
            if len(self.ids) + self.reserved >= self.max_states:
                raise StateCapExceeded(f"closure automaton exceeds {self.max_states} states")
            i = self.ids[key] = len(self.ids) + self.reserved
            self.order.append(key)
        return i


def _successor_cache(system):
    rel, guides = system.adjustment, system.guides
    reps = rel.representatives()
    cache = {}

    def successors(z):
        if z not in cache:
            out = {}
            for r in reps:
                for z2 in slice_successors(z, r, guides, rel):
                    out.setdefault(z2, None)
            cache[z] = list(out)
        return cache[z]

    return successors


def _build_merged(M: Dfa, system: GuidedSystem, max_states, stats) -> Nfa:
    rel, guides = system.adjustment, system.guides
    reps = rel.representatives()
    live = _live_states(M)
    # unfinished-pair lists are interned as small ints
    pending: list[tuple] = [()]
    pending_id = {(): 0}
    moves_cache: dict[int, list] = {}

    def intern(d):
        i = pending_id.get(d)
        if i is None:
            i = pending_id[d] = len(pending)
            pending.append(d)
        return i

    def moves(di):
        # (symbol read, symbol emitted, unfinished pairs afterwards)
        if di not in moves_cache:
            out = {}
            for r in reps:
                summaries = successor_summaries(pending[di], r, guides, rel)
                for top, nxt in sorted(summaries, key=lambda t: (t[0] or "", t[1])):
                    nid = intern(nxt)
                    for a in rel.members(r):
                        out.setdefault((a, a if top is None else top, nid), None)
            moves_cache[di] = list(out)
        return moves_cache[di]

    sid = _StateTable(max_states, 0)
    sid((M.start, 0))
    edges = {}
    k = 0
    while k < len(sid.order):
        q, di = sid.order[k]
        k += 1
        if q not in live:
            continue
        for a, b, nxt in moves(di):
            q2 = M.delta[(q, a)]
            if q2 in live:
                edges[(k - 1, b, sid((q2, nxt)))] = None
    states = sid.order
    names = {i: f"{M.names.get(q, q)}|" + "".join(format_pair(p) for p in pending[d])
             for i, (q, d) in enumerate(states)}
    accepting = [i for i, (q, d) in enumerate(states) if q in M.accepting and d == 0]
    nfa = Nfa(system.alphabet, len(states), [0], accepting, list(edges), names)
    if stats is not None:
        stats.update(states=len(nfa.states), transitions=len(edges),
                     slices=len({d for _, d in states}), dfa_states=len(M.states))
    return nfa


def _build_literal(M: Dfa, system: GuidedSystem, max_states, stats) -> Nfa:
    rel = system.adjustment
    live = _live_states(M)
    successors = _successor_cache(system)
    INIT, FINAL = 0, 1
    sid = _StateTable(max_states, 2)
    edges = []

    if M.start in live:
        for z in successors(EMPTY_SLICE):
            edges.append((INIT, None, sid((M.start, z))))

    k = 0
    while k < len(sid.order):
        q, z = sid.order[k]
        src = k + 2
        k += 1
        symbols = rel.members(z.pairs[0].symbol) if z.pairs else tuple(system.alphabet)
        for a in symbols:
            q2 = M.delta[(q, a)]
            if q2 not in live:
                continue
            b = slice_yield(z, a)
            if z.is_end and q2 in M.accepting:
                edges.append((src, b, FINAL))
            for z2 in successors(z):
                edges.append((src, b, sid((q2, z2))))

    names = {INIT: "init", FINAL: "final"}
    for i, (q, z) in enumerate(sid.order, start=2):
        names[i] = f"{M.names.get(q, q)}|" + "".join(format_pair(p) for p in z)
    accepting = [FINAL] + ([INIT] if M.start in M.accepting else [])
    nfa = Nfa(system.alphabet, len(sid.order) + 2, [INIT], accepting, edges, names)
    if stats is not None:
        stats.update(states=len(nfa.states), transitions=len(edges),
                     slices=len({z for _, z in sid.order}), dfa_states=len(M.states))
    return nfa


def oracle_closure_upto(M, system: GuidedSystem, n: int) -> list[tuple]:
    """Brute force: close every member of L(M) up to length n by breadth-first search."""
    M = _coerce_dfa(M, system.alphabet)
    found = set()
    for u in enumerate_upto(M, n):
        # closures nest, so a member already reached adds nothing new
        if u not in found:
            found |= closure_of_string(u, system.guides, system.adjustment)
    return sorted(found, key=system.alphabet.sort_key)


# -- compression ---------------------------------------------------------------

@dataclass(frozen=True)
class CompressionScheme:
    """Encodes a run of i < k zeros as the single symbol ``<zero>_i``."""

    base_alphabet: Alphabet
    zero: str
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("compression bound k must be at least 1")
        clash = [t for t in self.theta if t in self.base_alphabet]
        if clash:
            raise ValidationError(f"compressed zero symbols clash with the alphabet: {clash}")

    @property
    def theta(self) -> tuple[str, ...]:
        return tuple(f"{self.zero}_{i}" for i in range(self.k))

    @property
    def compressed_alphabet(self) -> Alphabet:
        return self.base_alphabet.union(self.theta)

    @property
    def homomorphism(self) -> dict[str, tuple]:
        h = {a: (a,) for a in self.base_alphabet}
        h.update({t: (self.zero,) * i for i, t in enumerate(self.theta)})
        return h

    def adjustment(self) -> AdjustmentRelation:
        return make_adjustment(self.compressed_alphabet, [self.theta])


def _runs_and_letters(u, scheme: CompressionScheme):
    """Split u into alternating zero-run lengths and non-zero letters."""
    runs, letters, cur = [], [], 0
    for s in u:
        if s == scheme.zero:
            cur += 1
            continue
        if s not in scheme.base_alphabet:
            raise ValidationError(f"foreign symbol {s!r}")
        runs.append(cur)
        letters.append(s)
        cur = 0
    runs.append(cur)
    for r in runs:
        if r >= scheme.k:
            raise ValidationError(f"zero run of length {r} is not below the bound k = {scheme.k}")
    return runs, letters


def compress_string(u: Sequence[str], scheme: CompressionScheme) -> tuple:
    """Every gap, leading and trailing included, becomes one zero-run symbol."""
    runs, letters = _runs_and_letters(tuple(u), scheme)
    out = [scheme.theta[runs[0]]]
    for a, r in zip(letters, runs[1:]):
        out += [a, scheme.theta[r]]
    return tuple(out)


def compress_guide(g: Sequence[str], scheme: CompressionScheme) -> tuple:
    """Interior gaps only, so the compressed guide starts and ends on a letter."""
    g = tuple(g)
    if not g or g[0] == scheme.zero or g[-1] == scheme.zero:
        raise ValidationError("guide must start and end with a non-zero symbol")
    return compress_string(g, scheme)[1:-1]


def decompress(w: Sequence[str], scheme: CompressionScheme) -> tuple:
    h = scheme.homomorphism
    out = []
    for s in w:
        if s not in h:
            raise ValidationError(f"foreign symbol {s!r} in compressed string")
        out.extend(h[s])
    return tuple(out)


def render_compressed(w: Sequence[str], scheme: CompressionScheme, interior_only=False) -> str:
    w = tuple(w)
    if interior_only and len(w) >= 2 and w[0] in scheme.theta and w[-1] in scheme.theta:
        w = w[1:-1]
    return " ".join(w) if w else "~e~"


def structure_dfa(scheme: CompressionScheme) -> Dfa:
    """DFA for (Theta . Sigma0)* . Theta, the image of compression."""
    alpha = scheme.compressed_alphabet
    delta = {}
    for a in alpha:
        is_theta = a in scheme.theta
        delta[("gap", a)] = "letter" if is_theta else "sink"
        delta[("letter", a)] = "sink" if is_theta else "gap"
        delta[("sink", a)] = "sink"
    return Dfa.build(alpha, "gap", ["letter"], delta)


def compressed_language(M, scheme: CompressionScheme) -> Dfa:
    """DFA for the compressions of the strings of L(M)."""
    return intersect(structure_dfa(scheme), inv_hom(M, scheme.homomorphism, scheme.compressed_alphabet))


def infer_zero_run_bound(M, zero: str):
    """Smallest k such that no string of L(M) contains k consecutive zeros, else None."""
    M = determinize(M)
    if zero not in M.alphabet:
        return 1
    for k in range(1, len(M.states) + 2):
        if is_empty(intersect(M, contains_factor_dfa(M.alphabet, (zero,) * k))):
            return k
    return None


def _guide_bound(guides: GuideSet, zero: str) -> int:
    return max((max(zero_runs(g, zero)[1], default=0) + 1 for g in guides), default=1)


def _checked_bound(M, system: IdSystem) -> int:
    kl = infer_zero_run_bound(M, system.zero)
    if kl is None:
        raise TheoremInapplicable(
            f"Theorem inapplicable: the language has unbounded runs of {system.zero}")
    return max(kl, _guide_bound(system.guides, system.zero))


def build_id_closure_nfa(M, system: IdSystem, max_states=DEFAULT_STATE_CAP, stats=None) -> Nfa:
    M = _coerce_dfa(M, system.alphabet)
    k = _checked_bound(M, system)
    scheme = CompressionScheme(system.base_alphabet, system.zero, k)
    lbar = compressed_language(M, scheme)
    gbar = GuideSet(compress_guide(g, scheme) for g in system.guides)
    bar_system = GuidedSystem(scheme.compressed_alphabet, scheme.adjustment(), gbar)
    inner = build_closure_nfa(lbar, bar_system, max_states=max_states, stats=stats)
    if stats is not None:
        stats["k"] = k
    return hom_image(inner, scheme.homomorphism, system.alphabet)


def _members_by_anchor_count(M: Dfa, zero: str, max_letters: int, k: int):
    """Strings of L(M) with at most ``max_letters`` non-zero symbols and runs below k."""
    live = _live_states(M)
    out = []
    stack = [(M.start, (), 0, 0)]
    while stack:
        q, w, letters, run = stack.pop()
        if q in M.accepting:
            out.append(w)
        for a in M.alphabet:
            r = M.delta[(q, a)]
            if r not in live:
                continue
            if a == zero:
                if run + 1 < k:
                    stack.append((r, w + (a,), letters, run + 1))
            elif letters < max_letters:
                stack.append((r, w + (a,), letters + 1, 0))
    return out


def oracle_id_closure_upto(M, system: IdSystem, n: int) -> list[tuple]:
    """Brute force: close by breadth-first search every u in L(M) that can reach length <= n.

    Steps preserve the zero-free image and the leading and trailing zero
    runs, so only members with at most n symbols outside interior gaps
    matter; their length is at most n + (n + 1)(k - 1).
    """
    M = _coerce_dfa(M, system.alphabet)
    k = _checked_bound(M, system)
    reached = set()
    for u in _members_by_anchor_count(M, system.zero, n, k):
        lead, _, trail = zero_runs(u, system.zero)
        if len(pi(u, system.zero)) + lead + trail > n:
            continue
        # closures nest, so a member already reached adds nothing new
        if u not in reached:
            reached |= id_closure(u, system.guides, system.zero)
    return sorted((v for v in reached if len(v) <= n), key=system.alphabet.sort_key)
