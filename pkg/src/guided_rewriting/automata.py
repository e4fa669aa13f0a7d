"""Finite automata over token alphabets.

States are integers ``0 .. n-1``; ``names`` maps them to readable labels for
debugging and file output. DFAs are always complete: missing transitions go
to an explicit sink added at construction time. NFAs use ``None`` as the
epsilon label.
"""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import ValidationError
from .symbols import Alphabet

EPS = None


class Dfa:
    __slots__ = ("alphabet", "states", "start", "accepting", "delta", "names")

    def __init__(self, alphabet: Alphabet, num_states: int, start: int, accepting,
                 delta: Mapping[tuple[int, str], int], names=None):
        self.alphabet = alphabet
        self.states = tuple(range(num_states))
        self.start = start
        self.accepting = frozenset(accepting)
        self.delta = dict(delta)
        self.names = dict(names or {})
        for q in self.states:
            for a in alphabet:
                if (q, a) not in self.delta:
                    raise ValidationError(f"transition ({q}, {a}) missing")

    @classmethod
    def build(cls, alphabet: Alphabet, start: Hashable, accepting: Iterable[Hashable],
              delta: Mapping[tuple[Hashable, str], Hashable], states: Iterable[Hashable] = ()):
        """Build from arbitrary hashable state ids, completing with a sink."""
        ids: dict = {}

        def sid(q):
            if q not in ids:
                ids[q] = len(ids)
            return ids[q]

        sid(start)
        for q in states:
            sid(q)
        table = {}
        for (q, a), r in delta.items():
            if a not in alphabet:
                raise ValidationError(f"foreign symbol {a!r} in transition")
            table[(sid(q), a)] = sid(r)
        acc = {sid(q) for q in accepting}
        names = {i: str(q) for q, i in ids.items()}
        n = len(ids)
        if any((q, a) not in table for q in range(n) for a in alphabet):
            sink = n
            n += 1
            names[sink] = "sink"
            for q in range(n):
                for a in alphabet:
                    table.setdefault((q, a), sink)
        return cls(alphabet, n, 0, acc, table, names)

    def step(self, q: int, a: str) -> int:
        return self.delta[(q, a)]

    def run(self, w: Sequence[str], q: int | None = None) -> int:
        q = self.start if q is None else q
        for a in w:
            q = self.delta[(q, a)]
        return q

    def __repr__(self):
        return f"Dfa({len(self.states)} states over {' '.join(self.alphabet)})"


class Nfa:
    __slots__ = ("alphabet", "states", "starts", "accepting", "trans", "names")

    def __init__(self, alphabet: Alphabet, num_states: int, starts, accepting,
                 transitions: Iterable[tuple[int, str | None, int]], names=None):
        self.alphabet = alphabet
        self.states = tuple(range(num_states))
        self.starts = frozenset(starts)
        self.accepting = frozenset(accepting)
        self.names = dict(names or {})
        trans: dict[int, dict] = {q: {} for q in self.states}
        for src, a, dst in transitions:
            if src not in trans or dst not in trans:
                raise ValidationError(f"transition endpoint outside the state set: {src} -> {dst}")
            if a is not EPS and a not in alphabet:
                raise ValidationError(f"foreign symbol {a!r} in transition")
            trans[src].setdefault(a, set()).add(dst)
        self.trans = {q: {a: frozenset(d) for a, d in m.items()} for q, m in trans.items()}
        for q in self.starts | self.accepting:
            if q not in trans:
                raise ValidationError(f"state {q} is not declared")

    @classmethod
    def build(cls, alphabet: Alphabet, starts, accepting, transitions, states=()):
        ids: dict = {}

        def sid(q):
            if q not in ids:
                ids[q] = len(ids)
            return ids[q]

        for q in states:
            sid(q)
        starts = [sid(q) for q in starts]
        edges = [(sid(s), a, sid(d)) for s, a, d in transitions]
        acc = [sid(q) for q in accepting]
        names = {i: str(q) for q, i in ids.items()}
        return cls(alphabet, len(ids), starts, acc, edges, names)

    def transitions(self):
        for q, m in self.trans.items():
            for a, ds in m.items():
                for d in ds:
                    yield q, a, d

    def eps_closure(self, qs: Iterable[int]) -> frozenset:
        seen = set(qs)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for r in self.trans[q].get(EPS, ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    def initial(self) -> frozenset:
        return self.eps_closure(self.starts)

    def step(self, qs: Iterable[int], a: str) -> frozenset:
        nxt = set()
        for q in qs:
            nxt.update(self.trans[q].get(a, ()))
        return self.eps_closure(nxt)

    def __repr__(self):
        return f"Nfa({len(self.states)} states over {' '.join(self.alphabet)})"


# -- basic queries -------------------------------------------------------------

def to_nfa(A) -> Nfa:
    if isinstance(A, Nfa):
        return A
    edges = [(q, a, r) for (q, a), r in A.delta.items()]
    return Nfa(A.alphabet, len(A.states), [A.start], A.accepting, edges, A.names)


def accepts(A, w: Sequence[str]) -> bool:
    A.alphabet.check(w)
    if isinstance(A, Dfa):
        return A.run(w) in A.accepting
    qs = A.initial()
    for a in w:
        qs = A.step(qs, a)
        if not qs:
            return False
    return bool(qs & A.accepting)


def _distance_to_accept(A: Nfa) -> dict[int, int]:
    """Fewest symbols needed from each state to reach acceptance (0-1 BFS)."""
    rev: dict[int, list] = {q: [] for q in A.states}
    for q, a, r in A.transitions():
        rev[r].append((q, 0 if a is EPS else 1))
    dist = {q: 0 for q in A.accepting}
    dq = deque(A.accepting)
    while dq:
        r = dq.popleft()
        for q, w in rev[r]:
            nd = dist[r] + w
            if nd < dist.get(q, 1 << 60):
                dist[q] = nd
                if w == 0:
                    dq.appendleft(q)
                else:
                    dq.append(q)
    return dist


def enumerate_upto(A, n: int) -> list[tuple]:
    """All accepted strings of length <= n, shortest first, then by alphabet order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    nfa = to_nfa(A)
    dist = _distance_to_accept(nfa)
    inf = 1 << 60

    def gap(qs):
        return min((dist.get(q, inf) for q in qs), default=inf)

    out = []
    frontier = [((), nfa.initial())]
    for length in range(n + 1):
        nxt = []
        for w, qs in frontier:
            if qs & nfa.accepting:
                out.append(w)
            if length == n:
                continue
            for a in nfa.alphabet:
                rs = nfa.step(qs, a)
                if rs and gap(rs) <= n - length - 1:
                    nxt.append((w + (a,), rs))
        frontier = nxt
    return out


def is_empty(A) -> bool:
    nfa = to_nfa(A)
    return not (set(_distance_to_accept(nfa)) & nfa.initial()) if nfa.starts else True


# -- constructions ---------------------------------------------------------------

def determinize(A) -> Dfa:
    """Subset construction; subsets are numbered in breadth-first discovery order."""
    if isinstance(A, Dfa):
        return A
    start = A.initial()
    ids = {start: 0}
    order = [start]
    delta = {}
    queue = deque([start])
    while queue:
        S = queue.popleft()
        for a in A.alphabet:
            T = A.step(S, a)
            if T not in ids:
                ids[T] = len(order)
                order.append(T)
                queue.append(T)
            delta[(ids[S], a)] = ids[T]
    acc = [i for i, S in enumerate(order) if S & A.accepting]
    names = {i: "{" + ",".join(str(q) for q in sorted(S)) + "}" for i, S in enumerate(order)}
    return Dfa(A.alphabet, len(order), 0, acc, delta, names)


def complement(A) -> Dfa:
    D = determinize(A)
    return Dfa(D.alphabet, len(D.states), D.start, set(D.states) - D.accepting, D.delta, D.names)


def _same_alphabet(A, B):
    if set(A.alphabet) != set(B.alphabet):
        raise ValidationError(f"alphabet mismatch: {A.alphabet} vs {B.alphabet}")


def _product(A, B, mode) -> Dfa:
    _same_alphabet(A, B)
    A, B = determinize(A), determinize(B)
    start = (A.start, B.start)
    ids = {start: 0}
    order = [start]
    delta = {}
    queue = deque([start])
    while queue:
        p, q = s = queue.popleft()
        for a in A.alphabet:
            t = (A.delta[(p, a)], B.delta[(q, a)])
            if t not in ids:
                ids[t] = len(order)
                order.append(t)
                queue.append(t)
            delta[(ids[s], a)] = ids[t]
    if mode == "and":
        acc = [i for i, (p, q) in enumerate(order) if p in A.accepting and q in B.accepting]
    elif mode == "or":
        acc = [i for i, (p, q) in enumerate(order) if p in A.accepting or q in B.accepting]
    else:
        acc = [i for i, (p, q) in enumerate(order) if (p in A.accepting) != (q in B.accepting)]
    names = {i: f"({p},{q})" for i, (p, q) in enumerate(order)}
    return Dfa(A.alphabet, len(order), 0, acc, delta, names)


def intersect(A, B) -> Dfa:
    return _product(A, B, "and")


def union(A, B) -> Dfa:
    return _product(A, B, "or")


def symmetric_difference(A, B) -> Dfa:
    return _product(A, B, "xor")


def equivalent(A, B) -> bool:
    return is_empty(symmetric_difference(A, B))


def hom_image(A, h: Mapping[str, Sequence[str]], target: Alphabet) -> Nfa:
    """NFA for {h(w) | w in L(A)}: each a-edge becomes a fresh path spelling h(a)."""
    A = to_nfa(A)
    n = len(A.states)
    edges = []
    for q, a, r in A.transitions():
        if a is EPS:
            edges.append((q, EPS, r))
            continue
        word = tuple(h[a])
        if not word:
            edges.append((q, EPS, r))
            continue
        prev = q
        for i, b in enumerate(word):
            if i == len(word) - 1:
                edges.append((prev, b, r))
            else:
                edges.append((prev, b, n))
                prev = n
                n += 1
    names = dict(A.names)
    return Nfa(target, n, A.starts, A.accepting, edges, names)


def inv_hom(A, h: Mapping[str, Sequence[str]], source: Alphabet) -> Dfa:
    """DFA for {w over source | h(w) in L(A)}."""
    D = determinize(A)
    delta = {}
    for q in D.states:
        for a in source:
            word = tuple(h[a])
            D.alphabet.check(word, "homomorphic image")
            delta[(q, a)] = D.run(word, q)
    return Dfa(source, len(D.states), D.start, D.accepting, delta, D.names)


def extend_alphabet(A: Dfa, alphabet: Alphabet) -> Dfa:
    """Same language over a larger alphabet; new symbols lead to a sink."""
    if not set(A.alphabet) <= set(alphabet):
        raise ValidationError(f"alphabet mismatch: {A.alphabet} is not contained in {alphabet}")
    return Dfa.build(alphabet, A.start, A.accepting, A.delta, states=A.states)


def finite_language_dfa(alphabet: Alphabet, words: Iterable[Sequence[str]]) -> Dfa:
    """Prefix-tree DFA accepting exactly ``words``."""
    delta = {}
    acc = set()
    nodes = {(): 0}
    for w in words:
        w = tuple(w)
        alphabet.check(w)
        for i in range(len(w)):
            nodes.setdefault(w[:i + 1], len(nodes))
            delta[(w[:i], w[i])] = w[:i + 1]
        acc.add(w)
    return Dfa.build(alphabet, (), acc, delta, states=sorted(nodes, key=nodes.get))


def trim(A: Dfa) -> Dfa:
    """Drop unreachable states (the sink and dead states stay for completeness)."""
    seen = {A.start}
    queue = deque([A.start])
    while queue:
        q = queue.popleft()
        for a in A.alphabet:
            r = A.delta[(q, a)]
            if r not in seen:
                seen.add(r)
                queue.append(r)
    order = sorted(seen)
    ids = {q: i for i, q in enumerate(order)}
    delta = {(ids[q], a): ids[A.delta[(q, a)]] for q in order for a in A.alphabet}
    return Dfa(A.alphabet, len(order), ids[A.start], [ids[q] for q in A.accepting if q in ids],
               delta, {ids[q]: A.names.get(q, str(q)) for q in order})


def minimize(A) -> Dfa:
    """Moore partition refinement on the reachable part; canonical numbering."""
    D = trim(determinize(A))
    block = {q: int(q in D.accepting) for q in D.states}
    while True:
        sig = {q: (block[q],) + tuple(block[D.delta[(q, a)]] for a in D.alphabet) for q in D.states}
        ids: dict = {}
        new = {}
        for q in sorted(D.states):
            new[q] = ids.setdefault(sig[q], len(ids))
        if len(ids) == len(set(block.values())):
            block = new
            break
        block = new
    # renumber in breadth-first order from the start block
    order = {block[D.start]: 0}
    queue = deque([D.start])
    rep = {block[D.start]: D.start}
    while queue:
        q = queue.popleft()
        for a in D.alphabet:
            r = D.delta[(q, a)]
            if block[r] not in order:
                order[block[r]] = len(order)
                rep[block[r]] = r
                queue.append(r)
    delta = {(order[b], a): order[block[D.delta[(rep[b], a)]]] for b in order for a in D.alphabet}
    acc = {order[block[q]] for q in D.accepting}
    return Dfa(D.alphabet, len(order), 0, acc, delta)


def universal_dfa(alphabet: Alphabet) -> Dfa:
    return Dfa(alphabet, 1, 0, [0], {(0, a): 0 for a in alphabet})


def contains_factor_dfa(alphabet: Alphabet, factor: Sequence[str]) -> Dfa:
    """DFA for strings containing ``factor`` (KMP automaton)."""
    factor = tuple(factor)
    m = len(factor)
    delta = {}
    for q in range(m + 1):
        for a in alphabet:
            if q == m:
                delta[(q, a)] = m
                continue
            w = factor[:q] + (a,)
            k = min(len(w), m)
            while k and w[len(w) - k:] != factor[:k]:
                k -= 1
            delta[(q, a)] = k
    return Dfa(alphabet, m + 1, 0, [m], delta)
