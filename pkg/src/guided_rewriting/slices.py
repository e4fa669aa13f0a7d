"""Slices, cuts, slice sequences and the chunk preorder.

A slice records, for one position of the base string, every guide-offset pair
that touched that position, bottom (earliest) first. A slice sequence is one
slice per position such that adjacent slices are joined by a cut: pairs that
do not finish their guide continue into the next slice at offset + 1, in the
same relative order, and every other pair of the next slice starts a guide.

Positions and in-slice indices are 0-based throughout this module; trace
rendering prints positions 1-based.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import NamedTuple

from .errors import ValidationError
from .rewrite import GuidePos, RewriteSequence, apply_rewrite_sequence
from .symbols import AdjustmentRelation, GuideSet, render_string


class GuideOffset(NamedTuple):
    guide: tuple
    offset: int  # 1-based, 1 <= offset <= len(guide)

    @property
    def symbol(self) -> str:
        return self.guide[self.offset - 1]

    @property
    def is_first(self) -> bool:
        return self.offset == 1

    @property
    def is_last(self) -> bool:
        return self.offset == len(self.guide)


@dataclass(frozen=True)
class Slice:
    """An ordered list of guide-offset pairs.

    ``labels`` optionally carries the originating step numbers for display;
    it never takes part in equality or hashing.
    """

    pairs: tuple = ()
    labels: tuple | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(GuideOffset(tuple(g), q) for g, q in self.pairs))
        if self.labels is not None and len(self.labels) != len(self.pairs):
            raise ValueError("one label per pair expected")

    @classmethod
    def _trusted(cls, pairs: tuple, labels=None) -> "Slice":
        # pairs already a tuple of GuideOffset; skips normalization
        sl = object.__new__(cls)
        object.__setattr__(sl, "pairs", pairs)
        object.__setattr__(sl, "labels", labels)
        return sl

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, i):
        return self.pairs[i]

    def __repr__(self):
        return "Slice[" + " ".join(format_pair(p) for p in self.pairs) + "]"

    @property
    def is_start(self) -> bool:
        return all(p.is_first for p in self.pairs)

    @property
    def is_end(self) -> bool:
        return all(p.is_last for p in self.pairs)

    @property
    def is_repetition_free(self) -> bool:
        return len(set(self.pairs)) == len(self.pairs)

    def without(self, index: int) -> "Slice":
        labels = None if self.labels is None else self.labels[:index] + self.labels[index + 1:]
        return Slice._trusted(self.pairs[:index] + self.pairs[index + 1:], labels)


EMPTY_SLICE = Slice()


def format_pair(p: GuideOffset) -> str:
    return f"({render_string(p.guide)},{p.offset})"


def slice_validate(sl: Slice, a: str, guides: GuideSet, rel: AdjustmentRelation) -> bool:
    return all(g in guides and 1 <= q <= len(g) and rel.adjusts(a, g[q - 1]) for g, q in sl)


def slice_yield(sl: Slice, a: str, rel: AdjustmentRelation | None = None) -> str:
    """Symbol of the topmost pair, or ``a`` itself for the empty slice."""
    for g, q in sl:
        if not 1 <= q <= len(g) or (rel is not None and not rel.adjusts(a, g[q - 1])):
            raise ValidationError(f"{sl!r} is not a slice for {a}")
    return sl.pairs[-1].symbol if sl.pairs else a


# -- cuts ------------------------------------------------------------------

def cut(sl: Slice, sl2: Slice):
    """The cut from ``sl`` to ``sl2`` as a tuple of (i, j) index pairs, or None.

    Every pair of ``sl`` that has not reached the end of its guide must be
    matched, every pair of ``sl2`` past offset 1 must be matched, and
    monotonicity forces the t-th unfinished pair onto the t-th continuing one.
    """
    dom = [i for i, p in enumerate(sl.pairs) if not p.is_last]
    rng = [j for j, p in enumerate(sl2.pairs) if not p.is_first]
    if len(dom) != len(rng):
        return None
    mapping = []
    for i, j in zip(dom, rng):
        (g, q), (g2, q2) = sl.pairs[i], sl2.pairs[j]
        if g != g2 or q + 1 != q2:
            return None
        mapping.append((i, j))
    return tuple(mapping)


def cuts_by_search(sl: Slice, sl2: Slice, strict=False) -> list[tuple]:
    """Every monotone partial injection satisfying the cut conditions.

    Reference implementation used to check :func:`cut`. With ``strict`` the
    matching condition is read as a biconditional over all index pairs, which
    no injection can meet once a slice repeats a pair; the default requires
    only that mapped pairs match.
    """
    n, m = len(sl), len(sl2)
    found = []
    for k in range(min(n, m) + 1):
        for dom in combinations(range(n), k):
            for rng in combinations(range(m), k):
                gamma = dict(zip(dom, rng))
                if any(not sl[i].is_last for i in range(n) if i not in gamma):
                    continue
                used = set(rng)
                if any(not sl2[j].is_first for j in range(m) if j not in used):
                    continue

                def matches(i, j):
                    return sl[i].guide == sl2[j].guide and sl[i].offset + 1 == sl2[j].offset

                if strict:
                    ok = all((gamma.get(i) == j) == matches(i, j) for i in range(n) for j in range(m))
                else:
                    ok = all(matches(i, j) for i, j in gamma.items())
                if ok:
                    found.append(tuple(sorted(gamma.items())))
    return found


def _interleavings(fixed: tuple, extra: tuple):
    """All merges of two sequences preserving the order within each."""
    total = len(fixed) + len(extra)
    for slots in combinations(range(total), len(extra)):
        out, fi, ei = [], 0, 0
        slots = set(slots)
        for pos in range(total):
            if pos in slots:
                out.append(extra[ei])
                ei += 1
            else:
                out.append(fixed[fi])
                fi += 1
        yield tuple(out)


def slice_successors(sl: Slice, b: str, guides: GuideSet, rel: AdjustmentRelation) -> list[Slice]:
    """Every repetition-free slice for ``b`` reachable from ``sl`` by a cut."""
    forced = tuple(GuideOffset(g, q + 1) for g, q in sl if q < len(g))
    if len(set(forced)) != len(forced):
        return []
    if not all(rel.adjusts(b, p.symbol) for p in forced):
        return []
    fresh = [GuideOffset(g, 1) for g in guides if rel.adjusts(b, g[0])]
    out = []
    for k in range(len(fresh) + 1):
        for chosen in combinations(fresh, k):
            for order in permutations(chosen):
                for pairs in _interleavings(forced, order):
                    out.append(Slice._trusted(pairs))
    return out


def start_slices(a: str, guides: GuideSet, rel: AdjustmentRelation) -> list[Slice]:
    return slice_successors(EMPTY_SLICE, a, guides, rel)


def successor_summaries(pending: tuple, b: str, guides: GuideSet, rel: AdjustmentRelation) -> set[tuple]:
    """(top symbol or None, unfinished pairs) over all successors for ``b`` of any slice
    whose unfinished pairs are ``pending``.

    Same result as projecting :func:`slice_successors`, without building the
    slices: the top is the last forced pair or the last fresh one, and the
    unfinished pairs interleave the unfinished parts of both.
    """
    forced = tuple(GuideOffset(g, q + 1) for g, q in pending)
    if len(set(forced)) != len(forced) or not all(rel.adjusts(b, p.symbol) for p in forced):
        return set()
    fresh = [GuideOffset(g, 1) for g in guides if rel.adjusts(b, g[0])]
    f_open = tuple(p for p in forced if not p.is_last)
    out = set()
    for k in range(len(fresh) + 1):
        for chosen in combinations(fresh, k):
            for order in permutations(chosen):
                if not forced and not order:
                    out.add((None, ()))
                    continue
                s_open = tuple(p for p in order if not p.is_last)
                for last, a_open, b_open in ((forced[-1] if forced else None, f_open, s_open),
                                             (order[-1] if order else None, s_open, f_open)):
                    if last is None:
                        continue
                    tail = ()
                    if not last.is_last:
                        a_open, tail = a_open[:-1], (last,)
                    for x in _interleavings(a_open, b_open):
                        out.add((last.symbol, x + tail))
    return out


# -- slice sequences ---------------------------------------------------------

class InvalidSliceSequence(ValidationError):
    def __init__(self, position, reason):
        self.position = position
        self.reason = reason
        super().__init__(f"position {position + 1}: {reason}")


@dataclass(frozen=True)
class SliceSequence:
    base: tuple
    slices: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "slices", tuple(s if isinstance(s, Slice) else Slice(s) for s in self.slices))
        if len(self.slices) != len(self.base):
            raise ValidationError(f"{len(self.slices)} slices for a string of length {len(self.base)}")

    @classmethod
    def empty(cls, base) -> "SliceSequence":
        return cls(tuple(base), tuple(EMPTY_SLICE for _ in base))

    def __len__(self):
        return len(self.slices)

    def num_chunks(self) -> int:
        return sum(len(s) for s in self.slices)


def validate_slice_sequence(sigma: SliceSequence, rel: AdjustmentRelation, guides: GuideSet) -> None:
    """Raise InvalidSliceSequence at the first offending position."""
    u, sls = sigma.base, sigma.slices
    for n, (a, sl) in enumerate(zip(u, sls)):
        for g, q in sl:
            if g not in guides:
                raise InvalidSliceSequence(n, f"guide {render_string(g)} is not in the guide set")
            if not 1 <= q <= len(g):
                raise InvalidSliceSequence(n, f"offset {q} out of range for guide {render_string(g)}")
            if not rel.adjusts(a, g[q - 1]):
                raise InvalidSliceSequence(n, f"{format_pair(GuideOffset(g, q))} cannot adjust symbol {a}")
    for n in range(len(sls) - 1):
        if cut(sls[n], sls[n + 1]) is None:
            raise InvalidSliceSequence(n, "no cut to the next slice")
    if sls and not sls[0].is_start:
        raise InvalidSliceSequence(0, "first slice is not a start slice")
    if sls and not sls[-1].is_end:
        raise InvalidSliceSequence(len(sls) - 1, "last slice is not an end slice (some offset is below its guide length)")


def slice_sequence_yield(sigma: SliceSequence) -> tuple:
    return tuple(slice_yield(sl, a) for a, sl in zip(sigma.base, sigma.slices))


def rewrites_to_slices(rho: RewriteSequence, rel: AdjustmentRelation) -> SliceSequence:
    """Stack each step's guide-offset pairs onto the positions it covers.

    Pairs are labelled with their 1-based step number.
    """
    rho.validate(rel)
    u = rho.base
    pairs = [[] for _ in u]
    labels = [[] for _ in u]
    for k, (g, p) in enumerate(rho.steps, start=1):
        for off in range(1, len(g) + 1):
            n = p + off - 1
            # needs transitivity of the adjustment relation
            assert rel.adjusts(u[n], g[off - 1])
            pairs[n].append((g, off))
            labels[n].append(k)
    sigma = SliceSequence(u, tuple(Slice(tuple(ps), tuple(ls)) for ps, ls in zip(pairs, labels)))
    guides = GuideSet(dict.fromkeys(g for g, _ in rho.steps))
    validate_slice_sequence(sigma, rel, guides)
    return sigma


# -- chunks ------------------------------------------------------------------

class Chunk(NamedTuple):
    guide: tuple
    offset: int
    index: int     # position of the pair inside its slice
    position: int  # slice number


def chunks(sigma: SliceSequence) -> list[Chunk]:
    return [Chunk(g, q, i, n) for n, sl in enumerate(sigma.slices) for i, (g, q) in enumerate(sl)]


@dataclass(frozen=True)
class ChunkClass:
    """One whole guide application: guide ``guide`` after a prefix of ``start``."""

    guide: tuple
    start: int
    chunks: tuple  # ordered by offset

    def as_step(self) -> GuidePos:
        return GuidePos(self.guide, self.start)


class ChunkOrder:
    """The chunk preorder of one slice sequence, via reachability.

    From a pair one may move up within its slice to any later pair, and
    across a cut in either direction. ``x <= y`` iff ``y`` is reachable from
    ``x``; mutual reachability gives the equivalence classes.
    """

    def __init__(self, sigma: SliceSequence):
        self.sigma = sigma
        sls = sigma.slices
        self.cuts = []
        for n in range(len(sls) - 1):
            c = cut(sls[n], sls[n + 1])
            if c is None:
                raise InvalidSliceSequence(n, "no cut to the next slice")
            self.cuts.append(c)
        adj = {(n, i): [] for n, sl in enumerate(sls) for i in range(len(sl))}
        for n, sl in enumerate(sls):
            for i in range(len(sl) - 1):
                adj[(n, i)].append((n, i + 1))
        for n, c in enumerate(self.cuts):
            for i, j in c:
                adj[(n, i)].append((n + 1, j))
                adj[(n + 1, j)].append((n, i))
        self._adj = adj
        self._reach = {}

    def _key(self, x):
        if isinstance(x, Chunk):
            n, i = x.position, x.index
            sls = self.sigma.slices
            if not (0 <= n < len(sls) and 0 <= i < len(sls[n]) and tuple(sls[n][i]) == (x.guide, x.offset)):
                raise ValidationError(f"{x} is not a chunk of this slice sequence")
            return (n, i)
        return x

    def reach(self, x) -> frozenset:
        node = self._key(x)
        if node not in self._reach:
            seen = {node}
            queue = deque([node])
            while queue:
                v = queue.popleft()
                for w in self._adj[v]:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            self._reach[node] = frozenset(seen)
        return self._reach[node]

    def leq(self, x, y) -> bool:
        return self._key(y) in self.reach(x)

    def classes(self) -> list[ChunkClass]:
        """Equivalence classes, checked to span one guide at consecutive positions."""
        sls = self.sigma.slices
        done = set()
        out = []
        for node in sorted(self._adj):
            if node in done:
                continue
            members = sorted((v for v in self.reach(node) if node in self.reach(v)), key=lambda v: v[0])
            done.update(members)
            chs = tuple(Chunk(*sls[n][i], i, n) for n, i in members)
            out.append(_check_class_shape(chs))
        out.sort(key=lambda c: (c.start, c.chunks[0].index))
        return out


def _check_class_shape(chs) -> ChunkClass:
    g = chs[0].guide
    p = chs[0].position - chs[0].offset + 1
    expected = [(g, s, p + s - 1) for s in range(1, len(g) + 1)]
    if [(c.guide, c.offset, c.position) for c in chs] != expected:
        raise ValidationError(f"chunk class {chs} does not span one whole guide")
    return ChunkClass(g, p, chs)


class ChunkPartition(NamedTuple):
    classes: list
    order: frozenset  # (i, j) with i != j: classes[i] precedes classes[j]

    def leq(self, i, j) -> bool:
        return i == j or (i, j) in self.order

    def maximal(self) -> list[int]:
        return [i for i in range(len(self.classes)) if not any((i, j) in self.order for j in range(len(self.classes)))]


@lru_cache(maxsize=256)
def chunk_order(sigma: SliceSequence) -> ChunkOrder:
    return ChunkOrder(sigma)


def chunk_leq(x: Chunk, y: Chunk, sigma: SliceSequence) -> bool:
    return chunk_order(sigma).leq(x, y)


def chunk_classes(sigma: SliceSequence) -> ChunkPartition:
    order = chunk_order(sigma)
    classes = order.classes()
    rel = set()
    for i, ci in enumerate(classes):
        for j, cj in enumerate(classes):
            if i != j and order.leq(ci.chunks[0], cj.chunks[0]):
                rel.add((i, j))
    for i, j in rel:
        if (j, i) in rel:
            raise ValidationError(f"chunk classes {i} and {j} precede each other")
    return ChunkPartition(classes, frozenset(rel))


def remove_class(sigma: SliceSequence, cls: ChunkClass) -> SliceSequence:
    sls = list(sigma.slices)
    for c in cls.chunks:
        sls[c.position] = sls[c.position].without(c.index)
    return SliceSequence(sigma.base, tuple(sls))


def slices_to_rewrites(sigma: SliceSequence, rel: AdjustmentRelation, guides: GuideSet | None = None) -> RewriteSequence:
    """Peel maximal chunk classes off the top, last step first.

    Among maximal classes the one with the smallest start position wins, then
    the earliest guide in ``guides``, then the lowest pair index.
    """
    if guides is None:
        guides = GuideSet(dict.fromkeys(p.guide for sl in sigma.slices for p in sl))
    validate_slice_sequence(sigma, rel, guides)
    rank = {g: i for i, g in enumerate(guides)}
    steps = []
    cur = sigma
    while cur.num_chunks():
        part = chunk_classes(cur)
        best = min((part.classes[i] for i in part.maximal()),
                   key=lambda c: (c.start, rank[c.guide], c.chunks[0].index))
        for c in best.chunks:
            if c.index != len(cur.slices[c.position]) - 1:
                raise ValidationError(f"maximal class {best.as_step()} is not on top at position {c.position + 1}")
        steps.append(best.as_step())
        cur = remove_class(cur, best)
    rho = RewriteSequence(sigma.base, tuple(reversed(steps)))
    assert apply_rewrite_sequence(rho, rel) == slice_sequence_yield(sigma)
    return rho


def _first_repetition(sigma: SliceSequence):
    for n, sl in enumerate(sigma.slices):
        seen = {}
        for i, p in enumerate(sl):
            if p in seen:
                return n, seen[p]
            seen[p] = i
    return None


def normalize_repetition_free(sigma: SliceSequence) -> SliceSequence:
    """Drop the lower occurrence of repeated pairs, a whole guide at a time."""
    cur = sigma
    while (hit := _first_repetition(cur)) is not None:
        n, i = hit
        for cls in ChunkOrder(cur).classes():
            if any(c.position == n and c.index == i for c in cls.chunks):
                cur = remove_class(cur, cls)
                break
    return cur


def render_slice_sequence(sigma: SliceSequence) -> str:
    lines = []
    for n, (a, sl) in enumerate(zip(sigma.base, sigma.slices), start=1):
        body = " ".join(format_pair(p) for p in sl)
        lines.append(f"{n}: {body} | yield={slice_yield(sl, a)}".replace(":  |", ": |"))
    return "\n".join(lines)
