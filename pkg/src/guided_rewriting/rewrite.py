"""Guided rewriting engines and brute-force per-string closures.

Two step relations live here. The adjustment-based step replaces the
substring at a given position by a guide that is element-wise adjustable to
it, so lengths never change. The insertion/deletion step replaces a substring
``y`` (non-zero at both ends) by a guide with the same zero-free image, so
runs of the zero symbol grow or shrink.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .errors import ValidationError
from .symbols import AdjustmentRelation, GuideSet, lift_equiv, validate_id_guides, Alphabet


class RewriteError(ValidationError):
    pass


class GuidePos(NamedTuple):
    """Guide ``g`` applied after an untouched prefix of length ``position``."""

    guide: tuple
    position: int


def _check_step(u, gp: GuidePos, rel: AdjustmentRelation):
    g, p = gp
    if not 0 <= p <= len(u) - len(g):
        raise RewriteError(f"position {p} out of range for guide of length {len(g)} on string of length {len(u)}")
    redex = u[p:p + len(g)]
    for off, (a, b) in enumerate(zip(redex, g), start=1):
        if not rel.adjusts(a, b):
            raise RewriteError(f"redex symbol {a} at {p + off} cannot be adjusted to guide symbol {b}")


def apply_step(u: Sequence[str], gp: GuidePos, rel: AdjustmentRelation) -> tuple:
    u = tuple(u)
    _check_step(u, gp, rel)
    g, p = gp
    return u[:p] + tuple(g) + u[p + len(g):]


def applicable_steps(u: Sequence[str], guides: GuideSet, rel: AdjustmentRelation) -> list[GuidePos]:
    u = tuple(u)
    steps = []
    for p in range(len(u)):
        for g in guides:
            if p + len(g) <= len(u) and lift_equiv(rel, u[p:p + len(g)], g):
                steps.append(GuidePos(g, p))
    return steps


def _bfs(start, successors):
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for v in successors(w):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return frozenset(seen)


def closure_of_string(u: Sequence[str], guides: GuideSet, rel: AdjustmentRelation) -> frozenset:
    """Every string reachable from ``u`` by adjustment-based guided steps."""
    def succ(w):
        for g, p in applicable_steps(w, guides, rel):
            yield w[:p] + g + w[p + len(g):]
    return _bfs(tuple(u), succ)


@dataclass(frozen=True)
class RewriteSequence:
    base: tuple
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "steps", tuple(GuidePos(tuple(g), p) for g, p in self.steps))

    def validate(self, rel: AdjustmentRelation, guides: GuideSet | None = None):
        """Check every step against the base string, not the intermediate ones.

        Raises RewriteError naming the first failing step (1-based).
        """
        for k, gp in enumerate(self.steps, start=1):
            if guides is not None and gp.guide not in guides:
                raise RewriteError(f"step {k}: guide is not in the guide set")
            try:
                _check_step(self.base, gp, rel)
            except RewriteError as exc:
                raise RewriteError(f"step {k}: {exc}") from None

    def trace(self, rel: AdjustmentRelation) -> list[tuple]:
        """The induced strings u_0 = base, ..., u_r."""
        self.validate(rel)
        out = [self.base]
        for gp in self.steps:
            out.append(apply_step(out[-1], gp, rel))
        return out


def apply_rewrite_sequence(rho: RewriteSequence, rel: AdjustmentRelation) -> tuple:
    return rho.trace(rel)[-1]


# -- insertion / deletion -------------------------------------------------

def pi(u: Sequence[str], zero: str) -> tuple:
    """Erase every occurrence of ``zero``."""
    return tuple(s for s in u if s != zero)


class IdStep(NamedTuple):
    guide: tuple
    prefix_len: int
    redex_len: int


def id_apply_step(u: Sequence[str], step: IdStep, zero: str) -> tuple:
    u = tuple(u)
    g, x, n = step
    if x < 0 or n < 1 or x + n > len(u):
        raise RewriteError(f"decomposition ({x}, {n}) out of range for string of length {len(u)}")
    y = u[x:x + n]
    if y[0] == zero or y[-1] == zero:
        raise RewriteError("redex must start and end with a non-zero symbol")
    if pi(y, zero) != pi(g, zero):
        raise RewriteError("redex and guide differ after erasing zeros")
    return u[:x] + tuple(g) + u[x + n:]


def id_decompositions(u: Sequence[str], g: Sequence[str], zero: str) -> Iterator[IdStep]:
    """All decompositions u = xyz on which ``g`` can be anchored, by prefix length.

    The anchor word pi(g) must match the next #pi(g) non-zero symbols starting
    at a non-zero position, which fixes y completely.
    """
    u, g = tuple(u), tuple(g)
    word = pi(g, zero)
    if not word:
        return
    for start, s in enumerate(u):
        if s != word[0]:
            continue
        matched, end = 0, start
        for end in range(start, len(u)):
            if u[end] == zero:
                continue
            if u[end] != word[matched]:
                break
            matched += 1
            if matched == len(word):
                yield IdStep(g, start, end - start + 1)
                break


def id_successors(u: Sequence[str], guides: GuideSet, zero: str) -> list[tuple[IdStep, tuple]]:
    u = tuple(u)
    out = []
    for g in guides:
        for step in id_decompositions(u, g, zero):
            out.append((step, u[:step.prefix_len] + g + u[step.prefix_len + step.redex_len:]))
    out.sort(key=lambda item: (item[0].prefix_len, guides.index(item[0].guide)))
    return out


def id_closure(u: Sequence[str], guides: GuideSet, zero: str, base_alphabet: Alphabet | None = None) -> frozenset:
    """Every string reachable from ``u`` by insertion/deletion steps."""
    if base_alphabet is not None:
        problems = validate_id_guides(guides, base_alphabet, zero)
    else:
        problems = [f"guide {i}: invalid insertion/deletion guide" for i, g in enumerate(guides)
                    if len(g) < 2 or g[0] == zero or g[-1] == zero]
    if problems:
        raise ValidationError("; ".join(problems))
    return _bfs(tuple(u), lambda w: (v for _, v in id_successors(w, guides, zero)))


def zero_runs(u: Sequence[str], zero: str) -> tuple[int, list[int], int]:
    """Split ``u`` into (leading run, interior runs, trailing run) of zeros.

    Interior runs are the gaps between consecutive non-zero symbols. A string
    without non-zero symbols is reported as a single leading run.
    """
    runs, cur = [], 0
    for s in u:
        if s == zero:
            cur += 1
        else:
            runs.append(cur)
            cur = 0
    if not runs:
        return cur, [], 0
    return runs[0], runs[1:], cur


def zero_run_vocabulary(u: Sequence[str], guides: GuideSet, zero: str) -> set[int]:
    """Lengths of zero runs that may separate non-zero symbols after any number of steps."""
    vocab = set(zero_runs(u, zero)[1])
    for g in guides:
        vocab.update(zero_runs(g, zero)[1])
    return vocab


def in_id_envelope(v: Sequence[str], u: Sequence[str], guides: GuideSet, zero: str) -> bool:
    """Whether ``v`` lies in the finite over-approximation of the closure of ``u``."""
    if pi(v, zero) != pi(u, zero):
        return False
    lead_u, _, trail_u = zero_runs(u, zero)
    lead_v, inner_v, trail_v = zero_runs(v, zero)
    vocab = zero_run_vocabulary(u, guides, zero)
    return lead_u == lead_v and trail_u == trail_v and all(r in vocab for r in inner_v)
