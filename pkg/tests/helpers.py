"""Random fixture generators and independent reference implementations."""

from guided_rewriting.automata import Dfa, enumerate_upto
from guided_rewriting.closure import GuidedSystem, IdSystem
from guided_rewriting.rewrite import RewriteSequence, applicable_steps
from guided_rewriting.slices import GuideOffset, Slice
from guided_rewriting.symbols import Alphabet, GuideSet, make_adjustment


def random_dfa(rng, alphabet, max_states=4):
    n = rng.randint(1, max_states)
    delta = {(q, a): rng.randrange(n) for q in range(n) for a in alphabet}
    acc = {q for q in range(n) if rng.random() < 0.5}
    return Dfa(alphabet, n, 0, acc, delta)


def random_guided_system(rng, max_symbols=3, max_guides=3, max_guide_len=3):
    size = rng.randint(2, max_symbols)
    alphabet = Alphabet("abc"[:size])
    syms = list(alphabet)
    rng.shuffle(syms)
    # one nontrivial class of size 2 or 3 (an alphabet of <= 3 symbols has room for one)
    cls = syms[:rng.randint(2, size)]
    rel = make_adjustment(alphabet, [cls])
    guides = []
    for _ in range(rng.randint(1, max_guides)):
        g = tuple(rng.choice(syms) for _ in range(rng.randint(1, max_guide_len)))
        if g not in guides:
            guides.append(g)
    return GuidedSystem(alphabet, rel, GuideSet(guides))


def random_guided_fixture(rng):
    system = random_guided_system(rng)
    return random_dfa(rng, system.alphabet), system


def random_id_guide(rng, letters, zero, max_len=4, max_run=2):
    while True:
        n = rng.randint(2, max_len)
        g = [rng.choice(letters)] + [rng.choice(letters + [zero]) for _ in range(n - 2)] + [rng.choice(letters)]
        run = cur = 0
        for s in g:
            cur = cur + 1 if s == zero else 0
            run = max(run, cur)
        if run <= max_run:
            return tuple(g)


def random_bounded_run_dfa(rng, letters, zero, k, max_letter_states=3):
    """Random letter DFA interleaved with zero runs of length < k.

    States are (p, r): letter-DFA state p and current run length r. Which
    runs may grow and which (p, r) accept is drawn at random.
    """
    n = rng.randint(1, max_letter_states)
    delta_l = {(p, a): rng.randrange(n) for p in range(n) for a in letters}
    acc_l = {p for p in range(n) if rng.random() < 0.6} or {rng.randrange(n)}
    delta = {}
    accepting = []
    for p in range(n):
        for r in range(k):
            for a in letters:
                delta[((p, r), a)] = (delta_l[(p, a)], 0)
            if r + 1 < k and rng.random() < 0.7:
                delta[((p, r), zero)] = (p, r + 1)
            if p in acc_l and (r == 0 or rng.random() < 0.5):
                accepting.append((p, r))
    return Dfa.build(Alphabet(list(letters) + [zero]), (0, 0), accepting, delta)


def _guide_from(rng, w, letters, zero, max_len, max_run):
    """A guide anchored on a factor of w, with zero runs redrawn."""
    core = [s for s in w if s != zero]
    if len(core) >= 2 and rng.random() < 0.8:
        span = rng.randint(2, min(len(core), (max_len + 1) // 2 + 1, max_len))
        start = rng.randrange(len(core) - span + 1)
        word = core[start:start + span]
    else:
        word = [rng.choice(letters) for _ in range(rng.randint(2, 3))]
    while True:
        g = [word[0]]
        for a in word[1:]:
            g += [zero] * rng.randint(0, max_run) + [a]
        if len(g) <= max_len:
            return tuple(g)


def random_id_fixture(rng, max_k=3, max_guide_len=4):
    """A bounded-run language over {a, b, 0} (overall bound k <= max_k) and 1-2 guides."""
    letters = ["a", "b"][:rng.randint(1, 2)]
    kl = rng.randint(1, max_k)
    M = random_bounded_run_dfa(rng, letters, "0", kl)
    sample = enumerate_upto(M, 6) or [tuple(letters)]
    guides = []
    for _ in range(rng.randint(1, 2)):
        g = _guide_from(rng, rng.choice(sample), letters, "0", max_guide_len, max_k - 1)
        if g not in guides:
            guides.append(g)
    return M, IdSystem(Alphabet(letters + ["0"]), "0", GuideSet(guides))


def random_rewrite_sequence(rng, system, length, max_steps=6):
    """A valid rewrite sequence: each step is applicable to the base string."""
    u = tuple(rng.choice(system.alphabet.symbols) for _ in range(length))
    options = applicable_steps(u, system.guides, system.adjustment)
    steps = [rng.choice(options) for _ in range(rng.randint(0, max_steps))] if options else []
    return RewriteSequence(u, tuple(steps))


def random_slice(rng, guides, max_pairs=4):
    pairs = [(g, q) for g in guides for q in range(1, len(g) + 1)]
    return Slice(tuple(GuideOffset(*rng.choice(pairs)) for _ in range(rng.randint(0, max_pairs))))


def witness_leq(x, y, sigma, cuts):
    """Chunk order read directly off the leading-sequence definition.

    Searches index sequences moving in one direction only: rightwards from x
    climbing up (case n' >= n), or rightwards from y climbing down (n' <= n).
    """
    sls = sigma.slices
    fwd = [dict(c) for c in cuts]
    n, i = x.position, x.index
    n2, i2 = y.position, y.index
    if n2 >= n:
        # l_k <= h_k inside slice n+k, gamma(h_k) = l_{k+1}, l_0 = i, h_end = i2
        frontier = {i}
        for k in range(n, n2 + 1):
            highs = {h for l in frontier for h in range(l, len(sls[k]))}
            if k == n2:
                if i2 in highs:
                    return True
                break
            frontier = {fwd[k][h] for h in highs if h in fwd[k]}
    if n2 <= n:
        # from y at slice n2: h_0 = i2, l_k <= h_k, gamma(l_k) = h_{k+1}, l_end = i
        frontier = {i2}
        for k in range(n2, n + 1):
            lows = {l for h in frontier for l in range(0, h + 1)}
            if k == n:
                return i in lows
            frontier = {fwd[k][l] for l in lows if l in fwd[k]}
    return False
