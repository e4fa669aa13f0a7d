"""Command-line driver.

Exit codes: 0 success or equal, 1 negative answer or difference, 2 parse
error, 3 validation error, 4 state cap exceeded, 5 theorem inapplicable
(unbounded zero runs).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import automata
from .closure import (DEFAULT_STATE_CAP, CompressionScheme, build_closure_nfa, build_id_closure_nfa,
                      compress_string, oracle_closure_upto, oracle_id_closure_upto,
                      render_compressed)
from .errors import GuidedRewritingError, ParseError
from .formats import format_automaton, format_steps, parse_automaton, parse_slices, parse_steps, parse_system
from .rewrite import apply_rewrite_sequence, closure_of_string, id_closure, zero_runs
from .slices import (render_slice_sequence, rewrites_to_slices, slice_sequence_yield, slices_to_rewrites,
                     validate_slice_sequence)
from .symbols import parse_string, render_string


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _string_arg(text, alphabet, chars):
    return parse_string(text, alphabet, chars=True if chars else None)


def _post_process(A, args):
    if args.minimize:
        return automata.minimize(A)
    if args.determinize:
        return automata.determinize(A)
    return A


def _print_stats(stats):
    for key in sorted(stats):
        print(f"{key}: {stats[key]}", file=sys.stderr)


def cmd_closure(args):
    system = parse_system(_read(args.system)).guided_system()
    M = parse_automaton(_read(args.automaton))
    stats = {}
    nfa = build_closure_nfa(M, system, max_states=args.max_states, stats=stats)
    _emit(format_automaton(_post_process(nfa, args)), args.output)
    if args.stats:
        _print_stats(stats)
    return 0


def cmd_id_closure(args):
    system = parse_system(_read(args.system)).id_system()
    M = parse_automaton(_read(args.automaton))
    stats = {}
    nfa = build_id_closure_nfa(M, system, max_states=args.max_states, stats=stats)
    _emit(format_automaton(_post_process(nfa, args)), args.output)
    print(f"k: {stats['k']}", file=sys.stdout if args.output else sys.stderr)
    if args.stats:
        _print_stats(stats)
    return 0


def cmd_member(args):
    A = parse_automaton(_read(args.automaton))
    w = _string_arg(args.string, A.alphabet, args.chars)
    ok = automata.accepts(A, w)
    print("yes" if ok else "no")
    return 0 if ok else 1


def cmd_enumerate(args):
    A = parse_automaton(_read(args.automaton))
    for w in automata.enumerate_upto(A, args.max_len):
        print(render_string(w))
    return 0


def cmd_oracle_check(args):
    sysf = parse_system(_read(args.system))
    M = parse_automaton(_read(args.automaton))
    if args.id:
        system = sysf.id_system()
        expected = oracle_id_closure_upto(M, system, args.max_len)
        compiled = None if args.compiled else build_id_closure_nfa(M, system, max_states=args.max_states)
    else:
        system = sysf.guided_system()
        expected = oracle_closure_upto(M, system, args.max_len)
        compiled = None if args.compiled else build_closure_nfa(M, system, max_states=args.max_states)
    if args.compiled:
        compiled = parse_automaton(_read(args.compiled))
    got = automata.enumerate_upto(compiled, args.max_len)
    missing = sorted(set(expected) - set(got), key=system.alphabet.sort_key)
    extra = sorted(set(got) - set(expected), key=system.alphabet.sort_key)
    if not missing and not extra:
        print(f"OK ({len(expected)} strings up to length {args.max_len})")
        return 0
    for w in missing:
        print(f"- {render_string(w)}   (oracle only)")
    for w in extra:
        print(f"+ {render_string(w)}   (automaton only)")
    return 1


def cmd_trace(args):
    system = parse_system(_read(args.system)).guided_system()
    base = _string_arg(args.base, system.alphabet, args.chars)
    text = _read(args.input)
    if args.to == "slices":
        rho = parse_steps(text, system.alphabet, base)
        rho.validate(system.adjustment, system.guides)
        sigma = rewrites_to_slices(rho, system.adjustment)
    else:
        sigma = parse_slices(text, system.alphabet, base)
        validate_slice_sequence(sigma, system.adjustment, system.guides)
        rho = slices_to_rewrites(sigma, system.adjustment, system.guides)
    y_rho = apply_rewrite_sequence(rho, system.adjustment)
    y_sigma = slice_sequence_yield(sigma)
    assert y_rho == y_sigma
    if args.to == "slices":
        print(render_slice_sequence(sigma))
    else:
        sys.stdout.write(format_steps(rho))
    print(f"rewrite yield: {render_string(y_rho)}")
    print(f"slice yield: {render_string(y_sigma)}")
    return 0


def cmd_rewrite(args):
    sysf = parse_system(_read(args.system))
    if args.id:
        system = sysf.id_system()
        u = _string_arg(args.string, system.alphabet, args.chars)
        found = id_closure(u, system.guides, system.zero, system.base_alphabet)
    else:
        system = sysf.guided_system()
        u = _string_arg(args.string, system.alphabet, args.chars)
        found = closure_of_string(u, system.guides, system.adjustment)
    for w in sorted(found, key=system.alphabet.sort_key):
        print(render_string(w))
    return 0


def cmd_compress(args):
    system = parse_system(_read(args.system)).id_system()
    u = _string_arg(args.string, system.alphabet, args.chars)
    k = args.k
    if k is None:
        lead, inner, trail = zero_runs(u, system.zero)
        k = max([lead, trail, *inner]) + 1
    scheme = CompressionScheme(system.base_alphabet, system.zero, k)
    print(render_compressed(compress_string(u, scheme), scheme, interior_only=args.paper_compression))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="guided-rewriting",
                                description="Guided string rewriting and regularity-preserving closure automata.")
    sub = p.add_subparsers(dest="command", required=True)

    def construction(name, func, help):
        c = sub.add_parser(name, help=help)
        c.add_argument("system")
        c.add_argument("automaton")
        c.add_argument("-o", "--output")
        c.add_argument("--determinize", action="store_true")
        c.add_argument("--minimize", action="store_true")
        c.add_argument("--stats", action="store_true", help="report materialized state counts on stderr")
        c.add_argument("--max-states", type=int, default=DEFAULT_STATE_CAP)
        c.set_defaults(func=func)

    construction("closure", cmd_closure, "NFA for the guided-rewriting closure of a regular language")
    construction("id-closure", cmd_id_closure, "automaton for the insertion/deletion closure")

    c = sub.add_parser("member", help="membership query")
    c.add_argument("automaton")
    c.add_argument("string")
    c.add_argument("--chars", action="store_true")
    c.set_defaults(func=cmd_member)

    c = sub.add_parser("enumerate", help="list accepted strings up to a length")
    c.add_argument("automaton")
    c.add_argument("--max-len", type=int, required=True)
    c.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("oracle-check", help="compare the compiled closure with brute force")
    c.add_argument("system")
    c.add_argument("automaton")
    c.add_argument("--max-len", type=int, required=True)
    c.add_argument("--id", action="store_true", help="insertion/deletion mode")
    c.add_argument("--compiled", help="check this automaton file instead of compiling one")
    c.add_argument("--max-states", type=int, default=DEFAULT_STATE_CAP)
    c.set_defaults(func=cmd_oracle_check)

    c = sub.add_parser("trace", help="convert between rewrite sequences and slice sequences")
    c.add_argument("system")
    c.add_argument("base")
    c.add_argument("input", help="steps file (--to slices) or slices file (--to rewrites)")
    c.add_argument("--to", choices=("slices", "rewrites"), required=True)
    c.add_argument("--chars", action="store_true")
    c.set_defaults(func=cmd_trace)

    c = sub.add_parser("rewrite", help="list the closure of a single string")
    c.add_argument("system")
    c.add_argument("string")
    c.add_argument("--id", action="store_true", help="insertion/deletion mode")
    c.add_argument("--chars", action="store_true")
    c.set_defaults(func=cmd_rewrite)

    c = sub.add_parser("compress", help="show the zero-run compression of a string")
    c.add_argument("system")
    c.add_argument("string")
    c.add_argument("--k", type=int)
    c.add_argument("--paper-compression", action="store_true", help="omit the boundary zero-run symbols")
    c.add_argument("--chars", action="store_true")
    c.set_defaults(func=cmd_compress)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("max_len", "max_states", "k"):
        val = getattr(args, flag, None)
        if val is not None and val < (1 if flag != "max_len" else 0):
            parser.error(f"--{flag.replace('_', '-')} out of range")
    try:
        return args.func(args)
    except GuidedRewritingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
