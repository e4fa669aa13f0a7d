import os
import subprocess
import sys

import pytest

from guided_rewriting.cli import main

FIXTURE_A = "alphabet: a b c\nclass: a b\nguide: b b\n"
EX5 = "alphabet: a b c d e f\nclass: a b\nclass: c d\nclass: e f\nguide: f b\nguide: a c e\nguide: d\n"
ID_AAA = "alphabet: a 0\nzero: 0\nguide: a a 0 a\nguide: a 0 a a\n"


def single_dfa(word, alphabet):
    lines = ["type: dfa", f"alphabet: {' '.join(alphabet)}", f"accept: s{len(word)}", "start: s0"]
    lines += [f"trans: s{i} {a} s{i + 1}" for i, a in enumerate(word)]
    return "\n".join(lines) + "\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_closure_and_enumerate(files, capsys, tmp_path):
    sysf, aut = files("a.sys", FIXTURE_A), files("a.aut", single_dfa("aaacaa", "abc"))
    out = tmp_path / "closure.aut"
    assert run(capsys, "closure", sysf, aut, "-o", out)[0] == 0
    code, text, _ = run(capsys, "enumerate", out, "--max-len", 8)
    assert code == 0
    assert sorted(text.split("\n")[:-1]) == sorted(
        "aaacaa bbacaa abbcaa aaacbb bbbcaa abbcbb bbacbb bbbcbb".split())
    assert run(capsys, "member", out, "b b a c b b") == (0, "yes\n", "")
    assert run(capsys, "member", out, "cacaaa", "--chars")[:2] == (1, "no\n")


def test_closure_to_stdout_with_postprocessing(files, capsys):
    sysf, aut = files("a.sys", FIXTURE_A), files("a.aut", single_dfa("aaacaa", "abc"))
    code, text, err = run(capsys, "closure", sysf, aut, "--determinize", "--stats")
    assert code == 0 and text.startswith("type: dfa") and "states" in err
    code, text, _ = run(capsys, "closure", sysf, aut, "--minimize")
    assert code == 0 and text.startswith("type: dfa")


def test_empty_guides_keep_language(files, capsys, tmp_path):
    sysf = files("e.sys", "alphabet: a b\nclass: a b\n")
    aut = files("e.aut", single_dfa("ab", "ab"))
    out = tmp_path / "o.aut"
    run(capsys, "closure", sysf, aut, "-o", out)
    assert run(capsys, "enumerate", out, "--max-len", 3)[1] == "ab\n"


def test_raw_pairs_rejected(files, capsys):
    sysf = files("p.sys", "alphabet: a b\npair: a b\npair: b a\nguide: a\n")
    code, _, err = run(capsys, "closure", sysf, files("p.aut", single_dfa("ab", "ab")))
    assert code == 3 and "bubble-sort" in err
    ok = files("q.sys", "alphabet: a b\npair: a b\npair: b a\npairs-closure: allow\nguide: a\n")
    assert run(capsys, "closure", ok, files("p.aut", single_dfa("ab", "ab")))[0] == 0


def test_id_closure(files, capsys, tmp_path):
    sysf, aut = files("i.sys", ID_AAA), files("i.aut", single_dfa("aaa", "a0"))
    out = tmp_path / "i.out"
    code, text, _ = run(capsys, "id-closure", sysf, aut, "-o", out)
    assert code == 0 and text == "k: 2\n"
    assert sorted(run(capsys, "enumerate", out, "--max-len", 5)[1].split("\n")[:-1]) == \
        ["a0aa", "aa0a", "aaa"]


def test_id_closure_unbounded_runs(files, capsys):
    sysf = files("i.sys", "alphabet: a b 0\nzero: 0\nguide: a b\n")
    aut = files("u.aut", "type: dfa\nalphabet: a b 0\nstart: s\naccept: t\n"
                         "trans: s a m\ntrans: m 0 m\ntrans: m b t\n")
    code, _, err = run(capsys, "id-closure", sysf, aut)
    assert code == 5 and "Theorem inapplicable" in err


def test_id_mode_needs_zero(files, capsys):
    code, _, err = run(capsys, "id-closure", files("a.sys", FIXTURE_A), files("a.aut", single_dfa("a", "abc")))
    assert code == 3 and "zero" in err


def test_oracle_check(files, capsys, tmp_path):
    sysf, aut = files("a.sys", FIXTURE_A), files("a.aut", single_dfa("aaacaa", "abc"))
    assert run(capsys, "oracle-check", sysf, aut, "--max-len", 6)[:2] == (0, "OK (8 strings up to length 6)\n")
    ex5, ex5a = files("5.sys", EX5), files("5.aut", single_dfa("ebcfa", "abcdef"))
    assert run(capsys, "oracle-check", ex5, ex5a, "--max-len", 5)[0] == 0
    ida, idaut = files("i.sys", ID_AAA), files("i.aut", single_dfa("aaa", "a0"))
    assert run(capsys, "oracle-check", ida, idaut, "--max-len", 5, "--id")[0] == 0
    # the input language itself misses the rewritten strings
    code, text, _ = run(capsys, "oracle-check", sysf, aut, "--max-len", 6, "--compiled", aut)
    assert code == 1
    assert "- aaacbb   (oracle only)" in text and text.count("(oracle only)") == 7


def test_oracle_check_reports_extra_strings(files, capsys):
    sysf = files("a.sys", FIXTURE_A)
    aut = files("a.aut", single_dfa("aaacaa", "abc"))
    bad = files("bad.aut", "type: nfa\nalphabet: a b c\nstart: s\naccept: s\ntrans: s c s\n")
    code, text, _ = run(capsys, "oracle-check", sysf, aut, "--max-len", 6, "--compiled", bad)
    assert code == 1 and "+ ~e~   (automaton only)" in text


def test_state_cap(files, capsys):
    sysf, aut = files("a.sys", FIXTURE_A), files("a.aut", single_dfa("aaacaa", "abc"))
    code, _, err = run(capsys, "closure", sysf, aut, "--max-states", 3)
    assert code == 4 and "exceeds 3 states" in err


def test_parse_errors(files, capsys):
    aut = files("a.aut", single_dfa("ab", "ab"))
    assert run(capsys, "member", aut, "a x")[0] == 2
    assert run(capsys, "member", files("b.aut", "type: dfx\n"), "a")[0] == 2
    assert run(capsys, "member", str(files("c.aut", "")) + ".missing", "a")[0] == 2
    assert run(capsys, "closure", files("s.sys", "guide: a\n"), aut)[0] == 2


def test_member_and_enumerate_small(files, capsys):
    aut = files("a.aut", single_dfa("ab", "ab"))
    assert run(capsys, "enumerate", aut, "--max-len", 0) == (0, "", "")
    assert run(capsys, "member", aut, "a b")[0] == 0
    eps = files("e.aut", "type: dfa\nalphabet: a\nstart: s\naccept: s\n")
    assert run(capsys, "enumerate", eps, "--max-len", 0)[1] == "~e~\n"
    assert run(capsys, "member", eps, "~e~")[0] == 0


def test_bad_flag_values(files, capsys):
    aut = files("a.aut", single_dfa("ab", "ab"))
    with pytest.raises(SystemExit) as info:
        main(["enumerate", aut, "--max-len", "-1"])
    assert info.value.code == 2


WORKED_STEPS = "step: 2 d\nstep: 0 f b\nstep: 1 a c e\nstep: 0 f b\nstep: 3 f b\nstep: 3 f b\n"


def test_trace_to_slices(files, capsys):
    code, text, _ = run(capsys, "trace", files("5.sys", EX5), "ebcfa", files("s.txt", WORKED_STEPS),
                        "--to", "slices", "--chars")
    assert code == 0
    lines = text.splitlines()
    assert lines[:5] == [
        "1: (fb,1) (fb,1) | yield=f",
        "2: (fb,2) (ace,1) (fb,2) | yield=b",
        "3: (d,1) (ace,2) | yield=c",
        "4: (ace,3) (fb,1) (fb,1) | yield=f",
        "5: (fb,2) (fb,2) | yield=b",
    ]
    assert lines[5:] == ["rewrite yield: fbcfb", "slice yield: fbcfb"]


def test_trace_round_trip(files, capsys):
    ex5 = files("5.sys", EX5)
    _, text, _ = run(capsys, "trace", ex5, "e b c f a", files("s.txt", WORKED_STEPS), "--to", "slices")
    table = files("t.txt", "\n".join(text.splitlines()[:5]) + "\n")
    code, back, _ = run(capsys, "trace", ex5, "e b c f a", table, "--to", "rewrites")
    assert code == 0
    assert back.splitlines()[:6] == ["step: 2 d", "step: 0 fb", "step: 1 ace",
                                     "step: 3 fb", "step: 3 fb", "step: 0 fb"]
    assert back.splitlines()[-1] == "slice yield: fbcfb"


def test_trace_empty_steps(files, capsys):
    code, text, _ = run(capsys, "trace", files("5.sys", EX5), "abc", files("s.txt", ""), "--to", "slices",
                        "--chars")
    assert code == 0
    assert text.splitlines() == ["1: | yield=a", "2: | yield=b", "3: | yield=c",
                                 "rewrite yield: abc", "slice yield: abc"]


def test_trace_invalid_inputs(files, capsys):
    ex5 = files("5.sys", EX5)
    code, _, err = run(capsys, "trace", ex5, "ebcfa", files("s.txt", "step: 1 f b\n"), "--to", "slices", "--chars")
    assert code == 3 and "step 1" in err
    bad = files("t.txt", "slice: (fb,1)\nslice: (fb,2)\nslice:\nslice: (fb,1)\nslice:\n")
    code, _, err = run(capsys, "trace", ex5, "ebcfa", bad, "--to", "rewrites", "--chars")
    assert code == 3 and "position 4" in err
    code, _, _ = run(capsys, "trace", ex5, "ebcfa", files("u.txt", "slice: (fb,1)\n"), "--to", "rewrites",
                     "--chars")
    assert code == 2


def test_rewrite_command(files, capsys):
    code, text, _ = run(capsys, "rewrite", files("a.sys", FIXTURE_A), "aaacaa", "--chars")
    assert code == 0 and len(text.splitlines()) == 8
    code, text, _ = run(capsys, "rewrite", files("i.sys", ID_AAA), "aaa", "--id", "--chars")
    assert sorted(text.splitlines()) == ["a0aa", "aa0a", "aaa"]


def test_compress_command(files, capsys):
    sysf = files("c.sys", "alphabet: 1 2 3 0\nzero: 0\n")
    assert run(capsys, "compress", sysf, "10023", "--chars", "--k", 4)[1] == "0_0 1 0_2 2 0_0 3 0_0\n"
    assert run(capsys, "compress", sysf, "10023", "--chars", "--k", 4, "--paper-compression")[1] == \
        "1 0_2 2 0_0 3\n"
    assert run(capsys, "compress", sysf, "10023", "--chars")[1] == "0_0 1 0_2 2 0_0 3 0_0\n"
    assert run(capsys, "compress", sysf, "10023", "--chars", "--k", 2)[0] == 3


def _cli(args, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    return subprocess.run([sys.executable, "-m", "guided_rewriting.cli", *args], capture_output=True,
                          text=True, env=env, check=False)


def test_outputs_are_deterministic(files):
    sysf, aut = files("5.sys", EX5), files("5.aut", single_dfa("ebcfa", "abcdef"))
    ida, idaut = files("i.sys", ID_AAA), files("i.aut", single_dfa("aaa", "a0"))
    for args in (["closure", sysf, aut], ["closure", sysf, aut, "--minimize"],
                 ["id-closure", ida, idaut, "--determinize"]):
        runs = [_cli(args, seed) for seed in (0, 1, 2)]
        assert all(r.returncode == 0 for r in runs)
        assert len({r.stdout for r in runs}) == 1
