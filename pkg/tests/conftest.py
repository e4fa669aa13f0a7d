import pytest

from guided_rewriting.closure import GuidedSystem, IdSystem
from guided_rewriting.rewrite import RewriteSequence
from guided_rewriting.slices import Slice, SliceSequence
from guided_rewriting.symbols import Alphabet, GuideSet, make_adjustment

FB, ACE, D = tuple("fb"), tuple("ace"), ("d",)

FIXTURE_A_CLOSURE = {tuple(w) for w in
                     ["aaacaa", "bbacaa", "abbcaa", "aaacbb", "bbbcaa", "abbcbb", "bbacbb", "bbbcbb"]}

# pair lists per position, with the step numbers that produced them
WORKED_TABLE = [
    [(FB, 1, 2), (FB, 1, 4)],
    [(FB, 2, 2), (ACE, 1, 3), (FB, 2, 4)],
    [(D, 1, 1), (ACE, 2, 3)],
    [(ACE, 3, 3), (FB, 1, 5), (FB, 1, 6)],
    [(FB, 2, 5), (FB, 2, 6)],
]


@pytest.fixture
def fixture_a():
    alpha = Alphabet("abc")
    return GuidedSystem(alpha, make_adjustment(alpha, ["ab"]), GuideSet([tuple("bb")]))


@pytest.fixture
def example5():
    alpha = Alphabet("abcdef")
    return GuidedSystem(alpha, make_adjustment(alpha, ["ab", "cd", "ef"]), GuideSet([FB, ACE, D]))


@pytest.fixture
def rho5():
    return RewriteSequence(tuple("ebcfa"), ((D, 2), (FB, 0), (ACE, 1), (FB, 0), (FB, 3), (FB, 3)))


@pytest.fixture
def sigma_worked():
    return SliceSequence(tuple("ebcfa"), tuple(Slice(tuple((g, q) for g, q, _ in row)) for row in WORKED_TABLE))


@pytest.fixture
def id_aaa():
    return IdSystem(Alphabet(["a", "0"]), "0", GuideSet([tuple("aa0a"), tuple("a0aa")]))


# -- per-criterion report ------------------------------------------------------

_CRITERIA = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "passed": 0, "failed": []})
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        if call.excinfo is None:
            entry["passed"] += 1
        else:
            entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        total = e["passed"] + len(e["failed"])
        status = "PASS" if not e["failed"] else "FAIL"
        line = f"criterion {n:2d}: {status}  {e['title']}  ({e['passed']}/{total} checks)"
        if e["failed"]:
            line += "  failing: " + ", ".join(e["failed"])
        tr.write_line(line)
