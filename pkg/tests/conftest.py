import json
import pathlib

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from pomkleene import pomset as pm
from pomkleene.automaton import PomsetAutomaton
from pomkleene.expr import ONE, ZERO, Dot, Letter, Parallel, Plus, Star

# enumeration cost varies a lot between examples
settings.register_profile("default", deadline=None)
settings.load_profile("default")

DATA = pathlib.Path(__file__).parent / "data"

C_EXPR = "prepare . (bake || caramelize) . glaze"
C_POMSET = "prepare . (bake | caramelize) . glaze"


def load_json(name):
    return json.loads((DATA / name).read_text())


@pytest.fixture
def fig1c():
    return PomsetAutomaton.from_json(load_json("fig1c.json"))


@pytest.fixture
def data_dir():
    return DATA


SYMBOLS = ["a", "b", "c"]

leaf_exprs = st.sampled_from([ZERO, ONE] + [Letter(a) for a in SYMBOLS])


def _grow(children):
    return st.one_of(
        children.map(Star),
        st.tuples(children, children).map(lambda p: Plus(*p)),
        st.tuples(children, children).map(lambda p: Dot(*p)),
        st.tuples(children, children).map(lambda p: Parallel(*p)),
    )


exprs = st.recursive(leaf_exprs, _grow, max_leaves=4)

leaf_pomsets = st.sampled_from([pm.EMPTY] + [pm.Primitive(a) for a in SYMBOLS])

pomsets = st.recursive(
    leaf_pomsets,
    lambda kids: st.one_of(
        st.tuples(kids, kids).map(lambda p: pm.seq_compose(*p)),
        st.tuples(kids, kids).map(lambda p: pm.par_compose(*p)),
    ),
    max_leaves=7,
)


# One summary line per acceptance criterion, keyed off the test function name.
def pytest_terminal_summary(terminalreporter):
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid or rep.when != "call" and outcome == "passed":
                continue
            name = nodeid.split("::")[-1]
            ok = outcome == "passed"
            rows[name] = rows.get(name, True) and ok
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(rows, key=lambda n: int(n.split("_")[2])):
        terminalreporter.write_line(f"ACCEPTANCE {'PASS' if rows[name] else 'FAIL'}  {name}")
