from pathlib import Path

import pytest

from supermatch._kernels import HAVE_NUMBA
from supermatch.instance import Instance, load_instance
from supermatch.rotations import ClosedSubset, RotationPoset, order_tables, rotation_poset

DATA = Path(__file__).parent / "data"

# the 11 stable matchings of the size-7 sample, as closed subsets.
SAMPLE_SUBSETS = [
    (),
    (0,),
    (0, 1),
    (0, 1, 4),
    (0, 1, 4, 5),
    (0, 1, 2),
    (0, 1, 2, 4),
    (0, 1, 2, 4, 5),
    (0, 1, 2, 3),
    (0, 1, 2, 3, 4),
    (0, 1, 2, 3, 4, 5),
]
SAMPLE_B = [5, 4, 3, 2, 3, 3, 1, 3, 3, 2, 3]

BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


def S(k):
    return ClosedSubset.of(SAMPLE_SUBSETS[k])


@pytest.fixture(scope="session")
def sample_path():
    return DATA / "sample7.txt"


@pytest.fixture(scope="session")
def sample(sample_path) -> Instance:
    return load_instance(sample_path)


@pytest.fixture(scope="session")
def poset7(sample) -> RotationPoset:
    return rotation_poset(sample)


@pytest.fixture(scope="session")
def unique_instance() -> Instance:
    # everyone's first choice is reciprocated, so M0 = Mz
    n = 4
    prefs = [[(i + k) % n for k in range(n)] for i in range(n)]
    return Instance.from_prefs(prefs, prefs)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def abstract_poset(size, edges) -> RotationPoset:
    """Poset without an instance; enough for closure and neighbourhood logic."""
    raw = [[] for _ in range(size)]
    for a, b in edges:
        raw[b].append(a)
    dp, ds, tp, ts = order_tables(size, raw)
    return RotationPoset(
        inst=None, rotations=tuple(range(size)), direct_preds=dp, direct_succs=ds,
        trans_preds=tp, trans_succs=ts, produce={}, eliminate={}, men_of=(0,) * size,
        rotations_of_man=(), m0=None, mz=None,
    )


# -- acceptance reporting ------------------------------------------------------
# Tests tagged @pytest.mark.criterion(k, "summary") get one PASS/FAIL line in the
# terminal summary; details recorded via the `measured` fixture are appended.

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, summary): acceptance criterion")


@pytest.fixture
def measured(request):
    notes = []
    request.node.user_properties.append(("measured", notes))
    return notes.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    notes = next((v for k, v in item.user_properties if k == "measured"), [])
    number, summary = mark.args
    _CRITERIA[number] = (rep.passed, summary, "; ".join(notes))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, summary, notes = _CRITERIA[number]
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {summary}"
        if notes:
            line += f"  [{notes}]"
        terminalreporter.write_line(line)
