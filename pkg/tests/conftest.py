import numpy as np
import pytest

from subtraj import dtw, edr, erp, frechet, make_trajectory, wed_unit

# the five models exercised throughout; EDR/ERP parameters as in the
# acceptance criteria
MODELS = {
    "dtw": dtw,
    "frechet": frechet,
    "edr": lambda: edr(0.3),
    "erp": lambda: erp((0.0, 0.0)),
    "wed": wed_unit,
}
SYMBOLS = "abc"

ACCEPTANCE_LINES = []


def random_pair(rng, name, m_range=(2, 12), n_range=(2, 40)):
    """A random (query, data) instance suited to model ``name``.

    Unit WED gets short symbol alphabets so exact matches happen; planar
    models get points in the unit square (EDR's 0.3 threshold then yields a
    mix of 0/1 substitutions).
    """
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    if name == "wed":
        q = make_trajectory("q", [str(c) for c in rng.choice(list(SYMBOLS), m)])
        d = make_trajectory("d", [str(c) for c in rng.choice(list(SYMBOLS), n)])
    else:
        q = make_trajectory("q", rng.random((m, 2)))
        d = make_trajectory("d", rng.random((n, 2)))
    return q, d


def close(a, b, integral):
    if integral:
        return a == b
    return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


@pytest.fixture(params=sorted(MODELS))
def model_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
