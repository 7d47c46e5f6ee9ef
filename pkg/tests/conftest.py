import math

import pytest

from classcoupler.distributions import AtomMixturePrior, NormalParams
from classcoupler.driver import run_draws
from classcoupler.models import SingleMeanModel

CONJUGATE_TRUTH = math.sqrt(2) / (math.sqrt(2) + 1)


@pytest.fixture(scope="session")
def conjugate_run():
    """100k draws for y = (0), known v = 1, slab N(0, 1), p = 1/2."""
    model = SingleMeanModel([0.0], AtomMixturePrior(0.5, NormalParams(0.0, 1.0)), 1.0)
    return run_draws(model, 100_000, seed=31)


# (criterion number, passed, detail) lines recorded by the acceptance suite
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
