from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

from z4rg.algebra import EpsSeries, ExactScalar  # noqa: E402

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=50)
exact_scalars = st.builds(ExactScalar, small_fracs, small_fracs)
exact_series = st.lists(exact_scalars, min_size=3, max_size=3).map(EpsSeries)


def F(text) -> Fraction:
    return Fraction(text)


@pytest.fixture
def eps2():
    return EpsSeries.eps(2)


# --- acceptance summary ------------------------------------------------------
# test_acceptance records each sub-check here; the terminal summary prints one
# line per criterion.
ACCEPTANCE: dict[int, dict] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        entry = ACCEPTANCE[n]
        failed = [name for name, ok in entry["parts"].items() if not ok]
        status = "FAIL" if failed else "PASS"
        detail = f" (failed: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {n}: {status}  {entry['title']}{detail}")
