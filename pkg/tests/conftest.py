from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def admissible(a: Fraction, enn: int) -> bool:
    if any(a + k in (0, 1) for k in range(-2, enn + 2)):
        return False
    return 2 * a + enn - 1 != 0 and 2 * a - enn - 1 != 0


def alphas(enn: int = 8):
    """Non-integer rationals that avoid every degenerate value up to ``enn``."""
    return (
        st.fractions(min_value=-12, max_value=12, max_denominator=9)
        .filter(lambda a: a.denominator > 1)
        .filter(lambda a: admissible(a, enn))
    )


def rationals(bound: int = 20, max_den: int = 12):
    return st.fractions(min_value=-bound, max_value=bound, max_denominator=max_den)


def polys(max_degree: int = 8):
    from x2susy.exactalg import Poly

    return st.lists(rationals(), min_size=0, max_size=max_degree + 1).map(Poly)


# ---------------------------------------------------------------------------
# Acceptance summary: one PASS/FAIL line per criterion
# ---------------------------------------------------------------------------

import pytest  # noqa: E402

_CRITERIA = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key = (mark.args[0], mark.args[1])
    if call.when == "call" or call.excinfo is not None:
        ok = call.excinfo is None
        _CRITERIA[key] = _CRITERIA.get(key, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), ok in sorted(_CRITERIA.items()):
        terminalreporter.write_line("criterion %2d %-28s %s" % (num, name, "PASS" if ok else "FAIL"))
