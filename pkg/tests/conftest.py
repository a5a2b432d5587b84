import os
import sys

import gmpy2
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def rationals(bound=100):
    return st.builds(lambda n, d: gmpy2.mpq(n, d), st.integers(-bound, bound), st.integers(1, bound))


def quaternions(bound=100):
    from rssw.scalars import Quaternion

    return st.builds(Quaternion, rationals(bound), rationals(bound), rationals(bound), rationals(bound))


def nonzero_quaternions(bound=100):
    return quaternions(bound).filter(lambda q: bool(q))


def gauss(bound=100):
    from rssw.scalars import GaussComplex

    return st.builds(GaussComplex, rationals(bound), rationals(bound))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
