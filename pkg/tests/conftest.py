from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "toricqd" / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


def laurent_dict(v):
    """``{(hbar exponent, monomial): Fraction}`` view of an HLaurent."""
    out = {}
    for e, c in v.items():
        for mono, x in c.sorted_terms():
            out[(e, tuple(mono))] = Fraction(x)
    return out


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / f"{name}.json")


def pytest_terminal_summary(terminalreporter):
    results = {}
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and "test_acceptance.py::test_criterion_" in rep.nodeid:
                num = int(rep.nodeid.split("::")[-1].split("_")[2])
                results.setdefault(num, []).append(outcome == "passed")
    if results:
        terminalreporter.write_sep("=", "acceptance")
        for num, oks in sorted(results.items()):
            verdict = "PASS" if all(oks) else "FAIL"
            terminalreporter.write_line(f"criterion {num}: {verdict} ({sum(oks)}/{len(oks)} checks)")
