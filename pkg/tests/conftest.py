import pytest
from hypothesis import HealthCheck, settings

from bendlab.numfield import NumberField
from bendlab.units import build_extension

settings.register_profile(
    "bendlab",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("bendlab")


@pytest.fixture(scope="session")
def Q():
    return NumberField.rationals()


@pytest.fixture(scope="session")
def QR2():
    return NumberField([-2, 0, 1])


@pytest.fixture(scope="session")
def L3(Q):
    """Q(s) with s^2 - 3 s + 1 = 0."""
    return build_extension(Q, 3)


@pytest.fixture(scope="session")
def L_sqrt2(QR2):
    """Q(sqrt 2)(s) with trace 17 + 12 sqrt 2."""
    return build_extension(QR2, QR2.element([17, 12]))



ACCEPTANCE_LINES = []


@pytest.fixture
def report_criterion():
    """Record one PASS/FAIL line for the acceptance table printed at the end of the run."""
    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
