import pytest

from deltapulse import PotentialProfile, QuadratureSpec, radiated_energy

TABLE_ROWS = [
    (1.0, 0.5, -0.0134),
    (2.0, 0.5, -0.00413),
    (2.0, 1.0, -0.0268),
    (4.0, 2.0, -0.0536),
    (4.0, 3.0, -0.155),
]

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def table_reports():
    """Radiated-energy reports for the five table rows at the default cutoff, with timings."""
    import time

    out = {}
    for f2, lam0, _ in TABLE_ROWS:
        start = time.perf_counter()
        rep = radiated_energy(PotentialProfile.rational(lam0, f2), QuadratureSpec())
        out[(f2, lam0)] = (rep, time.perf_counter() - start)
    return out


@pytest.fixture
def acceptance_line():
    def record(number: int, passed: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
