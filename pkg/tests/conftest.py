import mpmath
import pytest

Q_GRID = (0.5, 0.9, 1.1, 2.0)

# lines recorded by the acceptance module, echoed after the run
ACCEPTANCE_LINES = []


@pytest.fixture(params=Q_GRID, ids=lambda q: f"q={q}")
def q(request):
    return request.param


@pytest.fixture
def mp50():
    with mpmath.workdps(50):
        yield mpmath


def mp_bracket(x, q):
    q = mpmath.mpf(q)
    return (q**x - q**-x) / (q - 1 / q)


def mp_brace(x, q):
    q = mpmath.mpf(q)
    return (q ** (2 * x) - 1) / (q**2 - 1)


def mp_factorial(n, q, fn=mp_bracket):
    out = mpmath.mpf(1)
    for k in range(1, n + 1):
        out *= fn(k, q)
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
