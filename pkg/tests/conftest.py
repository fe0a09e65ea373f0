import numpy as np
import pytest

from pgcs.assembly import unpack_solution
from pgcs.model import PerturbationSet, PgcsProblem, PgcsSolution

# acceptance outcomes collected for the end-of-run summary
_ACCEPTANCE = {}


def scalar_problem():
    return PgcsProblem(1, 1, 1, [[[2.0]]], [[[1.0]]], [[[1.0]]], [[[3.0]]],
                       [[[1.0]]], [[[2.0]]])


def scalar_solution():
    return PgcsSolution([[[0.2]]], [[[-0.6]]])


def random_problem(rng, p, m, n, shift=0.0):
    """Gaussian coefficients; `shift` adds a multiple of I to A_k (keeps W well posed)."""
    def draw(r, c):
        return [rng.standard_normal((r, c)) for _ in range(p)]
    A = [M + shift * np.eye(m) for M in draw(m, m)]
    return PgcsProblem(p, m, n, A, draw(n, n), draw(m, m), draw(n, n), draw(m, n),
                       draw(m, n))


def random_delta(rng, problem, scale=1.0):
    p, m, n = problem.p, problem.m, problem.n

    def draw(r, c):
        return [scale * rng.standard_normal((r, c)) for _ in range(p)]
    return PerturbationSet(draw(m, m), draw(n, n), draw(m, m), draw(n, n), draw(m, n),
                           draw(m, n))


def apply_equation(problem, z):
    """Left-hand side of the coupled equation evaluated straight from its definition."""
    sol = unpack_solution(z, problem.p, problem.m, problem.n)
    out = []
    for k in range(problem.p):
        X, Y, Xn = sol.X[k], sol.Y[k], sol.X[(k + 1) % problem.p]
        out.append(problem.A[k] @ X - Y @ problem.B[k])
        out.append(problem.C[k] @ Xn - Y @ problem.D[k])
    return np.concatenate([M.reshape(-1, order="F") for M in out])


def dense_from_loop(problem):
    N = problem.order
    return np.column_stack([apply_equation(problem, e) for e in np.eye(N)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def scalar():
    return scalar_problem(), scalar_solution()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    label = dict(report.user_properties).get("criterion")
    if label is None:
        return
    status, details = _ACCEPTANCE.get(label, ("PASS", []))
    if not report.passed:
        status = "FAIL"
    # the tests print a one-line measurement starting with PASS/FAIL
    details += [line.split(": ", 1)[1] for line in report.capstdout.splitlines()
                if line.startswith(("PASS", "FAIL")) and ": " in line]
    _ACCEPTANCE[label] = (status, details)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: (int(s.split()[0].rstrip("ab")), s)):
        status, details = _ACCEPTANCE[label]
        terminalreporter.write_line(f"{status}  criterion {label}")
        for line in details:
            terminalreporter.write_line(f"        {line}")
