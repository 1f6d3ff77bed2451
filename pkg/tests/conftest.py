from __future__ import annotations

import random

import pytest

from csknot import linalg as la

# filled by test_acceptance; printed once at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def random_unimodular(n: int, rng: random.Random, steps: int = 12, entry: int = 2) -> la.Matrix:
    """Product of random elementary row operations and a sign flip."""
    u = la.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([k for k in range(-entry, entry + 1) if k])
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]
    if rng.random() < 0.5:
        k = rng.randrange(n)
        u[k] = [-x for x in u[k]]
    return u


def conjugate(u: la.Matrix, a: la.Matrix) -> la.Matrix:
    return la.matmul(la.matmul(u, a), la.inverse_unimodular(u))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240607)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


from hypothesis import settings  # noqa: E402

settings.register_profile("default", deadline=None)
settings.load_profile("default")
