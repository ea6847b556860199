import itertools
import math
from fractions import Fraction

import numpy as np
import pytest


def _sq(u, v):
    return sum((a - b) ** 2 for a, b in zip(u, v))


def naive_contains(xi, xj, q, beta):
    """Membership straight from the two-ball definition, in exact rational
    arithmetic on the (float) inputs, comparing squared distances."""
    xi, xj, q = [[Fraction(float(c)) for c in p] for p in (xi, xj, q)]
    if math.isinf(beta):
        u = [b - a for a, b in zip(xi, xj)]
        s1 = sum(ui * (qi - a) for ui, qi, a in zip(u, q, xi))
        s2 = sum(-ui * (qi - b) for ui, qi, b in zip(u, q, xj))
        return s1 >= 0 and s2 >= 0
    h = Fraction(float(beta)) / 2
    ci = [h * a + (1 - h) * b for a, b in zip(xi, xj)]
    cj = [(1 - h) * a + h * b for a, b in zip(xi, xj)]
    r2 = h * h * _sq(xi, xj)
    return max(_sq(q, ci), _sq(q, cj)) <= r2


def naive_skd_count(q, S, beta):
    count = 0
    for xi, xj in itertools.combinations(S, 2):
        if tuple(xi) == tuple(xj):
            continue
        count += naive_contains(xi, xj, q, beta)
    return count


def brute_halfspace_count(q, S):
    """Closed-halfplane minimum by evaluating, at every direction through q and a
    data point (or its antipode), the halfplanes obtained by an infinitesimal
    rotation either way. Every open interval of boundary directions touches one
    of those critical directions."""
    rel = np.asarray(S, dtype=float) - np.asarray(q, dtype=float)
    on_q = np.all(rel == 0, axis=1)
    z = int(on_q.sum())
    rel = rel[~on_q]
    if len(rel) == 0:
        return z
    best = len(rel)
    for p in rel:
        for d in (p, -p):
            cross = d[0] * rel[:, 1] - d[1] * rel[:, 0]
            dot = d[0] * rel[:, 0] + d[1] * rel[:, 1]
            strict = int((cross > 0).sum())
            plus = strict + int(((cross == 0) & (dot < 0)).sum())
            minus = strict + int(((cross == 0) & (dot > 0)).sum())
            best = min(best, plus, minus)
    return z + best


@pytest.fixture
def oracle():
    class Oracles:
        contains = staticmethod(naive_contains)
        skd_count = staticmethod(naive_skd_count)
        hd_count = staticmethod(brute_halfspace_count)

    return Oracles


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Record one ``PASS``/``FAIL`` line per acceptance criterion."""

    def log(label, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
