import warnings

import numpy as np
import pytest

from carpetdim.core import A2Warning, validate_system

ACCEPTANCE_LINES = []


@pytest.fixture(autouse=True)
def _quiet_a2():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", A2Warning)
        yield


@pytest.fixture
def report_line():
    """Record a one-line acceptance verdict, printed in the terminal summary."""
    def add(line):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_system(rng, *, diag=False, max_cols=4, max_per_col=4, negative=False, shear=True):
    """A random valid TGL system (non-overlapping columns, maps inside the unit square)."""
    while True:
        m = int(rng.integers(2, max_cols + 1))
        if diag:
            r = np.full(m, rng.uniform(0.1, 1.0 / m))
        else:
            r = rng.uniform(0.05, 1.0, size=m)
            r *= rng.uniform(0.5, 1.0) / r.sum()
        gaps = rng.dirichlet(np.ones(m + 1)) * (1.0 - r.sum())
        u = np.cumsum(gaps[:-1]) + np.concatenate([[0.0], np.cumsum(r)[:-1]])
        counts = rng.integers(1, max_per_col + 1, size=m)
        if counts.max() == 1:
            counts[0] = 2
        a_common = None
        if diag:
            a_common = rng.uniform(0.02, min(r[0], 1.0 / counts.max()) * 0.95)
        maps = []
        ok = True
        for col in range(m):
            flip = negative and rng.random() < 0.3
            b = -r[col] if flip else r[col]
            tx = u[col] + r[col] if flip else u[col]
            if diag:
                aa = np.full(counts[col], a_common)
            else:
                hi = min(r[col] * 0.95, 1.0 / counts[col])
                if hi <= 0.011:
                    ok = False
                    break
                aa = rng.uniform(0.01, hi, size=counts[col])
            for a in aa:
                if negative and rng.random() < 0.2:
                    a = -a
                d = rng.uniform(-1, 1) * (1 - abs(a)) if shear else 0.0
                lo = -min(0.0, d) - min(0.0, a)
                top = 1.0 - max(0.0, d) - max(0.0, a)
                ty = rng.uniform(lo, top) if top > lo else lo
                maps.append((b, a, d, tx, ty))
        if ok:
            return validate_system(maps, counts.tolist(), "tgl")
