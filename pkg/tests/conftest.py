import numpy as np
import pytest

GRID = 2.0**-30


def boundary_instances(rng, m, n, k, spread=0.05):
    """Shuffled (m, n) length arrays built to sit near the window boundary.

    Each term past the first k is its window sum scaled by a factor close
    to 1; a window fails with probability 1/(2(n-k)), so a little over half
    the rows satisfy every window and the rest miss by a hair.  Rows are
    rescaled into [0, 1] and snapped to a 2^-30 grid: every sum of at most a
    dozen entries is then exact in float64.
    """
    rows = np.empty((m, n))
    rows[:, :min(k, n)] = rng.random((m, min(k, n))) + 0.01
    rows[:, :min(k, n)].sort(axis=1)
    for j in range(k, n):
        scale = 1.0 + spread * (rng.random(m) - 0.5 / max(n - k, 1))
        rows[:, j] = np.maximum(rows[:, j - k:j].sum(axis=1) * scale, rows[:, j - 1])
    rows /= rows.max(axis=1, keepdims=True)
    rows = np.round(rows / GRID) * GRID
    return rng.permuted(rows, axis=1)


def grid_uniform(rng, m, n):
    return rng.integers(0, 2**30, size=(m, n)) * GRID


def mixed_instances(rng, m, n, k):
    """Half uniform draws, half near-boundary draws."""
    half = m // 2
    return np.vstack([grid_uniform(rng, half, n), boundary_instances(rng, m - half, n, k)])


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def record_criterion(request):
    """Log one acceptance line; the summary hook prints them all at the end."""
    log = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, title, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" ({detail})" if detail else "")
        log.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_ACCEPTANCE, [])
    if log:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(log):
            terminalreporter.write_line(line)
