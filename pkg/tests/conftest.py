import numpy as np
import pytest

from tempembed.graph import Snapshot, TemporalGraph


def random_snapshot(n, p, rng):
    iu, ju = np.triu_indices(n, k=1)
    hit = rng.random(len(iu)) < p
    return Snapshot.from_pairs(n, np.stack([iu[hit], ju[hit]], axis=1))


def planted_partition(sizes, p_in, p_out, rng):
    """Block graph whose leading spectrum is separated from the bulk."""
    member = np.repeat(np.arange(len(sizes)), sizes)
    n = len(member)
    iu, ju = np.triu_indices(n, k=1)
    prob = np.where(member[iu] == member[ju], p_in, p_out)
    hit = rng.random(len(iu)) < prob
    return Snapshot.from_pairs(n, np.stack([iu[hit], ju[hit]], axis=1))


def graph_from(n, *edge_lists):
    snaps = tuple(Snapshot.from_pairs(n, e) for e in edge_lists)
    return TemporalGraph(n, snaps, tuple(str(i) for i in range(n)))


def relative_error(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(np.abs(b), 1e-8)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail):
    ACCEPTANCE_LINES.append((number, f"{'PASS' if ok else 'FAIL'}  [{number:>2}] {title}: {detail}"))
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
