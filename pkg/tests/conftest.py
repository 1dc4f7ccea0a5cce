from __future__ import annotations

import pytest
from hypothesis import strategies as st

from qlrc import pcm
from qlrc.gf2 import BitMatrix
from qlrc.tanner import BipartiteGraph, from_matrix


@pytest.fixture(scope="session")
def hamming() -> BitMatrix:
    return pcm.hamming7()


@pytest.fixture(scope="session")
def hamming_graph(hamming) -> BipartiteGraph:
    return from_matrix(hamming)


# (1, 2, 1)-exact: two bits, two checks, every check on both bits
K22 = BitMatrix.from_rows([[1, 1], [1, 1]])


@st.composite
def bit_matrices(draw, max_rows: int = 6, max_cols: int = 8):
    rows = draw(st.integers(0, max_rows))
    cols = draw(st.integers(0, max_cols))
    data = draw(st.lists(st.integers(0, (1 << cols) - 1), min_size=rows, max_size=rows))
    return BitMatrix(rows, cols, tuple(data))


def span(vectors) -> set[int]:
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


def local_exact_sets(r: int, t: int, s: int) -> list[frozenset[int]]:
    """t recovery sets of position 0: each pair shares 0 and s private points, the rest is private.

    Pairwise intersections have size s + 1 and triple intersections are {0}.
    """
    assert r >= s * (t - 1)
    sets = [{0} for _ in range(t)]
    nxt = 1
    for a in range(t):
        for b in range(a + 1, t):
            for _ in range(s):
                sets[a].add(nxt)
                sets[b].add(nxt)
                nxt += 1
    for g in sets:
        while len(g) < r + 1:
            g.add(nxt)
            nxt += 1
    return [frozenset(g) for g in sets]


def star_family(sets: list[frozenset[int]], n: int):
    """Family on [n] where position 0 has ``sets`` and every other position the singleton set."""
    from qlrc.recovery import RecoveryFamily

    gamma = [tuple(sets)] + [(frozenset({i}),) for i in range(1, n)]
    return RecoveryFamily(n, tuple(gamma))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
