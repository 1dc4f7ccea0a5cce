"""Tanner graphs: construction from parity checks, graph product, exactness."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .gf2 import BitMatrix, popcount, support
from .recovery import RecoveryFamily


class IsolatedBitNode(ValueError):
    """A bit node has no incident check, so it has no recovery set."""


@dataclass(frozen=True)
class BipartiteGraph:
    """Simple bipartite graph with ``n_bits`` bit nodes and per-check adjacency.

    ``adjacency[c]`` is the sorted tuple of bit nodes incident to check ``c``.
    """

    n_bits: int
    n_checks: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.n_checks:
            raise ValueError("adjacency length must equal n_checks")
        for c, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise ValueError(f"check {c}: neighbours must be sorted and unique")
            if nbrs and (nbrs[0] < 0 or nbrs[-1] >= self.n_bits):
                raise ValueError(f"check {c}: bit index out of range")

    @classmethod
    def from_edges(cls, n_bits: int, n_checks: int, edges) -> BipartiteGraph:
        adj: list[set[int]] = [set() for _ in range(n_checks)]
        for b, c in edges:
            adj[c].add(b)
        return cls(n_bits, n_checks, tuple(tuple(sorted(a)) for a in adj))

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def edges(self) -> list[tuple[int, int]]:
        """(bit, check) pairs ordered by check then bit."""
        return [(b, c) for c, nbrs in enumerate(self.adjacency) for b in nbrs]

    def bit_neighbors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_bits)]
        for c, nbrs in enumerate(self.adjacency):
            for b in nbrs:
                out[b].append(c)
        return tuple(tuple(x) for x in out)

    def check_masks(self) -> list[int]:
        return [sum(1 << b for b in nbrs) for nbrs in self.adjacency]


def from_matrix(H: BitMatrix) -> BipartiteGraph:
    """Tanner graph: bit node j ~ check node i iff H[i, j] = 1."""
    return BipartiteGraph(H.cols, H.rows, tuple(tuple(support(row)) for row in H.data))


def to_matrix(G: BipartiteGraph) -> BitMatrix:
    return BitMatrix(G.n_checks, G.n_bits, tuple(G.check_masks()))


def transpose(G: BipartiteGraph) -> BipartiteGraph:
    return BipartiteGraph(G.n_checks, G.n_bits, G.bit_neighbors())


def product(G1: BipartiteGraph, G2: BipartiteGraph) -> BipartiteGraph:
    """Bipartite graph product.

    Bit nodes are V1xV2 followed by W1xW2; check nodes are W1xV2 followed by
    V1xW2; pairs are ordered lexicographically inside each block.
    """
    v1, w1, v2, w2 = G1.n_bits, G1.n_checks, G2.n_bits, G2.n_checks
    bits_vv = v1 * v2

    def bit_vv(a: int, b: int) -> int:
        return a * v2 + b

    def bit_ww(c: int, e: int) -> int:
        return bits_vv + c * w2 + e

    adj: list[list[int]] = []
    # check (c1, b2) in W1xV2: (x, b2) for x ~ c1 in G1, and (c1, c2) for c2 ~ b2 in G2
    bn2 = G2.bit_neighbors()
    for c1 in range(w1):
        for b2 in range(v2):
            nbrs = [bit_vv(x, b2) for x in G1.adjacency[c1]]
            nbrs += [bit_ww(c1, c2) for c2 in bn2[b2]]
            adj.append(sorted(nbrs))
    # check (b1, c2) in V1xW2: (b1, y) for y ~ c2 in G2, and (c1, c2) for c1 ~ b1 in G1
    bn1 = G1.bit_neighbors()
    for b1 in range(v1):
        for c2 in range(w2):
            nbrs = [bit_vv(b1, y) for y in G2.adjacency[c2]]
            nbrs += [bit_ww(c1, c2) for c1 in bn1[b1]]
            adj.append(sorted(nbrs))
    return BipartiteGraph(bits_vv + w1 * w2, w1 * v2 + v1 * w2, tuple(tuple(a) for a in adj))


@dataclass
class ExactnessReport:
    is_regular: bool
    is_exact: bool
    r: int
    t: int
    s: int
    violations: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    def first_violation(self) -> str | None:
        if not self.violations:
            return None
        kind, witness = self.violations[0]
        return f"{kind} {' '.join(map(str, witness))}"


def check_exact(
    G: BipartiteGraph, r: int, t: int, s: int, max_violations: int = 16
) -> ExactnessReport:
    """Check the three (r, t, s)-exactness conditions by exhaustive enumeration.

    Cost is O(|W|^2) pair intersections plus a triple scan restricted to pairs
    sharing at least two bit nodes.
    """
    violations: list[tuple[str, tuple[int, ...]]] = []

    def note(kind: str, witness: tuple[int, ...]) -> None:
        if len(violations) < max_violations:
            violations.append((kind, witness))

    regular = True
    for b, checks in enumerate(G.bit_neighbors()):
        if len(checks) != t:
            regular = False
            note("bit_degree", (b, len(checks)))
    for c, nbrs in enumerate(G.adjacency):
        if len(nbrs) != r + 1:
            regular = False
            note("check_degree", (c, len(nbrs)))

    masks = G.check_masks()
    pairs_ok = triples_ok = True
    for i, j in combinations(range(G.n_checks), 2):
        common = masks[i] & masks[j]
        if not common:
            continue
        k_common = popcount(common)
        if k_common != s + 1:
            pairs_ok = False
            note("pair_common", (i, j, k_common))
        if k_common < 2:
            continue
        for k in range(j + 1, G.n_checks):
            triple = popcount(common & masks[k])
            if triple > 1:
                triples_ok = False
                note("triple_common", (i, j, k, triple))

    exact = regular and pairs_ok and triples_ok
    return ExactnessReport(regular, exact, r, t, s, violations)


def recovery_family(G: BipartiteGraph) -> RecoveryFamily:
    """Recovery sets Γ_l(j): supports of the checks on bit j, in check order."""
    bn = G.bit_neighbors()
    isolated = [b for b, checks in enumerate(bn) if not checks]
    if isolated:
        raise IsolatedBitNode(f"bit node {isolated[0]} has no incident check")
    gamma = tuple(tuple(frozenset(G.adjacency[c]) for c in checks) for checks in bn)
    return RecoveryFamily(G.n_bits, gamma)
