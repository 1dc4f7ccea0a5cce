"""Recovery-set families and the randomized ordering constructions built on them.

Positions are 0-based. An ordering is given by its rank array ``pi``: ``pi[j]``
is the place of position ``j`` in the ordering, smaller meaning earlier.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

from . import bounds


class ExhaustiveTooLarge(ValueError):
    """The union to enumerate exceeds the configured cap."""


class RestartsExhausted(RuntimeError):
    """No sampled ordering reached the target; raise the restart budget."""


class BoundNotMet(RuntimeError):
    """Sampling never reached the guaranteed union bound; raise the budget or go exhaustive."""


DEFAULT_EXHAUSTIVE_CAP = 10


@dataclass(frozen=True)
class RecoveryFamily:
    """Recovery sets ``gamma[j][l]`` for every position ``j`` and index ``l``."""

    n: int
    gamma: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self) -> None:
        if len(self.gamma) != self.n:
            raise ValueError(f"need recovery sets for {self.n} positions, got {len(self.gamma)}")
        for j, sets in enumerate(self.gamma):
            for l, g in enumerate(sets):
                if j not in g:
                    raise ValueError(f"position {j} missing from its recovery set {l}")
                if any(i < 0 or i >= self.n for i in g):
                    raise ValueError(f"recovery set {l} of {j} leaves [0, {self.n})")

    @classmethod
    def from_sets(cls, n: int, gamma: Sequence[Sequence[Iterable[int]]]) -> RecoveryFamily:
        return cls(n, tuple(tuple(frozenset(g) for g in sets) for sets in gamma))

    @property
    def t(self) -> int:
        return min((len(s) for s in self.gamma), default=0)

    @property
    def max_set_size(self) -> int:
        return max((len(g) for sets in self.gamma for g in sets), default=0)

    def truncate(self, t: int) -> RecoveryFamily:
        """Keep the first ``t`` recovery sets of every position."""
        return RecoveryFamily(self.n, tuple(sets[:t] for sets in self.gamma))

    def union(self, j: int, excluded: frozenset[int] = frozenset()) -> frozenset[int]:
        return frozenset().union(*self.gamma[j]) - excluded

    def inferred_rs(self) -> tuple[int, int]:
        """(r, s): largest set size minus one and largest pairwise overlap minus one."""
        r = self.max_set_size - 1
        s = 0
        for sets in self.gamma:
            for a, b in combinations(sets, 2):
                s = max(s, len(a & b) - 1)
        return r, s


@dataclass
class FamilyValidation:
    mode: str
    violations: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


MODES = ("general", "exact", "star")


def validate_family(F: RecoveryFamily, r: int, s: int, mode: str = "exact") -> FamilyValidation:
    """Check the size, membership, pair and triple conditions for ``mode``.

    general: |Γ| <= r+1 and pairwise |∩| <= s+1.
    exact:   |Γ| = r+1, pairwise |∩| = s+1, triple ∩ = {j}, and r >= s(t-1).
    star:    |Γ| <= r+1 and pairwise ∩ = {j}.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    out = FamilyValidation(mode)
    bad = out.violations.append
    t = F.t
    if mode == "exact" and r < s * (t - 1):
        bad(("r_below_s_t_minus_1", r, s, t))
    for j, sets in enumerate(F.gamma):
        if len(sets) != t:
            bad(("availability", j, len(sets)))
        for l, g in enumerate(sets):
            if j not in g:
                bad(("membership", j, l))
            size = len(g)
            if size > r + 1 or (mode == "exact" and size != r + 1):
                bad(("size", j, l, size))
        for (l1, a), (l2, b) in combinations(enumerate(sets), 2):
            common = a & b
            if mode == "general" and len(common) > s + 1:
                bad(("pair", j, l1, l2, len(common)))
            elif mode == "exact" and len(common) != s + 1:
                bad(("pair", j, l1, l2, len(common)))
            elif mode == "star" and common != {j}:
                bad(("pair", j, l1, l2, len(common)))
        if mode == "exact":
            for (l1, a), (l2, b), (l3, c) in combinations(enumerate(sets), 3):
                if a & b & c != {j}:
                    bad(("triple", j, l1, l2, l3))
    return out


def ranks_from_order(order: Sequence[int]) -> list[int]:
    pi = [0] * len(order)
    for place, j in enumerate(order):
        pi[j] = place
    return pi


def _witness(F: RecoveryFamily, pi: Sequence[int], j: int, excluded: frozenset[int]) -> int | None:
    """Smallest α with every other non-excluded member of Γ_α(j) later than j."""
    pj = pi[j]
    for alpha, g in enumerate(F.gamma[j]):
        if all(pi[i] > pj for i in g if i != j and i not in excluded):
            return alpha
    return None


def _free_positions(pi: Sequence[int], excluded: frozenset[int], d_grace: int) -> set[int]:
    if d_grace <= 1:
        return set()
    allowed = sorted((p, j) for j, p in enumerate(pi) if j not in excluded)
    return {j for _, j in allowed[: d_grace - 1]}


def u_set(
    F: RecoveryFamily,
    pi: Sequence[int],
    excluded: Iterable[int] = (),
    d_grace: int = 0,
) -> set[int]:
    """Positions that come before the rest of at least one recovery set.

    Recovery sets are restricted to the non-excluded positions. With
    ``d_grace = d > 1`` the first d - 1 non-excluded positions of the ordering
    are admitted unconditionally.
    """
    if sorted(pi) != list(range(F.n)):
        raise ValueError("pi must be a permutation of range(n)")
    excluded = frozenset(excluded)
    out = _free_positions(pi, excluded, d_grace)
    for j in range(F.n):
        if j not in excluded and j not in out and _witness(F, pi, j, excluded) is not None:
            out.add(j)
    return out


def estimate_membership_probability(
    F: RecoveryFamily,
    j: int,
    excluded: Iterable[int] = (),
    trials: int | None = None,
    seed: int = 0,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> tuple[Fraction | float, float]:
    """Pr(j in U) under a uniform ordering, as (estimate, standard error).

    ``trials=None`` enumerates the orderings of the union of j's recovery sets,
    which is all the event depends on, and returns an exact Fraction.
    """
    excluded = frozenset(excluded)
    if j in excluded:
        raise ValueError(f"position {j} is excluded")
    sets = [g - excluded for g in F.gamma[j]]
    union = sorted(frozenset().union(*sets))
    if trials is None:
        if len(union) > cap:
            raise ExhaustiveTooLarge(f"union of size {len(union)} exceeds cap {cap}")
        hits = total = 0
        for perm in permutations(range(len(union))):
            rank = dict(zip(union, perm))
            total += 1
            if any(all(rank[i] > rank[j] for i in g if i != j) for g in sets):
                hits += 1
        return Fraction(hits, total), 0.0
    rng = random.Random(seed)
    hits = 0
    for _ in range(trials):
        keys = {i: rng.random() for i in union}
        if any(all(keys[i] > keys[j] for i in g if i != j) for g in sets):
            hits += 1
    p = hits / trials
    return p, math.sqrt(p * (1 - p) / trials)


@dataclass(frozen=True)
class RecoverableSequence:
    """Positions j_1..j_N with witnesses α_k.

    The first ``prefix_free_from`` entries are free (no witness); every later
    entry has Γ_{α_k}(j_k) disjoint from all earlier positions.
    """

    positions: tuple[int, ...]
    alphas: tuple[int | None, ...]
    prefix_free_from: int = 0

    def __len__(self) -> int:
        return len(self.positions)

    def violations(self, F: RecoveryFamily) -> list[str]:
        out = []
        if len(set(self.positions)) != len(self.positions):
            out.append("positions repeat")
        if len(self.alphas) != len(self.positions):
            out.append("alphas and positions differ in length")
            return out
        for k, (j, alpha) in enumerate(zip(self.positions, self.alphas)):
            if k < self.prefix_free_from:
                continue
            if alpha is None or not 0 <= alpha < len(F.gamma[j]):
                out.append(f"entry {k}: missing or invalid witness {alpha}")
                continue
            clash = F.gamma[j][alpha] & set(self.positions[:k])
            if clash:
                out.append(f"entry {k}: Γ_{alpha}({j}) meets earlier {sorted(clash)}")
        return out

    def is_valid(self, F: RecoveryFamily) -> bool:
        return not self.violations(F)


def _restart_rng(seed: int, restart: int) -> random.Random:
    return random.Random(f"{seed}:{restart}")


def default_restarts(n: int) -> int:
    return 64 * max(n, 1)


def find_recoverable_sequence(
    F: RecoveryFamily,
    excluded: Iterable[int] = (),
    target: int = 1,
    d_grace: int = 0,
    seed: int = 0,
    max_restarts: int | None = None,
) -> RecoverableSequence:
    """Sample orderings until the U-set has ``target`` elements; return them in order.

    Restart ``i`` uses its own generator derived from (seed, i), and the first
    successful restart wins, so results do not depend on evaluation order.
    """
    excluded = frozenset(excluded)
    if max_restarts is None:
        max_restarts = default_restarts(F.n)
    allowed = [j for j in range(F.n) if j not in excluded]
    if target > len(allowed):
        raise RestartsExhausted(f"target {target} exceeds the {len(allowed)} available positions")
    if target <= 0:
        return RecoverableSequence((), (), 0)
    n_free = max(d_grace - 1, 0)
    for restart in range(max_restarts):
        order = list(range(F.n))
        _restart_rng(seed, restart).shuffle(order)
        pi = ranks_from_order(order)
        chosen: list[int] = []
        alphas: list[int | None] = []
        placed = 0
        for j in order:
            if j in excluded:
                continue
            if placed < n_free:
                chosen.append(j)
                alphas.append(None)
            else:
                alpha = _witness(F, pi, j, excluded)
                if alpha is None:
                    placed += 1
                    continue
                chosen.append(j)
                alphas.append(alpha)
            placed += 1
            if len(chosen) == target:
                return RecoverableSequence(tuple(chosen), tuple(alphas), min(n_free, target))
    raise RestartsExhausted(f"no ordering reached {target} positions in {max_restarts} restarts")


def edge_colored_graph(sets: Sequence[Iterable[int]]) -> list[tuple[int, int, int]]:
    """Edges (m, m', color j) chaining consecutive sets that contain j.

    Each color class is a path, so the graph has sum |A_m| - |∪ A_m| edges.
    """
    holders: dict[int, list[int]] = {}
    for m, a in enumerate(sets):
        for j in a:
            holders.setdefault(j, []).append(m)
    edges = []
    for j in sorted(holders):
        ms = holders[j]
        edges.extend((ms[i], ms[i + 1], j) for i in range(len(ms) - 1))
    return edges


def max_induced_edges(n_vertices: int, edges: Sequence[tuple[int, int]], m: int) -> tuple[tuple[int, ...], int]:
    """Exhaustive search for an m-vertex induced subgraph with the most edges (multigraph)."""
    best: tuple[tuple[int, ...], int] = ((), -1)
    for subset in combinations(range(n_vertices), m):
        inside = set(subset)
        count = sum(1 for u, v in edges if u in inside and v in inside)
        if count > best[1]:
            best = (subset, count)
    return best


def union_guarantee(n: int, M: int, N: int, r: int) -> int:
    """Largest union size the edge-colored-graph argument guarantees for some N of M sets."""
    excess = M * (r + 1) - n
    if excess < 0 or M < 2:
        return N * (r + 1)
    return N * (r + 1) - math.ceil(Fraction(N * (N - 1), M * (M - 1)) * excess)


def select_small_union_subset(
    sets: Sequence[Iterable[int]],
    N: int,
    n: int,
    seed: int = 0,
    exhaustive_cap: int = 20_000,
    restarts: int = 256,
) -> tuple[tuple[int, ...], int]:
    """Choose N of the M (r+1)-sets whose union is no larger than the guaranteed bound.

    Exhaustive over all N-subsets when C(M, N) <= exhaustive_cap, otherwise the
    best of ``restarts`` uniformly sampled N-subsets.
    """
    sets = [frozenset(a) for a in sets]
    M = len(sets)
    if not 0 <= N <= M:
        raise ValueError(f"need 0 <= N <= M = {M}")
    if N == 0:
        return (), 0
    sizes = {len(a) for a in sets}
    if len(sizes) != 1:
        raise ValueError("all sets must have the same size r + 1")
    r = sizes.pop() - 1
    bound = union_guarantee(n, M, N, r)

    def union_size(idx: Sequence[int]) -> int:
        return len(frozenset().union(*(sets[i] for i in idx)))

    if math.comb(M, N) <= exhaustive_cap:
        best = min(combinations(range(M), N), key=union_size)
        return tuple(best), union_size(best)
    rng = random.Random(seed)
    best_idx: tuple[int, ...] = ()
    best_size = None
    for _ in range(restarts):
        idx = tuple(sorted(rng.sample(range(M), N)))
        size = union_size(idx)
        if best_size is None or size < best_size:
            best_idx, best_size = idx, size
    if best_size > bound:
        raise BoundNotMet(f"best union {best_size} above guaranteed {bound} after {restarts} samples")
    return best_idx, best_size


VARIANTS = ("p2", "pe", "m1m2", "rts2")


@dataclass(frozen=True)
class CorrectableSets:
    A: frozenset[int]
    B: frozenset[int]
    certificate_a: RecoverableSequence
    certificate_b: RecoverableSequence
    k_bound: int

    @property
    def certificates(self) -> tuple[RecoverableSequence, RecoverableSequence]:
        return (self.certificate_a, self.certificate_b)


def _pad(base: frozenset[int], pool: Sequence[int], size: int) -> frozenset[int]:
    out = set(base)
    for i in pool:
        if len(out) >= size:
            break
        out.add(i)
    return frozenset(out)


def _n1_sequence(
    F: RecoveryFamily,
    excluded: frozenset[int],
    d: int,
    r: int,
    prob: Fraction,
    seed: int,
    max_restarts: int | None,
) -> RecoverableSequence:
    """d - 1 free positions followed by N sequence entries whose recovery sets avoid them."""
    allowed = [j for j in range(F.n) if j not in excluded]
    m = len(allowed)
    m_prime = math.ceil(m * prob)
    N = bounds.n1(m, r, d, m_prime)
    if N == 0:
        free = tuple(allowed[: d - 1])
        return RecoverableSequence(free, (None,) * len(free), len(free))
    seq = find_recoverable_sequence(F, excluded, m_prime, 0, seed, max_restarts)
    padded = [
        _pad(F.gamma[j][a] - excluded, allowed, r + 1) for j, a in zip(seq.positions, seq.alphas)
    ]
    chosen, _ = select_small_union_subset(padded, N, m, seed=seed)
    covered = frozenset().union(*(padded[k] for k in chosen))
    free = tuple(j for j in allowed if j not in covered)[: d - 1]
    if len(free) < d - 1:
        raise RuntimeError("union bound left fewer than d - 1 free positions")
    picked = sorted(chosen)
    positions = free + tuple(seq.positions[k] for k in picked)
    alphas = (None,) * len(free) + tuple(seq.alphas[k] for k in picked)
    return RecoverableSequence(positions, alphas, len(free))


def disjoint_correctable_sets(
    F: RecoveryFamily,
    variant: str,
    d: int = 1,
    seed: int = 0,
    r: int | None = None,
    s: int | None = None,
    max_restarts: int | None = None,
) -> CorrectableSets:
    """Two disjoint position sets, each certified by a recoverable sequence.

    Sizes follow the two-phase argument of the chosen bound; ``r`` and ``s``
    default to the values read off the family.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    inferred_r, inferred_s = F.inferred_rs()
    r = inferred_r if r is None else r
    s = inferred_s if s is None else s
    t = F.t
    n = F.n

    def plain(prob: Fraction, excluded: frozenset[int], salt: int) -> RecoverableSequence:
        m = n - len(excluded)
        return find_recoverable_sequence(F, excluded, math.ceil(m * prob), 0, seed * 4 + salt, max_restarts)

    if variant in ("p2", "pe"):
        prob = bounds.p2(r, t, s) if variant == "p2" else bounds.pe(r, t, s)
        seq_a = plain(prob, frozenset(), 0)
        A = frozenset(seq_a.positions)
        seq_b = plain(prob, A, 1)
    elif variant == "m1m2":
        prob = bounds.pe(r, t, s)
        seq_a = _n1_sequence(F, frozenset(), d, r, prob, seed * 4, max_restarts)
        A = frozenset(seq_a.positions)
        seq_b = _n1_sequence(F, A, d, r, prob, seed * 4 + 1, max_restarts)
    else:
        seq_a = _graced_sequence(F, frozenset(), d, r, s, seed * 4, max_restarts)
        A = frozenset(seq_a.positions)
        seq_b = _graced_sequence(F, A, d, r, s, seed * 4 + 1, max_restarts)
    B = frozenset(seq_b.positions)
    return CorrectableSets(A, B, seq_a, seq_b, n - len(A) - len(B))


def _graced_sequence(
    F: RecoveryFamily,
    excluded: frozenset[int],
    d: int,
    r: int,
    s: int,
    seed: int,
    max_restarts: int | None,
) -> RecoverableSequence:
    """Sequence of length (d-1) + max_T ceil(m f~(m, d-1, r, T, s)) on the first T sets."""
    m = F.n - len(excluded)
    allowed = [j for j in range(F.n) if j not in excluded]
    if m < d - 1 or m == 0:
        return RecoverableSequence(tuple(allowed), (None,) * m, m)
    best_T, best = 0, 0
    for T in range(1, F.t + 1):
        if bounds.n_exact(r, T, s) > m:
            continue
        value = math.ceil(m * bounds.f_tilde(m, d - 1, r, T, s))
        if value > best:
            best_T, best = T, value
    if best_T == 0:
        free = tuple(allowed[: d - 1])
        return RecoverableSequence(free, (None,) * len(free), len(free))
    return find_recoverable_sequence(F.truncate(best_T), excluded, (d - 1) + best, d, seed, max_restarts)
