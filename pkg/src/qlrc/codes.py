"""Classical and CSS codes built from parity checks, product-code certificates,
distance oracles and the single-erasure recovery simulation."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import gf2
from .gf2 import BitMatrix, NotSelfOrthogonal, SubspaceBasis, popcount
from .recovery import RecoveryFamily
from .tanner import BipartiteGraph, check_exact, product, recovery_family, to_matrix, transpose

DEFAULT_DISTANCE_CAP = 22

# Parity-check matrix of the [7, 4, 3] Hamming code in its 7-row self-orthogonal form.
HAMMING7 = BitMatrix.from_rows(
    [
        [1, 1, 1, 1, 0, 0, 0],
        [1, 1, 0, 0, 0, 1, 1],
        [1, 0, 1, 0, 1, 0, 1],
        [1, 0, 0, 1, 1, 1, 0],
        [0, 1, 1, 0, 1, 1, 0],
        [0, 1, 0, 1, 1, 0, 1],
        [0, 0, 1, 1, 0, 1, 1],
    ]
)


class TooLarge(ValueError):
    """Exhaustive enumeration would exceed the configured dimension cap."""


class PreconditionFailed(ValueError):
    """Inputs do not meet the hypotheses of the product construction."""


class NoRecoveryFamily(ValueError):
    """The CSS code carries no recovery sets."""


class IndexOutOfRange(IndexError):
    """Position or recovery-set index outside the code."""


@dataclass(frozen=True)
class LinearCode:
    """Binary linear code ker(parity)."""

    n: int
    parity: BitMatrix
    dimension: int
    generator: SubspaceBasis

    @classmethod
    def from_generator(cls, vectors, n: int) -> LinearCode:
        basis = gf2.row_space_basis(BitMatrix(len(vectors), n, tuple(vectors)))
        parity = gf2.kernel_basis(basis.as_matrix()).as_matrix()
        return cls(n, parity, basis.dim, basis)

    def random_codeword(self, rng: random.Random) -> int:
        word = 0
        for g in self.generator:
            if rng.getrandbits(1):
                word ^= g
        return word


def classical_from_parity(H: BitMatrix) -> LinearCode:
    generator = gf2.kernel_basis(H)
    return LinearCode(H.cols, H, generator.dim, generator)


def _gray_min_weight(vectors: tuple[int, ...], accept_mask: int = -1) -> int | None:
    """Minimum weight of nonzero combinations whose coefficient vector meets ``accept_mask``."""
    best = None
    word = 0
    coeffs = 0
    for i in range(1, 1 << len(vectors)):
        flip = (i & -i).bit_length() - 1
        word ^= vectors[flip]
        coeffs ^= 1 << flip
        if coeffs & accept_mask:
            w = popcount(word)
            if best is None or w < best:
                best = w
                if w <= 1:
                    break
    return best


def min_distance(code: LinearCode, cap: int = DEFAULT_DISTANCE_CAP) -> int:
    """Minimum nonzero codeword weight by Gray-code enumeration; n + 1 for the zero code."""
    if code.dimension > cap:
        raise TooLarge(f"dimension {code.dimension} exceeds cap {cap}")
    best = _gray_min_weight(code.generator.vectors)
    return code.n + 1 if best is None else best


def _recovery_row(dual: SubspaceBasis, j: int, gamma: frozenset[int]) -> int | None:
    mask = sum(1 << i for i in gamma)
    for h in gf2.restrict_to_support(dual, mask):
        if (h >> j) & 1:
            return h
    return None


def verify_lrc(code: LinearCode, F: RecoveryFamily, samples: int = 100, seed: int = 0) -> bool:
    """True iff every c(j) is a function of c on Γ_l(j) minus j, for all j and l.

    Statically, some dual codeword (a combination of parity rows) must be
    supported inside Γ_l(j) and nonzero at j. The recovery rows found are then
    replayed on ``samples`` random codewords.
    """
    if F.n != code.n:
        raise ValueError(f"family has {F.n} positions, code has {code.n}")
    dual = gf2.row_space_basis(code.parity)
    rows: list[tuple[int, int]] = []
    for j, sets in enumerate(F.gamma):
        for g in sets:
            h = _recovery_row(dual, j, g)
            if h is None:
                return False
            rows.append((j, h))
    rng = random.Random(seed)
    for _ in range(samples):
        c = code.random_codeword(rng)
        for j, h in rows:
            rebuilt = popcount(c & h & ~(1 << j)) & 1
            if rebuilt != (c >> j) & 1:
                return False
    return True


def lrc_counterexample(code: LinearCode, j: int, gamma: frozenset[int]) -> int | None:
    """A codeword equal to 1 at j and 0 on the rest of gamma, if one exists."""
    others = sum(1 << i for i in gamma if i != j)
    keep = ((1 << code.n) - 1) & ~others
    for z in gf2.restrict_to_support(code.generator, keep):
        if (z >> j) & 1:
            return z
    return None


@dataclass(frozen=True)
class DistanceInfo:
    value: int
    exact: bool
    provenance: str


@dataclass(frozen=True)
class CssCode:
    """CSS code with H_X = H_Z = H."""

    n: int
    H: BitMatrix
    k: int
    distance: DistanceInfo | None = None
    recovery: RecoveryFamily | None = None


def css_from_self_orthogonal(H: BitMatrix, F: RecoveryFamily | None = None) -> CssCode:
    if not gf2.is_self_orthogonal(H):
        raise NotSelfOrthogonal("H H^T != 0, so H cannot serve as both H_X and H_Z")
    if F is not None and F.n != H.cols:
        raise ValueError("recovery family size does not match the code length")
    return CssCode(H.cols, H, H.cols - 2 * gf2.rank(H), recovery=F)


def css_min_distance(css: CssCode, cap: int = DEFAULT_DISTANCE_CAP) -> int:
    """Minimum weight over ker(H) minus row(H); n + 1 when k = 0."""
    if css.k == 0:
        return css.n + 1
    rows = gf2.row_space_basis(css.H).vectors
    logical = gf2.complement_in_kernel(css.H).vectors
    dim = len(rows) + len(logical)
    if dim > cap:
        raise TooLarge(f"ker(H) has dimension {dim}, above cap {cap}")
    # coefficients on the complement part mark words outside row(H)
    accept = ((1 << len(logical)) - 1) << len(rows)
    best = _gray_min_weight(rows + logical, accept)
    return css.n + 1 if best is None else best


def infer_rt(G: BipartiteGraph) -> tuple[int, int]:
    """(r, t) of a biregular graph: check degree minus one and bit degree."""
    check_deg = {len(a) for a in G.adjacency}
    bit_deg = {len(c) for c in G.bit_neighbors()}
    if len(check_deg) != 1 or len(bit_deg) != 1:
        raise PreconditionFailed("graph is not biregular")
    return check_deg.pop() - 1, bit_deg.pop()


def _check_factor(G: BipartiteGraph, r: int, t: int, name: str) -> None:
    if r % 2 == 0:
        raise PreconditionFailed(f"{name}: r = {r} must be odd")
    if t != r + 1:
        raise PreconditionFailed(f"{name}: t = {t} must equal r + 1 = {r + 1}")
    report = check_exact(G, r, t, 1)
    if not report.is_exact:
        raise PreconditionFailed(f"{name} is not ({r},{t},1)-exact: {report.first_violation()}")
    report = check_exact(transpose(G), t - 1, r + 1, 1)
    if not report.is_exact:
        raise PreconditionFailed(
            f"{name} transpose is not ({t - 1},{r + 1},1)-exact: {report.first_violation()}"
        )


@dataclass(frozen=True)
class AppendixCheck:
    lemma_id: str
    passed: bool
    dims: dict[str, int] = field(default_factory=dict)


def _appendix_checks(G1: BipartiteGraph, G2: BipartiteGraph, H: BitMatrix) -> list[AppendixCheck]:
    H1, H2 = to_matrix(G1), to_matrix(G2)
    try:
        U1, U2 = gf2.complement_in_kernel(H1), gf2.complement_in_kernel(H2)
        U1t, U2t = gf2.complement_in_kernel(H1.T), gf2.complement_in_kernel(H2.T)
    except NotSelfOrthogonal as exc:
        raise PreconditionFailed(f"factor check matrix: {exc}") from None
    n_vv = H1.cols * H2.cols
    phi = gf2.tensor_basis(U1, U2)
    phi = SubspaceBasis(H.cols, phi.vectors)
    phi_t = SubspaceBasis(H.cols, tuple(v << n_vv for v in gf2.tensor_basis(U1t, U2t)))
    rank_h = gf2.rank(H)
    row_h = gf2.row_space_basis(H)

    factors_ok = all(gf2.is_self_orthogonal(M) for M in (H1, H2, H1.T, H2.T))
    row_ok = gf2.is_self_orthogonal(H)
    in_kernel = all(H.matvec(v) == 0 for v in phi.vectors + phi_t.vectors)
    cross = gf2.intersection_dim(phi, phi_t)
    embedded = SubspaceBasis(H.cols, phi.vectors + phi_t.vectors) if cross == 0 else None
    with_rows = gf2.intersection_dim(embedded, row_h) if embedded is not None else -1
    room = H.cols - 2 * rank_h
    return [
        AppendixCheck("row_in_kernel", row_ok and factors_ok, {"rank_H": rank_h}),
        AppendixCheck(
            "phi_in_kernel", in_kernel, {"dim_phi": phi.dim, "dim_phi_T": phi_t.dim}
        ),
        AppendixCheck(
            "trivial_intersection",
            cross == 0 and with_rows == 0,
            {"phi_cap_phi_T": cross, "embedded_cap_row_H": with_rows},
        ),
        AppendixCheck(
            "rank_inequality",
            phi.dim + phi_t.dim <= room,
            {"embedded_dim": phi.dim + phi_t.dim, "n_minus_2rank": room},
        ),
    ]


def verify_appendix_subspaces(
    G1: BipartiteGraph, G2: BipartiteGraph, H: BitMatrix | None = None
) -> list[AppendixCheck]:
    """Certify the subspace facts behind the product dimension bound.

    ``H`` overrides the product check matrix (used to test that corrupting it is caught).
    """
    for name, G in (("G1", G1), ("G2", G2)):
        r, t = infer_rt(G)
        _check_factor(G, r, t, name)
    if H is None:
        H = to_matrix(product(G1, G2))
    return _appendix_checks(G1, G2, H)


@dataclass(frozen=True)
class ProductCertificate:
    """Parameters of a product code.

    ``k_lower`` is the dimension of the two embedded tensor subspaces, which sit
    independently inside ker(H) modulo row(H). ``k_lower_stated`` pairs each
    factor's V- and W-excess instead; it agrees on symmetric inputs such as
    Hamming x Hamming but can exceed ``k_actual`` (Hamming x K22 gives 1 > 0).
    """

    n: int
    n_formula_ok: bool
    k_lower: int
    k_lower_stated: int
    k_actual: int
    d_lower: int | None
    d_components: tuple[int | None, int | None, int | None, int | None]
    exact_params: tuple[int, int, int]
    product_exact: bool
    transpose_exact: bool
    appendix_report: list[AppendixCheck]

    @property
    def appendix_ok(self) -> bool:
        return all(c.passed for c in self.appendix_report)

    def summary(self) -> str:
        d = "uncomputed" if self.d_lower is None else str(self.d_lower)
        if self.product_exact and self.transpose_exact:
            exact = "({},{},{})".format(*self.exact_params)
        else:
            exact = "FAIL"
        return (
            f"n={self.n} k_lower={self.k_lower} k_actual={self.k_actual} d_lower={d} "
            f"exact={exact} appendix={'PASS' if self.appendix_ok else 'FAIL'}"
        )


def _distance_or_none(H: BitMatrix, cap: int) -> int | None:
    try:
        return min_distance(classical_from_parity(H), cap)
    except TooLarge:
        return None


def build_product_code(
    G1: BipartiteGraph,
    G2: BipartiteGraph,
    r1: int,
    t1: int,
    r2: int,
    t2: int,
    distance_cap: int = DEFAULT_DISTANCE_CAP,
) -> tuple[CssCode, ProductCertificate]:
    """CSS code of the product graph together with its parameter certificate."""
    _check_factor(G1, r1, t1, "G1")
    _check_factor(G2, r2, t2, "G2")
    G = product(G1, G2)
    H = to_matrix(G)
    H1, H2 = to_matrix(G1), to_matrix(G2)

    n = H.cols
    n_ok = n == G1.n_checks * G2.n_checks + G1.n_bits * G2.n_bits
    ev1, ew1 = H1.cols - 2 * gf2.rank(H1), H1.rows - 2 * gf2.rank(H1)
    ev2, ew2 = H2.cols - 2 * gf2.rank(H2), H2.rows - 2 * gf2.rank(H2)
    # dim of phi(U1 x U2) plus dim of phi^T(U1^T x U2^T), which lie independently in ker(H) \ row(H)
    k_lower = ev1 * ev2 + ew1 * ew2
    # the same four numbers paired per factor; not a valid bound in general
    k_stated = ev1 * ew1 + ev2 * ew2

    dists = (
        _distance_or_none(H1, distance_cap),
        _distance_or_none(H2, distance_cap),
        _distance_or_none(H1.T, distance_cap),
        _distance_or_none(H2.T, distance_cap),
    )
    d_lower = None if None in dists else min(dists)

    params = (r1 + r2 + 1, r1 + r2 + 2, 1)
    prod_exact = check_exact(G, *params).is_exact
    trans_exact = check_exact(transpose(G), *params).is_exact

    dist_info = None
    if d_lower is not None:
        dist_info = DistanceInfo(d_lower, False, "min of the four factor code distances")
    css = css_from_self_orthogonal(H, recovery_family(G))
    css = CssCode(css.n, css.H, css.k, dist_info, css.recovery)
    cert = ProductCertificate(
        n=n,
        n_formula_ok=n_ok,
        k_lower=k_lower,
        k_lower_stated=k_stated,
        k_actual=css.k,
        d_lower=d_lower,
        d_components=dists,
        exact_params=params,
        product_exact=prod_exact,
        transpose_exact=trans_exact,
        appendix_report=_appendix_checks(G1, G2, H),
    )
    return css, cert


def iterated_product(G: BipartiteGraph, m: int) -> BipartiteGraph:
    """G_1 = G and G_m = G_{m-1} ⊠ G_{m-1}."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = G
    for _ in range(m - 1):
        out = product(out, out)
    return out


def iterated_sizes(n_bits: int, n_checks: int, r: int, m: int) -> tuple[int, int, int, int]:
    """(|V|, |W|, r, t) of the m-th self-product of a (r, r+1, 1)-exact graph, without building it."""
    v, w = n_bits, n_checks
    for _ in range(m - 1):
        v, w, r = v * v + w * w, 2 * v * w, 2 * r + 1
    return v, w, r, r + 1


def _row_for(css: CssCode, j: int, l: int) -> int:
    if css.recovery is None:
        raise NoRecoveryFamily("CSS code has no recovery family attached")
    if not 0 <= j < css.n:
        raise IndexOutOfRange(f"position {j} out of range")
    sets = css.recovery.gamma[j]
    if not 0 <= l < len(sets):
        raise IndexOutOfRange(f"recovery index {l} out of range for position {j}")
    rows = [i for i, row in enumerate(css.H.data) if (row >> j) & 1]
    row = css.H.data[rows[l]]
    if set(gf2.support(row)) != sets[l]:
        raise ValueError(f"recovery set {l} of {j} is not the support of a check row")
    return row


def erasure_syndrome(css: CssCode, j: int, l: int, error: tuple[int, int]) -> tuple[int, int]:
    """(s_Z, s_X) of X_j^a Z_j^b against Z^h and X^h for the l-th check row h on j."""
    row = _row_for(css, j, l)
    a, b = error
    h_j = (row >> j) & 1
    return (a & h_j, b & h_j)


def simulate_erasure_recovery(css: CssCode, j: int, l: int, error: tuple[int, int]) -> bool:
    """Pauli-frame replay of recovering qubit j through recovery set l.

    The decoder reads (a, b) off the two syndrome bits and applies X_j^a Z_j^b
    again; recovery succeeds iff the residual frame is trivial.
    """
    a, b = error
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError("error components must be bits")
    s_z, s_x = erasure_syndrome(css, j, l, error)
    residual = (a ^ s_z, b ^ s_x)
    return residual == (0, 0)
