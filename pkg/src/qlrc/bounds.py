"""Closed-form quantities and upper bounds on k for (r, t, s) locally recoverable codes.

Every quantity is computed with :class:`fractions.Fraction`; ceilings and floors
appear only where the bound formulas themselves take them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence


class ExactConditionViolated(ValueError):
    """r < s (t - 1): no family can satisfy the exact (r, t, s)-condition."""


class InapplicableParams(ValueError):
    """The requested bound is undefined for the given parameters."""


def binom(a: int, b: int) -> int:
    """Binomial coefficient extended by 0 when a < b, a < 0 or b < 0."""
    if b < 0 or a < 0 or a < b:
        return 0
    return math.comb(a, b)


def _as_size(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise ArithmeticError(f"{what} = {value} is not an integer")
    return int(value)


def n_upper(r: int, L: int, s: int) -> int:
    """Upper bound L r + 1 on the union of L recovery sets of one position."""
    return L * r + 1


def n_exact(r: int, L: int, s: int) -> int:
    """Union size of L recovery sets of one position in an exact family; 1 when L = 0."""
    value = Fraction(2 * r - (L - 1) * s, 2) * L + 1
    return _as_size(value, f"N_e({r},{L},{s})")


def n_lower(r: int, L: int, s: int) -> int:
    """Lower bound on the union of L recovery sets with pairwise overlap <= s + 1."""
    if s == 0:
        raise ZeroDivisionError("lower union bound needs s >= 1")
    x = min(L, r // s + 1)
    value = Fraction(2 * r - (x - 1) * s, 2) * x + 1
    return _as_size(value, f"N_lower({r},{L},{s})")


def union_size_bounds(r: int, L: int, s: int) -> tuple[int, int, int]:
    """(lower, exact, upper) union sizes for L recovery sets."""
    if L < 1 or r < 1 or s < 0:
        raise ValueError("need L >= 1, r >= 1, s >= 0")
    return n_lower(r, L, s), n_exact(r, L, s), n_upper(r, L, s)


def p1(r: int, t: int) -> Fraction:
    if r < 1 or t < 1:
        raise ValueError("need r >= 1 and t >= 1")
    prod = Fraction(1)
    for l in range(1, t + 1):
        prod *= 1 + Fraction(1, l * r)
    return 1 - 1 / prod


def p2(r: int, t: int, s: int, best_prefix: bool = False) -> Fraction:
    """Alternating sum with upper union sizes on odd terms and lower on even terms.

    With ``best_prefix`` the maximum over t' <= t is returned instead; dropping
    recovery sets leaves a valid family, so this is still a valid probability bound.
    """
    if r < 1 or t < 1 or s < 1:
        raise ValueError("need r >= 1, t >= 1, s >= 1")
    if best_prefix:
        return max(p2(r, tt, s) for tt in range(1, t + 1))
    total = Fraction(0)
    for L in range(1, t + 1):
        if L % 2:
            total += Fraction(math.comb(t, L), n_upper(r, L, s))
        else:
            total -= Fraction(math.comb(t, L), n_lower(r, L, s))
    return total


def check_exact_params(r: int, t: int, s: int) -> None:
    if r < 1 or t < 1 or s < 0:
        raise ValueError("need r >= 1, t >= 1, s >= 0")
    if r < s * (t - 1):
        raise ExactConditionViolated(f"r={r} < s(t-1)={s * (t - 1)}")


def pe(r: int, t: int, s: int) -> Fraction:
    """Probability that a position precedes the rest of some recovery set (exact families)."""
    check_exact_params(r, t, s)
    return sum(
        (Fraction((-1) ** (L + 1) * math.comb(t, L), n_exact(r, L, s)) for L in range(1, t + 1)),
        Fraction(0),
    )


def f_tilde(n: int, d: int, r: int, t: int, s: int) -> Fraction:
    """Probability that a position is first in some recovery set while the whole
    union avoids the first ``d`` slots of a random ordering of ``n`` positions."""
    if t == 0:
        return Fraction(0)
    denom = binom(n, d)
    if denom == 0:
        raise ValueError(f"C({n},{d}) = 0")
    total = Fraction(0)
    for L in range(1, t + 1):
        ne = n_exact(r, L, s)
        total += Fraction((-1) ** (L + 1) * math.comb(t, L) * binom(n - ne, d), denom * ne)
    return total


def n1(n: int, r: int, d: int, M: int) -> int:
    """Largest N <= M whose small-union guarantee still leaves d - 1 free positions."""
    if n < max(r + 1, d - 1):
        return 0
    if M < 0:
        raise ValueError("M must be non-negative")
    budget = n - (d - 1)
    excess = M * (r + 1) - n
    best = 0
    for N in range(M + 1):
        quad = Fraction(N * (N - 1), M * (M - 1)) * excess if M >= 2 else Fraction(0)
        if N * (r + 1) - quad <= budget:
            best = N
    return best


def cal_n1(m: int, d_minus_1: int, r: int, t: int, s: int) -> int:
    """Max over T <= t with N_e(r, T, s) <= m of ceil(m * f_tilde(m, d-1, r, T, s))."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m < d_minus_1:
        return 0
    best = 0
    for T in range(1, t + 1):
        if n_exact(r, T, s) > m:
            continue
        best = max(best, math.ceil(m * f_tilde(m, d_minus_1, r, T, s)))
    return best


class BoundKind(str, Enum):
    THM_P2 = "thm_p2"
    THM_P2_PREFIX = "thm_p2_prefix"
    THM_PE = "thm_pe"
    THM_M1M2 = "thm_m1m2"
    THM_RTS2 = "thm_rts2"
    THM_CLASSICAL = "thm_classical"
    GG23 = "gg23"
    Q_SINGLETON = "q_singleton"
    GHSY = "ghsy"
    BTV = "btv"

    @classmethod
    def parse(cls, name: str) -> BoundKind:
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown bound {name!r}; choose from {', '.join(k.value for k in cls)}"
            ) from None


@dataclass(frozen=True)
class BoundParams:
    n: int
    d: int | None = None
    r: int | None = None
    t: int | None = None
    s: int | None = None
    k: int | None = None

    def __post_init__(self) -> None:
        for name, lo in (("n", 1), ("d", 1), ("r", 1), ("t", 1), ("s", 0)):
            value = getattr(self, name)
            if value is not None and value < lo:
                raise ValueError(f"{name} must be >= {lo}, got {value}")

    def need(self, *names: str) -> tuple[int, ...]:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise InapplicableParams(f"missing parameter(s): {', '.join(missing)}")
        return tuple(getattr(self, n) for n in names)


def two_phase(n: int, p: Fraction) -> int:
    """n - ceil(n p) - ceil((n - ceil(n p)) p)."""
    a = math.ceil(n * p)
    return n - a - math.ceil((n - a) * p)


def m1m2_sizes(n: int, d: int, r: int, t: int, s: int) -> tuple[int, int]:
    prob = pe(r, t, s)
    m1 = (d - 1) + n1(n, r, d, math.ceil(n * prob))
    m2 = (d - 1) + n1(n - m1, r, d, math.ceil((n - m1) * prob))
    return m1, m2


def rts2_sizes(n: int, d: int, r: int, t: int, s: int) -> tuple[int, int]:
    first = cal_n1(n, d - 1, r, t, s)
    rest = n - (d - 1) - first
    second = cal_n1(rest, d - 1, r, t, s) if rest >= 1 else 0
    return (d - 1) + first, (d - 1) + second


def _exact_params(p: BoundParams) -> tuple[int, int, int]:
    r, t, s = p.need("r", "t", "s")
    try:
        check_exact_params(r, t, s)
    except ExactConditionViolated as exc:
        raise InapplicableParams(str(exc)) from None
    return r, t, s


def _max_k(n: int, passes) -> int:
    best = None
    for k in range(n + 1):
        if passes(k):
            best = k
    if best is None:
        raise InapplicableParams("no k in [0, n] satisfies the distance inequality")
    return best


def _raw_bound(kind: BoundKind, p: BoundParams) -> int:
    n = p.n
    if kind is BoundKind.THM_P2 or kind is BoundKind.THM_P2_PREFIX:
        r, t, s = p.need("r", "t", "s")
        if s < 1:
            raise InapplicableParams("the general bound needs s >= 1")
        return two_phase(n, p2(r, t, s, best_prefix=kind is BoundKind.THM_P2_PREFIX))
    if kind is BoundKind.THM_PE:
        return two_phase(n, pe(*_exact_params(p)))
    if kind is BoundKind.THM_M1M2:
        r, t, s = _exact_params(p)
        (d,) = p.need("d")
        if d - 1 >= n:
            raise InapplicableParams("need d - 1 < n")
        m1, m2 = m1m2_sizes(n, d, r, t, s)
        return n - m1 - m2
    if kind is BoundKind.THM_RTS2:
        r, t, s = _exact_params(p)
        (d,) = p.need("d")
        if d >= n:
            raise InapplicableParams("need 1 <= d < n")
        a, b = rts2_sizes(n, d, r, t, s)
        return n - a - b
    if kind is BoundKind.THM_CLASSICAL:
        d, r, t = p.need("d", "r", "t")
        if n < max(r + 1, d - 1):
            raise InapplicableParams("need n >= max(r + 1, d - 1)")
        return n - (d - 1) - n1(n, r, d, math.ceil(n * p1(r, t)))
    if kind is BoundKind.GG23:
        d, r = p.need("d", "r")
        first = (n - (d - 1)) // (r + 1)
        return n - 2 * (d - 1) - first - (n - 2 * (d - 1) - first) // (r + 1)
    if kind is BoundKind.Q_SINGLETON:
        (d,) = p.need("d")
        return n - 2 * (d - 1)
    if kind is BoundKind.GHSY:
        d, r = p.need("d", "r")
        return _max_k(n, lambda k: d <= n - k - -(-k // r) + 2)
    if kind is BoundKind.BTV:
        d, r, t = p.need("d", "r", "t")
        return _max_k(n, lambda k: d <= n - sum((k - 1) // r**i for i in range(t + 1)))
    raise InapplicableParams(f"unsupported bound {kind}")


def evaluate_bound(kind: BoundKind | str, p: BoundParams) -> int:
    """Upper bound on k, floored at 0. Raises InapplicableParams when undefined."""
    if isinstance(kind, str):
        kind = BoundKind.parse(kind)
    return max(0, _raw_bound(kind, p))


SWEEP_VARIABLES = ("n", "d", "r", "t", "s")


@dataclass
class BoundTable:
    sweep_variable: str
    kinds: list[BoundKind]
    rows: list[tuple[int, dict[BoundKind, int | None]]] = field(default_factory=list)

    def column(self, kind: BoundKind | str) -> list[int | None]:
        if isinstance(kind, str):
            kind = BoundKind.parse(kind)
        return [cells[kind] for _, cells in self.rows]

    def to_csv(self) -> str:
        lines = [",".join([self.sweep_variable] + [k.value for k in self.kinds])]
        for value, cells in self.rows:
            out = [str(value)]
            out += ["NA" if cells[k] is None else str(cells[k]) for k in self.kinds]
            lines.append(",".join(out))
        return "\n".join(lines) + "\n"


def sweep(
    kinds: Sequence[BoundKind | str],
    template: BoundParams,
    variable: str,
    values: Iterable[int],
) -> BoundTable:
    if variable not in SWEEP_VARIABLES:
        raise ValueError(f"sweep variable must be one of {SWEEP_VARIABLES}")
    values = list(values)
    if not values:
        raise ValueError("empty sweep range")
    parsed = [BoundKind.parse(k) if isinstance(k, str) else k for k in kinds]
    table = BoundTable(variable, parsed)
    for value in values:
        params = replace(template, **{variable: value})
        cells: dict[BoundKind, int | None] = {}
        for kind in parsed:
            try:
                cells[kind] = evaluate_bound(kind, params)
            except (InapplicableParams, ZeroDivisionError):
                cells[kind] = None
        table.rows.append((value, cells))
    return table
