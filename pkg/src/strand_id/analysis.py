"""Closed-form bounds, thresholds and expectations.

Everything is evaluated through log1p/expm1 so that n up to 64 and N up to
1e4 stay finite.  ``q`` below is always the per-position probability that a
position is erased in at least one of two reads, 2p - p^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from scipy.special import gammaln
from scipy.stats import binom

from strand_id.model import payload_length

LN2 = math.log(2.0)
DEGENERATE_TOL = 1e-12


class Clamped(NamedTuple):
    value: float
    raw: float
    flagged: bool


def _check(n: int, N: float, p: float) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {eps}")


def log_comb(n: int, r: int) -> float:
    return float(gammaln(n + 1) - gammaln(r + 1) - gammaln(n - r + 1))


def clamp_probability(x: float) -> Clamped:
    if 0.0 <= x <= 1.0:
        return Clamped(x, x, False)
    return Clamped(min(max(x, 0.0), 1.0), x, True)


def _ln_growth(n: int, p: float) -> float:
    """ln (1 + 2p - p^2)^n."""
    return n * math.log1p(2 * p - p * p)


def _ln_payload_agree(p: float) -> float:
    """ln of the per-position payload agreement probability 1 - (1-p)^2 / 2."""
    return math.log1p(-0.5 * (1 - p) ** 2)


# --- peeling ---------------------------------------------------------------

def u_cycle(n: int, N: int, p: float) -> float:
    _check(n, N, p)
    return 2.0 ** (-N * math.expm1(n * math.log1p(p * p)))


def cycle_prob_lower_bound(n: int, N: int, p: float) -> Clamped:
    """Lower bound on P(G has a cycle); flagged when it is vacuous."""
    u = u_cycle(n, N, p)
    if u >= 1.0 - DEGENERATE_TOL:
        return Clamped(0.0, -math.inf, True)
    return clamp_probability(1.0 - u / ((N << n) * (1.0 - u)))


# --- uniqueness ------------------------------------------------------------

def p_read_faulty(n: int, L: int, N: int, p: float) -> float:
    _check(n, N, p)
    ln_agree = L * _ln_payload_agree(p)
    ln_q = math.log(2 * p - p * p)
    ln_clean = 0.0
    for r in range(1, n + 1):
        pair = math.exp(r * ln_q + ln_agree)
        ln_clean += N * math.exp(log_comb(n, r)) * math.log1p(-pair)
    return -math.expm1(ln_clean)


def beta_th(n: int, N: int, p: float, eps1: float) -> float:
    _check(n, N, p)
    _check_eps(eps1)
    growth = math.expm1(_ln_growth(n, p))
    num = math.log2(N) + math.log2(growth) - (math.log2(eps1) - n) / N
    return num / (n * (1.0 - math.log2(1 + 2 * p - p * p)))


def beta_th_min_N(n: int, eps1: float) -> float:
    """Real-valued N minimising beta_th: ln(2^n / eps1)."""
    _check_eps(eps1)
    return n * LN2 - math.log(eps1)


def beta_th_bound(N: int, p: float, eps1: float) -> float:
    """n-free upper bound on beta_th."""
    g = math.log2(1 + 2 * p - p * p)
    return (math.log2(N) + g + (1 - math.log2(eps1)) / N) / (1 - g)


def n_th(n: int, p: float, eps2: float) -> float:
    _check(n, 1, p)
    _check_eps(eps2)
    root_minus_one = math.expm1(math.log1p(eps2 * 2.0 ** -n) / n)
    return math.log2(root_minus_one) / math.log2(p)


def n_th_sandwich(n: int, p: float, eps2: float) -> tuple[float, float]:
    """(lower, upper) bounds bracketing n_th."""
    _check(n, 1, p)
    _check_eps(eps2)
    d = math.log2(1 / p)
    return (n + math.log2(n / eps2)) / d, (n + math.log2(n / (eps2 * LN2))) / d


# --- pruning cost ----------------------------------------------------------

def expected_two_hop(n: int, N: int, p: float, r: int | None = None) -> float:
    """Mean two-hop size of a read, optionally given its erasure count ``r``."""
    _check(n, N, p)
    if r is None:
        return N * math.exp(_ln_growth(n, p)) - 1
    if not 0 <= r <= n:
        raise ValueError(f"erasure count {r} outside [0, {n}]")
    return N * 2.0**r * (1 + p) ** (n - r) - 1


def u0(n: int, N: int, p: float) -> float:
    _check(n, N, p)
    return math.exp(2 * math.log(N) + n * LN2 + _ln_growth(n, p))


def beta_0(n: int, N: int, p: float, eps1: float) -> float:
    _check(n, N, p)
    _check_eps(eps1)
    ln_arg = math.log(eps1) - n * LN2 - 2 * math.log(N) - math.log(math.expm1(_ln_growth(n, p)))
    return ln_arg / (n * _ln_payload_agree(p))


def _tail(n: int, p: float, ell: int) -> float:
    """P(Binomial(n, p) >= ell)."""
    if ell <= 0:
        return 1.0
    if ell > n:
        return 0.0
    return float(binom.sf(ell - 1, n, p))


def order_prob(n: int, N: int, p: float, ell: int) -> float:
    """P(an address has order 2^ell) before pruning starts."""
    _check(n, N, p)
    if not 0 <= ell <= n:
        raise ValueError(f"order exponent {ell} outside [0, {n}]")
    return _tail(n, p, ell) ** N - _tail(n, p, ell + 1) ** N


def order_size_prob(n: int, N: int, p: float, s: int) -> float:
    """Same as :func:`order_prob` indexed by the order itself; 0 off powers of two."""
    if s < 1 or s & (s - 1):
        return 0.0
    ell = s.bit_length() - 1
    return order_prob(n, N, p, ell) if ell <= n else 0.0


def u1(n: int, N: int, p: float) -> float:
    _check(n, N, p)
    total = 0.0
    for r in range(n + 1):
        total += (2.0**n * order_prob(n, N, p, r)) * N * 2.0**r * (1 + p) ** (n - r)
    return total


def single_erasure_prob(n: int, p: float) -> float:
    """P(a read of x has candidate set exactly {x, x ^ e_k}) for a fixed k."""
    return p * (1 - p) ** (n - 1)


def confusable_prob(n: int, N: int, p: float, k: int) -> float:
    """P(x is confusable with all k addresses of a given distance-1 set)."""
    _check(n, N, p)
    miss = math.log1p(-single_erasure_prob(n, p))
    out = 1.0
    for j in range(1, k + 1):
        out *= -math.expm1((N - j + 1) * miss) if N - j + 1 > 0 else 0.0
    return out


def n_0(n: int, p: float, base: float = 2.0) -> float:
    """Connectivity threshold on N for the confusability graph.

    ``base`` selects the logarithm; 2 is the default, ``math.e`` gives the
    natural-log reading.
    """
    _check(n, 1, p)
    ln_miss = math.log1p(-single_erasure_prob(n, p))
    return n - math.log(base) / ln_miss


def p_T(n: int, N: int, p: float) -> float:
    """Edge probability of the random n-cube that T dominates."""
    _check(n, N, p)
    return -math.expm1((N - n + 1) * math.log1p(-single_erasure_prob(n, p)))


def u2(n: int, N: int, p: float) -> float:
    _check(n, N, p)
    return N * math.exp(n * LN2 + n * math.log1p(p))


def kappa_bounds(n: int, p: float) -> tuple[float, float]:
    """((1+2p-p^2)/2)^n and ((1+p)/2)^n.

    The first is u0 / (N 2^n)^2 and is the larger of the two for every p in
    (0, 1); the second, divided by N, is u2 / (N 2^n)^2.
    """
    _check(n, 1, p)
    return ((1 + 2 * p - p * p) / 2) ** n, ((1 + p) / 2) ** n


# --- regions ---------------------------------------------------------------

@dataclass(frozen=True)
class AnalysisParams:
    n: int
    N: float
    p: float
    eps1: float = 0.01
    eps2: float = 0.01
    beta: float | None = None
    L: int | None = None

    def __post_init__(self):
        _check(self.n, self.N, self.p)
        _check_eps(self.eps1)
        _check_eps(self.eps2)
        if self.beta is None and self.L is None:
            raise ValueError("give beta or L")

    @property
    def payload_len(self) -> int:
        return self.L if self.L is not None else payload_length(self.n, self.beta)

    @property
    def beta_value(self) -> float:
        return self.beta if self.beta is not None else self.L / self.n


def _geq(a: float, b: float) -> bool:
    return a >= b - 1e-12 * max(1.0, abs(b))


def region_membership(params: AnalysisParams) -> str:
    """Tightest of R'', R', R that contains (beta, N); 'none' otherwise.

    Nesting is checked, not assumed: R'' is reported only if the point also
    lies in R' and R.
    """
    n, N, p = params.n, params.N, params.p
    b = params.beta_value
    in_r = _geq(b, beta_th(n, N, p, params.eps1)) and _geq(N, n_th(n, p, params.eps2))
    if not in_r:
        return "none"
    in_r1 = _geq(b, beta_0(n, N, p, params.eps1))
    if not in_r1:
        return "R"
    if _geq(N, n_0(n, p)):
        return "R''"
    return "R'"
