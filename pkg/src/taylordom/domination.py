"""Taylor domination certificates and their empirical verification.

A sequence has ``(N, R, S(k))`` domination when ``|a_k| R^k <= S(k) max_{i<=N}
|a_i| R^i`` for every ``k > N``.  All comparisons here are done on base-2
logarithms of the scaled terms with an additive slack of 1e-12.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateHeadError, NHatNotCertified, TaylorDomError
from .polyroots import Polynomial, convergence_radius, roots
from .recurrence import CoefficientSequence, PoincareRecurrence, RationalFunctionK, unroll

log = logging.getLogger(__name__)

SLACK = 1e-12
PROVENANCES = ("main-theorem", "poincare", "turan-empirical", "user")


class TailDominatesWarning(UserWarning):
    """The supremum of a rescaled sequence is attained at the end of the scan."""


@dataclass(frozen=True)
class DominationCertificate:
    N: int
    R: float
    C: float
    provenance: str = "user"

    def __post_init__(self):
        if self.N < 0:
            raise ValueError(f"N must be >= 0, got {self.N}")
        if not (0 < self.R < math.inf):
            raise ValueError(f"R must be positive and finite, got {self.R}")
        if not self.C > 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")


@dataclass(frozen=True)
class DominationReport:
    holds: bool
    worst_k: int
    worst_ratio: float
    k_checked: range
    worst_log2_ratio: float = 0.0


def _head_log2(seq: CoefficientSequence, N: int, R: float) -> float:
    if len(seq) <= N:
        raise ValueError(f"sequence of length {len(seq)} does not cover the head 0..{N}")
    head = np.max(seq.scaled_by_power(R)[:N + 1])
    if head == -math.inf:
        raise DegenerateHeadError(f"a_0..a_{N} all vanish")
    return float(head)


def _log2_ratios(seq, N, R, k_max, log2_weight=None):
    if k_max < N + 1:
        raise ValueError(f"k_max={k_max} must be at least N+1={N + 1}")
    if len(seq) <= k_max:
        raise ValueError(f"sequence of length {len(seq)} does not cover k_max={k_max}")
    head = _head_log2(seq, N, R)
    body = seq.scaled_by_power(R)[N + 1:k_max + 1] - head
    if log2_weight is not None:
        body = body - log2_weight(np.arange(N + 1, k_max + 1))
    return body


def _report(body: np.ndarray, N: int, k_max: int) -> DominationReport:
    i = int(np.argmax(body))
    worst = float(body[i])
    with np.errstate(over="ignore"):
        ratio = float(np.exp2(worst))
    return DominationReport(
        holds=worst * math.log(2) <= SLACK,
        worst_k=N + 1 + i,
        worst_ratio=ratio,
        k_checked=range(N + 1, k_max + 1),
        worst_log2_ratio=worst,
    )


def check_domination(seq: CoefficientSequence, cert: DominationCertificate, k_max: int) -> DominationReport:
    """Largest ``|a_k| R^k / (C max_{i<=N} |a_i| R^i)`` over ``N < k <= k_max``."""
    body = _log2_ratios(seq, cert.N, cert.R, k_max) - math.log2(cert.C)
    return _report(body, cert.N, k_max)


def minimal_constant(seq: CoefficientSequence, N: int, R: float, k_max: int) -> float:
    """Smallest C for which ``(N, R, C)`` domination holds on ``N < k <= k_max``."""
    return float(np.exp2(np.max(_log2_ratios(seq, N, R, k_max))))


def class_membership_K(rec: PoincareRecurrence, rho: float, k_range) -> float:
    """Smallest K with ``|c_j + psi_j(k)| <= K rho^j`` for all j and all k in ``k_range``."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    ks = np.asarray(list(k_range) if not isinstance(k_range, np.ndarray) else k_range)
    if ks.size == 0:
        raise ValueError("empty k_range")
    coeffs = np.abs(rec.coefficients(ks))
    weights = rho ** np.arange(1, rec.d + 1, dtype=float)
    return float(np.max(coeffs / weights))


def main_theorem_certificate(rec: PoincareRecurrence, K: float, rho: float) -> DominationCertificate:
    """``(d-1, 1/(rho (2K+2)), (2K+2)^(d-1))`` for a recurrence with ``|c_j(k)| <= K rho^j``."""
    eta = 2.0 * K + 2.0
    return DominationCertificate(rec.d - 1, 1.0 / (rho * eta), eta ** (rec.d - 1), "main-theorem")


def _psi_envelope_start(psi: RationalFunctionK, R_pow: float, bound: float, tol: float,
                        k_from: int, k_probe: int) -> Optional[int]:
    """First k0 >= k_from such that ``|psi(k)| R^j <= bound`` provably for all k >= k0.

    Beyond every root modulus r_i of the denominator, ``|psi(k)|`` is at most
    ``sum |p_i| k^i / (|q_lead| prod (k - r_i))``, and each term of that sum is
    decreasing in k because the numerator degree is below the denominator degree.
    """
    if psi.is_zero:
        return k_from
    den = Polynomial(psi.denominator)
    den_roots = np.abs(roots(den, tol).roots) if den.degree >= 1 else np.empty(0)
    start = max(k_from, math.floor(den_roots.max(initial=0.0)) + 1)
    num_abs = np.abs(np.array(psi.numerator))
    lead = abs(den.leading)

    def envelope(k):
        return np.polynomial.polynomial.polyval(k, num_abs) / (lead * np.prod(k - den_roots))

    k = start
    # the envelope is monotone, so doubling then bisecting finds its crossing
    if envelope(k) * R_pow <= bound:
        return k
    hi = k
    while envelope(hi) * R_pow > bound:
        hi *= 2
        if hi > k_probe:
            return None
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if envelope(mid) * R_pow <= bound:
            hi = mid
        else:
            lo = mid
    return hi


def n_hat(rec: PoincareRecurrence, R: float, tol: float = 1e-12, k_probe: int = 1_000_000) -> int:
    """Smallest n with ``|psi_j(k)| R^j <= 2^d`` for all j and every recurrence index k > n.

    Only indices ``k >= d`` enter the recurrence, so the quantifier ranges over
    those.  The finite scan is closed off by a monotone rational envelope.
    """
    d = rec.d
    bound = 2.0 ** d
    certified_from = d
    for j, psi in enumerate(rec.psi, start=1):
        if psi.is_zero:
            continue
        if not psi.is_decaying:
            raise TaylorDomError(f"psi_{j} does not decay; recurrence is not of Poincare class")
        k0 = _psi_envelope_start(psi, R ** j, bound, tol, d, k_probe)
        if k0 is None:
            raise NHatNotCertified(
                f"envelope for psi_{j} stays above 2^{d} up to k_probe={k_probe}",
                best_bound=k_probe)
        certified_from = max(certified_from, k0)
    if certified_from == d:
        return 0
    ks = np.arange(d, certified_from)
    failing = np.zeros(ks.size, dtype=bool)
    for j, psi in enumerate(rec.psi, start=1):
        if psi.is_zero:
            continue
        den_vals = np.polynomial.polynomial.polyval(ks.astype(float), np.array(psi.denominator))
        num_vals = np.polynomial.polynomial.polyval(ks.astype(float), np.array(psi.numerator))
        with np.errstate(divide="ignore", invalid="ignore"):
            mag = np.where(den_vals == 0, np.inf, np.abs(num_vals / den_vals))
        failing |= mag * R ** j > bound
    if not failing.any():
        return 0
    return int(ks[failing][-1])


def poincare_certificate(rec: PoincareRecurrence, tol: float = 1e-12, k_probe: int = 1_000_000):
    """``(N_hat, (N_hat + d, 2^-(d+3) R, 2^((d+3) N)))`` for a Poincare-class recurrence."""
    if not rec.class_poincare:
        raise TaylorDomError("recurrence is not of Poincare class (some psi_j does not decay)")
    R = convergence_radius(rec, tol)
    if math.isinf(R):
        raise TaylorDomError("all characteristic roots vanish; no finite radius R")
    nh = n_hat(rec, R, tol, k_probe)
    d = rec.d
    N = nh + d
    return nh, DominationCertificate(N, R * 2.0 ** -(d + 3), 2.0 ** ((d + 3) * N), "poincare")


def turan_empirical(rec: PoincareRecurrence, initial, k_max: int, tol: float = 1e-12) -> float:
    """``sup_{d<k<=k_max} |a_k| R^k / (k^d max_{i<=d} |a_i| R^i)`` with R the convergence radius."""
    if not rec.constant_coefficients:
        raise TaylorDomError("turan_empirical needs constant coefficients")
    d = rec.d
    R = convergence_radius(rec, tol)
    if math.isinf(R):
        raise TaylorDomError("all characteristic roots vanish")
    seq = unroll(rec, initial, k_max)
    body = _log2_ratios(seq, d, R, k_max, log2_weight=lambda k: d * np.log2(k))
    return float(np.exp2(np.max(body)))


def rescale_certificate(cert, R_prime: float, *, S: Optional[Callable] = None,
                        envelope=None, k_scan: int = 10_000) -> DominationCertificate:
    """Turn ``(N, R, S(k))`` domination into ``(N, R', C)`` with ``C = M rho^-N``.

    ``cert`` is either a ``DominationCertificate`` (constant S = C) or a pair
    ``(N, R)`` with ``S`` a vectorized callable.  ``M = sup_{k>0} rho^k S(k)``
    is scanned on ``1..k_scan``; ``envelope`` gives nonnegative ascending
    polynomial coefficients E with ``S(k) <= E(k)`` beyond the scan, which
    closes off the supremum.  Without it a ``TailDominatesWarning`` is emitted
    when the scanned maximum sits at the end of the scan.
    """
    if isinstance(cert, DominationCertificate):
        N, R = cert.N, cert.R
        C0 = cert.C
        S = lambda k: np.full(np.shape(k), C0, dtype=float)
        envelope = [C0]
    else:
        N, R = cert
        if S is None:
            raise ValueError("S must be supplied with an (N, R) pair")
    if not 0 < R_prime < R:
        raise ValueError(f"R_prime={R_prime} must lie in (0, R={R})")
    rho = R_prime / R
    log_rho = math.log(rho)
    ks = np.arange(1, k_scan + 1)
    with np.errstate(divide="ignore"):
        logs = ks * log_rho + np.log(np.asarray(S(ks), dtype=float))
    i = int(np.argmax(logs))
    M_log = float(logs[i])
    if envelope is not None:
        E = np.abs(np.asarray(envelope, dtype=float))
        deg = E.size - 1
        # rho^k E(k) is decreasing once k >= deg / log(1/rho)
        k_turn = max(k_scan + 1, math.ceil(deg / -log_rho) + 1)
        tail_ks = np.arange(k_scan + 1, k_turn + 1)
        with np.errstate(divide="ignore"):
            tail = tail_ks * log_rho + np.log(np.polynomial.polynomial.polyval(tail_ks, E))
        M_log = max(M_log, float(np.max(tail)))
    elif i >= ks.size - 1 or logs[-1] > M_log - 1e-9:
        warnings.warn(f"rho^k S(k) is still maximal at k={k_scan}; M is a scanned lower estimate",
                      TailDominatesWarning, stacklevel=2)
    return DominationCertificate(N, R_prime, math.exp(M_log - N * log_rho), "user")


def biernacki_check(seq: CoefficientSequence, p: int, R: float, A: float, k_max: int) -> DominationReport:
    """Domination with ``S(k) = (A k / p)^(2p)`` and head ``0..p``."""
    weight = lambda k: 2 * p * np.log2(A * k / p)
    return _report(_log2_ratios(seq, p, R, k_max, log2_weight=weight), p, k_max)


def biernacki_minimal_A(seq: CoefficientSequence, p: int, R: float, k_max: int) -> float:
    """Smallest A for which ``biernacki_check`` holds on ``p < k <= k_max``."""
    body = _log2_ratios(seq, p, R, k_max)
    ks = np.arange(p + 1, k_max + 1)
    return float(np.max(p / ks * np.exp2(body / (2 * p))))
