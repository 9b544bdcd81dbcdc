"""Zero counts of generating functions in disks, and the explicit zero/valence bounds."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .domination import DominationCertificate, check_domination
from .errors import BoundaryZeroSuspected, TailNotControlled
from .recurrence import CoefficientSequence

log = logging.getLogger(__name__)

EPS = np.finfo(float).eps
MAX_SAMPLES = 1 << 22


@dataclass(frozen=True)
class DiskBound:
    radius: float
    bound: float
    bound_int: int

    @classmethod
    def of(cls, radius: float, bound: float) -> "DiskBound":
        if radius <= 0:
            raise ValueError("radius must be positive")
        return cls(radius, bound, math.floor(bound))


@dataclass(frozen=True)
class ValenceBound:
    s: int
    p: int
    radius_hat: float


def certificate_tail_log2(seq: CoefficientSequence, cert: DominationCertificate, r: float, truncation: int) -> float:
    """log2 of ``sum_{k>T} |a_k| r^k`` bounded through the certificate.

    ``|a_k| <= C H R^-k`` with ``H = max_{i<=N} |a_i| R^i`` gives a geometric tail.
    """
    if not r < cert.R:
        raise TailNotControlled(f"radius {r} is not inside the certified radius {cert.R}")
    head = float(np.max(seq.scaled_by_power(cert.R)[:cert.N + 1]))
    q = r / cert.R
    return math.log2(cert.C) + head + (truncation + 1) * math.log2(q) - math.log2(1.0 - q)


def _scaled_coefficients(seq: CoefficientSequence, r: float, truncation: int):
    logs = seq.scaled_by_power(r)[:truncation + 1]
    top = float(np.max(logs))
    if top == -math.inf:
        return np.zeros(truncation + 1, dtype=complex), 0.0
    b = seq.phases()[:truncation + 1] * np.exp2(logs - top)
    return b, top


def winding_number(b: np.ndarray, samples: int = 256, tail: float = 0.0) -> int:
    """Winding number around 0 of ``sum_k b_k e^{ik theta}`` over one counterclockwise turn.

    Samples are doubled until every phase step is below pi/4.  ``tail`` is an
    absolute bound on the neglected part of the series; the count is refused
    when the sampled modulus drops below twice that bound or below the
    rounding floor of the evaluation.
    """
    T = b.size - 1
    n = max(int(samples), 8)
    while n <= T:
        n *= 2
    floor = max(2.0 * tail, 16 * EPS * (T + 1) * float(np.sum(np.abs(b))))
    while True:
        v = n * np.fft.ifft(b, n)
        mod = np.abs(v)
        if mod.min() <= floor:
            raise BoundaryZeroSuspected(
                f"min |f| on circle {mod.min():.3g} is within twice the tail/rounding bound {floor:.3g}")
        steps = np.angle(np.roll(v, -1) / v)
        if np.max(np.abs(steps)) < math.pi / 4:
            return int(round(float(np.sum(steps)) / (2 * math.pi)))
        n *= 2
        if n > MAX_SAMPLES:
            raise BoundaryZeroSuspected(f"phase steps still >= pi/4 with {MAX_SAMPLES} samples")


def _resolve_tail(seq, r, truncation, cert, tail_bound, top):
    if tail_bound is not None:
        if tail_bound == 0:
            return 0.0
        return float(tail_bound) / 2.0 ** top
    if cert is None:
        raise TailNotControlled("no certificate or explicit tail bound covers the truncation tail")
    rep = check_domination(seq, cert, truncation)
    if not rep.holds:
        raise TailNotControlled(f"certificate fails on the known coefficients at k={rep.worst_k}")
    return 2.0 ** (certificate_tail_log2(seq, cert, r, truncation) - top)


def count_zeros(seq: CoefficientSequence, r: float, truncation: Optional[int] = None, samples: int = 256,
                *, cert: Optional[DominationCertificate] = None, tail_bound: Optional[float] = None) -> int:
    """Number of zeros (with multiplicity) of ``sum a_k z^k`` in the open disk ``|z| < r``.

    The partial sum up to ``truncation`` is wound around the circle; the rest
    of the series is controlled either by an explicit absolute ``tail_bound``
    (0 for polynomials) or by a domination certificate valid beyond ``r``.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    T = len(seq) - 1 if truncation is None else int(truncation)
    if T >= len(seq):
        raise ValueError(f"truncation {T} exceeds the {len(seq)} available coefficients")
    b, top = _scaled_coefficients(seq, r, T)
    tail = _resolve_tail(seq, r, T, cert, tail_bound, top)
    return winding_number(b, samples, tail)


def roytwarf_disk_bounds(cert: DominationCertificate) -> list:
    """Zero-count bounds in the disks of radii R/4, R/(2 max(C,2)), R/(2^{3N} max(C,2))."""
    N, R, C = cert.N, cert.R, cert.C
    cc = max(C, 2.0)
    return [
        DiskBound.of(R / 4, 5 * N + math.log(2 + C) / math.log(5 / 4)),
        DiskBound.of(R / (2 * cc), 5 * N + 10),
        DiskBound.of(R / (2.0 ** (3 * N) * cc), N),
    ]


def sp_valence_bound(d: int, K: float, rho: float, s: int) -> ValenceBound:
    """Radius in which a solution of a ``|c_j(k)| <= K rho^j`` recurrence is (s, s+d+1)-valent."""
    if s < 0 or K <= 0 or rho <= 0:
        raise ValueError("need s >= 0, K > 0, rho > 0")
    p = s + d + 1
    return ValenceBound(s, p, (1.0 / rho) / ((2 * K + 2) ** d * 2.0 ** p))


def subtract_polynomial(seq: CoefficientSequence, poly) -> CoefficientSequence:
    """Series of ``f - P`` for a polynomial ``P`` given by ascending coefficients."""
    poly = np.asarray(poly, dtype=complex)
    if poly.size > len(seq):
        raise ValueError("polynomial degree exceeds the series length")
    head = seq[:poly.size].to_complex() - poly
    low = CoefficientSequence.from_complex(head)
    return CoefficientSequence(
        np.concatenate([low.mantissa, seq.mantissa[poly.size:]]),
        np.concatenate([low.exponent, seq.exponent[poly.size:]]),
        source=seq.source)


def count_solutions(seq: CoefficientSequence, poly, radius: float, truncation: Optional[int] = None,
                    samples: int = 256, *, cert: Optional[DominationCertificate] = None,
                    tail_bound: Optional[float] = None) -> int:
    """Number of solutions of ``f(z) = P(z)`` in ``|z| < radius``."""
    T = len(seq) - 1 if truncation is None else int(truncation)
    if tail_bound is None:
        if cert is None:
            raise TailNotControlled("no certificate or explicit tail bound covers the truncation tail")
        rep = check_domination(seq, cert, T)
        if not rep.holds:
            raise TailNotControlled(f"certificate fails on the known coefficients at k={rep.worst_k}")
        tail_bound = 2.0 ** certificate_tail_log2(seq, cert, radius, T)
    return count_zeros(subtract_polynomial(seq, poly), radius, T, samples, tail_bound=tail_bound)


def random_polynomials(s: int, trials: int, seed) -> np.ndarray:
    """``trials`` coefficient vectors of degree <= s, uniform in the unit disk."""
    rng = np.random.default_rng(seed)
    rad = np.sqrt(rng.random((trials, s + 1)))
    ang = 2 * np.pi * rng.random((trials, s + 1))
    return rad * np.exp(1j * ang)


def sp_valence_test(seq: CoefficientSequence, s: int, radius: float, trials: int, seed=0,
                    truncation: Optional[int] = None, samples: int = 256, *,
                    cert: Optional[DominationCertificate] = None, tail_bound: Optional[float] = None) -> int:
    """Largest number of solutions of ``f = P`` in the disk over random ``P`` of degree <= s."""
    log.info("sp_valence_test: s=%d radius=%g trials=%d seed=%r", s, radius, trials, seed)
    worst = 0
    for P in random_polynomials(s, trials, seed):
        worst = max(worst, count_solutions(seq, P, radius, truncation, samples, cert=cert, tail_bound=tail_bound))
    return worst
