"""Poincare-type linear recurrences and overflow-safe unrolling.

A recurrence of order d has total coefficients ``c_j + psi_j(k)`` where the
``c_j`` are complex constants and every ``psi_j`` is a rational function of
the index k.  Solutions grow geometrically, so terms are stored as a complex
mantissa with ``0.5 <= |m| < 1`` and an integer binary exponent.  Rescaling by
powers of two is exact, which keeps long ratio computations (``|a_k| R^k``)
free of accumulated rounding in the magnitude.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import IdenticallyZeroTail, PoleError, TaylorDomError

LN2 = math.log(2.0)


def _as_complex_tuple(values) -> tuple:
    return tuple(complex(v) for v in values)


def _trim(coeffs: tuple) -> tuple:
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0:
        end -= 1
    return coeffs[:end]


@dataclass(frozen=True)
class ScaledComplex:
    """A complex number ``mantissa * 2**exponent``.

    ``log_magnitude`` and ``phase`` are derived views; zero is represented by a
    zero mantissa and has ``log_magnitude == -inf``.
    """

    mantissa: complex
    exponent: int = 0

    @classmethod
    def from_complex(cls, z) -> "ScaledComplex":
        z = complex(z)
        a = abs(z)
        if a == 0.0:
            return cls(0j, 0)
        if not math.isfinite(a):
            raise ValueError(f"cannot scale non-finite value {z!r}")
        f = math.frexp(a)[1]
        return cls(complex(math.ldexp(z.real, -f), math.ldexp(z.imag, -f)), f)

    @classmethod
    def from_log(cls, log_magnitude: float, phase: complex = 1.0) -> "ScaledComplex":
        if log_magnitude == -math.inf:
            return cls(0j, 0)
        phase = complex(phase)
        phase /= abs(phase)
        log2m = log_magnitude / LN2
        e = math.floor(log2m) + 1
        return cls(phase * 2.0 ** (log2m - e), e)

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0

    @property
    def log_magnitude(self) -> float:
        if self.mantissa == 0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent * LN2

    @property
    def log2_magnitude(self) -> float:
        if self.mantissa == 0:
            return -math.inf
        return math.log2(abs(self.mantissa)) + self.exponent

    @property
    def phase(self) -> complex:
        if self.mantissa == 0:
            return 1 + 0j
        return self.mantissa / abs(self.mantissa)

    def to_complex(self) -> complex:
        """Ordinary complex value; overflows to ``inf`` components when unrepresentable."""
        m = self.mantissa
        try:
            return complex(math.ldexp(m.real, self.exponent), math.ldexp(m.imag, self.exponent))
        except OverflowError:
            return complex(math.copysign(math.inf, m.real) if m.real else 0.0,
                           math.copysign(math.inf, m.imag) if m.imag else 0.0)


class RationalFunctionK:
    """Rational function of the recurrence index k with complex coefficients.

    Coefficient lists are in ascending powers of k.  Integer poles in
    ``0..k_max`` are located at construction and kept in ``poles``.
    """

    def __init__(self, numerator: Iterable = (0,), denominator: Iterable = (1,), k_max: int = 10_000):
        self.numerator = _trim(_as_complex_tuple(numerator))
        self.denominator = _trim(_as_complex_tuple(denominator))
        if not self.denominator:
            raise ValueError("denominator is identically zero")
        self.k_max = int(k_max)
        self.poles = tuple(int(k) for k in self._find_poles(0, self.k_max))

    @classmethod
    def zero(cls) -> "RationalFunctionK":
        return cls((0,), (1,), k_max=0)

    @classmethod
    def inverse_power(cls, gamma, power: int = 1) -> "RationalFunctionK":
        """``gamma / k**power``."""
        return cls((gamma,), (0,) * power + (1,))

    @property
    def is_zero(self) -> bool:
        return not self.numerator

    @property
    def is_decaying(self) -> bool:
        return len(self.numerator) < len(self.denominator)

    @property
    def num_degree(self) -> int:
        return len(self.numerator) - 1

    @property
    def den_degree(self) -> int:
        return len(self.denominator) - 1

    def _denominator_values(self, ks: np.ndarray):
        den = np.polynomial.polynomial.polyval(ks, np.array(self.denominator))
        scale = np.polynomial.polynomial.polyval(np.abs(ks), np.abs(np.array(self.denominator)))
        return den, scale

    def _find_poles(self, lo: int, hi: int) -> np.ndarray:
        if len(self.denominator) == 1 or hi < lo:
            return np.empty(0, dtype=np.int64)
        ks = np.arange(lo, hi + 1, dtype=float)
        den, scale = self._denominator_values(ks)
        hit = np.abs(den) <= 1e-12 * scale
        return np.arange(lo, hi + 1)[hit]

    def values(self, ks) -> np.ndarray:
        """Evaluate at integer indices ``ks``; raises ``PoleError`` on a pole."""
        ks = np.asarray(ks, dtype=float)
        if self.is_zero:
            return np.zeros(ks.shape, dtype=complex)
        den, scale = self._denominator_values(ks)
        bad = np.abs(den) <= 1e-12 * scale
        if np.any(bad):
            raise PoleError(int(ks[np.argmax(bad)]))
        return np.polynomial.polynomial.polyval(ks, np.array(self.numerator)) / den

    def __call__(self, k) -> complex:
        return complex(self.values(np.array([k]))[0])

    def __repr__(self) -> str:
        return f"RationalFunctionK({list(self.numerator)!r}, {list(self.denominator)!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunctionK):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))


@dataclass(frozen=True)
class PoincareRecurrence:
    """``a_k = sum_{j=1}^d [c_j + psi_j(k)] a_{k-j}`` for ``k >= d``."""

    c: tuple
    psi: tuple = field(default=())

    def __post_init__(self):
        c = _as_complex_tuple(self.c)
        if len(c) < 1:
            raise ValueError("recurrence order must be at least 1")
        psi = tuple(self.psi) if self.psi else tuple(RationalFunctionK.zero() for _ in c)
        if len(psi) != len(c):
            raise ValueError(f"expected {len(c)} perturbations, got {len(psi)}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "psi", psi)

    @property
    def d(self) -> int:
        return len(self.c)

    @property
    def class_poincare(self) -> bool:
        return all(p.is_decaying for p in self.psi)

    @property
    def constant_coefficients(self) -> bool:
        return all(p.is_zero for p in self.psi)

    def coefficients(self, ks) -> np.ndarray:
        """Total coefficients ``c_j + psi_j(k)`` as an array of shape ``(len(ks), d)``."""
        ks = np.asarray(ks)
        out = np.empty((ks.size, self.d), dtype=complex)
        for j, (cj, pj) in enumerate(zip(self.c, self.psi)):
            try:
                out[:, j] = cj + pj.values(ks)
            except PoleError as exc:
                raise PoleError(exc.k, j + 1) from None
        return out


class CoefficientSequence:
    """Scaled complex sequence ``a_0, a_1, ...`` stored as mantissa/exponent arrays."""

    def __init__(self, mantissa, exponent, source: str = ""):
        self.mantissa = np.asarray(mantissa, dtype=complex)
        self.exponent = np.asarray(exponent, dtype=np.int64)
        if self.mantissa.shape != self.exponent.shape or self.mantissa.ndim != 1:
            raise ValueError("mantissa and exponent must be 1-d arrays of equal length")
        self.source = source

    @classmethod
    def from_complex(cls, values, source: str = "") -> "CoefficientSequence":
        values = np.asarray(values, dtype=complex)
        mag = np.abs(values)
        _, e = np.frexp(mag)
        e = np.where(mag == 0, 0, e)
        m = np.ldexp(values.real, -e) + 1j * np.ldexp(values.imag, -e)
        return cls(m, e, source)

    @classmethod
    def from_scaled(cls, items: Sequence[ScaledComplex], source: str = "") -> "CoefficientSequence":
        return cls([s.mantissa for s in items], [s.exponent for s in items], source)

    def __len__(self) -> int:
        return self.mantissa.size

    def __getitem__(self, k) -> ScaledComplex:
        if isinstance(k, slice):
            return CoefficientSequence(self.mantissa[k], self.exponent[k], self.source)
        return ScaledComplex(complex(self.mantissa[k]), int(self.exponent[k]))

    @property
    def nonzero(self) -> np.ndarray:
        return self.mantissa != 0

    def log2_magnitudes(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log2(np.abs(self.mantissa)) + self.exponent

    def log_magnitudes(self) -> np.ndarray:
        return self.log2_magnitudes() * LN2

    def phases(self) -> np.ndarray:
        mag = np.abs(self.mantissa)
        return np.where(mag == 0, 1 + 0j, self.mantissa / np.where(mag == 0, 1, mag))

    def to_complex(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.ldexp(self.mantissa.real, self.exponent) + 1j * np.ldexp(self.mantissa.imag, self.exponent)

    def scaled_by_power(self, r: float) -> np.ndarray:
        """``log2(|a_k| r^k)`` for every k; ``-inf`` where ``a_k == 0``."""
        k = np.arange(len(self))
        return self.log2_magnitudes() + k * math.log2(r)

    def __repr__(self) -> str:
        return f"CoefficientSequence(len={len(self)}, source={self.source!r})"


def unroll(rec: PoincareRecurrence, initial, n: int) -> CoefficientSequence:
    """Terms ``a_0..a_n`` of the solution with the given initial data.

    Each step rescales the d addends by the largest binary exponent among the
    nonzero ones, sums them in ordinary complex arithmetic and renormalizes.
    """
    d = rec.d
    initial = [complex(v) for v in initial]
    if len(initial) != d:
        raise TaylorDomError(f"need {d} initial values, got {len(initial)}")
    if n < d:
        raise ValueError(f"n={n} must be at least the order d={d}")
    coeffs = rec.coefficients(np.arange(d, n + 1)).tolist()

    mant = []
    expo = []
    for v in initial:
        s = ScaledComplex.from_complex(v)
        mant.append(s.mantissa)
        expo.append(s.exponent)

    ldexp = math.ldexp
    frexp = math.frexp
    for idx, row in enumerate(coeffs):
        k = d + idx
        top = None
        for j in range(1, d + 1):
            if mant[k - j] != 0 and (top is None or expo[k - j] > top):
                top = expo[k - j]
        if top is None:
            mant.append(0j)
            expo.append(0)
            continue
        s = 0j
        for j in range(1, d + 1):
            m = mant[k - j]
            if m == 0:
                continue
            shift = expo[k - j] - top
            s += row[j - 1] * complex(ldexp(m.real, shift), ldexp(m.imag, shift))
        a = abs(s)
        if a == 0.0:
            mant.append(0j)
            expo.append(0)
            continue
        f = frexp(a)[1]
        mant.append(complex(ldexp(s.real, -f), ldexp(s.imag, -f)))
        expo.append(top + f)
    return CoefficientSequence(mant, expo, source=f"unroll(d={d})")


def _window_bounds(window, length: int) -> tuple:
    if isinstance(window, range):
        lo, hi = window.start, window.stop - 1
    else:
        lo, hi = window
    if hi >= length:
        raise ValueError(f"window end {hi} exceeds sequence length {length}")
    return max(int(lo), 1), int(hi)


def root_test_estimate(seq: CoefficientSequence, window) -> float:
    """``max_{k in window} |a_k|^{1/k}``, a windowed estimate of the limsup.

    ``window`` is an inclusive ``(lo, hi)`` pair or a ``range``; k = 0 is skipped.
    Raises ``IdenticallyZeroTail`` if every term in the window vanishes.
    """
    lo, hi = _window_bounds(window, len(seq))
    logs = seq.log2_magnitudes()[lo:hi + 1]
    if not np.any(np.isfinite(logs)):
        raise IdenticallyZeroTail(f"a_k = 0 for all k in {lo}..{hi}")
    ks = np.arange(lo, hi + 1)
    return float(np.max(np.exp2(logs / ks)))
