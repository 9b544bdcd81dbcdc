"""Characteristic polynomials, Aberth-Ehrlich root finding, convergence radii."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RootFindingError
from .recurrence import PoincareRecurrence

EPS = np.finfo(float).eps


class Polynomial:
    """Complex polynomial with ascending coefficients; trailing zeros are trimmed.

    The zero polynomial has no coefficients and degree -1.
    """

    def __init__(self, coefficients):
        c = [complex(v) for v in coefficients]
        while c and c[-1] == 0:
            c.pop()
        self.coefficients = np.array(c, dtype=complex)

    @classmethod
    def from_roots(cls, roots, leading=1.0) -> "Polynomial":
        c = np.array([1.0 + 0j])
        for r in roots:
            c = np.convolve(c, [-complex(r), 1.0])
        return cls(leading * c)

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coefficients.size == 0

    @property
    def leading(self) -> complex:
        return complex(self.coefficients[-1]) if self.coefficients.size else 0j

    def __call__(self, z):
        if self.is_zero:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return np.polynomial.polynomial.polyval(z, self.coefficients)

    def derivative(self) -> "Polynomial":
        if self.degree < 1:
            return Polynomial([])
        return Polynomial(self.coefficients[1:] * np.arange(1, self.degree + 1))

    def monic(self) -> "Polynomial":
        return Polynomial(self.coefficients / self.leading)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return np.array_equal(self.coefficients, other.coefficients)

    def __repr__(self) -> str:
        return f"Polynomial({self.coefficients.tolist()!r})"


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    multiplicities: tuple
    residuals: np.ndarray
    tol: float

    def __len__(self) -> int:
        return self.roots.size

    @property
    def max_modulus(self) -> float:
        return float(np.max(np.abs(self.roots))) if self.roots.size else 0.0


def characteristic_polynomial(rec: PoincareRecurrence) -> Polynomial:
    """``sigma^d - sum_j c_j sigma^{d-j}`` from the constant parts only."""
    d = rec.d
    coeffs = np.zeros(d + 1, dtype=complex)
    coeffs[d] = 1.0
    for j, cj in enumerate(rec.c, start=1):
        coeffs[d - j] = -cj
    return Polynomial(coeffs)


def backward_residual(p: Polynomial, z) -> np.ndarray:
    """``|p(z)| / sum_i |a_i| |z|^i``: relative backward error of a root estimate."""
    z = np.asarray(z, dtype=complex)
    num = np.abs(p(z))
    den = np.polynomial.polynomial.polyval(np.abs(z), np.abs(p.coefficients))
    return np.where(den > 0, num / np.where(den > 0, den, 1.0), num)


def _initial_guesses(c: np.ndarray) -> np.ndarray:
    n = c.size - 1
    # radius from the geometric mean of the root moduli, angles offset to avoid symmetry
    radius = abs(c[0] / c[-1]) ** (1.0 / n)
    if radius == 0 or not math.isfinite(radius):
        radius = 1.0
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return radius * np.exp(1j * angles)


def _aberth(p: Polynomial, tol: float, maxiter: int):
    c = p.coefficients
    dp = p.derivative()
    z = _initial_guesses(c)
    n = z.size
    best_z, best_res = z.copy(), np.full(n, np.inf)
    stalled = 0
    for _ in range(maxiter):
        pz = p(z)
        dpz = dp(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            corr = ratio / (1.0 - ratio * inv.sum(axis=1))
        corr = np.where(np.isfinite(corr), corr, 0.0)
        z = z - corr
        res = backward_residual(p, z)
        if res.max() < best_res.max():
            best_z, best_res = z.copy(), res
            stalled = 0
        else:
            stalled += 1
        small = np.all(np.abs(corr) <= 4 * EPS * np.maximum(np.abs(z), 1e-300))
        if res.max() <= tol and (small or stalled >= 5):
            return best_z, best_res, True
    return best_z, best_res, best_res.max() <= tol


def estimate_multiplicities(roots: np.ndarray, tol: float) -> tuple:
    """Cluster size of each root: m roots within ``10 tol^(1/m)`` (scaled by |z|)."""
    n = roots.size
    mult = [1] * n
    for i in range(n):
        dist = np.abs(roots - roots[i]) / max(1.0, abs(roots[i]))
        order = np.sort(dist)
        for m in range(n, 1, -1):
            if order[m - 1] <= 10 * tol ** (1.0 / m):
                mult[i] = m
                break
    return tuple(mult)


def roots(p: Polynomial, tol: float = 1e-12, maxiter: int = 500) -> RootSet:
    """All roots of ``p`` by simultaneous Aberth-Ehrlich iteration.

    Exact zero roots (vanishing low-order coefficients) are deflated first.
    Raises ``RootFindingError`` carrying the best estimates if any backward
    residual stays above ``tol``.
    """
    if p.degree < 1:
        raise ValueError("roots() needs a polynomial of degree >= 1")
    c = p.coefficients
    nz = int(np.argmax(c != 0))
    zeros = np.zeros(nz, dtype=complex)
    q = Polynomial(c[nz:])
    if q.degree == 0:
        found, res, ok = np.empty(0, dtype=complex), np.empty(0), True
    elif q.degree == 1:
        found = np.array([-q.coefficients[0] / q.coefficients[1]])
        res, ok = backward_residual(q, found), True
    else:
        found, res, ok = _aberth(q, tol, maxiter)
    all_roots = np.concatenate([zeros, found])
    all_res = np.concatenate([np.zeros(nz), res])
    if not ok:
        raise RootFindingError(
            f"root iteration did not reach residual {tol:g} (best {all_res.max():.3g})",
            best_roots=all_roots, best_residuals=all_res)
    return RootSet(all_roots, estimate_multiplicities(all_roots, tol), all_res, tol)


def convergence_radius(rec: PoincareRecurrence, tol: float = 1e-12) -> float:
    """``1 / max |x_i|`` over the characteristic roots; ``math.inf`` if all vanish."""
    rs = roots(characteristic_polynomial(rec), tol)
    top = rs.max_modulus
    return math.inf if top == 0 else 1.0 / top
