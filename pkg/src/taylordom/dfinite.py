"""Piecewise D-finite functions, their moment recurrences and companion systems.

An operator ``Op = sum_j p_j(x) D^j`` with ``p_j(x) = sum_i a_{i,j} x^i`` turns
into a recurrence ``sum_{l=-n}^{alpha} q_l(k) m_{k+l} = eps_k`` on the moments
``m_k = int x^k g(x) dx`` of any piecewise solution g.  The right-hand side
collects boundary terms at the jump points; its coefficients are fitted here
rather than derived, then validated on held-out indices.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .domination import minimal_constant
from .errors import DegenerateHeadError, FitError, IntegrationError, OperatorError
from .polyroots import EPS, Polynomial, estimate_multiplicities, roots
from .recurrence import CoefficientSequence, root_test_estimate

INTEGER_TOL = 1e-8
NOISE_FACTOR = 1e3
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class DifferentialOperator:
    """``sum_{j=0}^n p_j(x) (d/dx)^j``; ``coeffs[j]`` lists ``p_j`` in ascending powers of x."""

    def __init__(self, coeffs: Sequence[Sequence]):
        polys = [Polynomial(c) for c in coeffs]
        if not polys or polys[-1].is_zero:
            raise OperatorError("leading coefficient p_n is identically zero")
        self.p = tuple(polys)

    @property
    def n(self) -> int:
        return len(self.p) - 1

    @property
    def degrees(self) -> tuple:
        """``d_j``, or ``None`` where ``p_j`` vanishes identically."""
        return tuple(None if pj.is_zero else pj.degree for pj in self.p)

    @property
    def d_n(self) -> int:
        return self.p[-1].degree

    def a(self, i: int, j: int) -> complex:
        if not 0 <= j <= self.n:
            return 0j
        c = self.p[j].coefficients
        return complex(c[i]) if 0 <= i < c.size else 0j

    @property
    def is_real(self) -> bool:
        return all(np.all(pj.coefficients.imag == 0) for pj in self.p)

    def __repr__(self) -> str:
        return f"DifferentialOperator({[pj.coefficients.tolist() for pj in self.p]!r})"


@dataclass(frozen=True)
class Segment:
    initial: tuple
    at: Optional[float] = None


@dataclass(frozen=True)
class PiecewiseDFiniteFunction:
    """Solution of ``Op g = 0`` on each segment between ``a < x_1 < ... < x_p < b``.

    Each segment carries the values ``g, g', ..., g^(n-1)`` at an anchor point,
    by default its left end.  An anchor strictly inside the segment is needed
    when ``p_n`` vanishes at the left end.
    """

    operator: DifferentialOperator
    a: float
    b: float
    jumps: tuple = ()
    segments: tuple = field(default=())

    def __post_init__(self):
        pts = (self.a, *self.jumps, self.b)
        if any(x1 >= x2 for x1, x2 in zip(pts, pts[1:])):
            raise ValueError(f"points must be strictly increasing: {pts}")
        if len(self.segments) != len(self.jumps) + 1:
            raise ValueError(f"need {len(self.jumps) + 1} segments, got {len(self.segments)}")
        n = self.operator.n
        for i, seg in enumerate(self.segments):
            if len(seg.initial) != n:
                raise ValueError(f"segment {i}: need {n} initial values, got {len(seg.initial)}")
            lo, hi = pts[i], pts[i + 1]
            if seg.at is not None and not lo <= seg.at <= hi:
                raise ValueError(f"segment {i}: anchor {seg.at} outside [{lo}, {hi}]")

    @property
    def points(self) -> tuple:
        return (self.a, *self.jumps, self.b)


@dataclass(frozen=True)
class MomentSequence:
    values: np.ndarray
    errors: np.ndarray

    def __len__(self) -> int:
        return self.values.size

    def to_sequence(self) -> CoefficientSequence:
        return CoefficientSequence.from_complex(self.values, source="moments")

    def leading_zero_count(self) -> int:
        """Number of leading moments below ``NOISE_FACTOR`` times their error estimate."""
        small = np.abs(self.values) <= NOISE_FACTOR * self.errors
        return int(np.argmin(small)) if not small.all() else small.size

    def to_csv(self, fh=None) -> str:
        buf = io.StringIO() if fh is None else fh
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "m_k", "error_estimate"])
        for k, (m, e) in enumerate(zip(self.values, self.errors)):
            w.writerow([k, format_float(m), format_float(e)])
        return buf.getvalue() if fh is None else ""


def format_float(x) -> str:
    """17 significant digits; complex values as ``re+imj``."""
    if isinstance(x, complex) or np.iscomplexobj(x):
        x = complex(x)
        if x.imag != 0:
            return f"{x.real:.17g}{x.imag:+.17g}j"
        x = x.real
    return f"{float(x):.17g}"


def alpha_exponents(op: DifferentialOperator):
    """``alpha_j = d_j - j`` (None for vanishing p_j) and their maximum."""
    alphas = [None if dj is None else dj - j for j, dj in enumerate(op.degrees)]
    return alphas, max(a for a in alphas if a is not None)


def falling_factorial_poly(shift: int, j: int) -> np.ndarray:
    """Ascending coefficients in k of ``(k + shift)_j = prod_{t<j} (k + shift - t)``."""
    c = np.array([1.0 + 0j])
    for t in range(j):
        c = np.convolve(c, [shift - t, 1.0])
    return c


def falling_factorial(x, j: int):
    out = np.ones_like(np.asarray(x, dtype=float))
    for t in range(j):
        out = out * (x - t)
    return out


def q_poly(op: DifferentialOperator, ell: int) -> Polynomial:
    """``q_l(k) = sum_j (-1)^j a_{l+j, j} (k + l + j)_j``."""
    _, alpha = alpha_exponents(op)
    if not -op.n <= ell <= alpha:
        raise ValueError(f"ell={ell} outside [-n, alpha] = [{-op.n}, {alpha}]")
    total = np.zeros(op.n + 1, dtype=complex)
    for j in range(op.n + 1):
        a = op.a(ell + j, j)
        if a == 0:
            continue
        term = (-1) ** j * a * falling_factorial_poly(ell + j, j)
        total[:term.size] += term
    return Polynomial(total)


def poincare_condition(op: DifferentialOperator) -> bool:
    """``alpha_n >= alpha_j`` for every nonvanishing ``p_j``."""
    alphas, alpha = alpha_exponents(op)
    return alphas[op.n] == alpha


def epsilon_recurrence_coeffs(points: Sequence[float], n: int) -> tuple:
    """``b_1..b_tau`` with ``prod_l (sigma - x_l)^n = sigma^tau - sum_i b_i sigma^(tau-i)``."""
    c = Polynomial.from_roots([x for x in points for _ in range(n)]).coefficients
    tau = c.size - 1
    b = [-c[tau - i] for i in range(1, tau + 1)]
    if all(np.imag(v) == 0 for v in b):
        return tuple(float(np.real(v)) for v in b)
    return tuple(complex(v) for v in b)


# -- quadrature oracle -------------------------------------------------------

def _real_roots_in(p: Polynomial, lo: float, hi: float) -> list:
    if p.degree < 1:
        return []
    rs = roots(p, 1e-13).roots
    out = []
    for z in rs:
        if abs(z.imag) <= 1e-10 * max(1.0, abs(z)) and lo < z.real < hi:
            out.append(float(z.real))
    return out


def _vanishes_at(p: Polynomial, x: float) -> bool:
    scale = float(np.polynomial.polynomial.polyval(abs(x), np.abs(p.coefficients)))
    return abs(complex(p(x))) <= 1e-12 * scale


def _extension_integral(op, x_s: float, target: float, state: np.ndarray, K: int) -> np.ndarray:
    """Signed ``int_{x_s}^{target} x^k T(x) dx`` for the order-n Taylor polynomial T of g at x_s."""
    n = op.n
    derivs = list(state[:n])
    pn = complex(op.p[n](x_s))
    derivs.append(-sum(complex(op.p[j](x_s)) * state[j] for j in range(n)) / pn)
    half = 0.5 * (target - x_s)
    xs = x_s + half * (_GL_NODES + 1.0)
    h = xs - x_s
    T = sum(derivs[i] / math.factorial(i) * h ** i for i in range(n + 1))
    powers = xs[None, :] ** np.arange(K + 1)[:, None]
    return half * (powers * (T * _GL_WEIGHTS)[None, :]).sum(axis=1)


def _integrate_segment(op, seg_index, lo, hi, anchor, init, K, rtol, dtype):
    n = op.n
    pn = op.p[n]
    coeffs = [pj.coefficients if dtype is complex else pj.coefficients.real for pj in op.p]
    ks = np.arange(K + 1)
    width = hi - lo

    def rhs(x, y):
        out = np.empty_like(y)
        out[:n - 1] = y[1:n]
        pv = [np.polynomial.polynomial.polyval(x, c) if c.size else 0.0 for c in coeffs]
        out[n - 1] = -sum(pv[j] * y[j] for j in range(n)) / pv[n]
        out[n:] = x ** ks * y[0]
        return out

    y0 = np.concatenate([np.asarray(init, dtype=dtype), np.zeros(K + 1, dtype=dtype)])
    g_scale = max(1.0, float(np.max(np.abs(init))) if len(init) else 1.0)
    xmax = max(abs(lo), abs(hi), 1e-300)
    atol = np.concatenate([np.full(n, rtol * 1e-3 * g_scale),
                           rtol * 1e-3 * g_scale * width * np.minimum(xmax ** ks, 1e300)])
    total = np.zeros(K + 1, dtype=dtype)
    g_max = float(np.max(np.abs(init))) if len(init) else 0.0
    for target, sign in ((hi, 1.0), (lo, -1.0)):
        if target == anchor:
            continue
        stop = target
        singular_end = _vanishes_at(pn, target)
        if singular_end:
            stop = target - sign * 1e-7 * width
        sol = solve_ivp(rhs, (anchor, stop), y0, method="DOP853", rtol=rtol, atol=atol)
        if not sol.success:
            raise IntegrationError(f"segment {seg_index} [{lo}, {hi}]: {sol.message}", segment=seg_index)
        end = sol.y[:, -1]
        g_max = max(g_max, float(np.max(np.abs(sol.y[0]))))
        piece = end[n:]
        if singular_end:
            ext = _extension_integral(op, stop, target, end, K)
            piece = piece + (ext if dtype is complex else ext.real)
        # int_lo^hi = int_anchor^hi - int_anchor^lo
        total += sign * piece
    floor = 8 * EPS * width * np.minimum(xmax ** ks, 1e300) * max(g_max, 1e-300)
    return total, floor


def moment_quadrature(g: PiecewiseDFiniteFunction, K: int, tol: float = 1e-12) -> MomentSequence:
    """``m_0..m_K`` of g by per-segment ODE integration with augmented moment states.

    The moments are integrated alongside g with DOP853; the error estimate is
    the difference to a solve at 30x looser tolerance plus a rounding floor.
    """
    op = g.operator
    pts = g.points
    dtype = float
    if not op.is_real or any(np.iscomplexobj(np.asarray(s.initial)) and np.any(np.imag(s.initial))
                             for s in g.segments):
        dtype = complex
    rtol = min(max(tol * 1e-2, 3e-14), 1e-6)
    for i, seg in enumerate(g.segments):
        lo, hi = pts[i], pts[i + 1]
        inside = _real_roots_in(op.p[op.n], lo, hi)
        if inside:
            raise IntegrationError(f"segment {i} [{lo}, {hi}]: p_n vanishes at {inside}", segment=i)
        anchor = lo if seg.at is None else seg.at
        if _vanishes_at(op.p[op.n], anchor):
            raise IntegrationError(
                f"segment {i} [{lo}, {hi}]: p_n vanishes at the anchor {anchor}; give an interior anchor",
                segment=i)

    def solve(r):
        vals = np.zeros(K + 1, dtype=dtype)
        floor = np.zeros(K + 1)
        for i, seg in enumerate(g.segments):
            lo, hi = pts[i], pts[i + 1]
            anchor = lo if seg.at is None else seg.at
            init = [complex(v) if dtype is complex else float(np.real(v)) for v in seg.initial]
            v, f = _integrate_segment(op, i, lo, hi, anchor, init, K, r, dtype)
            vals += v
            floor += f
        return vals, floor

    fine, floor = solve(rtol)
    coarse, _ = solve(min(rtol * 30, 1e-6))
    err = np.abs(fine - coarse) + floor
    if np.any(err > tol * (1 + np.abs(fine))):
        k = int(np.argmax(err / (tol * (1 + np.abs(fine)))))
        raise IntegrationError(f"quadrature error estimate {err[k]:.3g} at k={k} exceeds tolerance {tol:g}")
    return MomentSequence(fine, err)


# -- moment recurrence ---------------------------------------------------------

def _moment(moments: np.ndarray, idx: int):
    return moments[idx] if idx >= 0 else 0.0


def recurrence_lhs(op: DifferentialOperator, moments, ks) -> tuple:
    """``sum_l q_l(k) m_{k+l}`` and ``max_l |q_l(k) m_{k+l}|`` for each k (negative indices read as 0)."""
    m = np.asarray(moments.values if isinstance(moments, MomentSequence) else moments)
    _, alpha = alpha_exponents(op)
    ks = np.asarray(list(ks))
    if ks.size and ks.max() + alpha >= m.size:
        raise ValueError(f"moments up to index {ks.max() + alpha} needed, have {m.size}")
    lhs = np.zeros(ks.size, dtype=complex)
    scale = np.zeros(ks.size)
    for ell in range(-op.n, alpha + 1):
        q = q_poly(op, ell)
        if q.is_zero:
            continue
        qk = q(ks.astype(float))
        idx = ks + ell
        mk = np.where(idx >= 0, m[np.clip(idx, 0, m.size - 1)], 0.0)
        term = qk * mk
        lhs += term
        scale = np.maximum(scale, np.abs(term))
    return lhs, scale


def _design_matrix(points, n: int, ks: np.ndarray) -> np.ndarray:
    cols = []
    kf = ks.astype(float)
    for x in points:
        for j in range(n):
            ff = falling_factorial(kf, j)
            expo = np.maximum(ks - j, 0)
            col = np.where(ks >= j, ff * np.power(complex(x), expo), 0.0)
            cols.append(col)
    return np.stack(cols, axis=1)


@dataclass(frozen=True)
class EpsilonFit:
    """Fitted jump-term coefficients ``c[l, j]`` of ``eps_k = sum x_l^(k-j) (k)_j c[l, j]``."""

    points: tuple
    n: int
    coefficients: np.ndarray
    residual: float
    k_fit: range
    k_holdout: range
    flagged: bool

    def epsilon(self, ks) -> np.ndarray:
        ks = np.asarray(list(ks))
        return _design_matrix(self.points, self.n, ks) @ self.coefficients.reshape(-1)

    __call__ = epsilon


def epsilon_fit(op: DifferentialOperator, points, moments, tol: float = 1e-8) -> EpsilonFit:
    """Least-squares fit of the jump terms on the first half of the usable k, validated on the rest."""
    _, alpha = alpha_exponents(op)
    m = moments.values if isinstance(moments, MomentSequence) else np.asarray(moments)
    points = tuple(points)
    n = op.n
    unknowns = len(points) * n
    usable = m.size - alpha
    if usable < 2 * unknowns:
        raise FitError(f"need at least {2 * unknowns} usable equations, have {usable}")
    split = usable // 2
    k_fit, k_hold = range(0, split), range(split, usable)
    ks_fit = np.arange(split)
    X = _design_matrix(points, n, ks_fit)
    y, _ = recurrence_lhs(op, m, ks_fit)
    norms = np.linalg.norm(X, axis=0)
    if np.any(norms == 0):
        raise FitError("a jump-term column vanishes on the fitting range")
    sol, _, rank, sv = np.linalg.lstsq(X / norms, y, rcond=None)
    if rank < unknowns or sv[-1] <= 1e-10 * sv[0]:
        raise FitError(f"jump-term system is rank deficient (rank {rank} < {unknowns}); coincident points?")
    coeffs = (sol / norms).reshape(len(points), n)
    if np.all(np.isreal(m)) and np.all(np.abs(coeffs.imag) <= 1e-12 * (1 + np.abs(coeffs.real))):
        coeffs = coeffs.real.astype(complex)
    fit = EpsilonFit(points, n, coeffs, 0.0, k_fit, k_hold, False)
    res = recurrence_residual(op, m, fit, k_hold)
    return EpsilonFit(points, n, coeffs, res, k_fit, k_hold, bool(res > tol))


def recurrence_residual(op: DifferentialOperator, moments, eps: Callable, k_range) -> float:
    """``max_k |LHS_k - eps_k| / (1 + max_l |q_l(k) m_{k+l}|)`` over ``k_range``."""
    ks = np.asarray(list(k_range))
    lhs, scale = recurrence_lhs(op, moments, ks)
    return float(np.max(np.abs(lhs - np.asarray(eps(ks))) / (1.0 + scale)))


def epsilon_self_residual(values, b: Sequence) -> float:
    """How far ``eps_{k+tau} = sum_{j<tau} b_{tau-j} eps_{k+j}`` is from holding on ``values``."""
    e = np.asarray(values)
    tau = len(b)
    if e.size <= tau:
        raise ValueError("need more than tau values")
    bb = np.asarray(b)
    worst = 0.0
    for k in range(e.size - tau):
        terms = np.array([bb[tau - j - 1] * e[k + j] for j in range(tau)])
        r = abs(e[k + tau] - terms.sum()) / (1.0 + max(abs(e[k + tau]), np.max(np.abs(terms))))
        worst = max(worst, r)
    return float(worst)


# -- companion system ----------------------------------------------------------

@dataclass(frozen=True)
class CompanionSystem:
    """``w(k+1) = M(k) w(k)`` with ``w(k) = (m_{k-n}..m_{k+alpha-1}, eps_k..eps_{k+tau-1})``."""

    operator: DifferentialOperator
    points: tuple
    tau: int
    b: tuple
    beta: tuple
    A: np.ndarray

    @property
    def moment_dim(self) -> int:
        return len(self.beta)

    @property
    def dimension(self) -> int:
        return self.moment_dim + self.tau

    def variable_matrix(self, k: int) -> np.ndarray:
        op = self.operator
        _, alpha = alpha_exponents(op)
        md = self.moment_dim
        Mk = self.A.astype(complex)
        qa = complex(q_poly(op, alpha)(float(k)))
        for s in range(md):
            Mk[md - 1, s] = -complex(q_poly(op, -op.n + s)(float(k))) / qa
        Mk[md - 1, md] = 1.0 / qa
        return Mk

    def raw_eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.A)

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues of A with each numerically split multiple eigenvalue replaced by its cluster mean."""
        return cluster_average(self.raw_eigenvalues())


def cluster_average(values: np.ndarray, tol: float = 16 * EPS) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    mult = estimate_multiplicities(values, tol)
    out = values.copy()
    done = np.zeros(values.size, dtype=bool)
    for i in np.argsort(-np.array(mult), kind="stable"):
        if done[i]:
            continue
        free = np.flatnonzero(~done)
        near = free[np.argsort(np.abs(values[free] - values[i]), kind="stable")][:mult[i]]
        out[near] = values[near].mean()
        done[near] = True
    return out


def companion_system(op: DifferentialOperator, points) -> CompanionSystem:
    if not poincare_condition(op):
        raise OperatorError("moment system is not of Poincare type: need alpha_n >= alpha_j for all j")
    points = tuple(points)
    n, dn = op.n, op.d_n
    b = epsilon_recurrence_coeffs(points, n)
    tau = len(b)
    lead = op.a(dn, n)
    beta = tuple(op.a(s, n) / lead for s in range(dn))
    A = np.zeros((dn + tau, dn + tau), dtype=complex)
    for s in range(dn - 1):
        A[s, s + 1] = 1.0
    if dn:
        A[dn - 1, :dn] = [-x for x in beta]
    for s in range(tau - 1):
        A[dn + s, dn + s + 1] = 1.0
    A[dn + tau - 1, dn:] = [b[tau - 1 - i] for i in range(tau)]
    if np.all(A.imag == 0):
        A = A.real
    return CompanionSystem(op, points, tau, b, beta, A)


def indicial_roots_infinity(op: DifferentialOperator, tol: float = 1e-12):
    """Roots of ``q_alpha`` and the largest positive integer among them (or None)."""
    if not poincare_condition(op):
        raise OperatorError("indicial equation at infinity needs alpha_n >= alpha_j")
    _, alpha = alpha_exponents(op)
    q = q_poly(op, alpha)
    if q.degree < 1:
        return np.empty(0, dtype=complex), None
    rs = roots(q, tol).roots
    ints = [round(z.real) for z in rs
            if abs(z.imag) <= INTEGER_TOL and abs(z.real - round(z.real)) <= INTEGER_TOL and round(z.real) >= 1]
    return rs, (max(ints) if ints else None)


def has_nonsingular_jump(op: DifferentialOperator, points) -> bool:
    return any(not _vanishes_at(op.p[op.n], x) for x in points)


def vanishing_bound(op: DifferentialOperator, points, nonsingular_jump_exists: bool) -> int:
    """Number of leading moments whose vanishing forces g = 0."""
    n, dn = op.n, op.d_n
    if nonsingular_jump_exists:
        return n * len(tuple(points)) + dn - n
    _, lam = indicial_roots_infinity(op)
    if lam is None:
        raise OperatorError("bound undefined without a positive integer indicial root at infinity")
    return lam + 1 + dn - n


def _order_at(p: Polynomial, xi: complex, tol: float) -> float:
    if p.is_zero:
        return math.inf
    q = p
    order = 0
    while q.degree >= 0:
        scale = float(np.polynomial.polynomial.polyval(abs(xi), np.abs(q.coefficients)))
        if abs(complex(q(xi))) > tol * max(scale, 1e-300):
            return order
        q = q.derivative()
        order += 1
    return math.inf


def fuchsian_check(op: DifferentialOperator, tol: float = 1e-8) -> bool:
    """Regular singular at infinity and at every finite root of ``p_n``."""
    if not poincare_condition(op):
        return False
    pn = op.p[op.n]
    if pn.degree < 1:
        return True
    rs = roots(pn, 1e-13)
    centers = cluster_average(rs.roots)
    seen = []
    for xi in centers:
        if any(abs(xi - s) <= 1e-6 * max(1, abs(xi)) for s in seen):
            continue
        seen.append(xi)
        m = _order_at(pn, xi, tol)
        for j in range(1, op.n + 1):
            if _order_at(op.p[op.n - j], xi, tol) < m - j:
                return False
    return True


@dataclass(frozen=True)
class StieltjesReport:
    R_star: float
    N: int
    tau: int
    Lambda: Optional[int]
    R: float
    minimal_constant: float
    root_test: float
    eigenvalues: np.ndarray


def stieltjes_domination(op: DifferentialOperator, points, moments: MomentSequence,
                         R: Optional[float] = None, window=None) -> StieltjesReport:
    """Radius ``R* = min 1/|xi|`` over nonzero eigenvalues of A and the empirical domination constant.

    ``N = max(tau - 1, Lambda) + d_n - n`` (Lambda read as 0 when absent); the
    constant reported is the smallest C with ``(N, R, C)`` domination on the
    available moments, which realizes S(k) of the maximal-disk argument.
    """
    if not fuchsian_check(op):
        raise OperatorError("operator is not Fuchsian")
    system = companion_system(op, points)
    eig = system.eigenvalues()
    nonzero = np.abs(eig)[np.abs(eig) > 0]
    R_star = float(1.0 / nonzero.max()) if nonzero.size else math.inf
    _, lam = indicial_roots_infinity(op)
    N = max(system.tau - 1, lam or 0) + op.d_n - op.n
    K = len(moments) - 1
    if N >= K:
        raise ValueError(f"need more than N+1={N + 1} moments, have {K + 1}")
    seq = moments.to_sequence()
    if not np.any(seq.nonzero[:N + 1] & (np.abs(moments.values[:N + 1]) > NOISE_FACTOR * moments.errors[:N + 1])):
        raise DegenerateHeadError(
            f"m_0..m_{N} all vanish; for a nonzero Fuchsian g this contradicts the vanishing bound")
    R_used = R if R is not None else (R_star if math.isfinite(R_star) else 1.0)
    C = minimal_constant(seq, N, R_used, K)
    rt = root_test_estimate(seq, window if window is not None else (K // 2, K))
    return StieltjesReport(R_star, N, system.tau, lam, R_used, C, rt, eig)
