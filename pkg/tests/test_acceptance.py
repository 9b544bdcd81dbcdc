"""The ten acceptance criteria, each reporting one pass/fail line."""
import filecmp
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

import corpus
from corpus import PHI
from taylordom.dfinite import (companion_system, epsilon_fit, has_nonsingular_jump, moment_quadrature,
                               stieltjes_domination, vanishing_bound)
from taylordom.domination import (check_domination, class_membership_K, main_theorem_certificate,
                                  poincare_certificate)
from taylordom.errors import OperatorError
from taylordom.polyroots import Polynomial, roots
from taylordom.recurrence import CoefficientSequence, PoincareRecurrence, RationalFunctionK, root_test_estimate, unroll
from taylordom.zeros import count_solutions, count_zeros, roytwarf_disk_bounds, sp_valence_test

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _cplx(rng, size=None, scale=1.0):
    return scale * (rng.normal(size=size) + 1j * rng.normal(size=size))


def _random_psi(rng):
    kind = rng.integers(3)
    if kind == 0:
        return RationalFunctionK.zero()
    if kind == 1:
        return RationalFunctionK.inverse_power(complex(_cplx(rng)), int(rng.integers(1, 3)))
    # gamma / (k + beta) with beta > 0 keeps the poles off the integers we visit
    return RationalFunctionK([complex(_cplx(rng))], [rng.uniform(0.1, 5), 1])


def test_criterion_1_main_theorem(record_criterion):
    rng = np.random.default_rng(20240101)
    k_max = 2000
    worst = -math.inf
    violations = 0
    t0 = time.perf_counter()
    for _ in range(200):
        d = int(rng.integers(1, 5))
        c = tuple(complex(v) for v in _cplx(rng, d))
        psi = tuple(_random_psi(rng) for _ in range(d))
        rec = PoincareRecurrence(c, psi)
        rho = float(rng.uniform(0.5, 2.0))
        K = class_membership_K(rec, rho, range(d, k_max + 1))
        cert = main_theorem_certificate(rec, K, rho)
        seq = unroll(rec, _cplx(rng, d), k_max)
        rep = check_domination(seq, cert, k_max)
        worst = max(worst, rep.worst_log2_ratio * math.log(2))
        violations += not rep.holds
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 30
    record_criterion(1, ok, f"main-theorem inequality: {violations} violations in 200 recurrences, "
                            f"max log-ratio {worst:.3g}, {elapsed:.1f}s")
    assert ok


def test_criterion_2_poincare_certificate(record_criterion):
    rng = np.random.default_rng(7)
    k_max = 5000
    violations = 0
    t0 = time.perf_counter()
    for _ in range(50):
        d = int(rng.integers(1, 5))
        c = tuple(complex(v) for v in _cplx(rng, d))
        gammas = rng.uniform(-5, 5, d)
        rec = PoincareRecurrence(c, tuple(RationalFunctionK.inverse_power(g, 1) for g in gammas))
        _, cert = poincare_certificate(rec)
        seq = unroll(rec, _cplx(rng, d), k_max)
        violations += not check_domination(seq, cert, k_max).holds
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 30
    record_criterion(2, ok, f"Poincare certificates: {violations} violations in 50 recurrences to k={k_max}, "
                            f"{elapsed:.1f}s")
    assert ok


def test_criterion_3_root_test_convergence(record_criterion):
    errs = []
    for gamma in (0.1, 1.0):
        psi = RationalFunctionK.inverse_power(gamma, 1)
        seq = unroll(PoincareRecurrence((1, 1), (psi, psi)), [0, 1], 5000)
        errs.append(abs(root_test_estimate(seq, (4000, 5000)) - PHI))
    ok = max(errs) < 0.01
    record_criterion(3, ok, f"perturbed Fibonacci root test: |est - phi| = {errs[0]:.2e}, {errs[1]:.2e} (< 0.01)")
    assert ok


def _planted_rational(rng):
    """P/Q with deg P < d = deg Q, its recurrence, and the planted zeros of P."""
    d = int(rng.integers(2, 5))
    poles = rng.uniform(1, 3, d) * np.exp(2j * np.pi * rng.random(d))
    q = Polynomial.from_roots(poles).coefficients
    q = q / q[0]
    rec = PoincareRecurrence(tuple(-q[1:]))
    K = class_membership_K(rec, 1.0, [d])
    cert = main_theorem_certificate(rec, K, 1.0)
    disks = roytwarf_disk_bounds(cert)
    radii = [b.radius for b in disks]
    r3 = radii[2]
    n_inside = int(rng.integers(0, d))
    n_total = int(rng.integers(n_inside, d))
    zs = list(r3 * rng.uniform(0.05, 0.8, n_inside) * np.exp(2j * np.pi * rng.random(n_inside)))
    while len(zs) < n_total:
        m = r3 * 10 ** rng.uniform(0.1, math.log10(2 * cert.R / r3))
        if all(abs(m - r) > 0.1 * r for r in radii):
            zs.append(m * np.exp(2j * np.pi * rng.random()))
    P = complex(_cplx(rng)) * Polynomial.from_roots(zs).coefficients
    # a_k = P_k + sum_j c_j a_{k-j} below the order, then the recurrence takes over
    a = []
    for k in range(d):
        a.append((P[k] if k < P.size else 0) + sum(rec.c[j - 1] * a[k - j] for j in range(1, k + 1)))
    return rec, a, cert, disks, np.array(zs)


def test_criterion_4_zero_bounds(record_criterion):
    rng = np.random.default_rng(4)
    T = 200
    exceed = mismatch = 0
    t0 = time.perf_counter()
    for _ in range(100):
        rec, a, cert, disks, zs = _planted_rational(rng)
        seq = unroll(rec, a, T)
        for i, disk in enumerate(disks):
            n = count_zeros(seq, disk.radius, T, cert=cert)
            exceed += n > disk.bound_int
            planted = int(np.sum(np.abs(zs) < disk.radius))
            mismatch += n != planted if i == 2 else 0
    elapsed = time.perf_counter() - t0
    ok = exceed == 0 and mismatch == 0 and elapsed < 60
    record_criterion(4, ok, f"zero bounds on 100 planted rational functions: {exceed} bound violations, "
                            f"{mismatch} third-disk mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_5_valence_lemma(record_criterion):
    c = np.zeros(22, dtype=complex)
    c[2] = c[21] = 1
    f = CoefficientSequence.from_complex(c)
    worst = sp_valence_test(f, 1, 1 / 3, 100, seed=5, tail_bound=0)
    n = count_solutions(f, [1e-11, 0, 1], 1 / 3, tail_bound=0)
    ok = worst <= 2 and n == 21
    record_criterion(5, ok, f"x^2 + x^21 in D_1/3: max {worst} solutions over 100 trials, P = x^2 + 1e-11 gives {n}")
    assert ok


def test_criterion_6_moment_recurrence(record_criterion):
    t0 = time.perf_counter()
    residuals = {}
    for name, make in corpus.CORPUS.items():
        g = make()
        ms = moment_quadrature(g, 100)
        residuals[name] = epsilon_fit(g.operator, g.points, ms).residual
        if name == "unit":
            closed = np.max(np.abs(ms.values - 1 / np.arange(1, 102)))
    elapsed = time.perf_counter() - t0
    ok = max(residuals.values()) < 1e-8 and closed <= 1e-12 and elapsed < 60
    worst = max(residuals, key=residuals.get)
    record_criterion(6, ok, f"moment recurrence held-out residual max {residuals[worst]:.2e} ({worst}), "
                            f"g=1 closed form error {closed:.1e}, {elapsed:.1f}s")
    assert ok


def _spectrum_distance(eig, expected):
    left = list(expected)
    worst = 0.0
    for z in eig:
        i = int(np.argmin([abs(z - w) for w in left]))
        worst = max(worst, abs(z - left.pop(i)))
    return worst


def test_criterion_7_companion_spectrum(record_criterion):
    dist = {}
    for name in corpus.FUCHSIAN:
        g = corpus.CORPUS[name]()
        op = g.operator
        eig = companion_system(op, g.points).eigenvalues()
        pn = Polynomial(op.p[op.n].coefficients)
        expected = list(roots(pn).roots) if pn.degree >= 1 else []
        expected += [x for x in g.points for _ in range(op.n)]
        dist[name] = _spectrum_distance(eig, expected) if len(expected) == eig.size else math.inf
    # e^x violates the Poincare condition, so its moment system has no constant companion matrix
    with pytest.raises(OperatorError):
        companion_system(corpus.exponential().operator, (0.0, 1.0))
    ok = max(dist.values()) <= 1e-8
    record_criterion(7, ok, "companion spectrum vs roots(p_n) + jumps: "
                            + ", ".join(f"{k} {v:.1e}" for k, v in dist.items()))
    assert ok


def test_criterion_8_growth_vs_radius(record_criterion):
    gaps = {}
    for name in corpus.FUCHSIAN:
        g = corpus.CORPUS[name]()
        rep = stieltjes_domination(g.operator, g.points, moment_quadrature(g, 100))
        gaps[name] = rep.root_test - 1 / rep.R_star
    ok = max(gaps.values()) <= 0.02
    record_criterion(8, ok, "root test minus 1/R*: " + ", ".join(f"{k} {v:+.3f}" for k, v in gaps.items()))
    assert ok


def test_criterion_9_vanishing_count(record_criterion):
    rows = {}
    for name in corpus.FUCHSIAN:
        g = corpus.CORPUS[name]()
        op = g.operator
        count = moment_quadrature(g, 60).leading_zero_count()
        rows[name] = (count, vanishing_bound(op, g.points, has_nonsingular_jump(op, g.points)))
    ok = rows["legendre_p2"][0] == 2 and all(c < b for c, b in rows.values())
    record_criterion(9, ok, "leading vanishing moments / bound: "
                            + ", ".join(f"{k} {c}/{b}" for k, (c, b) in rows.items()))
    assert ok


def test_criterion_10_reproducible_cli(tmp_path, record_criterion):
    cfg = os.path.join(ROOT, "configs", "fibonacci.yaml")
    outs = []
    for i in range(2):
        out = tmp_path / f"run{i}"
        r = subprocess.run([sys.executable, "-m", "taylordom", "run", cfg, "--out", str(out), "--seed", "3"],
                           capture_output=True, text=True)
        assert r.returncode == 0, r.stderr
        outs.append(out)
    names = sorted(n for n in os.listdir(outs[0]) if n.endswith(".csv"))
    match, mismatch, errors = filecmp.cmpfiles(outs[0], outs[1], names, shallow=False)
    ok = bool(names) and not mismatch and not errors
    record_criterion(10, ok, f"two CLI runs: {len(match)}/{len(names)} CSV files byte-identical")
    assert ok
