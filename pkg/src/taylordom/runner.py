"""Orchestration of config tasks into an in-memory report bundle.

Nothing here touches the file system; ``cli`` writes the bundle out.
Every table row carries a ``provenance`` cell: ``computed`` for values the
library produced, ``certificate`` for certificate parameters and the bounds
derived from them, ``oracle`` for independent cross-checks.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import ExperimentConfig
from .dfinite import (companion_system, epsilon_fit, format_float, fuchsian_check, moment_quadrature,
                      stieltjes_domination)
from .domination import (DominationCertificate, check_domination, class_membership_K, main_theorem_certificate,
                         poincare_certificate)
from .errors import TaylorDomError
from .polyroots import Polynomial, characteristic_polynomial, roots
from .recurrence import unroll
from .zeros import count_zeros, roytwarf_disk_bounds, sp_valence_bound, sp_valence_test

log = logging.getLogger(__name__)


@dataclass
class Table:
    header: list
    rows: list = field(default_factory=list)

    def add(self, *cells) -> None:
        self.rows.append([c if isinstance(c, str) else _fmt(c) for c in cells])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class ReportBundle:
    name: str
    lines: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    plot_data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def note(self, text: str) -> None:
        self.lines.append(text)

    def value(self, label: str, v, provenance: str) -> None:
        self.lines.append(f"{label} = {v if isinstance(v, str) else _fmt(v)} [{provenance}]")

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def report_text(self) -> str:
        out = [f"experiment: {self.name}", ""]
        out.extend(self.lines)
        out.append("")
        out.append("checks:")
        for c in self.checks:
            out.append(f"  {'PASS' if c.passed else 'FAIL'} {c.name}" + (f": {c.detail}" if c.detail else ""))
        out.append(f"overall: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(out) + "\n"


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return format_float(x)


def _cert_label(cert: DominationCertificate) -> str:
    return f"(N={cert.N}, R={_fmt(cert.R)}, C={_fmt(cert.C)})"


def run_experiment(cfg: ExperimentConfig) -> ReportBundle:
    bundle = ReportBundle(cfg.name)
    state = {}
    runner = _RecurrenceRunner if cfg.kind == "recurrence" else _DFiniteRunner
    r = runner(cfg, bundle, state)
    for task in cfg.tasks:
        bundle.note(f"== {task} ==")
        try:
            getattr(r, task)()
        except TaylorDomError as exc:
            bundle.check(f"task {task}", False, f"{type(exc).__name__}: {exc}")
            log.error("task %s failed: %s", task, exc)
    return bundle


class _Runner:
    def __init__(self, cfg: ExperimentConfig, bundle: ReportBundle, state: dict):
        self.cfg = cfg
        self.p = cfg.params
        self.bundle = bundle
        self.state = state

    def _user_certs(self):
        return [(c.name or f"user[{i}]", DominationCertificate(c.N, c.R, c.C, "user"))
                for i, c in enumerate(self.p.certificates)]

    def _check_certs(self, seq, certs, table):
        for name, cert in certs:
            rep = check_domination(seq, cert, len(seq) - 1)
            table.add(name, cert.provenance, cert.N, cert.R, cert.C, rep.holds, rep.worst_k, rep.worst_ratio,
                      "certificate")
            self.bundle.value(f"certificate {name}", _cert_label(cert), "certificate")
            self.bundle.check(f"domination {name} {_cert_label(cert)}", rep.holds,
                              f"worst ratio {_fmt(rep.worst_ratio)} at k={rep.worst_k}")
            if rep.holds:
                self.state.setdefault("valid_certs", []).append((name, cert))
        self.state["certs"] = self.state.get("certs", []) + certs

    def report(self):
        self.bundle.plot_data["certificates"] = {
            "seq": self._sequence(), "certs": list(self.state.get("certs", []))}
        self.bundle.note("plot: dominate.svg")


class _RecurrenceRunner(_Runner):
    def _built(self):
        if "rec" not in self.state:
            self.state["rec"], self.state["initial"] = self.cfg.build_recurrence()
        return self.state["rec"]

    def _sequence(self):
        if "seq" not in self.state:
            rec = self._built()
            self.state["seq"] = unroll(rec, self.state["initial"], self.p.k_max)
        return self.state["seq"]

    def _rho_K(self):
        rec = self._built()
        rho = 1.0
        return rho, class_membership_K(rec, rho, range(rec.d, self.p.k_max + 1))

    def unroll(self):
        seq = self._sequence()
        t = Table(["k", "re", "im", "log2_abs", "provenance"])
        z = seq.to_complex()
        lg = seq.log2_magnitudes()
        for k in range(len(seq)):
            t.add(k, float(z[k].real), float(z[k].imag), float(lg[k]), "computed")
        self.bundle.tables["unroll"] = t
        self.bundle.value("terms", len(seq), "computed")

    def roots(self):
        rec = self._built()
        rs = roots(characteristic_polynomial(rec), self.p.tol)
        t = Table(["re", "im", "modulus", "multiplicity", "residual", "provenance"])
        for z, m, res in zip(rs.roots, rs.multiplicities, rs.residuals):
            t.add(float(z.real), float(z.imag), abs(z), m, float(res), "computed")
        self.bundle.tables["roots"] = t
        top = rs.max_modulus
        R = math.inf if top == 0 else 1.0 / top
        self.state["R"] = R
        self.bundle.value("convergence radius R", R, "computed")
        oracle = np.roots(characteristic_polynomial(rec).coefficients[::-1])
        worst = max(min(abs(o - z) for z in rs.roots) for o in oracle) if oracle.size else 0.0
        self.bundle.value("max distance to numpy.roots", worst, "oracle")

    def dominate(self):
        rec = self._built()
        seq = self._sequence()
        certs = []
        rho, K = self._rho_K()
        certs.append(("main_theorem_certificate", main_theorem_certificate(rec, K, rho)))
        self.bundle.value("class K (rho=1)", K, "computed")
        if rec.class_poincare:
            try:
                nh, cert = poincare_certificate(rec, self.p.tol, self.p.k_probe)
                self.bundle.value("N_hat", nh, "computed")
                certs.append(("poincare_certificate", cert))
            except (TaylorDomError, OverflowError) as exc:
                self.bundle.check("poincare_certificate", False, f"{type(exc).__name__}: {exc}")
        certs.extend(self._user_certs())
        t = Table(["name", "kind", "N", "R", "C", "holds", "worst_k", "worst_ratio", "provenance"])
        self._check_certs(seq, certs, t)
        self.bundle.tables["dominate"] = t

    def _best_cert(self):
        valid = self.state.get("valid_certs")
        if valid is None:
            self.dominate()
            valid = self.state.get("valid_certs")
        if not valid:
            raise TaylorDomError("no valid certificate available to control the series tail")
        return max(valid, key=lambda nc: nc[1].R)

    def zeros(self):
        seq = self._sequence()
        name, cert = self._best_cert()
        T = self.p.truncation if self.p.truncation is not None else len(seq) - 1
        self.bundle.value("tail certificate", f"{name} {_cert_label(cert)}", "certificate")
        t = Table(["radius", "bound", "bound_floor", "count", "within_bound", "provenance"])
        for i, disk in enumerate(roytwarf_disk_bounds(cert)):
            n = count_zeros(seq, disk.radius, T, self.p.samples, cert=cert)
            t.add(disk.radius, disk.bound, disk.bound_int, n, n <= disk.bound_int, "certificate")
            self.bundle.check(f"zero bound disk {i + 1} (r={_fmt(disk.radius)})", n <= disk.bound_int,
                              f"{n} zeros, bound {disk.bound_int}")
        for r in self.p.radii:
            try:
                n = count_zeros(seq, r, T, self.p.samples, cert=cert)
                t.add(r, "", "", n, "", "computed")
                self.bundle.value(f"zeros in |z|<{_fmt(r)}", n, "computed")
            except TaylorDomError as exc:
                self.bundle.check(f"zero count r={_fmt(r)}", False, f"{type(exc).__name__}: {exc}")
        self.bundle.tables["zeros"] = t

    def spvalent(self):
        rec = self._built()
        seq = self._sequence()
        rho, K = self._rho_K()
        vb = sp_valence_bound(rec.d, K, rho, self.p.s)
        cert = main_theorem_certificate(rec, K, rho)
        T = self.p.truncation if self.p.truncation is not None else len(seq) - 1
        worst = sp_valence_test(seq, self.p.s, vb.radius_hat, self.p.trials, self.p.seed, T, self.p.samples,
                                cert=cert)
        t = Table(["s", "p", "radius", "trials", "seed", "max_solutions", "provenance"])
        t.add(vb.s, vb.p, vb.radius_hat, self.p.trials, self.p.seed, worst, "certificate")
        self.bundle.tables["spvalent"] = t
        self.bundle.value("valence radius", vb.radius_hat, "certificate")
        self.bundle.check(f"(s,p)-valence s={vb.s} p={vb.p}", worst <= vb.p, f"max {worst} solutions")


class _DFiniteRunner(_Runner):
    def _g(self):
        if "g" not in self.state:
            self.state["g"] = self.cfg.build_dfinite()
        return self.state["g"]

    def _moments(self):
        if "moments" not in self.state:
            self.state["moments"] = moment_quadrature(self._g(), self.p.K, self.p.quad_tol)
        return self.state["moments"]

    def _sequence(self):
        return self._moments().to_sequence()

    def moments(self):
        g = self._g()
        ms = self._moments()
        t = Table(["k", "m_k", "error_estimate", "provenance"])
        for k, (m, e) in enumerate(zip(ms.values, ms.errors)):
            t.add(k, m, float(e), "computed")
        self.bundle.tables["moments"] = t
        self.bundle.value("moments", len(ms), "computed")
        self.bundle.value("max quadrature error estimate", float(np.max(ms.errors)), "computed")
        self.bundle.value("leading vanishing moments", ms.leading_zero_count(), "computed")
        fit = epsilon_fit(g.operator, g.points, ms, self.p.fit_tol)
        self.bundle.value("moment recurrence residual", fit.residual, "computed")
        self.bundle.check("moment recurrence residual", not fit.flagged,
                          f"{_fmt(fit.residual)} vs tolerance {_fmt(self.p.fit_tol)}")

    def roots(self):
        g = self._g()
        op = g.operator
        system = companion_system(op, g.points)
        eig = system.eigenvalues()
        t = Table(["re", "im", "modulus", "provenance"])
        for z in sorted(eig, key=lambda z: (round(z.real, 12), round(z.imag, 12))):
            t.add(float(z.real), float(z.imag), abs(z), "computed")
        self.bundle.tables["roots"] = t
        nonzero = np.abs(eig)[np.abs(eig) > 0]
        R_star = float(1.0 / nonzero.max()) if nonzero.size else math.inf
        self.bundle.value("R*", R_star, "computed")
        pn = Polynomial(op.p[op.n].coefficients)
        expected = list(roots(pn, self.p.tol).roots) if pn.degree >= 1 else []
        for x in g.points:
            expected.extend([complex(x)] * op.n)
        dist = _multiset_distance(eig, np.array(expected, dtype=complex))
        self.bundle.value("spectrum distance to roots(p_n) and points", dist, "oracle")
        self.bundle.check("companion spectrum", dist <= 1e-8, f"distance {_fmt(dist)}")

    def dominate(self):
        g = self._g()
        op = g.operator
        ms = self._moments()
        self.bundle.value("Fuchsian", fuchsian_check(op), "computed")
        rep = stieltjes_domination(op, g.points, ms)
        self.bundle.value("R*", rep.R_star, "computed")
        self.bundle.value("N", rep.N, "certificate")
        self.bundle.value("Lambda", rep.Lambda if rep.Lambda is not None else "none", "computed")
        self.bundle.value("minimal constant C", rep.minimal_constant, "certificate")
        self.bundle.value("root test", rep.root_test, "computed")
        if math.isfinite(rep.R_star):
            self.bundle.check("growth within 1/R*", rep.root_test <= 1.0 / rep.R_star + 0.02,
                              f"root test {_fmt(rep.root_test)} vs 1/R* = {_fmt(1.0 / rep.R_star)}")
        certs = [("stieltjes", DominationCertificate(rep.N, rep.R, rep.minimal_constant, "user"))]
        certs.extend(self._user_certs())
        t = Table(["name", "kind", "N", "R", "C", "holds", "worst_k", "worst_ratio", "provenance"])
        self._check_certs(ms.to_sequence(), certs, t)
        self.bundle.tables["dominate"] = t


def _multiset_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Greedy matching distance between two equal-size multisets of complex numbers."""
    if a.size != b.size:
        return math.inf
    left = list(b)
    worst = 0.0
    for z in a:
        i = int(np.argmin([abs(z - w) for w in left]))
        worst = max(worst, abs(z - left.pop(i)))
    return worst


def write_plot(bundle: ReportBundle, path) -> Optional[str]:
    """Vector plot of log10(|a_k| R^k / H) against the certificate constants; returns a warning or None."""
    data = bundle.plot_data.get("certificates")
    if data is None:
        return None
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        matplotlib.rcParams["svg.hashsalt"] = "taylordom"

        seq = data["seq"]
        ks = np.arange(len(seq))
        fig, ax = plt.subplots(figsize=(7, 4))
        certs = data["certs"]
        if not certs:
            ax.plot(ks, seq.log2_magnitudes() * math.log10(2), lw=1, label="log10 |a_k|")
        for i, (name, cert) in enumerate(certs):
            logs = seq.scaled_by_power(cert.R)
            head = float(np.max(logs[:cert.N + 1]))
            line, = ax.plot(ks, (logs - head) * math.log10(2), lw=1, label=f"{name} R={cert.R:.4g}")
            ax.axhline(math.log10(cert.C), color=line.get_color(), ls="--", lw=0.8)
        ax.set_xlabel("k")
        ax.set_ylabel("log10 of |a_k| R^k / max head")
        ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    except Exception as exc:  # plots are conveniences; never fail the run
        return f"plot skipped: {type(exc).__name__}: {exc}"
    return None
