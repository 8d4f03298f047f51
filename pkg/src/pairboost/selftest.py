"""Invariant and property checks run by ``pairboost selftest``.

Each check returns the worst deviation it saw and the tolerance it was held
to. ``quick=True`` shrinks every grid so the whole suite runs in seconds.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from itertools import product
from typing import Callable

import numpy as np

from .pairsim import (
    SPIN_CUTS,
    PairConfig,
    boosted_state,
    certify_four_party_separability,
    lab_state,
    resource_report,
)
from .quantum import PARTIES, dephase, partial_trace, state_from_branches, spin_ket
from .relativity import (
    METRIC,
    BoostParams,
    FourVector,
    boost_transform,
    gamma,
    standard_boost,
    wigner_angles_batch,
    wigner_cos_closed_form,
    wigner_transform,
)
from .resources import enumerate_bipartitions, gme, separability_structure_check
from .sweep import fig2_surface

__all__ = ["Check", "run_selftest", "CHECKS"]

SEED = 20240611


@dataclass
class Check:
    name: str
    worst: float
    tol: float
    passed: bool
    seconds: float = 0.0
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{status}  {self.name:<34} worst={self.worst:.3e}  tol={self.tol:.1e}  {self.seconds:6.2f}s{extra}"


def _result(name, worst, tol, detail=""):
    return Check(name, float(worst), tol, bool(worst <= tol), detail=detail)


def _interior(lo, hi, n):
    return np.linspace(lo, hi, n + 2)[1:-1]


def check_wigner_matrix(quick):
    n = 8 if quick else 50
    b, bv, a = np.meshgrid(np.linspace(0, 0.999, n), np.linspace(0, 0.999, n), _interior(0, math.pi / 2, n), indexing="ij")
    matrix = np.cos(wigner_angles_batch(b, bv, a))
    closed = np.array([wigner_cos_closed_form(BoostParams(*pt)) for pt in zip(b.ravel(), bv.ravel(), a.ravel())])
    worst = float(np.max(np.abs(matrix.ravel() - closed)))
    return _result("wigner closed form vs matrix", worst, 1e-9, f"{n}^3 points")


def check_special_cases(quick):
    worst = 0.0
    for beta, beta_v in product(np.linspace(0, 0.999, 6 if quick else 30), repeat=2):
        worst = max(worst, abs(wigner_cos_closed_form(BoostParams(beta, beta_v, 0.0)) - 1.0))
        g, gv = gamma(beta), gamma(beta_v)
        expected = (g + gv) / (1 + g * gv)
        worst = max(worst, abs(wigner_cos_closed_form(BoostParams(beta, beta_v, math.pi / 2)) - expected))
    return _result("wigner alpha=0 and alpha=pi/2", worst, 1e-12)


def check_ultrarelativistic(quick):
    # the gap to cos(alpha) shrinks like 1/gamma; 1 - 1e-8 is the first
    # decade where all three angles sit below 1e-3
    b = 1 - 1e-8
    worst = max(
        abs(wigner_cos_closed_form(BoostParams(b, b, a)) - math.cos(a))
        for a in (math.pi / 6, math.pi / 4, math.pi / 3)
    )
    return _result("ultrarelativistic limit", worst, 1e-3, "beta = beta_v = 1 - 1e-8")


def check_lab(quick):
    worst = 0.0
    for phi, theta in product(np.linspace(0, math.pi / 2, 10 if quick else 50), np.linspace(0, 2 * math.pi, 3 if quick else 10)):
        lab = lab_state(PairConfig(phi, 0.6, theta))
        s2 = math.sin(2 * phi)
        worst = max(worst, abs(gme(lab.squeeze()).value - s2), gme(lab).value)
        for p in PARTIES:
            rho = partial_trace(lab, p).matrix
            worst = max(worst, float(np.max(np.abs(rho - np.diag(np.diag(rho))))))
    return _result("lab frame resources", worst, 1e-10)


def _grid(quick):
    n = 4 if quick else (20, 20, 10, 10)
    nb, nbv, na, nphi = (n, n, n, n) if quick else n
    return product(
        np.linspace(0.05, 0.999, nb),
        np.linspace(0.05, 0.999, nbv),
        np.linspace(0.05, math.pi / 2 - 0.05, na),
        np.linspace(0, math.pi / 2, nphi),
    )


def check_boosted_grid(quick):
    """Closed forms, invariant and lower bound over the boosted grid."""
    worst = {"closed forms": 0.0, "invariant": 0.0, "lower bound": 0.0, "argmin": 0.0}
    points = 0
    for beta, beta_v, alpha, phi in _grid(quick):
        rep = resource_report(PairConfig(phi, beta_v), BoostParams(beta, beta_v, alpha), check=False)
        points += 1
        worst["closed forms"] = max(worst["closed forms"], rep.max_deviation)
        s2 = math.sin(2 * phi)
        worst["invariant"] = max(worst["invariant"], abs(rep.invariant_value - s2), abs(rep.invariant_lab - s2))
        worst["lower bound"] = max(worst["lower bound"], s2 * math.cos(alpha) - rep.e8)
        if 0 < phi < math.pi / 2 and rep.argmin not in SPIN_CUTS:
            worst["argmin"] = 1.0
    return [
        _result("boosted closed forms", worst["closed forms"], 1e-9, f"{points} points"),
        _result("invariant lab and boosted", worst["invariant"], 1e-10),
        _result("lower bound e8 >= e4 cos(alpha)", worst["lower bound"], 1e-12),
        _result("argmin is a spin 1|7 cut", worst["argmin"], 0.0),
    ]


def check_expansion(quick):
    worst = 0.0
    b = 0.1
    for alpha in np.linspace(0, math.pi / 2, 10 if quick else 50):
        rep = resource_report(PairConfig(math.pi / 4, b), BoostParams(b, b, alpha), check=False)
        worst = max(worst, abs(rep.coherence_minus - b**4 * math.sin(alpha) ** 2 / 8))
    return _result("small-velocity coherence", worst, 1e-5)


def check_combinatorics(quick):
    cuts = enumerate_bipartitions(8)
    counts = [sum(1 for c in cuts if len(c.part_a) == k or len(c.part_b) == k) for k in (1, 2, 3, 4)]
    ok = len(cuts) == 127 and counts == [8, 28, 56, 35]
    return Check("bipartition counts 8/28/56/35", 0.0 if ok else 1.0, 0.0, ok, detail=f"{len(cuts)} cuts, {counts}")


def check_random_invariant(quick):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(20 if quick else 100):
        beta, beta_v = rng.uniform(0, 0.999), rng.uniform(0.01, 0.999)
        alpha, phi, theta = rng.uniform(0, math.pi), rng.uniform(0, math.pi / 2), rng.uniform(0, 2 * math.pi)
        rep = resource_report(PairConfig(phi, beta_v, theta), BoostParams(beta, beta_v, alpha), check=False)
        worst = max(worst, abs(rep.invariant_value - math.sin(2 * phi)))
    return _result("invariant at random points", worst, 1e-10, f"seed {SEED}")


def check_separability(quick):
    worst, ok = 0.0, True
    for beta, beta_v, alpha in ((0.8, 0.6, 1.0), (0.3, 0.9, 0.2)) if quick else product((0.3, 0.8, 0.99), (0.2, 0.7, 0.99), (0.3, 1.2)):
        state = boosted_state(PairConfig(math.pi / 5, beta_v), BoostParams(beta, beta_v, alpha))
        good, dev = certify_four_party_separability(state)
        ok, worst = ok and good, max(worst, dev)
    lab_gap = math.inf
    for phi in _interior(0, math.pi / 2, 5):
        lab = lab_state(PairConfig(phi, 0.6)).squeeze()
        cert = separability_structure_check(lab.density(), lab)
        ok = ok and not cert.separable
        lab_gap = min(lab_gap, cert.max_deviation)
    return Check("4-party separability", worst, 1e-10, ok, detail=f"lab reduction off by >= {lab_gap:.3f}")


def check_properties(quick):
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(30 if quick else 200):
        n = rng.normal(size=3)
        lam = boost_transform(rng.uniform(0, 0.99), n / np.linalg.norm(n))
        worst = max(worst, lam.metric_violation())
        q = rng.normal(size=3)
        p = FourVector(math.sqrt(1 + q @ q), *q)
        w = wigner_transform(lam, p).matrix
        worst = max(worst, float(np.max(np.abs(w @ [1, 0, 0, 0] - np.array([1, 0, 0, 0])))))
        worst = max(worst, float(np.max(np.abs(standard_boost(p).matrix.T @ METRIC @ standard_boost(p).matrix - METRIC))))

        cfg = PairConfig(rng.uniform(0, math.pi / 2), rng.uniform(0.05, 0.99), rng.uniform(0, 2 * math.pi))
        bp = BoostParams(rng.uniform(0, 0.99), cfg.beta_v, rng.uniform(0, math.pi))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            state = boosted_state(cfg, bp)
        worst = max(worst, abs(np.linalg.norm(state.vector) - 1))
        keep = [p for p in PARTIES if rng.random() < 0.5] or [PARTIES[0]]
        inner = keep[: max(1, len(keep) // 2)]
        direct = partial_trace(state, inner).matrix
        nested = partial_trace(partial_trace(state, keep), inner).matrix
        worst = max(worst, float(np.max(np.abs(direct - nested))))
        rho = partial_trace(state, keep)
        once = dephase(rho)
        worst = max(worst, float(np.max(np.abs(dephase(once).matrix - once.matrix))))

    for n in (2, 3, 8):
        ghz = state_from_branches(range(n), [(1, [spin_ket(0)] * n), (1, [spin_ket(1)] * n)])
        worst = max(worst, abs(gme(ghz).value - 1.0))
    return _result("property suite", worst, 1e-10)


def check_fig2(quick):
    n = 20 if quick else 200
    worst = 0.0
    for alpha in (math.pi / 4, math.pi / 2):
        betas, closed, matrix = fig2_surface(alpha, n)
        worst = max(worst, float(np.max(np.abs(closed - matrix))))
        # beta = 0 row and beta_v = 0 column are identities
        worst = max(worst, float(np.max(np.abs(closed[0] - 1))), float(np.max(np.abs(closed[:, 0] - 1))))
        if alpha == math.pi / 2:
            g = np.array([gamma(b) for b in betas])
            expected = (g[:, None] + g[None, :]) / (1 + np.outer(g, g))
            worst = max(worst, float(np.max(np.abs(closed - expected))))
    return _result("fig2 surfaces", worst, 1e-9, f"{n}x{n}")


CHECKS: list[Callable] = [
    check_combinatorics,
    check_special_cases,
    check_ultrarelativistic,
    check_wigner_matrix,
    check_lab,
    check_properties,
    check_separability,
    check_expansion,
    check_random_invariant,
    check_boosted_grid,
    check_fig2,
]


def run_selftest(quick: bool = False, emit: Callable[[str], None] | None = print) -> list[Check]:
    results = []
    for fn in CHECKS:
        t0 = time.perf_counter()
        out = fn(quick)
        out = out if isinstance(out, list) else [out]
        dt = time.perf_counter() - t0
        for c in out:
            c.seconds = dt / len(out)
            results.append(c)
            if emit:
                emit(c.line())
    return results
