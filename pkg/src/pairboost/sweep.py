"""Parameter grids over ``(beta, beta_v, alpha, phi)``: resource sweeps and
the Wigner-factor surface ``cos Omega(beta, beta_v)`` at fixed ``alpha``.

Rows always come out in grid order (first axis outermost), whatever the
number of worker processes, and floats are written with 17 significant
digits so CSV output round-trips and is byte-stable.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import DomainError
from .pairsim import PairConfig, resource_report
from .relativity import BETA_MAX, BoostParams, wigner_angles_batch, wigner_cos_closed_form

__all__ = [
    "Axis",
    "SWEEP_COLUMNS",
    "FIG2_COLUMNS",
    "SweepSpec",
    "fig2_rows",
    "fig2_surface",
    "format_csv",
    "format_json",
    "parse_axis",
    "sweep_rows",
]

SWEEP_COLUMNS = (
    "beta",
    "beta_v",
    "alpha",
    "phi",
    "cos_omega",
    "e4",
    "e8",
    "coh_minus",
    "coh_plus",
    "invariant",
    "max_deviation",
)
FIG2_COLUMNS = ("beta", "beta_v", "alpha", "cos_omega", "cos_omega_matrix")
FIG2_MAX = 0.999

# closed intervals for every sweepable parameter
DOMAINS = {
    "beta": (0.0, BETA_MAX),
    "beta_v": (0.0, BETA_MAX),
    "alpha": (0.0, math.pi),
    "phi": (0.0, math.pi / 2),
}


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    n: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


def parse_axis(text: str) -> Axis:
    """Parse ``NAME:MIN:MAX:N``; ``beta-v`` is accepted for ``beta_v``."""
    parts = text.split(":")
    if len(parts) != 4:
        raise DomainError(f"axis {text!r} is not NAME:MIN:MAX:N")
    name = parts[0].replace("-", "_")
    try:
        lo, hi, n = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError as exc:
        raise DomainError(f"axis {text!r}: {exc}") from None
    return Axis(name, lo, hi, n)


@dataclass(frozen=True)
class SweepSpec:
    """Up to two swept axes plus fixed values for the remaining parameters."""

    axes: tuple
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not 1 <= len(self.axes) <= 2:
            raise DomainError("a sweep needs one or two axes")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise DomainError(f"repeated axis in {names}")
        for a in self.axes:
            if a.name not in DOMAINS:
                raise DomainError(f"cannot sweep {a.name!r}; choose from {sorted(DOMAINS)}")
            if a.n < 2:
                raise DomainError(f"axis {a.name} needs at least 2 points, got {a.n}")
            lo, hi = DOMAINS[a.name]
            if not (lo <= a.lo <= hi and lo <= a.hi <= hi):
                raise DomainError(f"axis {a.name} range [{a.lo}, {a.hi}] leaves [{lo}, {hi}]")
            if a.name == "beta_v" and min(a.lo, a.hi) <= 0.0:
                raise DomainError("beta_v must stay positive: at 0 the momentum branches merge")

    def points(self) -> list[dict]:
        grids = [a.values() for a in self.axes]
        out = []
        for combo in product(*grids):
            point = dict(self.fixed)
            point.update({a.name: float(v) for a, v in zip(self.axes, combo)})
            out.append(point)
        return out


def _sweep_row(point: dict) -> dict:
    cfg = PairConfig(
        phi=point["phi"], beta_v=point["beta_v"], theta=point.get("theta", 0.0), m=point.get("mass", 1.0)
    )
    bp = BoostParams(point["beta"], point["beta_v"], point["alpha"])
    rep = resource_report(cfg, bp)
    return {
        "beta": bp.beta,
        "beta_v": bp.beta_v,
        "alpha": bp.alpha,
        "phi": cfg.phi,
        "cos_omega": rep.cos_omega,
        "e4": rep.e4_lab,
        "e8": rep.e8,
        "coh_minus": rep.coherence_minus,
        "coh_plus": rep.coherence_plus,
        "invariant": rep.invariant_value,
        "max_deviation": rep.max_deviation,
    }


def _ordered_map(fn, items, workers: int):
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # Executor.map yields in submission order
        return list(pool.map(fn, items, chunksize=chunk))


def sweep_rows(spec: SweepSpec, workers: int = 1) -> list[dict]:
    """One resource-report row per grid point, in grid order."""
    for key in ("phi", "beta", "beta_v", "alpha"):
        if key not in spec.fixed and key not in {a.name for a in spec.axes}:
            raise DomainError(f"no value for {key!r}: fix it or sweep it")
    return _ordered_map(_sweep_row, spec.points(), workers)


def fig2_surface(alpha: float, n: int = 200, hi: float = FIG2_MAX, mass: float = 1.0):
    """``cos Omega`` over the square ``[0, hi]^2`` of ``(beta, beta_v)``.

    Returns ``(betas, closed, matrix)``; ``closed[i, j]`` is the closed form
    at ``beta = betas[i]``, ``beta_v = betas[j]`` and ``matrix`` the same
    quantity from the numerically built Wigner transform.
    """
    if n < 2:
        raise DomainError(f"grid needs at least 2 points, got {n}")
    if not 0.0 <= alpha <= math.pi:
        raise DomainError(f"alpha={alpha!r} outside [0, pi]")
    betas = np.linspace(0.0, hi, n)
    closed = np.array([[wigner_cos_closed_form(BoostParams(b, bv, alpha)) for bv in betas] for b in betas])
    matrix = np.cos(wigner_angles_batch(betas[:, None], betas[None, :], alpha, m=mass))
    return betas, closed, matrix


def fig2_rows(alpha: float, betas, closed, matrix) -> list[dict]:
    n = len(betas)
    return [
        {
            "beta": float(betas[i]),
            "beta_v": float(betas[j]),
            "alpha": alpha,
            "cos_omega": float(closed[i, j]),
            "cos_omega_matrix": float(matrix[i, j]),
        }
        for i in range(n)
        for j in range(n)
    ]


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def format_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def format_json(rows, columns=None) -> str:
    if columns is not None:
        rows = [{c: row[c] for c in columns} for row in rows]
    return json.dumps(rows, indent=1) + "\n"
