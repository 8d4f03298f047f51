"""The electron-positron scenario: lab-frame state, boosted state with
Wigner-rotated spinors and boosted momentum labels, and resource reports
that compare every computed quantity with its closed-form prediction.

Party order is fixed by :data:`pairboost.quantum.PARTIES`: the electron's
``P0, Px, Pz, S`` followed by the positron's. The ``y`` momentum component
never changes under the boosts considered and is left out.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DegenerateScenarioError, DomainError, NumericalFailure, StructureError
from .quantum import (
    PARTIES,
    MultiPartyPureState,
    Party,
    partial_trace,
    spin_ket,
    state_from_branches,
)
from .relativity import (
    BETA_MAX,
    BoostParams,
    FourVector,
    branch_momenta,
    gamma,
    wigner_angle,
    wigner_angle_extended,
    wigner_cos_closed_form,
)
from .resources import (
    Bipartition,
    coherence_linear,
    coherence_relative_entropy,
    gme,
    invariant_combination,
    separability_structure_check,
)

__all__ = [
    "DegenerateBoostWarning",
    "PairConfig",
    "ResourceReport",
    "boost_omegas",
    "boosted_state",
    "lab_state",
    "resource_report",
    "spinor_rotation",
    "spinor_states",
]

REPORT_TOL = 1e-8

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class DegenerateBoostWarning(UserWarning):
    """Boosted momentum labels coincide, or alpha lies outside (0, pi/2)."""


@dataclass(frozen=True)
class PairConfig:
    """Superposition angle ``phi`` (``eta = cos phi``, ``xi = sin phi``),
    relative phase ``theta``, particle speed ``beta_v`` and mass ``m``."""

    phi: float
    beta_v: float
    theta: float = 0.0
    m: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.phi <= math.pi / 2):
            raise DomainError(f"phi={self.phi!r} outside [0, pi/2]")
        if not (0.0 <= self.beta_v <= BETA_MAX):
            raise DomainError(f"beta_v={self.beta_v!r} outside [0, 1 - 1e-12]")
        if not self.m > 0:
            raise DomainError(f"mass must be positive, got {self.m!r}")

    @property
    def eta(self) -> float:
        return math.cos(self.phi)

    @property
    def xi(self) -> float:
        return math.sin(self.phi)

    @property
    def p(self) -> float:
        """Momentum magnitude ``gamma_v m beta_v``."""
        return gamma(self.beta_v) * self.m * self.beta_v

    @property
    def p0(self) -> float:
        return gamma(self.beta_v) * self.m

    def momentum(self, s: int) -> FourVector:
        return FourVector(self.p0, 0.0, 0.0, s * self.p)


def _particle(momentum: FourVector, spin) -> list:
    return [momentum.t, momentum.x, momentum.z, spin]


def lab_state(cfg: PairConfig) -> MultiPartyPureState:
    """``eta |p0,0,+p,0>|p0,0,-p,0> + xi e^{i theta} |p0,0,-p,1>|p0,0,+p,1>``.

    Both branches are always kept, so the ``Pz`` parties are qubits even at
    ``phi = 0`` or ``pi/2``.
    """
    if cfg.beta_v == 0.0:
        raise DegenerateScenarioError("beta_v = 0 merges the +p and -p momentum labels")
    up, down = cfg.momentum(+1), cfg.momentum(-1)
    branches = [
        (cfg.eta, _particle(up, spin_ket(0)) + _particle(down, spin_ket(0))),
        (cfg.xi * np.exp(1j * cfg.theta), _particle(down, spin_ket(1)) + _particle(up, spin_ket(1))),
    ]
    return state_from_branches(PARTIES, branches)


def spinor_rotation(omega: float, axis=(0.0, 1.0, 0.0)) -> np.ndarray:
    """``exp(-i (omega/2) n.sigma)`` for a unit axis ``n``."""
    n = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise DomainError(f"rotation axis {n} is not a unit vector")
    n_sigma = sum(c * s for c, s in zip(n, _PAULI))
    return math.cos(omega / 2) * np.eye(2) - 1j * math.sin(omega / 2) * n_sigma


def spinor_states(omega: float, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Images ``u^s, v^s`` of ``|0>, |1>`` under a rotation by ``omega`` about ``s y``."""
    c, sn = math.cos(omega / 2), math.sin(omega / 2)
    u = np.array([c, s * sn], dtype=complex)
    v = np.array([-s * sn, c], dtype=complex)
    return u, v


def _check_consistent(cfg: PairConfig, bp: BoostParams) -> None:
    if not math.isclose(cfg.beta_v, bp.beta_v, rel_tol=1e-12, abs_tol=0.0):
        raise DomainError(f"PairConfig.beta_v={cfg.beta_v!r} differs from BoostParams.beta_v={bp.beta_v!r}")


def _degeneracy_notes(bp: BoostParams, momenta) -> list[str]:
    notes = []
    if momenta.t_equal:
        notes.append("boosted energies of the two branches coincide; P0 parties factorize")
    if momenta.x_equal:
        notes.append("boosted x momenta of the two branches coincide; Px parties factorize")
    if momenta.z_equal:
        notes.append("boosted z momenta of the two branches coincide; Pz parties factorize")
    if not (0.0 < bp.alpha < math.pi / 2):
        notes.append("alpha outside (0, pi/2)")
    return notes


def boost_omegas(cfg: PairConfig, bp: BoostParams, angle: str = "auto", per_branch: bool = False):
    """Wigner angles ``(omega_plus, omega_minus)`` about ``+y`` and ``-y``.

    Angle sources:

    ``"matrix"``
        float64 ``L^{-1}(Lambda p) Lambda L(p)``; raises ``StructureError``
        once rounding spoils it (around beta, beta_v > 0.9999).
    ``"extended"``
        the same product in 60-digit arithmetic.
    ``"auto"``
        ``"matrix"``, retried as ``"extended"`` on ``StructureError``.
    ``"closed_form"``
        the closed-form cosine (+z particle only) with the matrix route's
        sign, which is negative for this geometry.

    By default both particles use the +z particle's angle; ``per_branch=True``
    gives the -z particle its own angle (they differ unless alpha = pi/2).
    """
    if angle == "closed_form":
        if per_branch:
            raise DomainError("the closed form covers the +z particle only")
        plus = -math.acos(min(1.0, max(-1.0, wigner_cos_closed_form(bp))))
        return plus, plus
    if angle not in ("matrix", "extended", "auto"):
        raise DomainError(f"unknown angle source {angle!r}")

    def one(s):
        if angle != "extended":
            try:
                return wigner_angle(bp.boost(), cfg.momentum(s), cfg.m).angle_about_axis
            except StructureError:
                if angle == "matrix":
                    raise
        return wigner_angle_extended(bp, s, cfg.m).angle_about_axis

    plus = one(+1)
    return plus, (one(-1) if per_branch else plus)


def boosted_state(
    cfg: PairConfig, bp: BoostParams, angle: str = "auto", per_branch: bool = False
) -> MultiPartyPureState:
    """``U(Lambda)`` applied to :func:`lab_state`.

    Momentum labels become ``pi^s = Lambda p^s`` and spins are rotated into
    ``u^s, v^s``. Coinciding labels (alpha = pi/2, alpha = 0, beta = 0) are
    merged, which shrinks those parties to dimension 1; a
    :class:`DegenerateBoostWarning` is issued.
    """
    _check_consistent(cfg, bp)
    if cfg.beta_v == 0.0:
        raise DegenerateScenarioError("beta_v = 0 merges the +p and -p momentum labels")
    momenta = branch_momenta(bp, cfg.m, cfg.p)
    notes = _degeneracy_notes(bp, momenta)
    if notes:
        warnings.warn("; ".join(notes), DegenerateBoostWarning, stacklevel=2)
    return _build_boosted(cfg, momenta, *boost_omegas(cfg, bp, angle, per_branch))


def _build_boosted(cfg, momenta, om_plus, om_minus):
    u_p, v_p = spinor_states(om_plus, +1)
    u_m, v_m = spinor_states(om_minus, -1)
    pi_p, pi_m = momenta.plus, momenta.minus
    branches = [
        (cfg.eta, _particle(pi_p, u_p) + _particle(pi_m, u_m)),
        (cfg.xi * np.exp(1j * cfg.theta), _particle(pi_m, v_m) + _particle(pi_p, v_p)),
    ]
    return state_from_branches(PARTIES, branches)


def _cut(parties, side) -> Bipartition:
    side = set(side)
    other = tuple(p for p in parties if p not in side)
    inside = tuple(p for p in parties if p in side)
    return Bipartition(inside, other) if parties[0] in side else Bipartition(other, inside)


SPIN_CUTS = (
    _cut(PARTIES, [Party.S_MINUS]),
    _cut(PARTIES, [Party.S_PLUS]),
)
SPIN_PAIR_CUT = _cut(PARTIES, [Party.S_MINUS, Party.S_PLUS])


@dataclass
class ResourceReport:
    """Resources of the pair in the lab and boosted frames, the closed-form
    predictions they are checked against and the absolute deviations.

    ``e4_boosted`` is the GME of the pure reduction onto the non-factorizing
    parties when some party factorizes (degenerate boosts), and 0 when all
    eight parties are active: every 4-party reduction is then a separable
    branch mixture (see ``certified_separable``).
    """

    phi: float
    theta: float
    beta: float
    beta_v: float
    alpha: float
    mass: float
    omega: float
    cos_omega: float
    cos_omega_closed: float
    e4_lab: float
    e8_lab: float
    coherence_lab: dict
    e4_boosted: float
    e8: float
    coherence_minus: float
    coherence_plus: float
    coherence_re_minus: float
    coherence_re_plus: float
    invariant_lab: float
    invariant_value: float
    effective_parties: tuple
    argmin: Bipartition
    per_bipartition_entropies: dict
    degenerate: bool
    predictions: dict
    deviations: dict
    notes: list = field(default_factory=list)
    certified_separable: bool | None = None

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values(), default=0.0)

    def to_dict(self) -> dict:
        return {
            "phi": self.phi,
            "theta": self.theta,
            "beta": self.beta,
            "beta_v": self.beta_v,
            "alpha": self.alpha,
            "mass": self.mass,
            "omega": self.omega,
            "cos_omega": self.cos_omega,
            "cos_omega_closed": self.cos_omega_closed,
            "e4_lab": self.e4_lab,
            "e8_lab": self.e8_lab,
            "coherence_lab": {str(k): v for k, v in self.coherence_lab.items()},
            "e4_boosted": self.e4_boosted,
            "e8": self.e8,
            "coherence_minus": self.coherence_minus,
            "coherence_plus": self.coherence_plus,
            "coherence_re_minus": self.coherence_re_minus,
            "coherence_re_plus": self.coherence_re_plus,
            "invariant_lab": self.invariant_lab,
            "invariant_value": self.invariant_value,
            "effective_parties": [str(p) for p in self.effective_parties],
            "argmin": str(self.argmin),
            "per_bipartition_entropies": {str(k): v for k, v in self.per_bipartition_entropies.items()},
            "degenerate": self.degenerate,
            "certified_separable": self.certified_separable,
            "predictions": dict(self.predictions),
            "deviations": dict(self.deviations),
            "max_deviation": self.max_deviation,
            "notes": list(self.notes),
        }


def certify_four_party_separability(state: MultiPartyPureState) -> tuple[bool, float]:
    """Run the structural check on all 70 four-party reductions."""
    worst, ok = 0.0, True
    for keep in combinations(state.parties, 4):
        cert = separability_structure_check(partial_trace(state, keep), state)
        worst = max(worst, cert.max_deviation)
        ok = ok and cert.separable
    return ok, worst


def resource_report(
    cfg: PairConfig, bp: BoostParams, check: bool = True, certify: bool = False, angle: str = "auto"
) -> ResourceReport:
    """Compute every resource in both frames and compare with the closed forms.

    With ``check`` set, a deviation above 1e-8 raises
    :class:`NumericalFailure` (the report is attached as ``.report``).
    Comparisons that assume distinct boosted momentum labels are skipped
    for degenerate boosts, with a note. ``certify`` additionally runs the
    structural separability check on every 4-party reduction. ``angle``
    selects the Wigner-angle source as in :func:`boost_omegas`.
    """
    _check_consistent(cfg, bp)
    s2phi = math.sin(2 * cfg.phi)

    lab = lab_state(cfg)
    e4_lab = gme(lab.squeeze()).value
    e8_lab = gme(lab).value
    coh_lab = {p: coherence_linear(partial_trace(lab, p)) for p in PARTIES}
    c_lab = (coh_lab[Party.S_PLUS], coh_lab[Party.S_MINUS])
    invariant_lab = invariant_combination(e4_lab, e8_lab, *c_lab)

    momenta = branch_momenta(bp, cfg.m, cfg.p)
    notes = _degeneracy_notes(bp, momenta)
    omega, _ = boost_omegas(cfg, bp, angle)
    boosted = _build_boosted(cfg, momenta, omega, omega)
    cos_closed = wigner_cos_closed_form(bp)
    sin2_closed = 1.0 - cos_closed**2

    g = gme(boosted)
    eff = boosted.squeeze()
    active = len(eff.parties)
    e4_boosted = 0.0 if active == len(PARTIES) else gme(eff).value
    rho_m = partial_trace(boosted, Party.S_MINUS)
    rho_p = partial_trace(boosted, Party.S_PLUS)
    c_minus, c_plus = coherence_linear(rho_m), coherence_linear(rho_p)
    invariant_value = invariant_combination(e4_boosted, g.value, c_plus, c_minus)

    predictions = {
        "e4_lab": s2phi,
        "e8_lab": 0.0,
        "coherence_lab_max": 0.0,
        "invariant_lab": s2phi,
        "cos_omega": cos_closed,
        "coherence_minus": 0.5 * sin2_closed,
        "coherence_plus": 0.5 * sin2_closed,
        "invariant_value": s2phi,
    }
    computed = {
        "e4_lab": e4_lab,
        "e8_lab": e8_lab,
        "coherence_lab_max": max(coh_lab.values()),
        "invariant_lab": invariant_lab,
        "cos_omega": math.cos(omega),
        "coherence_minus": c_minus,
        "coherence_plus": c_plus,
        "invariant_value": invariant_value,
    }
    deviations = {k: abs(computed[k] - predictions[k]) for k in predictions}

    entropies = g.entropies
    if momenta.degenerate:
        notes.append("closed forms for e8 and the bipartition entropies skipped (degenerate labels)")
    else:
        base = 0.5 * s2phi**2
        predictions["e8"] = s2phi * abs(cos_closed)
        predictions["entropy_spin"] = base * cos_closed**2
        predictions["entropy_spin_pair"] = base * (1.0 - sin2_closed**2)
        predictions["entropy_other"] = base
        deviations["e8"] = abs(g.value - predictions["e8"])
        deviations["entropy_spin"] = max(abs(entropies[c] - predictions["entropy_spin"]) for c in SPIN_CUTS)
        deviations["entropy_spin_pair"] = abs(entropies[SPIN_PAIR_CUT] - predictions["entropy_spin_pair"])
        special = set(SPIN_CUTS) | {SPIN_PAIR_CUT}
        deviations["entropy_other"] = max(
            abs(v - base) for c, v in entropies.items() if c not in special
        )

    certified = None
    if certify and active == len(PARTIES):
        certified, worst = certify_four_party_separability(boosted)
        notes.append(f"4-party separability certificate: worst deviation {worst:.3e}")

    report = ResourceReport(
        phi=cfg.phi,
        theta=cfg.theta,
        beta=bp.beta,
        beta_v=bp.beta_v,
        alpha=bp.alpha,
        mass=cfg.m,
        omega=omega,
        cos_omega=math.cos(omega),
        cos_omega_closed=cos_closed,
        e4_lab=e4_lab,
        e8_lab=e8_lab,
        coherence_lab=coh_lab,
        e4_boosted=e4_boosted,
        e8=g.value,
        coherence_minus=c_minus,
        coherence_plus=c_plus,
        coherence_re_minus=coherence_relative_entropy(rho_m),
        coherence_re_plus=coherence_relative_entropy(rho_p),
        invariant_lab=invariant_lab,
        invariant_value=invariant_value,
        effective_parties=eff.parties,
        argmin=g.argmin,
        per_bipartition_entropies=entropies,
        degenerate=momenta.degenerate,
        predictions=predictions,
        deviations=deviations,
        notes=notes,
        certified_separable=certified,
    )
    if check:
        bad = {k: v for k, v in deviations.items() if v > REPORT_TOL}
        if bad or certified is False:
            err = NumericalFailure(f"closed-form deviations above {REPORT_TOL}: {bad}")
            err.report = report
            raise err
    return report
