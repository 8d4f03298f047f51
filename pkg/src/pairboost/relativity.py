"""Special-relativity kinematics for the pair scenario.

Natural units (c = 1) throughout. Four-vectors are ordered ``(t, x, y, z)``
and Lorentz transforms act on column vectors in that order.

The scenario geometry: a particle moving along ``+z`` (``s = +1``) or ``-z``
(``s = -1``) with speed ``beta_v``, observed from a frame obtained by an
active boost of speed ``beta`` along ``(-sin alpha, 0, cos alpha)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np

from .errors import DomainError, PrecisionError, StructureError

__all__ = [
    "BETA_MAX",
    "MERGE_TOL",
    "METRIC",
    "BoostParams",
    "BranchMomenta",
    "FourVector",
    "LorentzTransform",
    "WignerRotation",
    "boost_transform",
    "branch_momenta",
    "gamma",
    "standard_boost",
    "wigner_angle",
    "wigner_angle_extended",
    "wigner_angles_batch",
    "wigner_cos_closed_form",
    "wigner_transform",
]

BETA_MAX = 1.0 - 1e-12
MERGE_TOL = 1e-9
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
METRIC.setflags(write=False)

_METRIC_TOL = 1e-10
_SHELL_TOL = 1e-9
_STRUCTURE_TOL = 1e-9


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FourVector:
    """Energy-momentum four-vector ``(t, x, y, z)``."""

    t: float
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, a) -> FourVector:
        t, x, y, z = (float(v) for v in np.asarray(a, dtype=float).reshape(4))
        return cls(t, x, y, z)

    @property
    def array(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y, self.z])

    @property
    def spatial(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def minkowski_norm2(self) -> float:
        return self.t**2 - self.x**2 - self.y**2 - self.z**2


def _lorentz_violation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m.T @ METRIC @ m - METRIC)))


@dataclass(frozen=True, eq=False)
class LorentzTransform:
    """A proper orthochronous Lorentz transformation.

    Construction checks ``L^T g L = g``. The tolerance is 1e-10 scaled by the
    squared largest entry, since rounding in the product grows like gamma^2.
    """

    matrix: np.ndarray
    scale: float | None = None

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.shape != (4, 4):
            raise DomainError(f"Lorentz matrix must be 4x4, got {m.shape}")
        scale = self.scale
        if scale is None:
            scale = max(1.0, float(np.max(np.abs(m)))) ** 2
        object.__setattr__(self, "scale", scale)
        violation = _lorentz_violation(m)
        if violation > _METRIC_TOL * scale:
            raise PrecisionError(
                f"matrix does not preserve the Minkowski metric (violation {violation:.3e})",
                violation,
            )
        # once the metric holds, the spatial block's determinant is +-gamma and
        # carries the parity; the full 4x4 determinant drowns in rounding
        if m[0, 0] < 1.0 - _METRIC_TOL * scale or np.linalg.det(m[1:, 1:]) < 0:
            raise DomainError("transform is not proper orthochronous")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> LorentzTransform:
        return cls(np.eye(4))

    def inverse(self) -> LorentzTransform:
        # g L^T g is the exact inverse of a Lorentz matrix; avoids a solve.
        return LorentzTransform(METRIC @ self.matrix.T @ METRIC, self.scale)

    def metric_violation(self) -> float:
        return _lorentz_violation(self.matrix)

    def __matmul__(self, other):
        if isinstance(other, LorentzTransform):
            # rounding in a product is bounded by the factors' magnitudes, not the result's
            return LorentzTransform(self.matrix @ other.matrix, self.scale * other.scale)
        if isinstance(other, FourVector):
            return FourVector.from_array(self.matrix @ other.array)
        return NotImplemented

    def __repr__(self):
        return f"LorentzTransform({np.array2string(self.matrix, precision=6)})"


@dataclass(frozen=True)
class BoostParams:
    """Boost speed ``beta``, particle speed ``beta_v`` and boost angle ``alpha``.

    ``alpha`` is measured from ``+z`` toward ``-x``.
    """

    beta: float
    beta_v: float
    alpha: float

    def __post_init__(self):
        for name in ("beta", "beta_v"):
            v = getattr(self, name)
            if not (0.0 <= v <= BETA_MAX):
                raise DomainError(f"{name}={v!r} outside [0, 1 - 1e-12]")
        if not (0.0 <= self.alpha <= math.pi):
            raise DomainError(f"alpha={self.alpha!r} outside [0, pi]")

    @property
    def gamma(self) -> float:
        return gamma(self.beta)

    @property
    def gamma_v(self) -> float:
        return gamma(self.beta_v)

    @property
    def direction(self) -> np.ndarray:
        return np.array([-math.sin(self.alpha), 0.0, math.cos(self.alpha)])

    def boost(self) -> LorentzTransform:
        return boost_transform(self.beta, self.direction)


@dataclass(frozen=True)
class WignerRotation:
    """Rotation angle about ``+y`` plus the branch sign ``s`` of the momentum.

    ``omega`` follows the layout of the rotation matrix
    ``[[c, 0, s], [0, 1, 0], [-s, 0, c]]`` in ``(x, y, z)``, i.e. it is the
    angle about ``+y``. The physical axis of the scenario is ``axis_sign * y``,
    about which the angle is ``angle_about_axis``.
    """

    omega: float
    axis_sign: int = 1

    @property
    def cos(self) -> float:
        return math.cos(self.omega)

    @property
    def angle_about_axis(self) -> float:
        return self.axis_sign * self.omega


class BranchMomenta(NamedTuple):
    plus: FourVector
    minus: FourVector
    t_equal: bool
    x_equal: bool
    z_equal: bool

    @property
    def degenerate(self) -> bool:
        return self.t_equal or self.x_equal or self.z_equal


def gamma(beta: float) -> float:
    """Lorentz factor ``(1 - beta**2) ** -0.5``."""
    if not (0.0 <= beta < 1.0):
        raise DomainError(f"beta={beta!r} outside [0, 1)")
    return 1.0 / math.sqrt((1.0 - beta) * (1.0 + beta))


def _boost_matrix(g, gb, n):
    m = np.eye(4)
    m[0, 0] = g
    m[0, 1:] = gb * n
    m[1:, 0] = gb * n
    m[1:, 1:] += (g - 1.0) * np.outer(n, n)
    return m


def boost_transform(beta: float, direction) -> LorentzTransform:
    """Pure (active) boost giving a particle at rest the velocity ``beta * direction``."""
    n = np.asarray(direction, dtype=float).reshape(3)
    if abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise DomainError(f"direction {n} is not a unit vector")
    if not (0.0 <= beta <= BETA_MAX):
        raise DomainError(f"beta={beta!r} outside [0, 1 - 1e-12]")
    g = gamma(beta)
    return LorentzTransform(_boost_matrix(g, g * beta, n))


def _check_on_shell(p: FourVector, m: float) -> None:
    if m <= 0:
        raise DomainError(f"mass must be positive, got {m!r}")
    if p.t <= 0:
        raise PrecisionError(f"energy must be positive, got {p.t!r}", p.t)
    # relative to t^2 so that large momenta are judged fairly
    violation = abs(p.minkowski_norm2() - m * m) / max(1.0, p.t * p.t)
    if violation > _SHELL_TOL:
        raise PrecisionError(
            f"momentum {p} is off the mass shell m={m} (relative violation {violation:.3e})",
            violation,
        )


def standard_boost(p: FourVector, m: float = 1.0) -> LorentzTransform:
    """The pure boost ``L(p)`` carrying the rest momentum ``(m, 0, 0, 0)`` to ``p``."""
    _check_on_shell(p, m)
    q = p.spatial
    L = np.eye(4)
    L[0, 0] = p.t / m
    L[0, 1:] = q / m
    L[1:, 0] = q / m
    L[1:, 1:] += np.outer(q, q) / (m * (p.t + m))
    return LorentzTransform(L)


def _on_shell(p: FourVector, m: float) -> FourVector:
    # re-derive the energy so rounding in a transformed momentum cannot push it off shell
    q = p.spatial
    return FourVector(math.sqrt(m * m + float(q @ q)), *q)


def wigner_transform(lam: LorentzTransform, p: FourVector, m: float = 1.0) -> LorentzTransform:
    """``W(lam, p) = L^{-1}(lam p) lam L(p)``, an element of the little group of
    ``(m, 0, 0, 0)``."""
    L_p = standard_boost(p, m)
    L_q = standard_boost(_on_shell(lam @ p, m), m)
    try:
        return L_q.inverse() @ lam @ L_p
    except (DomainError, PrecisionError) as exc:
        # valid factors, so a rejected product means rounding took over
        raise StructureError(f"Wigner transform lost to rounding: {exc}") from exc


def _structure_deviation(w: np.ndarray) -> float:
    e_t = np.array([1.0, 0.0, 0.0, 0.0])
    e_y = np.array([0.0, 0.0, 1.0, 0.0])
    return float(
        max(
            np.max(np.abs(w[0] - e_t)),
            np.max(np.abs(w[:, 0] - e_t)),
            np.max(np.abs(w[2] - e_y)),
            np.max(np.abs(w[:, 2] - e_y)),
        )
    )


def wigner_angle(lam: LorentzTransform, p: FourVector, m: float = 1.0) -> WignerRotation:
    """Signed rotation angle of ``W(lam, p)`` about ``+y``.

    Raises ``StructureError`` unless W is a pure y-rotation to 1e-9. For
    boosts in the x-z plane this holds analytically; in float64 it holds up to
    roughly ``beta, beta_v <= 0.9999`` before rounding in the product wins.
    """
    w = wigner_transform(lam, p, m).matrix
    dev = _structure_deviation(w)
    if dev > _STRUCTURE_TOL:
        raise StructureError(
            f"Wigner transform is not a rotation about y (deviation {dev:.3e})"
        )
    omega = math.atan2(w[1, 3], w[1, 1])
    return WignerRotation(omega, 1 if p.z >= 0 else -1)


def _boost_stack(g, gb, n):
    # g, gb: (k,); n: (k, 3) unit vectors
    k = g.shape[0]
    m = np.zeros((k, 4, 4))
    m[:, 0, 0] = g
    m[:, 0, 1:] = m[:, 1:, 0] = gb[:, None] * n
    m[:, 1:, 1:] = np.eye(3) + (g - 1.0)[:, None, None] * n[:, :, None] * n[:, None, :]
    return m


def wigner_angles_batch(beta, beta_v, alpha, s: int = 1, m: float = 1.0) -> np.ndarray:
    """Vectorized :func:`wigner_angle` for the branch-``s`` momentum over
    broadcast arrays of ``(beta, beta_v, alpha)``.

    Same float64 product ``L^{-1}(Lambda p) Lambda L(p)``; points whose
    result fails the y-rotation structure check are recomputed with
    :func:`wigner_angle_extended`.
    """
    beta, beta_v, alpha = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (beta, beta_v, alpha)))
    shape = beta.shape
    b, bv, a = beta.ravel(), beta_v.ravel(), alpha.ravel()
    for name, v, hi in (("beta", b, BETA_MAX), ("beta_v", bv, BETA_MAX), ("alpha", a, math.pi)):
        if v.size and not (np.all(v >= 0.0) and np.all(v <= hi)):
            raise DomainError(f"{name} outside [0, {hi}]")
    if not m > 0:
        raise DomainError(f"mass must be positive, got {m!r}")
    g = 1.0 / np.sqrt((1.0 - b) * (1.0 + b))
    gv = 1.0 / np.sqrt((1.0 - bv) * (1.0 + bv))
    n = np.stack([-np.sin(a), np.zeros_like(a), np.cos(a)], axis=1)
    lam = _boost_stack(g, g * b, n)

    p = np.zeros((b.size, 4))
    p[:, 0], p[:, 3] = gv * m, s * gv * m * bv
    q = np.einsum("kij,kj->ki", lam, p)
    q[:, 0] = np.sqrt(m * m + np.sum(q[:, 1:] ** 2, axis=1))

    def std(v):
        mag = np.linalg.norm(v[:, 1:], axis=1)
        safe = np.where(mag > 0, mag, 1.0)
        dirs = np.where(mag[:, None] > 0, v[:, 1:] / safe[:, None], [0.0, 0.0, 1.0])
        return _boost_stack(v[:, 0] / m, mag / m, dirs)

    lq = std(q)
    lq_inv = METRIC @ np.swapaxes(lq, 1, 2) @ METRIC
    w = lq_inv @ lam @ std(p)
    dev = np.max(
        np.abs(
            np.concatenate(
                [w[:, 0, :] - [1, 0, 0, 0], w[:, :, 0] - [1, 0, 0, 0], w[:, 2, :] - [0, 0, 1, 0], w[:, :, 2] - [0, 0, 1, 0]],
                axis=1,
            )
        ),
        axis=1,
    )
    omega = np.arctan2(w[:, 1, 3], w[:, 1, 1])
    for i in np.flatnonzero(~(dev <= _STRUCTURE_TOL)):
        omega[i] = wigner_angle_extended(BoostParams(b[i], bv[i], a[i]), s, m).omega
    return omega.reshape(shape)


def wigner_angle_extended(bp: BoostParams, s: int = 1, m: float = 1.0, dps: int = 60) -> WignerRotation:
    """:func:`wigner_angle` for the branch-``s`` momentum, built in ``dps``-digit
    arithmetic from the float inputs.

    The float64 product cancels terms of size ``gamma^2 gamma_v^2``; carrying
    extra digits keeps the route usable up to ``BETA_MAX``.
    """
    if s not in (1, -1):
        raise DomainError(f"branch sign must be +1 or -1, got {s!r}")
    if not m > 0:
        raise DomainError(f"mass must be positive, got {m!r}")
    with mpmath.workdps(dps):
        one = mpmath.mpf(1)
        g_mat = mpmath.diag([1, -1, -1, -1])

        def boost(gam, gb, n):
            out = mpmath.eye(4)
            out[0, 0] = gam
            for i in range(3):
                out[0, i + 1] = out[i + 1, 0] = gb * n[i]
                for j in range(3):
                    out[i + 1, j + 1] += (gam - 1) * n[i] * n[j]
            return out

        def std(p):
            mag = mpmath.sqrt(sum(c * c for c in p[1:]))
            n = [c / mag for c in p[1:]] if mag else [0, 0, 1]
            return boost(p[0] / m, mag / m, n)

        beta, beta_v, alpha = (mpmath.mpf(v) for v in (bp.beta, bp.beta_v, bp.alpha))
        gam = one / mpmath.sqrt(1 - beta * beta)
        gam_v = one / mpmath.sqrt(1 - beta_v * beta_v)
        lam = boost(gam, gam * beta, [-mpmath.sin(alpha), 0, mpmath.cos(alpha)])
        p = [gam_v * m, 0, 0, s * gam_v * m * beta_v]
        q = lam * mpmath.matrix(p)
        w = g_mat * std(list(q)).T * g_mat * lam * std(p)
        dev = max(
            abs(w[0, 0] - 1), abs(w[2, 2] - 1),
            *(abs(w[0, k]) + abs(w[k, 0]) for k in (1, 2, 3)),
            *(abs(w[2, k]) + abs(w[k, 2]) for k in (1, 3)),
        )
        if dev > _STRUCTURE_TOL:
            raise StructureError(f"Wigner transform is not a rotation about y (deviation {float(dev):.3e})")
        omega = float(mpmath.atan2(w[1, 3], w[1, 1]))
    return WignerRotation(omega, s)


def wigner_cos_closed_form(bp: BoostParams) -> float:
    """Closed-form cosine of the Wigner angle for the ``+z`` particle."""
    g, gv = bp.gamma, bp.gamma_v
    c = math.cos(bp.alpha)
    bbgg = bp.beta * bp.beta_v * g * gv
    num = g + gv + bbgg * c + (1.0 - g - gv + g * gv) * c * c
    den = 1.0 + g * gv + bbgg * c
    return num / den


def branch_momenta(bp: BoostParams, m: float = 1.0, p_mag: float | None = None) -> BranchMomenta:
    """Boosted momenta ``pi^s = Lambda (p0, 0, 0, s p)`` for both branches.

    ``p_mag`` defaults to ``gamma_v m beta_v``; if given it must agree with it.
    The equality flags compare components with the absolute merge tolerance.
    """
    expected = bp.gamma_v * m * bp.beta_v
    if p_mag is None:
        p_mag = expected
    elif abs(p_mag - expected) > _SHELL_TOL * max(1.0, expected):
        raise DomainError(f"p_mag={p_mag!r} inconsistent with beta_v (expected {expected!r})")
    p0 = math.sqrt(m * m + p_mag * p_mag)
    lam = bp.boost()
    plus = lam @ FourVector(p0, 0.0, 0.0, p_mag)
    minus = lam @ FourVector(p0, 0.0, 0.0, -p_mag)
    return BranchMomenta(
        plus,
        minus,
        t_equal=abs(plus.t - minus.t) <= MERGE_TOL,
        x_equal=abs(plus.x - minus.x) <= MERGE_TOL,
        z_equal=abs(plus.z - minus.z) <= MERGE_TOL,
    )
