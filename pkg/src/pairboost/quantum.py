"""Multi-party pure states over value-labelled bases, density matrices,
partial traces, entropies and dephasing.

A party's basis is either

* value-labelled: each basis ket is identified by a real number (a momentum
  component), and two labels closer than the merge tolerance are the same
  ket, so distinct labels are orthonormal by construction; or
* fixed: the computational basis ``|0>, ..., |d-1>`` (spins), where a branch
  may place the party in any superposition.

Everything is dense; the largest state handled in practice has 2**8 entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, reduce
from numbers import Real
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, NumericalFailure
from .relativity import MERGE_TOL

__all__ = [
    "Branch",
    "DensityMatrix",
    "MultiPartyPureState",
    "Party",
    "PARTIES",
    "ValueBasis",
    "dephase",
    "linear_entropy",
    "partial_trace",
    "schmidt_linear_entropy",
    "spin_ket",
    "state_from_branches",
    "von_neumann_entropy",
]

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
EIG_CLAMP = 1e-9


class Party(str, Enum):
    """The eight parties of the electron-positron state.

    ``-`` is the electron, ``+`` the positron; ``P0``, ``Px``, ``Pz`` are
    momentum components and ``S`` the spin.
    """

    P0_MINUS = "P0-"
    PX_MINUS = "Px-"
    PZ_MINUS = "Pz-"
    S_MINUS = "S-"
    P0_PLUS = "P0+"
    PX_PLUS = "Px+"
    PZ_PLUS = "Pz+"
    S_PLUS = "S+"

    def __str__(self):
        return self.value

    @property
    def is_spin(self) -> bool:
        return self.value.startswith("S")


PARTIES = tuple(Party)
SPIN_PARTIES = (Party.S_MINUS, Party.S_PLUS)


def spin_ket(s: int) -> np.ndarray:
    """Computational-basis ket ``|s>`` with ``sigma_z |s> = (-1)**s |s>``."""
    ket = np.zeros(2, dtype=complex)
    ket[s] = 1.0
    return ket


@dataclass(frozen=True)
class ValueBasis:
    """Per-party ordered basis labels.

    ``kinds[i]`` is ``"value"`` for value-labelled parties and ``"fixed"`` for
    computational-basis parties, whose labels are ``0..d-1``.
    """

    labels: tuple
    kinds: tuple
    eps_merge: float = MERGE_TOL

    @cached_property
    def dims(self) -> tuple:
        return tuple(len(lab) for lab in self.labels)

    def subset(self, idx) -> ValueBasis:
        return ValueBasis(
            tuple(self.labels[i] for i in idx), tuple(self.kinds[i] for i in idx), self.eps_merge
        )


class Branch(NamedTuple):
    """One term of a superposition: a coefficient times a product of local kets."""

    coefficient: complex
    kets: tuple


def _normalize_keep(parties, keep):
    if isinstance(keep, (str, Party)):
        keep = (keep,)
    keep = list(keep)
    if not keep:
        raise DomainError("keep must name at least one party")
    for p in keep:
        if p not in parties:
            raise DomainError(f"unknown party {p!r}; state has {[str(q) for q in parties]}")
    if len(set(keep)) != len(keep):
        raise DomainError(f"duplicate parties in {keep!r}")
    keep_set = set(keep)
    # kept parties are returned in the state's own order
    return [i for i, p in enumerate(parties) if p in keep_set]


@dataclass(frozen=True, eq=False)
class MultiPartyPureState:
    """Normalized pure state with amplitude tensor indexed by per-party basis indices."""

    parties: tuple
    basis: ValueBasis
    amplitudes: np.ndarray
    branches: tuple | None = None

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.shape != self.basis.dims or len(self.parties) != len(self.basis.dims):
            raise DomainError(f"amplitude shape {amp.shape} does not match basis {self.basis.dims}")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise NumericalFailure(f"state norm {norm!r} differs from 1")
        amp.setflags(write=False)
        object.__setattr__(self, "parties", tuple(self.parties))
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dims(self) -> tuple:
        return self.basis.dims

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def __len__(self):
        return len(self.parties)

    def index(self, party) -> int:
        return self.parties.index(party)

    def squeeze(self) -> MultiPartyPureState:
        """Drop dimension-1 parties. They carry only a global phase, so the
        result is the exact pure state of the remaining parties."""
        idx = [i for i, d in enumerate(self.dims) if d > 1]
        amp = self.amplitudes.reshape([self.dims[i] for i in idx])
        dropped = [i for i, d in enumerate(self.dims) if d == 1]
        if dropped and self.branches is not None:
            # fold the dropped parties' scalar kets into the coefficients
            branches = tuple(
                Branch(
                    b.coefficient * np.prod([b.kets[i][0] for i in dropped]),
                    tuple(b.kets[i] for i in idx),
                )
                for b in self.branches
            )
        elif self.branches is not None:
            branches = self.branches
        else:
            branches = None
        return MultiPartyPureState(
            tuple(self.parties[i] for i in idx), self.basis.subset(idx), amp, branches
        )

    def density(self) -> DensityMatrix:
        return partial_trace(self, self.parties)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace operator on ``parties``; ``matrix`` is indexed by
    the row-major flattening of the per-party basis indices."""

    parties: tuple
    basis: ValueBasis
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        d = int(np.prod(self.basis.dims))
        if m.shape != (d, d):
            raise DomainError(f"matrix shape {m.shape} does not match basis dims {self.basis.dims}")
        herm = float(np.max(np.abs(m - m.conj().T))) if d else 0.0
        if herm > HERMITIAN_TOL:
            raise NumericalFailure(f"density matrix not Hermitian (deviation {herm:.3e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > NORM_TOL:
            raise NumericalFailure(f"density matrix trace {tr!r} differs from 1")
        m.setflags(write=False)
        object.__setattr__(self, "parties", tuple(self.parties))
        object.__setattr__(self, "matrix", m)

    @property
    def dims(self) -> tuple:
        return self.basis.dims

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues with rounding negatives (down to -1e-9) clamped to zero."""
        w = np.linalg.eigvalsh(self.matrix)
        if w.size and w.min() < -EIG_CLAMP:
            raise NumericalFailure(f"density matrix has eigenvalue {w.min():.3e} < -1e-9")
        return np.clip(w, 0.0, None)

    def purity(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))


def _label_index(labels: list, value: float, eps: float) -> int:
    for i, lab in enumerate(labels):
        if abs(lab - value) <= eps:
            return i
    labels.append(float(value))
    return len(labels) - 1


def state_from_branches(parties: Sequence, branches: Sequence, eps_merge: float = MERGE_TOL) -> MultiPartyPureState:
    """Build ``sum_k c_k |e_k1> ... |e_kn>`` from ``(c_k, entries_k)`` pairs.

    Each entry is a real value label (value-labelled party) or a ket vector
    (fixed-basis party). Value labels are merged within ``eps_merge``; basis
    index 0 goes to the label met first. A party whose label is the same in
    every branch ends up with dimension 1.
    """
    parties = tuple(parties)
    n = len(parties)
    if not branches:
        raise DomainError("at least one branch is required")
    if len(set(parties)) != n:
        raise DomainError("party labels must be distinct")
    for _, entries in branches:
        if len(entries) != n:
            raise DomainError(f"branch supplies {len(entries)} entries for {n} parties")

    labels, kinds = [], []
    kets = [[None] * n for _ in branches]
    for i in range(n):
        column = [entries[i] for _, entries in branches]
        if all(isinstance(e, Real) for e in column):
            lab: list = []
            idx = [_label_index(lab, float(e), eps_merge) for e in column]
            for k, j in enumerate(idx):
                kets[k][i] = np.eye(len(lab), dtype=complex)[j]
            labels.append(tuple(lab))
            kinds.append("value")
        else:
            vecs = [np.asarray(e, dtype=complex).reshape(-1) for e in column]
            d = vecs[0].size
            if any(v.size != d for v in vecs) or any(isinstance(e, Real) for e in column):
                raise DomainError(f"party {parties[i]!r} mixes value labels and kets, or ket sizes")
            for k, v in enumerate(vecs):
                kets[k][i] = v
            labels.append(tuple(range(d)))
            kinds.append("fixed")

    coeffs = np.array([complex(c) for c, _ in branches])
    if not np.any(coeffs):
        raise DomainError("all branch coefficients are zero")
    amp = sum(c * reduce(np.multiply.outer, ks) for c, ks in zip(coeffs, kets))
    norm = np.linalg.norm(amp)
    if norm == 0.0:
        raise DomainError("branches cancel to the zero vector")
    basis = ValueBasis(tuple(labels), tuple(kinds), eps_merge)
    stored = tuple(Branch(c / norm, tuple(ks)) for c, ks in zip(coeffs, kets))
    return MultiPartyPureState(parties, basis, amp / norm, stored)


def partial_trace(state, keep) -> DensityMatrix:
    """Reduced density matrix of ``keep`` (kept in the source's party order)."""
    idx = _normalize_keep(state.parties, keep)
    n = len(state.parties)
    rest = [i for i in range(n) if i not in idx]
    dims = state.dims
    d_keep = int(np.prod([dims[i] for i in idx]))
    if isinstance(state, MultiPartyPureState):
        m = np.transpose(state.amplitudes, idx + rest).reshape(d_keep, -1)
        rho = m @ m.conj().T
    elif isinstance(state, DensityMatrix):
        t = state.matrix.reshape(dims + dims)
        ket = list(range(n))
        bra = [n + i if i in idx else i for i in range(n)]
        out = idx + [n + i for i in idx]
        rho = np.einsum(t, ket + bra, out).reshape(d_keep, d_keep)
    else:
        raise DomainError(f"cannot trace a {type(state).__name__}")
    return DensityMatrix(tuple(state.parties[i] for i in idx), state.basis.subset(idx), rho)


def linear_entropy(rho: DensityMatrix) -> float:
    """``1 - Tr(rho^2)``, in ``[0, 1 - 1/d]``."""
    return max(0.0, 1.0 - rho.purity())


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """``-Tr(rho ln rho)`` in nats."""
    w = rho.eigenvalues()
    w = w[w > 0]
    return float(-np.sum(w * np.log(w)))


def _check_basis(rho: DensityMatrix, basis) -> None:
    if basis is not None and basis != rho.basis:
        raise DomainError("dephasing basis does not match the stored basis of rho")


def dephase(rho: DensityMatrix, basis: ValueBasis | None = None) -> DensityMatrix:
    """Remove every off-diagonal entry in the stored (computational) basis."""
    _check_basis(rho, basis)
    return DensityMatrix(rho.parties, rho.basis, np.diag(np.diag(rho.matrix)))


def _pairwise_mixedness(lam: np.ndarray) -> np.ndarray:
    """``(sum lam)^2 - sum lam^2`` along the last axis, summed from positive
    pairwise products so that nearly pure spectra keep full relative accuracy."""
    lam = -np.sort(-lam, axis=-1)
    tail = np.cumsum(lam[..., ::-1], axis=-1)[..., ::-1]
    tail = np.concatenate([tail[..., 1:], np.zeros(lam.shape[:-1] + (1,))], axis=-1)
    return 2.0 * np.sum(lam * tail, axis=-1)


def schmidt_linear_entropy(m: np.ndarray) -> np.ndarray:
    """Linear entropy of the reduced state of a pure bipartite amplitude
    matrix (or a stack of them), via its Schmidt spectrum."""
    s = np.linalg.svd(m, compute_uv=False)
    lam = s**2
    total = np.sum(lam, axis=-1)
    return _pairwise_mixedness(lam) / total**2

