"""Quantum-resource quantifiers: genuine multipartite entanglement via the
generalized concurrence, linear-metric and relative-entropy coherence, a
structural separability certificate and the composite frame invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, NumericalFailure
from .quantum import (
    Branch,
    DensityMatrix,
    MultiPartyPureState,
    ValueBasis,
    _check_basis,
    dephase,
    schmidt_linear_entropy,
    von_neumann_entropy,
)

__all__ = [
    "Bipartition",
    "GMEResult",
    "SeparabilityCertificate",
    "bipartition_entropies",
    "coherence_linear",
    "coherence_relative_entropy",
    "enumerate_bipartitions",
    "gme",
    "invariant_combination",
    "separability_structure_check",
]

SEPARABILITY_TOL = 1e-10
# below this the Gram-matrix purity loses digits to cancellation; switch to
# the Schmidt spectrum
_SVD_SWITCH = 1e-8
_TIE_TOL = 1e-14


@dataclass(frozen=True)
class Bipartition:
    """Split of the parties into ``part_a | part_b``; ``part_a`` holds the first party."""

    part_a: tuple
    part_b: tuple

    @property
    def size_class(self) -> str:
        k = min(len(self.part_a), len(self.part_b))
        return f"{k}|{len(self.part_a) + len(self.part_b) - k}"

    def __str__(self):
        return "".join(map(str, self.part_a)) + "|" + "".join(map(str, self.part_b))


@lru_cache(maxsize=None)
def _bipartition_indices(n: int) -> tuple:
    if n < 2:
        raise DomainError(f"need at least 2 parties for a bipartition, got {n}")
    out = []
    everything = range(n)
    for k in range(1, n // 2 + 1):
        for combo in combinations(everything, k):
            if 2 * k == n and 0 not in combo:
                continue
            rest = tuple(i for i in everything if i not in combo)
            out.append((combo, rest) if 0 in combo else (rest, combo))
    return tuple(out)


def enumerate_bipartitions(parties) -> list[Bipartition]:
    """All ``2**(n-1) - 1`` bipartitions of ``parties`` (or of ``range(n)`` for an int).

    Ordered by the size of the smaller side, then lexicographically.
    """
    names = tuple(range(parties)) if isinstance(parties, int) else tuple(parties)
    return list(_named_bipartitions(names))


@lru_cache(maxsize=256)
def _named_bipartitions(names: tuple) -> tuple:
    return tuple(
        Bipartition(tuple(names[i] for i in a), tuple(names[i] for i in b))
        for a, b in _bipartition_indices(len(names))
    )


@lru_cache(maxsize=256)
def _entropy_plan(dims: tuple):
    """Gather indices reshaping the flat amplitude vector into the coefficient
    matrix of every bipartition, grouped by matrix shape for batched algebra."""
    n = len(dims)
    flat = np.arange(int(np.prod(dims))).reshape(dims)
    groups: dict = {}
    for pos, (a, b) in enumerate(_bipartition_indices(n)):
        da = int(np.prod([dims[i] for i in a]))
        db = int(np.prod([dims[i] for i in b]))
        # rows on the smaller side keeps the Gram matrix small
        rows, cols = (a, b) if da <= db else (b, a)
        idx = np.transpose(flat, rows + cols).reshape(min(da, db), max(da, db))
        groups.setdefault(idx.shape, ([], []))
        groups[idx.shape][0].append(pos)
        groups[idx.shape][1].append(idx)
    return [(np.array(p), np.stack(ix)) for p, ix in groups.values()]


def _bipartition_linear_entropies(state: MultiPartyPureState) -> np.ndarray:
    psi = state.vector
    out = np.empty(len(_bipartition_indices(len(state.dims))))
    for positions, idx in _entropy_plan(state.dims):
        m = psi[idx]
        gram = m @ np.conj(np.swapaxes(m, -1, -2))
        norm2 = np.einsum("kij,kij->k", m.real, m.real) + np.einsum("kij,kij->k", m.imag, m.imag)
        lin = 1.0 - np.sum(np.abs(gram) ** 2, axis=(-1, -2)) / norm2**2
        small = lin < _SVD_SWITCH
        if np.any(small):
            lin[small] = schmidt_linear_entropy(m[small])
        out[positions] = lin
    return out


def bipartition_entropies(state: MultiPartyPureState) -> dict:
    """Linear entropy of the reduced state of every bipartition, in
    enumeration order. Both sides of a pure-state cut share the value."""
    values = _bipartition_linear_entropies(state)
    return dict(zip(_named_bipartitions(state.parties), values.tolist()))


class GMEResult(NamedTuple):
    value: float
    argmin: Bipartition
    entropies: dict


def gme(state: MultiPartyPureState) -> GMEResult:
    """Generalized concurrence ``min_cuts sqrt(2 L(rho_cut))`` of a pure state.

    Dimension-1 parties stay in the lattice, so a factorizing party forces 0.
    Values within 1e-14 of the minimum count as ties and the first cut in
    enumeration order wins.
    """
    if len(state.parties) < 2:
        raise DomainError("generalized concurrence needs at least 2 parties")
    values = _bipartition_linear_entropies(state)
    lo = values.min()
    pos = int(np.flatnonzero(values <= lo + _TIE_TOL)[0])
    cuts = _named_bipartitions(state.parties)
    return GMEResult(
        math.sqrt(2.0 * max(0.0, float(lo))), cuts[pos], dict(zip(cuts, values.tolist()))
    )


def coherence_linear(rho: DensityMatrix, basis: ValueBasis | None = None) -> float:
    """Squared Hilbert-Schmidt norm of the off-diagonal part of ``rho``,
    equal to ``Tr(rho^2) - Tr(rho_diag^2)``."""
    _check_basis(rho, basis)
    off = rho.matrix - np.diag(np.diag(rho.matrix))
    return float(np.sum(np.abs(off) ** 2))


def coherence_relative_entropy(rho: DensityMatrix, basis: ValueBasis | None = None) -> float:
    """``S(dephase(rho)) - S(rho)`` with natural logarithms."""
    value = von_neumann_entropy(dephase(rho, basis)) - von_neumann_entropy(rho)
    if value < -1e-9:
        raise NumericalFailure(f"relative entropy of coherence came out negative ({value:.3e})")
    return max(0.0, value)


class SeparabilityCertificate(NamedTuple):
    separable: bool
    max_deviation: float

    def __bool__(self):
        return self.separable


def separability_structure_check(
    rho: DensityMatrix, branches, parties: Sequence | None = None
) -> SeparabilityCertificate:
    """Check ``rho == sum_k |c_k|^2 (x)_i |b_ki><b_ki|`` built from the branches.

    ``branches`` is a state carrying its branch decomposition, or a sequence
    of :class:`Branch` whose kets follow ``parties``. Agreement to 1e-10 means
    the traced-out parts of the branches are orthogonal and ``rho`` is an
    explicit mixture of product states, hence fully separable.
    """
    if isinstance(branches, MultiPartyPureState):
        parties = branches.parties
        branches = branches.branches
        if branches is None:
            raise DomainError("state carries no branch decomposition")
    if parties is None:
        raise DomainError("parties must be given alongside raw branches")
    parties = tuple(parties)
    idx = [parties.index(p) for p in rho.parties]
    sigma = np.zeros_like(rho.matrix)
    for b in branches:
        b = Branch(*b)
        ket = b.kets[idx[0]]
        for i in idx[1:]:
            ket = np.kron(ket, b.kets[i])
        sigma = sigma + abs(b.coefficient) ** 2 * np.outer(ket, ket.conj())
    dev = float(np.max(np.abs(rho.matrix - sigma)))
    return SeparabilityCertificate(dev <= SEPARABILITY_TOL, dev)


def invariant_combination(e4: float, e8: float, c_plus: float, c_minus: float) -> float:
    """``(e4 + e8) / sqrt(1 - (c_plus + c_minus))``."""
    total = c_plus + c_minus
    if total >= 1.0:
        raise DomainError(f"coherence sum {total!r} must be below 1")
    return (e4 + e8) / math.sqrt(1.0 - total)
