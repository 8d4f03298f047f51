import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairboost import (
    PARTIES,
    DensityMatrix,
    DomainError,
    NumericalFailure,
    PairConfig,
    Party,
    ValueBasis,
    dephase,
    lab_state,
    linear_entropy,
    partial_trace,
    spin_ket,
    state_from_branches,
    von_neumann_entropy,
)
from pairboost.quantum import schmidt_linear_entropy

ZERO, ONE = spin_ket(0), spin_ket(1)


def _qubit_rho(m):
    return DensityMatrix(("q",), ValueBasis(((0, 1),), ("fixed",)), np.array(m, dtype=complex))


def _random_state(rng, n=5, k=3):
    """Random k-branch state over n qubit parties with generic ket content."""
    branches = []
    for _ in range(k):
        kets = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(n)]
        branches.append((rng.normal() + 1j * rng.normal(), [v / np.linalg.norm(v) for v in kets]))
    return state_from_branches(range(n), branches)


class TestStateConstruction:
    def test_single_branch_is_product(self):
        s = state_from_branches(["a", "b", "c"], [(1.0, [0.3, ZERO, ONE])])
        assert s.dims == (1, 2, 2)
        for p in s.parties:
            assert partial_trace(s, p).purity() == pytest.approx(1.0, abs=1e-12)

    def test_lab_state_dimensions(self):
        s = lab_state(PairConfig(math.pi / 4, 0.6))
        dims = dict(zip(s.parties, s.dims))
        for p in PARTIES:
            assert dims[p] == (1 if p.value[:2] in ("P0", "Px") else 2)

    def test_identical_branches_collapse(self):
        s = state_from_branches(["a", "b"], [(1.0, [0.5, 0.7]), (1j, [0.5, 0.7])])
        assert s.dims == (1, 1)
        assert abs(s.vector[0]) == pytest.approx(1.0)

    def test_labels_merge_within_tolerance(self):
        s = state_from_branches(["a"], [(1, [1.0]), (1, [1.0 + 1e-12])])
        assert s.dims == (1,)
        s = state_from_branches(["a"], [(1, [1.0]), (1, [1.0 + 1e-6])])
        assert s.dims == (2,)

    def test_first_label_gets_index_zero(self):
        s = state_from_branches(["a"], [(0.6, [-2.0]), (0.8, [5.0])])
        assert s.basis.labels[0] == (-2.0, 5.0)
        assert s.vector == pytest.approx([0.6, 0.8])

    @pytest.mark.parametrize(
        "branches",
        [[], [(0.0, [1.0])], [(1.0, [1.0, 2.0])], [(1.0, [1.0]), (1.0, [ZERO])]],
    )
    def test_invalid(self, branches):
        with pytest.raises(DomainError):
            state_from_branches(["a"], branches)

    def test_normalization_random(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            s = _random_state(rng)
            assert np.linalg.norm(s.vector) == pytest.approx(1.0, abs=1e-10)


class TestPartialTrace:
    def test_lab_momentum_reduction(self):
        phi = 0.4
        rho = partial_trace(lab_state(PairConfig(phi, 0.6)), Party.PZ_MINUS)
        assert np.allclose(rho.matrix, np.diag([math.cos(phi) ** 2, math.sin(phi) ** 2]), atol=1e-14)

    def test_nested_traces_agree(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            s = _random_state(rng, n=6)
            direct = partial_trace(s, [0, 3])
            via = partial_trace(partial_trace(s, [0, 2, 3, 5]), [0, 3])
            assert np.max(np.abs(direct.matrix - via.matrix)) <= 1e-12

    def test_keep_order_follows_state(self):
        s = _random_state(np.random.default_rng(0), n=3)
        assert partial_trace(s, [2, 0]).parties == (0, 2)

    def test_trace_hermitian_positive(self):
        rng = np.random.default_rng(9)
        s = _random_state(rng, n=6, k=4)
        for k in (1, 2, 3):
            for keep in combinations(range(6), k):
                rho = partial_trace(s, keep)
                assert abs(np.trace(rho.matrix) - 1) <= 1e-10
                assert np.max(np.abs(rho.matrix - rho.matrix.conj().T)) <= 1e-12
                assert np.linalg.eigvalsh(rho.matrix).min() >= -1e-12

    def test_complement_entropies_equal(self):
        rng = np.random.default_rng(17)
        s = _random_state(rng, n=8, k=4)
        for k in range(1, 5):
            for keep in combinations(range(8), k):
                rest = [i for i in range(8) if i not in keep]
                a = linear_entropy(partial_trace(s, keep))
                b = linear_entropy(partial_trace(s, rest))
                assert a == pytest.approx(b, abs=1e-10)

    @pytest.mark.parametrize("keep", [[], ["zz"], [0, 0]])
    def test_bad_keep(self, keep):
        s = _random_state(np.random.default_rng(0), n=2)
        with pytest.raises(DomainError):
            partial_trace(s, keep)


class TestEntropies:
    def test_pure_is_zero(self):
        rho = _qubit_rho([[0.5, 0.5], [0.5, 0.5]])
        assert linear_entropy(rho) == pytest.approx(0.0, abs=1e-15)
        assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)

    @given(st.floats(0, math.pi / 2))
    def test_linear_entropy_of_branch_weights(self, phi):
        rho = _qubit_rho(np.diag([math.cos(phi) ** 2, math.sin(phi) ** 2]))
        assert linear_entropy(rho) == pytest.approx(0.5 * math.sin(2 * phi) ** 2, abs=1e-14)

    def test_maximally_mixed(self):
        rho = _qubit_rho(np.eye(2) / 2)
        assert linear_entropy(rho) == pytest.approx(0.5)
        assert von_neumann_entropy(rho) == pytest.approx(math.log(2))

    def test_quarter_three_quarters(self):
        # -sum lam ln lam evaluated by hand
        rho = _qubit_rho(np.diag([0.25, 0.75]))
        assert von_neumann_entropy(rho) == pytest.approx(0.25 * math.log(4) + 0.75 * math.log(4 / 3), abs=1e-14)

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(NumericalFailure):
            _qubit_rho([[1.01, 0], [0, -0.01]]).eigenvalues()

    def test_tiny_negative_eigenvalue_clamped(self):
        assert _qubit_rho([[1 + 1e-11, 0], [0, -1e-11]]).eigenvalues().min() == 0.0

    def test_schmidt_route_nearly_pure(self):
        # purity route loses everything here; the pairwise sum keeps it
        eps = 1e-9
        m = np.array([[math.sqrt(1 - eps), 0], [0, math.sqrt(eps)]])
        assert schmidt_linear_entropy(m) == pytest.approx(2 * eps * (1 - eps), rel=1e-12)


class TestDephase:
    def test_diagonal_unchanged(self):
        rho = _qubit_rho(np.diag([0.3, 0.7]))
        assert np.array_equal(dephase(rho).matrix, rho.matrix)

    def test_plus_state(self):
        rho = _qubit_rho([[0.5, 0.5], [0.5, 0.5]])
        assert np.allclose(dephase(rho).matrix, np.eye(2) / 2)

    def test_idempotent(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            rho = partial_trace(_random_state(rng, n=4), [0, 2])
            once = dephase(rho)
            assert np.max(np.abs(dephase(once).matrix - once.matrix)) <= 1e-12

    def test_basis_mismatch(self):
        rho = _qubit_rho(np.eye(2) / 2)
        with pytest.raises(DomainError):
            dephase(rho, ValueBasis(((0.0, 1.0),), ("value",)))


def test_density_validation():
    with pytest.raises(NumericalFailure):
        _qubit_rho([[0.5, 1], [0, 0.5]])
    with pytest.raises(NumericalFailure):
        _qubit_rho(np.eye(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_squeeze_preserves_reductions(seed):
    rng = np.random.default_rng(seed)
    kets = [rng.normal(size=2) + 0j for _ in range(2)]
    s = state_from_branches(
        ["a", "b", "c"],
        [(0.6, [1.0, kets[0] / np.linalg.norm(kets[0]), 2.0]), (0.8j, [1.0, ONE, 3.0])],
    )
    sq = s.squeeze()
    assert sq.parties == ("b", "c")
    assert np.allclose(partial_trace(s, ["b", "c"]).matrix, sq.density().matrix, atol=1e-12)
