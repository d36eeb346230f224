import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irreality.lib.errors import InvalidArgumentError, NumericDomainError
from irreality.lib.qstate import (
    ClassicalDistribution,
    CompositeSpace,
    DensityOperator,
    StateVector,
    linear_entropy,
    partial_trace,
    permute_subsystems,
    purity,
    relative_entropy,
    shannon_entropy,
    spectral_decomposition,
    tensor_product,
    von_neumann_entropy,
)
from irreality.lib.sampling import random_density, random_hermitian, random_pure, random_unitary

seeds = st.integers(min_value=0, max_value=2**32 - 1)
prop_settings = settings(deadline=None, max_examples=40)


def test_space_rejects_duplicate_labels_and_bad_dims():
    with pytest.raises(InvalidArgumentError):
        CompositeSpace((("A", 2), ("A", 3)))
    with pytest.raises(InvalidArgumentError):
        CompositeSpace((("A", 0),))


def test_space_lookup(qutrits):
    assert qutrits.total_dim == 9
    assert qutrits.index("B") == 1
    assert qutrits.dim("A") == 3
    with pytest.raises(InvalidArgumentError):
        qutrits.index("C")


def test_unnormalized_vector_rejected(qubits):
    with pytest.raises(InvalidArgumentError):
        StateVector(qubits, np.array([1, 1, 0, 0], dtype=complex))
    psi = StateVector.normalized(qubits, [1, 1, 0, 0])
    assert math.isclose(np.vdot(psi.amplitudes, psi.amplitudes).real, 1.0)


def test_amplitudes_are_readonly(qubits):
    psi = StateVector.basis(qubits, (0, 1))
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 1.0


def test_same_ray_ignores_global_phase(qubits, rng):
    psi = random_pure(qubits, rng)
    phased = StateVector(qubits, np.exp(0.7j) * psi.amplitudes)
    assert psi.same_ray(phased)


def test_density_validation(qubits):
    with pytest.raises(InvalidArgumentError):
        DensityOperator(qubits, np.eye(4))  # trace 4
    with pytest.raises(InvalidArgumentError):
        DensityOperator(qubits, np.diag([1.5, -0.5, 0, 0]))
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[1, 1] = 0.5
    m[0, 1] = 0.3j
    with pytest.raises(InvalidArgumentError):
        DensityOperator(qubits, m)


def test_partial_trace_of_product_recovers_factors(rng):
    a = random_density(CompositeSpace((("A", 2),)), rng)
    b = random_density(CompositeSpace((("B", 3),)), rng)
    c = random_density(CompositeSpace((("C", 2),)), rng)
    abc = tensor_product([a, b, c])
    np.testing.assert_allclose(partial_trace(abc, {"A"}).matrix, a.matrix, atol=1e-12)
    np.testing.assert_allclose(partial_trace(abc, {"B"}).matrix, b.matrix, atol=1e-12)
    np.testing.assert_allclose(partial_trace(abc, {"A", "C"}).matrix, tensor_product([a, c]).matrix, atol=1e-12)


def test_partial_trace_keeps_order(rng):
    space = CompositeSpace((("A", 2), ("B", 3), ("C", 2)))
    rho = random_density(space, rng)
    assert partial_trace(rho, {"C", "A"}).space.labels == ("A", "C")


def test_singlet_marginal_is_maximally_mixed(singlet_rho):
    np.testing.assert_allclose(partial_trace(singlet_rho, {"A"}).matrix, np.eye(2) / 2, atol=1e-12)
    assert von_neumann_entropy(singlet_rho) == pytest.approx(0.0, abs=1e-12)
    assert von_neumann_entropy(partial_trace(singlet_rho, {"B"})) == pytest.approx(math.log(2), abs=1e-12)


def test_permute_matches_swapped_product(rng):
    a = random_density(CompositeSpace((("A", 2),)), rng)
    b = random_density(CompositeSpace((("B", 3),)), rng)
    swapped = permute_subsystems(tensor_product([a, b]), ("B", "A"))
    assert swapped.space.labels == ("B", "A")
    np.testing.assert_allclose(swapped.matrix, tensor_product([b, a]).matrix, atol=1e-12)
    with pytest.raises(InvalidArgumentError):
        permute_subsystems(swapped, ("A",))


@pytest.mark.parametrize("dim", [2, 3, 9, 18])
def test_spectral_decomposition_reconstructs(dim, rng):
    h = random_hermitian(dim, rng, scale=3.0)
    g = h + 1j * np.triu(np.ones((dim, dim)), 1)
    w, v = spectral_decomposition(h)
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, h, atol=1e-10)
    with pytest.raises(InvalidArgumentError):
        spectral_decomposition(g)


def test_entropy_bounds(qutrits, rng):
    rho = random_density(qutrits, rng)
    s = von_neumann_entropy(rho)
    assert 0.0 <= s <= math.log(9) + 1e-12
    assert von_neumann_entropy(DensityOperator.maximally_mixed(qutrits)) == pytest.approx(math.log(9))


def test_relative_entropy(qubits, rng):
    rho = random_density(qubits, rng)
    sigma = random_density(qubits, rng)
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-10)
    assert relative_entropy(rho, sigma) > 0
    mixed = DensityOperator.maximally_mixed(qubits)
    assert relative_entropy(rho, mixed) == pytest.approx(math.log(4) - von_neumann_entropy(rho), abs=1e-10)
    pure = StateVector.basis(qubits, (0, 0)).density()
    assert relative_entropy(rho, pure) == math.inf


def test_shannon_entropy():
    assert shannon_entropy(ClassicalDistribution(np.array([0.5, 0.5, 0.0]))) == pytest.approx(math.log(2))
    with pytest.raises(InvalidArgumentError):
        ClassicalDistribution(np.array([0.6, 0.6]))


def test_purity_of_pure_and_mixed(qutrits, rng):
    assert purity(random_pure(qutrits, rng).density()) == pytest.approx(1.0)
    mixed = DensityOperator.maximally_mixed(qutrits)
    assert purity(mixed) == pytest.approx(1 / 9)
    assert linear_entropy(mixed) == pytest.approx(8 / 9)


def test_numeric_domain_error_is_arithmetic():
    assert issubclass(NumericDomainError, ArithmeticError)
    assert issubclass(InvalidArgumentError, ValueError)


def test_tensor_product_rejects_mixed_kinds(qubits, rng):
    single = CompositeSpace.of(("C", 2))
    with pytest.raises(InvalidArgumentError):
        tensor_product([random_pure(single, rng), random_density(single, rng)])
    with pytest.raises(InvalidArgumentError):
        tensor_product([])


def test_entropy_of_quarter_three_quarter_mixture():
    rho = DensityOperator(CompositeSpace.of(("A", 2)), np.diag([0.25, 0.75]))
    expected = -(0.25 * math.log(0.25) + 0.75 * math.log(0.75))
    assert expected == pytest.approx(0.5623, abs=1e-4)
    assert von_neumann_entropy(rho) == pytest.approx(expected, abs=1e-12)
    assert shannon_entropy(ClassicalDistribution(np.array([0.25, 0.75]))) == pytest.approx(expected, abs=1e-12)


@prop_settings
@given(seed=seeds)
def test_entropy_is_unitarily_invariant(seed):
    rng = np.random.default_rng(seed)
    space = CompositeSpace.of(("A", 2), ("B", 3))
    rho = random_density(space, rng, int(rng.integers(1, 7)))
    rotated = rho.conjugate(random_unitary(6, rng))
    assert von_neumann_entropy(rotated) == pytest.approx(von_neumann_entropy(rho), abs=1e-10)


@prop_settings
@given(seed=seeds)
def test_pure_bipartite_marginals_share_entropy(seed):
    rho = random_pure(CompositeSpace.of(("A", 2), ("B", 3)), np.random.default_rng(seed)).density()
    s_a = von_neumann_entropy(partial_trace(rho, {"A"}))
    s_b = von_neumann_entropy(partial_trace(rho, {"B"}))
    assert s_a == pytest.approx(s_b, abs=1e-10)
    assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-10)


@prop_settings
@given(seed=seeds)
def test_relative_entropy_is_nonnegative(seed):
    rng = np.random.default_rng(seed)
    space = CompositeSpace.of(("A", 3))
    rho = random_density(space, rng, int(rng.integers(1, 4)))
    sigma = random_density(space, rng)
    assert relative_entropy(rho, sigma) >= -1e-10
