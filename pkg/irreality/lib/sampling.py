"""Seeded random states, unitaries and observables for the property checks."""
from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .qstate import ClassicalDistribution, CompositeSpace, DensityOperator, StateVector, tensor_product
from .realism import ProjectiveObservable, fourier_basis


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary."""
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(dim, random_state=rng)


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g + g.conj().T) / 2


def random_pure(space: CompositeSpace, rng: np.random.Generator) -> StateVector:
    d = space.total_dim
    return StateVector.normalized(space, rng.normal(size=d) + 1j * rng.normal(size=d))


def random_density(space: CompositeSpace, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Ginibre-ensemble mixed state; full rank unless ``rank`` is given."""
    d = space.total_dim
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    m = g @ g.conj().T
    return DensityOperator(space, m / np.trace(m).real)


def random_product_density(spaces: list[CompositeSpace], rng: np.random.Generator) -> DensityOperator:
    return tensor_product([random_density(s, rng) for s in spaces])


def random_observable(space: CompositeSpace, subsystem: str, rng: np.random.Generator) -> ProjectiveObservable:
    """Rank-1 projectors onto a Haar-random basis of ``subsystem``."""
    return ProjectiveObservable.from_basis(space, subsystem, random_unitary(space.dim(subsystem), rng))


def random_unbiased_pair(
    space: CompositeSpace, subsystem: str, rng: np.random.Generator
) -> tuple[ProjectiveObservable, ProjectiveObservable]:
    """Two observables on ``subsystem`` whose bases are mutually unbiased.

    The second basis is the first one rotated by the discrete Fourier matrix.
    """
    u = random_unitary(space.dim(subsystem), rng)
    return (
        ProjectiveObservable.from_basis(space, subsystem, u),
        ProjectiveObservable.from_basis(space, subsystem, u @ fourier_basis(space.dim(subsystem))),
    )


def random_distribution(n: int, rng: np.random.Generator) -> ClassicalDistribution:
    p = rng.dirichlet(np.ones(n))
    return ClassicalDistribution(p / p.sum())


def random_direction(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)
