"""
Realism metrics built on unrevealed measurements.

An unrevealed measurement of A replaces rho by sum_a (A_a x 1) rho (A_a x 1).
Irreality is the entropy gained by doing so; contextual realism-based
nonlocality is the drop in A-irreality caused by an unrevealed measurement
of B on a different subsystem.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import InvalidArgumentError, NumericDomainError
from .qstate import (
    ClassicalDistribution,
    CompositeSpace,
    DensityOperator,
    partial_trace,
    permute_subsystems,
    relative_entropy,
    tensor_product,
    von_neumann_entropy,
)

log = logging.getLogger(__name__)

PROJECTOR_TOL = 1e-12
METRIC_CLAMP = 1e-10
REALITY_TOL = 1e-10

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True, eq=False)
class ProjectiveObservable:
    """Complete family of orthogonal projectors acting on one subsystem.

    Eigenvalue labels are not stored; every metric depends only on the projectors.
    """
    space: CompositeSpace
    subsystem: str
    projectors: tuple[np.ndarray, ...]
    tol: float = field(default=PROJECTOR_TOL, repr=False)

    def __post_init__(self) -> None:
        d = self.space.dim(self.subsystem)
        projs = []
        for k, proj in enumerate(self.projectors):
            proj = np.array(proj, dtype=np.complex128, copy=True)
            if proj.shape != (d, d):
                raise InvalidArgumentError(f"projector {k} has shape {proj.shape}, subsystem needs {(d, d)}")
            if np.max(np.abs(proj - proj.conj().T)) > self.tol:
                raise InvalidArgumentError(f"projector {k} is not Hermitian")
            if np.max(np.abs(proj @ proj - proj)) > self.tol:
                raise InvalidArgumentError(f"projector {k} is not idempotent")
            proj.flags.writeable = False
            projs.append(proj)
        if not projs:
            raise InvalidArgumentError("an observable needs at least one projector")
        for a in range(len(projs)):
            for b in range(a + 1, len(projs)):
                if np.max(np.abs(projs[a] @ projs[b])) > self.tol:
                    raise InvalidArgumentError(f"projectors {a} and {b} are not orthogonal")
        if np.max(np.abs(sum(projs) - np.eye(d))) > self.tol:
            raise InvalidArgumentError("projectors do not sum to the identity")
        object.__setattr__(self, "projectors", tuple(projs))

    @classmethod
    def from_basis(cls, space: CompositeSpace, subsystem: str, basis: np.ndarray) -> ProjectiveObservable:
        """Rank-1 projectors onto the columns of an orthonormal basis."""
        basis = _orthonormal_family(basis, space.dim(subsystem))
        if basis.shape[1] != basis.shape[0]:
            raise InvalidArgumentError("a basis needs as many vectors as the subsystem dimension")
        return cls(space, subsystem, tuple(np.outer(v, v.conj()) for v in basis.T))

    @classmethod
    def computational(cls, space: CompositeSpace, subsystem: str) -> ProjectiveObservable:
        return cls.from_basis(space, subsystem, np.eye(space.dim(subsystem)))

    def embedded(self, space: CompositeSpace) -> tuple[np.ndarray, ...]:
        """Projectors lifted to the full ``space`` as A_a x 1."""
        _check_subsystem(space, self)
        pos = space.index(self.subsystem)
        eyes = [np.eye(d) for d in space.dims]
        return tuple(reduce(np.kron, eyes[:pos] + [proj] + eyes[pos + 1:]) for proj in self.projectors)

    def conjugated(self, unitary: np.ndarray) -> ProjectiveObservable:
        """The observable U A U^dagger, with U acting on this subsystem."""
        return ProjectiveObservable(
            self.space, self.subsystem, tuple(unitary @ p @ unitary.conj().T for p in self.projectors), self.tol
        )


def _orthonormal_family(vectors: np.ndarray, dim: int, tol: float = PROJECTOR_TOL) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=np.complex128)
    if vectors.ndim != 2 or vectors.shape[0] != dim:
        raise InvalidArgumentError(f"expected {dim}-dimensional column vectors, got shape {vectors.shape}")
    gram = vectors.conj().T @ vectors
    if np.max(np.abs(gram - np.eye(vectors.shape[1]))) > tol:
        raise InvalidArgumentError("vector family is not orthonormal")
    return vectors


def _check_subsystem(space: CompositeSpace, obs: ProjectiveObservable) -> None:
    if obs.subsystem not in space.labels:
        raise InvalidArgumentError(f"observable acts on {obs.subsystem!r}, state space has {space.labels}")
    if space.dim(obs.subsystem) != obs.space.dim(obs.subsystem):
        raise InvalidArgumentError(f"dimension mismatch on subsystem {obs.subsystem!r}")


def _clamp(value: float, what: str, clamp: float) -> float:
    if value >= 0:
        return value
    if value < -clamp:
        raise NumericDomainError(f"{what} is negative ({value:.3e}) beyond the clamp window {clamp:g}")
    log.debug("clamping %s %.3e to 0", what, value)
    return 0.0


def spin_observable(space: CompositeSpace, subsystem: str, direction: np.ndarray) -> ProjectiveObservable:
    """Projectors (1 +- u.sigma)/2 of a spin-1/2 along unit vector u."""
    u = np.asarray(direction, dtype=np.float64)
    norm = np.linalg.norm(u)
    if u.shape != (3,) or norm == 0:
        raise InvalidArgumentError(f"direction must be a nonzero 3-vector, got {direction!r}")
    u = u / norm
    u_sigma = u[0] * PAULI["x"] + u[1] * PAULI["y"] + u[2] * PAULI["z"]
    eye = np.eye(2)
    return ProjectiveObservable(space, subsystem, ((eye + u_sigma) / 2, (eye - u_sigma) / 2))


def fourier_basis(dim: int) -> np.ndarray:
    """Columns of the discrete Fourier basis, mutually unbiased with the computational one."""
    j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    return np.exp(2j * np.pi * j * k / dim) / np.sqrt(dim)


def unrevealed_measurement(rho: DensityOperator, obs: ProjectiveObservable) -> DensityOperator:
    """Phi_A(rho): measure A, forget the outcome."""
    out = sum(p @ rho.matrix @ p for p in obs.embedded(rho.space))
    return DensityOperator(rho.space, out, rho.tol)


def is_reality_state(rho: DensityOperator, obs: ProjectiveObservable, tol: float = REALITY_TOL) -> bool:
    if not tol > 0:
        raise InvalidArgumentError(f"tolerance must be positive, got {tol}")
    gap = np.max(np.abs(unrevealed_measurement(rho, obs).matrix - rho.matrix))
    return bool(gap <= tol)


def irreality(rho: DensityOperator, obs: ProjectiveObservable, clamp: float = METRIC_CLAMP) -> float:
    value = von_neumann_entropy(unrevealed_measurement(rho, obs)) - von_neumann_entropy(rho)
    return _clamp(value, "irreality", clamp)


def local_irreality(rho: DensityOperator, obs: ProjectiveObservable, clamp: float = METRIC_CLAMP) -> float:
    """Irreality of the reduced state on the observable's subsystem."""
    _check_subsystem(rho.space, obs)
    return irreality(partial_trace(rho, {obs.subsystem}), obs, clamp)


def basis_discord(rho: DensityOperator, obs: ProjectiveObservable, clamp: float = METRIC_CLAMP) -> float:
    value = irreality(rho, obs, clamp) - local_irreality(rho, obs, clamp)
    return _clamp(value, "basis-dependent discord", clamp)


def _check_pair(rho: DensityOperator, obs_a: ProjectiveObservable, obs_b: ProjectiveObservable) -> None:
    _check_subsystem(rho.space, obs_a)
    _check_subsystem(rho.space, obs_b)
    if obs_a.subsystem == obs_b.subsystem:
        raise InvalidArgumentError(f"both observables act on {obs_a.subsystem!r}; need distinct subsystems")


def contextual_rbn(
    rho: DensityOperator,
    obs_a: ProjectiveObservable,
    obs_b: ProjectiveObservable,
    clamp: float = METRIC_CLAMP,
) -> float:
    """N_AB(rho) = I_A(rho) - I_A(Phi_B(rho))."""
    _check_pair(rho, obs_a, obs_b)
    value = irreality(rho, obs_a, clamp) - irreality(unrevealed_measurement(rho, obs_b), obs_a, clamp)
    return _clamp(value, "realism-based nonlocality", clamp)


def irreality_uncertainty_gap(
    rho: DensityOperator,
    obs_a: ProjectiveObservable,
    obs_a2: ProjectiveObservable,
    clamp: float = METRIC_CLAMP,
) -> float:
    """I_A + I_A' - S(rho || 1_A/d_A x rho_B).

    Nonnegative when the two bases on A are mutually unbiased; other pairs can
    go below zero.
    """
    _check_subsystem(rho.space, obs_a)
    _check_subsystem(rho.space, obs_a2)
    if obs_a.subsystem != obs_a2.subsystem:
        raise InvalidArgumentError("both observables must act on the same subsystem")
    label = obs_a.subsystem
    site = rho.space.subspace({label})
    rest = [other for other in rho.space.labels if other != label]
    reference = DensityOperator.maximally_mixed(site)
    if rest:
        reference = tensor_product([reference, partial_trace(rho, rest)])
        reference = permute_subsystems(reference, rho.space.labels)
    distance = relative_entropy(rho, reference)
    if not np.isfinite(distance):
        raise NumericDomainError("relative entropy to 1_A/d_A x rho_B diverged")
    return irreality(rho, obs_a, clamp) + irreality(rho, obs_a2, clamp) - distance


def reality_state(
    dist: ClassicalDistribution,
    basis_a: np.ndarray,
    basis_b: np.ndarray,
    labels: tuple[str, str] = ("A", "B"),
) -> DensityOperator:
    """sum_l p_l |a_l><a_l| x |b_l><b_l|, a fixed point of both primed measurements."""
    basis_a = np.asarray(basis_a, dtype=np.complex128)
    basis_b = np.asarray(basis_b, dtype=np.complex128)
    basis_a = _orthonormal_family(basis_a, basis_a.shape[0] if basis_a.ndim == 2 else -1)
    basis_b = _orthonormal_family(basis_b, basis_b.shape[0] if basis_b.ndim == 2 else -1)
    n = len(dist)
    if basis_a.shape[1] < n or basis_b.shape[1] < n:
        raise InvalidArgumentError(f"need at least {n} vectors per family for this distribution")
    space = CompositeSpace(((labels[0], basis_a.shape[0]), (labels[1], basis_b.shape[0])))
    matrix = sum(
        p * np.kron(np.outer(a, a.conj()), np.outer(b, b.conj()))
        for p, a, b in zip(dist.probabilities, basis_a.T, basis_b.T)
    )
    return DensityOperator(space, matrix)


def joint_probabilities(
    rho: DensityOperator, obs_a: ProjectiveObservable, obs_b: ProjectiveObservable
) -> np.ndarray:
    """p(a, b) = Tr[(A_a x B_b) rho], rows indexed by A outcomes."""
    _check_pair(rho, obs_a, obs_b)
    pa = obs_a.embedded(rho.space)
    pb = obs_b.embedded(rho.space)
    probs = np.array([[np.trace(a @ b @ rho.matrix).real for b in pb] for a in pa])
    return np.clip(probs, 0.0, None)
