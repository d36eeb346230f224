"""
Dense quantum-state machinery.

Composite spaces, pure and mixed states, tensor products, partial traces,
the Hermitian eigendecomposition and the entropy functionals the realism
metrics are built from. Entropies are in nats; 0*ln(0) is taken as 0.
"""
from __future__ import annotations
import logging
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence, TypeVar

import numpy as np
import scipy.linalg
from scipy.special import entr, xlogy

from .errors import InvalidArgumentError, NumericDomainError

log = logging.getLogger(__name__)

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10
EIGEN_CLIP = 1e-10
SUPPORT_TOL = 1e-10


def _readonly(a: np.ndarray, dtype: type = np.complex128) -> np.ndarray:
    out = np.array(a, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class CompositeSpace:
    """Ordered tensor-factor structure: ((label, dim), ...)."""
    subsystems: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        subs = tuple((str(label), int(dim)) for label, dim in self.subsystems)
        if not subs:
            raise InvalidArgumentError("a composite space needs at least one subsystem")
        labels = [label for label, _ in subs]
        if len(set(labels)) != len(labels):
            raise InvalidArgumentError(f"subsystem labels must be unique: {labels}")
        for label, dim in subs:
            if dim < 1:
                raise InvalidArgumentError(f"subsystem {label!r} has non-positive dimension {dim}")
        object.__setattr__(self, "subsystems", subs)

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> CompositeSpace:
        return cls(tuple(pairs))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.subsystems)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.subsystems)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidArgumentError(f"unknown subsystem {label!r}; space has {self.labels}") from None

    def dim(self, label: str) -> int:
        return self.dims[self.index(label)]

    def subspace(self, labels: Iterable[str]) -> CompositeSpace:
        """Factors named in ``labels``, kept in their original relative order."""
        wanted = set(labels)
        for label in wanted:
            self.index(label)
        return CompositeSpace(tuple(s for s in self.subsystems if s[0] in wanted))

    def concat(self, other: CompositeSpace) -> CompositeSpace:
        return CompositeSpace(self.subsystems + other.subsystems)


@dataclass(frozen=True, eq=False)
class StateVector:
    space: CompositeSpace
    amplitudes: np.ndarray
    tol: float = field(default=NORM_TOL, repr=False)

    def __post_init__(self) -> None:
        amps = _readonly(np.ravel(self.amplitudes))
        if amps.shape != (self.space.total_dim,):
            raise InvalidArgumentError(
                f"amplitude vector has length {amps.size}, space needs {self.space.total_dim}"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > self.tol:
            raise InvalidArgumentError(f"state vector is not normalized (squared norm {norm2!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, space: CompositeSpace, amplitudes: Sequence[complex] | np.ndarray) -> StateVector:
        amps = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InvalidArgumentError("cannot normalize the zero vector")
        return cls(space, amps / norm)

    @classmethod
    def basis(cls, space: CompositeSpace, indices: Sequence[int]) -> StateVector:
        """Product basis ket |i_1>|i_2>... in subsystem order."""
        if len(indices) != len(space.dims):
            raise InvalidArgumentError(f"need {len(space.dims)} indices, got {len(indices)}")
        amps = np.zeros(space.total_dim, dtype=np.complex128)
        try:
            amps[np.ravel_multi_index(tuple(indices), space.dims)] = 1.0
        except ValueError as e:
            raise InvalidArgumentError(f"basis index out of range: {indices}") from e
        return cls(space, amps)

    def overlap(self, other: StateVector) -> complex:
        """<self|other>."""
        if self.space != other.space:
            raise InvalidArgumentError("states live on different spaces")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def same_ray(self, other: StateVector, tol: float = 1e-10) -> bool:
        """True when the vectors agree up to a global phase."""
        return abs(abs(self.overlap(other)) - 1.0) <= tol

    def evolve(self, unitary: np.ndarray) -> StateVector:
        return StateVector(self.space, unitary @ self.amplitudes, self.tol)

    def density(self) -> DensityOperator:
        return DensityOperator(self.space, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    space: CompositeSpace
    matrix: np.ndarray
    tol: float = field(default=NORM_TOL, repr=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.complex128)
        d = self.space.total_dim
        if m.shape != (d, d):
            raise InvalidArgumentError(f"density matrix has shape {m.shape}, space needs {(d, d)}")
        skew = float(np.max(np.abs(m - m.conj().T)))
        if skew > self.tol:
            raise InvalidArgumentError(f"density matrix is not Hermitian (max deviation {skew:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > self.tol:
            raise InvalidArgumentError(f"density matrix trace is {tr!r}, expected 1")
        m = 0.5 * (m + m.conj().T)
        lowest = float(scipy.linalg.eigvalsh(m)[0])
        if lowest < -EIGEN_CLIP:
            raise InvalidArgumentError(f"density matrix has negative eigenvalue {lowest:.3e}")
        object.__setattr__(self, "matrix", _readonly(m))

    @classmethod
    def maximally_mixed(cls, space: CompositeSpace) -> DensityOperator:
        d = space.total_dim
        return cls(space, np.eye(d) / d)

    def conjugate(self, unitary: np.ndarray) -> DensityOperator:
        """U rho U^dagger."""
        return DensityOperator(self.space, unitary @ self.matrix @ unitary.conj().T, self.tol)


@dataclass(frozen=True, eq=False)
class ClassicalDistribution:
    probabilities: np.ndarray
    tol: float = field(default=NORM_TOL, repr=False)

    def __post_init__(self) -> None:
        p = _readonly(np.ravel(self.probabilities), dtype=np.float64)
        if p.size == 0:
            raise InvalidArgumentError("empty distribution")
        if np.any(p < 0):
            raise InvalidArgumentError(f"negative probability in {p}")
        if abs(float(p.sum()) - 1.0) > self.tol:
            raise InvalidArgumentError(f"probabilities sum to {p.sum()!r}, expected 1")
        object.__setattr__(self, "probabilities", p)

    def __len__(self) -> int:
        return int(self.probabilities.size)


Quantum = TypeVar("Quantum", StateVector, DensityOperator)


def tensor_product(factors: Sequence[Quantum]) -> Quantum:
    """Kronecker composition in the given order; the spaces are concatenated."""
    if not factors:
        raise InvalidArgumentError("tensor_product needs at least one factor")
    kind = type(factors[0])
    if kind not in (StateVector, DensityOperator) or any(type(f) is not kind for f in factors):
        raise InvalidArgumentError("tensor_product factors must all be StateVector or all DensityOperator")
    space = reduce(CompositeSpace.concat, (f.space for f in factors))
    if kind is StateVector:
        return StateVector(space, reduce(np.kron, (f.amplitudes for f in factors)))
    return DensityOperator(space, reduce(np.kron, (f.matrix for f in factors)))


def partial_trace(rho: DensityOperator, keep: Iterable[str]) -> DensityOperator:
    """Trace out every factor not in ``keep``; kept factors retain their order."""
    keep = set(keep)
    if not keep:
        raise InvalidArgumentError("partial_trace needs at least one subsystem to keep")
    kept_space = rho.space.subspace(keep)
    dims = rho.space.dims
    n = len(dims)
    traced = [i for i, label in enumerate(rho.space.labels) if label not in keep]
    t = rho.matrix.reshape(dims + dims)
    # highest axis first so lower axis numbers stay valid
    for removed, axis in enumerate(sorted(traced, reverse=True)):
        t = np.trace(t, axis1=axis, axis2=axis + n - removed)
    d = kept_space.total_dim
    return DensityOperator(kept_space, t.reshape(d, d), rho.tol)


def permute_subsystems(rho: DensityOperator, order: Sequence[str]) -> DensityOperator:
    """Reorder the tensor factors of ``rho`` to follow ``order``."""
    if sorted(order) != sorted(rho.space.labels) or len(order) != len(rho.space.labels):
        raise InvalidArgumentError(f"{list(order)} is not a permutation of {list(rho.space.labels)}")
    perm = [rho.space.index(label) for label in order]
    n = len(perm)
    dims = rho.space.dims
    t = rho.matrix.reshape(dims + dims).transpose(perm + [p + n for p in perm])
    space = CompositeSpace(tuple(rho.space.subsystems[p] for p in perm))
    d = space.total_dim
    return DensityOperator(space, t.reshape(d, d), rho.tol)


def spectral_decomposition(h: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix."""
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {h.shape}")
    skew = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
    if skew > tol:
        raise InvalidArgumentError(f"matrix is not Hermitian (max deviation {skew:.3e})")
    w, v = scipy.linalg.eigh(0.5 * (h + h.conj().T))
    return w, v


def _spectrum(rho: DensityOperator, clip: float = EIGEN_CLIP) -> tuple[np.ndarray, np.ndarray]:
    w, v = spectral_decomposition(rho.matrix)
    if w[0] < -clip:
        raise NumericDomainError(f"eigenvalue {w[0]:.3e} below clipping window -{clip:g}")
    if w[0] < 0:
        log.debug("clipping eigenvalues down to %.3e", w[0])
    return np.clip(w, 0.0, None), v


def von_neumann_entropy(rho: DensityOperator, clip: float = EIGEN_CLIP) -> float:
    w, _ = _spectrum(rho, clip)
    return float(entr(w).sum())


def relative_entropy(rho: DensityOperator, sigma: DensityOperator, clip: float = EIGEN_CLIP) -> float:
    """S(rho||sigma) in nats; +inf when the support of rho is not inside that of sigma."""
    if rho.space.dims != sigma.space.dims:
        raise InvalidArgumentError(f"dimension mismatch: {rho.space.dims} vs {sigma.space.dims}")
    lam, u = _spectrum(rho, clip)
    mu, v = _spectrum(sigma, clip)
    overlap = np.abs(u.conj().T @ v) ** 2  # |<r_i|s_j>|^2
    in_rho = lam > SUPPORT_TOL
    null_sigma = mu <= SUPPORT_TOL
    if np.any(overlap[np.ix_(in_rho, null_sigma)].sum(axis=1) > SUPPORT_TOL):
        return math.inf
    log_mu = np.where(null_sigma, 0.0, np.log(np.where(null_sigma, 1.0, mu)))
    value = float(xlogy(lam, lam).sum() - lam @ overlap @ log_mu)
    if value < 0:
        if value < -clip:
            raise NumericDomainError(f"relative entropy {value:.3e} is negative")
        log.debug("clamping relative entropy %.3e to 0", value)
        return 0.0
    return value


def shannon_entropy(p: ClassicalDistribution) -> float:
    return float(entr(p.probabilities).sum())


def purity(rho: DensityOperator) -> float:
    """Tr(rho^2)."""
    return float(np.sum(np.abs(rho.matrix) ** 2))


def linear_entropy(rho: DensityOperator) -> float:
    return 1.0 - purity(rho)


def singlet(labels: tuple[str, str] = ("A", "B")) -> StateVector:
    """(|01> - |10>)/sqrt(2) on two qubits."""
    space = CompositeSpace(((labels[0], 2), (labels[1], 2)))
    return StateVector.normalized(space, [0, 1, -1, 0])
