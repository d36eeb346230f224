"""
Hardy's two-interferometer experiment on H+ x H- x H_gamma (3 * 3 * 2 = 18).

Particle basis order is (x, y, 0) where 0 means the particle has been
annihilated; the photon factor is (0, 2). The positron enters in |y>,
the electron in |x>. Overlap of |x>+ and |y>- at point I annihilates the
pair with probability p.
"""
from __future__ import annotations
import cmath
import logging
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.special import xlogy

from .errors import InvalidArgumentError, NumericDomainError
from .qstate import (
    CompositeSpace,
    DensityOperator,
    StateVector,
    linear_entropy,
    partial_trace,
    purity,
)
from .realism import (
    ProjectiveObservable,
    contextual_rbn,
    irreality,
    is_reality_state,
    local_irreality,
)

log = logging.getLogger(__name__)

POSITRON, ELECTRON, PHOTON = "positron", "electron", "photon"
X, Y, VACUUM = 0, 1, 2
NO_PHOTON, PHOTON_PAIR = 0, 1

HARDY_SPACE = CompositeSpace(((POSITRON, 3), (ELECTRON, 3), (PHOTON, 2)))
MATTER_SPACE = HARDY_SPACE.subspace((POSITRON, ELECTRON))
SIDES = {"+": POSITRON, "-": ELECTRON}
STAGES = (1, 2, 3, 4)

_SQRT2 = math.sqrt(2.0)
# columns are the images of |x>, |y>, |0>
BEAM_SPLITTER_LOCAL = np.array([[1, 1j, 0], [1j, 1, 0], [0, 0, _SQRT2]], dtype=np.complex128) / _SQRT2
MIRROR_LOCAL = np.array([[0, 1j, 0], [1j, 0, 0], [0, 0, 1]], dtype=np.complex128)


@dataclass(frozen=True)
class HardyConfig:
    """Annihilation probability ``p`` and interaction phase ``phi`` (reduced mod 2*pi)."""
    p: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        p, phi = float(self.p), float(self.phi)
        if not 0.0 <= p <= 1.0:
            raise InvalidArgumentError(f"annihilation probability must lie in [0, 1], got {self.p}")
        if not math.isfinite(phi):
            raise InvalidArgumentError(f"phase must be finite, got {self.phi}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "phi", phi % (2 * math.pi))

    @property
    def alpha(self) -> float:
        return math.sqrt(1.0 - self.p)

    @property
    def beta(self) -> complex:
        return math.sqrt(self.p) * cmath.exp(1j * self.phi)


def _side(side: str) -> str:
    try:
        return SIDES[side]
    except KeyError:
        raise InvalidArgumentError(f"side must be '+' or '-', got {side!r}") from None


def _lift(label: str, local: np.ndarray) -> np.ndarray:
    pos = HARDY_SPACE.index(label)
    eyes = [np.eye(d, dtype=np.complex128) for d in HARDY_SPACE.dims]
    return reduce(np.kron, eyes[:pos] + [local] + eyes[pos + 1:])


def basis_index(positron: int, electron: int, photon: int) -> int:
    return int(np.ravel_multi_index((positron, electron, photon), HARDY_SPACE.dims))


def product_ket(positron: int, electron: int, photon: int) -> StateVector:
    return StateVector.basis(HARDY_SPACE, (positron, electron, photon))


def beam_splitter(side: str) -> np.ndarray:
    """|x> -> (|x> + i|y>)/sqrt2, |y> -> (|y> + i|x>)/sqrt2 on one particle."""
    return _lift(_side(side), BEAM_SPLITTER_LOCAL)


def mirror(side: str) -> np.ndarray:
    """|x> -> i|y>, |y> -> i|x> on one particle."""
    return _lift(_side(side), MIRROR_LOCAL)


def annihilation(config: HardyConfig) -> np.ndarray:
    """Two-level rotation between |x,y,0> and |0,0,2>; identity elsewhere."""
    meet = basis_index(X, Y, NO_PHOTON)
    gone = basis_index(VACUUM, VACUUM, PHOTON_PAIR)
    alpha, beta = config.alpha, config.beta
    u = np.eye(HARDY_SPACE.total_dim, dtype=np.complex128)
    u[meet, meet] = alpha
    u[gone, meet] = beta
    u[meet, gone] = -beta.conjugate()
    u[gone, gone] = alpha
    return u


def stage_state(k: int, config: HardyConfig) -> StateVector:
    """Global state |Psi_k> after stage ``k`` of the experiment."""
    if k not in STAGES:
        raise InvalidArgumentError(f"stage must be one of {STAGES}, got {k!r}")
    psi = product_ket(Y, X, NO_PHOTON)
    if k >= 2:
        psi = psi.evolve(beam_splitter("+") @ beam_splitter("-"))
    if k >= 3:
        psi = psi.evolve(annihilation(config))
    if k == 4:
        psi = psi.evolve(mirror("+") @ mirror("-"))
        psi = psi.evolve(beam_splitter("+") @ beam_splitter("-"))
    return psi


def matter_state(psi: StateVector) -> DensityOperator:
    """Positron-electron state with the photon traced out."""
    return partial_trace(psi.density(), (POSITRON, ELECTRON))


def path_observable(side: str, space: CompositeSpace = MATTER_SPACE) -> ProjectiveObservable:
    """Path projectors {|x><x|, |y><y|, |0><0|} on one particle."""
    return ProjectiveObservable.computational(space, _side(side))


@dataclass(frozen=True, eq=False)
class StageReport:
    stage: int
    state: StateVector
    matter: DensityOperator
    irreality_plus: float
    irreality_minus: float
    local_irreality_plus: float
    local_irreality_minus: float
    rbn: float
    matter_purity: float
    matter_linear_entropy: float

    def __post_init__(self) -> None:
        for side, total, local in (
            ("+", self.irreality_plus, self.local_irreality_plus),
            ("-", self.irreality_minus, self.local_irreality_minus),
        ):
            if total < local - 1e-10:
                raise NumericDomainError(
                    f"stage {self.stage}: irreality {total:.3e} below local irreality {local:.3e} on side {side}"
                )


def stage_report(k: int, config: HardyConfig) -> StageReport:
    psi = stage_state(k, config)
    rho = matter_state(psi)
    plus, minus = path_observable("+"), path_observable("-")
    return StageReport(
        stage=k,
        state=psi,
        matter=rho,
        irreality_plus=irreality(rho, plus),
        irreality_minus=irreality(rho, minus),
        local_irreality_plus=local_irreality(rho, plus),
        local_irreality_minus=local_irreality(rho, minus),
        rbn=contextual_rbn(rho, plus, minus),
        matter_purity=purity(rho),
        matter_linear_entropy=linear_entropy(rho),
    )


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"p must lie in [0, 1], got {p}")
    return p


def _xlnx(x: float) -> float:
    return float(xlogy(x, x))


def stage3_irreality_analytic(p: float) -> float:
    p = _check_p(p)
    return -math.log(math.sqrt(2.0)) + 0.25 * sum((-1) ** k * _xlnx(2**k - p) for k in (1, 2))


def _stage3_f(j: int, k: int, p: float) -> float:
    radicand = 8.0 * (1.0 + math.sqrt(1.0 - p)) + p * (p - 4.0)
    if radicand < 0:
        raise NumericDomainError(f"negative radicand {radicand:.3e} at p={p}")
    return 2**k - p + (-1) ** j * ((1 + (-1) ** k) / 2) * math.sqrt(radicand)


def stage3_local_irreality_analytic(p: float) -> float:
    p = _check_p(p)
    total = sum(
        (3 * (-1) ** (k + 1) + 1) * _xlnx(_stage3_f(j, k, p))
        for k in (1, 2)
        for j in range(1, k + 1)
    )
    return -(6.0 - p) / 4.0 * math.log(2.0) - total / 16.0


def stage3_rbn_analytic(p: float) -> float:
    p = _check_p(p)
    return -math.log(2.0) + sum((3 * (-1) ** k - 1) * _xlnx(2**k - p) for k in (0, 1, 2)) / 8.0


def matter_purity_analytic(p: float) -> tuple[float, float]:
    """(purity, linear entropy) of the matter state after the interaction."""
    p = _check_p(p)
    return (8.0 - 4.0 * p + p * p) / 8.0, (p / 2.0) * (1.0 - p / 4.0)


def stage4_asymptotics(p: float) -> tuple[float, float, float]:
    """Leading small-p forms of (irreality, local irreality, rbn) after the final beam-splitters."""
    p = float(p)
    if p <= 0:
        raise InvalidArgumentError(f"small-p expansion needs p > 0, got {p}")
    ln_p2 = math.log(p * p)
    p2 = p * p
    return (
        (1.0 + math.log(32.0) - ln_p2) * p2 / 32.0,
        (1.0 + math.log(16.0) - ln_p2) * p2 / 64.0,
        (1.0 + math.log(4.0) - ln_p2) * p2 / 64.0,
    )


@dataclass(frozen=True)
class DetectionDistribution:
    """Click probabilities at the four detectors plus the no-click annihilation outcome."""
    x_plus_x_minus: float
    x_plus_y_minus: float
    y_plus_x_minus: float
    y_plus_y_minus: float
    annihilation: float

    def __post_init__(self) -> None:
        values = self.as_tuple()
        if min(values) < 0:
            raise NumericDomainError(f"negative detection probability in {values}")
        if abs(sum(values) - 1.0) > 1e-10:
            raise NumericDomainError(f"detection probabilities sum to {sum(values)!r}")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.x_plus_x_minus, self.x_plus_y_minus, self.y_plus_x_minus, self.y_plus_y_minus, self.annihilation)

    @property
    def both_dark(self) -> float:
        """X+ and Y- click together."""
        return self.x_plus_y_minus

    @property
    def at_least_one_dark(self) -> float:
        return self.x_plus_x_minus + self.x_plus_y_minus + self.y_plus_y_minus


def detection_distribution(config: HardyConfig) -> DetectionDistribution:
    amps = stage_state(4, config).amplitudes

    def prob(positron: int, electron: int, photon: int) -> float:
        return float(abs(amps[basis_index(positron, electron, photon)]) ** 2)

    return DetectionDistribution(
        x_plus_x_minus=prob(X, X, NO_PHOTON),
        x_plus_y_minus=prob(X, Y, NO_PHOTON),
        y_plus_x_minus=prob(Y, X, NO_PHOTON),
        y_plus_y_minus=prob(Y, Y, NO_PHOTON),
        annihilation=prob(VACUUM, VACUUM, PHOTON_PAIR),
    )


def dark_probability(p: float) -> float:
    p = _check_p(p)
    return (1.0 - math.sqrt(1.0 - p)) ** 2 / 16.0


@dataclass(frozen=True)
class StageVerdict:
    stage: int
    realism: bool
    local_causality: bool
    realism_based_nonlocality: bool
    rbn: float


def realism_table(config: HardyConfig, tol: float = 1e-10) -> list[StageVerdict]:
    """Per stage: do both paths satisfy the realism criterion, and is rbn present.

    Local causality holds at every stage since the model only contains local maps.
    """
    rows = []
    for k in STAGES:
        report = stage_report(k, config)
        real = all(is_reality_state(report.matter, path_observable(s), tol) for s in SIDES)
        rows.append(StageVerdict(k, real, True, report.rbn > tol, report.rbn))
    log.debug("realism table at p=%s: %s", config.p, rows)
    return rows
