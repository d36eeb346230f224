"""
Analytic-vs-numeric oracles and invariant suites behind ``verify``.

Each check returns a Check; run_verification collects them into a
VerifyReport. Library errors raised inside a check are recorded as a
failure of that check.
"""
from __future__ import annotations
import logging
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import Settings, Tolerances
from .errors import InvalidArgumentError, NumericDomainError
from .export import SweepSpec, sweep_records
from .hardy_model import (
    SIDES,
    STAGES,
    HardyConfig,
    StageReport,
    annihilation,
    beam_splitter,
    dark_probability,
    detection_distribution,
    matter_purity_analytic,
    mirror,
    realism_table,
    stage3_irreality_analytic,
    stage3_local_irreality_analytic,
    stage3_rbn_analytic,
    stage4_asymptotics,
    stage_report,
    stage_state,
)
from .qstate import CompositeSpace, DensityOperator, shannon_entropy, tensor_product
from .realism import (
    ProjectiveObservable,
    basis_discord,
    contextual_rbn,
    fourier_basis,
    irreality,
    irreality_uncertainty_gap,
    local_irreality,
    reality_state,
    unrevealed_measurement,
)
from .sampling import (
    random_density,
    random_distribution,
    random_observable,
    random_unbiased_pair,
    random_unitary,
)

log = logging.getLogger(__name__)

LN2 = math.log(2.0)
QUTRITS = CompositeSpace((("A", 3), ("B", 3)))
QUBITS = CompositeSpace((("A", 2), ("B", 2)))
ASYMPTOTIC_P = 1e-3
VANISHING_P = 1e-7
PHASE_CHECK = (0.6, 2.1)


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    actual: str
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[Check, ...]
    duration_sec: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.passed)


@dataclass(frozen=True)
class Context:
    settings: Settings
    tol: Tolerances
    rng: np.random.Generator

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.settings.verify_steps)


def _max_error(name: str, err: float, tol: float, expected: str = "max |numeric - reference|") -> Check:
    return Check(name, f"{expected} <= {tol:.1e}", f"{err:.3e}", tol, bool(err <= tol))


def _at_least(name: str, worst: float, tol: float, expected: str) -> Check:
    return Check(name, f"{expected} >= {-tol:.1e}", f"{worst:.3e}", tol, bool(worst >= -tol))


def _configs(ctx: Context) -> list[HardyConfig]:
    return [HardyConfig(float(p), ctx.settings.phi) for p in ctx.grid()]


def _metrics(rep: StageReport) -> tuple[float, ...]:
    return (rep.irreality_plus, rep.irreality_minus, rep.local_irreality_plus, rep.local_irreality_minus, rep.rbn)


# ---- Hardy stages ---------------------------------------------------------

def check_stage1_metrics_zero(ctx: Context) -> Check:
    err = max(max(map(abs, _metrics(stage_report(1, cfg)))) for cfg in _configs(ctx))
    return _max_error("stage1_metrics_zero", err, ctx.tol.state, "max |metric|")


def check_stage2_metrics(ctx: Context) -> Check:
    err = 0.0
    for cfg in _configs(ctx):
        rep = stage_report(2, cfg)
        err = max(err, *(abs(v - LN2) for v in _metrics(rep)[:4]), abs(rep.rbn))
    return _max_error("stage2_metrics", err, ctx.tol.normalization, "max |I - ln2|, |rbn|")


def _stage3_match(name: str, ctx: Context, numeric: Callable, analytic: Callable[[float], float]) -> Check:
    err = max(abs(numeric(stage_report(3, cfg)) - analytic(cfg.p)) for cfg in _configs(ctx))
    return _max_error(name, err, ctx.tol.analytic)


def check_stage3_irreality(ctx: Context) -> Check:
    return _stage3_match(
        "stage3_irreality_analytic_match", ctx, lambda r: r.irreality_plus, stage3_irreality_analytic
    )


def check_stage3_local_irreality(ctx: Context) -> Check:
    return _stage3_match(
        "stage3_local_irreality_analytic_match", ctx, lambda r: r.local_irreality_plus, stage3_local_irreality_analytic
    )


def check_stage3_rbn(ctx: Context) -> Check:
    return _stage3_match("stage3_rbn_analytic_match", ctx, lambda r: r.rbn, stage3_rbn_analytic)


def check_stage3_endpoints(ctx: Context) -> Check:
    # closed forms evaluated independently of the general formulas
    s5 = math.sqrt(5.0)
    at_one = (
        -0.5 * LN2 + 0.75 * math.log(3.0),
        -1.25 * LN2 + ((3 - s5) * math.log(3 - s5) + (3 + s5) * math.log(3 + s5)) / 8.0,
        -LN2 + 0.75 * math.log(3.0),
    )
    err = 0.0
    for p, expected in ((0.0, (LN2, LN2, 0.0)), (1.0, at_one)):
        rep = stage_report(3, HardyConfig(p, ctx.settings.phi))
        got = (rep.irreality_plus, rep.local_irreality_plus, rep.rbn)
        err = max(err, *(abs(g - e) for g, e in zip(got, expected)))
    return _max_error("stage3_endpoints", err, ctx.tol.endpoint)


def check_purity_entanglement(ctx: Context) -> Check:
    err = 0.0
    for cfg in _configs(ctx):
        rep = stage_report(3, cfg)
        pur, ent = matter_purity_analytic(cfg.p)
        err = max(err, abs(rep.matter_purity - pur), abs(rep.matter_linear_entropy - ent))
    return _max_error("purity_entanglement_match", err, ctx.tol.normalization)


def check_stage4_purity(ctx: Context) -> Check:
    err = max(abs(stage_report(4, c).matter_purity - stage_report(3, c).matter_purity) for c in _configs(ctx))
    return _max_error("stage4_purity_equals_stage3", err, ctx.tol.normalization)


def check_stage4_asymptotics(ctx: Context) -> Check:
    rep = stage_report(4, HardyConfig(ASYMPTOTIC_P, ctx.settings.phi))
    numeric = (rep.irreality_plus, rep.local_irreality_plus, rep.rbn)
    ratios = [n / a for n, a in zip(numeric, stage4_asymptotics(ASYMPTOTIC_P))]
    err = max(abs(r - 1.0) for r in ratios)
    return _max_error("stage4_asymptotic_ratio", err, ctx.tol.asymptotic_ratio, f"max |ratio - 1| at p={ASYMPTOTIC_P:g}")


def check_stage4_vanishing(ctx: Context) -> Check:
    rep = stage_report(4, HardyConfig(VANISHING_P, ctx.settings.phi))
    err = max(_metrics(rep))
    return _max_error("stage4_vanishing", err, ctx.tol.vanishing, f"max metric at p={VANISHING_P:g}")


def check_stage4_rbn_positive(ctx: Context) -> Check:
    reps = [(cfg.p, stage_report(4, cfg)) for cfg in _configs(ctx)]
    positive = min(rep.rbn for p, rep in reps if p > 0)
    at_zero = max(rep.rbn for p, rep in reps if p == 0)
    ok = positive > 0 and at_zero <= ctx.tol.normalization
    return Check(
        "stage4_rbn_positive",
        f"min rbn (p > 0) > 0, rbn(0) <= {ctx.tol.normalization:.1e}",
        f"{positive:.3e}, {at_zero:.3e}",
        ctx.tol.normalization,
        bool(ok),
    )


def check_irreality_dominates_local(ctx: Context) -> Check:
    worst = min(
        min(rep.irreality_plus - rep.local_irreality_plus, rep.irreality_minus - rep.local_irreality_minus)
        for cfg in _configs(ctx)
        for rep in (stage_report(k, cfg) for k in STAGES)
    )
    return _at_least("irreality_dominates_local", worst, ctx.tol.property, "min (I - local I)")


def check_path_symmetry(ctx: Context) -> Check:
    err = max(
        max(abs(rep.irreality_plus - rep.irreality_minus), abs(rep.local_irreality_plus - rep.local_irreality_minus))
        for cfg in _configs(ctx)
        for rep in (stage_report(k, cfg) for k in STAGES)
    )
    return _max_error("path_symmetry", err, ctx.tol.normalization, "max |I+ - I-|")


def check_stage3_rbn_monotonic(ctx: Context) -> Check:
    values = [stage_report(3, cfg).rbn for cfg in _configs(ctx)]
    worst = min(b - a for a, b in zip(values, values[1:]))
    return _at_least("stage3_rbn_monotonic", worst, ctx.tol.property, "min step of rbn(p)")


def check_realism_table(ctx: Context) -> Check:
    rows = realism_table(HardyConfig(1.0, ctx.settings.phi))
    realism = tuple(r.realism for r in rows)
    nonlocal_ = tuple(r.realism_based_nonlocality for r in rows)
    expected = ((True, False, False, False), (False, False, True, True))
    return Check(
        "realism_table_hardy",
        f"realism {expected[0]}, rbn {expected[1]}",
        f"realism {realism}, rbn {nonlocal_}",
        ctx.tol.normalization,
        (realism, nonlocal_) == expected,
    )


# ---- optics and detection -------------------------------------------------

def check_unitarity(ctx: Context) -> Check:
    eye = np.eye(18)
    ops = [beam_splitter(s) for s in SIDES] + [mirror(s) for s in SIDES]
    phis = np.linspace(0.0, 2 * math.pi, 8, endpoint=False)
    ops += [annihilation(HardyConfig(float(p), float(phi))) for p in ctx.grid() for phi in phis]
    err = max(float(np.max(np.abs(u.conj().T @ u - eye))) for u in ops)
    return _max_error("unitarity", err, ctx.tol.state, "max |U^dagger U - 1|")


def check_normalization(ctx: Context) -> Check:
    phis = np.linspace(0.0, 2 * math.pi, 8, endpoint=False)
    err = max(
        abs(np.vdot(psi.amplitudes, psi.amplitudes).real - 1.0)
        for p in ctx.grid()
        for phi in phis
        for psi in (stage_state(k, HardyConfig(float(p), float(phi))) for k in STAGES)
    )
    return _max_error("normalization", err, ctx.tol.state, "max |<Psi|Psi> - 1|")


def check_detection_statistics(ctx: Context) -> Check:
    dist = detection_distribution(HardyConfig(1.0, ctx.settings.phi))
    err = max(abs(dist.both_dark - 1 / 16), abs(dist.at_least_one_dark - 3 / 16))
    return _max_error("detection_hardy_statistics", err, ctx.tol.state, "|P - 1/16|, |P - 3/16|")


def check_dark_probability(ctx: Context) -> Check:
    err = max(abs(detection_distribution(cfg).both_dark - dark_probability(cfg.p)) for cfg in _configs(ctx))
    return _max_error("dark_probability_match", err, ctx.tol.state)


def check_distribution_normalized(ctx: Context) -> Check:
    phis = np.linspace(0.0, 2 * math.pi, 8, endpoint=False)
    err = max(
        abs(sum(detection_distribution(HardyConfig(float(p), float(phi))).as_tuple()) - 1.0)
        for p in ctx.grid()
        for phi in phis
    )
    return _max_error("distribution_normalized", err, ctx.tol.normalization, "max |sum - 1|")


def check_phase_invariance(ctx: Context) -> Check:
    p = PHASE_CHECK[0]
    a, b = (sweep_records(SweepSpec(p, p, 2, "all", phi)) for phi in (0.0, PHASE_CHECK[1]))
    err = max(abs(float(ra[k]) - float(rb[k])) for ra, rb in zip(a, b) for k in ra)
    return _max_error("phase_invariance", err, ctx.tol.phase, f"max |x(phi=0) - x(phi={PHASE_CHECK[1]})|")


# ---- framework properties on random inputs --------------------------------

def _random_case(ctx: Context) -> tuple[DensityOperator, ProjectiveObservable, ProjectiveObservable]:
    space = QUTRITS if ctx.rng.random() < 0.5 else QUBITS
    rank = int(ctx.rng.integers(1, space.total_dim + 1))
    rho = random_density(space, ctx.rng, rank)
    return rho, random_observable(space, "A", ctx.rng), random_observable(space, "B", ctx.rng)


def check_idempotence(ctx: Context) -> Check:
    err = 0.0
    for _ in range(ctx.settings.random_draws):
        rho, obs, _ = _random_case(ctx)
        once = unrevealed_measurement(rho, obs)
        err = max(err, float(np.max(np.abs(unrevealed_measurement(once, obs).matrix - once.matrix))))
    return _max_error("phi_idempotence", err, ctx.tol.state, "max |Phi(Phi(rho)) - Phi(rho)|")


def check_nonnegativity(ctx: Context) -> Check:
    worst = math.inf
    for _ in range(ctx.settings.random_draws):
        rho, obs_a, obs_b = _random_case(ctx)
        worst = min(worst, irreality(rho, obs_a), basis_discord(rho, obs_a), contextual_rbn(rho, obs_a, obs_b))
    return _at_least("metrics_nonnegative", worst, ctx.tol.property, "min(I, D, N)")


def check_decomposition(ctx: Context) -> Check:
    err = 0.0
    for _ in range(ctx.settings.random_draws):
        rho, obs, _ = _random_case(ctx)
        err = max(err, abs(irreality(rho, obs) - local_irreality(rho, obs) - basis_discord(rho, obs)))
    return _max_error("decomposition_identity", err, ctx.tol.property, "max |I - I_local - D|")


def check_uncertainty_gap(ctx: Context) -> Check:
    worst = math.inf
    for _ in range(ctx.settings.random_draws):
        rho, _, _ = _random_case(ctx)
        obs, other = random_unbiased_pair(rho.space, "A", ctx.rng)
        worst = min(worst, irreality_uncertainty_gap(rho, obs, other))
    return _at_least("uncertainty_gap", worst, ctx.tol.uncertainty, "min gap over unbiased pairs")


def check_rbn_vanishes(ctx: Context) -> Check:
    err = 0.0
    for _ in range(ctx.settings.random_draws):
        rho, obs_a, obs_b = _random_case(ctx)
        site_a = rho.space.subspace({"A"})
        site_b = rho.space.subspace({"B"})
        product = tensor_product([random_density(site_a, ctx.rng), random_density(site_b, ctx.rng)])
        err = max(
            err,
            contextual_rbn(product, obs_a, obs_b),
            contextual_rbn(unrevealed_measurement(rho, obs_a), obs_a, obs_b),
            contextual_rbn(unrevealed_measurement(rho, obs_b), obs_a, obs_b),
        )
    return _max_error("rbn_vanishes_product_and_reality", err, ctx.tol.property, "max rbn")


def check_rbn_needs_irrealism(ctx: Context) -> Check:
    worst = math.inf
    for _ in range(ctx.settings.random_draws // 10):
        rho, obs_a, obs_b = _random_case(ctx)
        if contextual_rbn(rho, obs_a, obs_b) > ctx.tol.property:
            worst = min(worst, irreality(rho, obs_a), irreality(rho, obs_b))
    ok = worst > 0
    return Check("rbn_needs_irrealism", "I_A > 0 and I_B > 0 whenever N_AB > 0", f"{worst:.3e}", 0.0, bool(ok))


def check_reality_state_shannon(ctx: Context) -> Check:
    err = 0.0
    z, f = np.eye(2), fourier_basis(2)
    for _ in range(ctx.settings.shannon_draws):
        dist = random_distribution(2, ctx.rng)
        rho = reality_state(dist, z, z)
        obs_a = ProjectiveObservable.from_basis(rho.space, "A", f)
        obs_b = ProjectiveObservable.from_basis(rho.space, "B", f)
        err = max(err, abs(contextual_rbn(rho, obs_a, obs_b) - shannon_entropy(dist)))
    return _max_error("reality_state_shannon", err, ctx.tol.analytic, "max |N_AB - H(p)|")


def check_unitary_covariance(ctx: Context) -> Check:
    err = 0.0
    for _ in range(ctx.settings.random_draws // 10):
        rho, obs, _ = _random_case(ctx)
        u_local = random_unitary(rho.space.dim("A"), ctx.rng)
        u = np.kron(u_local, np.eye(rho.space.dim("B")))
        lhs = unrevealed_measurement(rho.conjugate(u), obs.conjugated(u_local)).matrix
        rhs = u @ unrevealed_measurement(rho, obs).matrix @ u.conj().T
        err = max(err, float(np.max(np.abs(lhs - rhs))))
    return _max_error("phi_unitary_covariance", err, ctx.tol.normalization)


CHECKS: tuple[Callable[[Context], Check], ...] = (
    check_stage1_metrics_zero,
    check_stage2_metrics,
    check_stage3_irreality,
    check_stage3_local_irreality,
    check_stage3_rbn,
    check_stage3_endpoints,
    check_purity_entanglement,
    check_stage4_purity,
    check_detection_statistics,
    check_dark_probability,
    check_distribution_normalized,
    check_stage4_asymptotics,
    check_stage4_vanishing,
    check_stage4_rbn_positive,
    check_irreality_dominates_local,
    check_path_symmetry,
    check_stage3_rbn_monotonic,
    check_realism_table,
    check_unitarity,
    check_normalization,
    check_phase_invariance,
    check_idempotence,
    check_nonnegativity,
    check_decomposition,
    check_uncertainty_gap,
    check_rbn_vanishes,
    check_rbn_needs_irrealism,
    check_reality_state_shannon,
    check_unitary_covariance,
)


def _check_name(fn: Callable) -> str:
    return fn.__name__.removeprefix("check_")


def run_verification(settings: Settings, tolerance: float | None = None) -> VerifyReport:
    tol = settings.tolerances if tolerance is None else settings.tolerances.override(tolerance)
    ctx = Context(settings, tol, np.random.default_rng(settings.seed))
    start = time.perf_counter()
    checks = []
    for fn in CHECKS:
        try:
            check = fn(ctx)
        except (InvalidArgumentError, NumericDomainError, ArithmeticError, ValueError, np.linalg.LinAlgError) as e:
            check = Check(_check_name(fn), "no error", f"{type(e).__name__}: {e}", 0.0, False)
        log.info("%s %s", "PASS" if check.passed else "FAIL", check.name)
        checks.append(check)
    return VerifyReport(tuple(checks), time.perf_counter() - start)
