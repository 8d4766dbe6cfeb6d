"""
Two-copy distillation protocol: pipeline, randomized sweep and optimizer.

Two copies of the symmetric state are combined, each party applies a local
two-mode symplectic, and the second copy is measured by homodyne detection on
both sides. The harness checks that no such protocol raises log-negativity.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, TypeVar

import numpy as np
import structlog
from scipy.optimize import minimize

from gaussdist.core.config import get_settings
from gaussdist.core.exceptions import DomainError, InvalidCovarianceError, NumericalError
from gaussdist.core.logging import log_run_event, performance_timing
from gaussdist.models.gaussian_state import (
    COPY_ORDER,
    PARTY_ORDER,
    CovMatrix,
    SymmetricStateParams,
    apply_symplectic,
    direct_sum,
    reorder_to,
    two_mode_symmetric,
)
from gaussdist.models.symplectic import (
    EulerParams,
    SymplecticMatrix,
    euler_compose,
    is_symplectic,
    sample_euler_params,
    symplectic_defect,
    symplectic_direct_sum,
)
from gaussdist.schemas.records import OptimizationReport, SweepRecord, SweepSummary
from gaussdist.services.entanglement import f_value, g_lower_bound, log_negativity
from gaussdist.services.measurement import homodyne
from gaussdist.utils.linalg import max_abs
from gaussdist.utils.seeding import derive_seeds, make_rng

logger = structlog.get_logger(__name__)

KEPT_MODES = ("A1", "B1")
MEASURED_MODES = ("A2", "B2")

T = TypeVar("T")


@dataclass(frozen=True, eq=False)
class ProtocolInstance:
    """Input parameters plus the pair of local symplectics (S_A, S_B)."""

    params: SymmetricStateParams
    s_a: SymplecticMatrix
    s_b: SymplecticMatrix
    seed: Optional[int] = None
    euler_a: Optional[EulerParams] = None
    euler_b: Optional[EulerParams] = None

    def __post_init__(self):
        for name, S in (("S_A", self.s_a), ("S_B", self.s_b)):
            if S.n_modes != 2:
                raise DomainError(
                    f"{name} acts on {S.n_modes} modes", field=name, value=S.n_modes, bound="2 modes"
                )
            if not is_symplectic(S):
                raise DomainError(
                    f"{name} defect {symplectic_defect(S):.3e}",
                    field=name,
                    bound="S sigma S^T = sigma",
                )

    @classmethod
    def identity(cls, params: SymmetricStateParams, seed: Optional[int] = None) -> "ProtocolInstance":
        """The do-nothing protocol."""
        return cls.from_euler(params, EulerParams.identity(), EulerParams.identity(), seed)

    @classmethod
    def from_euler(
        cls,
        params: SymmetricStateParams,
        euler_a: EulerParams,
        euler_b: EulerParams,
        seed: Optional[int] = None,
    ) -> "ProtocolInstance":
        return cls(params, euler_compose(euler_a), euler_compose(euler_b), seed, euler_a, euler_b)


def random_instance(
    seed: int,
    a_range: Optional[Sequence[float]] = None,
    squeeze_range: Optional[Sequence[float]] = None,
) -> ProtocolInstance:
    """
    Draw one instance: a uniform in ``a_range``, c uniform in [0, sqrt(a^2 - 1)],
    then S_A and S_B from the Euler parameterization.
    """
    cfg = get_settings()
    low, high = cfg.a_range if a_range is None else (float(a_range[0]), float(a_range[1]))
    if low < 1.0 or low > high:
        raise DomainError(f"[{low}, {high}]", field="a_range", value=(low, high), bound="1 <= min <= max")

    rng = make_rng(seed)
    a = float(rng.uniform(low, high))
    c = float(rng.uniform(0.0, math.sqrt(a * a - 1.0)))
    euler_a = sample_euler_params(rng, squeeze_range)
    euler_b = sample_euler_params(rng, squeeze_range)
    return ProtocolInstance.from_euler(SymmetricStateParams(a, c), euler_a, euler_b, seed)


def prepare_state(inst: ProtocolInstance) -> CovMatrix:
    """Two copies in party order (A1, A2, B1, B2) after S_A (+) S_B."""
    copies = direct_sum(
        two_mode_symmetric(inst.params, ("A1", "B1")),
        two_mode_symmetric(inst.params, ("A2", "B2")),
        layout=COPY_ORDER,
    )
    by_party = reorder_to(copies, PARTY_ORDER)
    return apply_symplectic(by_party, symplectic_direct_sum(inst.s_a, inst.s_b))


def final_state(inst: ProtocolInstance) -> CovMatrix:
    """Gamma'' on (A1, B1) after X-homodyne on A2 and B2; raises if the result is not a valid state."""
    final = homodyne(prepare_state(inst), MEASURED_MODES, kept=KEPT_MODES)
    floor = get_settings().uncertainty_floor * max(1.0, max_abs(final.entries))
    return final.validate(tol=floor)


def identity_deviation(params: SymmetricStateParams, tol: Optional[float] = None) -> float:
    """
    Max-abs distance between the do-nothing protocol's output and Gamma0.

    Raises NumericalError when it exceeds ``tol * max(1, a)``.
    """
    tol = get_settings().identity_exactness_tol if tol is None else tol
    deviation = max_abs(final_state(ProtocolInstance.identity(params)).entries - two_mode_symmetric(params).entries)
    if deviation > tol * max(1.0, params.a):
        raise NumericalError(
            "do-nothing protocol does not reproduce the input state",
            operation="identity_deviation",
            deviation=deviation,
        )
    return deviation



def run_protocol(inst: ProtocolInstance) -> tuple[CovMatrix, SweepRecord]:
    """Run the pipeline and summarize it as a SweepRecord."""
    initial = two_mode_symmetric(inst.params)
    final = final_state(inst)

    f_initial = f_value(initial)
    g_initial = g_lower_bound(initial)
    en_initial = log_negativity(initial)

    f_final = f_value(final)
    g_final = g_lower_bound(final)
    en_final = log_negativity(final)

    # f(final) >= g(final) >= g(initial) = f(initial)
    chain_slack = min(f_final - g_final, g_final - g_initial, -abs(g_initial - f_initial))

    record = SweepRecord(
        seed=inst.seed if inst.seed is not None else 0,
        a=inst.params.a,
        c=inst.params.c,
        en_initial=en_initial,
        en_final=en_final,
        det_final=final.det(),
        det_a=float(np.linalg.det(final.block(["A1"]))),
        det_b=float(np.linalg.det(final.block(["B1"]))),
        f_final=f_final,
        g_final=g_final,
        margin=en_final - en_initial,
        final_entangled=en_final > 0.0,
        chain_slack=chain_slack,
    )
    return final, record


def map_trials(fn: Callable[[int], T], seeds: Sequence[int], max_workers: Optional[int] = None) -> list[T]:
    """Apply ``fn`` to each seed, in order; threaded when ``max_workers`` > 1."""
    workers = get_settings().max_workers if max_workers is None else max_workers
    if workers <= 1 or len(seeds) <= 1:
        return [fn(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seeds))


@dataclass
class SweepResult:
    records: list[SweepRecord]
    summary: SweepSummary
    min_chain_slack: float
    chain_tolerance: float
    violations: list[SweepRecord] = field(default_factory=list)

    @property
    def chain_holds(self) -> bool:
        return self.min_chain_slack >= -self.chain_tolerance

    @property
    def passed(self) -> bool:
        return self.summary.passed and self.chain_holds


def sweep(
    a_range: Optional[Sequence[float]] = None,
    samples: int = 1,
    seed: int = 0,
    squeeze_range: Optional[Sequence[float]] = None,
    max_workers: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> SweepResult:
    """
    Run ``samples`` random protocol instances derived from ``seed``.

    Records come back in trial order and depend only on the arguments.
    """
    if samples < 1:
        raise DomainError(f"samples = {samples}", field="samples", value=samples, bound="samples >= 1")
    cfg = get_settings()
    tolerance = cfg.theorem_tol if tolerance is None else tolerance

    def trial(trial_seed: int) -> SweepRecord:
        _, record = run_protocol(random_instance(trial_seed, a_range, squeeze_range))
        logger.debug("Sweep trial", trial_seed=trial_seed, margin=record.margin)
        return record

    with performance_timing("sweep"):
        records = map_trials(trial, derive_seeds(seed, samples), max_workers)

    max_margin = max(r.margin for r in records)
    min_chain_slack = min(r.chain_slack for r in records)
    violations = [r for r in records if r.margin > tolerance]
    for record in violations:
        logger.warning("Log-negativity increased", seed=record.seed, margin=record.margin)
    if min_chain_slack < -cfg.chain_tol:
        logger.warning("Proof chain violated", min_chain_slack=min_chain_slack)

    summary = SweepSummary(
        trials=len(records), max_margin=max_margin, passed=max_margin <= tolerance, tolerance=tolerance
    )
    log_run_event(
        "sweep_finished",
        trials=summary.trials,
        max_margin=max_margin,
        min_chain_slack=min_chain_slack,
        passed=summary.passed,
    )
    return SweepResult(records, summary, min_chain_slack, cfg.chain_tol, violations)


def _clip_search_vector(x: np.ndarray, log_low: float, log_high: float) -> np.ndarray:
    v = np.array(x, dtype=float)
    for offset in (4, 14):
        v[offset : offset + 2] = np.clip(v[offset : offset + 2], log_low, log_high)
    return v


def _split_search_vector(v: np.ndarray) -> tuple[EulerParams, EulerParams]:
    return EulerParams.from_search_vector(v[:10]), EulerParams.from_search_vector(v[10:])


def optimize(
    params: SymmetricStateParams,
    restarts: int = 1,
    seed: int = 0,
    squeeze_range: Optional[Sequence[float]] = None,
    max_evaluations: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> OptimizationReport:
    """
    Search the 20 Euler parameters for the protocol with the largest final E_N.

    Minimizes f(Gamma'') with Nelder-Mead. Restart 0 always starts from the
    identity; the others start from random Euler parameters. Log-squeezings are
    clipped to ``squeeze_range`` (widened to contain 1).
    """
    if restarts < 1:
        raise DomainError(f"restarts = {restarts}", field="restarts", value=restarts, bound="restarts >= 1")
    cfg = get_settings()
    squeeze_range = cfg.squeeze_range if squeeze_range is None else squeeze_range
    max_evaluations = cfg.optimizer_max_evaluations if max_evaluations is None else max_evaluations
    tolerance = cfg.optimizer_tol if tolerance is None else tolerance
    log_low = min(0.0, math.log(squeeze_range[0]))
    log_high = max(0.0, math.log(squeeze_range[1]))
    identity_deviation(params)

    def objective(x: np.ndarray) -> float:
        euler_a, euler_b = _split_search_vector(_clip_search_vector(x, log_low, log_high))
        inst = ProtocolInstance(params, euler_compose(euler_a), euler_compose(euler_b))
        try:
            return f_value(final_state(inst))
        except (NumericalError, InvalidCovarianceError):
            return float("inf")

    identity = EulerParams.identity().to_search_vector()
    starts = [np.concatenate([identity, identity])]
    for restart_seed in derive_seeds(seed, restarts)[1:]:
        rng = make_rng(restart_seed)
        starts.append(
            np.concatenate(
                [
                    sample_euler_params(rng, squeeze_range).to_search_vector(),
                    sample_euler_params(rng, squeeze_range).to_search_vector(),
                ]
            )
        )

    best = None
    best_restart = 0
    evaluations = 0
    with performance_timing("optimize"):
        for index, x0 in enumerate(starts):
            result = minimize(
                objective,
                x0,
                method="Nelder-Mead",
                options={
                    "maxfev": max_evaluations,
                    "xatol": cfg.optimizer_xatol,
                    "fatol": cfg.optimizer_fatol,
                    "adaptive": True,
                },
            )
            evaluations += int(result.nfev)
            logger.debug("Optimizer restart", restart=index, f=float(result.fun), success=bool(result.success))
            if best is None or result.fun < best.fun:
                best, best_restart = result, index

    euler_a, euler_b = _split_search_vector(_clip_search_vector(best.x, log_low, log_high))
    inst = ProtocolInstance.from_euler(params, euler_a, euler_b, seed)
    _, record = run_protocol(inst)
    record = record.model_copy(update={"converged": bool(best.success)})

    report = OptimizationReport(
        a=params.a,
        c=params.c,
        restarts=restarts,
        seed=seed,
        record=record,
        euler_a=[float(v) for v in euler_a.to_vector()],
        euler_b=[float(v) for v in euler_b.to_vector()],
        converged=bool(best.success),
        evaluations=evaluations,
        best_restart=best_restart,
        tolerance=tolerance,
        passed=record.margin <= tolerance,
    )
    if not report.passed:
        logger.warning("Optimizer found a margin above tolerance", margin=record.margin, tolerance=tolerance)
    log_run_event(
        "optimize_finished",
        a=params.a,
        c=params.c,
        best_margin=record.margin,
        evaluations=evaluations,
        converged=report.converged,
    )
    return report
