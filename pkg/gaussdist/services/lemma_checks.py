"""
Randomized checks of the determinant identities and inequalities behind the
no-go result.

Each check draws its trials from per-trial seeds derived from a master seed and
returns a LemmaReport with the worst deviation seen.
"""

from typing import Optional, Sequence

import numpy as np
import structlog

from gaussdist.core.config import get_settings
from gaussdist.core.exceptions import DomainError
from gaussdist.core.logging import log_run_event, performance_timing
from gaussdist.models.gaussian_state import CovMatrix, apply_symplectic, partial_trace, williamson_state
from gaussdist.models.symplectic import euler_compose, sample_euler_params
from gaussdist.schemas.records import LemmaReport
from gaussdist.services.entanglement import TwoModeBlocks, f_value, g_lower_bound, lemma5_discriminant
from gaussdist.services.measurement import (
    ProjectionTarget,
    Quadrature,
    extended_matrix,
    homodyne,
    homodyne_determinant,
    project_pure_gaussian,
)
from gaussdist.services.protocol_search import (
    KEPT_MODES,
    MEASURED_MODES,
    map_trials,
    prepare_state,
    random_instance,
)
from gaussdist.utils.seeding import derive_seeds, make_rng

logger = structlog.get_logger(__name__)

# finite squeezing used for the determinant multiplication check
_SCHUR_CHECK_D = 0.5


def _check_trials(trials: int) -> None:
    if trials < 1:
        raise DomainError(f"trials = {trials}", field="trials", value=trials, bound="trials >= 1")


def _report(lemma: str, statistic: str, trials: int, deviation: float, tolerance: float, **details) -> LemmaReport:
    report = LemmaReport(
        lemma=lemma,
        statistic=statistic,
        trials=trials,
        max_deviation=max(0.0, deviation),
        tolerance=tolerance,
        passed=deviation <= tolerance,
        details={k: float(v) for k, v in details.items()},
    )
    if not report.passed:
        logger.warning("Lemma check failed", lemma=lemma, max_deviation=report.max_deviation, tolerance=tolerance)
    log_run_event("lemma_checked", lemma=lemma, trials=trials, max_deviation=report.max_deviation, passed=report.passed)
    return report


def check_lemma3(
    trials: int,
    seed: int,
    a_range: Optional[Sequence[float]] = None,
    squeeze_range: Optional[Sequence[float]] = None,
    max_workers: Optional[int] = None,
) -> LemmaReport:
    """
    det Gamma'' = (a^2 - c^2)^2 for every protocol instance.

    Also cross-checks the determinant-ratio form of det Gamma'' and the
    factorization det Gamma'_d = det M_d * det(C2 + D_d^2) at finite squeezing.
    """
    _check_trials(trials)
    cfg = get_settings()
    target = ProjectionTarget(_SCHUR_CHECK_D, Quadrature.X)

    def trial(trial_seed: int) -> tuple[float, float, float]:
        inst = random_instance(trial_seed, a_range, squeeze_range)
        prepared = prepare_state(inst)
        final = homodyne(prepared, MEASURED_MODES, kept=KEPT_MODES)
        expected = inst.params.determinant

        identity_dev = abs(final.det() - expected) / expected
        ratio_dev = abs(homodyne_determinant(prepared, MEASURED_MODES, kept=KEPT_MODES) - expected) / expected

        extended = extended_matrix(prepared, MEASURED_MODES, target, kept=KEPT_MODES).entries
        m_d = project_pure_gaussian(prepared, MEASURED_MODES, target, kept=KEPT_MODES)
        factored = m_d.det() * float(np.linalg.det(extended[4:, 4:]))
        schur_dev = abs(float(np.linalg.det(extended)) - factored) / abs(factored)
        return identity_dev, ratio_dev, schur_dev

    with performance_timing("check_lemma3"):
        rows = map_trials(trial, derive_seeds(seed, trials), max_workers)

    deviations = np.array(rows)
    worst = deviations.max(axis=0)
    return _report(
        "lemma3",
        "relative |det Gamma'' - (a^2 - c^2)^2|",
        trials,
        float(worst.max()),
        cfg.lemma3_rel_tol,
        identity=worst[0],
        ratio_form=worst[1],
        schur_factorization=worst[2],
    )


def check_lemma4(
    trials: int,
    seed: int,
    a_range: Optional[Sequence[float]] = None,
    squeeze_range: Optional[Sequence[float]] = None,
    max_workers: Optional[int] = None,
) -> LemmaReport:
    """
    det Gamma''_A <= a^2 and det Gamma''_B <= a^2.

    Measuring A2 alone leaves A1 with det N_A = a^2; measuring B2 as well can
    only lower it.
    """
    _check_trials(trials)
    cfg = get_settings()

    def trial(trial_seed: int) -> tuple[float, float, float]:
        inst = random_instance(trial_seed, a_range, squeeze_range)
        prepared = prepare_state(inst)
        final = homodyne(prepared, MEASURED_MODES, kept=KEPT_MODES)
        bound = inst.params.a ** 2

        det_a = float(np.linalg.det(final.block(["A1"])))
        det_b = float(np.linalg.det(final.block(["B1"])))

        after_a2 = homodyne(prepared, ["A2"], kept=["A1", "B1", "B2"])
        det_n_a = float(np.linalg.det(partial_trace(after_a2, ["A1"]).entries))
        return max(det_a, det_b) - bound, abs(det_n_a - bound) / bound, det_a - det_n_a

    with performance_timing("check_lemma4"):
        rows = map_trials(trial, derive_seeds(seed, trials), max_workers)

    worst = np.array(rows).max(axis=0)
    return _report(
        "lemma4",
        "max(det Gamma''_A, det Gamma''_B) - a^2",
        trials,
        float(worst[0]),
        cfg.lemma4_tol,
        max_excess=worst[0],
        single_party_relative=worst[1],
        monotonicity_excess=worst[2],
    )


def random_valid_two_mode(
    seed: int,
    nu_max: Optional[float] = None,
    squeeze_range: Optional[Sequence[float]] = None,
) -> CovMatrix:
    """gamma = S (nu1 1 (+) nu2 1) S^T with nu uniform in [1, nu_max] and S from Euler parameters."""
    nu_max = get_settings().thermal_nu_max if nu_max is None else nu_max
    rng = make_rng(seed)
    nus = rng.uniform(1.0, nu_max, size=2)
    S = euler_compose(sample_euler_params(rng, squeeze_range))
    return apply_symplectic(williamson_state(nus, ("A", "B")), S)


def check_lemma5(
    trials: int,
    seed: int,
    nu_max: Optional[float] = None,
    squeeze_range: Optional[Sequence[float]] = None,
    max_workers: Optional[int] = None,
) -> LemmaReport:
    """f(gamma) >= g(gamma) on random valid two-mode states."""
    _check_trials(trials)
    cfg = get_settings()

    def trial(trial_seed: int) -> tuple[float, float]:
        gamma = random_valid_two_mode(trial_seed, nu_max, squeeze_range)
        slack = f_value(gamma) - g_lower_bound(gamma)
        scale = max(1.0, TwoModeBlocks.from_cov(gamma).mean_local_det ** 2)
        return slack, lemma5_discriminant(gamma) / scale

    with performance_timing("check_lemma5"):
        rows = map_trials(trial, derive_seeds(seed, trials), max_workers)

    values = np.array(rows)
    min_slack = float(values[:, 0].min())
    min_discriminant = float(values[:, 1].min())
    deviation = max(-min_slack, -min_discriminant)
    return _report(
        "lemma5",
        "max(g - f)",
        trials,
        deviation,
        cfg.lemma5_tol,
        min_slack=min_slack,
        min_relative_discriminant=min_discriminant,
    )


def check_all(trials: int, seed: int, max_workers: Optional[int] = None) -> list[LemmaReport]:
    """All three checks from one master seed."""
    lemma3_seed, lemma4_seed, lemma5_seed = derive_seeds(seed, 3)
    return [
        check_lemma3(trials, lemma3_seed, max_workers=max_workers),
        check_lemma4(trials, lemma4_seed, max_workers=max_workers),
        check_lemma5(trials, lemma5_seed, max_workers=max_workers),
    ]
