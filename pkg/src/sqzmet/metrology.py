"""Analytic sensitivity formulas, shot-level simulation, and scaling sweeps.

The protocol estimates the weighted average of the unknown phases from the
probability that the probe survives the interferometer unchanged.  This
module holds the small-phase expansion of that probability, the binomial
shot simulator, the quadratic phase estimator, and the Monte-Carlo sweep
that measures how the estimation variance scales with the probe's mean
photon number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import fock, network
from .gaussian import (
    PhotonMoments,
    SqueezeParameter,
    apply_network,
    apply_phases,
    apply_squeeze,
    vacuum_overlap_probability,
    vacuum_state,
)

REGIME_THRESHOLD = 0.3
ENGINES = ("gaussian", "fock")


class RegimeError(ValueError):
    """Raised when a sweep is asked to run outside the small-phase regime."""


class PhaseMoments(NamedTuple):
    """Weighted mean and mean square of the unknown phases."""

    mean: float
    mean_sq: float


class RegimeCheck(NamedTuple):
    """Result of the small-phase validity check; ``ok`` is False on warning."""

    ratio: float
    ok: bool


def phase_moments(weights, phases) -> PhaseMoments:
    """Weighted first and second moments of the phase vector.

    Raises:
        ValueError: if the two vectors have different lengths.
    """
    w = network.validate_weights(weights)
    phi = np.asarray(phases, dtype=float)
    if phi.shape != w.shape:
        raise ValueError(f"weights have shape {w.shape}, phases {phi.shape}")
    return PhaseMoments(float(w @ phi), float(w @ phi ** 2))


def generator_variance(moments: PhaseMoments, photon: PhotonMoments) -> float:
    """Variance of the phase-shift generator over the post-network state.

    Splits into a photon-number-fluctuation part scaled by the squared
    weighted phase mean and a phase-spread part scaled by the mean photon
    number.
    """
    spread = moments.mean_sq - moments.mean ** 2
    return moments.mean ** 2 * photon.var_n + spread * photon.mean_n


def survival_probability_quadratic(variance: float) -> float:
    """Second-order survival probability, ``1 - variance`` of the generator."""
    return 1.0 - variance


def survival_probability_large_n(nbar: float, phi_bar: float) -> float:
    """Large-photon-number limit, ``1 - 2 nbar^2 phi_bar^2``."""
    return 1.0 - 2.0 * nbar ** 2 * phi_bar ** 2


def check_regime(phases, nbar: float, threshold: float = REGIME_THRESHOLD) -> RegimeCheck:
    """Small-phase expansion validity: ratio ``max|phi| * nbar`` against ``threshold``."""
    phases = np.asarray(phases, dtype=float)
    ratio = float(np.max(np.abs(phases)) * nbar) if phases.size else 0.0
    return RegimeCheck(ratio, ratio < threshold)


def heisenberg_sensitivity(nbar: float) -> float:
    """Reference squared phase error per shot, ``1 / (8 nbar^2)``.

    Raises:
        ValueError: for ``nbar <= 0``, where the reference is undefined.
    """
    if nbar <= 0:
        raise ValueError(f"sensitivity reference undefined for nbar = {nbar}")
    return 1.0 / (8.0 * nbar ** 2)


def error_propagation_sensitivity(p: float, dp_dphi: float) -> float:
    """Squared phase error from the projector statistics, ``p (1 - p) / slope^2``.

    The survival observable is a projector, so its variance is exactly
    ``p (1 - p)``.

    Raises:
        ValueError: if ``p`` is outside ``[0, 1]`` or the slope vanishes
            (singular bias point).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    if dp_dphi == 0.0:
        raise ValueError("zero response slope: singular bias point")
    return p * (1.0 - p) / dp_dphi ** 2


def simulate_shots(p: float, shots: int, seed) -> int:
    """Count of unchanged-probe outcomes over ``shots`` on-off detections.

    Each shot is a Bernoulli trial with success probability ``p``.  The
    ``seed`` may be an integer or a sequence of integers; a sequence keys a
    counter-style stream, so independently derived seeds give reproducible
    results regardless of execution order.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    return int(np.random.default_rng(seed).binomial(shots, p))


def estimate_phase(count: int, shots: int, nbar: float) -> float:
    """Invert the observed survival fraction into a phase-average magnitude.

    Uses the finite-photon-number prefactor ``2 nbar (nbar + 1)``, which
    removes the leading small-``nbar`` bias.  The survival probability is
    even in the phase average, so only the magnitude is identifiable and the
    non-negative root is returned.

    Raises:
        ValueError: if ``count > shots`` or ``nbar <= 0``.
    """
    if not 0 <= count <= shots:
        raise ValueError(f"count must lie in [0, {shots}], got {count}")
    if nbar <= 0:
        raise ValueError(f"estimator undefined for nbar = {nbar}")
    deficit = max(0.0, 1.0 - count / shots)
    return math.sqrt(deficit / (2.0 * nbar * (nbar + 1.0)))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one protocol run."""

    weights: np.ndarray
    true_phases: np.ndarray
    squeeze: SqueezeParameter
    shots: int
    seed: int
    engine: str = "gaussian"
    cutoff: int | None = None

    def __post_init__(self):
        w = network.validate_weights(self.weights)
        phi = np.asarray(self.true_phases, dtype=float)
        if phi.shape != w.shape:
            raise ValueError(f"weights have shape {w.shape}, phases {phi.shape}")
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        if self.cutoff is not None and (self.cutoff < 0 or self.cutoff % 2 != 0):
            raise ValueError(f"cutoff must be even and >= 0, got {self.cutoff}")
        w.flags.writeable = False
        phi.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "true_phases", phi)


def exact_survival_probability(
    weights, phases, squeeze: SqueezeParameter, engine: str = "gaussian",
    cutoff: int | None = None,
) -> tuple[float, int | None]:
    """Exact unchanged-probe probability for the full interferometer.

    The ``gaussian`` engine pushes the covariance matrix through squeezer,
    network, phases, and inverse network, then takes the overlap with the
    probe state.  The ``fock`` engine resums the occupation-number
    distribution sector by sector at a certified cutoff.

    Returns:
        ``(probability, cutoff_used)``; the cutoff is None for the gaussian
        engine.
    """
    w = network.validate_weights(weights)
    phases = np.asarray(phases, dtype=float)
    if engine == "gaussian":
        unitary = network.embed_weights_unitary(w)
        state = apply_squeeze(vacuum_state(w.size), 0, squeeze)
        state = apply_network(state, unitary)
        state = apply_phases(state, phases)
        state = apply_network(state, unitary.conj().T)
        return vacuum_overlap_probability(state, squeeze), None
    if engine == "fock":
        if cutoff is None:
            cutoff = fock.recommend_cutoff(squeeze, tail_bound=1e-12)
        amps = fock.squeezed_vacuum_amplitudes(squeeze, cutoff)
        return fock.survival_probability_sectors(amps, w, phases), cutoff
    raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")


@dataclass(frozen=True)
class ProtocolRun:
    """Outcome of a single simulated run, ready for one CSV row."""

    phi_bar_true: float
    p_exact: float
    p_hat: float
    phi_hat: float
    regime_ratio: float
    regime_ok: bool
    cutoff_used: int | None


def run_protocol(config: ExperimentConfig) -> ProtocolRun:
    """Evaluate, sample, and invert one experiment configuration."""
    moments = phase_moments(config.weights, config.true_phases)
    nbar = config.squeeze.mean_photon_number
    p_exact, cutoff_used = exact_survival_probability(
        config.weights, config.true_phases, config.squeeze,
        engine=config.engine, cutoff=config.cutoff,
    )
    count = simulate_shots(p_exact, config.shots, [config.seed, 0, 0])
    p_hat = count / config.shots
    phi_hat = estimate_phase(count, config.shots, nbar) if nbar > 0 else 0.0
    regime = check_regime(config.true_phases, nbar)
    return ProtocolRun(
        phi_bar_true=moments.mean,
        p_exact=p_exact,
        p_hat=p_hat,
        phi_hat=phi_hat,
        regime_ratio=regime.ratio,
        regime_ok=regime.ok,
        cutoff_used=cutoff_used,
    )


@dataclass(frozen=True)
class EstimationResult:
    """Aggregate of repeated runs at one sweep point."""

    p_hat: float
    phi_hat: float
    delta_phi_sq: float
    heisenberg_bound: float


@dataclass(frozen=True)
class SweepResult:
    """Scaling-sweep table plus the fitted log-log slope."""

    nbars: tuple[float, ...]
    shots: int
    repetitions: int
    results: tuple[EstimationResult, ...] = field(repr=False)
    slope: float = math.nan

    def delta_phi_sq(self) -> np.ndarray:
        return np.array([r.delta_phi_sq for r in self.results])


def sweep_point_probability(
    nbar: float, phi_bar: float, baseline: str = "squeezed"
) -> float:
    """Survival probability at one equal-phase operating point.

    ``squeezed`` uses the exact covariance engine.  ``coherent`` substitutes
    Poissonian photon-number statistics (variance equal to the mean) into
    the quadratic expansion, which is the shot-noise-limited reference.
    """
    if baseline == "squeezed":
        squeeze = SqueezeParameter(math.asinh(math.sqrt(nbar)))
        p, _ = exact_survival_probability([1.0], [phi_bar], squeeze)
        return p
    if baseline == "coherent":
        moments = PhaseMoments(phi_bar, phi_bar ** 2)
        poissonian = PhotonMoments(nbar, nbar ** 2 + nbar, nbar)
        return survival_probability_quadratic(generator_variance(moments, poissonian))
    raise ValueError(f"baseline must be 'squeezed' or 'coherent', got {baseline!r}")


def sweep_shot_count(
    p: float, shots: int, seed: int, point_index: int, repetition: int
) -> int:
    """One repetition's shot count, keyed by (seed, point, repetition).

    The derived-seed scheme makes the result independent of execution
    order, so serial and parallel sweeps agree bit for bit.
    """
    return simulate_shots(p, shots, [seed, point_index, repetition])


def _sweep_inversion_scale(nbar: float, baseline: str) -> float:
    # leading-order model inverted by the sweep estimator: the squeezed probe
    # has generator variance 2 nbar^2 phi^2 at large nbar, the coherent
    # baseline nbar phi^2
    return 2.0 * nbar ** 2 if baseline == "squeezed" else nbar


def scaling_sweep(
    nbars,
    shots: int,
    repetitions: int,
    seed: int,
    bias_product: float = 0.05,
    baseline: str = "squeezed",
    force: bool = False,
    counts: dict[tuple[int, int], int] | None = None,
) -> SweepResult:
    """Monte-Carlo scan of the estimation variance against the mean photon number.

    Every point operates at the same bias ``phi_bar * nbar = bias_product``
    with all phases equal, so the regime ratio is ``bias_product``
    everywhere.  Per repetition the shot fraction is inverted through the
    leading-order model (survival deficit ``2 nbar^2 phi^2`` for the
    squeezed probe, ``nbar phi^2`` for the coherent baseline); the reported
    ``delta_phi_sq`` is the sample variance of those estimates, which is
    directly comparable to the ``1 / (8 nbar^2 shots)`` reference.  The
    finite-``nbar`` inversion of :func:`estimate_phase` would rescale it by
    ``nbar / (nbar + 1)``.

    Args:
        nbars: mean photon numbers to scan, all positive.
        shots: detections per repetition.
        repetitions: independent repetitions per point (>= 2).
        seed: master seed; repetition ``k`` of point ``i`` draws from the
            stream keyed by ``(seed, i, k)``.
        bias_product: operating bias ``phi_bar * nbar``.
        baseline: ``squeezed`` or ``coherent``.
        force: allow operation outside the small-phase regime.
        counts: optional precomputed shot counts keyed by ``(point, rep)``,
            as produced by :func:`sweep_shot_count`; lets callers
            parallelise the sampling without changing the result.

    Raises:
        RegimeError: if ``bias_product`` violates the small-phase regime and
            ``force`` is not set.
    """
    nbars = [float(n) for n in nbars]
    if not nbars:
        raise ValueError("nbars must not be empty")
    if any(n <= 0 for n in nbars):
        raise ValueError("all mean photon numbers must be positive")
    if repetitions < 2:
        raise ValueError(f"repetitions must be >= 2, got {repetitions}")
    if bias_product >= REGIME_THRESHOLD and not force:
        raise RegimeError(
            f"bias product {bias_product} is outside the small-phase regime "
            f"(threshold {REGIME_THRESHOLD}); pass force=True to override"
        )
    results = []
    for i, nbar in enumerate(nbars):
        phi_bar = bias_product / nbar
        p = sweep_point_probability(nbar, phi_bar, baseline)
        scale = _sweep_inversion_scale(nbar, baseline)
        estimates = np.empty(repetitions)
        total = 0
        for k in range(repetitions):
            if counts is not None:
                count = counts[(i, k)]
            else:
                count = sweep_shot_count(p, shots, seed, i, k)
            total += count
            estimates[k] = math.sqrt(max(0.0, 1.0 - count / shots) / scale)
        results.append(
            EstimationResult(
                p_hat=total / (repetitions * shots),
                phi_hat=float(estimates.mean()),
                delta_phi_sq=float(estimates.var(ddof=1)),
                heisenberg_bound=heisenberg_sensitivity(nbar) / shots,
            )
        )
    slope = float(
        np.polyfit(np.log(nbars), np.log([r.delta_phi_sq for r in results]), 1)[0]
    ) if len(nbars) > 1 else math.nan
    return SweepResult(tuple(nbars), shots, repetitions, tuple(results), slope)
