"""Self-validation suites behind the ``validate`` CLI command.

The quick suite cross-checks the two engines and the exact moment
identities on seeded random configurations; the full suite adds the
Mach-Zehnder factorisation residual and the convergence order of the
survival series.  Every check returns its worst observed defect so a
failure report names what broke and by how much.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import fock, metrology, network
from .gaussian import SqueezeParameter, photon_moments, vacuum_state, apply_squeeze


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def _random_cases(seed: int, count: int, max_modes: int = 5, max_r: float = 1.2):
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(count):
        modes = int(rng.integers(1, max_modes + 1))
        weights = rng.dirichlet(np.ones(modes))
        weights = weights / weights.sum()
        phases = rng.uniform(-0.3, 0.3, size=modes)
        squeeze = SqueezeParameter(rng.uniform(0.05, max_r), rng.uniform(0.0, 2 * math.pi))
        cases.append((weights, phases, squeeze))
    return cases


def check_cross_engine(seed: int, cases: int = 20, tol: float = 1e-6) -> CheckResult:
    """Covariance engine vs occupation-basis oracle on random configurations."""
    worst = 0.0
    for weights, phases, squeeze in _random_cases(seed, cases):
        p_gauss, _ = metrology.exact_survival_probability(weights, phases, squeeze)
        p_fock, _ = metrology.exact_survival_probability(
            weights, phases, squeeze, engine="fock"
        )
        worst = max(worst, abs(p_gauss - p_fock))
    return CheckResult(
        "cross-engine equality", worst <= tol, f"max |gaussian - fock| = {worst:.3e}"
    )


def check_table_route(seed: int, cases: int = 5, tol: float = 1e-6) -> CheckResult:
    """Explicit amplitude table vs sector resummation at moderate cutoffs."""
    worst = 0.0
    for weights, phases, squeeze in _random_cases(seed + 1, cases, max_modes=3, max_r=0.8):
        cutoff = fock.recommend_cutoff(squeeze, tail_bound=1e-10)
        amps = fock.squeezed_vacuum_amplitudes(squeeze, cutoff)
        unitary = network.embed_weights_unitary(weights)
        table = fock.propagate_through_network(amps, unitary)
        p_table = fock.survival_probability(table, phases)
        p_sector = fock.survival_probability_sectors(amps, weights, phases)
        worst = max(worst, abs(p_table - p_sector))
    return CheckResult(
        "table vs sector route", worst <= tol, f"max route gap = {worst:.3e}"
    )


def check_odd_terms(seed: int, cases: int = 20, tol: float = 1e-10) -> CheckResult:
    """Odd survival-series terms must vanish identically."""
    worst = 0.0
    for weights, phases, squeeze in _random_cases(seed + 2, cases):
        cutoff = fock.recommend_cutoff(squeeze, tail_bound=1e-13, moment_power=8)
        amps = fock.squeezed_vacuum_amplitudes(squeeze, cutoff)
        series = fock.generator_moments_sectors(amps, weights, phases, max_order=8)
        worst = max(worst, float(np.max(np.abs(series.terms[1::2]))))
    return CheckResult(
        "odd series terms vanish", worst <= tol, f"max odd term = {worst:.3e}"
    )


def check_variance_identity(seed: int, cases: int = 20, tol: float = 1e-9) -> CheckResult:
    """Analytic generator variance against the oracle's second moment."""
    worst = 0.0
    for weights, phases, squeeze in _random_cases(seed + 3, cases):
        cutoff = fock.recommend_cutoff(squeeze, tail_bound=1e-14, moment_power=2)
        amps = fock.squeezed_vacuum_amplitudes(squeeze, cutoff)
        series = fock.generator_moments_sectors(amps, weights, phases, max_order=2)
        oracle = series.moments[2] - series.moments[1] ** 2
        probe = apply_squeeze(vacuum_state(weights.size), 0, squeeze)
        analytic = metrology.generator_variance(
            metrology.phase_moments(weights, phases), photon_moments(probe)
        )
        worst = max(worst, abs(oracle - analytic))
    return CheckResult(
        "generator variance identity", worst <= tol, f"max defect = {worst:.3e}"
    )


def check_mz_factorization(seed: int, pairs: int = 20, tol: float = 1e-9) -> CheckResult:
    """Composed balanced interferometer vs its mixing/global-phase factorisation."""
    rng = np.random.default_rng(seed + 4)
    worst = 0.0
    for _ in range(pairs):
        phi1, phi2 = rng.uniform(-math.pi, math.pi, size=2)
        worst = max(
            worst, fock.mach_zehnder_factorization_residual(phi1, phi2, cutoff=12)
        )
    return CheckResult(
        "mach-zehnder factorization", worst <= tol, f"max residual = {worst:.3e}"
    )


def check_series_convergence(seed: int, min_exponent: float = 7.0) -> CheckResult:
    """Fitted order of the truncated survival series against the exact value.

    Scales one fixed configuration through a ladder of overall phase
    magnitudes and fits the log residual of the series through the
    sixth-order term; the remainder must fall off with exponent >= 7.
    """
    rng = np.random.default_rng(seed + 5)
    weights = rng.dirichlet(np.ones(3))
    weights = weights / weights.sum()
    base = rng.uniform(0.5, 1.0, size=3) * np.sign(rng.uniform(-1, 1, size=3))
    squeeze = SqueezeParameter(math.asinh(1.0))
    cutoff = fock.recommend_cutoff(squeeze, tail_bound=1e-16, moment_power=8)
    amps = fock.squeezed_vacuum_amplitudes(squeeze, cutoff)
    scales = np.geomspace(0.05, 0.2, 8)
    residuals = []
    for scale in scales:
        phases = base * (scale / np.max(np.abs(base)))
        exact = fock.survival_probability_sectors(amps, weights, phases)
        series = fock.generator_moments_sectors(amps, weights, phases, max_order=6)
        residuals.append(abs(fock.series_partial_sum(series.terms, 6) - exact))
    exponent = float(np.polyfit(np.log(scales), np.log(residuals), 1)[0])
    return CheckResult(
        "series convergence order",
        exponent >= min_exponent,
        f"fitted exponent = {exponent:.2f}",
    )


def quick_suite(seed: int = 0) -> list[CheckResult]:
    return [
        check_cross_engine(seed),
        check_table_route(seed),
        check_odd_terms(seed),
        check_variance_identity(seed),
    ]


def full_suite(seed: int = 0) -> list[CheckResult]:
    return quick_suite(seed) + [
        check_mz_factorization(seed),
        check_series_convergence(seed),
    ]
