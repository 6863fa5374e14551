"""Two independent engines, one survival probability.

A squeezed probe enters channel 1 of a three-channel network, picks up an
unknown phase in every channel, and is undone again.  The probability that
it comes back unchanged is computed twice: once by pushing a covariance
matrix through the optics, once by summing the occupation-number
distribution of the probe after the network.  The two numbers must agree
to more than ten digits even though they share no code path.
"""

import math

import numpy as np

from sqzmet import (
    SqueezeParameter,
    apply_network,
    apply_phases,
    apply_squeeze,
    embed_weights_unitary,
    recommend_cutoff,
    squeezed_vacuum_amplitudes,
    survival_probability_sectors,
    vacuum_overlap_probability,
    vacuum_state,
)

weights = np.array([0.5, 0.3, 0.2])
phases = np.array([0.08, -0.03, 0.05])
squeeze = SqueezeParameter(math.asinh(1.0))  # one photon on average

print("weights      :", weights)
print("phases       :", phases)
print(f"mean photons : {squeeze.mean_photon_number:.3f}")
print()

# Route 1: covariance matrices.
unitary = embed_weights_unitary(weights)
state = apply_squeeze(vacuum_state(3), 0, squeeze)
state = apply_network(state, unitary)
state = apply_phases(state, phases)
state = apply_network(state, unitary.conj().T)
p_gaussian = vacuum_overlap_probability(state, squeeze)

# Route 2: occupation-number sectors at a certified cutoff.
cutoff = recommend_cutoff(squeeze, tail_bound=1e-12)
amps = squeezed_vacuum_amplitudes(squeeze, cutoff)
p_fock = survival_probability_sectors(amps, weights, phases)

print(f"covariance engine : {p_gaussian:.15f}")
print(f"fock oracle       : {p_fock:.15f}   (cutoff {cutoff})")
print(f"difference        : {abs(p_gaussian - p_fock):.3e}")
print()

# The survival deficit is the generator variance to second order:
# number fluctuations scaled by the squared phase average, plus the
# weighted phase spread scaled by the photon number.
from sqzmet import generator_variance, phase_moments, photon_moments

probe_stats = photon_moments(apply_squeeze(vacuum_state(3), 0, squeeze))
print("scale   1 - survival   generator variance")
for scale in (0.25, 0.5, 1.0, 2.0):
    state = apply_squeeze(vacuum_state(3), 0, squeeze)
    state = apply_network(state, unitary)
    state = apply_phases(state, phases * scale)
    state = apply_network(state, unitary.conj().T)
    p = vacuum_overlap_probability(state, squeeze)
    variance = generator_variance(phase_moments(weights, phases * scale), probe_stats)
    print(f"{scale:5.2f}   {1 - p:12.6e}   {variance:12.6e}")
