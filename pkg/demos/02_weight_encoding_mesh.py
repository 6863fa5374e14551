"""From probability weights to a beamsplitter mesh.

The estimation weights live in the first column of the network unitary.
This script builds that unitary for a five-channel example, factors it
into rotations on adjacent mode pairs, and prints the netlist a lab would
wire up.  Recomposing the netlist reproduces the matrix to rounding.
"""

import numpy as np

from sqzmet import (
    embed_weights_unitary,
    mesh_to_netlist,
    reck_decompose,
    recompose,
    unitarity_defect,
)

weights = np.array([0.4, 0.25, 0.2, 0.1, 0.05])
unitary = embed_weights_unitary(weights)

print("first column          :", np.round(unitary[:, 0].real, 6))
print("sqrt(weights)         :", np.round(np.sqrt(weights), 6))
print(f"unitarity residual    : {unitarity_defect(unitary):.3e}")
print()

mesh = reck_decompose(unitary)
print(f"mesh elements         : {len(mesh.elements)} (at most {5 * 4 // 2})")
print(f"round-trip residual   : {np.linalg.norm(recompose(mesh) - unitary):.3e}")
print()
print("netlist")
print("-------")
print(mesh_to_netlist(mesh))

# Concentrating all weight on one channel degenerates the mesh: a single
# swap-like reflection, no interference needed.
trivial = reck_decompose(embed_weights_unitary([0.0, 0.0, 1.0]))
print("all weight on channel 3 ->", len(trivial.elements), "elements")
print(mesh_to_netlist(trivial))
