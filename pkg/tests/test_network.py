import math

import numpy as np
import pytest

from sqzmet import (
    MeshElement,
    RotationMesh,
    embed_weights_unitary,
    mach_zehnder_unitary,
    mesh_to_netlist,
    parse_netlist,
    reck_decompose,
    recompose,
    unitarity_defect,
    validate_weights,
)
from conftest import random_unitary, random_weights

HALF = math.sqrt(0.5)


class TestWeightValidation:
    def test_accepts_normalized(self):
        w = validate_weights([0.25, 0.75])
        assert np.array_equal(w, [0.25, 0.75])

    @pytest.mark.parametrize(
        "bad", [[0.5, 0.6], [-0.1, 1.1], [], [0.5, np.nan, 0.5]]
    )
    def test_rejects_invalid(self, bad):
        with pytest.raises(ValueError):
            validate_weights(bad)


class TestEmbedWeights:
    def test_unit_weight_gives_identity(self):
        assert np.array_equal(embed_weights_unitary([1.0, 0.0, 0.0]), np.eye(3))

    def test_balanced_two_mode(self):
        expected = np.array([[HALF, HALF], [HALF, -HALF]])
        assert np.allclose(embed_weights_unitary([0.5, 0.5]), expected, atol=1e-15)

    def test_quarter_weight_first_column(self):
        unitary = embed_weights_unitary([0.25, 0.75])
        assert np.allclose(unitary[:, 0], [0.5, math.sqrt(0.75)], atol=1e-15)
        assert np.allclose(unitary[1, 0], 0.8660254037844386, atol=1e-12)
        assert unitarity_defect(unitary) <= 1e-12

    def test_all_weight_on_last_channel_swaps(self):
        unitary = embed_weights_unitary([0.0, 0.0, 1.0])
        expected = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=float)
        assert np.allclose(unitary, expected, atol=1e-15)

    def test_zero_weight_channels_are_safe(self):
        unitary = embed_weights_unitary([0.3, 0.0, 0.7, 0.0])
        assert np.all(np.isfinite(unitary))
        assert unitarity_defect(unitary) <= 1e-12
        assert np.allclose(unitary[:, 0], np.sqrt([0.3, 0.0, 0.7, 0.0]), atol=1e-15)

    def test_deterministic(self):
        a = embed_weights_unitary([0.2, 0.3, 0.5])
        b = embed_weights_unitary([0.2, 0.3, 0.5])
        assert np.array_equal(a, b)

    def test_random_weight_vectors(self, rng):
        for _ in range(200):
            dim = int(rng.integers(2, 9))
            w = random_weights(rng, dim)
            unitary = embed_weights_unitary(w)
            assert np.max(np.abs(unitary[:, 0] - np.sqrt(w))) <= 1e-12
            assert unitarity_defect(unitary) <= 1e-10


class TestMachZehnder:
    def test_limiting_mirror(self):
        assert np.array_equal(mach_zehnder_unitary(1.0), np.diag([1.0, -1.0]))

    def test_balanced(self):
        expected = np.array([[HALF, HALF], [HALF, -HALF]])
        assert np.allclose(mach_zehnder_unitary(0.5), expected, atol=1e-15)

    def test_quarter_reflectivity(self):
        expected = np.array([[0.5, 0.8660254037844386], [0.8660254037844386, -0.5]])
        assert np.allclose(mach_zehnder_unitary(0.25), expected, atol=1e-12)

    def test_matches_embedding_on_two_modes(self, rng):
        for w1 in rng.uniform(0, 1, size=10):
            assert np.allclose(
                mach_zehnder_unitary(w1),
                embed_weights_unitary([w1, 1 - w1]),
                atol=1e-12,
            )

    @pytest.mark.parametrize("bad", [-0.01, 1.01])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            mach_zehnder_unitary(bad)


class TestReckDecomposition:
    def test_identity_gives_empty_mesh(self):
        mesh = reck_decompose(np.eye(4))
        assert mesh.elements == ()
        assert np.allclose(mesh.output_phases, 0.0)
        assert np.allclose(recompose(mesh), np.eye(4))

    def test_balanced_splitter_single_element(self):
        unitary = mach_zehnder_unitary(0.5)
        mesh = reck_decompose(unitary)
        assert len(mesh.elements) == 1
        assert abs(mesh.elements[0].theta) == pytest.approx(math.pi / 4, abs=1e-12)
        assert np.linalg.norm(recompose(mesh) - unitary) <= 1e-12

    def test_roundtrip_random_unitaries(self, rng):
        for dim in range(2, 17):
            unitary = random_unitary(rng, dim)
            mesh = reck_decompose(unitary)
            assert len(mesh.elements) <= dim * (dim - 1) // 2
            assert all(el.mode + 1 < dim for el in mesh.elements)
            assert np.linalg.norm(recompose(mesh) - unitary) <= 1e-9

    def test_roundtrip_seeded_five_mode(self):
        unitary = random_unitary(np.random.default_rng(5), 5)
        mesh = reck_decompose(unitary)
        assert np.linalg.norm(recompose(mesh) - unitary) <= 1e-9

    def test_phases_are_wrapped(self, rng):
        mesh = reck_decompose(random_unitary(rng, 6))
        for element in mesh.elements:
            assert -math.pi < element.phase <= math.pi
        assert np.all(mesh.output_phases > -math.pi - 1e-12)
        assert np.all(mesh.output_phases <= math.pi + 1e-12)

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError, match="not unitary"):
            reck_decompose(np.ones((3, 3)))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            reck_decompose(np.ones((2, 3)))


class TestNetlist:
    def test_format_shape(self):
        mesh = reck_decompose(mach_zehnder_unitary(0.5))
        text = mesh_to_netlist(mesh)
        lines = text.strip().splitlines()
        assert lines[0].startswith("pair 0 1 / ")
        assert lines[-1].startswith("phases ")
        assert len(lines) == 2

    def test_roundtrip_is_bit_exact(self, rng):
        mesh = reck_decompose(random_unitary(rng, 5))
        parsed = parse_netlist(mesh_to_netlist(mesh))
        assert parsed.elements == mesh.elements
        assert np.array_equal(parsed.output_phases, mesh.output_phases)
        assert np.allclose(recompose(parsed), recompose(mesh), atol=0)

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_netlist("pair 0 2 / 0.1 / 0.2\nphases 0.0 0.0 0.0\n")
        with pytest.raises(ValueError):
            parse_netlist("pair 0 1 | 0.1 | 0.2\nphases 0.0 0.0\n")
        with pytest.raises(ValueError, match="phase line"):
            parse_netlist("pair 0 1 / 0.1 / 0.2\n")

    def test_empty_mesh_netlist(self):
        mesh = RotationMesh((), np.zeros(3))
        parsed = parse_netlist(mesh_to_netlist(mesh))
        assert parsed.elements == ()
        assert parsed.dim == 3

    def test_mesh_element_fields(self):
        element = MeshElement(2, -0.5, 1.0)
        assert element.mode == 2 and element.theta == -0.5 and element.phase == 1.0
