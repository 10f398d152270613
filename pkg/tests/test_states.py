import json
import math

import numpy as np
import pytest

from conftest import random_unitary
from steerkit import linalg, states
from steerkit.errors import InvalidStateError


def hierarchy_eigenvalues(s):
    d = math.sqrt(1.0 - 2.0 * s + 5.0 * s * s)
    return sorted([0.0, (1 - s) / 2, (1 + s + d) / 4, (1 + s - d) / 4], reverse=True)


def hierarchy_pt_eigenvalues(s):
    d = math.sqrt(1.0 - 2.0 * s + 5.0 * s * s)
    return sorted([0.5, s / 2, (1 - s + d) / 4, (1 - s - d) / 4], reverse=True)


class TestComposeDecompose:
    def test_singlet_correlation_matrix(self):
        st = states.singlet()
        psi = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)
        assert np.max(np.abs(st.density_matrix() - np.outer(psi, psi.conj()))) < 1e-14
        a, b, t = states.decompose(st.density_matrix())
        assert np.allclose(t, -np.eye(3), atol=1e-14)
        assert np.allclose(a, 0.0, atol=1e-14) and np.allclose(b, 0.0, atol=1e-14)

    def test_hierarchy_parameters(self):
        st = states.hierarchy_state(0.4)
        assert np.allclose(st.alpha, [0, 0, 0.6], atol=1e-15)
        assert np.allclose(st.T, -0.4 * np.eye(3), atol=1e-15)
        # convex-combination definition, reconstructed directly
        psi = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)
        direct = 0.4 * np.outer(psi, psi.conj()) + 0.6 * np.kron(
            np.diag([1.0, 0.0]), np.eye(2) / 2
        )
        assert np.max(np.abs(st.density_matrix() - direct)) < 1e-14

    def test_maximally_mixed(self):
        st = states.compose(np.zeros(3), np.zeros(3), np.zeros((3, 3)))
        assert np.allclose(st.density_matrix(), np.eye(4) / 4, atol=1e-15)

    def test_invalid_parameters_rejected(self):
        with pytest.raises(InvalidStateError):
            states.compose([0, 0, 0], [0, 0, 0], np.diag([1.0, 1.0, 1.0]))

    def test_roundtrip_random(self):
        for seed in range(10_000):
            st = states.random_state(seed, "mixed" if seed % 2 else "pure")
            a, b, t = states.decompose(st.density_matrix())
            assert np.max(np.abs(a - st.alpha)) < 1e-12
            assert np.max(np.abs(b - st.beta)) < 1e-12
            assert np.max(np.abs(t - st.T)) < 1e-12
            if seed % 5 == 0:
                rebuilt = states.compose(a, b, t).density_matrix()
                assert np.max(np.abs(rebuilt - st.density_matrix())) < 1e-12


class TestFamilies:
    def test_hierarchy_limits(self):
        s1 = states.hierarchy_state(1.0)
        assert np.allclose(s1.T, -np.eye(3), atol=1e-15)
        s0 = states.hierarchy_state(0.0)
        direct = np.kron(np.diag([1.0, 0.0]), np.eye(2) / 2)
        assert np.max(np.abs(s0.density_matrix() - direct)) < 1e-15

    def test_hierarchy_eigenvalues_grid(self):
        for s in np.linspace(0.0, 1.0, 100):
            w = linalg.eigvalsh(states.hierarchy_state(float(s)).density_matrix())
            assert np.max(np.abs(w - hierarchy_eigenvalues(float(s)))) < 1e-10

    def test_hierarchy_reduced_states(self):
        st = states.hierarchy_state(0.37)
        assert np.allclose(st.rho_b(), np.eye(2) / 2, atol=1e-15)
        assert np.allclose(
            st.rho_a(), np.diag([(1 + 0.63) / 2, (1 - 0.63) / 2]), atol=1e-14
        )

    def test_hierarchy_domain(self):
        with pytest.raises(InvalidStateError):
            states.hierarchy_state(1.2)

    def test_one_way_correlation_matrices(self):
        p, th = 0.8, 0.05
        st = states.one_way_state(p, th)
        s2 = math.sin(2 * th)
        assert np.allclose(st.T, np.diag([p * s2, -p * s2, p]), atol=1e-15)
        pv = states.one_way_povm_state(0.825, 0.020)
        c, s = math.cos(0.020), math.sin(0.020)
        assert np.allclose(
            pv.T, np.diag([0.825 * s * c, -0.825 * s * c, 0.825 * c * c]), atol=1e-15
        )

    def test_one_way_convex_definitions(self):
        # Both families rebuilt from their mixture definitions.
        p, th = 0.8, 0.05
        psi = np.array([math.cos(th), 0, 0, math.sin(th)], dtype=complex)
        rho_b = np.diag([math.cos(th) ** 2, math.sin(th) ** 2]).astype(complex)
        direct = p * np.outer(psi, psi.conj()) + (1 - p) * np.kron(
            np.eye(2) / 2, rho_b
        )
        assert np.max(np.abs(direct - states.one_way_state(p, th).density_matrix())) < 1e-14
        p, th = 0.825, 0.020
        psi = np.array([math.cos(th), 0, 0, math.sin(th)], dtype=complex)
        rho_b = np.diag([math.cos(th) ** 2, math.sin(th) ** 2]).astype(complex)
        rho_pt = p * np.outer(psi, psi.conj()) + (1 - p) * np.kron(np.eye(2) / 2, rho_b)
        rho_a = np.diag(
            [(1 + p * math.cos(2 * th)) / 2, (1 - p * math.cos(2 * th)) / 2]
        ).astype(complex)
        direct = 0.5 * (rho_pt + np.kron(rho_a, np.diag([1.0, 0.0])))
        assert (
            np.max(np.abs(direct - states.one_way_povm_state(p, th).density_matrix()))
            < 1e-14
        )

    def test_maximally_entangled_at_p1(self):
        st = states.one_way_state(1.0, math.pi / 4)
        assert np.allclose(st.T, np.diag([1.0, -1.0, 1.0]), atol=1e-14)
        assert states.concurrence(st) == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_angle_rejected(self):
        with pytest.raises(InvalidStateError):
            states.one_way_state(0.8, 0.0)
        with pytest.raises(InvalidStateError):
            states.one_way_povm_state(0.8, math.pi / 2)


class TestEntanglement:
    def test_hierarchy_closed_forms(self):
        for s in np.linspace(0.0, 1.0, 40):
            s = float(s)
            rep = states.entanglement(states.hierarchy_state(s))
            d = math.sqrt(1 - 2 * s + 5 * s * s)
            assert rep.concurrence == pytest.approx(s, abs=1e-10)
            assert rep.negativity == pytest.approx((-1 + s + d) / 2, abs=1e-10)
            assert np.max(
                np.abs(np.array(rep.pt_eigenvalues) - hierarchy_pt_eigenvalues(s))
            ) < 1e-10

    def test_hierarchy_entangled_iff_s_positive(self):
        assert states.concurrence(states.hierarchy_state(0.0)) == 0.0
        for s in (1e-3, 0.2, 1.0):
            assert states.concurrence(states.hierarchy_state(s)) > 0.0

    def test_pt_eigenvalues_endpoints(self):
        w = states.partial_transpose_eigenvalues(states.hierarchy_state(1.0))
        assert np.allclose(w, [0.5, 0.5, 0.5, -0.5], atol=1e-12)
        w = states.partial_transpose_eigenvalues(states.hierarchy_state(0.0))
        assert np.allclose(w, [0.5, 0.5, 0.0, 0.0], atol=1e-12)
        mixed = states.compose(np.zeros(3), np.zeros(3), np.zeros((3, 3)))
        assert np.allclose(
            states.partial_transpose_eigenvalues(mixed), 0.25, atol=1e-14
        )

    def test_product_state_unentangled(self):
        st = states.compose(
            [0.3, 0, 0.1], [0, 0.5, 0], np.outer([0.3, 0, 0.1], [0, 0.5, 0])
        )
        rep = states.entanglement(st)
        assert rep.concurrence == 0.0
        assert rep.negativity == pytest.approx(0.0, abs=1e-12)

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(17)
        for seed in range(60):
            st = states.random_state(seed, "mixed")
            u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
            rotated = u @ st.density_matrix() @ u.conj().T
            st2 = states.TwoQubitState(*states.decompose(rotated))
            assert states.concurrence(st2) == pytest.approx(
                states.concurrence(st), abs=1e-10
            )
            assert states.negativity(st2) == pytest.approx(
                states.negativity(st), abs=1e-10
            )

    def test_concurrence_oracle(self):
        # Independent route: numpy eigvalsh on the same Hermitian product.
        for seed in range(200):
            st = states.random_state(seed, "mixed")
            rho = st.density_matrix()
            flip = np.kron(linalg.SIGMA_Y, linalg.SIGMA_Y)
            w, v = np.linalg.eigh(rho)
            root = (v * np.sqrt(np.maximum(w, 0))) @ v.conj().T
            lam = np.linalg.eigvalsh(root @ flip @ rho.conj() @ flip @ root)
            lam = np.maximum(lam[::-1], 0.0)
            lam[lam < 1e-14 * max(lam[0], 1e-300)] = 0.0
            lam = np.sqrt(lam)
            expected = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
            assert states.concurrence(st) == pytest.approx(expected, abs=1e-9)


class TestRandomStates:
    def test_determinism(self):
        for kind in ("pure", "mixed", "bell_diagonal"):
            a = states.random_state(7, kind)
            b = states.random_state(7, kind)
            assert np.array_equal(a.T, b.T)
            assert np.array_equal(a.alpha, b.alpha)

    def test_bell_diagonal_structure(self):
        for seed in range(100):
            st = states.random_state(seed, "bell_diagonal")
            assert np.all(st.alpha == 0.0) and np.all(st.beta == 0.0)
            assert np.allclose(st.T, np.diag(np.diag(st.T)), atol=1e-15)
            w = linalg.eigvalsh(st.density_matrix())
            assert w[-1] > -1e-12

    def test_mixed_validity(self):
        for seed in range(100):
            st = states.random_state(seed, "mixed")
            w = linalg.eigvalsh(st.density_matrix())
            assert w[-1] > -1e-12
            assert np.trace(st.density_matrix()).real == pytest.approx(1.0, abs=1e-12)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            states.random_state(0, "thermal")


class TestJson:
    def test_roundtrip(self):
        st = states.one_way_state(0.8, 0.05)
        text = st.to_json()
        parsed = json.loads(text)
        assert set(parsed) == {"alpha", "beta", "T"}
        back = states.TwoQubitState.from_json(text)
        assert np.allclose(back.T, st.T, atol=1e-15)
        assert np.allclose(back.alpha, st.alpha, atol=1e-15)

    def test_malformed_rejected(self):
        with pytest.raises(InvalidStateError):
            states.TwoQubitState.from_json('{"alpha": [0, 0, 0]}')
