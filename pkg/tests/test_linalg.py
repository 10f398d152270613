import math

import numpy as np
import pytest

from conftest import random_rotation
from steerkit import linalg
from steerkit.errors import DegenerateSpanError, NonHermitianError, NonPsdError


def _random_hermitian(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return g + g.conj().T


class TestEigh:
    def test_pauli_z_spectrum(self):
        w, _ = linalg.eigh(linalg.SIGMA_Z)
        assert np.allclose(w, [1.0, -1.0], atol=1e-14)

    def test_scaled_identity4(self):
        w, _ = linalg.eigh(np.eye(4, dtype=complex) / 4.0)
        assert np.allclose(w, 0.25, atol=1e-14)

    def test_singlet_spectrum(self):
        # Pure singlet: eigenvalues (1, 0, 0, 0).
        from steerkit import states

        w, _ = linalg.eigh(states.hierarchy_state(1.0).density_matrix())
        assert np.allclose(w, [1.0, 0.0, 0.0, 0.0], atol=1e-12)

    @pytest.mark.parametrize("dim", [2, 4])
    def test_reconstruction_random(self, dim, kern):
        rng = np.random.default_rng(11 + dim)
        fn = kern.eigh2 if dim == 2 else kern.eigh4
        for _ in range(300):
            h = _random_hermitian(rng, dim)
            w, v = fn(h)
            assert np.max(np.abs(h @ v - v @ np.diag(w))) < 1e-10
            assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) < 1e-12
            assert np.all(np.diff(w) <= 1e-12)
            # independent oracle
            w_ref = np.sort(np.linalg.eigvalsh(h))[::-1]
            assert np.max(np.abs(w - w_ref)) < 1e-11

    def test_rejects_non_hermitian(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(NonHermitianError):
            linalg.eigh(m)


class TestPsdSqrtPinv:
    def test_scaled_identity(self):
        root, pinv, rank = linalg.psd_sqrt_pinv(linalg.I2 / 2.0)
        assert rank == 2
        assert np.allclose(root, linalg.I2 / math.sqrt(2.0), atol=1e-14)
        assert np.allclose(pinv, linalg.I2 * math.sqrt(2.0), atol=1e-14)

    def test_projector(self):
        proj = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        root, pinv, rank = linalg.psd_sqrt_pinv(proj)
        assert rank == 1
        assert np.allclose(root, proj, atol=1e-14)
        assert np.allclose(pinv, proj, atol=1e-14)

    def test_one_way_reduced_state(self):
        # diag(cos^2 t, sin^2 t) at t = pi/6 has sqrt diag(sqrt(3)/2, 1/2).
        theta = math.pi / 6.0
        m = np.diag([math.cos(theta) ** 2, math.sin(theta) ** 2]).astype(complex)
        root, _, rank = linalg.psd_sqrt_pinv(m)
        assert rank == 2
        assert np.allclose(
            root, np.diag([math.sqrt(0.75), math.sqrt(0.25)]), atol=1e-14
        )

    def test_rejects_negative(self):
        with pytest.raises(NonPsdError):
            linalg.psd_sqrt_pinv(np.diag([1.0, -0.1]).astype(complex))

    def test_sqrt_squares_back(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            m = g @ g.conj().T
            root, pinv, rank = linalg.psd_sqrt_pinv(m)
            assert rank == 2
            assert np.max(np.abs(root @ root - m)) < 1e-10
            assert np.max(np.abs(root @ pinv - np.eye(2))) < 1e-8


class TestSvd3:
    def test_minus_identity_family(self):
        for s in (0.0, 0.3, 1.0):
            sv, _, _ = linalg.svd3(-s * np.eye(3))
            assert np.allclose(sv, s, atol=1e-14)

    def test_one_way_correlation(self):
        p, th = 0.7, 0.4
        s2 = math.sin(2 * th)
        t = np.diag([p * s2, -p * s2, p])
        sv, _, _ = linalg.svd3(t)
        assert np.allclose(
            sv, sorted([p, p * s2, p * s2], reverse=True), atol=1e-14
        )

    def test_reconstruction_and_oracle(self, kern):
        rng = np.random.default_rng(2)
        for i in range(300):
            t = rng.normal(size=(3, 3))
            if i % 5 == 1:
                t[:, 2] = 0.0
            if i % 7 == 2:
                t = np.outer(rng.normal(size=3), rng.normal(size=3))
            sv, u, v = kern.svd3(t)
            assert np.max(np.abs(u @ np.diag(sv) @ v.T - t)) < 1e-10
            assert np.max(np.abs(u.T @ u - np.eye(3))) < 1e-12
            assert np.max(np.abs(v.T @ v - np.eye(3))) < 1e-12
            ref = np.linalg.svd(t, compute_uv=False)
            assert np.max(np.abs(sv - ref)) < 1e-11

    def test_rotation_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            t = rng.normal(size=(3, 3))
            sv, _, _ = linalg.svd3(t)
            rot_a = random_rotation(rng)
            rot_b = random_rotation(rng)
            sv2, _, _ = linalg.svd3(rot_a @ t @ rot_b.T)
            assert np.max(np.abs(sv - sv2)) < 1e-10


class TestDualBasis:
    def test_orthogonal_pair_fixed(self):
        b1p, b2p = linalg.dual_basis([1, 0, 0], [0, 0, 1])
        assert np.allclose(b1p, [1, 0, 0], atol=1e-14)
        assert np.allclose(b2p, [0, 0, 1], atol=1e-14)

    def test_sixty_degree_pair(self):
        # Hand inversion of the 2x2 Gram matrix at phi = pi/3.
        phi = math.pi / 3.0
        b1 = np.array([1.0, 0.0, 0.0])
        b2 = np.array([math.cos(phi), math.sin(phi), 0.0])
        b1p, b2p = linalg.dual_basis(b1, b2)
        assert np.allclose(b1p, [1.0, -1.0 / math.sqrt(3.0), 0.0], atol=1e-12)
        assert np.allclose(b2p, [0.0, 2.0 / math.sqrt(3.0), 0.0], atol=1e-12)

    def test_parallel_rejected(self):
        with pytest.raises(DegenerateSpanError):
            linalg.dual_basis([0, 1, 0], [0, 1, 0])

    def test_delta_contract_random(self):
        rng = np.random.default_rng(7)
        done = 0
        while done < 10_000:
            b1 = rng.normal(size=3)
            b2 = rng.normal(size=3)
            b1 /= np.linalg.norm(b1)
            b2 /= np.linalg.norm(b2)
            if 1.0 - (b1 @ b2) ** 2 <= 1e-6:
                continue
            b1p, b2p = linalg.dual_basis(b1, b2)
            gram = np.array([[b1p @ b1, b1p @ b2], [b2p @ b1, b2p @ b2]])
            assert np.max(np.abs(gram - np.eye(2))) < 1e-10
            # duals stay inside the span
            normal = np.cross(b1, b2)
            assert abs(b1p @ normal) < 1e-9 * np.linalg.norm(normal)
            assert abs(b2p @ normal) < 1e-9 * np.linalg.norm(normal)
            done += 1
