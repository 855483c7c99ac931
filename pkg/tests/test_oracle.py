"""Dense brute-force machinery: construction identities and exact values."""

import numpy as np
import pytest

from noclick import ModelKind, ModelParams, ResourceError, SimulationError, mode_table
from noclick.oracle import (
    apply_projection,
    build_dense_hamiltonian,
    dense_vacuum,
    evolve_normalized,
    fock_vacuum,
    jordan_wigner_annihilators,
    majorana_expectation,
    majorana_matrix,
    majorana_operators,
    parity_expectation,
    reduced_entropy,
)


def ising(h, gamma, L):
    return ModelParams(kind=ModelKind.ISING, h=h, gamma=gamma, L=L)


def kitaev(h, gamma, L, d):
    return ModelParams(kind=ModelKind.LONG_RANGE_KITAEV, h=h, gamma=gamma, L=L, d=d)


def many_body_spectrum(params):
    """All 4^(L/2) eigenvalues predicted by the momentum-space blocks."""
    lam = mode_table(params).lam
    evs = np.array([0.0 + 0.0j])
    for lk in lam:
        evs = np.concatenate([evs - lk, evs, evs, evs + lk])
    return evs


def lex_sorted(z):
    z = np.asarray(z)
    order = np.lexsort((np.round(z.imag, 9), np.round(z.real, 9)))
    return z[order]


class TestJordanWigner:
    def test_car_algebra(self):
        cs = jordan_wigner_annihilators(3)
        eye = np.eye(8)
        for i in range(3):
            for j in range(3):
                anti = cs[i] @ cs[j].conj().T + cs[j].conj().T @ cs[i]
                assert np.allclose(anti, eye if i == j else 0.0, atol=1e-14)
                assert np.allclose(cs[i] @ cs[j] + cs[j] @ cs[i], 0.0, atol=1e-14)

    def test_majorana_algebra(self):
        ops = majorana_operators(3)
        for i, mi in enumerate(ops):
            for j, mj in enumerate(ops):
                anti = mi @ mj + mj @ mi
                assert np.allclose(anti, 2.0 * np.eye(8) if i == j else 0.0, atol=1e-13)

    def test_size_guard(self):
        with pytest.raises(ResourceError):
            jordan_wigner_annihilators(13)


class TestDenseHamiltonian:
    def test_two_site_even_sector(self):
        # hopping cancels at L=2 under antiperiodic wrap; even-sector
        # eigenvalues are +-2 sqrt(h^2 + J^2) at gamma = 0
        h = 0.3
        H = build_dense_hamiltonian(ising(h, 0.0, 2))
        evals = np.sort(np.linalg.eigvals(H).real)
        target = 2.0 * np.sqrt(h**2 + 1.0)  # = 2.08806130178211 at h = 0.3
        assert np.allclose(np.sort(evals), [-target, 0.0, 0.0, target], atol=1e-12)

    def test_anti_hermitian_part_is_number_operator(self):
        params = ising(0.7, 1.3, 4)
        H = build_dense_hamiltonian(params)
        cs = jordan_wigner_annihilators(4)
        number = sum(c.conj().T @ c for c in cs)
        expected = 2.0 * (0.25j * 1.3) * (4 * np.eye(16) - 2.0 * number) * (-1.0)
        assert np.allclose(H - H.conj().T, expected, atol=1e-13)

    @pytest.mark.parametrize("params", [
        ising(1.0 / np.sqrt(2.0), 1.0, 6),
        ising(0.2, 3.7, 6),
        kitaev(0.1, 0.7, 8, 1.7),
        kitaev(0.9, 3.0, 6, 0.5),
    ])
    def test_full_spectrum_matches_momentum_blocks(self, params):
        got = lex_sorted(np.linalg.eigvals(build_dense_hamiltonian(params)))
        want = lex_sorted(many_body_spectrum(params))
        assert np.max(np.abs(got - want)) < 1e-8


class TestEvolution:
    def test_zero_time_is_identity(self):
        params = ising(0.5, 2.0, 4)
        H = build_dense_hamiltonian(params)
        psi = fock_vacuum(4)
        assert np.allclose(evolve_normalized(psi, H, 0.0), psi)

    def test_eigenstate_direction_invariant(self):
        params = ising(0.5, 2.0, 4)
        H = build_dense_hamiltonian(params)
        vac = dense_vacuum(H)
        out = evolve_normalized(vac, H, 3.0)
        overlap = abs(np.vdot(out, vac))
        assert overlap == pytest.approx(1.0, abs=1e-9)

    def test_long_time_converges_to_vacuum_above_critical(self):
        params = ising(1.0 / np.sqrt(2.0), 4.0, 6)  # gamma > gamma_c
        H = build_dense_hamiltonian(params)
        out = evolve_normalized(fock_vacuum(6), H, 80.0)
        vac = dense_vacuum(H)
        assert abs(np.vdot(out, vac)) == pytest.approx(1.0, abs=1e-6)

    def test_parity_is_conserved(self):
        params = ising(0.4, 1.5, 4)
        H = build_dense_hamiltonian(params)
        psi = evolve_normalized(fock_vacuum(4), H, 5.0)
        assert parity_expectation(psi) == pytest.approx(1.0, abs=1e-10)


class TestReducedEntropy:
    def test_product_state(self):
        psi = np.zeros(16, dtype=complex)
        psi[0b0101] = 1.0
        for off in range(3):
            assert reduced_entropy(psi, (off, 1)) == pytest.approx(0.0, abs=1e-12)

    def test_shared_pair(self):
        # (c0^dag + c1^dag)|00>/sqrt(2): one fermion delocalized on 2 sites
        psi = np.zeros(4, dtype=complex)
        psi[0b01] = 1.0 / np.sqrt(2.0)
        psi[0b10] = 1.0 / np.sqrt(2.0)
        assert reduced_entropy(psi, (0, 1)) == pytest.approx(np.log(2.0), abs=1e-12)

    def test_window_complement_symmetry(self):
        rng = np.random.default_rng(1)
        psi = rng.normal(size=16) + 1j * rng.normal(size=16)
        # keep even parity so the state is physical
        parity = 1.0 - 2.0 * (np.bitwise_count(np.arange(16)) % 2)
        psi = psi * (parity > 0)
        psi /= np.linalg.norm(psi)
        assert reduced_entropy(psi, (0, 2)) == pytest.approx(
            reduced_entropy(psi, (2, 2)), abs=1e-10
        )


class TestProjection:
    def test_empty_state_unchanged(self):
        psi = fock_vacuum(3)
        assert np.allclose(apply_projection(psi, 1), psi)

    def test_full_state_impossible(self):
        psi = np.zeros(8, dtype=complex)
        psi[0b111] = 1.0
        with pytest.raises(SimulationError):
            apply_projection(psi, 0)

    def test_projects_out_occupied_component(self):
        psi = np.zeros(4, dtype=complex)
        psi[0b00] = 0.6
        psi[0b11] = 0.8
        out = apply_projection(psi, 0)
        assert out[0b00] == pytest.approx(1.0)
        assert out[0b11] == pytest.approx(0.0)


class TestMajoranaExpectation:
    def test_diagonal_is_one(self):
        params = ising(0.8, 2.0, 4)
        psi = dense_vacuum(build_dense_hamiltonian(params))
        for m in range(8):
            assert majorana_expectation(psi, m, m) == pytest.approx(1.0, abs=1e-12)

    def test_anticommutation_sum(self):
        params = kitaev(0.3, 1.0, 4, 0.5)
        psi = dense_vacuum(build_dense_hamiltonian(params))
        M = majorana_matrix(psi)
        assert np.allclose(M + M.T, 2.0 * np.eye(8), atol=1e-10)
