"""Momentum grids, Clausen sums, Bogoliubov data and spectral diagnostics."""

import numpy as np
import pytest

from noclick import (
    BoundaryCondition,
    DegenerateModeError,
    ModelKind,
    ModelParams,
    RegimeError,
    bloch_block,
    bloch_coefficients,
    bogoliubov,
    clausen_g,
    clausen_g_limit,
    critical_gamma,
    dgamma_dk_at_qstar,
    mode_table,
    momentum_grid,
    quasiparticle_energy,
    smallk_asymptotics,
    spectrum_summary,
)

H_RES = 1.0 / np.sqrt(2.0)

# Im Li_d(e^{ik}), frozen from an independent arbitrary-precision evaluation.
CLAUSEN_REFERENCE = {
    (1.0, np.pi / 2): 0.78539816339744831,
    (0.5, 1.0): 1.0439821028491615,
    (1.7, 2.0): 0.68882311374360594,
    (0.2, 0.3): 2.8643647526273209,
    (2.0, 1.0): 1.0139591323607685,
    (3.0, 2.5): 0.50567997921984749,
    (1.2, 0.7): 1.1616717804732066,
}


def ising(h, gamma, L, **kw):
    return ModelParams(kind=ModelKind.ISING, h=h, gamma=gamma, L=L, **kw)


def kitaev(h, gamma, L, d, **kw):
    return ModelParams(kind=ModelKind.LONG_RANGE_KITAEV, h=h, gamma=gamma, L=L, d=d, **kw)


class TestMomentumGrid:
    def test_abc_l4(self):
        ks = momentum_grid(ising(0.5, 1.0, 4)).ks
        assert np.allclose(ks, [-3 * np.pi / 4, -np.pi / 4, np.pi / 4, 3 * np.pi / 4])

    def test_pbc_l4(self):
        ks = momentum_grid(ising(0.5, 1.0, 4, bc=BoundaryCondition.PBC)).ks
        assert np.allclose(ks, [-np.pi, -np.pi / 2, 0.0, np.pi / 2])

    def test_abc_l250_odd_multiples(self):
        ks = momentum_grid(ising(0.5, 1.0, 250)).ks
        assert len(ks) == 250
        mult = ks * 250 / np.pi
        assert np.allclose(mult, np.round(mult))
        assert np.all(np.round(mult).astype(int) % 2 != 0)

    def test_grid_closed_under_negation(self):
        ks = momentum_grid(ising(0.5, 1.0, 12)).ks
        assert np.allclose(np.sort(-ks), ks)

    def test_odd_length_rejected(self):
        with pytest.raises(ValueError):
            ising(0.5, 1.0, 5)


class TestClausenFinite:
    def test_large_d_keeps_only_unit_distance(self):
        L = 16
        k = momentum_grid(ising(0.0, 0.0, L)).positive()[2]
        assert clausen_g(k, 60.0, L) == pytest.approx(2.0 * np.sin(k), abs=1e-12)

    def test_k_pi_on_pbc_grid_vanishes(self):
        assert clausen_g(np.pi, 0.5, 10) == pytest.approx(0.0, abs=1e-12)

    def test_pbc_momenta_always_vanish(self):
        # on PBC momenta the two halves of the ring cancel exactly
        L = 12
        for k in momentum_grid(ising(0.0, 0.0, L, bc=BoundaryCondition.PBC)).positive():
            assert clausen_g(float(k), 0.7, L) == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("d", [0.5, 1.7])
    def test_on_grid_values_approach_twice_the_series(self, d):
        # the two halves of the ring add coherently on ABC momenta, so the
        # finite sum converges to twice the infinite series; L, 3L, 9L keep
        # the same momentum on the grid
        L0, n = 10, 1
        k = np.pi * (2 * n + 1) / L0
        target = 2.0 * clausen_g_limit(k, d)
        errs = [abs(clausen_g(k, d, m * L0) - target) for m in (1, 3, 9, 27)]
        assert errs[-1] < 1e-2
        assert all(errs[i + 1] < errs[i] for i in range(len(errs) - 1))

    def test_matches_plain_loop(self):
        # independent O(L) reference evaluation
        k, d, L = 0.9, 1.3, 40
        total = 0.0
        for r in range(1, L):
            total += np.sin(k * r) / min(r, L - r) ** d
        assert clausen_g(k, d, L) == pytest.approx(total, rel=1e-13)


class TestClausenLimit:
    def test_fourier_series_closed_form_at_d1(self):
        assert clausen_g_limit(np.pi / 2, 1.0) == pytest.approx(np.pi / 4, abs=1e-12)
        for k in (0.3, 1.1, 2.9, 4.5):
            assert clausen_g_limit(k, 1.0) == pytest.approx((np.pi - k) / 2, abs=1e-12)

    def test_vanishes_at_pi(self):
        for d in (0.4, 1.0, 2.3):
            assert clausen_g_limit(np.pi, d) == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("d,k", sorted(CLAUSEN_REFERENCE))
    def test_frozen_polylog_references(self, d, k):
        assert clausen_g_limit(k, d) == pytest.approx(CLAUSEN_REFERENCE[(d, k)], abs=1e-9)

    def test_small_k_divergence_exponent(self):
        # leading behaviour ~ cos(pi d/2) Gamma(1-d) k^(d-1) for d < 1
        d = 0.5
        ks = np.array([0.005, 0.01, 0.02, 0.04])
        vals = np.array([clausen_g_limit(float(k), d) for k in ks])
        slope = np.polyfit(np.log(ks), np.log(vals), 1)[0]
        assert slope == pytest.approx(d - 1.0, abs=0.02)

    def test_divergence_error_at_k0(self):
        with pytest.raises(ValueError):
            clausen_g_limit(0.0, 0.5)

    def test_unphysical_exponent_rejected(self):
        with pytest.raises(ValueError):
            clausen_g_limit(1.0, -0.5)


class TestBlochCoefficients:
    def test_free_fermion_point(self):
        a, b = bloch_coefficients(ising(0.0, 0.0, 8), np.pi / 2)
        assert a == pytest.approx(0.0)
        assert b == pytest.approx(2j)

    def test_resonant_point(self):
        a, b = bloch_coefficients(ising(H_RES, 2.0 * np.sqrt(2.0), 8), np.pi / 4)
        assert a == pytest.approx(1j * np.sqrt(2.0))
        assert b == pytest.approx(1j * np.sqrt(2.0))

    def test_kitaev_pairing_is_clausen_sum(self):
        params = kitaev(0.1, 0.0, 2000, d=0.2)
        k = momentum_grid(params).positive()[17]
        _, b = bloch_coefficients(params, float(k))
        total = sum(np.sin(k * r) / min(r, 2000 - r) ** 0.2 for r in range(1, 2000))
        assert b == pytest.approx(1j * total, rel=1e-12)


class TestQuasiparticleEnergy:
    def test_real_tie_break(self):
        assert quasiparticle_energy(0.0, 2j) == pytest.approx(2.0)

    def test_negative_imaginary_branch(self):
        assert quasiparticle_energy(1j, 0.0) == pytest.approx(-1j)

    def test_resonant_mode_is_real(self):
        params = ising(H_RES, 1.0, 8)
        a, b = bloch_coefficients(params, np.pi / 4)
        lam = quasiparticle_energy(a, b)
        assert abs(lam.imag) < 1e-12
        assert lam.real > 0

    def test_zero_block(self):
        assert quasiparticle_energy(0.0, 0.0) == 0.0

    def test_parity_in_k(self):
        params = ising(0.8, 2.2, 64)
        for k in momentum_grid(params).positive()[::5]:
            ap, bp = bloch_coefficients(params, float(k))
            am, bm = bloch_coefficients(params, float(-k))
            assert quasiparticle_energy(ap, bp) == pytest.approx(
                quasiparticle_energy(am, bm), rel=1e-12
            )

    def test_dispersion_identity(self):
        params = kitaev(0.4, 3.0, 40, d=1.1)
        t = mode_table(params)
        assert np.max(np.abs(t.lam**2 - (t.a**2 + np.abs(t.b) ** 2))) < 1e-12 * np.max(
            np.abs(t.lam) ** 2
        )

    def test_hermitian_limit(self):
        params = ising(0.6, 0.0, 32)
        t = mode_table(params)
        expected = 2.0 * np.sqrt((0.6 - np.cos(t.ks)) ** 2 + np.sin(t.ks) ** 2)
        assert np.allclose(t.lam, expected, rtol=1e-12)
        assert np.max(np.abs(t.lam.imag)) == 0.0


class TestBogoliubov:
    def test_explicit_free_fermion_values(self):
        frag = bogoliubov(0.0, 2j, 2.0)
        assert frag.u == pytest.approx(1.0 / np.sqrt(2.0))
        assert frag.v == pytest.approx(-1j / np.sqrt(2.0))
        assert frag.norm == pytest.approx(1.0, abs=1e-12)

    def test_normalization_identity(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            a = complex(rng.normal(), rng.normal())
            b = complex(rng.normal(), rng.normal())
            lam = quasiparticle_energy(a, b)
            if b == 0:
                continue
            frag = bogoliubov(a, b, lam)
            assert abs(frag.u) ** 2 + abs(frag.v) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_block_signalled(self):
        with pytest.raises(DegenerateModeError):
            bogoliubov(1.0 + 0.5j, 0.0, quasiparticle_energy(1.0 + 0.5j, 0.0))

    def test_rotation_diagonalizes_block(self):
        # V^{-1} H V = diag(lam, -lam) on random parameter draws
        rng = np.random.default_rng(7)
        for _ in range(100):
            h = rng.uniform(0.0, 1.5)
            g = rng.uniform(0.0, 6.0)
            k = rng.uniform(0.05, np.pi - 0.05)
            params = ising(h, g, 64)
            a, b = bloch_coefficients(params, k)
            lam = quasiparticle_energy(a, b)
            frag = bogoliubov(a, b, lam)
            ratio = (lam - a) / b
            V = np.array([[frag.u, -(lam - a) / np.conj(b) * np.conj(frag.u)],
                          [ratio * frag.u, np.conj(frag.u)]])
            D = np.linalg.solve(V, bloch_block(a, b) @ V)
            assert np.allclose(D, np.diag([lam, -lam]), atol=1e-10)

    def test_det_matches_table(self):
        params = kitaev(0.3, 2.0, 24, d=0.7)
        t = mode_table(params)
        for i in range(len(t)):
            frag = bogoliubov(complex(t.a[i]), complex(t.b[i]), complex(t.lam[i]))
            assert frag.det_v == pytest.approx(complex(t.det_v[i]), rel=1e-12)


class TestSpectrumSummary:
    def test_resonance_below_critical(self):
        summary = spectrum_summary(ising(H_RES, 1.0, 250))
        assert summary.qstar is not None
        assert summary.qstar == pytest.approx(np.pi / 4, abs=2 * np.pi / 250)
        assert summary.imaginary_gap < 5e-3

    def test_gap_above_critical(self):
        summary = spectrum_summary(ising(H_RES, 4.0, 250))
        assert summary.qstar is None
        assert summary.imaginary_gap > 0.1

    def test_gap_grows_with_gamma(self):
        gaps = [spectrum_summary(ising(H_RES, g, 128)).imaginary_gap
                for g in (3.0, 3.5, 4.0, 5.0)]
        assert all(g2 > g1 for g1, g2 in zip(gaps, gaps[1:]))

    def test_unique_resonance_below_critical(self):
        params = ising(H_RES, 1.0, 100)  # q* = pi/4 lies on this grid
        t = mode_table(params)
        resonant = np.abs(t.lam.imag) < 1e-9
        assert int(np.sum(resonant)) == 1

    def test_kitaev_gapless_for_small_d(self):
        gaps = [spectrum_summary(kitaev(0.1, 5.0, L, d=0.2)).imaginary_gap
                for L in (200, 400, 800, 1600)]
        assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
        assert gaps[-1] < 0.02

    def test_lambda0_is_half_grid_sum(self):
        params = ising(0.4, 2.0, 16)
        t = mode_table(params)
        assert spectrum_summary(params).lambda0 == pytest.approx(complex(np.sum(t.lam)))


class TestCriticalGamma:
    def test_ising_values(self):
        assert critical_gamma(ising(H_RES, 1.0, 64)) == pytest.approx(2.0 * np.sqrt(2.0))
        assert critical_gamma(ising(0.0, 1.0, 64)) == pytest.approx(4.0)

    def test_no_resonance_returns_zero(self):
        assert critical_gamma(ising(1.2, 1.0, 64)) == 0.0

    def test_kitaev_direct_sum(self):
        params = kitaev(0.1, 1.0, 2000, d=1.7)
        ks = momentum_grid(params).positive()
        q = ks[np.argmin(np.abs(ks - np.arccos(0.1)))]
        direct = sum(np.sin(q * r) / min(r, 2000 - r) ** 1.7 for r in range(1, 2000))
        assert critical_gamma(params) == pytest.approx(2.0 * abs(direct), rel=1e-12)

    def test_thermodynamic_limit_consistency(self):
        # on-grid finite sums converge to twice the infinite series
        params = kitaev(0.1, 1.0, 3000, d=1.7)
        fin = critical_gamma(params)
        thermo = critical_gamma(params, thermodynamic=True)
        assert fin == pytest.approx(thermo, rel=2e-2)


class TestSmallKAsymptotics:
    def test_real_part_divergence_slope(self):
        d, h, g = 0.2, 0.1, 1.0
        ks = np.array([1e-3, 2e-3, 4e-3, 8e-3])
        vals = np.array([smallk_asymptotics(d, h, g, float(k)) for k in ks])
        slope = np.polyfit(np.log(ks), np.log(np.abs(vals.real)), 1)[0]
        assert slope == pytest.approx(d - 1.0, abs=0.05)

    def test_imaginary_part_vanishing_slope(self):
        d, h, g = 0.2, 0.1, 1.0
        ks = np.array([1e-3, 2e-3, 4e-3, 8e-3])
        vals = np.array([smallk_asymptotics(d, h, g, float(k)) for k in ks])
        slope = np.polyfit(np.log(ks), np.log(np.abs(vals.imag)), 1)[0]
        assert slope == pytest.approx(1.0 - d, abs=0.05)

    def test_reduces_to_leading_term_without_detuning(self):
        # at h = J, gamma = 0 the detuning corrections vanish identically;
        # Gamma(1/2) = sqrt(pi)
        d, k = 0.5, 1e-4
        lead = np.cos(np.pi * d / 2) * 1.7724538509055159 * k ** (d - 1)
        val = smallk_asymptotics(d, 1.0, 0.0, k)
        assert val.imag == 0.0
        assert val.real == pytest.approx(lead, rel=1e-3)

    def test_matches_exact_dispersion_at_small_k(self):
        # the exact grid dispersion carries twice the one-sided pairing
        # series (both halves of the ring add coherently), so the expansion
        # tracks Re lambda at half amplitude and Im lambda at double
        d, h, g, L = 0.2, 0.1, 1.0, 10**5
        params = kitaev(h, g, L, d=d)
        ks = momentum_grid(params).positive()[2:10]
        a, b = bloch_coefficients(params, ks)
        exact = quasiparticle_energy(np.asarray(a), np.asarray(b))
        approx = np.array([smallk_asymptotics(d, h, g, float(k)) for k in ks])
        assert np.allclose(2.0 * np.abs(approx.real), np.abs(exact.real), rtol=0.1)
        assert np.allclose(0.5 * np.abs(approx.imag), np.abs(exact.imag), rtol=0.1)
        slope_exact = np.polyfit(np.log(ks), np.log(np.abs(exact.real)), 1)[0]
        assert slope_exact == pytest.approx(d - 1.0, abs=0.05)

    def test_out_of_regime(self):
        with pytest.raises(RegimeError):
            smallk_asymptotics(1.3, 0.1, 1.0, 1e-3)


class TestDecayRateSlope:
    def test_formula_value(self):
        assert dgamma_dk_at_qstar(H_RES, 1.0) == pytest.approx(
            2.0 / np.sqrt(1.0 - 1.0 / 8.0), rel=1e-12
        )

    def test_vanishes_linearly_at_small_gamma(self):
        assert dgamma_dk_at_qstar(H_RES, 1e-6) == pytest.approx(2e-6, rel=1e-5)

    def test_four_times_the_mode_gap_slope(self):
        # finite-difference slope of Im(lambda_k) across the resonance;
        # the pair-probability decay rate is four times the mode rate
        # |Im lambda| rises linearly on both sides of the resonance (the
        # Im <= 0 branch folds the sign change), so difference one-sidedly
        h, g = H_RES, 1.0
        q = np.arccos(h)
        eps = 1e-6
        params = ising(h, g, 64)
        lam_plus = quasiparticle_energy(*bloch_coefficients(params, q + eps))
        fd_slope = abs(lam_plus.imag) / eps
        assert dgamma_dk_at_qstar(h, g) == pytest.approx(4.0 * fd_slope, rel=1e-4)

    def test_divergence_signalled_at_critical(self):
        with pytest.raises(RegimeError):
            dgamma_dk_at_qstar(H_RES, 2.0 * np.sqrt(2.0))
