import io

import numpy as np
import pytest
from numpy.testing import assert_allclose

from frustra.errors import DomainError, InstabilityError, ValidationError
from frustra.fluctuations import (
    QuadraticForm,
    analytic_nfsp_spectrum,
    analytic_np_spectrum,
    build_quadratic_hamiltonian,
    covariance,
    dump_quadratic_form,
    fsp_frustrated_mode_energy,
    fsp_site_moments,
    load_quadratic_form_matrix,
    mode_weights,
    normal_phase_mode_energies,
    photon_number,
    quadrature_labels,
    squeezing_variance,
    symplectic_form,
    symplectic_spectrum_modulus,
    williamson_diagonalize,
)
from frustra.meanfield import GroundStateSolution, Phase, solve_ground_state
from frustra.model import MeanFieldConfiguration, ModelParams, critical_point


def params(jbar, g, n=3, omega0=1.0, Omega=1.0):
    return ModelParams(omega0, Omega, jbar, g, n)


def solved_form(jbar, g, n=3, omega0=1.0, Omega=1.0):
    p = params(jbar, g, n, omega0, Omega)
    sol = solve_ground_state(p)
    return sol, p, build_quadratic_hamiltonian(sol, p)


class TestBuild:
    def test_zero_coupling_decouples_light_and_matter(self):
        sol, p, form = solved_form(0.01, 0.0)
        m = form.matrix
        for site in range(3):
            qi, Qi = 4 * site, 4 * site + 2
            assert m[qi, Qi] == 0.0
            assert m[Qi, Qi] == pytest.approx(1.0)
            assert m[qi, qi] == pytest.approx(1.0)

    def test_normal_phase_coupling_value(self):
        omega0, Omega, g = 1.3, 0.8, 0.6
        sol, p, form = solved_form(0.01, g, omega0=omega0, Omega=Omega)
        expected = -g * np.sqrt(omega0 * Omega)
        for site in range(3):
            qi, Qi = 4 * site, 4 * site + 2
            assert form.matrix[qi, Qi] == pytest.approx(expected, rel=1e-14)

    def test_fsp_coupling_signs(self):
        sol, p, form = solved_form(0.01, 1.01)
        couplings = [form.matrix[4 * site, 4 * site + 2] for site in range(3)]
        # phi_1 = 0 on the negative unpaired site flips that coupling's sign
        assert couplings[0] < 0 < couplings[1]
        assert couplings[1] == couplings[2]

    def test_hopping_appears_on_q_and_p(self):
        sol, p, form = solved_form(-0.03, 0.5)
        hop = p.jbar * p.omega0
        assert form.matrix[0, 4] == pytest.approx(hop)
        assert form.matrix[1, 5] == pytest.approx(hop)
        assert form.matrix[2, 6] == 0.0  # no atomic hopping

    def test_rejects_unconverged_solution(self):
        sol, p, _ = solved_form(0.01, 1.01)
        bad = GroundStateSolution(sol.config, sol.phase, sol.degeneracy,
                                  sol.canonical, grad_norm=1e-3)
        with pytest.raises(ValidationError):
            build_quadratic_hamiltonian(bad, p)

    def test_symmetry_validation(self):
        with pytest.raises(ValidationError):
            QuadraticForm(np.arange(16.0).reshape(4, 4), symplectic_form(2))


class TestWilliamson:
    def test_two_uncoupled_oscillators(self):
        form = QuadraticForm(np.diag([1.0, 1.0, 2.0, 2.0]), symplectic_form(2))
        decomp = williamson_diagonalize(form)
        assert_allclose(decomp.symplectic_eigenvalues, [1.0, 2.0], atol=1e-14)
        assert decomp.symplectic_residual < 1e-12

    def test_normal_phase_matches_closed_form(self):
        jbar, g = 0.01, 0.8
        sol, p, form = solved_form(jbar, g)
        decomp = williamson_diagonalize(form)
        expected = analytic_np_spectrum(g, jbar, p.omegabar)
        assert_allclose(decomp.symplectic_eigenvalues, expected, rtol=1e-10)

    def test_nfsp_matches_closed_form(self):
        jbar = -0.01
        gc = critical_point(jbar, 3, "negative")
        g = 1.1 * gc
        sol, p, form = solved_form(jbar, g)
        decomp = williamson_diagonalize(form)
        expected = analytic_nfsp_spectrum(g, jbar, p.omegabar)
        assert_allclose(decomp.symplectic_eigenvalues, expected, rtol=1e-10)

    def test_fsp_lowest_matches_pair_difference_energy(self):
        jbar = 0.01
        gc = critical_point(jbar, 3, "positive")
        g = 1.01 * gc
        sol, p, form = solved_form(jbar, g)
        decomp = williamson_diagonalize(form)
        expected = fsp_frustrated_mode_energy(g, jbar, p.omegabar,
                                              sol.config.alphas[1])
        assert abs(decomp.symplectic_eigenvalues[0] - expected) < 1e-8

    def test_invariants_and_cross_routes(self):
        rng = np.random.default_rng(9)
        for _ in range(8):
            n = int(rng.choice([3, 5]))
            jbar = float(rng.uniform(-0.3, 0.6))
            gc = critical_point(jbar, n, "negative" if jbar < 0 else "positive")
            g = float(rng.uniform(0.2, 0.97)) * gc
            sol, p, form = solved_form(jbar, g, n)
            decomp = williamson_diagonalize(form)
            omega = form.symplectic_form
            s_mat = decomp.symplectic_matrix
            assert np.max(np.abs(s_mat @ omega @ s_mat.T - omega)) < 1e-10
            target = np.diag(np.repeat(decomp.symplectic_eigenvalues, 2))
            assert np.max(np.abs(s_mat @ form.matrix @ s_mat.T - target)) < 1e-9
            assert_allclose(decomp.symplectic_eigenvalues,
                            symplectic_spectrum_modulus(form), atol=1e-10)

    def test_unstable_form_raises_with_direction(self):
        # a stale normal-phase mean field past the critical point
        p = params(0.01, 1.2)
        config = MeanFieldConfiguration.from_alphas(np.zeros(3), p.g, p.jbar)
        stale = GroundStateSolution(config, Phase.NORMAL, 1, True, 0.0)
        form = build_quadratic_hamiltonian(stale, p)
        with pytest.raises(InstabilityError):
            williamson_diagonalize(form)

    def test_critical_regime_flag(self):
        # synthetic nearly-soft oscillator next to a hard one
        soft = 3e-9
        form = QuadraticForm(np.diag([soft, soft, 1.0, 1.0]), symplectic_form(2),
                             omega0=1.0)
        decomp = williamson_diagonalize(form)
        assert decomp.critical_regime
        assert decomp.symplectic_eigenvalues[0] == pytest.approx(soft, rel=1e-10)
        sol, p, hard = solved_form(0.01, 0.9)
        assert not williamson_diagonalize(hard).critical_regime


class TestAnalyticSpectra:
    def test_bare_frequencies_at_zero_coupling(self):
        spec = analytic_np_spectrum(0.0, 0.0, omegabar=2.0)
        assert_allclose(spec, [1.0, 1.0, 1.0, 2.0, 2.0, 2.0], atol=1e-14)

    def test_momentum_pair_degeneracy(self):
        k = 2 * np.pi / 3
        lo_p, hi_p = normal_phase_mode_energies(0.7, 0.05, 1.0, k)
        lo_m, hi_m = normal_phase_mode_energies(0.7, 0.05, 1.0, -k)
        assert lo_p == lo_m and hi_p == hi_m

    def test_np_gap_closes_at_negative_critical_point(self):
        jbar = -0.01
        gc = critical_point(jbar, 3, "negative")
        lo, _ = normal_phase_mode_energies(gc * (1 - 1e-10), jbar, 1.0, 0.0)
        assert lo < 2e-5

    def test_np_gap_closes_at_positive_critical_point_with_degeneracy(self):
        jbar = 0.01
        gc = critical_point(jbar, 3, "positive")
        spec = analytic_np_spectrum(gc * (1 - 1e-10), jbar, 1.0)
        assert spec[0] < 2e-5 and spec[1] < 2e-5  # two-fold degenerate pair

    def test_np_domain_error_past_threshold(self):
        jbar = 0.01
        gc = critical_point(jbar, 3, "positive")
        with pytest.raises(DomainError):
            analytic_np_spectrum(1.01 * gc, jbar, 1.0)

    def test_nfsp_gap_exponent_half(self):
        jbar = -0.01
        gc = critical_point(jbar, 3, "negative")
        lo1 = analytic_nfsp_spectrum(gc * (1 + 1e-6), jbar, 1.0)[0]
        lo2 = analytic_nfsp_spectrum(gc * (1 + 4e-6), jbar, 1.0)[0]
        assert lo2 / lo1 == pytest.approx(2.0, rel=1e-3)

    def test_nfsp_upper_branch_grows_quadratically(self):
        jbar = -0.01
        hi1 = analytic_nfsp_spectrum(2.0, jbar, 1.0)[-1]
        hi2 = analytic_nfsp_spectrum(4.0, jbar, 1.0)[-1]
        assert hi2 / hi1 == pytest.approx(4.0, rel=0.05)

    def test_nfsp_domain(self):
        with pytest.raises(DomainError):
            analytic_nfsp_spectrum(0.9, -0.01, 1.0)
        with pytest.raises(DomainError):
            analytic_nfsp_spectrum(1.2, +0.01, 1.0)

    def test_frustrated_energy_vanishes_at_threshold(self):
        jbar = 0.05
        assert fsp_frustrated_mode_energy(
            critical_point(jbar, 3, "positive"), jbar, 1.0, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_frustrated_energy_slope(self):
        jbar, omegabar = 0.01, 1.0
        gc = critical_point(jbar, 3, "positive")
        slope = 2.0 * np.sqrt((1 - jbar) * (2 + jbar)
                              / (3 * jbar * ((1 - jbar) ** 2 + omegabar ** 2)))
        dg = 1e-7
        sol = solve_ground_state(params(jbar, gc + dg))
        eps = fsp_frustrated_mode_energy(gc + dg, jbar, omegabar,
                                         sol.config.alphas[1])
        assert eps / dg == pytest.approx(slope, rel=1e-2)

    def test_frustrated_energy_errors(self):
        with pytest.raises(DomainError):
            fsp_frustrated_mode_energy(1.1, -0.01, 1.0, 0.1)
        with pytest.raises(InstabilityError):
            # far-too-small pair coherence at strong coupling: unstable sector
            fsp_frustrated_mode_energy(1.4, 0.01, 1.0, 0.0)


class TestCovariance:
    def test_vacuum_for_decoupled_bare_oscillators(self):
        sol, p, form = solved_form(0.0, 0.0)
        cov = covariance(williamson_diagonalize(form))
        assert_allclose(cov.matrix, 0.5 * np.eye(12), atol=1e-12)
        for site in (1, 2, 3):
            assert photon_number(cov, site) == pytest.approx(0.0, abs=1e-12)
            assert squeezing_variance(cov, site) == pytest.approx(0.5, abs=1e-12)

    def test_translational_symmetry_of_photon_numbers(self):
        sol, p, form = solved_form(0.01, 0.9)
        cov = covariance(williamson_diagonalize(form))
        values = [photon_number(cov, site) for site in (1, 2, 3)]
        assert np.ptp(values) < 1e-11
        assert values[0] > 0

    def test_cavity_variance_diverges_towards_threshold(self):
        jbar = -0.02
        gc = critical_point(jbar, 3, "negative")
        variances = []
        for g in (0.9 * gc, 0.999 * gc, 0.9999 * gc):
            sol, p, form = solved_form(jbar, g)
            cov = covariance(williamson_diagonalize(form))
            variances.append(squeezing_variance(cov, 1))
        assert variances[0] < variances[1] < variances[2]
        assert variances[2] > 5 * variances[0]

    def test_physicality_on_random_stable_draws(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            n = int(rng.choice([3, 5]))
            jbar = float(rng.uniform(-0.3, 0.6))
            sign = "negative" if jbar < 0 else "positive"
            gc = critical_point(jbar, n, sign)
            stable_side = rng.uniform(0.2, 0.95) * gc if rng.random() < 0.5 \
                else gc * (1 + rng.uniform(0.005, 0.2))
            try:
                sol, p, form = solved_form(jbar, float(stable_side), n)
            except ValidationError:
                continue
            cov = covariance(williamson_diagonalize(form))
            scale = max(1.0, np.max(np.abs(cov.matrix)))
            assert cov.physicality_defect() > -1e-10 * scale

    def test_site_range_checked(self):
        sol, p, form = solved_form(0.01, 0.9)
        cov = covariance(williamson_diagonalize(form))
        with pytest.raises(DomainError):
            photon_number(cov, 0)
        with pytest.raises(DomainError):
            squeezing_variance(cov, 4)

    def test_fsp_site_one_smaller_than_pair(self):
        jbar = 0.01
        gc = critical_point(jbar, 3, "positive")
        sol, p, form = solved_form(jbar, gc * (1 + 1e-3))
        cov = covariance(williamson_diagonalize(form))
        n1 = photon_number(cov, 1)
        n2 = photon_number(cov, 2)
        assert photon_number(cov, 3) == pytest.approx(n2, rel=1e-9)
        assert n1 < n2 / 3


class TestModeWeights:
    def test_trimer_frustrated_mode(self):
        jbar = 0.01
        gc = critical_point(jbar, 3, "positive")
        sol, p, form = solved_form(jbar, gc * (1 + 1e-3))
        decomp = williamson_diagonalize(form)
        frustrated = mode_weights(decomp, 1)
        assert abs(frustrated.cavity[0]) < 1e-12
        assert abs(frustrated.atom[0]) < 1e-12
        assert frustrated.cavity[1] == pytest.approx(-frustrated.cavity[2], abs=1e-12)
        assert frustrated.atom[1] == pytest.approx(-frustrated.atom[2], abs=1e-12)
        assert np.linalg.norm(frustrated.weights) == pytest.approx(1.0)

    def test_trimer_mean_field_mode(self):
        jbar = 0.01
        gc = critical_point(jbar, 3, "positive")
        sol, p, form = solved_form(jbar, gc * (1 + 1e-3))
        decomp = williamson_diagonalize(form)
        mf = mode_weights(decomp, 2)
        assert np.min(np.abs(mf.cavity)) > 1e-3  # support on all sites
        assert mf.cavity[1] == pytest.approx(mf.cavity[2], abs=1e-10)

    @pytest.mark.parametrize("n", [5, 7])
    def test_unpaired_site_decouples_for_larger_rings(self, n):
        jbar = 0.01
        gc = critical_point(jbar, n, "positive")
        sol, p, form = solved_form(jbar, gc * (1 + 1e-3), n)
        decomp = williamson_diagonalize(form)
        frustrated = mode_weights(decomp, 1)
        assert abs(frustrated.cavity[0]) < 1e-10
        assert abs(frustrated.atom[0]) < 1e-10
        for j in range(1, (n - 1) // 2 + 1):
            assert frustrated.cavity[j] == pytest.approx(-frustrated.cavity[n - j], abs=1e-9)

    def test_sign_convention_deterministic(self):
        sol, p, form = solved_form(0.01, 0.9)
        decomp = williamson_diagonalize(form)
        for mode in range(1, 7):
            weights = mode_weights(decomp, mode).weights
            leading = weights[np.abs(weights) > 1e-7][0]
            assert leading > 0

    def test_mode_index_range(self):
        sol, p, form = solved_form(0.01, 0.9)
        decomp = williamson_diagonalize(form)
        with pytest.raises(DomainError):
            mode_weights(decomp, 0)
        with pytest.raises(DomainError):
            mode_weights(decomp, 7)


class TestSymmetryInvariance:
    def test_spectrum_invariant_under_site_relabeling(self):
        # translationally symmetric phase: rotating the labels is a no-op
        jbar, g = -0.02, 1.06
        sol, p, form = solved_form(jbar, g)
        base = williamson_diagonalize(form).symplectic_eigenvalues
        rolled = MeanFieldConfiguration.from_alphas(
            np.roll(sol.config.alphas, 1), g, jbar)
        rolled_sol = GroundStateSolution(rolled, sol.phase, sol.degeneracy,
                                         False, sol.grad_norm)
        rolled_form = build_quadratic_hamiltonian(rolled_sol, p)
        rolled_eps = williamson_diagonalize(rolled_form).symplectic_eigenvalues
        assert_allclose(base, rolled_eps, rtol=1e-12)

    def test_fsp_orbit_shares_spectrum_and_permuted_moments(self):
        from frustra.meanfield import enumerate_degenerate_ground_states

        jbar = 0.01
        gc = critical_point(jbar, 3, "positive")
        p = params(jbar, gc * 1.01)
        members = enumerate_degenerate_ground_states(p)
        spectra, photon_sets = [], []
        for member in members:
            sol = GroundStateSolution(member, Phase.FSP, 6, False, 0.0)
            decomp = williamson_diagonalize(build_quadratic_hamiltonian(sol, p))
            spectra.append(decomp.symplectic_eigenvalues)
            cov = covariance(decomp)
            photon_sets.append(sorted(photon_number(cov, s) for s in (1, 2, 3)))
        for eps in spectra[1:]:
            assert_allclose(eps, spectra[0], rtol=1e-9)
        for values in photon_sets[1:]:
            assert_allclose(values, photon_sets[0], rtol=1e-8)


class TestSectorMoments:
    def test_matches_full_covariance_at_moderate_coupling(self):
        jbar = 0.01
        for n in (3, 5):
            gc = critical_point(jbar, n, "positive")
            p = params(jbar, gc * (1 + 3e-3), n)
            sol = solve_ground_state(p)
            moments = fsp_site_moments(sol, p)
            cov = covariance(williamson_diagonalize(build_quadratic_hamiltonian(sol, p)))
            for site in range(1, n + 1):
                assert moments.photon(site) == pytest.approx(
                    photon_number(cov, site), rel=1e-9)
                assert moments.squeezing(site) == pytest.approx(
                    squeezing_variance(cov, site), rel=1e-9)

    def test_deep_point_keeps_unpaired_site(self):
        # far below resolution for the frustrated sector at N=7
        jbar = 0.01
        gc = critical_point(jbar, 7, "positive")
        p = params(jbar, gc * (1 + 1e-6), 7)
        sol = solve_ground_state(p)
        moments = fsp_site_moments(sol, p)
        assert not moments.frustrated_resolved
        assert np.isfinite(moments.photon(1))
        assert np.isnan(moments.photon(2))


class TestMatrixDump:
    def test_round_trip(self):
        sol, p, form = solved_form(0.01, 1.01)
        buffer = io.StringIO()
        dump_quadratic_form(form, buffer)
        buffer.seek(0)
        loaded = load_quadratic_form_matrix(buffer)
        assert np.array_equal(loaded, form.matrix)

    def test_header_names_ordering(self):
        sol, p, form = solved_form(0.01, 0.9)
        buffer = io.StringIO()
        dump_quadratic_form(form, buffer)
        header = buffer.getvalue().splitlines()[0]
        assert header.startswith("# quadrature ordering: ")
        assert "q1,p1,Q1,P1,q2" in header
        assert quadrature_labels(3)[-1] == "P3"


class TestGenericRoute:
    def test_position_momentum_coupled_form(self):
        # a phase-space rotation of a squeezed oscillator produces genuine
        # q-p coupling, forcing the generic Cholesky/Schur construction;
        # invariants must still hold
        base = np.diag([1.0, 1.5, 2.0, 2.0, 0.7, 0.7, 1.3, 1.3])
        theta = 0.3
        rot = np.eye(8)
        rot[0, 0] = rot[1, 1] = np.cos(theta)
        rot[0, 1] = theta_s = np.sin(theta)
        rot[1, 0] = -theta_s
        matrix = rot.T @ base @ rot
        assert abs(matrix[0, 1]) > 0.1  # split structure really is broken
        form = QuadraticForm(matrix, symplectic_form(4), omega0=1.0)
        decomp = williamson_diagonalize(form)
        omega = form.symplectic_form
        s_mat = decomp.symplectic_matrix
        assert np.max(np.abs(s_mat @ omega @ s_mat.T - omega)) < 1e-10
        target = np.diag(np.repeat(decomp.symplectic_eigenvalues, 2))
        assert np.max(np.abs(s_mat @ matrix @ s_mat.T - target)) < 1e-9
        assert_allclose(decomp.symplectic_eigenvalues,
                        symplectic_spectrum_modulus(form), atol=1e-10)
        with pytest.raises(ValidationError):
            mode_weights(decomp, 1)  # weights need the split structure


class TestMeanFieldModeExpansion:
    def test_second_lowest_follows_sqrt_law(self):
        # eps_mf = 2 omega0 sqrt((1-jbar)^(3/2) / ((1-jbar)^2 + omegabar^2))
        #          * (g - gc)^(1/2) to leading order
        jbar, omegabar = 0.01, 1.0
        gc = critical_point(jbar, 3, "positive")
        dg = 1e-7
        sol, p, form = solved_form(jbar, gc + dg)
        eps_mf = williamson_diagonalize(form).symplectic_eigenvalues[1]
        prefactor = 2.0 * np.sqrt((1 - jbar) ** 1.5 / ((1 - jbar) ** 2 + omegabar ** 2))
        assert eps_mf == pytest.approx(prefactor * np.sqrt(dg), rel=1e-3)

    def test_angle_relations_of_configurations(self):
        sol, p, form = solved_form(0.01, 1.02)
        config = sol.config
        for alpha, theta, phi in zip(config.alphas, config.thetas, config.phis):
            assert np.cos(phi) == pytest.approx(-np.sign(alpha) if alpha else 1.0)
            assert np.cos(theta) == pytest.approx(
                -1.0 / np.sqrt(1.0 + 4.0 * p.g ** 2 * alpha * alpha), rel=1e-14)
